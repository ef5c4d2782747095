use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("memo integrity violated for {key}: stored {stored}, new {new}")]
    MemoConflict {
        key: String,
        stored: String,
        new: String,
    },

    #[error("cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("genus-0 oracle called on {0:?}, whose inferred genus is not 0")]
    NotGenusZero(Vec<u32>),

    #[error("unsupported profile {0}: no identity is tabulated for it")]
    UnsupportedProfile(String),

    #[error("inadmissible degree: sum of d = {sum} with n = {n} and codimension {codim} gives no integer genus")]
    InadmissibleDegree { sum: u64, n: usize, codim: u64 },

    #[error("kappa_0 appears in the expansion but no ambient (g, n) was supplied")]
    KappaZeroWithoutAmbient,

    #[error("invalid dual graph: {0}")]
    InvalidGraph(String),

    #[error("decoration shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("beta monomial undefined: {0}")]
    BetaDomain(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid ribbon graph: {0}")]
    InvalidRibbon(String),

    #[error("enumeration not feasible: {0}")]
    Feasibility(String),

    #[error("degenerate perimeters: {0}")]
    DegeneratePerimeters(String),
}

pub type Result<T> = std::result::Result<T, Error>;
