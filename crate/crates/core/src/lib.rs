//! Exact intersection theory on moduli spaces of pointed stable curves.
//!
//! * [`engine`]: psi-class brackets by string, dilaton and Virasoro recursion.
//! * [`kappa`]: Mumford kappa classes and mixed psi/kappa integrals.
//! * [`boundary`]: dual graphs and pushforward integrals of boundary strata.
//! * [`dfiz`]: the derivative identities and integrals over combinatorial cycles.
//! * [`tu_system`]: the `T`/`U` functions and the three-equation determinant check.
//! * [`ribbon`]: ribbon graphs, small enumerations and the point count on `M_{0,4}`.
//!
//! All values are exact [`Rational`]s.

pub mod boundary;
pub mod combinatorics;
pub mod dfiz;
pub mod engine;
pub mod error;
pub mod kappa;
pub mod rational;
pub mod ribbon;
pub mod tu_system;
pub mod verify;

pub use engine::{genus0_oracle, phi, IntersectionEngine, TauBracket};
pub use error::{Error, Result};
pub use rational::Rational;
