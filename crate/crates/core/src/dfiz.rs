//! Derivative identities expressing s-derivatives of the free energy through
//! t-derivatives, coefficient extraction for integrals over the combinatorial
//! cycles `W_{m*,n}`, and the algebro-geometric candidates in low codimension.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::boundary::{
    delta_integral, graphs_a, graphs_b, graphs_c, graphs_d, irreducible_graph, pushforward_integral,
    separating_graph, separating_graphs, Decoration,
};
use crate::combinatorics::assignments;
use crate::engine::IntersectionEngine;
use crate::error::{Error, Result};
use crate::kappa::{mixed_integral, r_polynomial, KappaMonomial, KappaPolynomial};
use crate::rational::{double_factorial, factorial, int, parse_rational, ratio, zero, Rational};

pub const TABLE_HEADER: &str = "dfiz-table v1";

static TABLE_SOURCE: &str = include_str!("../data/dfiz_table.txt");

/// Index `i` to exponent; zero exponents are never stored.
pub type MultiIndex = BTreeMap<u32, u32>;

pub fn index_weight(mu: &MultiIndex) -> u32 {
    mu.iter().map(|(&i, &e)| (2 * i + 1) * e).sum()
}

fn parse_multi_index(s: &str) -> std::result::Result<MultiIndex, String> {
    let mut mu = MultiIndex::new();
    for pair in s.split(',') {
        let (i, e) = pair.split_once(':').ok_or_else(|| format!("expected i:exp, got {pair:?}"))?;
        let i: u32 = i.trim().parse().map_err(|_| format!("bad index {i:?}"))?;
        let e: u32 = e.trim().parse().map_err(|_| format!("bad exponent {e:?}"))?;
        if e == 0 {
            return Err(format!("zero exponent in {pair:?}"));
        }
        if mu.insert(i, e).is_some() {
            return Err(format!("index {i} repeated"));
        }
    }
    Ok(mu)
}

fn format_multi_index(mu: &MultiIndex) -> String {
    mu.iter().map(|(i, e)| format!("{i}:{e}")).join(",")
}

/// `coefficient * prod over factors of (prod_i (d/dt_i)^{mu_i}) F`.
/// An empty factor list is a constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeTerm {
    pub coefficient: Rational,
    pub factors: Vec<MultiIndex>,
}

impl DerivativeTerm {
    pub fn weight(&self) -> u32 {
        self.factors.iter().map(index_weight).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfizIdentity {
    pub nu: MultiIndex,
    pub terms: Vec<DerivativeTerm>,
}

impl DfizIdentity {
    pub fn top_weight(&self) -> u32 {
        index_weight(&self.nu)
    }

    pub fn profile(&self) -> ValenceProfile {
        ValenceProfile { higher: self.nu.clone() }
    }
}

/// Parses the identity table text format.
pub fn parse_table(src: &str) -> Result<Vec<DfizIdentity>> {
    let mut lines = src.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let bad = |line: usize, what: String| Error::Parse(format!("identity table line {line}: {what}"));
    match lines.by_ref().find(|(_, l)| !l.is_empty() && !l.starts_with('#')) {
        Some((_, TABLE_HEADER)) => {}
        Some((no, other)) => return Err(bad(no, format!("expected header, got {other:?}"))),
        None => return Err(bad(0, "empty table".into())),
    }
    let mut out: Vec<DfizIdentity> = Vec::new();
    for (no, line) in lines {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(nu) = line.strip_prefix("nu=") {
            let nu = parse_multi_index(nu).map_err(|e| bad(no, e))?;
            out.push(DfizIdentity { nu, terms: Vec::new() });
            continue;
        }
        let current = out.last_mut().ok_or_else(|| bad(no, "term before any nu= line".into()))?;
        let (c, facs) = line.split_once(';').ok_or_else(|| bad(no, "expected coeff;factors".into()))?;
        let coefficient = parse_rational(c).map_err(|e| bad(no, e.to_string()))?;
        let factors = if facs.trim().is_empty() {
            Vec::new()
        } else {
            facs.split('|')
                .map(parse_multi_index)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| bad(no, e))?
        };
        current.terms.push(DerivativeTerm { coefficient, factors });
    }
    Ok(out)
}

/// Renders identities back into the table format.
pub fn format_table(ids: &[DfizIdentity]) -> String {
    let mut s = format!("{TABLE_HEADER}\n");
    for id in ids {
        s.push_str(&format!("\nnu={}\n", format_multi_index(&id.nu)));
        for t in &id.terms {
            let f = t.factors.iter().map(format_multi_index).join("|");
            s.push_str(&format!("{};{}\n", t.coefficient, f));
        }
    }
    s
}

/// The eleven identities, valid at `s = (0, 1, 0, ...)`, in order of weight.
pub fn identity_table() -> &'static [DfizIdentity] {
    static TABLE: OnceLock<Vec<DfizIdentity>> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(TABLE_SOURCE).expect("bundled identity table parses"))
}

pub fn find_identity(profile: &ValenceProfile) -> Result<&'static DfizIdentity> {
    identity_table()
        .iter()
        .find(|id| id.nu == profile.higher)
        .ok_or_else(|| Error::UnsupportedProfile(profile.to_string()))
}

/// `prod_i (2^i (2i-1)!!)^{nu_i}`.
pub fn top_coefficient(nu: &MultiIndex) -> BigInt {
    let mut c = BigInt::one();
    for (&i, &e) in nu {
        let base = BigInt::from(2u32).pow(i) * double_factorial(2 * i as i64 - 1);
        c *= base.pow(e);
    }
    c
}

/// Every weight is at most the top weight and congruent to it mod 3, and the
/// unique top-weight term is the expected multiple of the single factor `nu`.
pub fn structural_check(identity: &DfizIdentity) -> bool {
    let top = identity.top_weight();
    let mut top_terms = Vec::new();
    for t in &identity.terms {
        let w = t.weight();
        if w > top || (top - w) % 3 != 0 {
            return false;
        }
        if w == top {
            top_terms.push(t);
        }
    }
    match top_terms.as_slice() {
        [t] => {
            t.factors.len() == 1
                && t.factors[0] == identity.nu
                && t.coefficient == Rational::from_integer(top_coefficient(&identity.nu))
        }
        _ => false,
    }
}

/// The higher part `(m_2, m_3, ...)` of a valence profile; `m_1` is derived from `(g, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValenceProfile {
    higher: MultiIndex,
}

impl ValenceProfile {
    pub fn new(pairs: &[(u32, u32)]) -> Result<Self> {
        let mut higher = MultiIndex::new();
        for &(i, e) in pairs {
            if i < 2 {
                return Err(Error::OutOfRange(format!("profile index {i}: only i >= 2 is given, m_1 is derived")));
            }
            if e > 0 {
                *higher.entry(i).or_insert(0) += e;
            }
        }
        Ok(ValenceProfile { higher })
    }

    pub fn higher(&self) -> &MultiIndex {
        &self.higher
    }

    /// `k = sum (i-1) m_i`.
    pub fn codimension(&self) -> u32 {
        self.higher.iter().map(|(&i, &e)| (i - 1) * e).sum()
    }

    /// `m_1 = 4g - 4 + 2n - sum_{i>=2} (2i-1) m_i`.
    pub fn m1(&self, g: u32, n: usize) -> i64 {
        4 * g as i64 - 4 + 2 * n as i64 - self.higher.iter().map(|(&i, &e)| (2 * i as i64 - 1) * e as i64).sum::<i64>()
    }

    /// Vertex count `m_1 + sum_{i>=2} m_i` forced by `(g, n)`.
    pub fn vertex_count(&self, g: u32, n: usize) -> i64 {
        self.m1(g, n) + self.higher.values().map(|&e| e as i64).sum::<i64>()
    }

    /// `prod m_i!`.
    pub fn factorial_norm(&self) -> BigInt {
        self.higher.values().map(|&e| factorial(e as u64)).product()
    }

    /// Genus with `sum d = 3g - 3 + n - k`.
    pub fn genus_for(&self, d: &[u32]) -> Result<u32> {
        let sum: u64 = d.iter().map(|&x| x as u64).sum();
        let k = self.codimension() as u64;
        let t = sum as i64 + 3 - d.len() as i64 + k as i64;
        if d.is_empty() || t < 0 || t % 3 != 0 {
            return Err(Error::InadmissibleDegree { sum, n: d.len(), codim: k });
        }
        Ok((t / 3) as u32)
    }
}

impl fmt::Display for ValenceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_multi_index(&self.higher))
    }
}

impl FromStr for ValenceProfile {
    type Err = Error;

    /// `i:m_i` pairs over `i >= 2`, e.g. `2:1,3:1`.
    fn from_str(s: &str) -> Result<Self> {
        let mu = parse_multi_index(s).map_err(|e| Error::Parse(format!("profile {s:?}: {e}")))?;
        let pairs: Vec<(u32, u32)> = mu.into_iter().collect();
        ValenceProfile::new(&pairs)
    }
}

/// Coefficient of `prod t_{d_i}` in the right-hand side, evaluated by assigning
/// the labelled markers to factors in every possible way.
pub fn coefficient_rhs(engine: &IntersectionEngine, identity: &DfizIdentity, d: &[u32]) -> Rational {
    let n = d.len();
    let mut total = zero();
    for term in &identity.terms {
        if term.is_constant() {
            if n == 0 {
                total += &term.coefficient;
            }
            continue;
        }
        let base: Vec<Vec<u32>> = term
            .factors
            .iter()
            .map(|mu| mu.iter().flat_map(|(&i, &e)| std::iter::repeat_n(i, e as usize)).collect())
            .collect();
        for assign in assignments(n, term.factors.len()) {
            let mut value = term.coefficient.clone();
            for (f, ins) in base.iter().enumerate() {
                let mut full = ins.clone();
                full.extend((0..n).filter(|&j| assign[j] == f).map(|j| d[j]));
                value *= engine.tau_auto(&full);
                if value.is_zero() {
                    break;
                }
            }
            total += value;
        }
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WValue {
    pub genus: u32,
    pub m1: i64,
    pub value: Rational,
}

/// `int_{W_{m*,n}} prod psi_i^{d_i}` with `n = d.len()`.
pub fn w_integral(engine: &IntersectionEngine, profile: &ValenceProfile, d: &[u32]) -> Result<WValue> {
    let id = find_identity(profile)?;
    let genus = profile.genus_for(d)?;
    let value = coefficient_rhs(engine, id, d) / Rational::from_integer(profile.factorial_norm());
    Ok(WValue { genus, m1: profile.m1(genus, d.len()), value })
}

/// Terms without boundary contributions: single factors free of `t_0, t_1`
/// whose bracket stays in the ambient genus.
pub fn kappa_part(profile: &ValenceProfile) -> Result<KappaPolynomial> {
    let id = find_identity(profile)?;
    let k = profile.codimension();
    let mut out = KappaPolynomial::zero();
    for t in &id.terms {
        let [mu] = t.factors.as_slice() else { continue };
        if mu.contains_key(&0) || mu.contains_key(&1) {
            continue;
        }
        if mu.iter().map(|(&i, &e)| (i - 1) * e).sum::<u32>() != k {
            continue;
        }
        let b: Vec<u32> = mu.iter().flat_map(|(&i, &e)| std::iter::repeat_n(i - 1, e as usize)).collect();
        out.add(&r_polynomial(&b)?.scale(&t.coefficient));
    }
    Ok(out.scale(&Rational::new(BigInt::one(), profile.factorial_norm())))
}

/// Every tabulated profile with its kappa part, by codimension then weight.
pub fn kappa_table() -> Vec<(ValenceProfile, KappaPolynomial)> {
    let mut rows: Vec<(ValenceProfile, KappaPolynomial)> = identity_table()
        .iter()
        .map(|id| {
            let p = id.profile();
            let k = kappa_part(&p).expect("tabulated profile");
            (p, k)
        })
        .collect();
    rows.sort_by_key(|(p, _)| p.codimension());
    rows
}

fn kmono(ix: &[u32]) -> KappaMonomial {
    KappaMonomial::new(ix)
}

/// `int_{M_{g,n}} X_{m*,n} prod psi_i^{d_i}` for the candidate classes of
/// codimension at most two, built from kappa classes and decorated boundary strata.
pub fn x_class_integral(engine: &IntersectionEngine, profile: &ValenceProfile, g: u32, d: &[u32]) -> Result<Rational> {
    let n = d.len();
    let inferred = profile.genus_for(d)?;
    if inferred != g {
        let sum = d.iter().map(|&x| x as u64).sum();
        return Err(Error::InadmissibleDegree { sum, n, codim: profile.codimension() as u64 });
    }
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::OutOfRange(format!("M_{{{g},{n}}} is not stable")));
    }
    let pf = |graph: &crate::boundary::DualGraph, dec: &Decoration| pushforward_integral(engine, g, n, graph, dec, d);
    let higher: Vec<(u32, u32)> = profile.higher().iter().map(|(&i, &e)| (i, e)).collect();
    match higher.as_slice() {
        [(2, 1)] => {
            // 12 kappa_1 - delta
            Ok(int(12) * mixed_integral(engine, g, d, &kmono(&[1])) - delta_integral(engine, g, n, d)?)
        }
        [(3, 1)] => {
            // 120 kappa_2 - 6 xi_irr(psi_{n+1}) - 6 sum xi_{p,I}(psi_{h+1} x 1) + 30 xi_{1,0}(psi_1 x 1)
            let mut total = int(120) * mixed_integral(engine, g, d, &kmono(&[2]));
            if let Some(gr) = irreducible_graph(g, n) {
                total -= int(6) * pf(&gr, &Decoration::trivial(&gr).with_psi(0, n))?;
            }
            for gr in separating_graphs(g, n) {
                let slot = gr.vertices[0].markers.len();
                total -= int(6) * pf(&gr, &Decoration::trivial(&gr).with_psi(0, slot))?;
            }
            if let Some(gr) = separating_graph(g, n, 1, &[]) {
                total += int(30) * pf(&gr, &Decoration::trivial(&gr).with_psi(0, 0))?;
            }
            Ok(total)
        }
        [(2, 2)] => {
            let mut total = int(72) * mixed_integral(engine, g, d, &kmono(&[1, 1]))
                - int(348) * mixed_integral(engine, g, d, &kmono(&[2]));
            if let Some(gr) = irreducible_graph(g, n) {
                total -= int(6) * pf(&gr, &Decoration::trivial(&gr).with_kappa(0, &[1]))?;
                total += int(12) * pf(&gr, &Decoration::trivial(&gr).with_psi(0, n + 1))?;
            }
            for gr in separating_graphs(g, n) {
                let slot = gr.vertices[1].markers.len();
                total -= int(12) * pf(&gr, &Decoration::trivial(&gr).with_kappa(1, &[1]))?;
                total += int(12) * pf(&gr, &Decoration::trivial(&gr).with_psi(1, slot))?;
            }
            let families = [
                (graphs_a(g, n), ratio(1, 8)),
                (graphs_b(g, n), ratio(1, 2)),
                (graphs_c(g, n), ratio(1, 2)),
                (graphs_d(g, n), ratio(1, 4)),
            ];
            for (graphs, c) in families {
                for gr in graphs {
                    total += &c * pf(&gr, &Decoration::trivial(&gr))?;
                }
            }
            if let Some(gr) = separating_graph(g, n, 1, &[]) {
                total -= int(36) * pf(&gr, &Decoration::trivial(&gr).with_psi(0, 0))?;
            }
            Ok(total)
        }
        _ => Err(Error::UnsupportedProfile(format!(
            "{profile}: boundary terms are only available in codimension at most 2"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(s: &str) -> ValenceProfile {
        s.parse().unwrap()
    }

    #[test]
    fn table_shape() {
        let t = identity_table();
        assert_eq!(t.len(), 11);
        let counts: Vec<usize> = t.iter().map(|id| id.terms.len()).collect();
        assert_eq!(counts, vec![3, 4, 10, 11, 12, 22, 24, 37, 24, 36, 41]);
        let s3 = find_identity(&prof("3:1")).unwrap();
        assert!(s3
            .terms
            .iter()
            .any(|t| t.coefficient == ratio(5, 4) && t.factors == vec![parse_multi_index("0:1").unwrap()]));
    }

    #[test]
    fn table_round_trips() {
        let t = identity_table();
        assert_eq!(parse_table(&format_table(t)).unwrap(), t);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_table("nope\n").is_err());
        assert!(parse_table("dfiz-table v1\n1;0:1\n").is_err());
        assert!(parse_table("dfiz-table v1\nnu=2:1\n1;0:0\n").is_err());
    }

    #[test]
    fn structure() {
        for id in identity_table() {
            assert!(structural_check(id), "nu = {:?}", id.nu);
        }
        let mut bad = find_identity(&prof("2:1")).unwrap().clone();
        bad.terms.push(DerivativeTerm { coefficient: int(1), factors: vec![parse_multi_index("1:1").unwrap()] });
        assert!(!structural_check(&bad));
        assert_eq!(top_coefficient(&parse_multi_index("7:1").unwrap()), BigInt::from(17297280));
    }

    #[test]
    fn profiles() {
        let p = prof("2:1");
        assert_eq!(p.m1(0, 4), 1);
        assert_eq!(p.vertex_count(0, 4), 2);
        assert_eq!(p.vertex_count(1, 1), 0);
        assert!(ValenceProfile::new(&[(1, 2)]).is_err());
        assert_eq!(prof("3:1,2:1").to_string(), "2:1,3:1");
    }

    #[test]
    fn worked_values() {
        let e = IntersectionEngine::new();
        let s2 = find_identity(&prof("2:1")).unwrap();
        assert_eq!(coefficient_rhs(&e, s2, &[0, 0, 0, 0]), int(9));
        assert_eq!(coefficient_rhs(&e, s2, &[0]), int(0));
        let w = w_integral(&e, &prof("2:1"), &[0, 0, 0, 0]).unwrap();
        assert_eq!((w.genus, w.m1, w.value), (0, 1, int(9)));
        assert_eq!(w_integral(&e, &prof("2:2"), &[0, 0]).unwrap().value, int(0));
        assert!(matches!(w_integral(&e, &prof("9:1"), &[0]), Err(Error::UnsupportedProfile(_))));
        assert!(matches!(w_integral(&e, &prof("2:1"), &[0, 0]), Err(Error::InadmissibleDegree { .. })));
    }

    #[test]
    fn kappa_parts() {
        assert_eq!(kappa_part(&prof("2:1")).unwrap().to_string(), "12*k1");
        assert_eq!(kappa_part(&prof("2:2")).unwrap().to_string(), "72*k1^2 - 348*k2");
        assert_eq!(kappa_part(&prof("2:3")).unwrap().to_string(), "288*k1^3 - 4176*k1*k2 + 20736*k3");
    }

    #[test]
    fn x_classes() {
        let e = IntersectionEngine::new();
        assert_eq!(x_class_integral(&e, &prof("2:1"), 0, &[0, 0, 0, 0]).unwrap(), int(9));
        assert_eq!(x_class_integral(&e, &prof("2:1"), 1, &[0]).unwrap(), int(0));
        assert_eq!(x_class_integral(&e, &prof("3:1"), 1, &[0, 0]).unwrap(), int(0));
        assert_eq!(x_class_integral(&e, &prof("2:2"), 1, &[0, 0]).unwrap(), int(0));
        assert!(x_class_integral(&e, &prof("4:1"), 1, &[0]).is_err());
    }
}
