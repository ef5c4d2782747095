//! Mumford kappa classes: polynomials, the pushforward polynomials `R_b`, and
//! mixed psi/kappa integrals by triangular solve over the partition lattice.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::combinatorics::set_partitions;
use crate::engine::IntersectionEngine;
use crate::error::{Error, Result};
use crate::rational::{factorial, int, zero, Rational};

/// A product of kappa classes, stored as its indices in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KappaMonomial(Vec<u32>);

impl KappaMonomial {
    /// Panics on a zero index; kappa_0 is a scalar, see [`r_polynomial_at`].
    pub fn new(indices: &[u32]) -> Self {
        assert!(indices.iter().all(|&b| b >= 1), "kappa indices must be positive");
        let mut v = indices.to_vec();
        v.sort_unstable();
        KappaMonomial(v)
    }

    pub fn one() -> Self {
        KappaMonomial(Vec::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    /// Number of factors.
    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &KappaMonomial) -> KappaMonomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        KappaMonomial(v)
    }
}

impl fmt::Display for KappaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let b = self.0[i];
            let mut e = 0;
            while i < self.0.len() && self.0[i] == b {
                e += 1;
                i += 1;
            }
            parts.push(if e == 1 { format!("k{b}") } else { format!("k{b}^{e}") });
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KappaPolynomial {
    terms: BTreeMap<KappaMonomial, Rational>,
}

impl KappaPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: KappaMonomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: KappaMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&mut self, other: &KappaPolynomial) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> KappaPolynomial {
        let mut p = Self::zero();
        for (m, v) in &self.terms {
            p.add_term(m.clone(), v * c);
        }
        p
    }

    pub fn mul(&self, other: &KappaPolynomial) -> KappaPolynomial {
        let mut p = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }

    pub fn coefficient(&self, m: &KappaMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&KappaMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest level present, or 0 for the zero polynomial.
    pub fn top_level(&self) -> usize {
        self.terms.keys().map(|m| m.level()).max().unwrap_or(0)
    }

    /// `sum c_m * int(psi^d * m)` over `M_{g,n}` with `n = psi.len()`.
    pub fn integrate(&self, engine: &IntersectionEngine, g: u32, psi: &[u32]) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| c * mixed_integral(engine, g, psi, m))
            .fold(zero(), |a, b| a + b)
    }
}

impl fmt::Display for KappaPolynomial {
    /// Highest level first, then by index, e.g. `72*k1^2 - 348*k2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&KappaMonomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.level().cmp(&a.level()).then(a.cmp(b)));
        for (i, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.level() == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Expands `R_b = sum over set partitions P of prod_{B in P} (|B|-1)! kappa_{b_B}`,
/// with `kappa_0` replaced by `kappa0` when a block sums to zero.
fn r_expand(b: &[u32], kappa0: Option<&Rational>) -> Result<KappaPolynomial> {
    let mut out = KappaPolynomial::zero();
    for p in set_partitions(b.len()) {
        let mut coeff = Rational::one();
        let mut idx = Vec::new();
        for block in &p {
            coeff *= Rational::from_integer(factorial(block.len() as u64 - 1));
            let s: u32 = block.iter().map(|&i| b[i]).sum();
            if s == 0 {
                coeff *= kappa0.ok_or(Error::KappaZeroWithoutAmbient)?;
            } else {
                idx.push(s);
            }
        }
        out.add_term(KappaMonomial::new(&idx), coeff);
    }
    Ok(out)
}

/// The pushforward polynomial `R_{b_1 ... b_l}`. Errors if a block can sum to 0.
pub fn r_polynomial(b: &[u32]) -> Result<KappaPolynomial> {
    r_expand(b, None)
}

/// `R_b` on `M_{g,n}`, with `kappa_0 = 2g - 2 + n`.
pub fn r_polynomial_at(g: u32, n: usize, b: &[u32]) -> KappaPolynomial {
    let k0 = int(2 * g as i64 - 2 + n as i64);
    r_expand(b, Some(&k0)).expect("kappa_0 supplied")
}

/// `int_{M_{g,n}} prod psi_i^{psi_i} * prod kappa_{b_j}` with `n = psi.len()`.
pub fn mixed_integral(engine: &IntersectionEngine, g: u32, psi: &[u32], kappa: &KappaMonomial) -> Rational {
    let mut memo: HashMap<Vec<u32>, Rational> = HashMap::new();
    solve_kappa(engine, g, psi, kappa.indices(), &mut memo)
}

// <tau_psi prod tau_{b+1}> = sum_P prod (|B|-1)! K(block sums of P), and the
// finest partition carries K(b) itself with coefficient 1.
fn solve_kappa(
    engine: &IntersectionEngine,
    g: u32,
    psi: &[u32],
    b: &[u32],
    memo: &mut HashMap<Vec<u32>, Rational>,
) -> Rational {
    let mut key = b.to_vec();
    key.sort_unstable();
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut ins = psi.to_vec();
    ins.extend(key.iter().map(|&x| x + 1));
    let mut value = engine.tau(g, &ins);
    for p in set_partitions(key.len()) {
        if p.len() == key.len() {
            continue;
        }
        let mut coeff = Rational::one();
        let mut coarse = Vec::with_capacity(p.len());
        for block in &p {
            coeff *= Rational::from_integer(factorial(block.len() as u64 - 1));
            coarse.push(block.iter().map(|&i| key[i]).sum());
        }
        value -= coeff * solve_kappa(engine, g, psi, &coarse, memo);
    }
    memo.insert(key, value.clone());
    value
}

/// `int prod psi^{d_i} * kappa~_a` where `kappa~_a = kappa_a - sum_i psi_i^a`.
pub fn kappa_tilde_integral(engine: &IntersectionEngine, g: u32, psi: &[u32], a: u32) -> Rational {
    let mut v = mixed_integral(engine, g, psi, &KappaMonomial::new(&[a]));
    for i in 0..psi.len() {
        let mut shifted = psi.to_vec();
        shifted[i] += a;
        v -= engine.tau(g, &shifted);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn k(ix: &[u32]) -> KappaMonomial {
        KappaMonomial::new(ix)
    }

    #[test]
    fn r_small_cases() {
        assert_eq!(r_polynomial(&[3]).unwrap(), KappaPolynomial::monomial(k(&[3]), int(1)));
        let r2 = r_polynomial(&[1, 2]).unwrap();
        assert_eq!(r2.coefficient(&k(&[1, 2])), int(1));
        assert_eq!(r2.coefficient(&k(&[3])), int(1));
        let r3 = r_polynomial(&[1, 2, 4]).unwrap();
        assert_eq!(r3.coefficient(&k(&[1, 2, 4])), int(1));
        assert_eq!(r3.coefficient(&k(&[1, 6])), int(1));
        assert_eq!(r3.coefficient(&k(&[2, 5])), int(1));
        assert_eq!(r3.coefficient(&k(&[3, 4])), int(1));
        assert_eq!(r3.coefficient(&k(&[7])), int(2));
        // repeated indices collect: R_{1,1,1} = k1^3 + 3 k1 k2 + 2 k3
        let r111 = r_polynomial(&[1, 1, 1]).unwrap();
        assert_eq!(r111.to_string(), "k1^3 + 3*k1*k2 + 2*k3");
    }

    #[test]
    fn kappa_zero_needs_ambient() {
        assert!(matches!(r_polynomial(&[0]), Err(Error::KappaZeroWithoutAmbient)));
        // kappa_0 = 2g - 2 + n = 2 on M_{1,2}
        assert_eq!(r_polynomial_at(1, 2, &[0]), KappaPolynomial::monomial(k(&[]), int(2)));
    }

    #[test]
    fn worked_integrals() {
        let e = IntersectionEngine::new();
        assert_eq!(mixed_integral(&e, 1, &[0, 0], &k(&[2])), ratio(1, 24));
        assert_eq!(mixed_integral(&e, 1, &[0, 0], &k(&[1, 1])), ratio(1, 8));
        assert_eq!(mixed_integral(&e, 0, &[0, 0, 0, 0], &k(&[1])), int(1));
        assert_eq!(mixed_integral(&e, 1, &[1], &KappaMonomial::one()), ratio(1, 24));
        assert_eq!(kappa_tilde_integral(&e, 1, &[0], 1), int(0));
        assert_eq!(kappa_tilde_integral(&e, 0, &[0, 0, 0, 0], 1), int(-3));
    }

    #[test]
    fn display() {
        let mut p = KappaPolynomial::monomial(k(&[1, 1]), int(72));
        p.add_term(k(&[2]), int(-348));
        assert_eq!(p.to_string(), "72*k1^2 - 348*k2");
        assert_eq!(KappaPolynomial::zero().to_string(), "0");
    }
}
