//! Exact rational helpers. Every quantity in the crate is a [`Rational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q`; panics on `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `k!!` with the convention `(-1)!! = 0!! = 1`.
pub fn double_factorial(k: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = k;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    acc
}

pub fn factorial(k: u64) -> BigInt {
    (2..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Parses `p/q`, `p`, or `-p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Solves the square system `m x = b`. Returns `None` when `m` is singular.
pub fn solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        let p = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..=n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1), BigInt::from(1));
        assert_eq!(double_factorial(0), BigInt::from(1));
        assert_eq!(double_factorial(5), BigInt::from(15));
        assert_eq!(double_factorial(13), BigInt::from(135135));
    }

    #[test]
    fn rendering() {
        assert_eq!(ratio(2, 48).to_string(), "1/24");
        assert_eq!(ratio(-6, 3).to_string(), "-2");
        assert_eq!(parse_rational("-35/96").unwrap(), ratio(-35, 96));
    }

    #[test]
    fn small_linear_algebra() {
        let m = vec![
            vec![int(2), int(1)],
            vec![int(1), int(3)],
        ];
        assert_eq!(determinant(&m), int(5));
        let x = solve(&m, &[int(3), int(4)]).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        let sing = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(determinant(&sing), int(0));
        assert!(solve(&sing, &[int(1), int(1)]).is_none());
    }
}
