//! The normalised two- and three-point functions `T(s, r)`, `U(s, r)` with
//! `r = 2g - 2`, and the 3x3 system in the unknowns (a, b, c) attached to
//! `kappa_1`, `psi` and `delta_irr`.

use crate::engine::{phi, IntersectionEngine};
use crate::error::{Error, Result};
use crate::rational::{determinant, int, ratio, zero, Rational};

/// Closed form of `T(s, r) = <tau_s tau_{3g-1-s}>_g / phi(g)` for `0 <= s <= 5`.
pub fn t_closed(s: i64, r: i64) -> Result<Rational> {
    if !(0..=5).contains(&s) {
        return Err(Error::OutOfRange(format!("closed form of T(s, r) exists for 0 <= s <= 5, got s = {s}")));
    }
    Ok(t_poly(s, r))
}

// T with the convention T = 0 for s < 0; s must be at most 5.
fn t_poly(s: i64, r: i64) -> Rational {
    let q = |x: i64| int(x);
    match s {
        s if s < 0 => zero(),
        0 => int(1),
        1 => q(r + 1),
        2 => ratio(1, 15) * q((3 * r + 3) * (3 * r + 1) + 6 * (r + 2)),
        3 => {
            ratio(1, 105)
                * (q((3 * r + 3) * (3 * r + 1) * (3 * r - 1)) + q(36 * r * (r + 2)) + ratio(3, 2) * q(r + 2))
        }
        4 => {
            let lead = q((3 * r + 3) * (3 * r + 1) * (3 * r - 1) * (3 * r - 3));
            let a = q(12 * (r + 2)) * (q(15) + ratio(9, 2) * q(r) + ratio(3, 8)) * t_poly(1, r - 2);
            let b = q(180 * (r + 2)) * t_poly(2, r - 2);
            ratio(1, 945) * (lead + a + b)
        }
        5 => {
            let lead = q((3 * r + 3) * (3 * r + 1) * (3 * r - 1) * (3 * r - 3) * (3 * r - 5));
            let inner = (q(105) + q(45 * r) + ratio(15, 8)) * t_poly(2, r - 2) + q(105) * t_poly(3, r - 2);
            ratio(1, 10395) * (lead + q(12 * (r + 2)) * inner)
        }
        _ => unreachable!("t_poly called with s > 5"),
    }
}

/// `T(s, 2g - 2)` from the engine.
pub fn t_engine(engine: &IntersectionEngine, s: u32, g: u32) -> Result<Rational> {
    if g == 0 {
        return Err(Error::OutOfRange("T(s, -2) has no bracket".into()));
    }
    let other = (3 * g as i64 - 1) - s as i64;
    if other < 0 {
        return Ok(zero());
    }
    Ok(engine.tau(g, &[s, other as u32]) / phi(g))
}

/// `U(s, 2g - 2) = <tau_2 tau_s tau_{3g-2-s}>_g / phi(g)` from the engine.
pub fn u_engine(engine: &IntersectionEngine, s: u32, g: u32) -> Result<Rational> {
    if g == 0 {
        return Err(Error::OutOfRange("U(s, -2) has no bracket".into()));
    }
    let other = (3 * g as i64 - 2) - s as i64;
    if other < 0 {
        return Ok(zero());
    }
    Ok(engine.tau(g, &[2, s, other as u32]) / phi(g))
}

// T(s, r) by closed form when s <= 5, otherwise from the engine.
fn t_any(engine: Option<&IntersectionEngine>, s: i64, r: i64) -> Result<Rational> {
    if s <= 5 {
        return Ok(t_poly(s, r));
    }
    let engine = engine.ok_or_else(|| Error::OutOfRange(format!("T({s}, {r}) needs the engine")))?;
    if r < 0 || r % 2 != 0 {
        return Err(Error::OutOfRange(format!("T({s}, {r}) needs even r >= 0")));
    }
    t_engine(engine, s as u32, (r as u32 + 2) / 2)
}

/// `U(s, r)` from T values; not asserted for `s = 2 mod 3`.
pub fn u_from_t(engine: Option<&IntersectionEngine>, s: i64, r: i64) -> Result<Rational> {
    if s < 0 || s % 3 == 2 {
        return Err(Error::OutOfRange(format!("U(s, r) from T needs s >= 0 and s != 2 mod 3, got s = {s}")));
    }
    let t = |ss: i64, rr: i64| t_any(engine, ss, rr);
    let bracket = t(s - 2, r - 2)? + int(2) * t(s - 1, r - 2)? + t(s, r - 2)?;
    Ok(ratio(1, 15)
        * (int((2 * s + 3) * (2 * s + 1)) * t(s + 1, r)?
            + int((3 * r - 2 * s + 5) * (3 * r - 2 * s + 3)) * t(s, r)?
            + int(6 * (r + 2)) * bracket))
}

pub const SYSTEM_ROWS: [i64; 3] = [0, 1, 3];

/// Row `Eq_s` with the common factor cleared: coefficients of (a, b, c).
pub fn eq_row(s: i64, r: i64, n: i64) -> [Rational; 3] {
    let u = u_from_t(None, s, r).expect("rows use s in {0, 1, 3}");
    let a = int(r + n) * &u;
    let b = int(n - 2) * &u + int(r + 2) * t_poly(s + 1, r) + int(r + 2) * t_poly(s, r);
    let c = int(6 * (r + 2) * (r + 2)) * (t_poly(s - 2, r - 2) + int(2) * t_poly(s - 1, r - 2) + t_poly(s, r - 2));
    [a, b, c]
}

/// Rows `Eq_0, Eq_1, Eq_3`, columns `(a, b, c)`.
pub fn eq_system(r: i64, n: i64) -> Result<Vec<Vec<Rational>>> {
    if r < -2 || r % 2 != 0 || n < 2 {
        return Err(Error::OutOfRange(format!("system needs even r >= -2 and n >= 2, got r = {r}, n = {n}")));
    }
    Ok(SYSTEM_ROWS.iter().map(|&s| eq_row(s, r, n).to_vec()).collect())
}

/// `(36/875)(r-2) r^2 (r+2)^5 (n+r)(4r+17)`.
pub fn expected_determinant(r: i64, n: i64) -> Rational {
    ratio(36, 875) * int(r - 2) * int(r * r) * int(r + 2).pow(5) * int(n + r) * int(4 * r + 17)
}

/// Genus 2 with the `kappa_1` column dropped, rows `Eq_0, Eq_1`.
pub fn reduced_g2_system(n: i64) -> Vec<Vec<Rational>> {
    [0, 1]
        .iter()
        .map(|&s| {
            let [_, b, c] = eq_row(s, 2, n);
            vec![b, c]
        })
        .collect()
}

pub fn expected_reduced_g2_determinant(n: i64) -> Rational {
    ratio(1536, 5) * int(n + 2)
}

pub fn system_determinant(r: i64, n: i64) -> Result<Rational> {
    Ok(determinant(&eq_system(r, n)?))
}
