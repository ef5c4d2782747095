//! Named self-checks grouped into suites, for the command-line `verify` command.

use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::boundary::{alpha_monomial, beta_monomial, delta_integral, delta_ph_integral, is_canonical_ph};
use crate::combinatorics::{compositions, multisets_with_sum};
use crate::dfiz::{identity_table, kappa_part, structural_check, w_integral, x_class_integral, ValenceProfile};
use crate::engine::{genus0_oracle, infer_genus, phi, IntersectionEngine};
use crate::error::Error;
use crate::kappa::{mixed_integral, KappaMonomial};
use crate::tu_system::{
    expected_determinant, expected_reduced_g2_determinant, reduced_g2_system, system_determinant, t_closed,
    t_engine, u_engine, u_from_t,
};
use crate::rational::{determinant, int, ratio, Rational};
use crate::ribbon::count_w04;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }

    fn eq(name: &str, got: &Rational, want: &Rational) -> Self {
        Check::new(name, got == want, format!("got {got}, want {want}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Engine,
    Dfiz,
    Tu,
    M04,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "engine" => Ok(Suite::Engine),
            "dfiz" => Ok(Suite::Dfiz),
            "lemma2" | "tu" => Ok(Suite::Tu),
            "m04" => Ok(Suite::M04),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parse(format!("unknown suite {s:?}; expected engine, dfiz, lemma2, m04 or all"))),
        }
    }
}

pub fn run_suite(engine: &IntersectionEngine, suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Engine => engine_checks(engine),
        Suite::Dfiz => dfiz_checks(engine),
        Suite::Tu => tu_checks(engine),
        Suite::M04 => m04_checks(engine),
        Suite::All => {
            let mut v = engine_checks(engine);
            v.extend(dfiz_checks(engine));
            v.extend(tu_checks(engine));
            v.extend(m04_checks(engine));
            v
        }
    }
}

/// `(profile, kappa part)` rows of the codimension table.
pub const KAPPA_TABLE: [(&str, &str); 11] = [
    ("2:1", "12*k1"),
    ("3:1", "120*k2"),
    ("2:2", "72*k1^2 - 348*k2"),
    ("4:1", "1680*k3"),
    ("2:1,3:1", "1440*k1*k2 - 13680*k3"),
    ("2:3", "288*k1^3 - 4176*k1*k2 + 20736*k3"),
    ("5:1", "30240*k4"),
    ("2:1,4:1", "20160*k1*k3 - 312480*k4"),
    ("3:2", "7200*k2^2 - 159120*k4"),
    ("6:1", "665280*k5"),
    ("7:1", "17297280*k6"),
];

/// Every ordered `d` with `sum d = 3g - 3 + n - codim`.
pub fn admissible_vectors(g: u32, n: usize, codim: u32) -> Vec<Vec<u32>> {
    let total = 3 * g as i64 - 3 + n as i64 - codim as i64;
    if total < 0 {
        return Vec::new();
    }
    compositions(total as u32, n)
}

fn engine_checks(e: &IntersectionEngine) -> Vec<Check> {
    let mut out = vec![
        Check::eq("tau(0,[0,0,0])", &e.tau(0, &[0, 0, 0]), &int(1)),
        Check::eq("tau(1,[1])", &e.tau(1, &[1]), &ratio(1, 24)),
        Check::eq("tau(0,[0,0,0,1])", &e.tau(0, &[0, 0, 0, 1]), &int(1)),
    ];
    for g in 1..=3 {
        out.push(Check::eq(&format!("phi({g}) = tau({g},[{}])", 3 * g - 2), &e.tau(g, &[3 * g - 2]), &phi(g)));
    }

    let mut bad = Vec::new();
    let mut count = 0;
    for n in 3..=8usize {
        for d in multisets_with_sum(n, n as u32 - 3) {
            count += 1;
            if genus0_oracle(&d).ok() != Some(e.tau_auto(&d)) {
                bad.push(format!("{d:?}"));
            }
        }
    }
    out.push(Check::new("genus-0 oracle equivalence (n <= 8)", bad.is_empty(), format!("{count} brackets, mismatches {bad:?}")));

    let (mut s_bad, mut d_bad, mut count) = (0, 0, 0);
    for g in 0..=2u32 {
        for n in 1..=5usize {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let dim = 3 * g as i64 - 3 + n as i64;
            for d in multisets_with_sum(n, (dim + 1) as u32) {
                count += 1;
                let mut with0 = d.clone();
                with0.push(0);
                let mut rhs = Rational::zero();
                for j in 0..n {
                    if d[j] > 0 {
                        let mut r = d.clone();
                        r[j] -= 1;
                        rhs += e.tau(g, &r);
                    }
                }
                if e.tau(g, &with0) != rhs {
                    s_bad += 1;
                }
            }
            for d in multisets_with_sum(n, dim as u32) {
                let mut with1 = d.clone();
                with1.push(1);
                if e.tau(g, &with1) != int(2 * g as i64 - 2 + n as i64) * e.tau(g, &d) {
                    d_bad += 1;
                }
            }
        }
    }
    out.push(Check::new("string equation (g <= 2, n <= 6)", s_bad == 0, format!("{count} brackets, {s_bad} failures")));
    out.push(Check::new("dilaton equation (g <= 2, n <= 6)", d_bad == 0, format!("{d_bad} failures")));
    out
}

fn dfiz_checks(e: &IntersectionEngine) -> Vec<Check> {
    let mut out = Vec::new();
    let all_ok = identity_table().iter().all(structural_check);
    out.push(Check::new("structural law on all identities", all_ok, format!("{} identities", identity_table().len())));
    for (p, want) in KAPPA_TABLE {
        let prof: ValenceProfile = p.parse().expect("table profile");
        let got = kappa_part(&prof).map(|k| k.to_string()).unwrap_or_else(|err| err.to_string());
        out.push(Check::new(&format!("kappa part {p}"), got == want, format!("got {got}, want {want}")));
    }
    let k = |ix: &[u32]| KappaMonomial::new(ix);
    out.push(Check::eq("int_{M_1,2} kappa_2", &mixed_integral(e, 1, &[0, 0], &k(&[2])), &ratio(1, 24)));
    out.push(Check::eq("int_{M_1,2} kappa_1^2", &mixed_integral(e, 1, &[0, 0], &k(&[1, 1])), &ratio(1, 8)));

    let sweeps: [(&str, &[(u32, usize)]); 3] = [
        ("2:1", &[(0, 4), (0, 5), (1, 1), (1, 2), (1, 3)]),
        ("3:1", &[(1, 2), (0, 4), (0, 5)]),
        ("2:2", &[(1, 2), (0, 4), (0, 5)]),
    ];
    for (p, spaces) in sweeps {
        let prof: ValenceProfile = p.parse().expect("profile");
        let mut bad = Vec::new();
        let mut count = 0;
        for &(g, n) in spaces {
            for d in admissible_vectors(g, n, prof.codimension()) {
                count += 1;
                let w = w_integral(e, &prof, &d).map(|w| w.value);
                let x = x_class_integral(e, &prof, g, &d);
                match (w, x) {
                    (Ok(a), Ok(b)) if a == b => {}
                    (a, b) => bad.push(format!("({g},{n}) d={d:?}: w={a:?} x={b:?}")),
                }
            }
        }
        out.push(Check::new(&format!("W = X for profile {p}"), bad.is_empty(), format!("{count} vectors, failures {bad:?}")));
    }
    out
}

fn tu_checks(e: &IntersectionEngine) -> Vec<Check> {
    let mut out = Vec::new();
    let mut bad = Vec::new();
    for r in (-2..=30).step_by(2) {
        for n in 2..=10 {
            let got = system_determinant(r, n).expect("grid is in range");
            if got != expected_determinant(r, n) {
                bad.push(format!("r={r} n={n}: {got}"));
            }
        }
    }
    out.push(Check::new("determinant factorisation on r in -2..30, n in 2..10", bad.is_empty(), format!("{bad:?}")));
    let zeros: Vec<i64> = (-2..=30)
        .step_by(2)
        .filter(|&r| system_determinant(r, 5).map(|d| d.is_zero()).unwrap_or(false))
        .collect();
    out.push(Check::new("determinant vanishes only at r = -2, 0, 2", zeros == vec![-2, 0, 2], format!("{zeros:?}")));
    let ok = (2..=10).all(|n| determinant(&reduced_g2_system(n)) == expected_reduced_g2_determinant(n));
    out.push(Check::new("reduced genus-2 determinant (1536/5)(n+2)", ok, "n in 2..10"));

    let mut bad = Vec::new();
    for g in 1..=3u32 {
        let r = 2 * g as i64 - 2;
        for s in 0..=5u32 {
            if s > 3 * g - 1 {
                continue;
            }
            let engine_t = t_engine(e, s, g).expect("g >= 1");
            if t_closed(s as i64, r).ok() != Some(engine_t.clone()) {
                bad.push(format!("T({s},{r})"));
            }
        }
        for s in [0u32, 1, 3, 4] {
            if s > 3 * g - 2 {
                continue;
            }
            if u_from_t(Some(e), s as i64, r).ok() != u_engine(e, s, g).ok() {
                bad.push(format!("U({s},{r})"));
            }
        }
    }
    out.push(Check::new("closed T and U agree with the engine (g <= 3)", bad.is_empty(), format!("{bad:?}")));

    let (viol, nonzero) = vanishing_sweep(e, 3, 4);
    out.push(Check::new(
        "beta vanishing and positivity (g <= 3, n <= 4)",
        viol.is_empty(),
        format!("{nonzero} positive cases, violations {viol:?}"),
    ));
    out
}

/// Sweeps the beta-monomial vanishing and positivity claims and the alpha
/// vanishing claim; returns violations and the number of positive cases seen.
pub fn vanishing_sweep(e: &IntersectionEngine, max_g: u32, max_n: usize) -> (Vec<String>, usize) {
    let mut viol = Vec::new();
    let mut nonzero = 0;
    for g in 0..=max_g {
        for n in 1..=max_n {
            for q in 0..=g {
                for j in 0..=n {
                    let Ok(beta) = beta_monomial(g, n, q, j) else { continue };
                    for p in 0..=g / 2 {
                        for h in 0..=n {
                            if !is_canonical_ph(g, n, p, h) {
                                continue;
                            }
                            let v = delta_ph_integral(e, g, n, p, h, &beta).expect("canonical");
                            let (zero_case, positive_case) = if q == 0 {
                                (p > 0 || h > j, p == 0 && h == j && 1 < j && j < n)
                            } else {
                                (
                                    p > q || h as i64 > j as i64 + 3 * (q as i64 - p as i64),
                                    p == q && h == j && 0 < h && h < n,
                                )
                            };
                            let case = format!("g={g} n={n} q={q} j={j} p={p} h={h}: {v}");
                            if zero_case && !v.is_zero() {
                                viol.push(format!("zero {case}"));
                            }
                            if positive_case {
                                nonzero += 1;
                                if !v.is_positive() {
                                    viol.push(format!("positive {case}"));
                                }
                            }
                        }
                    }
                }
            }
            if n >= 2 {
                for s in [0u32, 1, 3] {
                    let Ok(alpha) = alpha_monomial(g, n, s) else { continue };
                    for p in 0..=g / 2 {
                        for h in 0..=n {
                            if !is_canonical_ph(g, n, p, h) {
                                continue;
                            }
                            let v = delta_ph_integral(e, g, n, p, h, &alpha).expect("canonical");
                            if !v.is_zero() {
                                viol.push(format!("alpha g={g} n={n} s={s} p={p} h={h}: {v}"));
                            }
                        }
                    }
                }
            }
        }
    }
    (viol, nonzero)
}

fn m04_checks(e: &IntersectionEngine) -> Vec<Check> {
    let prof: ValenceProfile = "2:1".parse().expect("profile");
    let d = [0u32; 4];
    let w = w_integral(e, &prof, &d).map(|w| w.value.to_string()).unwrap_or_else(|x| x.to_string());
    let x = x_class_integral(e, &prof, 0, &d).map(|v| v.to_string()).unwrap_or_else(|x| x.to_string());
    let c = count_w04(&[int(1), int(10), int(100), int(1000)]).map(|c| c.to_string()).unwrap_or_else(|x| x.to_string());
    let psi: Rational = (0..4)
        .map(|i| {
            let mut v = vec![0u32; 4];
            v[i] = 1;
            e.tau(0, &v)
        })
        .sum();
    vec![
        Check::new("W on M_0,4: coefficient route", w == "9", w),
        Check::new("W on M_0,4: 12 kappa_1 - delta", x == "9", x),
        Check::new("W on M_0,4: ribbon point count", c == "9", c),
        Check::eq("deg delta on M_0,4", &delta_integral(e, 0, 4, &d).unwrap_or_default(), &int(3)),
        Check::eq("deg psi on M_0,4", &psi, &int(4)),
        Check::eq(
            "W on M_1,1",
            &w_integral(e, &prof, &[0]).map(|w| w.value).unwrap_or_else(|_| int(-1)),
            &int(0),
        ),
        Check::new(
            "inferred genus on M_1,1",
            infer_genus(&[1]) == Some(1),
            "the bracket <tau_1> lives in genus 1",
        ),
    ]
}
