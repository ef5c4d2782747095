//! Acceptance gate: one PASS/FAIL line per criterion, exact rationals throughout.

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use taukappa::boundary::{beta_monomial, delta_integral, delta_ph_integral, is_canonical_ph};
use taukappa::combinatorics::{compositions, multisets_with_sum};
use taukappa::dfiz::{identity_table, kappa_part, structural_check, w_integral, x_class_integral, ValenceProfile};
use taukappa::kappa::{mixed_integral, KappaMonomial};
use taukappa::tu_system::{eq_system, reduced_g2_system};
use taukappa::rational::{int, ratio};
use taukappa::ribbon::count_w04;
use taukappa::{genus0_oracle, phi, IntersectionEngine, Rational};

type Outcome = (bool, String);

fn profile(s: &str) -> ValenceProfile {
    s.parse().expect("profile")
}

fn all_d(g: u32, n: usize, codim: u32) -> Vec<Vec<u32>> {
    let total = 3 * g as i64 - 3 + n as i64 - codim as i64;
    if total < 0 {
        return Vec::new();
    }
    compositions(total as u32, n)
}

fn c1_golden(e: &IntersectionEngine) -> Outcome {
    // phi by its own recursion, independent of the library helper
    let mut phi_rec = ratio(1, 24);
    let mut phis = vec![phi_rec.clone()];
    for g in 2..=3 {
        phi_rec /= int(24 * g);
        phis.push(phi_rec.clone());
    }
    let checks = [
        (e.tau(0, &[0, 0, 0]), int(1)),
        (e.tau(1, &[1]), ratio(1, 24)),
        (phis[1].clone(), ratio(1, 1152)),
        (phis[2].clone(), ratio(1, 82944)),
        (phi(2), phis[1].clone()),
        (phi(3), phis[2].clone()),
        (e.tau(2, &[4]), phis[1].clone()),
        (e.tau(3, &[7]), phis[2].clone()),
    ];
    let bad: Vec<_> = checks.iter().enumerate().filter(|(_, (a, b))| a != b).map(|(i, _)| i).collect();
    (bad.is_empty(), format!("failed items {bad:?}"))
}

fn c2_kappa_integrals() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (ix, want) in [(vec![2u32], ratio(1, 24)), (vec![1, 1], ratio(1, 8))] {
        let e = IntersectionEngine::new();
        let start = Instant::now();
        let got = mixed_integral(&e, 1, &[0, 0], &KappaMonomial::new(&ix));
        let took = start.elapsed();
        ok &= got == want && took < Duration::from_secs(1);
        details.push(format!("{ix:?} -> {got} in {took:?}"));
    }
    (ok, details.join("; "))
}

fn c3_m04(e: &IntersectionEngine) -> Outcome {
    let d = [0u32; 4];
    let w = w_integral(e, &profile("2:1"), &d).expect("w").value;
    let x = x_class_integral(e, &profile("2:1"), 0, &d).expect("x");
    let c = count_w04(&[int(1), int(10), int(100), int(1000)]).expect("count");
    let delta = delta_integral(e, 0, 4, &d).expect("delta");
    let psi: Rational = (0..4)
        .map(|i| {
            let mut v = [0u32; 4];
            v[i] = 1;
            e.tau(0, &v)
        })
        .sum();
    let ok = w == int(9) && x == int(9) && c == 9 && delta == int(3) && psi == int(4);
    (ok, format!("w={w} x={x} points={c} delta={delta} psi={psi}"))
}

fn c4_m11(e: &IntersectionEngine) -> Outcome {
    let x = x_class_integral(e, &profile("2:1"), 1, &[0]).expect("x");
    let w = w_integral(e, &profile("2:1"), &[0]).expect("w");
    (x.is_zero() && w.value.is_zero() && w.genus == 1, format!("x={x} w={} genus={}", w.value, w.genus))
}

fn c5_m12(e: &IntersectionEngine) -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for p in ["3:1", "2:2"] {
        let x = x_class_integral(e, &profile(p), 1, &[0, 0]).expect("x");
        let w = w_integral(e, &profile(p), &[0, 0]).expect("w");
        ok &= x.is_zero() && w.value.is_zero() && w.genus == 1;
        details.push(format!("{p}: x={x} w={}", w.value));
    }
    (ok, details.join("; "))
}

fn c6_kappa_table() -> Outcome {
    let rows = [
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
    let bad: Vec<String> = rows
        .iter()
        .filter_map(|(p, want)| {
            let got = kappa_part(&profile(p)).expect("row").to_string();
            (got != *want).then(|| format!("{p}: {got}"))
        })
        .collect();
    (bad.is_empty(), format!("11 rows, mismatches {bad:?}"))
}

fn c7_structure() -> Outcome {
    let ids = identity_table();
    let mut bad = Vec::new();
    for id in ids {
        let mut want = BigInt::one();
        for (&i, &e) in &id.nu {
            let dfact: BigInt = (1..=2 * i as i64 - 1).step_by(2).map(BigInt::from).product();
            want *= (BigInt::from(2).pow(i) * dfact).pow(e);
        }
        let top = id.top_weight();
        let top_terms: Vec<_> = id.terms.iter().filter(|t| t.weight() == top).collect();
        let coeff_ok = top_terms.len() == 1 && top_terms[0].coefficient == Rational::from_integer(want);
        if !structural_check(id) || !coeff_ok {
            bad.push(format!("{:?}", id.nu));
        }
    }
    (ids.len() == 11 && bad.is_empty(), format!("{} identities, failures {bad:?}", ids.len()))
}

// cofactor expansion, independent of the library's elimination
fn determinant_of(m: &[Vec<Rational>]) -> Rational {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut total = Rational::zero();
    for col in 0..m.len() {
        let minor: Vec<Vec<Rational>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][col] * determinant_of(&minor);
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn c8_determinants() -> Outcome {
    let mut bad = Vec::new();
    for r in (-2i64..=30).step_by(2) {
        for n in 2i64..=10 {
            let want = ratio(36, 875)
                * int(r - 2)
                * int(r * r)
                * int(r + 2).pow(5)
                * int(n + r)
                * int(4 * r + 17);
            let got = determinant_of(&eq_system(r, n).expect("system"));
            if got != want {
                bad.push(format!("r={r} n={n}"));
            }
        }
    }
    for n in 2i64..=10 {
        if determinant_of(&reduced_g2_system(n)) != ratio(1536, 5) * int(n + 2) {
            bad.push(format!("reduced n={n}"));
        }
    }
    (bad.is_empty(), format!("153 full and 9 reduced determinants, failures {bad:?}"))
}

fn c9_cross_path(e: &IntersectionEngine) -> Outcome {
    let plan: [(&str, &[(u32, usize)]); 3] = [
        ("2:1", &[(0, 4), (0, 5), (1, 2), (1, 3)]),
        ("3:1", &[(1, 2), (0, 4), (0, 5)]),
        ("2:2", &[(1, 2), (0, 4), (0, 5)]),
    ];
    let mut count = 0;
    let mut bad = Vec::new();
    for (p, spaces) in plan {
        let prof = profile(p);
        for &(g, n) in spaces {
            for d in all_d(g, n, prof.codimension()) {
                count += 1;
                let w = w_integral(e, &prof, &d).expect("w").value;
                let x = x_class_integral(e, &prof, g, &d).expect("x");
                if w != x {
                    bad.push(format!("{p} ({g},{n}) {d:?}: {w} vs {x}"));
                }
            }
        }
    }
    (count > 0 && bad.is_empty(), format!("{count} vectors, failures {bad:?}"))
}

fn c10_oracles(e: &IntersectionEngine) -> Outcome {
    let mut oracle_count = 0;
    let mut bad = Vec::new();
    for n in 3..=8usize {
        for d in multisets_with_sum(n, n as u32 - 3) {
            oracle_count += 1;
            if genus0_oracle(&d).expect("genus 0") != e.tau_auto(&d) {
                bad.push(format!("oracle {d:?}"));
            }
        }
    }
    let mut eq_count = 0;
    for g in 0..=2u32 {
        for n in 1..=6usize {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let smaller_stable = 2 * g as i64 - 3 + n as i64 > 0;
            for d in multisets_with_sum(n, 3 * g + n as u32 - 3) {
                let value = e.tau(g, &d);
                if let Some(pos) = d.iter().position(|&x| x == 0).filter(|_| smaller_stable) {
                    eq_count += 1;
                    let mut rest = d.clone();
                    rest.remove(pos);
                    let mut rhs = Rational::zero();
                    for j in 0..rest.len() {
                        if rest[j] > 0 {
                            let mut r = rest.clone();
                            r[j] -= 1;
                            rhs += e.tau(g, &r);
                        }
                    }
                    if value != rhs {
                        bad.push(format!("string g={g} {d:?}"));
                    }
                }
                if let Some(pos) = d.iter().position(|&x| x == 1).filter(|_| smaller_stable) {
                    eq_count += 1;
                    let mut rest = d.clone();
                    rest.remove(pos);
                    if value != int(2 * g as i64 - 3 + n as i64) * e.tau(g, &rest) {
                        bad.push(format!("dilaton g={g} {d:?}"));
                    }
                }
            }
        }
    }
    (bad.is_empty(), format!("{oracle_count} genus-0 brackets, {eq_count} string/dilaton instances, failures {bad:?}"))
}

fn c11_vanishing(e: &IntersectionEngine) -> Outcome {
    let (mut zero_checks, mut positive_checks) = (0, 0);
    let mut bad = Vec::new();
    for g in 0..=3u32 {
        for n in 1..=4usize {
            for q in 0..=g {
                for j in 0..=n {
                    let Ok(beta) = beta_monomial(g, n, q, j) else { continue };
                    for p in 0..=g / 2 {
                        for h in 0..=n {
                            if !is_canonical_ph(g, n, p, h) {
                                continue;
                            }
                            let zero_case = if q == 0 {
                                p > 0 || h > j
                            } else {
                                p > q || h as i64 > j as i64 + 3 * (q as i64 - p as i64)
                            };
                            let positive_case =
                                if q == 0 { p == 0 && h == j && 1 < j && j < n } else { p == q && h == j && 0 < h && h < n };
                            if !zero_case && !positive_case {
                                continue;
                            }
                            let v = delta_ph_integral(e, g, n, p, h, &beta).expect("canonical");
                            if zero_case {
                                zero_checks += 1;
                                if !v.is_zero() {
                                    bad.push(format!("zero g={g} n={n} q={q} j={j} p={p} h={h}: {v}"));
                                }
                            }
                            if positive_case {
                                positive_checks += 1;
                                if !v.is_positive() {
                                    bad.push(format!("positive g={g} n={n} q={q} j={j} p={p} h={h}: {v}"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let ok = bad.is_empty() && zero_checks > 0 && positive_checks > 0;
    (ok, format!("{zero_checks} zero cases, {positive_checks} positive cases, failures {bad:?}"))
}

#[test]
fn acceptance() {
    let e = IntersectionEngine::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 golden values", c1_golden(&e)),
        ("2 kappa integrals on M_1,2", c2_kappa_integrals()),
        ("3 triple agreement on M_0,4", c3_m04(&e)),
        ("4 vanishing on M_1,1", c4_m11(&e)),
        ("5 codimension-2 vanishing on M_1,2", c5_m12(&e)),
        ("6 kappa-part table", c6_kappa_table()),
        ("7 structural law", c7_structure()),
        ("8 system determinants", c8_determinants()),
        ("9 cross-path sweep", c9_cross_path(&e)),
        ("10 oracle, string and dilaton", c10_oracles(&e)),
        ("11 beta vanishing and positivity", c11_vanishing(&e)),
    ];
    // straight to the process stdout so the lines survive the test harness capture
    let mut report = String::new();
    for (name, (ok, detail)) in &results {
        report += &format!("{} criterion {name}: {detail}\n", if *ok { "PASS" } else { "FAIL" });
    }
    let mut out = std::io::stdout().lock();
    out.write_all(report.as_bytes()).unwrap();
    out.flush().unwrap();
    let failed: Vec<_> = results.iter().filter(|(_, (ok, _))| !ok).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
