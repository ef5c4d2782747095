use proptest::prelude::*;
use taukappa::boundary::{
    alpha_monomial, delta_integral, delta_ph_integral, is_canonical_ph, pushforward_integral, separating_graphs,
    Decoration, DualGraph, Vertex,
};
use taukappa::combinatorics::compositions;
use taukappa::dfiz::{identity_table, w_integral, x_class_integral, ValenceProfile};
use taukappa::tu_system::{t_closed, t_engine};
use taukappa::rational::int;
use taukappa::IntersectionEngine;

fn all_d(g: u32, n: usize, codim: u32) -> Vec<Vec<u32>> {
    let total = 3 * g as i64 - 3 + n as i64 - codim as i64;
    if total < 0 {
        return Vec::new();
    }
    compositions(total as u32, n)
}

// relabel markers by perm (perm[i-1] is the new label of marker i)
fn relabel(graph: &DualGraph, perm: &[usize]) -> DualGraph {
    let vertices =
        graph.vertices.iter().map(|v| Vertex::new(v.genus, &v.markers.iter().map(|&m| perm[m - 1]).collect::<Vec<_>>())).collect();
    DualGraph::new(vertices, graph.edges.clone())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pushforward_relabelling(gi in 0usize..64, perm in permutation(4), kappa in 1u32..=2, g in 1u32..=2) {
        let n = 4;
        let e = IntersectionEngine::new();
        let graphs = separating_graphs(g, n);
        let graph = &graphs[gi % graphs.len()];
        let dec = Decoration::trivial(graph).with_kappa(0, &[kappa]);
        let total = 3 * g as i64 - 4 + n as i64 - kappa as i64;
        prop_assume!(total >= 0);
        for d in compositions(total as u32, n) {
            let mut d2 = vec![0; n];
            for i in 0..n {
                d2[perm[i] - 1] = d[i];
            }
            let moved = relabel(graph, &perm);
            let a = pushforward_integral(&e, g, n, graph, &dec, &d).unwrap();
            let b = pushforward_integral(&e, g, n, &moved, &Decoration::trivial(&moved).with_kappa(0, &[kappa]), &d2).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn delta_and_w_are_symmetric(g in 0u32..=1, n in 3usize..=5, ix in any::<prop::sample::Index>(), perm in permutation(5)) {
        prop_assume!(2 * g as i64 - 2 + n as i64 > 0);
        let e = IntersectionEngine::new();
        let prof: ValenceProfile = "2:1".parse().unwrap();
        let all = all_d(g, n, 1);
        prop_assume!(!all.is_empty());
        let d = ix.get(&all);
        let perm: Vec<usize> = perm.into_iter().filter(|&p| p <= n).collect();
        let d2: Vec<u32> = (0..n).map(|i| d[perm[i] - 1]).collect();
        prop_assert_eq!(w_integral(&e, &prof, d).unwrap(), w_integral(&e, &prof, &d2).unwrap());
        prop_assert_eq!(delta_integral(&e, g, n, d).unwrap(), delta_integral(&e, g, n, &d2).unwrap());
    }
}

// A profile with no room for vertices gives the zero class.
#[test]
fn w_vanishes_without_vertices() {
    let e = IntersectionEngine::new();
    let mut checked = 0;
    for id in identity_table() {
        let prof = id.profile();
        for g in 0..=2u32 {
            for n in 1..=4usize {
                if 2 * g as i64 - 2 + n as i64 <= 0 || prof.vertex_count(g, n) > 0 {
                    continue;
                }
                for d in all_d(g, n, prof.codimension()) {
                    checked += 1;
                    assert_eq!(w_integral(&e, &prof, &d).unwrap().value, int(0), "{prof} g={g} d={d:?}");
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn w_equals_x_beyond_the_gate() {
    let e = IntersectionEngine::new();
    let plan: [(&str, &[(u32, usize)]); 3] = [
        ("2:1", &[(0, 6), (1, 4), (2, 1), (2, 2)]),
        ("3:1", &[(0, 6), (1, 3), (2, 1)]),
        ("2:2", &[(0, 6), (1, 3), (2, 1)]),
    ];
    for (p, spaces) in plan {
        let prof: ValenceProfile = p.parse().unwrap();
        for &(g, n) in spaces {
            for d in all_d(g, n, prof.codimension()) {
                let w = w_integral(&e, &prof, &d).unwrap();
                assert_eq!(w.genus, g);
                assert_eq!(w.value, x_class_integral(&e, &prof, g, &d).unwrap(), "{p} ({g},{n}) {d:?}");
            }
        }
    }
}

#[test]
fn alpha_monomials_vanish() {
    let e = IntersectionEngine::new();
    let mut checked = 0;
    for g in 0..=3u32 {
        for n in 2..=4usize {
            for s in [0u32, 1, 3] {
                let Ok(alpha) = alpha_monomial(g, n, s) else { continue };
                for p in 0..=g / 2 {
                    for h in 0..=n {
                        if is_canonical_ph(g, n, p, h) {
                            checked += 1;
                            assert_eq!(delta_ph_integral(&e, g, n, p, h, &alpha).unwrap(), int(0), "g={g} n={n} s={s} p={p} h={h}");
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn closed_t_matches_engine() {
    let e = IntersectionEngine::new();
    for g in 1..=3u32 {
        for s in 0..=5u32.min(3 * g - 1) {
            assert_eq!(t_closed(s as i64, 2 * g as i64 - 2).unwrap(), t_engine(&e, s, g).unwrap(), "s={s} g={g}");
        }
    }
}
