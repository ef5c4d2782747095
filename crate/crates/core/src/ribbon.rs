//! Ribbon graphs as permutation pairs on half-edges: `alpha` pairs half-edges
//! into edges, `sigma` rotates them around vertices, and the boundary
//! components are the cycles of `sigma . alpha`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::dfiz::ValenceProfile;
use crate::error::{Error, Result};
use crate::rational::{int, solve, Rational};

/// Largest edge count [`enumerate`] accepts.
pub const MAX_EDGES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerData {
    pub g: u32,
    pub n: usize,
    pub v: usize,
    pub l: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    /// Label in `1..=n` of each face, faces ordered by smallest half-edge.
    labels: Vec<usize>,
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut c = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            c.push(h);
            h = perm[h];
        }
        out.push(c);
    }
    out
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn connected(sigma: &[usize], alpha: &[usize]) -> bool {
    if sigma.is_empty() {
        return false;
    }
    let mut seen = vec![false; sigma.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(h) = stack.pop() {
        for next in [sigma[h], alpha[h]] {
            if !seen[next] {
                seen[next] = true;
                count += 1;
                stack.push(next);
            }
        }
    }
    count == sigma.len()
}

fn face_perm(sigma: &[usize], alpha: &[usize]) -> Vec<usize> {
    (0..sigma.len()).map(|h| sigma[alpha[h]]).collect()
}

impl RibbonGraph {
    /// Checks every invariant; `labels` defaults to numbering faces in order.
    pub fn new(sigma: Vec<usize>, alpha: Vec<usize>, labels: Option<Vec<usize>>) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidRibbon(why.to_string()));
        let h = sigma.len();
        if h == 0 || h % 2 != 0 || alpha.len() != h {
            return bad("need an even, non-zero number of half-edges");
        }
        if !is_permutation(&sigma) || !is_permutation(&alpha) {
            return bad("sigma and alpha must be permutations");
        }
        if (0..h).any(|x| alpha[x] == x || alpha[alpha[x]] != x) {
            return bad("alpha must be a fixed-point-free involution");
        }
        if cycles(&sigma).iter().any(|c| c.len() < 3) {
            return bad("every vertex needs valency at least 3");
        }
        if !connected(&sigma, &alpha) {
            return bad("graph is not connected");
        }
        let faces = cycles(&face_perm(&sigma, &alpha)).len();
        let chi = cycles(&sigma).len() as i64 - (h / 2) as i64 + faces as i64;
        if chi > 2 || chi % 2 != 0 {
            return bad("Euler characteristic is not 2 - 2g");
        }
        let labels = labels.unwrap_or_else(|| (1..=faces).collect());
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted != (1..=faces).collect::<Vec<_>>() {
            return bad("labels must be a bijection from faces to 1..=n");
        }
        Ok(RibbonGraph { sigma, alpha, labels })
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn vertices(&self) -> Vec<Vec<usize>> {
        cycles(&self.sigma)
    }

    /// Boundary cycles of `sigma . alpha`, ordered by smallest half-edge.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        cycles(&face_perm(&self.sigma, &self.alpha))
    }

    /// Edges as `(h, alpha(h))` with `h < alpha(h)`, ordered by `h`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.alpha.len()).filter(|&h| h < self.alpha[h]).map(|h| (h, self.alpha[h])).collect()
    }

    /// Label of the face containing each half-edge.
    fn face_label_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.sigma.len()];
        for (f, c) in self.faces().iter().enumerate() {
            for &h in c {
                out[h] = self.labels[f];
            }
        }
        out
    }

    pub fn label_of_face(&self, face: usize) -> usize {
        self.labels[face]
    }

    pub fn euler_data(&self) -> EulerData {
        let v = self.vertices().len();
        let l = self.sigma.len() / 2;
        let n = self.faces().len();
        let g = ((2 - v as i64 + l as i64 - n as i64) / 2) as u32;
        EulerData { g, n, v, l }
    }

    /// Number of vertices of each valency.
    pub fn valence_counts(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for c in self.vertices() {
            *m.entry(c.len()).or_insert(0) += 1;
        }
        m
    }

    /// Perimeters indexed by label `1..=n` (position `j - 1`) for per-edge lengths.
    pub fn perimeters(&self, lengths: &[Rational]) -> Result<Vec<Rational>> {
        let edges = self.edges();
        if lengths.len() != edges.len() {
            return Err(Error::InvalidRibbon(format!("{} lengths for {} edges", lengths.len(), edges.len())));
        }
        if lengths.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidRibbon("edge lengths must be positive".into()));
        }
        let incidence = self.face_edge_incidence();
        Ok(incidence
            .iter()
            .map(|row| row.iter().zip(lengths).map(|(&k, x)| int(k as i64) * x).sum())
            .collect())
    }

    /// Row `j - 1`: how often each edge is traversed by the boundary labelled `j`.
    pub fn face_edge_incidence(&self) -> Vec<Vec<usize>> {
        let edges = self.edges();
        let mut edge_of = vec![0; self.sigma.len()];
        for (e, &(a, b)) in edges.iter().enumerate() {
            edge_of[a] = e;
            edge_of[b] = e;
        }
        let label = self.face_label_of();
        let n = self.labels.len();
        let mut m = vec![vec![0; edges.len()]; n];
        for h in 0..self.sigma.len() {
            m[label[h] - 1][edge_of[h]] += 1;
        }
        m
    }

    /// Minimal traversal code over all roots; equal codes iff isomorphic
    /// (orientation-preserving, label-preserving when `with_labels`).
    pub fn canonical_code(&self, with_labels: bool) -> Vec<usize> {
        let label = self.face_label_of();
        (0..self.sigma.len())
            .map(|root| self.code_from(root, with_labels, &label))
            .min()
            .expect("non-empty graph")
    }

    fn code_from(&self, root: usize, with_labels: bool, label: &[usize]) -> Vec<usize> {
        let h = self.sigma.len();
        let mut new = vec![usize::MAX; h];
        let mut order = Vec::with_capacity(h);
        new[root] = 0;
        order.push(root);
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for y in [self.sigma[x], self.alpha[x]] {
                if new[y] == usize::MAX {
                    new[y] = order.len();
                    order.push(y);
                }
            }
            i += 1;
        }
        let mut code = Vec::with_capacity(3 * h);
        for &old in &order {
            code.push(new[self.sigma[old]]);
            code.push(new[self.alpha[old]]);
            if with_labels {
                code.push(label[old]);
            }
        }
        code
    }

    fn from_code(code: &[usize]) -> RibbonGraph {
        let h = code.len() / 3;
        let sigma: Vec<usize> = (0..h).map(|i| code[3 * i]).collect();
        let alpha: Vec<usize> = (0..h).map(|i| code[3 * i + 1]).collect();
        let faces = cycles(&face_perm(&sigma, &alpha));
        let labels = faces.iter().map(|c| code[3 * c[0] + 2]).collect();
        RibbonGraph { sigma, alpha, labels }
    }

    /// Same graph with faces relabelled by `perm`: old label `j` becomes `perm[j - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> RibbonGraph {
        RibbonGraph {
            sigma: self.sigma.clone(),
            alpha: self.alpha.clone(),
            labels: self.labels.iter().map(|&j| perm[j - 1]).collect(),
        }
    }

    /// Canonical representative of the labelled isomorphism class.
    pub fn canonical(&self) -> RibbonGraph {
        RibbonGraph::from_code(&self.canonical_code(true))
    }
}

impl fmt::Display for RibbonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cyc = |c: &Vec<usize>| format!("({})", c.iter().join(","));
        let s: String = self.vertices().iter().map(cyc).collect();
        let a: String = self.edges().iter().map(|(x, y)| format!("({x},{y})")).collect();
        let l = self
            .faces()
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{}:{}", c[0], self.labels[i]))
            .join(",");
        write!(f, "sigma={s};alpha={a};labels={l}")
    }
}

fn parse_cycles(s: &str, size_hint: Option<usize>) -> std::result::Result<Vec<Vec<usize>>, String> {
    let s = s.trim();
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| format!("expected '(' in {s:?}"))?;
        let close = body.find(')').ok_or_else(|| format!("unclosed cycle in {s:?}"))?;
        let c: Vec<usize> = body[..close]
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad half-edge {x:?}")))
            .collect::<std::result::Result<_, _>>()?;
        if let Some(k) = size_hint {
            if c.len() != k {
                return Err(format!("expected pairs in {s:?}"));
            }
        }
        out.push(c);
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

impl FromStr for RibbonGraph {
    type Err = Error;

    /// `sigma=(0,1,2)(3,4,5);alpha=(0,3)(1,4)(2,5);labels=0:1,1:2,...`
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: String| Error::Parse(format!("ribbon graph {s:?}: {why}"));
        let mut sigma_c = None;
        let mut alpha_c = None;
        let mut labels_s = None;
        for part in s.trim().split(';') {
            let (k, v) = part.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
            match k.trim() {
                "sigma" => sigma_c = Some(parse_cycles(v, None).map_err(bad)?),
                "alpha" => alpha_c = Some(parse_cycles(v, Some(2)).map_err(bad)?),
                "labels" => labels_s = Some(v.trim().to_string()),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let sigma_c = sigma_c.ok_or_else(|| bad("missing sigma".into()))?;
        let alpha_c = alpha_c.ok_or_else(|| bad("missing alpha".into()))?;
        let h: usize = sigma_c.iter().map(|c| c.len()).sum();
        let mut sigma = vec![usize::MAX; h];
        for c in &sigma_c {
            for (i, &x) in c.iter().enumerate() {
                if x >= h || sigma[x] != usize::MAX {
                    return Err(bad(format!("half-edge {x} out of range or repeated")));
                }
                sigma[x] = c[(i + 1) % c.len()];
            }
        }
        let mut alpha = vec![usize::MAX; h];
        for c in &alpha_c {
            let (x, y) = (c[0], c[1]);
            if x >= h || y >= h || alpha[x] != usize::MAX || alpha[y] != usize::MAX {
                return Err(bad(format!("pair ({x},{y}) out of range or repeated")));
            }
            alpha[x] = y;
            alpha[y] = x;
        }
        if alpha.contains(&usize::MAX) {
            return Err(bad("alpha does not cover every half-edge".into()));
        }
        let labels = match labels_s {
            None => None,
            Some(ls) => {
                let faces = cycles(&face_perm(&sigma, &alpha));
                let mut map = BTreeMap::new();
                for pair in ls.split(',').filter(|x| !x.trim().is_empty()) {
                    let (hh, j) = pair.split_once(':').ok_or_else(|| bad(format!("bad label {pair:?}")))?;
                    let hh: usize = hh.trim().parse().map_err(|_| bad(format!("bad label {pair:?}")))?;
                    let j: usize = j.trim().parse().map_err(|_| bad(format!("bad label {pair:?}")))?;
                    map.insert(hh, j);
                }
                let mut labels = Vec::new();
                for c in &faces {
                    let j = map.get(&c[0]).ok_or_else(|| bad(format!("face starting at {} has no label", c[0])))?;
                    labels.push(*j);
                }
                if map.len() != faces.len() {
                    return Err(bad("labels must name each face by its smallest half-edge".into()));
                }
                Some(labels)
            }
        };
        RibbonGraph::new(sigma, alpha, labels)
    }
}

fn matchings(points: &mut Vec<usize>, alpha: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    let Some(&first) = points.first() else {
        visit(alpha);
        return;
    };
    for k in 1..points.len() {
        let other = points[k];
        alpha[first] = other;
        alpha[other] = first;
        let mut rest: Vec<usize> = points.iter().copied().filter(|&x| x != first && x != other).collect();
        matchings(&mut rest, alpha, visit);
    }
}

/// All connected ribbon graphs with `m[i]` vertices of valency `2i + 1` and
/// `n` labelled boundary components, up to labelled isomorphism, canonicalised and sorted.
pub fn enumerate(m: &BTreeMap<u32, u32>, n: usize) -> Result<Vec<RibbonGraph>> {
    let valencies: Vec<usize> = m
        .iter()
        .flat_map(|(&i, &c)| std::iter::repeat_n(2 * i as usize + 1, c as usize))
        .collect();
    if m.keys().any(|&i| i == 0) {
        return Err(Error::Feasibility("valency 1 vertices are not allowed".into()));
    }
    let half: usize = valencies.iter().sum();
    if half % 2 != 0 {
        return Err(Error::Feasibility(format!("{half} half-edges cannot pair into edges")));
    }
    let l = half / 2;
    if l > MAX_EDGES {
        return Err(Error::Feasibility(format!("{l} edges exceeds the bound {MAX_EDGES}")));
    }
    if valencies.is_empty() {
        return Ok(Vec::new());
    }
    let mut sigma = vec![0; half];
    let mut start = 0;
    for &k in &valencies {
        for j in 0..k {
            sigma[start + j] = start + (j + 1) % k;
        }
        start += k;
    }

    let mut unlabelled: BTreeMap<Vec<usize>, RibbonGraph> = BTreeMap::new();
    let mut alpha = vec![0; half];
    let mut points: Vec<usize> = (0..half).collect();
    matchings(&mut points, &mut alpha, &mut |a: &[usize]| {
        if !connected(&sigma, a) || cycles(&face_perm(&sigma, a)).len() != n {
            return;
        }
        if let Ok(gr) = RibbonGraph::new(sigma.clone(), a.to_vec(), None) {
            unlabelled.entry(gr.canonical_code(false)).or_insert(gr);
        }
    });

    let mut labelled = BTreeSet::new();
    for gr in unlabelled.values() {
        for perm in (1..=n).permutations(n) {
            labelled.insert(gr.relabel(&perm).canonical_code(true));
        }
    }
    Ok(labelled.iter().map(|c| RibbonGraph::from_code(c)).collect())
}

/// Unlabelled isomorphism classes, one representative each.
pub fn enumerate_unlabelled(m: &BTreeMap<u32, u32>, n: usize) -> Result<Vec<RibbonGraph>> {
    let mut seen = BTreeMap::new();
    for gr in enumerate(m, n)? {
        seen.entry(gr.canonical_code(false)).or_insert(gr);
    }
    Ok(seen.into_values().collect())
}

/// Full valence counts `i -> m_i` for a profile on `(g, n)`, or `None` when `m_1 < 0`.
pub fn full_counts(profile: &ValenceProfile, g: u32, n: usize) -> Option<BTreeMap<u32, u32>> {
    let m1 = profile.m1(g, n);
    if m1 < 0 {
        return None;
    }
    let mut m: BTreeMap<u32, u32> = profile.higher().clone();
    if m1 > 0 {
        m.insert(1, m1 as u32);
    }
    Some(m)
}

/// Graphs of genus `g` with `n` boundaries for a profile; empty when no vertex can exist.
pub fn enumerate_profile(profile: &ValenceProfile, g: u32, n: usize) -> Result<Vec<RibbonGraph>> {
    if profile.vertex_count(g, n) <= 0 {
        return Ok(Vec::new());
    }
    let Some(m) = full_counts(profile, g, n) else {
        return Ok(Vec::new());
    };
    Ok(enumerate(&m, n)?.into_iter().filter(|gr| gr.euler_data().g == g).collect())
}

/// `P_{i+1} >= 10 P_i` with every entry positive.
pub fn check_spacing(p: &[Rational]) -> Result<()> {
    if p.iter().any(|x| !x.is_positive()) {
        return Err(Error::DegeneratePerimeters("perimeters must be positive".into()));
    }
    for w in p.windows(2) {
        if w[1] < int(10) * &w[0] {
            return Err(Error::DegeneratePerimeters(format!("need P_(i+1) >= 10 P_i, got {} after {}", w[1], w[0])));
        }
    }
    Ok(())
}

/// Metric realisations of one labelled graph with prescribed perimeters, when
/// there are as many edges as boundaries: 1 if the unique solution is positive.
pub fn realisations(graph: &RibbonGraph, perimeters: &[Rational]) -> Result<usize> {
    let inc = graph.face_edge_incidence();
    if inc.len() != perimeters.len() || inc.first().map(|r| r.len()) != Some(inc.len()) {
        return Err(Error::InvalidRibbon("perimeter system is not square".into()));
    }
    let m: Vec<Vec<Rational>> = inc.iter().map(|r| r.iter().map(|&k| int(k as i64)).collect()).collect();
    let x = solve(&m, perimeters)
        .ok_or_else(|| Error::DegeneratePerimeters(format!("{graph}: singular perimeter system")))?;
    Ok(usize::from(x.iter().all(|v| v.is_positive() && !v.is_zero())))
}

fn w04_counts() -> BTreeMap<u32, u32> {
    BTreeMap::from([(1, 1), (2, 1)])
}

/// Points of the zero-dimensional cycle `W` on `M_{0,4}` over the given perimeters,
/// each with orientation `+1`.
pub fn count_w04(perimeters: &[Rational; 4]) -> Result<usize> {
    Ok(count_w04_by_type(perimeters)?.iter().map(|(_, c)| c).sum())
}

/// The same count split over unlabelled graph types.
pub fn count_w04_by_type(perimeters: &[Rational; 4]) -> Result<Vec<(RibbonGraph, usize)>> {
    check_spacing(perimeters)?;
    let mut by_type: BTreeMap<Vec<usize>, (RibbonGraph, usize)> = BTreeMap::new();
    for gr in enumerate_unlabelled(&w04_counts(), 4)? {
        by_type.insert(gr.canonical_code(false), (gr, 0));
    }
    for gr in enumerate(&w04_counts(), 4)? {
        let k = realisations(&gr, perimeters)?;
        by_type.get_mut(&gr.canonical_code(false)).expect("type enumerated").1 += k;
    }
    Ok(by_type.into_values().collect())
}
