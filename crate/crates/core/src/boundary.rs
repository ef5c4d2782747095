//! Stable dual graphs and integrals of pushforwards of decorated boundary strata.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_traits::Zero;

use crate::combinatorics::assignments;
use crate::engine::IntersectionEngine;
use crate::error::{Error, Result};
use crate::kappa::{mixed_integral, KappaMonomial};
use crate::rational::{one, ratio, zero, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub genus: u32,
    /// Marker labels in `1..=n`, ascending.
    pub markers: Vec<usize>,
}

impl Vertex {
    pub fn new(genus: u32, markers: &[usize]) -> Self {
        let mut m = markers.to_vec();
        m.sort_unstable();
        Vertex { genus, markers: m }
    }
}

/// Vertices with genus and markers; each edge joins two vertex indices
/// (equal for a self-loop). Edge `e` has half-edges `(e, 0)` at `edges[e].0`
/// and `(e, 1)` at `edges[e].1`.
///
/// Local point order at a vertex: its markers ascending, then its half-edges
/// in edge order, side 0 before side 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Self {
        DualGraph { vertices, edges }
    }

    /// Half-edges at `v` in local order.
    pub fn half_edges_at(&self, v: usize) -> Vec<(usize, u8)> {
        let mut out = Vec::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if a == v {
                out.push((e, 0));
            }
            if b == v {
                out.push((e, 1));
            }
        }
        out
    }

    /// `h_v + l_v`: markers plus branches at `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.vertices[v].markers.len() + self.half_edges_at(v).len()
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.vertices.len();
        if nv == 0 {
            return false;
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// First Betti number, assuming connectedness.
    pub fn h1(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    pub fn arithmetic_genus(&self) -> i64 {
        self.vertices.iter().map(|v| v.genus as i64).sum::<i64>() + self.h1()
    }

    /// Genus and marker count add up, every vertex is stable, and the graph is connected.
    pub fn validate(&self, g: u32, n: usize) -> bool {
        if self.edges.iter().any(|&(a, b)| a >= self.vertices.len() || b >= self.vertices.len()) {
            return false;
        }
        if !self.is_connected() {
            return false;
        }
        let mut markers: Vec<usize> = self.vertices.iter().flat_map(|v| v.markers.iter().copied()).collect();
        markers.sort_unstable();
        if markers != (1..=n).collect::<Vec<_>>() {
            return false;
        }
        if self.arithmetic_genus() != g as i64 {
            return false;
        }
        (0..self.vertices.len()).all(|v| 2 * self.vertices[v].genus as i64 - 2 + self.valence(v) as i64 > 0)
    }

    fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| (a == u && b == v) || (a == v && b == u))
            .count()
    }

    /// Order of the automorphism group acting on half-edges and fixing genera and markers.
    pub fn automorphism_count(&self) -> u64 {
        let nv = self.vertices.len();
        let fact = |k: usize| (1..=k as u64).product::<u64>();
        let mut total = 0u64;
        for perm in (0..nv).permutations(nv) {
            if (0..nv).any(|v| self.vertices[v] != self.vertices[perm[v]]) {
                continue;
            }
            let mut ways = 1u64;
            for u in 0..nv {
                for v in u..nv {
                    let m = self.multiplicity(u, v);
                    if m != self.multiplicity(perm[u], perm[v]) {
                        ways = 0;
                        break;
                    }
                    ways *= fact(m);
                    if u == v {
                        ways <<= m;
                    }
                }
                if ways == 0 {
                    break;
                }
            }
            total += ways;
        }
        total
    }

    /// Vertices sorted by (genus, smallest marker), edges as sorted ordered pairs.
    pub fn canonical(&self) -> DualGraph {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        let key = |v: &Vertex| (v.genus, v.markers.first().copied().unwrap_or(usize::MAX));
        order.sort_by_key(|&i| key(&self.vertices[i]));
        let mut pos = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let vertices = order.iter().map(|&i| self.vertices[i].clone()).collect();
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (pos[a], pos[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        DualGraph { vertices, edges }
    }
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({},{{{}}})", v.genus, v.markers.iter().join(",")))
            .collect();
        let es: Vec<String> = self.edges.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "v:{}|e:{}", vs.join(";"), es.join(";"))
    }
}

impl FromStr for DualGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("dual graph {s:?}: {what}"));
        let s = s.trim();
        let (vpart, epart) = s.split_once('|').ok_or_else(|| bad("missing '|'"))?;
        let vpart = vpart.strip_prefix("v:").ok_or_else(|| bad("missing 'v:'"))?;
        let epart = epart.strip_prefix("e:").ok_or_else(|| bad("missing 'e:'"))?;
        let mut vertices = Vec::new();
        for item in vpart.split(';').filter(|x| !x.is_empty()) {
            let inner = item
                .trim()
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| bad("vertex must be (p,{...})"))?;
            let (p, m) = inner.split_once(',').ok_or_else(|| bad("vertex must be (p,{...})"))?;
            let genus = p.trim().parse::<u32>().map_err(|_| bad("bad genus"))?;
            let m = m
                .trim()
                .strip_prefix('{')
                .and_then(|x| x.strip_suffix('}'))
                .ok_or_else(|| bad("markers must be {...}"))?;
            let markers = m
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad("bad marker")))
                .collect::<Result<Vec<_>>>()?;
            vertices.push(Vertex::new(genus, &markers));
        }
        let mut edges = Vec::new();
        for item in epart.split(';').filter(|x| !x.trim().is_empty()) {
            let inner = item
                .trim()
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| bad("edge must be (i,j)"))?;
            let (a, b) = inner.split_once(',').ok_or_else(|| bad("edge must be (i,j)"))?;
            let a = a.trim().parse::<usize>().map_err(|_| bad("bad edge end"))?;
            let b = b.trim().parse::<usize>().map_err(|_| bad("bad edge end"))?;
            if a >= vertices.len() || b >= vertices.len() {
                return Err(bad("edge end out of range"));
            }
            edges.push((a, b));
        }
        Ok(DualGraph { vertices, edges })
    }
}

/// Psi exponents on a vertex's local points plus a kappa monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexDecoration {
    pub psi: Vec<u32>,
    pub kappa: KappaMonomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoration(pub Vec<VertexDecoration>);

impl Decoration {
    /// The class `1` on every vertex.
    pub fn trivial(graph: &DualGraph) -> Self {
        Decoration(
            (0..graph.vertices.len())
                .map(|v| VertexDecoration {
                    psi: vec![0; graph.valence(v)],
                    kappa: KappaMonomial::one(),
                })
                .collect(),
        )
    }

    /// `psi` on local point `slot` of vertex `v`.
    pub fn with_psi(mut self, v: usize, slot: usize) -> Self {
        self.0[v].psi[slot] += 1;
        self
    }

    pub fn with_kappa(mut self, v: usize, kappa: &[u32]) -> Self {
        let k = self.0[v].kappa.mul(&KappaMonomial::new(kappa));
        self.0[v].kappa = k;
        self
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|d| format!("psi={} kappa={}", d.psi.iter().join(","), d.kappa.indices().iter().join(",")))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl FromStr for Decoration {
    type Err = Error;

    /// `psi=0,1 kappa=1;psi=0 kappa=` with one `;`-separated entry per vertex.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("decoration {s:?}: {what}"));
        let list = |x: &str| -> Result<Vec<u32>> {
            x.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<u32>().map_err(|_| bad("bad exponent")))
                .collect()
        };
        let mut out = Vec::new();
        for item in s.split(';') {
            let mut psi = Vec::new();
            let mut kappa = Vec::new();
            for field in item.split_whitespace() {
                if let Some(x) = field.strip_prefix("psi=") {
                    psi = list(x)?;
                } else if let Some(x) = field.strip_prefix("kappa=") {
                    kappa = list(x)?;
                } else {
                    return Err(bad("expected psi=... or kappa=..."));
                }
            }
            if kappa.contains(&0) {
                return Err(bad("kappa indices must be positive"));
            }
            out.push(VertexDecoration { psi, kappa: KappaMonomial::new(&kappa) });
        }
        Ok(Decoration(out))
    }
}

/// `int_{M_{g,n}} xi_Gamma_*(decoration) * prod psi_i^{d_i}` as a product of
/// vertex integrals. No automorphism factor is applied.
pub fn pushforward_integral(
    engine: &IntersectionEngine,
    g: u32,
    n: usize,
    graph: &DualGraph,
    decoration: &Decoration,
    d: &[u32],
) -> Result<Rational> {
    if !graph.validate(g, n) {
        return Err(Error::InvalidGraph(format!("{graph} is not a stable graph of type ({g},{n})")));
    }
    if d.len() != n {
        return Err(Error::ShapeMismatch(format!("{} psi exponents for n = {n}", d.len())));
    }
    if decoration.0.len() != graph.vertices.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} vertex decorations for {} vertices",
            decoration.0.len(),
            graph.vertices.len()
        )));
    }
    let mut total = one();
    for (v, vert) in graph.vertices.iter().enumerate() {
        let dec = &decoration.0[v];
        if dec.psi.len() != graph.valence(v) {
            return Err(Error::ShapeMismatch(format!(
                "vertex {v} has {} points but {} psi exponents",
                graph.valence(v),
                dec.psi.len()
            )));
        }
        let mut psi = dec.psi.clone();
        for (slot, &m) in vert.markers.iter().enumerate() {
            psi[slot] += d[m - 1];
        }
        total *= mixed_integral(engine, vert.genus, &psi, &dec.kappa);
        if total.is_zero() {
            break;
        }
    }
    Ok(total)
}

fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (1..=n).filter(|i| !set.contains(i)).collect()
}

/// `Gamma_irr`: one vertex of genus `g - 1` with a self-loop.
pub fn irreducible_graph(g: u32, n: usize) -> Option<DualGraph> {
    let graph = DualGraph::new(vec![Vertex::new(g.checked_sub(1)?, &(1..=n).collect::<Vec<_>>())], vec![(0, 0)]);
    graph.validate(g, n).then_some(graph)
}

/// `Gamma_{q,I}`: genus `q` with markers `I` joined to genus `g - q` with the rest.
pub fn separating_graph(g: u32, n: usize, q: u32, subset: &[usize]) -> Option<DualGraph> {
    let graph = DualGraph::new(
        vec![Vertex::new(q, subset), Vertex::new(g.checked_sub(q)?, &complement(n, subset))],
        vec![(0, 1)],
    );
    graph.validate(g, n).then_some(graph)
}

/// Every stable `Gamma_{q,I}` with `0 <= q <= g`, `I` any subset (ordered sides).
pub fn separating_graphs(g: u32, n: usize) -> Vec<DualGraph> {
    let mut out = Vec::new();
    for q in 0..=g {
        for k in 0..=n {
            for subset in (1..=n).combinations(k) {
                out.extend(separating_graph(g, n, q, &subset));
            }
        }
    }
    out
}

// Stable graphs of a fixed shape over every labelled genus assignment with the
// given sum and every labelled distribution of markers.
fn labelled_family(g: u32, n: usize, nv: usize, genus_sum: u32, edges: &[(usize, usize)]) -> Vec<DualGraph> {
    let mut out = Vec::new();
    let genus_lists: Vec<Vec<u32>> = crate::combinatorics::compositions(genus_sum, nv);
    for genera in &genus_lists {
        for assign in assignments(n, nv) {
            let vertices = (0..nv)
                .map(|v| {
                    let m: Vec<usize> = (1..=n).filter(|&i| assign[i - 1] == v).collect();
                    Vertex::new(genera[v], &m)
                })
                .collect();
            let graph = DualGraph::new(vertices, edges.to_vec());
            if graph.validate(g, n) {
                out.push(graph);
            }
        }
    }
    out
}

/// Codimension-2 graph A: one vertex of genus `g - 2` with two self-loops.
pub fn graphs_a(g: u32, n: usize) -> Vec<DualGraph> {
    match g.checked_sub(2) {
        Some(s) => labelled_family(g, n, 1, s, &[(0, 0), (0, 0)]),
        None => Vec::new(),
    }
}

/// Codimension-2 graph B: a self-loop on vertex 0 and an edge to vertex 1; genera sum to `g - 1`.
pub fn graphs_b(g: u32, n: usize) -> Vec<DualGraph> {
    match g.checked_sub(1) {
        Some(s) => labelled_family(g, n, 2, s, &[(0, 0), (0, 1)]),
        None => Vec::new(),
    }
}

/// Codimension-2 graph C: a path with middle vertex 0; genera sum to `g`.
pub fn graphs_c(g: u32, n: usize) -> Vec<DualGraph> {
    labelled_family(g, n, 3, g, &[(0, 1), (0, 2)])
}

/// Codimension-2 graph D: two vertices joined by two edges; genera sum to `g - 1`.
pub fn graphs_d(g: u32, n: usize) -> Vec<DualGraph> {
    match g.checked_sub(1) {
        Some(s) => labelled_family(g, n, 2, s, &[(0, 1), (0, 1)]),
        None => Vec::new(),
    }
}

/// `int delta * prod psi^{d_i}` with `delta = 1/2 xi_irr* + 1/2 sum_{q,I} xi_{q,I}*`.
pub fn delta_integral(engine: &IntersectionEngine, g: u32, n: usize, d: &[u32]) -> Result<Rational> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::OutOfRange(format!("M_{{{g},{n}}} is not stable")));
    }
    let half = ratio(1, 2);
    let mut total = zero();
    if let Some(gr) = irreducible_graph(g, n) {
        total += &half * pushforward_integral(engine, g, n, &gr, &Decoration::trivial(&gr), d)?;
    }
    for gr in separating_graphs(g, n) {
        total += &half * pushforward_integral(engine, g, n, &gr, &Decoration::trivial(&gr), d)?;
    }
    Ok(total)
}

/// Whether `(p, h)` names a distinct divisor `delta_{p,h}`: `p <= g/2`, and `h <= n/2` when `2p = g`.
pub fn is_canonical_ph(g: u32, n: usize, p: u32, h: usize) -> bool {
    2 * p <= g && h <= n && (2 * p < g || 2 * h <= n)
}

/// `int delta_{p,h} * prod psi^{d_i}`, each divisor counted once.
pub fn delta_ph_integral(engine: &IntersectionEngine, g: u32, n: usize, p: u32, h: usize, d: &[u32]) -> Result<Rational> {
    if !is_canonical_ph(g, n, p, h) {
        return Err(Error::OutOfRange(format!(
            "delta_{{{p},{h}}} on M_{{{g},{n}}}: need p <= g/2, and h <= n/2 when 2p = g"
        )));
    }
    let mut total = zero();
    for subset in (1..=n).combinations(h) {
        if let Some(gr) = separating_graph(g, n, p, &subset) {
            total += pushforward_integral(engine, g, n, &gr, &Decoration::trivial(&gr), d)?;
        }
    }
    if 2 * p == g && 2 * h == n {
        total /= Rational::from_integer(2.into());
    }
    Ok(total)
}

/// Exponents of `beta_{q,j}` on `M_{g,n}`:
/// `q = 0`: `psi_1^{s-j} psi_2 ... psi_{j-1}` with `s = 3g - 2 + n`;
/// `q > 0`: `psi_1^{s-j} psi_2^{3q-1} psi_3 ... psi_{j+1}` with `s = 3(g-q) - 2 + n`.
pub fn beta_monomial(g: u32, n: usize, q: u32, j: usize) -> Result<Vec<u32>> {
    let err = |why: &str| Err(Error::BetaDomain(format!("beta_{{{q},{j}}} on M_{{{g},{n}}}: {why}")));
    let mut e = vec![0u32; n];
    if q == 0 {
        let s = 3 * g as i64 - 2 + n as i64;
        if j < 2 || j - 1 > n || s < j as i64 {
            return err("need 2 <= j <= n + 1 and j <= 3g - 2 + n");
        }
        e[0] = (s - j as i64) as u32;
        for x in e.iter_mut().take(j - 1).skip(1) {
            *x = 1;
        }
    } else {
        if q > g {
            return err("need q <= g");
        }
        let s = 3 * (g - q) as i64 - 2 + n as i64;
        if j < 1 || j + 1 > n || s < j as i64 {
            return err("need 1 <= j <= n - 1 and j <= 3(g-q) - 2 + n");
        }
        e[0] = (s - j as i64) as u32;
        e[1] = 3 * q - 1;
        for x in e.iter_mut().take(j + 1).skip(2) {
            *x = 1;
        }
    }
    let deg: i64 = e.iter().map(|&x| x as i64).sum();
    if deg != 3 * g as i64 - 4 + n as i64 {
        return err("degree differs from 3g - 4 + n");
    }
    Ok(e)
}

/// `alpha_s = psi_1 ... psi_{n-2} psi_{n-1}^s psi_n^{3g-s-2}`.
pub fn alpha_monomial(g: u32, n: usize, s: u32) -> Result<Vec<u32>> {
    let d = 3 * g as i64 - s as i64 - 2;
    if n < 2 || d < 0 {
        return Err(Error::OutOfRange(format!("alpha_{s} on M_{{{g},{n}}} needs n >= 2 and s <= 3g - 2")));
    }
    let mut e = vec![1u32; n - 2];
    e.push(s);
    e.push(d as u32);
    Ok(e)
}

/// `int delta_{p,h} * beta_{q,j}`.
pub fn delta_ph_beta_integral(
    engine: &IntersectionEngine,
    g: u32,
    n: usize,
    p: u32,
    h: usize,
    q: u32,
    j: usize,
) -> Result<Rational> {
    let beta = beta_monomial(g, n, q, j)?;
    delta_ph_integral(engine, g, n, p, h, &beta)
}
