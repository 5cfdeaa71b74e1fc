//! Edge, vertex and matching conductance of vertex sets, graph-level minima,
//! and the rounding machinery that turns one-dimensional embeddings into
//! sets of small matching conductance.

use std::cmp::Ordering;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::graph::{membership, normalized_set, Graph, Vertex, WeightedGraph};
use crate::linalg::{symmetric_eigen, DenseMatrix};
use crate::matching::{
    bipartite_max_matching, bipartite_min_vertex_cover, greedy_matching, MatchingMode, WeightedEdge,
};

/// Feasibility slack for `g(u) + g(v) >= (f(u) - f(v))^2`.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-12;

/// Largest `n` for which vertex and edge conductance are found by enumeration.
pub const EXACT_LIMIT: usize = 20;
/// Largest `n` for which matching conductance is found by enumeration.
pub const EXACT_LIMIT_MATCHING: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    Edge,
    Vertex,
    Matching,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Edge, Measure::Vertex, Measure::Matching];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Edge => "edge",
            Measure::Vertex => "vertex",
            Measure::Matching => "matching",
        }
    }

    pub fn exact_limit(self) -> usize {
        match self {
            Measure::Matching => EXACT_LIMIT_MATCHING,
            _ => EXACT_LIMIT,
        }
    }
}

/// A vertex set with its three conductances and a maximum cut matching.
#[derive(Clone, Debug, PartialEq)]
pub struct CutCertificate {
    pub set: Vec<Vertex>,
    /// `|E(S, S^c)| / vol(S)`.
    pub edge_cond: Rational64,
    /// `|∂S| / |S|`.
    pub vertex_cond: Rational64,
    /// `ν(E(S, S^c)) / |S|`.
    pub matching_cond: Rational64,
    /// Disjoint cut edges `(inside, outside)`.
    pub witness_matching: Vec<(Vertex, Vertex)>,
    /// True when the set is a proven minimiser.
    pub exact: bool,
}

impl CutCertificate {
    pub fn value(&self, which: Measure) -> Rational64 {
        match which {
            Measure::Edge => self.edge_cond,
            Measure::Vertex => self.vertex_cond,
            Measure::Matching => self.matching_cond,
        }
    }

    /// Checks the structural invariants against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mask = membership(g.n(), &self.set)?;
        let mut used = vec![false; g.n()];
        for &(a, b) in &self.witness_matching {
            if !g.has_edge(a, b) || !mask[a] || mask[b] {
                return Err(Error::Precondition(format!(
                    "witness edge ({a}, {b}) does not cross the cut"
                )));
            }
            if std::mem::replace(&mut used[a], true) || std::mem::replace(&mut used[b], true) {
                return Err(Error::Precondition(format!(
                    "witness edge ({a}, {b}) shares an endpoint"
                )));
            }
        }
        let s = self.set.len() as i64;
        if self.matching_cond != Rational64::new(self.witness_matching.len() as i64, s) {
            return Err(Error::Precondition(
                "matching conductance disagrees with witness".into(),
            ));
        }
        if self.matching_cond > self.vertex_cond {
            return Err(Error::Precondition(
                "matching conductance exceeds vertex conductance".into(),
            ));
        }
        Ok(())
    }
}

fn ratio_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Serialize for CutCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let witness: Vec<[Vertex; 2]> =
            self.witness_matching.iter().map(|&(a, b)| [a, b]).collect();
        let mut st = s.serialize_struct("CutCertificate", 6)?;
        st.serialize_field("set", &self.set)?;
        st.serialize_field("edge", &ratio_f64(self.edge_cond))?;
        st.serialize_field("vertex", &ratio_f64(self.vertex_cond))?;
        st.serialize_field("matching", &ratio_f64(self.matching_cond))?;
        st.serialize_field("witness", &witness)?;
        st.serialize_field("exact", &self.exact)?;
        st.end()
    }
}

/// Plain and adjusted edge conductance of a set in a weighted graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeConductance {
    /// `u(F(S, S^c)) / u(S)`.
    pub plain: f64,
    /// `(u(F)/u(V)) / (π_u(S) π_u(S^c))`; `None` when `u(S^c) = 0`.
    pub adjusted: Option<f64>,
}

pub fn edge_conductance_of_set(wg: &WeightedGraph, set: &[Vertex]) -> Result<EdgeConductance> {
    let set = normalized_set(wg.n(), set)?;
    let mask = membership(wg.n(), &set)?;
    let cut = wg.cut_weight(&mask);
    let total = wg.total_weight();
    let inside: f64 = set.iter().map(|&x| wg.vertex_weight(x)).sum();
    if inside <= 0.0 {
        return Err(Error::Domain("u(S) = 0".into()));
    }
    let outside = total - inside;
    let adjusted = (outside > 0.0).then(|| (cut / total) / ((inside / total) * (outside / total)));
    Ok(EdgeConductance {
        plain: cut / inside,
        adjusted,
    })
}

/// Unit-weight edge conductance `|E(S, S^c)| / vol(S)` in exact arithmetic.
pub fn edge_conductance_exact(g: &Graph, set: &[Vertex]) -> Result<Rational64> {
    let set = normalized_set(g.n(), set)?;
    let mask = membership(g.n(), &set)?;
    let (cut, vol) = cut_and_volume(g, &mask);
    if vol == 0 {
        return Err(Error::Domain("vol(S) = 0".into()));
    }
    Ok(Rational64::new(cut as i64, vol as i64))
}

/// Unit-weight adjusted edge conductance `|E(S,S^c)| vol(V) / (vol(S) vol(S^c))`.
pub fn adjusted_edge_conductance_exact(g: &Graph, set: &[Vertex]) -> Result<Rational64> {
    let set = normalized_set(g.n(), set)?;
    let mask = membership(g.n(), &set)?;
    let (cut, vol) = cut_and_volume(g, &mask);
    let total = 2 * g.m();
    if vol == 0 || vol == total {
        return Err(Error::Domain(
            "adjusted conductance needs vol(S), vol(S^c) > 0".into(),
        ));
    }
    Ok(Rational64::new(
        (cut * total) as i64,
        (vol * (total - vol)) as i64,
    ))
}

fn cut_and_volume(g: &Graph, mask: &[bool]) -> (usize, usize) {
    let mut cut = 0;
    let mut vol = 0;
    for v in (0..g.n()).filter(|&v| mask[v]) {
        vol += g.degree(v);
        cut += g.neighbors(v).iter().filter(|&&w| !mask[w]).count();
    }
    (cut, vol)
}

pub fn vertex_conductance_of_set(g: &Graph, set: &[Vertex]) -> Result<Rational64> {
    let set = normalized_set(g.n(), set)?;
    let mask = membership(g.n(), &set)?;
    Ok(Rational64::new(
        boundary(g, &mask).len() as i64,
        set.len() as i64,
    ))
}

/// Outer vertex boundary `∂S`.
pub fn boundary(g: &Graph, mask: &[bool]) -> Vec<Vertex> {
    let mut hit = vec![false; g.n()];
    for v in (0..g.n()).filter(|&v| mask[v]) {
        for &w in g.neighbors(v) {
            if !mask[w] {
                hit[w] = true;
            }
        }
    }
    (0..g.n()).filter(|&v| hit[v]).collect()
}

/// Maximum matching of the cut edges `E(S, S^c)`, as `(inside, outside)` pairs.
pub fn cut_matching(g: &Graph, mask: &[bool]) -> Vec<(Vertex, Vertex)> {
    let cut: Vec<(usize, usize)> = cut_edges(g, mask);
    bipartite_max_matching(g.n(), g.n(), &cut)
}

fn cut_edges(g: &Graph, mask: &[bool]) -> Vec<(Vertex, Vertex)> {
    g.edges()
        .iter()
        .filter(|&&(a, b)| mask[a] != mask[b])
        .map(|&(a, b)| if mask[a] { (a, b) } else { (b, a) })
        .collect()
}

/// All three conductances of `S` with a maximum cut matching as witness.
pub fn matching_conductance_of_set(g: &Graph, set: &[Vertex]) -> Result<CutCertificate> {
    let set = normalized_set(g.n(), set)?;
    let mask = membership(g.n(), &set)?;
    let s = set.len() as i64;
    let (cut, vol) = cut_and_volume(g, &mask);
    let witness = cut_matching(g, &mask);
    Ok(CutCertificate {
        edge_cond: if vol == 0 {
            Rational64::zero()
        } else {
            Rational64::new(cut as i64, vol as i64)
        },
        vertex_cond: Rational64::new(boundary(g, &mask).len() as i64, s),
        matching_cond: Rational64::new(witness.len() as i64, s),
        witness_matching: witness,
        set,
        exact: false,
    })
}

/// Whether `S` is admissible for the graph-level minimum of `which`.
pub fn admissible(g: &Graph, which: Measure, set: &[Vertex]) -> bool {
    if set.is_empty() {
        return false;
    }
    match which {
        Measure::Edge => {
            let vol: usize = set.iter().map(|&v| g.degree(v)).sum();
            vol > 0 && 2 * vol <= 2 * g.m()
        }
        _ => 2 * set.len() <= g.n(),
    }
}

/// Orders certificates by value, then lexicographically by set.
pub fn compare_certificates(which: Measure, a: &CutCertificate, b: &CutCertificate) -> Ordering {
    a.value(which)
        .cmp(&b.value(which))
        .then_with(|| a.set.cmp(&b.set))
}

/// Graph-level conductance: exact enumeration below the size limits,
/// otherwise the best of BFS balls and spectral sweep prefixes.
pub fn global_conductances(
    g: &Graph,
    which: Measure,
    exact_limit: Option<usize>,
) -> Result<CutCertificate> {
    g.ensure_connected()?;
    if g.n() < 2 {
        return Err(Error::Domain(
            "conductance needs at least two vertices".into(),
        ));
    }
    let limit = exact_limit
        .unwrap_or(which.exact_limit())
        .min(which.exact_limit());
    if g.n() <= limit {
        return crate::oracle::exact_conductance(g, which);
    }
    heuristic_conductance(g, which)
}

/// Best certificate among structured candidate sets; never flagged exact.
pub fn heuristic_conductance(g: &Graph, which: Measure) -> Result<CutCertificate> {
    let n = g.n();
    let mut candidates: Vec<Vec<Vertex>> = (0..n).map(|v| vec![v]).collect();
    for src in 0..n {
        let dist = g.bfs_distances(src);
        let radius = dist.iter().flatten().copied().max().unwrap_or(0);
        for r in 1..radius {
            candidates.push(
                (0..n)
                    .filter(|&v| dist[v].is_some_and(|d| d <= r))
                    .collect(),
            );
        }
    }
    if let Some(order) = fiedler_order(g) {
        for k in 1..n {
            candidates.push(order[..k].to_vec());
            candidates.push(order[n - k..].to_vec());
        }
    }
    let mut best: Option<CutCertificate> = None;
    for mut set in candidates {
        set.sort_unstable();
        // Both sides of a cut are worth trying when only one is admissible.
        let complement: Vec<Vertex> = {
            let mask = membership(n, &set)?;
            (0..n).filter(|&v| !mask[v]).collect()
        };
        for s in [set, complement] {
            if !admissible(g, which, &s) {
                continue;
            }
            let cert = matching_conductance_of_set(g, &s)?;
            if best
                .as_ref()
                .is_none_or(|b| compare_certificates(which, &cert, b) == Ordering::Less)
            {
                best = Some(cert);
            }
        }
    }
    best.ok_or_else(|| Error::Domain("no admissible set".into()))
}

/// Vertices sorted by the second eigenvector of the normalised adjacency.
fn fiedler_order(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    if !(3..=400).contains(&n) {
        return None;
    }
    let mut a = DenseMatrix::zeros(n);
    for &(u, v) in g.edges() {
        let w = 1.0 / ((g.degree(u) * g.degree(v)) as f64).sqrt();
        a.set(u, v, w);
        a.set(v, u, w);
    }
    let eig = symmetric_eigen(&a, true);
    let vecs = eig.vectors?;
    let fiedler = &vecs[n - 2];
    let score: Vec<f64> = (0..n)
        .map(|v| fiedler[v] / (g.degree(v) as f64).sqrt())
        .collect();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by(|&x, &y| score[x].total_cmp(&score[y]).then(x.cmp(&y)));
    Some(order)
}

/// A one-dimensional embedding `f` with a certificate `g >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding1D {
    pub values: Vec<f64>,
    pub certificate: Vec<f64>,
}

impl Embedding1D {
    pub fn new(values: Vec<f64>, certificate: Vec<f64>) -> Result<Self> {
        if values.len() != certificate.len() {
            return Err(Error::Dimension {
                expected: values.len(),
                got: certificate.len(),
            });
        }
        if let Some(x) = certificate.iter().position(|&c| !(c >= 0.0)) {
            return Err(Error::Domain(format!(
                "certificate is negative at vertex {x}"
            )));
        }
        Ok(Embedding1D {
            values,
            certificate,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `Σg / Σf²`.
    pub fn value(&self) -> f64 {
        let num: f64 = self.certificate.iter().sum();
        let den: f64 = self.values.iter().map(|f| f * f).sum();
        num / den
    }

    pub fn check_feasible(&self, g: &Graph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::Dimension {
                expected: g.n(),
                got: self.n(),
            });
        }
        for &(u, v) in g.edges() {
            let need = (self.values[u] - self.values[v]).powi(2);
            let have = self.certificate[u] + self.certificate[v];
            let excess = need - have;
            if excess > FEASIBILITY_TOLERANCE * need.max(1.0) {
                return Err(Error::Infeasible { u, v, excess });
            }
        }
        Ok(())
    }
}

/// Value of a feasible pair, or the first violated edge.
pub fn feasible_pair_value(g: &Graph, emb: &Embedding1D) -> Result<f64> {
    emb.check_feasible(g)?;
    if emb.values.iter().all(|&f| f == 0.0) {
        return Err(Error::Domain("f is identically zero".into()));
    }
    Ok(emb.value())
}

/// Arcs `u -> v` with weight `f(v)^2 - f(u)^2` on edges with `f(u) < f(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectedWeightedGraph {
    pub n: usize,
    pub arcs: Vec<WeightedEdge>,
}

impl DirectedWeightedGraph {
    /// Underlying undirected weighted edges.
    pub fn undirected(&self) -> Vec<WeightedEdge> {
        self.arcs
            .iter()
            .map(|a| WeightedEdge::new(a.u.min(a.v), a.u.max(a.v), a.weight))
            .collect()
    }
}

pub fn orient_by_embedding(g: &Graph, f: &[f64]) -> Result<DirectedWeightedGraph> {
    if f.len() != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            got: f.len(),
        });
    }
    if let Some(x) = f.iter().position(|&v| !(v >= 0.0)) {
        return Err(Error::Domain(format!("f is negative at vertex {x}")));
    }
    let arcs = g
        .edges()
        .iter()
        .filter(|&&(a, b)| f[a] != f[b])
        .map(|&(a, b)| {
            let (lo, hi) = if f[a] < f[b] { (a, b) } else { (b, a) };
            WeightedEdge::new(lo, hi, f[hi] * f[hi] - f[lo] * f[lo])
        })
        .collect();
    Ok(DirectedWeightedGraph { n: g.n(), arcs })
}

/// Super-level sets `S_t = {f² > t}` for `t` in `{0} ∪ {f(u)²}`, nonempty
/// ones only, largest threshold first.
pub fn sweep_sets(f: &[f64]) -> Vec<(f64, Vec<Vertex>)> {
    let mut levels: Vec<f64> = f.iter().map(|x| x * x).collect();
    levels.push(0.0);
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    levels
        .into_iter()
        .map(|t| {
            (
                t,
                (0..f.len())
                    .filter(|&u| f[u] * f[u] > t)
                    .collect::<Vec<_>>(),
            )
        })
        .filter(|(_, s)| !s.is_empty())
        .collect()
}

/// The sweep set of least matching conductance for a feasible `f >= 0`.
pub fn sweep_cut(g: &Graph, emb: &Embedding1D) -> Result<CutCertificate> {
    if let Some(x) = emb.values.iter().position(|&v| !(v >= 0.0)) {
        return Err(Error::Domain(format!("f is negative at vertex {x}")));
    }
    feasible_pair_value(g, emb)?;
    let mut best: Option<CutCertificate> = None;
    for (_, set) in sweep_sets(&emb.values) {
        let cert = matching_conductance_of_set(g, &set)?;
        if best
            .as_ref()
            .is_none_or(|b| compare_certificates(Measure::Matching, &cert, b) == Ordering::Less)
        {
            best = Some(cert);
        }
    }
    best.ok_or_else(|| Error::Domain("f is identically zero".into()))
}

/// The side chosen by median centring, with the sweep it produced.
#[derive(Clone, Debug)]
pub struct CheegerRound {
    pub certificate: CutCertificate,
    pub median: f64,
    /// Nonnegative side function handed to the sweep.
    pub side: Embedding1D,
    /// `Σg / Σf²` of the input pair.
    pub value: f64,
    /// `16 √value`.
    pub bound: f64,
}

/// Median-centres a mean-zero feasible pair, keeps the heavier one-sided
/// part and sweeps it.
pub fn cheeger_round(g: &Graph, emb: &Embedding1D) -> Result<CheegerRound> {
    let n = emb.n();
    let value = feasible_pair_value(g, emb)?;
    let sum: f64 = emb.values.iter().sum();
    let scale: f64 = emb.values.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
    if sum.abs() > 1e-9 * scale {
        return Err(Error::Precondition(format!("Σf = {sum:e} is not zero")));
    }
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by(|&a, &b| emb.values[a].total_cmp(&emb.values[b]).then(a.cmp(&b)));
    let median = emb.values[order[n.div_ceil(2) - 1]];
    let plus: Vec<f64> = emb.values.iter().map(|&f| (f - median).max(0.0)).collect();
    let minus: Vec<f64> = emb.values.iter().map(|&f| (median - f).max(0.0)).collect();
    let mass = |h: &[f64]| h.iter().map(|x| x * x).sum::<f64>();
    let h = if mass(&minus) >= mass(&plus) {
        minus
    } else {
        plus
    };
    let side = Embedding1D::new(h, emb.certificate.clone())?;
    let certificate = sweep_cut(g, &side)?;
    Ok(CheegerRound {
        certificate,
        median,
        side,
        value,
        bound: 16.0 * value.sqrt(),
    })
}

/// Test pair built from a set: mean-zero two-level `f` and `g` on a minimum
/// vertex cover of the cut edges.
#[derive(Clone, Debug)]
pub struct EasySide {
    pub embedding: Embedding1D,
    /// `n ν / (|S| (n - |S|))`, which is at most `2 Υ(S)`.
    pub value: Rational64,
    pub cover: Vec<Vertex>,
}

pub fn easy_side_certificate(g: &Graph, set: &[Vertex]) -> Result<EasySide> {
    let n = g.n();
    let set = normalized_set(n, set)?;
    if 2 * set.len() > n {
        return Err(Error::Domain(format!("|S| = {} exceeds n/2", set.len())));
    }
    let mask = membership(n, &set)?;
    let s = set.len();
    let cut = cut_edges(g, &mask);
    let matching = bipartite_max_matching(n, n, &cut);
    let (left, right) = bipartite_min_vertex_cover(n, n, &cut, &matching);
    let mut cover: Vec<Vertex> = left.into_iter().chain(right).collect();
    cover.sort_unstable();
    cover.dedup();
    // f = (n - s) on S and -s off S, scaled so that Σf² = 1.
    let norm = ((s * (n - s) * n) as f64).sqrt();
    let values: Vec<f64> = mask
        .iter()
        .map(|&inside| if inside { (n - s) as f64 } else { -(s as f64) } / norm)
        .collect();
    let jump = (n * n) as f64 / (norm * norm);
    let mut certificate = vec![0.0; n];
    for &v in &cover {
        certificate[v] = jump;
    }
    Ok(EasySide {
        embedding: Embedding1D::new(values, certificate)?,
        value: Rational64::new((n * matching.len()) as i64, (s * (n - s)) as i64),
        cover,
    })
}

/// Drops the matched vertices from `S`: `T = S \ V(M)`.
pub fn matching_to_vertex_cut(g: &Graph, cert: &CutCertificate) -> Result<Vec<Vertex>> {
    if cert.matching_cond > Rational64::new(1, 4) {
        return Err(Error::Precondition(format!(
            "Υ(S) = {} exceeds 1/4",
            cert.matching_cond
        )));
    }
    if 2 * cert.set.len() > g.n() {
        return Err(Error::Precondition("|S| exceeds n/2".into()));
    }
    cert.validate(g)?;
    let matched: Vec<Vertex> = cert.witness_matching.iter().map(|&(a, _)| a).collect();
    let t: Vec<Vertex> = cert
        .set
        .iter()
        .copied()
        .filter(|v| !matched.contains(v))
        .collect();
    if t.is_empty() {
        return Err(Error::Precondition("S is entirely matched".into()));
    }
    Ok(t)
}

/// Outcome of projecting a vector embedding to one dimension.
#[derive(Clone, Debug)]
pub struct RoundedEmbedding {
    pub embedding: Embedding1D,
    /// Target dimension `⌈8 ln n⌉`.
    pub dimension: usize,
    pub attempts: usize,
    /// Set when the result is degenerate or had to be rescaled.
    pub warning: Option<String>,
}

pub const ROUNDING_ATTEMPTS: usize = 64;

/// Random Gaussian projection to `⌈8 ln n⌉` coordinates (skipped when the
/// input is already that small), best coordinate by pairwise spread,
/// recentred. Retries with fresh seeds until the pair is feasible.
pub fn round_embedding(
    g: &Graph,
    vectors: &[Vec<f64>],
    cert: &[f64],
    seed: u64,
) -> Result<RoundedEmbedding> {
    let n = g.n();
    if vectors.len() != n || cert.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: vectors.len().min(cert.len()),
        });
    }
    let k = vectors.iter().map(Vec::len).max().unwrap_or(0);
    if vectors.iter().any(|v| v.len() != k) {
        return Err(Error::Argument("vectors have unequal dimensions".into()));
    }
    for &(u, v) in g.edges() {
        let need: f64 = vectors[u]
            .iter()
            .zip(&vectors[v])
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        let excess = need - cert[u] - cert[v];
        if excess > FEASIBILITY_TOLERANCE * need.max(1.0) {
            return Err(Error::Infeasible { u, v, excess });
        }
    }
    let d = ((8.0 * (n.max(2) as f64).ln()).ceil() as usize).max(1);
    let project = k > d;
    let mut fallback: Option<(f64, Vec<f64>)> = None;
    for attempt in 0..ROUNDING_ATTEMPTS {
        let projected: Vec<Vec<f64>> = if project {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
            let r: Vec<Vec<f64>> = (0..d)
                .map(|_| (0..k).map(|_| StandardNormal.sample(&mut rng)).collect())
                .collect();
            let scale = 1.0 / (d as f64).sqrt();
            vectors
                .iter()
                .map(|x| {
                    r.iter()
                        .map(|row| scale * row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
                        .collect()
                })
                .collect()
        } else {
            vectors.to_vec()
        };
        let h = best_coordinate(&projected);
        if h.iter().all(|&x| x.abs() <= 1e-300) {
            return Ok(RoundedEmbedding {
                embedding: Embedding1D::new(vec![0.0; n], cert.to_vec())?,
                dimension: d,
                attempts: attempt + 1,
                warning: Some("embedding collapsed to zero".into()),
            });
        }
        let emb = Embedding1D::new(h, cert.to_vec())?;
        if emb.check_feasible(g).is_ok() {
            return Ok(RoundedEmbedding {
                embedding: emb,
                dimension: d,
                attempts: attempt + 1,
                warning: None,
            });
        }
        // Shrink until feasible and remember the best shrunken candidate.
        let mut shrink = 1.0f64;
        for &(u, v) in g.edges() {
            let diff = (emb.values[u] - emb.values[v]).powi(2);
            if diff > 0.0 {
                shrink = shrink.min(((cert[u] + cert[v]) / diff).sqrt());
            }
        }
        let scaled: Vec<f64> = emb.values.iter().map(|x| x * shrink).collect();
        let value = Embedding1D::new(scaled.clone(), cert.to_vec())?.value();
        if fallback.as_ref().is_none_or(|(best, _)| value < *best) {
            fallback = Some((value, scaled));
        }
        if !project {
            break;
        }
    }
    let (_, values) = fallback.expect("at least one attempt ran");
    Ok(RoundedEmbedding {
        embedding: Embedding1D::new(values, cert.to_vec())?,
        dimension: d,
        attempts: if project { ROUNDING_ATTEMPTS } else { 1 },
        warning: Some("no feasible projection found; rescaled best attempt".into()),
    })
}

/// The coordinate with the largest spread, recentred to mean zero.
fn best_coordinate(vectors: &[Vec<f64>]) -> Vec<f64> {
    let n = vectors.len();
    let k = vectors.first().map_or(0, Vec::len);
    if k == 0 {
        return vec![0.0; n];
    }
    // Σ_{u,v} (x_u - x_v)² = 2n Σ (x_u - mean)².
    let spread = |j: usize| {
        let mean = vectors.iter().map(|x| x[j]).sum::<f64>() / n as f64;
        vectors.iter().map(|x| (x[j] - mean).powi(2)).sum::<f64>()
    };
    let j = (0..k)
        .max_by(|&a, &b| spread(a).total_cmp(&spread(b)).then(b.cmp(&a)))
        .unwrap_or(0);
    let mean = vectors.iter().map(|x| x[j]).sum::<f64>() / n as f64;
    vectors.iter().map(|x| x[j] - mean).collect()
}

/// Greedy directed matching of an orientation and its weight.
pub fn greedy_directed(dg: &DirectedWeightedGraph) -> f64 {
    greedy_matching(&dg.arcs, MatchingMode::Directed).weight()
}
