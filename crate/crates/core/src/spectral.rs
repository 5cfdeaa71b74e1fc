//! Transition matrices, spectral gaps, canonical-path lower bounds, mixing
//! times and hitting times.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{diameter, Graph, RootedSpanningTree, Vertex, WeightedGraph};
use crate::linalg::{solve, symmetric_eigen, DenseMatrix};

/// Row-sum and detailed-balance tolerance.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-12;

/// A row-stochastic matrix. Steps of a time-inhomogeneous schedule are of
/// this type since they need not be reversible.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    m: DenseMatrix,
}

impl StochasticMatrix {
    pub fn new(m: DenseMatrix) -> Result<Self> {
        for (i, row) in m.rows().enumerate() {
            if let Some(j) = row.iter().position(|&p| !(p >= 0.0)) {
                return Err(Error::Domain(format!("entry ({i}, {j}) is negative")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > STOCHASTIC_TOLERANCE * m.n().max(1) as f64 {
                return Err(Error::Domain(format!("row {i} sums to {s}")));
            }
        }
        Ok(StochasticMatrix { m })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(DenseMatrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        StochasticMatrix {
            m: DenseMatrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m.get(i, j)
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.m
    }

    /// `μ P` for a row vector `μ`.
    pub fn step(&self, mu: &[f64]) -> Result<Vec<f64>> {
        if mu.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                got: mu.len(),
            });
        }
        Ok(self.m.left_mul(mu))
    }

    /// Product `self · other`.
    pub fn then(&self, other: &StochasticMatrix) -> StochasticMatrix {
        StochasticMatrix {
            m: self.m.matmul(&other.m),
        }
    }

    /// Every positive off-diagonal entry must be an edge of `g`.
    pub fn check_support(&self, g: &Graph) -> Result<()> {
        if g.n() != self.n() {
            return Err(Error::Dimension {
                expected: g.n(),
                got: self.n(),
            });
        }
        for u in 0..self.n() {
            for v in 0..self.n() {
                if u != v && self.get(u, v) > 0.0 && !g.has_edge(u, v) {
                    return Err(Error::Support { u, v });
                }
            }
        }
        Ok(())
    }

    pub fn is_lazy(&self) -> bool {
        (0..self.n()).all(|x| self.get(x, x) >= 0.5 - STOCHASTIC_TOLERANCE)
    }
}

/// A row-stochastic matrix reversible with respect to a positive measure.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    p: StochasticMatrix,
    pi: Vec<f64>,
}

impl TransitionMatrix {
    pub fn new(p: StochasticMatrix, pi: Vec<f64>) -> Result<Self> {
        let n = p.n();
        if pi.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: pi.len(),
            });
        }
        if let Some(x) = pi.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::Domain(format!("π({x}) is not positive")));
        }
        let total: f64 = pi.iter().sum();
        if (total - 1.0).abs() > STOCHASTIC_TOLERANCE * n as f64 {
            return Err(Error::Domain(format!("π sums to {total}")));
        }
        for u in 0..n {
            for v in u + 1..n {
                let excess = (pi[u] * p.get(u, v) - pi[v] * p.get(v, u)).abs();
                if excess > STOCHASTIC_TOLERANCE {
                    return Err(Error::NotReversible { u, v, excess });
                }
            }
        }
        Ok(TransitionMatrix { p, pi })
    }

    pub fn from_rows(rows: &[Vec<f64>], pi: Vec<f64>) -> Result<Self> {
        Self::new(StochasticMatrix::from_rows(rows)?, pi)
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p.get(i, j)
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn stochastic(&self) -> &StochasticMatrix {
        &self.p
    }

    pub fn is_lazy(&self) -> bool {
        self.p.is_lazy()
    }

    pub fn check_support(&self, g: &Graph) -> Result<()> {
        self.p.check_support(g)
    }

    /// `D^{1/2} P D^{-1/2}` with `D = diag π`, symmetrised.
    pub fn symmetrized(&self) -> DenseMatrix {
        let n = self.n();
        let mut s = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                s.set(i, j, (self.pi[i] / self.pi[j]).sqrt() * self.get(i, j));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let a = 0.5 * (s.get(i, j) + s.get(j, i));
                s.set(i, j, a);
                s.set(j, i, a);
            }
        }
        s
    }
}

/// `P(x, y) = u({x,y}) / u(x)` and `π(x) = u(x) / u(V)`.
pub fn chain_from_weighting(wg: &WeightedGraph) -> Result<TransitionMatrix> {
    let n = wg.n();
    let vw = wg.vertex_weights();
    if let Some(x) = vw.iter().position(|&w| !(w > 0.0)) {
        return Err(Error::Domain(format!("vertex {x} has zero weight")));
    }
    let total: f64 = vw.iter().sum();
    let mut m = DenseMatrix::zeros(n);
    for x in 0..n {
        m.set(x, x, wg.loop_weights()[x] / vw[x]);
    }
    for (&(a, b), &w) in wg.graph().edges().iter().zip(wg.edge_weights()) {
        m.set(a, b, w / vw[a]);
        m.set(b, a, w / vw[b]);
    }
    let pi = vw.iter().map(|w| w / total).collect();
    TransitionMatrix::new(StochasticMatrix::new(m)?, pi)
}

/// `(I + P) / 2`.
pub fn lazify(p: &TransitionMatrix) -> TransitionMatrix {
    let n = p.n();
    let mut m = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { 1.0 } else { 0.0 };
            m.set(i, j, 0.5 * (id + p.get(i, j)));
        }
    }
    TransitionMatrix {
        p: StochasticMatrix { m },
        pi: p.pi.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub gap: f64,
    pub relaxation: f64,
    /// Descending for transition matrices, ascending for Laplacians.
    pub eigenvalues: Vec<f64>,
    pub method: &'static str,
}

pub const METHOD: &str = "jacobi-like";

/// `1 - λ₂` of a reversible chain.
pub fn spectral_gap(p: &TransitionMatrix) -> Result<SpectralReport> {
    if p.n() < 2 {
        return Err(Error::Domain(
            "spectral gap needs at least two states".into(),
        ));
    }
    let eig = symmetric_eigen(&p.symmetrized(), false);
    let mut values = eig.values;
    values.reverse();
    let gap = (1.0 - values[1]).max(0.0);
    Ok(SpectralReport {
        gap,
        relaxation: 1.0 / gap,
        eigenvalues: values,
        method: METHOD,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaplacianReport {
    #[serde(flatten)]
    pub spectrum: SpectralReport,
    /// `Σ_x q(x) / n`.
    pub average_rate: f64,
    pub total_rate: f64,
    pub warning: Option<String>,
}

/// `λ₂` of `L = D - W` built from the edge weights (loops ignored).
pub fn laplacian_gap(wg: &WeightedGraph) -> Result<LaplacianReport> {
    let n = wg.n();
    if n < 2 {
        return Err(Error::Domain(
            "Laplacian gap needs at least two vertices".into(),
        ));
    }
    let mut l = DenseMatrix::zeros(n);
    for (&(a, b), &w) in wg.graph().edges().iter().zip(wg.edge_weights()) {
        l.set(a, b, -w);
        l.set(b, a, -w);
        l.set(a, a, l.get(a, a) + w);
        l.set(b, b, l.get(b, b) + w);
    }
    let total_rate: f64 = (0..n).map(|x| l.get(x, x)).sum();
    let connected = wg.support().is_connected();
    let eig = symmetric_eigen(&l, false);
    let gap = if connected {
        eig.values[1].max(0.0)
    } else {
        0.0
    };
    Ok(LaplacianReport {
        spectrum: SpectralReport {
            gap,
            relaxation: 1.0 / gap,
            eigenvalues: eig.values,
            method: METHOD,
        },
        average_rate: total_rate / n as f64,
        total_rate,
        warning: (!connected).then(|| "support is disconnected; gap is 0".to_string()),
    })
}

/// One path per unordered pair `x < y`, as a vertex sequence from `x` to `y`.
pub type PathSystem = BTreeMap<(Vertex, Vertex), Vec<Vertex>>;

/// BFS shortest paths, neighbors in ascending order.
pub fn shortest_path_system(g: &Graph) -> Result<PathSystem> {
    g.ensure_connected()?;
    let n = g.n();
    let mut out = PathSystem::new();
    for x in 0..n {
        let mut parent = vec![usize::MAX; n];
        parent[x] = x;
        let mut queue = std::collections::VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        for y in x + 1..n {
            let mut path = vec![y];
            let mut cur = y;
            while cur != x {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            out.insert((x, y), path);
        }
    }
    Ok(out)
}

/// Unique tree paths.
pub fn tree_path_system(tree: &RootedSpanningTree) -> PathSystem {
    let n = tree.n();
    let mut out = PathSystem::new();
    for x in 0..n {
        for y in x + 1..n {
            out.insert((x, y), tree.path(x, y));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeMode {
    Discrete,
    Continuous,
}

/// Lower bound on the gap from a path system.
///
/// Discrete: `min_e (u(e)/u(V)) / Σ_{γ ∋ e} π(x)π(y)|γ|`, a bound on `1 - λ₂`
/// of the chain of `wg`. Continuous: `n · min_e q(e) / Σ_{γ ∋ e} |γ|`, a bound
/// on `λ₂` of the Laplacian. Sums run over unordered pairs.
pub fn canonical_paths_bound(
    wg: &WeightedGraph,
    paths: &PathSystem,
    mode: TimeMode,
) -> Result<f64> {
    let g = wg.graph();
    let n = g.n();
    let pi = wg.measure();
    let total = wg.total_weight();
    let mut load = vec![0.0; g.m()];
    for (&(x, y), path) in paths {
        if path.first() != Some(&x) || path.last() != Some(&y) {
            return Err(Error::Argument(format!(
                "path for ({x}, {y}) has wrong endpoints"
            )));
        }
        let len = (path.len() - 1) as f64;
        let pair = match mode {
            TimeMode::Discrete => pi[x] * pi[y] * len,
            TimeMode::Continuous => len,
        };
        for step in path.windows(2) {
            let (a, b) = (step[0], step[1]);
            let idx = g.edge_index(a, b).ok_or(Error::Support { u: a, v: b })?;
            if !(wg.edge_weights()[idx] > 0.0) {
                return Err(Error::Support { u: a, v: b });
            }
            load[idx] += pair;
        }
    }
    let mut best = f64::INFINITY;
    for (idx, &l) in load.iter().enumerate() {
        if l > 0.0 {
            let w = wg.edge_weights()[idx];
            let ratio = match mode {
                TimeMode::Discrete => (w / total) / l,
                TimeMode::Continuous => n as f64 * w / l,
            };
            best = best.min(ratio);
        }
    }
    Ok(if best.is_finite() { best } else { 0.0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TreeBound {
    /// Least adjusted conductance over the edge-removal cuts.
    pub phi_tilde: f64,
    pub diameter: usize,
    pub bound: f64,
}

/// `Φ̃* / diam(T)` over the `n - 1` cuts of a tree-supported weighting.
pub fn tree_canonical_bound(wg: &WeightedGraph) -> Result<TreeBound> {
    let support = wg.support();
    if wg.n() < 2 || !support.is_tree() {
        return Err(Error::Domain(
            "support is not a tree on at least two vertices".into(),
        ));
    }
    let tree = crate::graph::bfs_tree(&support, 0, &wg.vertex_weights())?;
    let total = wg.total_weight();
    let mut phi = f64::INFINITY;
    for (x, p) in tree.tree_edges() {
        let inside = tree.subtree_mass(x) / total;
        let cut = wg.weight(x, p) / total;
        phi = phi.min(cut / (inside * (1.0 - inside)));
    }
    let d = diameter(&support)?;
    Ok(TreeBound {
        phi_tilde: phi,
        diameter: d,
        bound: phi / d as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HatConductance {
    pub value: f64,
    pub argmin: Vertex,
}

/// `min_{x ≠ root} (w({x, prt x}) / w(V)) / (π_w(T_x) π_w(T_x^c))`; edges off
/// the tree are ignored.
pub fn hat_conductance(tree: &RootedSpanningTree, wg: &WeightedGraph) -> Result<HatConductance> {
    if tree.n() != wg.n() {
        return Err(Error::Dimension {
            expected: wg.n(),
            got: tree.n(),
        });
    }
    let vw = wg.vertex_weights();
    let total = wg.total_weight();
    let tree = tree.with_measure(&vw)?;
    let mut best = HatConductance {
        value: f64::INFINITY,
        argmin: tree.root(),
    };
    for (x, p) in tree.tree_edges() {
        let mass = tree.subtree_mass(x) / total;
        let v = (wg.weight(x, p) / total) / (mass * (1.0 - mass));
        if v < best.value {
            best = HatConductance {
                value: v,
                argmin: x,
            };
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Linf,
    Tv,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "status")]
pub enum MixingOutcome {
    Mixed { t: usize },
    Timeout { cap: usize, distance: f64 },
}

impl MixingOutcome {
    pub fn time(&self) -> Option<usize> {
        match *self {
            MixingOutcome::Mixed { t } => Some(t),
            MixingOutcome::Timeout { .. } => None,
        }
    }
}

/// Worst-start distance of the rows of `m` to `pi`.
pub fn distance_to(m: &DenseMatrix, pi: &[f64], metric: Metric) -> f64 {
    m.rows()
        .map(|row| match metric {
            Metric::Linf => row
                .iter()
                .zip(pi)
                .map(|(p, q)| (p / q - 1.0).abs())
                .fold(0.0, f64::max),
            Metric::Tv => 0.5 * row.iter().zip(pi).map(|(p, q)| (p - q).abs()).sum::<f64>(),
        })
        .fold(0.0, f64::max)
}

const MIXING_SLACK: f64 = 1e-12;
const MIXING_HARD_CAP: usize = 5_000_000;

/// Smallest `t` with distance at most `ξ`, evaluated at every `t` up to
/// `⌈64/gap · ln(1/(ξ² π_min))⌉`.
pub fn mixing_time(p: &TransitionMatrix, xi: f64, metric: Metric) -> Result<MixingOutcome> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Argument(format!("ξ = {xi} is outside (0, 1)")));
    }
    let n = p.n();
    let pi_min = p.pi().iter().copied().fold(f64::INFINITY, f64::min);
    let cap = if n < 2 {
        0
    } else {
        let gap = spectral_gap(p)?.gap;
        let c = 64.0 / gap * (1.0 / (xi * xi * pi_min)).ln();
        if c.is_finite() {
            (c.ceil() as usize).min(MIXING_HARD_CAP)
        } else {
            MIXING_HARD_CAP
        }
    };
    let mut m = DenseMatrix::identity(n);
    let mut dist = distance_to(&m, p.pi(), metric);
    for t in 0..=cap {
        if dist <= xi + MIXING_SLACK {
            return Ok(MixingOutcome::Mixed { t });
        }
        if t == cap {
            break;
        }
        m = m.matmul(p.stochastic().matrix());
        dist = distance_to(&m, p.pi(), metric);
    }
    Ok(MixingOutcome::Timeout {
        cap,
        distance: dist,
    })
}

/// Distances at `t = 0..=t_max`.
pub fn distance_profile(p: &TransitionMatrix, t_max: usize, metric: Metric) -> Vec<f64> {
    let mut m = DenseMatrix::identity(p.n());
    let mut out = vec![distance_to(&m, p.pi(), metric)];
    for _ in 0..t_max {
        m = m.matmul(p.stochastic().matrix());
        out.push(distance_to(&m, p.pi(), metric));
    }
    out
}

/// Smallest prefix length of a step sequence after which every start is
/// within `ξ` of `pi`.
pub fn schedule_mixing_time(
    steps: &[StochasticMatrix],
    pi: &[f64],
    xi: f64,
    metric: Metric,
) -> Result<MixingOutcome> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Argument(format!("ξ = {xi} is outside (0, 1)")));
    }
    let n = pi.len();
    let mut m = DenseMatrix::identity(n);
    let mut dist = distance_to(&m, pi, metric);
    for (t, step) in steps.iter().enumerate() {
        if dist <= xi + MIXING_SLACK {
            return Ok(MixingOutcome::Mixed { t });
        }
        if step.n() != n {
            return Err(Error::Dimension {
                expected: n,
                got: step.n(),
            });
        }
        m = m.matmul(step.matrix());
        dist = distance_to(&m, pi, metric);
    }
    if dist <= xi + MIXING_SLACK {
        return Ok(MixingOutcome::Mixed { t: steps.len() });
    }
    Ok(MixingOutcome::Timeout {
        cap: steps.len(),
        distance: dist,
    })
}

/// Expected continuous-time hitting time of the root from `x`:
/// `Σ_{y ∈ anc(x) \ {root}} |T_y| / q({y, prt y})`.
pub fn hitting_time_tree(wg: &WeightedGraph, tree: &RootedSpanningTree, x: Vertex) -> Result<f64> {
    if x >= tree.n() || tree.n() != wg.n() {
        return Err(Error::Argument(format!("vertex {x} is not in the tree")));
    }
    let mut total = 0.0;
    for y in tree.ancestors(x) {
        if y == tree.root() {
            break;
        }
        let q = wg.weight(y, tree.parent(y));
        if !(q > 0.0) {
            return Err(Error::Domain(format!(
                "tree edge ({y}, {}) has no rate",
                tree.parent(y)
            )));
        }
        total += tree.subtree_size(y) as f64 / q;
    }
    Ok(total)
}

pub const HITTING_RESIDUAL: f64 = 1e-9;

/// Expected hitting times of `target` for the continuous-time walk with rates
/// `q(e)`, by first-step equations `q(x) h(x) - Σ_y q(x,y) h(y) = 1`.
pub fn hitting_time_oracle(wg: &WeightedGraph, target: Vertex) -> Result<Vec<f64>> {
    let n = wg.n();
    if target >= n {
        return Err(Error::Argument(format!("target {target} is not a vertex")));
    }
    let others: Vec<Vertex> = (0..n).filter(|&v| v != target).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in others.iter().enumerate() {
        index[v] = i;
    }
    let k = others.len();
    let mut a = DenseMatrix::zeros(k);
    for (&(u, v), &w) in wg.graph().edges().iter().zip(wg.edge_weights()) {
        for (x, y) in [(u, v), (v, u)] {
            if x == target {
                continue;
            }
            let i = index[x];
            a.set(i, i, a.get(i, i) + w);
            if y != target {
                a.set(i, index[y], a.get(i, index[y]) - w);
            }
        }
    }
    let b = vec![1.0; k];
    let h = solve(&a, &b)?;
    let scale = h.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for i in 0..k {
        let r: f64 = (0..k).map(|j| a.get(i, j) * h[j]).sum::<f64>() - 1.0;
        if r.abs() > HITTING_RESIDUAL * scale {
            return Err(Error::Singular);
        }
    }
    let mut out = vec![0.0; n];
    for (i, &v) in others.iter().enumerate() {
        out[v] = h[i];
    }
    Ok(out)
}
