//! Chain constructions: almost-mixing discrete-time chains on a weighted BFS
//! tree, continuous-time chains with average leave-rate at most one, and
//! perfectly mixing time-inhomogeneous schedules.

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_tree, diameter, Graph, RootedSpanningTree, Vertex, WeightedGraph};
use crate::linalg::DenseMatrix;
use crate::spectral::{
    canonical_paths_bound, chain_from_weighting, hat_conductance, hitting_time_oracle,
    hitting_time_tree, laplacian_gap, lazify, spectral_gap, tree_path_system, StochasticMatrix,
    TimeMode, TransitionMatrix,
};

/// Slack on inequalities between computed floating-point quantities.
const SLACK: f64 = 1e-12;
/// Slack on eigensolver-derived gaps.
const GAP_SLACK: f64 = 1e-9;

/// A strictly positive probability vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetDistribution {
    probabilities: Vec<f64>,
}

impl TargetDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::Argument("distribution is empty".into()));
        }
        if let Some(x) = probabilities
            .iter()
            .position(|&p| !(p > 0.0) || !p.is_finite())
        {
            return Err(Error::Domain(format!("π({x}) is not positive")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > SLACK * probabilities.len() as f64 {
            return Err(Error::Domain(format!("π sums to {total}")));
        }
        Ok(TargetDistribution { probabilities })
    }

    /// Rescales positive weights to sum to one.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Domain("weights do not have positive sum".into()));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn n(&self) -> usize {
        self.probabilities.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn min(&self) -> f64 {
        self.probabilities
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `w₀({x,y}) = π(x)P(x,y)` on the support of `P`, loops `π(x)P(x,x)`.
pub fn base_weighting_from_chain(p: &TransitionMatrix) -> Result<WeightedGraph> {
    let n = p.n();
    let pi = p.pi();
    let mut edges = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if p.get(x, y) > 0.0 || p.get(y, x) > 0.0 {
                edges.push((x, y));
            }
        }
    }
    let graph = Graph::new(n, edges)?;
    let weights = graph
        .edges()
        .iter()
        .map(|&(x, y)| 0.5 * (pi[x] * p.get(x, y) + pi[y] * p.get(y, x)))
        .collect();
    let loops = (0..n).map(|x| pi[x] * p.get(x, x)).collect();
    WeightedGraph::new(graph, weights, loops)
}

/// Output of the almost-mixing construction with every quantity its
/// guarantees refer to.
#[derive(Clone, Debug, Serialize)]
pub struct AlmostMixReport {
    #[serde(skip)]
    pub weighting: WeightedGraph,
    #[serde(skip)]
    pub tree: RootedSpanningTree,
    pub root: Vertex,
    pub epsilon: f64,
    /// `ε / (2 diam T)`.
    pub eta: f64,
    pub tree_diameter: usize,
    pub graph_diameter: usize,
    /// `w(V)`.
    pub total_weight: f64,
    /// `min_x π_w(x) / π(x)`.
    pub min_ratio: f64,
    /// Least ratio of edge flows `(w(e)/w(V)) / w₀(e)` over the base support.
    pub edge_flow_ratio: f64,
    /// `Φ̂*` over the tree cuts.
    pub hat_conductance: f64,
    /// `ε / (6 diam T)`.
    pub hat_bound: f64,
    /// Gap of `Q`.
    pub gap_chain: f64,
    /// `ε / (6 diam T²)`.
    pub gap_chain_bound: f64,
    /// `ε / (24 diam G²)`.
    pub gap_chain_bound_graph: f64,
    /// Gap of the lazification `Q'`.
    pub gap: f64,
    /// `ε / (48 diam G²)`.
    pub gap_bound: f64,
}

impl AlmostMixReport {
    /// Violated guarantees, one message each.
    pub fn check(&self) -> Vec<String> {
        let eps = self.epsilon;
        let mut out = Vec::new();
        if self.total_weight > 1.0 + eps + SLACK {
            out.push(format!("w(V) = {} exceeds 1 + ε", self.total_weight));
        }
        if self.min_ratio < 1.0 / (1.0 + eps) - SLACK {
            out.push(format!("min π_w/π = {} is below 1/(1+ε)", self.min_ratio));
        }
        if self.edge_flow_ratio < 1.0 - eps - SLACK {
            out.push(format!(
                "edge flow ratio {} is below 1 - ε",
                self.edge_flow_ratio
            ));
        }
        if self.hat_conductance < self.hat_bound - SLACK {
            out.push(format!(
                "Φ̂* = {} is below ε/(6D) = {}",
                self.hat_conductance, self.hat_bound
            ));
        }
        if self.gap_chain < self.gap_chain_bound - GAP_SLACK {
            out.push(format!(
                "gap(Q) = {} is below ε/(6D²) = {}",
                self.gap_chain, self.gap_chain_bound
            ));
        }
        if self.gap < self.gap_bound - GAP_SLACK {
            out.push(format!(
                "gap(Q') = {} is below ε/(48 diam²) = {}",
                self.gap, self.gap_bound
            ));
        }
        out
    }

    pub fn chain(&self) -> Result<TransitionMatrix> {
        chain_from_weighting(&self.weighting)
    }

    /// `24 ε⁻¹ diam G² ln(ξ⁻² π_min⁻¹)`.
    pub fn mixing_bound(&self, xi: f64, pi_min: f64) -> f64 {
        24.0 / self.epsilon * (self.graph_diameter as f64).powi(2) * (1.0 / (xi * xi * pi_min)).ln()
    }
}

/// `w = w₀ + η w₁` with `w₁({x, prt x}) = π(T_x)` on a BFS tree and
/// `η = ε / (2 diam T)`. The default base is `π` on self-loops.
pub fn almost_mixing_weighting(
    g: &Graph,
    pi: &TargetDistribution,
    epsilon: f64,
    base: Option<&WeightedGraph>,
    root: Option<Vertex>,
) -> Result<AlmostMixReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Argument(format!("ε = {epsilon} is outside (0, 1)")));
    }
    let n = g.n();
    if pi.n() != n {
        return Err(Error::Dimension {
            expected: n,
            got: pi.n(),
        });
    }
    g.ensure_connected()?;
    if n < 2 {
        return Err(Error::Domain(
            "construction needs at least two vertices".into(),
        ));
    }
    let p = pi.as_slice();
    let mut edge_w = vec![0.0; g.m()];
    let mut loop_w = p.to_vec();
    if let Some(b) = base {
        if b.n() != n {
            return Err(Error::Dimension {
                expected: n,
                got: b.n(),
            });
        }
        if (b.total_weight() - 1.0).abs() > 1e-9 {
            return Err(Error::Argument(format!(
                "base has total weight {}",
                b.total_weight()
            )));
        }
        let induced = b.vertex_weights();
        if let Some(x) = (0..n).find(|&x| (induced[x] - p[x]).abs() > 1e-9) {
            return Err(Error::Argument(format!(
                "base induces {} at vertex {x}, target is {}",
                induced[x], p[x]
            )));
        }
        for (&(a, c), &w) in b.graph().edges().iter().zip(b.edge_weights()) {
            if w > 0.0 {
                let idx = g.edge_index(a, c).ok_or(Error::Support { u: a, v: c })?;
                edge_w[idx] = w;
            }
        }
        loop_w = b.loop_weights().to_vec();
    }
    let base_w = WeightedGraph::new(g.clone(), edge_w.clone(), loop_w.clone())?;

    let root = match root {
        Some(r) if r < n => r,
        Some(r) => return Err(Error::Argument(format!("root {r} is not a vertex"))),
        None => g.default_root()?,
    };
    let tree = bfs_tree(g, root, p)?;
    let d = tree.diameter();
    let graph_diameter = diameter(g)?;
    let eta = epsilon / (2.0 * d as f64);
    for (x, par) in tree.tree_edges() {
        let idx = g.edge_index(x, par).expect("tree edges are graph edges");
        edge_w[idx] += eta * tree.subtree_mass(x);
    }
    let weighting = WeightedGraph::new(g.clone(), edge_w, loop_w)?;

    let total_weight = weighting.total_weight();
    let pw = weighting.measure();
    let min_ratio = (0..n).map(|x| pw[x] / p[x]).fold(f64::INFINITY, f64::min);
    let mut edge_flow_ratio = f64::INFINITY;
    for (idx, &w0) in base_w.edge_weights().iter().enumerate() {
        if w0 > 0.0 {
            edge_flow_ratio =
                edge_flow_ratio.min(weighting.edge_weights()[idx] / total_weight / w0);
        }
    }
    for (x, &w0) in base_w.loop_weights().iter().enumerate() {
        if w0 > 0.0 {
            edge_flow_ratio = edge_flow_ratio.min(weighting.loop_weights()[x] / total_weight / w0);
        }
    }
    let hat = hat_conductance(&tree, &weighting)?.value;
    let q = chain_from_weighting(&weighting)?;
    let gap_chain = spectral_gap(&q)?.gap;
    let gap = spectral_gap(&lazify(&q))?.gap;
    let df = d as f64;
    let dg = graph_diameter as f64;
    Ok(AlmostMixReport {
        weighting,
        tree,
        root,
        epsilon,
        eta,
        tree_diameter: d,
        graph_diameter,
        total_weight,
        min_ratio,
        edge_flow_ratio,
        hat_conductance: hat,
        hat_bound: epsilon / (6.0 * df),
        gap_chain,
        gap_chain_bound: epsilon / (6.0 * df * df),
        gap_chain_bound_graph: epsilon / (24.0 * dg * dg),
        gap,
        gap_bound: epsilon / (48.0 * dg * dg),
    })
}

/// Output of the continuous-time construction.
#[derive(Clone, Debug, Serialize)]
pub struct ContinuousReport {
    #[serde(skip)]
    pub weighting: WeightedGraph,
    #[serde(skip)]
    pub tree: RootedSpanningTree,
    pub root: Vertex,
    pub tree_diameter: usize,
    pub graph_diameter: usize,
    /// `Σ_x q(x)`.
    pub total_rate: f64,
    pub average_rate: f64,
    /// `λ₂` of the Laplacian.
    pub lambda2: f64,
    /// `1 / (4 diam T²)`.
    pub lambda2_bound: f64,
    /// `1 / (16 diam G²)`.
    pub lambda2_bound_graph: f64,
    /// Continuous-time canonical-paths bound along tree paths.
    pub canonical_bound: f64,
    /// `E_x[τ_root]` by the tree formula.
    pub hitting_times: Vec<f64>,
    /// Largest disagreement with the linear-solve oracle.
    pub hitting_disagreement: f64,
    pub max_hitting_time: f64,
    /// `8 diam G²`.
    pub hitting_bound: f64,
}

pub const HITTING_AGREEMENT: f64 = 1e-9;

impl ContinuousReport {
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.hitting_times.len() as f64;
        if self.total_rate > n + SLACK * n {
            out.push(format!("total rate {} exceeds n", self.total_rate));
        }
        if self.average_rate > 1.0 + SLACK {
            out.push(format!(
                "average leave-rate {} exceeds 1",
                self.average_rate
            ));
        }
        if self.lambda2 < self.lambda2_bound - GAP_SLACK {
            out.push(format!(
                "λ₂ = {} is below 1/(4D²) = {}",
                self.lambda2, self.lambda2_bound
            ));
        }
        if self.lambda2 < self.lambda2_bound_graph - GAP_SLACK {
            out.push(format!("λ₂ = {} is below 1/(16 diam²)", self.lambda2));
        }
        if self.canonical_bound > self.lambda2 + GAP_SLACK {
            out.push(format!(
                "canonical bound {} exceeds λ₂ = {}",
                self.canonical_bound, self.lambda2
            ));
        }
        if self.hitting_disagreement > HITTING_AGREEMENT {
            out.push(format!(
                "tree hitting formula disagrees by {:e}",
                self.hitting_disagreement
            ));
        }
        if self.max_hitting_time > self.hitting_bound + SLACK * self.hitting_bound {
            out.push(format!(
                "max hitting time {} exceeds 8 diam²",
                self.max_hitting_time
            ));
        }
        out
    }
}

/// Rates `q({x, prt x}) = |T_x| / (2 diam T)` on a BFS tree, no loops.
pub fn continuous_time_weighting(g: &Graph, root: Option<Vertex>) -> Result<ContinuousReport> {
    g.ensure_connected()?;
    let n = g.n();
    if n < 2 {
        return Err(Error::Domain(
            "construction needs at least two vertices".into(),
        ));
    }
    let root = match root {
        Some(r) if r < n => r,
        Some(r) => return Err(Error::Argument(format!("root {r} is not a vertex"))),
        None => g.default_root()?,
    };
    let tree = bfs_tree(g, root, &vec![1.0; n])?;
    let d = tree.diameter();
    let graph_diameter = diameter(g)?;
    let mut rates = vec![0.0; g.m()];
    for (x, p) in tree.tree_edges() {
        let idx = g.edge_index(x, p).expect("tree edges are graph edges");
        rates[idx] = tree.subtree_size(x) as f64 / (2.0 * d as f64);
    }
    let weighting = WeightedGraph::new(g.clone(), rates, vec![0.0; n])?;
    let lap = laplacian_gap(&weighting)?;
    let canonical_bound =
        canonical_paths_bound(&weighting, &tree_path_system(&tree), TimeMode::Continuous)?;
    let hitting_times = (0..n)
        .map(|x| hitting_time_tree(&weighting, &tree, x))
        .collect::<Result<Vec<_>>>()?;
    let oracle = hitting_time_oracle(&weighting, root)?;
    let hitting_disagreement = hitting_times
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
        .fold(0.0, f64::max);
    let max_hitting_time = hitting_times.iter().copied().fold(0.0, f64::max);
    let df = d as f64;
    let dg = graph_diameter as f64;
    Ok(ContinuousReport {
        weighting,
        tree,
        root,
        tree_diameter: d,
        graph_diameter,
        total_rate: lap.total_rate,
        average_rate: lap.average_rate,
        lambda2: lap.spectrum.gap,
        lambda2_bound: 1.0 / (4.0 * df * df),
        lambda2_bound_graph: 1.0 / (16.0 * dg * dg),
        canonical_bound,
        hitting_times,
        hitting_disagreement,
        max_hitting_time,
        hitting_bound: 8.0 * dg * dg,
    })
}

/// Exact tree rates `|T_x| / (2 diam T)` keyed by `(x, prt x)`.
pub fn continuous_time_rates_exact(
    tree: &RootedSpanningTree,
) -> Vec<((Vertex, Vertex), Rational64)> {
    let d = tree.diameter() as i64;
    tree.tree_edges()
        .into_iter()
        .map(|(x, p)| ((x, p), Rational64::new(tree.subtree_size(x) as i64, 2 * d)))
        .collect()
}

/// The tree hitting-time formula in exact arithmetic for the exact rates.
pub fn hitting_time_tree_exact(tree: &RootedSpanningTree, x: Vertex) -> Rational64 {
    let rates = continuous_time_rates_exact(tree);
    let rate_of = |y: Vertex| {
        rates
            .iter()
            .find(|((a, _), _)| *a == y)
            .map(|(_, r)| *r)
            .expect("every non-root vertex has a tree edge")
    };
    tree.ancestors(x)
        .into_iter()
        .filter(|&y| y != tree.root())
        .map(|y| Rational64::from_integer(tree.subtree_size(y) as i64) / rate_of(y))
        .sum()
}

/// A finite sequence of stochastic matrices on a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSchedule {
    pub steps: Vec<StochasticMatrix>,
    pub diam: usize,
    pub root: Vertex,
    /// Length of each of the two constructive phases.
    pub height: usize,
    pub target: Vec<f64>,
}

impl ChainSchedule {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn check_support(&self, g: &Graph) -> Result<()> {
        self.steps.iter().try_for_each(|s| s.check_support(g))
    }
}

/// Pull every walker to the root in `height` steps, then descend one depth
/// level per step: at `x` stay with probability `π(x)/π(T_x)` and move to a
/// child `c` with probability `π(T_c)/π(T_x)`. Padded with identities to
/// `2 diam G` steps.
pub fn perfect_mixing_schedule(
    g: &Graph,
    pi: &TargetDistribution,
    root: Option<Vertex>,
) -> Result<ChainSchedule> {
    g.ensure_connected()?;
    let n = g.n();
    if pi.n() != n {
        return Err(Error::Dimension {
            expected: n,
            got: pi.n(),
        });
    }
    let root = match root {
        Some(r) if r < n => r,
        Some(r) => return Err(Error::Argument(format!("root {r} is not a vertex"))),
        None => g.default_root()?,
    };
    let p = pi.as_slice();
    let tree = bfs_tree(g, root, p)?;
    let height = tree.height();
    let diam = diameter(g)?;
    let mut steps = Vec::with_capacity(2 * diam);

    let mut pull = DenseMatrix::zeros(n);
    for x in 0..n {
        pull.set(x, tree.parent(x), 1.0);
    }
    let pull = StochasticMatrix::new(pull)?;
    steps.extend(std::iter::repeat_n(pull, height));

    for level in 0..height {
        let mut m = DenseMatrix::identity(n);
        for x in (0..n).filter(|&x| tree.depth(x) == level) {
            let mass = tree.subtree_mass(x);
            m.set(x, x, p[x] / mass);
            for &c in tree.children(x) {
                m.set(x, c, tree.subtree_mass(c) / mass);
            }
        }
        steps.push(StochasticMatrix::new(m)?);
    }
    while steps.len() < 2 * diam {
        steps.push(StochasticMatrix::identity(n));
    }
    Ok(ChainSchedule {
        steps,
        diam,
        root,
        height,
        target: p.to_vec(),
    })
}

/// `μ₀ P₁ P₂ ⋯ P_t`.
pub fn run_steps(steps: &[StochasticMatrix], mu0: &[f64]) -> Result<Vec<f64>> {
    steps.iter().try_fold(mu0.to_vec(), |mu, s| s.step(&mu))
}

pub fn run_schedule(s: &ChainSchedule, mu0: &[f64]) -> Result<Vec<f64>> {
    if mu0.len() != s.target.len() {
        return Err(Error::Dimension {
            expected: s.target.len(),
            got: mu0.len(),
        });
    }
    run_steps(&s.steps, mu0)
}

/// Largest total-variation distance to the target over all point starts.
pub fn schedule_worst_tv(s: &ChainSchedule) -> Result<f64> {
    let n = s.target.len();
    let mut worst = 0.0f64;
    for x in 0..n {
        let mut mu = vec![0.0; n];
        mu[x] = 1.0;
        let out = run_schedule(s, &mu)?;
        let tv = 0.5
            * out
                .iter()
                .zip(&s.target)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>();
        worst = worst.max(tv);
    }
    Ok(worst)
}

/// Lazy walk with `1/(2 d_max)` per edge and the rest on the diagonal.
pub fn uniform_max_degree_chain(g: &Graph) -> Result<TransitionMatrix> {
    g.ensure_connected()?;
    let n = g.n();
    let dmax = g.max_degree().max(1) as f64;
    let mut m = DenseMatrix::zeros(n);
    for x in 0..n {
        for &y in g.neighbors(x) {
            m.set(x, y, 1.0 / (2.0 * dmax));
        }
        m.set(x, x, 1.0 - g.degree(x) as f64 / (2.0 * dmax));
    }
    TransitionMatrix::new(StochasticMatrix::new(m)?, vec![1.0 / n as f64; n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use crate::spectral::{mixing_time, Metric};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn base_weightings() {
        let k2 = generate(Family::Path(2)).unwrap();
        let lazy = uniform_max_degree_chain(&k2).unwrap();
        let w0 = base_weighting_from_chain(&lazy).unwrap();
        assert!(close(w0.edge_weights()[0], 0.25));
        assert!(close(w0.loop_weights()[0], 0.25));
        assert!(close(w0.total_weight(), 1.0));
        let back = chain_from_weighting(&w0).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(back.get(i, j), lazy.get(i, j)));
            }
        }
        let c4 = generate(Family::Cycle(4)).unwrap();
        let w0 = base_weighting_from_chain(&uniform_max_degree_chain(&c4).unwrap()).unwrap();
        assert!(w0.edge_weights().iter().all(|&w| close(w, 0.0625)));
        assert!(w0.loop_weights().iter().all(|&w| close(w, 0.125)));
        let id =
            TransitionMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.5]).unwrap();
        let w0 = base_weighting_from_chain(&id).unwrap();
        assert_eq!(w0.graph().m(), 0);
        assert_eq!(w0.loop_weights(), &[0.5, 0.5]);
    }

    #[test]
    fn almost_mixing_on_p3() {
        let g = generate(Family::Path(3)).unwrap();
        let pi = TargetDistribution::uniform(3).unwrap();
        let rep = almost_mixing_weighting(&g, &pi, 0.5, None, Some(0)).unwrap();
        assert!(close(rep.eta, 0.125));
        assert!(close(rep.weighting.weight(0, 1), 1.0 / 12.0));
        assert!(close(rep.weighting.weight(1, 2), 1.0 / 24.0));
        assert!(rep
            .weighting
            .loop_weights()
            .iter()
            .all(|&l| close(l, 1.0 / 3.0)));
        assert!(close(rep.total_weight, 1.25));
        assert!(rep.hat_conductance >= 0.5 / 12.0);
        assert!(rep.check().is_empty(), "{:?}", rep.check());
        let q = rep.chain().unwrap();
        let vw = rep.weighting.vertex_weights();
        for x in 0..3 {
            assert!(close(q.pi()[x], vw[x] / 1.25));
        }
    }

    #[test]
    fn almost_mixing_tiny_epsilon() {
        let g = generate(Family::Path(2)).unwrap();
        let pi = TargetDistribution::uniform(2).unwrap();
        let rep = almost_mixing_weighting(&g, &pi, 1e-6, None, None).unwrap();
        assert!(rep.min_ratio >= 1.0 / (1.0 + 1e-6));
        assert!(rep.check().is_empty());
    }

    #[test]
    fn almost_mixing_rejects_bad_input() {
        let g = generate(Family::Path(3)).unwrap();
        let pi = TargetDistribution::uniform(3).unwrap();
        assert!(almost_mixing_weighting(&g, &pi, 1.0, None, None).is_err());
        assert!(almost_mixing_weighting(&g, &pi, 0.0, None, None).is_err());
        let split = Graph::new(3, [(0, 1)]).unwrap();
        assert!(matches!(
            almost_mixing_weighting(&split, &pi, 0.5, None, None),
            Err(Error::Disconnected(2))
        ));
        let wrong = WeightedGraph::new(g.clone(), vec![0.0, 0.0], vec![0.5, 0.25, 0.25]).unwrap();
        assert!(almost_mixing_weighting(&g, &pi, 0.5, Some(&wrong), None).is_err());
    }

    #[test]
    fn almost_mixing_with_lazy_base() {
        let g = generate(Family::Dumbbell(4)).unwrap();
        let base = base_weighting_from_chain(&uniform_max_degree_chain(&g).unwrap()).unwrap();
        let pi = TargetDistribution::uniform(g.n()).unwrap();
        let rep = almost_mixing_weighting(&g, &pi, 0.1, Some(&base), None).unwrap();
        assert!(rep.check().is_empty(), "{:?}", rep.check());
    }

    #[test]
    fn almost_mixing_mixing_time_bound() {
        let g = generate(Family::Dumbbell(20)).unwrap();
        let pi = TargetDistribution::uniform(g.n()).unwrap();
        let rep = almost_mixing_weighting(&g, &pi, 0.1, None, None).unwrap();
        assert!(rep.check().is_empty());
        let lazy = lazify(&rep.chain().unwrap());
        let pi_min = lazy.pi().iter().copied().fold(f64::INFINITY, f64::min);
        let t = mixing_time(&lazy, 0.25, Metric::Linf)
            .unwrap()
            .time()
            .unwrap();
        assert!((t as f64) <= rep.mixing_bound(0.25, pi_min));
    }

    #[test]
    fn continuous_examples() {
        let p3 = generate(Family::Path(3)).unwrap();
        let rep = continuous_time_weighting(&p3, Some(0)).unwrap();
        assert!(close(rep.weighting.weight(0, 1), 0.5));
        assert!(close(rep.weighting.weight(1, 2), 0.25));
        assert!(close(rep.total_rate, 1.5));
        assert!(close(rep.hitting_times[2], 8.0));
        assert!(rep.check().is_empty(), "{:?}", rep.check());
        assert_eq!(
            hitting_time_tree_exact(&rep.tree, 2),
            Rational64::from_integer(8)
        );

        let k2 = generate(Family::Path(2)).unwrap();
        let rep = continuous_time_weighting(&k2, None).unwrap();
        assert!(close(rep.weighting.weight(0, 1), 0.5));
        assert!(close(rep.total_rate, 1.0));

        let bt = generate(Family::BinaryTree { depth: 4 }).unwrap();
        let rep = continuous_time_weighting(&bt, None).unwrap();
        assert!(rep.lambda2 >= 1.0 / (4.0 * 36.0));
        assert!(rep.check().is_empty());
    }

    #[test]
    fn star_leaf_hitting_time() {
        let star = generate(Family::Star(5)).unwrap();
        let rep = continuous_time_weighting(&star, Some(0)).unwrap();
        for leaf in 1..6 {
            assert!(close(rep.hitting_times[leaf], 4.0));
        }
    }

    #[test]
    fn schedule_on_p3_from_middle() {
        let g = generate(Family::Path(3)).unwrap();
        let pi = TargetDistribution::uniform(3).unwrap();
        let s = perfect_mixing_schedule(&g, &pi, Some(1)).unwrap();
        assert_eq!(s.len(), 4);
        s.check_support(&g).unwrap();
        let after_pull = run_steps(&s.steps[..1], &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(after_pull, vec![0.0, 1.0, 0.0]);
        let out = run_schedule(&s, &[1.0, 0.0, 0.0]).unwrap();
        for v in out {
            assert!(close(v, 1.0 / 3.0));
        }
    }

    #[test]
    fn schedule_single_vertex() {
        let g = Graph::new(1, []).unwrap();
        let pi = TargetDistribution::uniform(1).unwrap();
        let s = perfect_mixing_schedule(&g, &pi, None).unwrap();
        assert!(s.is_empty());
        assert_eq!(run_schedule(&s, &[1.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn schedule_concatenation_is_composition() {
        let g = generate(Family::BinaryTree { depth: 3 }).unwrap();
        let pi = TargetDistribution::normalized((1..=7).map(f64::from).collect()).unwrap();
        let s = perfect_mixing_schedule(&g, &pi, None).unwrap();
        let mu = vec![0.5, 0.0, 0.0, 0.25, 0.0, 0.25, 0.0];
        let half = s.len() / 2;
        let mid = run_steps(&s.steps[..half], &mu).unwrap();
        let a = run_steps(&s.steps[half..], &mid).unwrap();
        let b = run_schedule(&s, &mu).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(close(*x, *y));
        }
        assert!(schedule_worst_tv(&s).unwrap() <= 1e-12);
    }

    #[test]
    fn uniform_max_degree_examples() {
        let c4 = generate(Family::Cycle(4)).unwrap();
        let p = uniform_max_degree_chain(&c4).unwrap();
        assert!((spectral_gap(&p).unwrap().gap - 0.5).abs() < 1e-12);
        let star = generate(Family::Star(4)).unwrap();
        let p = uniform_max_degree_chain(&star).unwrap();
        assert!(close(p.get(1, 1), 1.0 - 1.0 / 8.0));
        assert!(p.is_lazy());
        let k2 = generate(Family::Path(2)).unwrap();
        let p = uniform_max_degree_chain(&k2).unwrap();
        assert!(close(p.get(0, 1), 0.5));
    }
}
