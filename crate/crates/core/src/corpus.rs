//! Seeded random instances: connected graphs, trees, weightings, targets and
//! feasible one-dimensional embeddings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::chains::TargetDistribution;
use crate::conductance::Embedding1D;
use crate::error::{Error, Result};
use crate::graph::{generate, Family, Graph, Vertex, WeightedGraph};
use crate::matching::WeightedEdge;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random recursive tree over a shuffled vertex order: vertex `order[i]`
/// attaches to a uniformly chosen earlier vertex.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Argument("a tree needs at least one vertex".into()));
    }
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    let edges = (1..n).map(|i| (order[rng.random_range(0..i)], order[i]));
    Graph::new(n, edges.collect::<Vec<_>>())
}

/// A random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Argument(format!(
            "edge probability {p} is outside [0, 1]"
        )));
    }
    let tree = random_tree(n, rng)?;
    let mut edges = tree.edges().to_vec();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) && rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Connected graph with `n` drawn from `lo..=hi` and a random density.
pub fn random_connected_sized<R: Rng>(lo: usize, hi: usize, rng: &mut R) -> Result<Graph> {
    let n = rng.random_range(lo..=hi);
    let p = rng.random_range(0.0..0.6);
    random_connected(n, p, rng)
}

/// Target with independent `Exp(1)` weights shifted away from zero.
pub fn random_distribution<R: Rng>(n: usize, rng: &mut R) -> Result<TargetDistribution> {
    let w = (0..n)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            0.05 + e
        })
        .collect::<Vec<f64>>();
    TargetDistribution::normalized(w)
}

/// Random tree with positive edge weights in `[0.1, 1]` and no loops.
pub fn random_weighted_tree<R: Rng>(n: usize, rng: &mut R) -> Result<WeightedGraph> {
    let tree = random_tree(n, rng)?;
    let weights = (0..tree.m()).map(|_| rng.random_range(0.1..=1.0)).collect();
    WeightedGraph::new(tree, weights, vec![0.0; n])
}

/// Random positive edge weights and loops on `g`.
pub fn random_weighting<R: Rng>(g: &Graph, rng: &mut R) -> Result<WeightedGraph> {
    let weights = (0..g.m()).map(|_| rng.random_range(0.1..=1.0)).collect();
    let loops = (0..g.n()).map(|_| rng.random_range(0.0..=1.0)).collect();
    WeightedGraph::new(g.clone(), weights, loops)
}

/// Weighted edges with small integer weights on a random connected graph,
/// at most `max_m` edges.
pub fn random_weighted_edges<R: Rng>(
    n: usize,
    max_m: usize,
    rng: &mut R,
) -> Result<Vec<WeightedEdge>> {
    let g = random_connected(n, rng.random_range(0.0..0.5), rng)?;
    let mut edges = g.edges().to_vec();
    edges.shuffle(rng);
    edges.truncate(max_m);
    Ok(edges
        .into_iter()
        .map(|(u, v)| WeightedEdge::new(u, v, rng.random_range(1..=5) as f64))
        .collect())
}

/// Nonnegative `f` with some zeros and a feasible certificate: each edge
/// demand `(f(u) - f(v))²` is split at a random ratio and `g` takes the
/// largest share it is assigned.
pub fn random_feasible_embedding<R: Rng>(g: &Graph, rng: &mut R) -> Result<Embedding1D> {
    let n = g.n();
    let mut f: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random_bool(0.3) {
                0.0
            } else {
                rng.random_range(0.0..1.0)
            }
        })
        .collect();
    if f.iter().all(|&x| x == 0.0) {
        f[rng.random_range(0..n)] = 1.0;
    }
    let mut cert = vec![0.0f64; n];
    for &(u, v) in g.edges() {
        let need = (f[u] - f[v]).powi(2);
        let share = rng.random_range(0.0..=1.0);
        cert[u] = cert[u].max(share * need);
        cert[v] = cert[v].max((1.0 - share) * need);
    }
    Embedding1D::new(f, cert)
}

/// Every generator family at a few sizes with at most `max_n` vertices.
pub fn family_instances(max_n: usize) -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    let mut push = |family: Family| {
        if let Ok(g) = generate(family) {
            if g.n() <= max_n && g.n() >= 2 {
                out.push((format!("{family:?}"), g));
            }
        }
    };
    for n in [2, 5, 16, 50, 200] {
        push(Family::Path(n));
        push(Family::Complete(n.min(60)));
    }
    for n in [3, 8, 33, 100, 200] {
        push(Family::Cycle(n));
    }
    for leaves in [1, 6, 40, 199] {
        push(Family::Star(leaves));
    }
    for depth in [1, 3, 5, 6] {
        push(Family::BinaryTree { depth });
    }
    for n in [3, 7, 20, 50, 99] {
        push(Family::Dumbbell(n));
    }
    for n in [2, 4, 10, 30, 100] {
        push(Family::CliqueMatching(n));
    }
    for (n, k) in [(4, 2), (7, 3), (20, 5), (60, 10)] {
        push(Family::CliqueSource { n, k });
    }
    out
}
