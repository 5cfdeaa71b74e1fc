//! Brute-force ground truth: conductance minima by subset enumeration,
//! exhaustive matchings, exact fractional matchings, connected graphs up to
//! isomorphism, and a heuristic search for the best lazy spectral gap.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chains::TargetDistribution;
use crate::conductance::{matching_conductance_of_set, CutCertificate, Measure};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::linalg::DenseMatrix;
use crate::matching::{bipartite_max_matching, Matching, MatchingMode, WeightedEdge};
use crate::spectral::{spectral_gap, StochasticMatrix, TransitionMatrix};

/// Literal minimum over all admissible nonempty `S`: `|S| <= n/2` for vertex
/// and matching conductance, `vol(S) <= vol(V)/2` for edge conductance. Ties
/// go to the lexicographically smallest sorted set.
pub fn exact_conductance(g: &Graph, which: Measure) -> Result<CutCertificate> {
    let n = g.n();
    if n > which.exact_limit() {
        return Err(Error::TooLarge(format!(
            "{} conductance enumeration is capped at n = {}",
            which.name(),
            which.exact_limit()
        )));
    }
    if n < 2 {
        return Err(Error::Domain(
            "conductance needs at least two vertices".into(),
        ));
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let total_vol = 2 * g.m() as u32;
    let value = |mask: u32| -> Option<(u32, u32)> {
        let size = mask.count_ones();
        match which {
            Measure::Vertex | Measure::Matching if 2 * size > n as u32 => None,
            Measure::Vertex => {
                let reach = bits(mask).fold(0u32, |acc, v| acc | nbr[v]);
                Some(((reach & !mask).count_ones(), size))
            }
            Measure::Matching => {
                let cut: Vec<(usize, usize)> = bits(mask)
                    .flat_map(|v| bits(nbr[v] & !mask).map(move |w| (v, w)))
                    .collect();
                Some((bipartite_max_matching(n, n, &cut).len() as u32, size))
            }
            Measure::Edge => {
                let vol: u32 = bits(mask).map(|v| nbr[v].count_ones()).sum();
                if vol == 0 || 2 * vol > total_vol {
                    return None;
                }
                let cut: u32 = bits(mask).map(|v| (nbr[v] & !mask).count_ones()).sum();
                Some((cut, vol))
            }
        }
    };
    let best = (1u32..(1u32 << n))
        .into_par_iter()
        .filter_map(|mask| value(mask).map(|(num, den)| (num, den, mask)))
        .min_by(|a, b| compare_candidates(*a, *b))
        .ok_or_else(|| Error::Domain("no admissible set".into()))?;
    let set: Vec<Vertex> = bits(best.2).collect();
    let mut cert = matching_conductance_of_set(g, &set)?;
    cert.exact = true;
    Ok(cert)
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

fn compare_candidates(a: (u32, u32, u32), b: (u32, u32, u32)) -> Ordering {
    (a.0 as u64 * b.1 as u64)
        .cmp(&(b.0 as u64 * a.1 as u64))
        .then_with(|| bits(a.2).cmp(bits(b.2)))
}

pub const MATCHING_EDGE_LIMIT: usize = 20;
pub const FRACTIONAL_EDGE_LIMIT: usize = 12;

/// Maximum-weight matching by inclusion/exclusion over all edges.
pub fn exact_max_matching(edges: &[WeightedEdge]) -> Result<Matching> {
    exhaustive_matching(edges, MatchingMode::Undirected)
}

/// Maximum-weight directed matching (in- and out-degree at most one).
pub fn exact_directed_matching(arcs: &[WeightedEdge]) -> Result<Matching> {
    exhaustive_matching(arcs, MatchingMode::Directed)
}

fn exhaustive_matching(edges: &[WeightedEdge], mode: MatchingMode) -> Result<Matching> {
    if edges.len() > MATCHING_EDGE_LIMIT {
        return Err(Error::TooLarge(format!(
            "exhaustive matching is capped at {MATCHING_EDGE_LIMIT} edges"
        )));
    }
    let n = edges.iter().map(|e| e.u.max(e.v) + 1).max().unwrap_or(0);
    struct Search<'a> {
        edges: &'a [WeightedEdge],
        mode: MatchingMode,
        out_used: Vec<bool>,
        in_used: Vec<bool>,
        chosen: Vec<usize>,
        best: (f64, Vec<usize>),
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, weight: f64) {
            if i == self.edges.len() {
                if weight > self.best.0 {
                    self.best = (weight, self.chosen.clone());
                }
                return;
            }
            self.go(i + 1, weight);
            let e = self.edges[i];
            let free = match self.mode {
                MatchingMode::Undirected => {
                    e.u != e.v && !self.out_used[e.u] && !self.out_used[e.v]
                }
                MatchingMode::Directed => !self.out_used[e.u] && !self.in_used[e.v],
            };
            if free {
                let second = match self.mode {
                    MatchingMode::Undirected => &mut self.out_used,
                    MatchingMode::Directed => &mut self.in_used,
                };
                second[e.v] = true;
                self.out_used[e.u] = true;
                self.chosen.push(i);
                self.go(i + 1, weight + e.weight);
                self.chosen.pop();
                self.out_used[e.u] = false;
                match self.mode {
                    MatchingMode::Undirected => self.out_used[e.v] = false,
                    MatchingMode::Directed => self.in_used[e.v] = false,
                }
            }
        }
    }
    let mut s = Search {
        edges,
        mode,
        out_used: vec![false; n],
        in_used: vec![false; n],
        chosen: Vec::new(),
        best: (0.0, Vec::new()),
    };
    s.go(0, 0.0);
    Ok(Matching {
        edges: s.best.1.iter().map(|&i| edges[i]).collect(),
    })
}

/// Exact optimal fractional matching with a matching fractional vertex cover.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactFractional {
    pub value: Rational64,
    /// Values in `{0, 1/2, 1}` aligned with the input edges.
    pub primal: Vec<Rational64>,
    /// Half-integral cover with `g(u) + g(v) >= w(u, v)`.
    pub dual: Vec<Rational64>,
    pub dual_value: Rational64,
}

/// Half-integral enumeration of both LPs for integer weights, `m <= 12`.
pub fn exact_fractional_matching(n: usize, edges: &[WeightedEdge]) -> Result<ExactFractional> {
    if edges.len() > FRACTIONAL_EDGE_LIMIT {
        return Err(Error::TooLarge(format!(
            "exact fractional matching is capped at {FRACTIONAL_EDGE_LIMIT} edges"
        )));
    }
    let mut w = Vec::with_capacity(edges.len());
    for e in edges {
        if e.u >= n || e.v >= n || e.u == e.v {
            return Err(Error::Argument(format!(
                "edge ({}, {}) is invalid",
                e.u, e.v
            )));
        }
        if e.weight < 0.0 || e.weight.fract() != 0.0 || e.weight > 1e6 {
            return Err(Error::Argument(format!(
                "weight {} is not a small nonnegative integer",
                e.weight
            )));
        }
        w.push(e.weight as i64);
    }

    // Primal in halves: x_e ∈ {0, 1, 2} / 2 with Σ_{e ∋ v} x_e <= 2 / 2.
    fn primal(
        i: usize,
        edges: &[WeightedEdge],
        w: &[i64],
        load: &mut [i64],
        x: &mut [i64],
        best: &mut (i64, Vec<i64>),
    ) {
        if i == edges.len() {
            let val: i64 = x.iter().zip(w).map(|(a, b)| a * b).sum();
            if val > best.0 {
                *best = (val, x.to_vec());
            }
            return;
        }
        let (u, v) = (edges[i].u, edges[i].v);
        for k in 0..=2 {
            if load[u] + k > 2 || load[v] + k > 2 {
                break;
            }
            load[u] += k;
            load[v] += k;
            x[i] = k;
            primal(i + 1, edges, w, load, x, best);
            load[u] -= k;
            load[v] -= k;
        }
        x[i] = 0;
    }
    let mut best = (0i64, vec![0; edges.len()]);
    primal(
        0,
        edges,
        &w,
        &mut vec![0; n],
        &mut vec![0; edges.len()],
        &mut best,
    );

    // Dual in halves: g(v) ∈ {0, 1, ..., 2 max w} / 2, vertices in order.
    let mut incident: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (e, &we) in edges.iter().zip(&w) {
        incident[e.u.max(e.v)].push((e.u.min(e.v), 2 * we));
    }
    let cap: Vec<i64> = (0..n)
        .map(|v| {
            edges
                .iter()
                .zip(&w)
                .filter(|(e, _)| e.u == v || e.v == v)
                .map(|(_, &we)| 2 * we)
                .max()
                .unwrap_or(0)
        })
        .collect();
    fn dual(
        v: usize,
        incident: &[Vec<(usize, i64)>],
        cap: &[i64],
        g: &mut [i64],
        sum: i64,
        best: &mut (i64, Vec<i64>),
    ) {
        if sum >= best.0 {
            return;
        }
        if v == g.len() {
            *best = (sum, g.to_vec());
            return;
        }
        let need = incident[v]
            .iter()
            .map(|&(u, w2)| w2 - g[u])
            .max()
            .unwrap_or(0)
            .max(0);
        for val in need..=cap[v].max(need) {
            g[v] = val;
            dual(v + 1, incident, cap, g, sum + val, best);
        }
        g[v] = 0;
    }
    let mut dual_best = (i64::MAX, vec![0; n]);
    dual(0, &incident, &cap, &mut vec![0; n], 0, &mut dual_best);

    let half = |k: i64| Rational64::new(k, 2);
    Ok(ExactFractional {
        value: half(best.0),
        primal: best.1.iter().map(|&k| half(k)).collect(),
        dual: dual_best.1.iter().map(|&k| half(k)).collect(),
        dual_value: half(dual_best.0),
    })
}

/// Connected graphs on `n <= 7` vertices, one per isomorphism class.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > 7 {
        return Err(Error::TooLarge(
            "isomorphism-free enumeration is capped at n = 7".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut classes: Vec<u32> = vec![0];
    for k in 1..n {
        let perms = permutations(k + 1);
        let next: HashSet<u32> = classes
            .par_iter()
            .flat_map_iter(|&code| {
                let perms = &perms;
                (1u32..(1 << k)).map(move |attach| {
                    let mut adj = decode(code, k);
                    adj.push(attach);
                    for (v, row) in adj.iter_mut().enumerate().take(k) {
                        if attach >> v & 1 == 1 {
                            *row |= 1 << k;
                        }
                    }
                    canonical_code(&adj, perms)
                })
            })
            .collect();
        classes = next.into_iter().collect();
        classes.sort_unstable();
    }
    classes
        .into_iter()
        .map(|code| {
            let adj = decode(code, n);
            let edges =
                (0..n).flat_map(|u| bits(adj[u]).filter(move |&v| v > u).map(move |v| (u, v)));
            Graph::new(n, edges.collect::<Vec<_>>())
        })
        .collect()
}

/// Upper-triangle bit code: bit index of `(u, v)`, `u < v`, is `v(v-1)/2 + u`.
fn encode(adj: &[u32]) -> u32 {
    let mut code = 0;
    for v in 1..adj.len() {
        for u in 0..v {
            if adj[v] >> u & 1 == 1 {
                code |= 1 << (v * (v - 1) / 2 + u);
            }
        }
    }
    code
}

fn decode(code: u32, n: usize) -> Vec<u32> {
    let mut adj = vec![0u32; n];
    for v in 1..n {
        for u in 0..v {
            if code >> (v * (v - 1) / 2 + u) & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
    }
    adj
}

fn canonical_code(adj: &[u32], perms: &[Vec<usize>]) -> u32 {
    let n = adj.len();
    let mut best = u32::MAX;
    let mut relabeled = vec![0u32; n];
    for p in perms {
        for (v, r) in relabeled.iter_mut().enumerate() {
            *r = bits(adj[v]).fold(0, |m, w| m | (1 << p[w]));
        }
        let mut permuted = vec![0u32; n];
        for v in 0..n {
            permuted[p[v]] = relabeled[v];
        }
        best = best.min(encode(&permuted));
    }
    best
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    heap(n, &mut p, &mut out);
    out
}

/// Best lazy reversible chain found by the search, labelled heuristic.
#[derive(Clone, Debug, Serialize)]
pub struct GapSearch {
    pub gap: f64,
    /// Edge flows `π(x)P(x,y)` aligned with the graph's edges.
    pub flows: Vec<f64>,
    #[serde(skip)]
    pub chain: TransitionMatrix,
    pub heuristic: bool,
    pub evaluations: usize,
}

/// Random-restart coordinate ascent over lazy edge flows reversible with
/// respect to `π`. The result is a lower bound on the best gap over lazy
/// chains on `g`.
pub fn best_gap_search(
    g: &Graph,
    pi: &TargetDistribution,
    iters: usize,
    seed: u64,
) -> Result<GapSearch> {
    g.ensure_connected()?;
    let n = g.n();
    if n < 2 {
        return Err(Error::Domain(
            "gap search needs at least two vertices".into(),
        ));
    }
    if pi.n() != n {
        return Err(Error::Dimension {
            expected: n,
            got: pi.n(),
        });
    }
    let p = pi.as_slice();
    let m = g.m();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluations = 0;
    let mut eval = |flows: &[f64]| -> f64 {
        evaluations += 1;
        chain_of_flows(g, p, flows)
            .and_then(|c| spectral_gap(&c))
            .map_or(0.0, |r| r.gap)
    };
    // Largest flow on edge `i` keeping both endpoints lazy.
    let slack = |flows: &[f64], i: usize| -> f64 {
        let (a, b) = g.edges()[i];
        let used = |x: Vertex| -> f64 {
            g.neighbors(x)
                .iter()
                .map(|&y| flows[g.edge_index(x, y).expect("neighbor edge")])
                .sum::<f64>()
                - flows[i]
        };
        ((p[a] / 2.0 - used(a)).min(p[b] / 2.0 - used(b))).max(0.0)
    };
    let start: Vec<f64> = g
        .edges()
        .iter()
        .map(|&(a, b)| (p[a] / (2.0 * g.degree(a) as f64)).min(p[b] / (2.0 * g.degree(b) as f64)))
        .collect();
    let mut best_flows = start.clone();
    let mut best_gap = eval(&start);
    let restarts = 4usize;
    for restart in 0..restarts {
        let mut flows = if restart == 0 {
            start.clone()
        } else {
            let mut f: Vec<f64> = vec![0.0; m];
            let mut order: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            for i in order {
                f[i] = rng.random::<f64>() * slack(&f, i);
            }
            f
        };
        let mut current = eval(&flows);
        for _ in 0..iters.div_ceil(restarts) {
            if m == 0 {
                break;
            }
            let i = rng.random_range(0..m);
            let hi = slack(&flows, i);
            let old = flows[i];
            let mut best_local = (current, old);
            for k in 0..=4 {
                let candidate = hi * k as f64 / 4.0;
                if candidate == old {
                    continue;
                }
                flows[i] = candidate;
                let gap = eval(&flows);
                if gap > best_local.0 {
                    best_local = (gap, candidate);
                }
            }
            flows[i] = best_local.1;
            current = best_local.0;
        }
        if current > best_gap {
            best_gap = current;
            best_flows = flows;
        }
    }
    let chain = chain_of_flows(g, p, &best_flows)?;
    Ok(GapSearch {
        gap: best_gap,
        flows: best_flows,
        chain,
        heuristic: true,
        evaluations,
    })
}

fn chain_of_flows(g: &Graph, p: &[f64], flows: &[f64]) -> Result<TransitionMatrix> {
    let n = g.n();
    let mut m = DenseMatrix::identity(n);
    for (&(a, b), &f) in g.edges().iter().zip(flows) {
        m.set(a, b, f / p[a]);
        m.set(b, a, f / p[b]);
        m.set(a, a, m.get(a, a) - f / p[a]);
        m.set(b, b, m.get(b, b) - f / p[b]);
    }
    for x in 0..n {
        // Clamp rounding below zero on the diagonal.
        if m.get(x, x) < 0.0 {
            m.set(x, x, 0.0);
        }
    }
    TransitionMatrix::new(StochasticMatrix::new(m)?, p.to_vec())
}

/// Helper for exact comparisons in tests and suites.
pub fn rational_is_zero(r: Rational64) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    fn unit(edges: &[(usize, usize)]) -> Vec<WeightedEdge> {
        edges
            .iter()
            .map(|&(u, v)| WeightedEdge::new(u, v, 1.0))
            .collect()
    }

    #[test]
    fn conductance_examples() {
        let star = generate(Family::Star(4)).unwrap();
        let c = exact_conductance(&star, Measure::Vertex).unwrap();
        assert_eq!(c.vertex_cond, r(1, 2));
        assert_eq!(c.set, vec![1, 2]);
        let bell = generate(Family::Dumbbell(3)).unwrap();
        assert_eq!(
            exact_conductance(&bell, Measure::Vertex)
                .unwrap()
                .vertex_cond,
            r(1, 3)
        );
        let c6 = generate(Family::Cycle(6)).unwrap();
        let m = exact_conductance(&c6, Measure::Matching).unwrap();
        let v = exact_conductance(&c6, Measure::Vertex).unwrap();
        assert_eq!(m.matching_cond, r(2, 3));
        assert_eq!(v.vertex_cond, r(2, 3));
        let e = exact_conductance(&c6, Measure::Edge).unwrap();
        assert_eq!(e.edge_cond, r(1, 3));
    }

    #[test]
    fn conductance_size_cap() {
        let big = generate(Family::Path(17)).unwrap();
        assert!(matches!(
            exact_conductance(&big, Measure::Matching),
            Err(Error::TooLarge(_))
        ));
        assert!(exact_conductance(&big, Measure::Vertex).is_ok());
    }

    #[test]
    fn exhaustive_matchings() {
        assert_eq!(
            exact_max_matching(&unit(&[(0, 1), (1, 2), (0, 2)]))
                .unwrap()
                .len(),
            1
        );
        let pm = unit(&[(0, 4), (1, 5), (2, 6), (3, 7)]);
        assert_eq!(exact_max_matching(&pm).unwrap().len(), 4);
        assert!(exact_max_matching(&[]).unwrap().is_empty());
        let path = unit(&[(0, 1), (1, 2)]);
        assert_eq!(exact_directed_matching(&path).unwrap().len(), 2);
        let too_many = unit(&(0..21).map(|i| (i, i + 1)).collect::<Vec<_>>());
        assert!(exact_max_matching(&too_many).is_err());
    }

    #[test]
    fn fractional_examples() {
        let k3 = exact_fractional_matching(3, &unit(&[(0, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!(k3.value, r(3, 2));
        assert_eq!(k3.dual_value, r(3, 2));
        let single = exact_fractional_matching(2, &[WeightedEdge::new(0, 1, 5.0)]).unwrap();
        assert_eq!(single.value, r(5, 1));
        let c5 =
            exact_fractional_matching(5, &unit(&[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])).unwrap();
        assert_eq!(c5.value, r(5, 2));
        assert_eq!(c5.dual_value, r(5, 2));
        let p3 = exact_fractional_matching(3, &unit(&[(0, 1), (1, 2)])).unwrap();
        assert_eq!(p3.value, r(1, 1));
        assert!(exact_fractional_matching(2, &[WeightedEdge::new(0, 1, 0.5)]).is_err());
    }

    #[test]
    fn connected_graph_counts() {
        let counts: Vec<usize> = (1..=6)
            .map(|n| connected_graphs(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
        assert!(connected_graphs(6).unwrap().iter().all(Graph::is_connected));
        assert!(connected_graphs(8).is_err());
    }

    #[test]
    fn gap_search_examples() {
        let p2 = generate(Family::Path(2)).unwrap();
        let s = best_gap_search(&p2, &TargetDistribution::uniform(2).unwrap(), 40, 0).unwrap();
        assert!((s.gap - 1.0).abs() < 1e-9);
        assert!(s.chain.is_lazy());
        let c4 = generate(Family::Cycle(4)).unwrap();
        let s = best_gap_search(&c4, &TargetDistribution::uniform(4).unwrap(), 200, 0).unwrap();
        assert!(s.gap >= 0.5 - 1e-9);
        assert!(s.chain.is_lazy());
        s.chain.check_support(&c4).unwrap();
    }
}
