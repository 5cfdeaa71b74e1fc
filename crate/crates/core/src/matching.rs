//! Matchings: bipartite augmenting paths for cut edges, greedy maximal
//! matchings (undirected and directed), maximum-weight bipartite assignment,
//! and the fractional matching number with its dual vertex cover.

use serde::{Deserialize, Serialize};

use crate::graph::Vertex;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub weight: f64,
}

impl WeightedEdge {
    pub fn new(u: Vertex, v: Vertex, weight: f64) -> Self {
        WeightedEdge { u, v, weight }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchingMode {
    /// Every vertex has degree at most one.
    Undirected,
    /// Every vertex has in-degree and out-degree at most one; `u -> v` per edge.
    Directed,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Matching {
    pub edges: Vec<WeightedEdge>,
}

impl Matching {
    pub fn weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_valid(&self, mode: MatchingMode) -> bool {
        let mut seen = std::collections::HashSet::new();
        match mode {
            MatchingMode::Undirected => self
                .edges
                .iter()
                .all(|e| e.u != e.v && seen.insert((e.u, 0u8)) && seen.insert((e.v, 0u8))),
            MatchingMode::Directed => self
                .edges
                .iter()
                .all(|e| seen.insert((e.u, 0u8)) && seen.insert((e.v, 1u8))),
        }
    }
}

/// Greedy maximal matching: edges by weight descending (ties by `(u, v)`
/// ascending), each kept when endpoint-compatible with those already chosen.
pub fn greedy_matching(edges: &[WeightedEdge], mode: MatchingMode) -> Matching {
    let mut order: Vec<&WeightedEdge> = edges.iter().collect();
    order.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then((a.u, a.v).cmp(&(b.u, b.v)))
    });
    let mut out_used = std::collections::HashSet::new();
    let mut in_used = std::collections::HashSet::new();
    let mut chosen = Vec::new();
    for e in order {
        let ok = match mode {
            MatchingMode::Undirected => {
                e.u != e.v && !out_used.contains(&e.u) && !out_used.contains(&e.v)
            }
            MatchingMode::Directed => !out_used.contains(&e.u) && !in_used.contains(&e.v),
        };
        if ok {
            match mode {
                MatchingMode::Undirected => {
                    out_used.insert(e.u);
                    out_used.insert(e.v);
                }
                MatchingMode::Directed => {
                    out_used.insert(e.u);
                    in_used.insert(e.v);
                }
            }
            chosen.push(*e);
        }
    }
    Matching { edges: chosen }
}

/// Maximum-cardinality matching of a bipartite graph by augmenting paths.
/// `edges` are `(left, right)` pairs with `left < n_left`, `right < n_right`.
/// Returns the matched pairs sorted by left endpoint.
pub fn bipartite_max_matching(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize)],
) -> Vec<(usize, usize)> {
    let mut adj = vec![Vec::new(); n_left];
    for &(l, r) in edges {
        adj[l].push(r);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let mut match_right = vec![usize::MAX; n_right];
    let mut visited = vec![0usize; n_right];
    let mut stamp = 0;

    fn augment(
        l: usize,
        adj: &[Vec<usize>],
        match_right: &mut [usize],
        visited: &mut [usize],
        stamp: usize,
    ) -> bool {
        for &r in &adj[l] {
            if visited[r] == stamp {
                continue;
            }
            visited[r] = stamp;
            if match_right[r] == usize::MAX
                || augment(match_right[r], adj, match_right, visited, stamp)
            {
                match_right[r] = l;
                return true;
            }
        }
        false
    }

    for l in 0..n_left {
        stamp += 1;
        augment(l, &adj, &mut match_right, &mut visited, stamp);
    }
    let mut pairs: Vec<(usize, usize)> = match_right
        .iter()
        .enumerate()
        .filter(|(_, &l)| l != usize::MAX)
        .map(|(r, &l)| (l, r))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Minimum vertex cover of a bipartite graph from a maximum matching (König).
/// Returns `(left, right)` cover vertices; their total count equals the
/// matching size.
pub fn bipartite_min_vertex_cover(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize)],
    matching: &[(usize, usize)],
) -> (Vec<usize>, Vec<usize>) {
    let mut adj = vec![Vec::new(); n_left];
    for &(l, r) in edges {
        adj[l].push(r);
    }
    let mut mate_left = vec![usize::MAX; n_left];
    let mut mate_right = vec![usize::MAX; n_right];
    for &(l, r) in matching {
        mate_left[l] = r;
        mate_right[r] = l;
    }
    // Alternating reachability from unmatched left vertices.
    let mut seen_left = vec![false; n_left];
    let mut seen_right = vec![false; n_right];
    let mut stack: Vec<usize> = (0..n_left)
        .filter(|&l| mate_left[l] == usize::MAX)
        .collect();
    for &l in &stack {
        seen_left[l] = true;
    }
    while let Some(l) = stack.pop() {
        for &r in &adj[l] {
            if seen_right[r] || mate_left[l] == r {
                continue;
            }
            seen_right[r] = true;
            let next = mate_right[r];
            if next != usize::MAX && !seen_left[next] {
                seen_left[next] = true;
                stack.push(next);
            }
        }
    }
    let left = (0..n_left).filter(|&l| !seen_left[l]).collect();
    let right = (0..n_right).filter(|&r| seen_right[r]).collect();
    (left, right)
}

/// Result of a maximum-weight bipartite assignment.
#[derive(Clone, Debug)]
pub struct Assignment {
    /// Matched `(row, col)` pairs with positive weight.
    pub pairs: Vec<(usize, usize)>,
    pub weight: f64,
    /// Nonnegative dual potentials with `row[i] + col[j] >= w(i, j)` and
    /// `Σ row + Σ col = weight`.
    pub row_potential: Vec<f64>,
    pub col_potential: Vec<f64>,
}

/// Maximum-weight matching in a complete bipartite graph with nonnegative
/// weights (`weights[i][j]`, zero meaning "no edge"), by the Hungarian method.
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> Assignment {
    let rows = weights.len();
    let cols = weights.iter().map(Vec::len).max().unwrap_or(0);
    let size = rows.max(cols);
    if size == 0 {
        return Assignment {
            pairs: Vec::new(),
            weight: 0.0,
            row_potential: Vec::new(),
            col_potential: Vec::new(),
        };
    }
    let w = |i: usize, j: usize| -> f64 {
        weights
            .get(i)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or(0.0)
    };
    // Minimise cost = -w over a square zero-padded matrix, 1-indexed.
    let cost = |i: usize, j: usize| -> f64 { -w(i - 1, j - 1) };
    let mut u = vec![0.0f64; size + 1];
    let mut v = vec![0.0f64; size + 1];
    let mut p = vec![0usize; size + 1];
    let mut way = vec![0usize; size + 1];
    for i in 1..=size {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; size + 1];
        let mut used = vec![false; size + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=size {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=size {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut pairs = Vec::new();
    let mut weight = 0.0;
    for j in 1..=size {
        let i = p[j];
        if i >= 1 && i <= rows && j <= cols && w(i - 1, j - 1) > 0.0 {
            pairs.push((i - 1, j - 1));
            weight += w(i - 1, j - 1);
        }
    }
    pairs.sort_unstable();
    // Potentials for the maximisation: y_row = -u, y_col = -v, then shift so
    // both sides are nonnegative (the padding makes every pair a constraint).
    let mut yr: Vec<f64> = (1..=size).map(|i| -u[i]).collect();
    let mut yc: Vec<f64> = (1..=size).map(|j| -v[j]).collect();
    let min_of = |ys: &[f64]| ys.iter().copied().fold(f64::INFINITY, f64::min);
    let shift = min_of(&yr);
    if shift < 0.0 {
        yr.iter_mut().for_each(|y| *y -= shift);
        yc.iter_mut().for_each(|y| *y += shift);
    }
    let shift = min_of(&yc);
    if shift < 0.0 {
        yc.iter_mut().for_each(|y| *y -= shift);
        yr.iter_mut().for_each(|y| *y += shift);
    }
    for y in yr.iter_mut().chain(yc.iter_mut()) {
        if *y < 0.0 && *y > -1e-12 {
            *y = 0.0;
        }
    }
    Assignment {
        pairs,
        weight,
        row_potential: yr,
        col_potential: yc,
    }
}

/// Maximum-weight directed matching: a bipartite assignment between arc tails
/// and arc heads.
pub fn max_directed_matching(n: usize, arcs: &[WeightedEdge]) -> Matching {
    let mut w = vec![vec![0.0; n]; n];
    for a in arcs {
        w[a.u][a.v] = f64::max(w[a.u][a.v], a.weight);
    }
    let asg = max_weight_assignment(&w);
    Matching {
        edges: asg
            .pairs
            .into_iter()
            .map(|(u, v)| WeightedEdge::new(u, v, w[u][v]))
            .collect(),
    }
}

/// Optimal fractional matching with a certifying fractional vertex cover.
#[derive(Clone, Debug)]
pub struct FractionalMatching {
    pub value: f64,
    /// Half-integral edge values aligned with the input edges.
    pub primal: Vec<f64>,
    /// Dual cover `g >= 0` with `g(u) + g(v) >= w(u, v)` on every edge.
    pub dual: Vec<f64>,
}

impl FractionalMatching {
    pub fn dual_value(&self) -> f64 {
        self.dual.iter().sum()
    }
}

/// `ν*(E)` via a maximum-weight matching of the bipartite double cover, halved.
/// The cover's dual potentials, averaged per vertex, give the dual optimum.
pub fn fractional_matching_number(n: usize, edges: &[WeightedEdge]) -> FractionalMatching {
    let mut w = vec![vec![0.0; n]; n];
    for e in edges {
        if e.u == e.v {
            continue;
        }
        w[e.u][e.v] = f64::max(w[e.u][e.v], e.weight);
        w[e.v][e.u] = f64::max(w[e.v][e.u], e.weight);
    }
    let asg = max_weight_assignment(&w);
    let mut chosen = vec![vec![false; n]; n];
    for &(i, j) in &asg.pairs {
        chosen[i][j] = true;
    }
    // Distribute each cover pair onto the first input edge that carries it.
    let mut primal = vec![0.0; edges.len()];
    let mut claimed = vec![vec![false; n]; n];
    for (k, e) in edges.iter().enumerate() {
        if e.u == e.v || claimed[e.u][e.v] {
            continue;
        }
        claimed[e.u][e.v] = true;
        claimed[e.v][e.u] = true;
        let halves = usize::from(chosen[e.u][e.v]) + usize::from(chosen[e.v][e.u]);
        primal[k] = halves as f64 / 2.0;
    }
    let dual: Vec<f64> = (0..n)
        .map(|x| {
            0.5 * (asg.row_potential.get(x).copied().unwrap_or(0.0)
                + asg.col_potential.get(x).copied().unwrap_or(0.0))
        })
        .collect();
    FractionalMatching {
        value: asg.weight / 2.0,
        primal,
        dual,
    }
}
