//! Simple undirected graphs, weightings, BFS spanning trees and the example
//! graph families used throughout the crate.
//!
//! Vertex ids are dense `0..n`. Graphs are simple: self-loops only ever exist
//! as weights on a [`WeightedGraph`], never as edges of a [`Graph`].

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A finite simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted, each pair stored as `(min, max)`.
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
    connected: bool,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate edges are collapsed; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Argument(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::Argument(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();

        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        let mut g = Graph {
            n,
            edges: list,
            adj,
            connected: false,
        };
        g.connected = g.first_unreachable(0).is_none();
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Position of `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        if u == v {
            return None;
        }
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn is_tree(&self) -> bool {
        self.connected && self.m() + 1 == self.n
    }

    /// Shortest-path distances from `src`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, src: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        if src >= self.n {
            return dist;
        }
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn first_unreachable(&self, src: Vertex) -> Option<Vertex> {
        if self.n == 0 {
            return None;
        }
        self.bfs_distances(src).iter().position(Option::is_none)
    }

    /// Errors with the smallest unreachable vertex when the graph is disconnected.
    pub fn ensure_connected(&self) -> Result<()> {
        match self.first_unreachable(0) {
            Some(v) => Err(Error::Disconnected(v)),
            None => Ok(()),
        }
    }

    pub fn eccentricity(&self, v: Vertex) -> Result<usize> {
        let dist = self.bfs_distances(v);
        let mut ecc = 0;
        for (u, d) in dist.iter().enumerate() {
            match d {
                Some(d) => ecc = ecc.max(*d),
                None => return Err(Error::Disconnected(u)),
            }
        }
        Ok(ecc)
    }

    /// A vertex of minimum eccentricity (smallest id on ties).
    pub fn default_root(&self) -> Result<Vertex> {
        if self.n == 0 {
            return Err(Error::Argument("graph has no vertices".into()));
        }
        let mut best = (usize::MAX, 0);
        for v in 0..self.n {
            let e = self.eccentricity(v)?;
            if e < best.0 {
                best = (e, v);
            }
        }
        Ok(best.1)
    }

    /// Deterministic textual identity: `n=<n>;u-v,u-v,...` over sorted edges.
    pub fn canonical_string(&self) -> String {
        let mut s = format!("n={};", self.n);
        for (i, (u, v)) in self.edges.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{u}-{v}");
        }
        s
    }

    pub fn parse_canonical_string(s: &str) -> Result<Graph> {
        let err = |msg: &str| Error::Parse {
            line: 1,
            msg: format!("{msg} in canonical graph string {s:?}"),
        };
        let (head, body) = s.split_once(';').ok_or_else(|| err("missing ';'"))?;
        let n = head
            .strip_prefix("n=")
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| err("bad vertex count"))?;
        let mut edges = Vec::new();
        for tok in body.split(',').filter(|t| !t.is_empty()) {
            let (a, b) = tok.split_once('-').ok_or_else(|| err("bad edge"))?;
            let a = a.parse::<usize>().map_err(|_| err("bad edge"))?;
            let b = b.parse::<usize>().map_err(|_| err("bad edge"))?;
            edges.push((a, b));
        }
        Graph::new(n, edges)
    }

    /// Parses the line-oriented edge-list format: `u v` per line, `#` comments
    /// and blank lines ignored. Vertex ids must be dense: every id below the
    /// maximum has to appear in some edge.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut max_id = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let mut next_id = |what: &str| -> Result<usize> {
                let tok = toks.next().ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("missing {what} vertex"),
                })?;
                tok.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("malformed vertex id {tok:?}"),
                })
            };
            let u = next_id("first")?;
            let v = next_id("second")?;
            if let Some(extra) = toks.next() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unexpected trailing token {extra:?}"),
                });
            }
            if u == v {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("self-loop at vertex {u}"),
                });
            }
            max_id = Some(max_id.unwrap_or(0).max(u).max(v));
            edges.push((u, v));
        }
        let n = max_id.map_or(0, |m| m + 1);
        if n == 0 {
            return Err(Error::Parse {
                line: 0,
                msg: "edge list contains no edges".into(),
            });
        }
        let mut seen = vec![false; n];
        for &(u, v) in &edges {
            seen[u] = true;
            seen[v] = true;
        }
        if let Some(gap) = seen.iter().position(|s| !s) {
            return Err(Error::Parse {
                line: 0,
                msg: format!("vertex id {gap} never appears (ids must be dense)"),
            });
        }
        Graph::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Exact diameter by BFS from every vertex.
pub fn diameter(g: &Graph) -> Result<usize> {
    let mut best = 0;
    for v in 0..g.n() {
        best = best.max(g.eccentricity(v)?);
    }
    Ok(best)
}

/// Nonnegative weights on the edges of a graph plus a self-loop weight per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    graph: Graph,
    edge_weight: Vec<f64>,
    loop_weight: Vec<f64>,
}

impl WeightedGraph {
    pub fn new(graph: Graph, edge_weight: Vec<f64>, loop_weight: Vec<f64>) -> Result<Self> {
        if edge_weight.len() != graph.m() {
            return Err(Error::Dimension {
                expected: graph.m(),
                got: edge_weight.len(),
            });
        }
        if loop_weight.len() != graph.n() {
            return Err(Error::Dimension {
                expected: graph.n(),
                got: loop_weight.len(),
            });
        }
        if let Some(w) = edge_weight
            .iter()
            .chain(&loop_weight)
            .find(|w| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::Argument(format!(
                "weight {w} is not a finite nonnegative number"
            )));
        }
        Ok(WeightedGraph {
            graph,
            edge_weight,
            loop_weight,
        })
    }

    /// Unit weight on every edge, no loops.
    pub fn unit(graph: Graph) -> Self {
        let m = graph.m();
        let n = graph.n();
        WeightedGraph {
            graph,
            edge_weight: vec![1.0; m],
            loop_weight: vec![0.0; n],
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Edge weights aligned with [`Graph::edges`].
    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weight
    }

    pub fn loop_weights(&self) -> &[f64] {
        &self.loop_weight
    }

    /// `w({u, v})`, or the loop weight when `u == v`; zero for non-edges.
    pub fn weight(&self, u: Vertex, v: Vertex) -> f64 {
        if u == v {
            return self.loop_weight[u];
        }
        self.graph
            .edge_index(u, v)
            .map_or(0.0, |i| self.edge_weight[i])
    }

    pub fn set_edge_weight(&mut self, u: Vertex, v: Vertex, w: f64) -> Result<()> {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Argument(format!(
                "weight {w} is not a finite nonnegative number"
            )));
        }
        if u == v {
            self.loop_weight[u] = w;
            return Ok(());
        }
        let i = self.graph.edge_index(u, v).ok_or(Error::Support { u, v })?;
        self.edge_weight[i] = w;
        Ok(())
    }

    /// `u(x)`: loop weight plus incident edge weights.
    pub fn vertex_weight(&self, x: Vertex) -> f64 {
        let incident: f64 = self
            .graph
            .neighbors(x)
            .iter()
            .map(|&y| self.weight(x, y))
            .sum();
        self.loop_weight[x] + incident
    }

    pub fn vertex_weights(&self) -> Vec<f64> {
        let mut w = self.loop_weight.clone();
        for (&(u, v), &we) in self.graph.edges().iter().zip(&self.edge_weight) {
            w[u] += we;
            w[v] += we;
        }
        w
    }

    /// `u(V) = 2 Σ_E w + Σ loops`.
    pub fn total_weight(&self) -> f64 {
        2.0 * self.edge_weight.iter().sum::<f64>() + self.loop_weight.iter().sum::<f64>()
    }

    /// The induced measure `π_u(x) = u(x) / u(V)`.
    pub fn measure(&self) -> Vec<f64> {
        let total = self.total_weight();
        self.vertex_weights()
            .into_iter()
            .map(|w| w / total)
            .collect()
    }

    /// Graph of the edges carrying positive weight.
    pub fn support(&self) -> Graph {
        let edges = self
            .graph
            .edges()
            .iter()
            .zip(&self.edge_weight)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&e, _)| e);
        Graph::new(self.graph.n(), edges).expect("subgraph of a valid graph")
    }

    /// Total weight of edges crossing `mask`.
    pub fn cut_weight(&self, mask: &[bool]) -> f64 {
        self.graph
            .edges()
            .iter()
            .zip(&self.edge_weight)
            .filter(|((u, v), _)| mask[*u] != mask[*v])
            .map(|(_, w)| w)
            .sum()
    }
}

/// A BFS spanning tree with parent pointers, depths and subtree bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct RootedSpanningTree {
    root: Vertex,
    parent: Vec<Vertex>,
    depth: Vec<usize>,
    children: Vec<Vec<Vertex>>,
    /// BFS discovery order; parents precede children.
    order: Vec<Vertex>,
    subtree_mass: Vec<f64>,
    subtree_size: Vec<usize>,
}

/// BFS tree of `g` from `root`, neighbors explored in ascending id. `measure`
/// fills the subtree masses `μ(T_x)`.
pub fn bfs_tree(g: &Graph, root: Vertex, measure: &[f64]) -> Result<RootedSpanningTree> {
    let n = g.n();
    if root >= n {
        return Err(Error::Argument(format!("root {root} is not a vertex")));
    }
    if measure.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: measure.len(),
        });
    }
    if let Some(m) = measure.iter().find(|m| !m.is_finite() || **m < 0.0) {
        return Err(Error::Argument(format!("measure entry {m} is negative")));
    }
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0; n];
    let mut children = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in g.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                depth[v] = depth[u] + 1;
                children[u].push(v);
                queue.push_back(v);
            }
        }
    }
    if let Some(v) = parent.iter().position(|&p| p == usize::MAX) {
        return Err(Error::Disconnected(v));
    }
    let mut tree = RootedSpanningTree {
        root,
        parent,
        depth,
        children,
        order,
        subtree_mass: vec![0.0; n],
        subtree_size: vec![0; n],
    };
    tree.fill_subtrees(measure);
    Ok(tree)
}

impl RootedSpanningTree {
    fn fill_subtrees(&mut self, measure: &[f64]) {
        self.subtree_mass.copy_from_slice(measure);
        self.subtree_size.iter_mut().for_each(|s| *s = 1);
        for &x in self.order.iter().rev() {
            if x != self.root {
                let p = self.parent[x];
                self.subtree_mass[p] += self.subtree_mass[x];
                self.subtree_size[p] += self.subtree_size[x];
            }
        }
    }

    /// Same tree with subtree masses recomputed for another measure.
    pub fn with_measure(&self, measure: &[f64]) -> Result<Self> {
        if measure.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                got: measure.len(),
            });
        }
        let mut t = self.clone();
        t.fill_subtrees(measure);
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    /// Parent of `x`; the root maps to itself.
    pub fn parent(&self, x: Vertex) -> Vertex {
        self.parent[x]
    }

    pub fn depth(&self, x: Vertex) -> usize {
        self.depth[x]
    }

    pub fn children(&self, x: Vertex) -> &[Vertex] {
        &self.children[x]
    }

    pub fn bfs_order(&self) -> &[Vertex] {
        &self.order
    }

    /// `μ(T_x)`.
    pub fn subtree_mass(&self, x: Vertex) -> f64 {
        self.subtree_mass[x]
    }

    /// `|T_x|`.
    pub fn subtree_size(&self, x: Vertex) -> usize {
        self.subtree_size[x]
    }

    /// Depth of the deepest vertex.
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// `(x, prt(x))` for every non-root `x`, in BFS order.
    pub fn tree_edges(&self) -> Vec<(Vertex, Vertex)> {
        self.order
            .iter()
            .filter(|&&x| x != self.root)
            .map(|&x| (x, self.parent[x]))
            .collect()
    }

    pub fn as_graph(&self) -> Graph {
        Graph::new(self.n(), self.tree_edges()).expect("tree edges are valid")
    }

    /// Path from `x` up to the root, both included.
    pub fn ancestors(&self, x: Vertex) -> Vec<Vertex> {
        let mut path = vec![x];
        let mut cur = x;
        while cur != self.root {
            cur = self.parent[cur];
            path.push(cur);
        }
        path
    }

    /// Whether `y` lies in the subtree rooted at `x`.
    pub fn in_subtree(&self, x: Vertex, y: Vertex) -> bool {
        let mut cur = y;
        loop {
            if cur == x {
                return true;
            }
            if cur == self.root {
                return false;
            }
            cur = self.parent[cur];
        }
    }

    /// Vertex set of `T_x`.
    pub fn subtree_vertices(&self, x: Vertex) -> Vec<Vertex> {
        let mut out = vec![x];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.children[out[i]]);
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Tree path between two vertices.
    pub fn path(&self, x: Vertex, y: Vertex) -> Vec<Vertex> {
        let (mut a, mut b) = (x, y);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[a] > self.depth[b] {
            up.push(a);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            down.push(b);
            b = self.parent[b];
        }
        while a != b {
            up.push(a);
            down.push(b);
            a = self.parent[a];
            b = self.parent[b];
        }
        up.push(a);
        up.extend(down.into_iter().rev());
        up
    }

    /// Diameter of the tree itself (in hops), via two BFS passes.
    pub fn diameter(&self) -> usize {
        let t = self.as_graph();
        let far = |src: Vertex| -> (Vertex, usize) {
            t.bfs_distances(src)
                .into_iter()
                .enumerate()
                .map(|(v, d)| (v, d.unwrap_or(0)))
                .max_by_key(|&(v, d)| (d, std::cmp::Reverse(v)))
                .unwrap_or((src, 0))
        };
        let (a, _) = far(self.root);
        far(a).1
    }
}

/// The graph families used as examples and test corpora.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Path on `n` vertices.
    Path(usize),
    /// Cycle on `n >= 3` vertices.
    Cycle(usize),
    /// A center joined to `n` leaves.
    Star(usize),
    Complete(usize),
    /// Complete binary tree with `depth` levels, `2^depth - 1` vertices.
    BinaryTree {
        depth: usize,
    },
    /// Two `K_n` bells `0..n`, `n..2n` each joined through one vertex to the
    /// external vertex `2n`.
    Dumbbell(usize),
    /// Two `K_n` on `0..n` and `n..2n` joined by the matching `i -- n + i`.
    CliqueMatching(usize),
    /// Two `K_n` on `0..n` and `n..2n`; vertex `0` is joined to `n..n+k`.
    CliqueSource {
        n: usize,
        k: usize,
    },
}

impl Family {
    pub const NAMES: [&'static str; 8] = [
        "path",
        "cycle",
        "star",
        "complete",
        "binary_tree",
        "dumbbell",
        "clique_matching",
        "clique_source",
    ];

    /// Builds a family from its name. `binary_tree` takes its depth from
    /// `depth` (falling back to `n`); `clique_source` requires `k`.
    pub fn from_name(
        name: &str,
        n: Option<usize>,
        k: Option<usize>,
        depth: Option<usize>,
    ) -> Result<Family> {
        let need_n = || n.ok_or_else(|| Error::Argument(format!("family {name} requires --n")));
        Ok(match name {
            "path" => Family::Path(need_n()?),
            "cycle" => Family::Cycle(need_n()?),
            "star" => Family::Star(need_n()?),
            "complete" => Family::Complete(need_n()?),
            "binary_tree" => Family::BinaryTree {
                depth: depth
                    .or(n)
                    .ok_or_else(|| Error::Argument("binary_tree requires --depth".into()))?,
            },
            "dumbbell" => Family::Dumbbell(need_n()?),
            "clique_matching" => Family::CliqueMatching(need_n()?),
            "clique_source" => Family::CliqueSource {
                n: need_n()?,
                k: k.ok_or_else(|| Error::Argument("clique_source requires --k".into()))?,
            },
            other => {
                return Err(Error::Argument(format!(
                    "unknown family {other:?}; expected one of {}",
                    Family::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Path(_) => "path",
            Family::Cycle(_) => "cycle",
            Family::Star(_) => "star",
            Family::Complete(_) => "complete",
            Family::BinaryTree { .. } => "binary_tree",
            Family::Dumbbell(_) => "dumbbell",
            Family::CliqueMatching(_) => "clique_matching",
            Family::CliqueSource { .. } => "clique_source",
        }
    }
}

fn clique_edges(offset: usize, n: usize, out: &mut Vec<(Vertex, Vertex)>) {
    for i in 0..n {
        for j in i + 1..n {
            out.push((offset + i, offset + j));
        }
    }
}

/// Constructs a member of one of the example families.
pub fn generate(family: Family) -> Result<Graph> {
    let zero = |what: &str| Error::Argument(format!("{} needs {what} >= 1", family.name()));
    let mut edges = Vec::new();
    let n = match family {
        Family::Path(n) => {
            if n == 0 {
                return Err(zero("n"));
            }
            edges.extend((1..n).map(|i| (i - 1, i)));
            n
        }
        Family::Cycle(n) => {
            if n < 3 {
                return Err(Error::Argument("cycle needs n >= 3".into()));
            }
            edges.extend((1..n).map(|i| (i - 1, i)));
            edges.push((0, n - 1));
            n
        }
        Family::Star(leaves) => {
            if leaves == 0 {
                return Err(zero("n"));
            }
            edges.extend((1..=leaves).map(|i| (0, i)));
            leaves + 1
        }
        Family::Complete(n) => {
            if n == 0 {
                return Err(zero("n"));
            }
            clique_edges(0, n, &mut edges);
            n
        }
        Family::BinaryTree { depth } => {
            if depth == 0 {
                return Err(zero("depth"));
            }
            if depth > 24 {
                return Err(Error::TooLarge(format!("binary tree depth {depth}")));
            }
            let n = (1usize << depth) - 1;
            edges.extend((1..n).map(|i| ((i - 1) / 2, i)));
            n
        }
        Family::Dumbbell(n) => {
            if n == 0 {
                return Err(zero("n"));
            }
            clique_edges(0, n, &mut edges);
            clique_edges(n, n, &mut edges);
            edges.push((0, 2 * n));
            edges.push((n, 2 * n));
            2 * n + 1
        }
        Family::CliqueMatching(n) => {
            if n == 0 {
                return Err(zero("n"));
            }
            clique_edges(0, n, &mut edges);
            clique_edges(n, n, &mut edges);
            edges.extend((0..n).map(|i| (i, n + i)));
            2 * n
        }
        Family::CliqueSource { n, k } => {
            if n == 0 || k == 0 {
                return Err(zero("n and k"));
            }
            if k > n {
                return Err(Error::Argument(format!(
                    "clique_source needs k <= n (k={k}, n={n})"
                )));
            }
            clique_edges(0, n, &mut edges);
            clique_edges(n, n, &mut edges);
            edges.extend((0..k).map(|j| (0, n + j)));
            2 * n
        }
    };
    Graph::new(n, edges)
}

/// Sorted, duplicate-free vertex set with a membership mask.
pub(crate) fn membership(n: usize, set: &[Vertex]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(Error::Argument(format!("vertex {v} is not in 0..{n}")));
        }
        mask[v] = true;
    }
    Ok(mask)
}

pub(crate) fn normalized_set(n: usize, set: &[Vertex]) -> Result<Vec<Vertex>> {
    let mask = membership(n, set)?;
    let out: Vec<Vertex> = (0..n).filter(|&v| mask[v]).collect();
    if out.is_empty() {
        return Err(Error::Domain("vertex set is empty".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path_and_collapses_duplicates() {
        let g = Graph::from_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);

        let g = Graph::from_edge_list("0 1\n0 1\n1 0").unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn parses_cycle_with_comments() {
        let g = Graph::from_edge_list("# C4\n0 1\n1 2\n\n2 3 # closing\n3 0\n").unwrap();
        assert_eq!(g.n(), 4);
        assert!((0..4).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn rejects_bad_lines() {
        match Graph::from_edge_list("0 1\n2 2\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected parse error on line 2, got {other:?}"),
        }
        match Graph::from_edge_list("0 1\n1 x\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected parse error on line 2, got {other:?}"),
        }
        assert!(Graph::from_edge_list("0 1\n1 2 3\n").is_err());
        // id 2 missing
        assert!(Graph::from_edge_list("0 1\n1 3\n").is_err());
        assert!(Graph::from_edge_list("# nothing\n").is_err());
    }

    #[test]
    fn family_sizes() {
        let d = generate(Family::Dumbbell(7)).unwrap();
        assert_eq!((d.n(), d.m()), (15, 44));
        let s = generate(Family::Star(1)).unwrap();
        assert_eq!((s.n(), s.m()), (2, 1));
        let cm = generate(Family::CliqueMatching(7)).unwrap();
        assert_eq!(cm.m(), 49);
        let cs = generate(Family::CliqueSource { n: 7, k: 3 }).unwrap();
        assert_eq!(cs.m(), 2 * 21 + 3);
        assert_eq!(cs.degree(0), 6 + 3);
        let bt = generate(Family::BinaryTree { depth: 4 }).unwrap();
        assert_eq!((bt.n(), bt.m()), (15, 14));
        assert!(bt.is_tree());
    }

    #[test]
    fn family_argument_errors() {
        assert!(generate(Family::Path(0)).is_err());
        assert!(generate(Family::Star(0)).is_err());
        assert!(generate(Family::Cycle(2)).is_err());
        assert!(generate(Family::CliqueSource { n: 3, k: 4 }).is_err());
        assert!(Family::from_name("hypercube", Some(3), None, None).is_err());
        assert!(Family::from_name("clique_source", Some(3), None, None).is_err());
    }

    #[test]
    fn diameters() {
        let c4 = generate(Family::Cycle(4)).unwrap();
        assert_eq!(diameter(&c4).unwrap(), 2);
        assert_eq!(
            diameter(&generate(Family::Complete(5)).unwrap()).unwrap(),
            1
        );
        for n in 2..9 {
            assert_eq!(
                diameter(&generate(Family::Dumbbell(n)).unwrap()).unwrap(),
                4
            );
        }
        for depth in 1..7 {
            let t = generate(Family::BinaryTree { depth }).unwrap();
            assert_eq!(diameter(&t).unwrap(), 2 * (depth - 1));
        }
        let split = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!split.is_connected());
        assert!(matches!(diameter(&split), Err(Error::Disconnected(_))));
    }

    #[test]
    fn bfs_tree_masses() {
        let p3 = generate(Family::Path(3)).unwrap();
        let t = bfs_tree(&p3, 0, &[1.0 / 3.0; 3]).unwrap();
        let masses: Vec<f64> = (0..3).map(|x| t.subtree_mass(x)).collect();
        for (got, want) in masses.iter().zip([1.0, 2.0 / 3.0, 1.0 / 3.0]) {
            assert!((got - want).abs() < 1e-15);
        }

        let single = Graph::new(1, []).unwrap();
        let t = bfs_tree(&single, 0, &[0.7]).unwrap();
        assert!(t.tree_edges().is_empty());
        assert_eq!(t.subtree_mass(0), 0.7);

        let star = generate(Family::Star(5)).unwrap();
        let t = bfs_tree(&star, 0, &[1.0; 6]).unwrap();
        assert_eq!(t.subtree_mass(0), 6.0);
        assert!((1..6).all(|x| t.subtree_mass(x) == 1.0));

        let split = Graph::new(3, [(0, 1)]).unwrap();
        assert!(matches!(
            bfs_tree(&split, 0, &[1.0; 3]),
            Err(Error::Disconnected(2))
        ));
    }

    #[test]
    fn bfs_tree_ties_go_to_smallest_id() {
        let c4 = generate(Family::Cycle(4)).unwrap();
        let t = bfs_tree(&c4, 0, &[1.0; 4]).unwrap();
        assert_eq!(t.parent(2), 1);
        assert_eq!(t.path(1, 3), vec![1, 0, 3]);
        assert_eq!(t.diameter(), 3);
    }

    #[test]
    fn default_root_is_a_center() {
        let p5 = generate(Family::Path(5)).unwrap();
        assert_eq!(p5.default_root().unwrap(), 2);
        let d = generate(Family::Dumbbell(4)).unwrap();
        assert_eq!(d.default_root().unwrap(), 8);
    }

    #[test]
    fn canonical_string_round_trip() {
        let g = generate(Family::CliqueSource { n: 4, k: 2 }).unwrap();
        let s = g.canonical_string();
        assert_eq!(Graph::parse_canonical_string(&s).unwrap(), g);
    }

    #[test]
    fn weighted_totals() {
        let g = generate(Family::Path(3)).unwrap();
        let wg = WeightedGraph::new(g, vec![0.5, 0.25], vec![1.0, 0.0, 2.0]).unwrap();
        assert_eq!(wg.vertex_weight(1), 0.75);
        assert_eq!(wg.total_weight(), 2.0 * 0.75 + 3.0);
        assert_eq!(wg.vertex_weights().iter().sum::<f64>(), wg.total_weight());
        assert!(WeightedGraph::new(wg.graph().clone(), vec![-1.0, 0.0], vec![0.0; 3]).is_err());
    }
}
