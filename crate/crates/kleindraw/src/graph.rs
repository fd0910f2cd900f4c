//! Simple undirected graphs, fixture constructors and structural predicates.

use std::fmt;

use crate::error::Error;
use crate::planar;
use crate::rotation::{RotationSystem, Sign};

/// Simple undirected graph on vertices `0..n`. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Pairs are normalized to `u < v`.
    pub fn build(n: usize, edges: &[(usize, usize)]) -> Result<Graph, Error> {
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { v, n });
                }
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        for w in norm.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: norm,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized pairs `u < v`, in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Index of edge `{u, v}` in [`Self::edges`], if present.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// Subgraph keeping only the edges with `keep[edge_id]`, same vertex set.
    pub fn edge_subgraph(&self, keep: &[bool]) -> Graph {
        let edges: Vec<_> = self
            .edges
            .iter()
            .zip(keep)
            .filter(|(_, k)| **k)
            .map(|(e, _)| *e)
            .collect();
        Graph::build(self.n, &edges).expect("subset of a valid edge list")
    }

    /// Is `self` an edge subgraph of `g` (same vertex count)?
    pub fn is_edge_subgraph_of(&self, g: &Graph) -> bool {
        self.n == g.n && self.edges.iter().all(|&(u, v)| g.has_edge(u, v))
    }

    /// Relabels vertices by `sigma` (old label -> new label).
    pub fn relabel(&self, sigma: &[usize]) -> Graph {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (sigma[u], sigma[v])).collect();
        Graph::build(self.n, &edges).expect("bijective relabeling of a valid graph")
    }
}

/// Named fixture graphs used as drawing bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphKind {
    K5,
    K33,
}

impl GraphKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GraphKind::K5 => "k5",
            GraphKind::K33 => "k33",
        }
    }

    pub fn graph(&self) -> Graph {
        match self {
            GraphKind::K5 => complete(5),
            GraphKind::K33 => complete_bipartite(3, 3),
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::build(n, &edges).unwrap()
}

fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in a..a + b {
            edges.push((u, v));
        }
    }
    Graph::build(a + b, &edges).unwrap()
}

/// `K5` is the complete graph on five vertices, `K33` the complete bipartite
/// graph with parts `{0,1,2}` and `{3,4,5}`. Names are matched case-insensitively.
pub fn make_named(name: &str) -> Result<Graph, Error> {
    match name.to_ascii_lowercase().as_str() {
        "k5" => Ok(GraphKind::K5.graph()),
        "k33" | "k3,3" => Ok(GraphKind::K33.graph()),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// The m-by-n square grid wrapped on the flat Klein bottle, together with the
/// rotation system of its template drawing.
///
/// `m` counts positions along the non-inverted direction (the x axis of the
/// fundamental square) and `n` along the inverted one (the y axis). Vertex
/// `i*n + j` sits in column `i`, row `j`. Wrapping a column edge across the
/// vertical side pair reverses the row index and twists the edge; row wraps
/// across the horizontal pair are direct. Each vertex lists its neighbors in
/// the cyclic order (right, up, left, down) of the template.
///
/// Dimensions that would produce parallel edges (`n < 3`, or `m == 2` with
/// odd `n`) are rejected.
pub fn klein_grid(m: usize, n: usize) -> Result<(Graph, RotationSystem), Error> {
    if m < 2 || n < 2 {
        return Err(Error::BadDimensions {
            m,
            n,
            reason: "need m >= 2 and n >= 2",
        });
    }
    if n < 3 || (m == 2 && n % 2 == 1) {
        return Err(Error::BadDimensions {
            m,
            n,
            reason: "template degenerates to a multigraph",
        });
    }
    let id = |i: usize, j: usize| i * n + j;
    // (neighbor, twisted) in the order right, up, left, down
    let around = |i: usize, j: usize| -> [(usize, bool); 4] {
        let right = if i + 1 < m {
            (id(i + 1, j), false)
        } else {
            (id(0, n - 1 - j), true)
        };
        let up = if j + 1 < n { (id(i, j + 1), false) } else { (id(i, 0), false) };
        let left = if i > 0 {
            (id(i - 1, j), false)
        } else {
            (id(m - 1, n - 1 - j), true)
        };
        let down = if j > 0 { (id(i, j - 1), false) } else { (id(i, n - 1), false) };
        [right, up, left, down]
    };

    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let v = id(i, j);
            for (u, _) in around(i, j) {
                if v < u {
                    edges.push((v, u));
                }
            }
        }
    }
    let graph = Graph::build(m * n, &edges)?;

    let mut pi = Vec::with_capacity(m * n);
    let mut signs = vec![Sign::Plus; graph.edge_count()];
    for i in 0..m {
        for j in 0..n {
            let v = id(i, j);
            let mut order = Vec::with_capacity(4);
            for (u, twisted) in around(i, j) {
                order.push(u);
                if twisted {
                    let e = graph.edge_id(v, u).expect("template edge");
                    signs[e] = Sign::Minus;
                }
            }
            pi.push(order);
        }
    }
    let rs = RotationSystem::new(graph.clone(), pi, signs)?;
    Ok((graph, rs))
}

/// Planarity test by incremental face embedding, one biconnected block at a
/// time.
pub fn is_planar(g: &Graph) -> bool {
    planar::is_planar(g)
}

/// True iff removing any `k - 1` vertices leaves the graph connected.
/// Exhaustive over removal subsets; intended for desk-scale inputs.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if !g.is_connected() {
        return false;
    }
    let n = g.vertex_count();
    let mut removed = vec![false; n];
    subsets_connected(g, k - 1, 0, &mut removed)
}

fn subsets_connected(g: &Graph, left: usize, start: usize, removed: &mut Vec<bool>) -> bool {
    if left == 0 {
        return connected_without(g, removed);
    }
    for v in start..g.vertex_count() {
        removed[v] = true;
        if !subsets_connected(g, left - 1, v + 1, removed) {
            removed[v] = false;
            return false;
        }
        removed[v] = false;
    }
    true
}

fn connected_without(g: &Graph, removed: &[bool]) -> bool {
    let n = g.vertex_count();
    let Some(root) = (0..n).find(|&v| !removed[v]) else {
        return true;
    };
    let mut seen = vec![false; n];
    let mut stack = vec![root];
    seen[root] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if !seen[u] && !removed[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == (0..n).filter(|&v| !removed[v]).count()
}
