//! Extraction of a subgraph homeomorphic to K5 or K3,3 from a non-planar
//! graph, and subdivision utilities (smoothing, chain lookup).

use std::collections::HashMap;

use crate::error::Error;
use crate::graph::{self, Graph};

/// A Kuratowski subdivision decomposed into its smoothed core and chains.
///
/// `core` lives on compact labels `0..k`; `branch[c]` is the original vertex
/// of core label `c` (ascending, so core labels sort like original labels).
/// `paths[e]` is the full original path of core edge `e`, oriented from the
/// endpoint with the lower core label; interior entries are the degree-2
/// chain vertices.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub core: Graph,
    pub branch: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
}

impl Subdivision {
    /// Decomposes an edge subgraph into branch vertices and chains, verifying
    /// that it is a subdivision of K5 or K3,3.
    pub fn analyze(h: &Graph) -> Result<Subdivision, Error> {
        let n = h.vertex_count();
        let mut branch = Vec::new();
        for v in 0..n {
            match h.degree(v) {
                0 | 2 => {}
                3 | 4 => branch.push(v),
                1 => return Err(Error::NotASubdivision("degree-1 vertex")),
                _ => return Err(Error::NotASubdivision("degree above 4")),
            }
        }
        let k = branch.len();
        let expect_degree = match k {
            5 => 4,
            6 => 3,
            _ => return Err(Error::NotASubdivision("branch vertex count is not 5 or 6")),
        };
        if branch.iter().any(|&b| h.degree(b) != expect_degree) {
            return Err(Error::NotASubdivision("mixed branch degrees"));
        }
        let core_of: HashMap<usize, usize> =
            branch.iter().enumerate().map(|(c, &b)| (b, c)).collect();

        let mut consumed = vec![false; h.edge_count()];
        let mut core_edges: Vec<(usize, usize)> = Vec::new();
        let mut paths: Vec<Vec<usize>> = Vec::new();
        for (ci, &b) in branch.iter().enumerate() {
            for &u in h.neighbors(b) {
                let eid = h.edge_id(b, u).unwrap();
                if consumed[eid] {
                    continue;
                }
                consumed[eid] = true;
                let mut path = vec![b, u];
                let (mut prev, mut cur) = (b, u);
                while h.degree(cur) == 2 {
                    let next = *h
                        .neighbors(cur)
                        .iter()
                        .find(|&&x| x != prev)
                        .expect("degree-2 vertex has two neighbors");
                    consumed[h.edge_id(cur, next).unwrap()] = true;
                    path.push(next);
                    prev = cur;
                    cur = next;
                }
                let cj = *core_of.get(&cur).expect("walk ends at a branch vertex");
                if cj == ci {
                    return Err(Error::NotASubdivision("chain loops back to its start"));
                }
                if core_edges.contains(&(ci.min(cj), ci.max(cj))) {
                    return Err(Error::NotASubdivision("two chains join the same branch pair"));
                }
                debug_assert!(ci < cj, "ascending branch scan reaches the lower end first");
                core_edges.push((ci, cj));
                paths.push(path);
            }
        }
        if consumed.iter().any(|&c| !c) {
            return Err(Error::NotASubdivision("stray cycle of degree-2 vertices"));
        }

        // keep paths aligned with the core's edge ids
        let mut order: Vec<usize> = (0..core_edges.len()).collect();
        order.sort_by_key(|&i| core_edges[i]);
        let paths: Vec<Vec<usize>> = order.iter().map(|&i| paths[i].clone()).collect();
        let core = Graph::build(k, &core_edges)
            .map_err(|_| Error::NotASubdivision("core is not simple"))?;

        if k == 6 && !is_bipartite_connected(&core) {
            return Err(Error::NotASubdivision("3-regular core is not K3,3"));
        }
        Ok(Subdivision {
            core,
            branch,
            paths,
        })
    }

    /// Core label of an original branch vertex.
    pub fn core_of(&self, orig: usize) -> Option<usize> {
        self.branch.binary_search(&orig).ok()
    }

    /// Interior vertices per core edge, in path order.
    pub fn interiors(&self) -> Vec<Vec<usize>> {
        self.paths
            .iter()
            .map(|p| p[1..p.len() - 1].to_vec())
            .collect()
    }
}

fn is_bipartite_connected(g: &Graph) -> bool {
    if !g.is_connected() {
        return false;
    }
    let n = g.vertex_count();
    let mut color: Vec<Option<bool>> = vec![None; n];
    color[0] = Some(false);
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        let c = color[v].unwrap();
        for &u in g.neighbors(v) {
            match color[u] {
                None => {
                    color[u] = Some(!c);
                    stack.push(u);
                }
                Some(cu) => {
                    if cu == c {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Edge-minimal non-planar subgraph of `g`: probes edges for deletion in
/// ascending order and keeps only the critical ones. The result is a
/// Kuratowski subdivision (isolated vertices keep degree 0).
pub fn kuratowski_subgraph(g: &Graph) -> Result<Graph, Error> {
    if graph::is_planar(g) {
        return Err(Error::GraphIsPlanar);
    }
    let mut keep = vec![true; g.edge_count()];
    for e in 0..g.edge_count() {
        keep[e] = false;
        if graph::is_planar(&g.edge_subgraph(&keep)) {
            keep[e] = true;
        }
    }
    Ok(g.edge_subgraph(&keep))
}

/// Smooths a subdivision: branch vertices become core vertices, each maximal
/// degree-2 path becomes one core edge. Returns the core and, per core edge,
/// the ordered interior vertex list.
pub fn smooth(h: &Graph) -> Result<(Graph, Vec<Vec<usize>>), Error> {
    let sub = Subdivision::analyze(h)?;
    let interiors = sub.interiors();
    Ok((sub.core, interiors))
}

/// The chain through a degree-2 vertex of `h`: both branch endpoints and the
/// full path between them, oriented from the lower-labelled endpoint.
pub fn chain_endpoints(h: &Graph, v: usize) -> Result<(usize, usize, Vec<usize>), Error> {
    if h.degree(v) != 2 {
        return Err(Error::NotAChainVertex(v));
    }
    let sub = Subdivision::analyze(h)?;
    for path in &sub.paths {
        if path[1..path.len() - 1].contains(&v) {
            return Ok((path[0], path[path.len() - 1], path.clone()));
        }
    }
    unreachable!("every degree-2 vertex lies on exactly one chain");
}
