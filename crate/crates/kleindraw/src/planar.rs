//! Planarity testing by incremental face embedding, one biconnected block at
//! a time (the Demoucron–Malgrange–Pertuiset scheme). Correctness over speed:
//! bridges are recomputed each round, which is fine at desk scale.

use std::collections::BTreeSet;

use crate::graph::Graph;

pub(crate) fn is_planar(g: &Graph) -> bool {
    biconnected_blocks(g)
        .iter()
        .all(|block| block_planar(g, block))
}

/// Edge lists of the biconnected blocks (Hopcroft–Tarjan lowpoint DFS).
fn biconnected_blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    struct Dfs<'a> {
        g: &'a Graph,
        num: Vec<usize>,
        low: Vec<usize>,
        counter: usize,
        stack: Vec<(usize, usize)>,
        blocks: Vec<Vec<(usize, usize)>>,
    }
    impl Dfs<'_> {
        fn visit(&mut self, v: usize, parent: Option<usize>) {
            self.counter += 1;
            self.num[v] = self.counter;
            self.low[v] = self.counter;
            let mut skipped_parent = false;
            for &u in self.g.neighbors(v) {
                if !skipped_parent && Some(u) == parent {
                    skipped_parent = true;
                    continue;
                }
                if self.num[u] == 0 {
                    self.stack.push((v, u));
                    self.visit(u, Some(v));
                    self.low[v] = self.low[v].min(self.low[u]);
                    if self.low[u] >= self.num[v] {
                        let mut block = Vec::new();
                        while let Some(e) = self.stack.pop() {
                            block.push(e);
                            if e == (v, u) {
                                break;
                            }
                        }
                        self.blocks.push(block);
                    }
                } else if self.num[u] < self.num[v] {
                    self.stack.push((v, u));
                    self.low[v] = self.low[v].min(self.num[u]);
                }
            }
        }
    }

    let mut dfs = Dfs {
        g,
        num: vec![0; g.vertex_count()],
        low: vec![0; g.vertex_count()],
        counter: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    for v in 0..g.vertex_count() {
        if dfs.num[v] == 0 {
            dfs.visit(v, None);
        }
    }
    dfs.blocks
}

struct Bridge {
    attachments: Vec<usize>,
    /// Interior vertices for a component bridge; empty for a chord.
    component: Vec<usize>,
    chord: Option<(usize, usize)>,
}

fn block_planar(g: &Graph, block: &[(usize, usize)]) -> bool {
    let vertices: BTreeSet<usize> = block.iter().flat_map(|&(u, v)| [u, v]).collect();
    let nv = vertices.len();
    let ne = block.len();
    if nv <= 4 {
        return true;
    }
    if ne > 3 * nv - 6 {
        return false;
    }

    let n = g.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in block {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let in_block = {
        let mut b = vec![false; n];
        for &v in &vertices {
            b[v] = true;
        }
        b
    };

    let cycle = find_cycle(&adj, *vertices.iter().next().unwrap());
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.clone()];
    let mut embedded_vertex = vec![false; n];
    let mut embedded_edge: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..cycle.len() {
        let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        embedded_vertex[u] = true;
        embedded_edge.insert(norm(u, v));
    }

    loop {
        let bridges = compute_bridges(block, &adj, &in_block, &embedded_vertex, &embedded_edge);
        if bridges.is_empty() {
            return true;
        }

        let mut chosen: Option<(usize, usize)> = None; // (bridge, face)
        for (bi, bridge) in bridges.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| bridge.attachments.iter().all(|a| f.contains(a)))
                .map(|(fi, _)| fi)
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    chosen = Some((bi, admissible[0]));
                    break;
                }
                _ => {
                    if chosen.is_none() {
                        chosen = Some((bi, admissible[0]));
                    }
                }
            }
        }
        let (bi, fi) = chosen.expect("bridges nonempty");
        let bridge = &bridges[bi];

        let path = alpha_path(bridge, &adj, &embedded_vertex);
        for w in path.windows(2) {
            embedded_edge.insert(norm(w[0], w[1]));
        }
        for &v in &path[1..path.len() - 1] {
            embedded_vertex[v] = true;
        }

        let face = faces.swap_remove(fi);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn find_cycle(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    // walk forward never revisiting the previous vertex until a repeat shows up
    let mut path = vec![start];
    let mut prev = usize::MAX;
    loop {
        let v = *path.last().unwrap();
        let next = *adj[v]
            .iter()
            .find(|&&u| u != prev)
            .expect("min degree 2 inside a block");
        if let Some(pos) = path.iter().position(|&x| x == next) {
            return path[pos..].to_vec();
        }
        prev = v;
        path.push(next);
    }
}

fn compute_bridges(
    block: &[(usize, usize)],
    adj: &[Vec<usize>],
    in_block: &[bool],
    embedded_vertex: &[bool],
    embedded_edge: &BTreeSet<(usize, usize)>,
) -> Vec<Bridge> {
    let mut bridges = Vec::new();
    for &(u, v) in block {
        if embedded_vertex[u] && embedded_vertex[v] && !embedded_edge.contains(&norm(u, v)) {
            bridges.push(Bridge {
                attachments: vec![u, v],
                component: Vec::new(),
                chord: Some((u, v)),
            });
        }
    }
    let n = adj.len();
    let mut seen = vec![false; n];
    for root in 0..n {
        if !in_block[root] || embedded_vertex[root] || seen[root] {
            continue;
        }
        let mut component = vec![root];
        let mut attachments = BTreeSet::new();
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if embedded_vertex[u] {
                    attachments.insert(u);
                } else if !seen[u] {
                    seen[u] = true;
                    component.push(u);
                    stack.push(u);
                }
            }
        }
        bridges.push(Bridge {
            attachments: attachments.into_iter().collect(),
            component,
            chord: None,
        });
    }
    bridges
}

/// A path through the bridge between two distinct attachment vertices.
fn alpha_path(bridge: &Bridge, adj: &[Vec<usize>], embedded_vertex: &[bool]) -> Vec<usize> {
    if let Some((u, v)) = bridge.chord {
        return vec![u, v];
    }
    let start = bridge.attachments[0];
    let in_component = {
        let mut b = vec![false; adj.len()];
        for &v in &bridge.component {
            b[v] = true;
        }
        b
    };
    let mut parent = vec![usize::MAX; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    for &u in &adj[start] {
        if in_component[u] && parent[u] == usize::MAX {
            parent[u] = start;
            queue.push_back(u);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if embedded_vertex[u] && u != start {
                let mut path = vec![u, v];
                let mut w = v;
                while parent[w] != start {
                    w = parent[w];
                    path.push(w);
                }
                path.push(start);
                path.reverse();
                return path;
            }
            if in_component[u] && parent[u] == usize::MAX {
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    unreachable!("bridge of a 2-connected block has two attachments");
}

/// Splits a simple face cycle along an embedded path between two boundary
/// vertices, returning the two replacement cycles.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let a = path[0];
    let b = *path.last().unwrap();
    let i = face.iter().position(|&x| x == a).unwrap();
    let k = face.iter().position(|&x| x == b).unwrap();
    let len = face.len();
    let arc = |from: usize, to: usize| -> Vec<usize> {
        let mut out = Vec::new();
        let mut p = from;
        loop {
            out.push(face[p]);
            if p == to {
                break;
            }
            p = (p + 1) % len;
        }
        out
    };
    let interior = &path[1..path.len() - 1];
    let mut f1 = arc(i, k);
    f1.extend(interior.iter().rev());
    let mut f2 = arc(k, i);
    f2.extend(interior.iter());
    (f1, f2)
}
