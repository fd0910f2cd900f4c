//! General (signed) rotation systems and their algorithms: vertex switching,
//! the switch normal form, face tracing, Euler characteristic, balance and
//! frustration, switch-equivalence testing, and subdivision smoothing.
//!
//! A rotation system stores one cyclic neighbor order per vertex plus a sign
//! per edge; a negative sign marks an edge that crosses the orientation
//! reversing side pair of the fundamental square. Switching a vertex reverses
//! its order and negates all incident signs; it represents sliding the vertex
//! through the inverted sides and never changes the embedding.

use std::ops::Mul;

use crate::error::Error;
use crate::graph::Graph;
use crate::kuratowski::Subdivision;

/// Edge sign: `Minus` marks a twisted edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Per-vertex cyclic neighbor orders plus a sign per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    graph: Graph,
    pi: Vec<Vec<usize>>,
    signs: Vec<Sign>,
}

impl RotationSystem {
    /// Validates that each `pi[v]` is a permutation of `v`'s neighbor set and
    /// that there is exactly one sign per edge.
    pub fn new(graph: Graph, pi: Vec<Vec<usize>>, signs: Vec<Sign>) -> Result<Self, Error> {
        if pi.len() != graph.vertex_count() || signs.len() != graph.edge_count() {
            return Err(Error::InvalidRotationSystem(
                "rotation/sign table sizes do not match the graph".into(),
            ));
        }
        for (v, order) in pi.iter().enumerate() {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != graph.neighbors(v) {
                return Err(Error::InvalidRotationSystem(format!(
                    "pi[{v}] is not a permutation of the neighbor set"
                )));
            }
        }
        Ok(RotationSystem { graph, pi, signs })
    }

    /// Skips validation; the enumeration inner loop builds systems whose
    /// orders are permutations by construction.
    pub(crate) fn new_unchecked(graph: Graph, pi: Vec<Vec<usize>>, signs: Vec<Sign>) -> Self {
        RotationSystem { graph, pi, signs }
    }

    /// All-positive system with the given orders.
    pub fn positive(graph: Graph, pi: Vec<Vec<usize>>) -> Result<Self, Error> {
        let signs = vec![Sign::Plus; graph.edge_count()];
        RotationSystem::new(graph, pi, signs)
    }

    /// All-positive system with every order ascending.
    pub fn ascending(graph: Graph) -> Self {
        let pi = (0..graph.vertex_count())
            .map(|v| graph.neighbors(v).to_vec())
            .collect();
        let signs = vec![Sign::Plus; graph.edge_count()];
        RotationSystem { graph, pi, signs }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pi(&self, v: usize) -> &[usize] {
        &self.pi[v]
    }

    pub fn sign(&self, edge_id: usize) -> Sign {
        self.signs[edge_id]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn sign_of(&self, u: usize, v: usize) -> Option<Sign> {
        self.graph.edge_id(u, v).map(|e| self.signs[e])
    }

    fn switch_in_place(&mut self, v: usize) {
        self.pi[v].reverse();
        for i in 0..self.pi[v].len() {
            let u = self.pi[v][i];
            let e = self.graph.edge_id(v, u).expect("pi lists neighbors");
            self.signs[e] = self.signs[e].flip();
        }
    }

    /// Reverses `pi[v]` and negates the sign of every edge at `v`.
    pub fn switch(&self, v: usize) -> Result<RotationSystem, Error> {
        if v >= self.graph.vertex_count() {
            return Err(Error::VertexOutOfRange {
                v,
                n: self.graph.vertex_count(),
            });
        }
        let mut out = self.clone();
        out.switch_in_place(v);
        Ok(out)
    }

    /// Switches every vertex `v` with `set[v]`.
    pub fn apply_switches(&self, set: &[bool]) -> RotationSystem {
        let mut out = self.clone();
        for (v, &on) in set.iter().enumerate() {
            if on {
                out.switch_in_place(v);
            }
        }
        out
    }

    /// Switch normal form. Every vertex whose minimum neighbor `u` has its
    /// cyclic successor above its predecessor is switched, then every order is
    /// rotated to start at `u`. The flip decision at a vertex depends only on
    /// that vertex's own order, so the outcome is independent of processing
    /// order, and pre-applied switch sets cancel out: the normal form is a
    /// canonical representative of the switch class (per labelled graph).
    ///
    /// Returns the normalized system and the per-vertex switch flags.
    pub fn format(&self) -> Result<(RotationSystem, Vec<bool>), Error> {
        let n = self.graph.vertex_count();
        for v in 0..n {
            let d = self.graph.degree(v);
            if d < 3 {
                return Err(Error::DegreeTooLow { v, degree: d });
            }
        }
        let mut out = self.clone();
        let mut switched = vec![false; n];
        #[allow(clippy::needless_range_loop)]
        for v in 0..n {
            let d = out.pi[v].len();
            let umin = *out.pi[v].iter().min().expect("degree >= 3");
            let i = out.pi[v].iter().position(|&u| u == umin).unwrap();
            let succ = out.pi[v][(i + 1) % d];
            let pred = out.pi[v][(i + d - 1) % d];
            if succ > pred {
                out.switch_in_place(v);
                switched[v] = true;
            }
            let j = out.pi[v].iter().position(|&u| u == umin).unwrap();
            out.pi[v].rotate_left(j);
        }
        Ok((out, switched))
    }

    /// Flattened comparison key: degree sequence, then per vertex the rotation
    /// as (neighbor, sign) pairs. Positive sorts below negative.
    pub fn sort_key(&self) -> Vec<u32> {
        let n = self.graph.vertex_count();
        let mut key = Vec::with_capacity(n + 2 * self.graph.edge_count());
        for v in 0..n {
            key.push(self.graph.degree(v) as u32);
        }
        for v in 0..n {
            for &u in &self.pi[v] {
                let e = self.graph.edge_id(v, u).expect("pi lists neighbors");
                key.push(2 * u as u32 + self.signs[e].is_minus() as u32);
            }
        }
        key
    }

    /// Traces all `(dart, side)` states into boundary walks. Every one of the
    /// `4m` states lies in exactly one walk and each face is traced twice,
    /// once per side, so the face count is half the orbit count.
    pub fn trace_faces(&self) -> FaceSet {
        let m = self.graph.edge_count();
        let mut visited = vec![false; 4 * m];
        let mut walks = Vec::new();
        for start in 0..4 * m {
            if visited[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut state = start;
            loop {
                visited[state] = true;
                walk.push(self.decode_state(state));
                state = self.next_state(state);
                if state == start {
                    break;
                }
            }
            walks.push(walk);
        }
        FaceSet { walks }
    }

    /// Number of faces, without materializing the walks.
    pub fn face_count(&self) -> usize {
        let m = self.graph.edge_count();
        let mut visited = vec![false; 4 * m];
        let mut orbits = 0;
        for start in 0..4 * m {
            if visited[start] {
                continue;
            }
            orbits += 1;
            let mut state = start;
            loop {
                visited[state] = true;
                state = self.next_state(state);
                if state == start {
                    break;
                }
            }
        }
        orbits / 2
    }

    fn decode_state(&self, state: usize) -> FaceStep {
        let (lo, hi) = self.graph.edges()[state / 4];
        let (from, to) = if state & 2 == 0 { (lo, hi) } else { (hi, lo) };
        let sign = if state & 1 == 0 { Sign::Plus } else { Sign::Minus };
        FaceStep { from, to, sign }
    }

    fn encode_state(&self, from: usize, to: usize, sign: Sign) -> usize {
        let e = self.graph.edge_id(from, to).expect("dart edge");
        let dir = (from > to) as usize;
        e * 4 + dir * 2 + sign.is_minus() as usize
    }

    /// One step of the face walk: crossing the edge multiplies the side bit by
    /// the edge sign; the walk leaves through the successor of the entry
    /// neighbor on the positive side and through the predecessor otherwise.
    fn next_state(&self, state: usize) -> usize {
        let FaceStep { from: u, to: v, sign: s } = self.decode_state(state);
        let e = state / 4;
        let s2 = s * self.signs[e];
        let order = &self.pi[v];
        let d = order.len();
        let i = order.iter().position(|&w| w == u).expect("pi lists neighbors");
        let x = if s2 == Sign::Plus {
            order[(i + 1) % d]
        } else {
            order[(i + d - 1) % d]
        };
        self.encode_state(v, x, s2)
    }

    /// `|V| - |E| + |F|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.graph.vertex_count() as i64 - self.graph.edge_count() as i64
            + self.face_count() as i64
    }

    /// True iff some switch set removes every negative sign, i.e. every cycle
    /// has positive sign product.
    pub fn is_balanced(&self) -> Result<bool, Error> {
        if !self.graph.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        let n = self.graph.vertex_count();
        if n == 0 {
            return Ok(true);
        }
        let mut assigned: Vec<Option<Sign>> = vec![None; n];
        assigned[0] = Some(Sign::Plus);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let sv = assigned[v].unwrap();
            for &u in self.graph.neighbors(v) {
                let w = self.sign_of(v, u).unwrap();
                let expect = sv * w;
                match assigned[u] {
                    None => {
                        assigned[u] = Some(expect);
                        queue.push_back(u);
                    }
                    Some(su) => {
                        if su != expect {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Minimum number of negative edges over all switch sets, brute force over
    /// the `2^(|V|-1)` sets fixing vertex 0.
    pub fn frustration(&self) -> Result<usize, Error> {
        let n = self.graph.vertex_count();
        if n > 20 {
            return Err(Error::TooLarge {
                what: "frustration",
                size: n,
                limit: 20,
            });
        }
        if n == 0 {
            return Ok(0);
        }
        let edges = self.graph.edges();
        let mut best = usize::MAX;
        for mask in 0u32..1 << (n - 1) {
            let flipped = |v: usize| v > 0 && mask >> (v - 1) & 1 == 1;
            let mut negatives = 0;
            for (e, &(u, v)) in edges.iter().enumerate() {
                let mut s = self.signs[e];
                if flipped(u) != flipped(v) {
                    s = s.flip();
                }
                negatives += s.is_minus() as usize;
            }
            best = best.min(negatives);
        }
        Ok(best)
    }

    /// Relabels vertices by `sigma` (old -> new).
    pub fn relabel(&self, sigma: &[usize]) -> RotationSystem {
        let graph = self.graph.relabel(sigma);
        let n = graph.vertex_count();
        let mut pi = vec![Vec::new(); n];
        for v in 0..n {
            pi[sigma[v]] = self.pi[v].iter().map(|&u| sigma[u]).collect();
        }
        let mut signs = vec![Sign::Plus; graph.edge_count()];
        for (e, &(u, v)) in self.graph.edges().iter().enumerate() {
            let ne = graph.edge_id(sigma[u], sigma[v]).expect("relabeled edge");
            signs[ne] = self.signs[e];
        }
        RotationSystem { graph, pi, signs }
    }

    /// Restriction to an edge subgraph: orders filtered to the kept edges,
    /// signs copied. Vertices isolated in `h` get empty orders.
    pub fn restrict(&self, h: &Graph) -> Result<RotationSystem, Error> {
        if !h.is_edge_subgraph_of(&self.graph) {
            return Err(Error::InvalidRotationSystem(
                "restriction target is not an edge subgraph".into(),
            ));
        }
        let n = h.vertex_count();
        let pi: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                self.pi[v]
                    .iter()
                    .copied()
                    .filter(|&u| h.has_edge(v, u))
                    .collect()
            })
            .collect();
        let mut signs = vec![Sign::Plus; h.edge_count()];
        for (e, &(u, v)) in h.edges().iter().enumerate() {
            signs[e] = self.sign_of(u, v).unwrap();
        }
        Ok(RotationSystem {
            graph: h.clone(),
            pi,
            signs,
        })
    }
}

/// One traced state: the dart `from -> to` with the side bit it carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceStep {
    pub from: usize,
    pub to: usize,
    pub sign: Sign,
}

/// All boundary walks of a rotation system. Walks come in twin pairs tracing
/// the same face from its two sides.
#[derive(Debug, Clone)]
pub struct FaceSet {
    walks: Vec<Vec<FaceStep>>,
}

impl FaceSet {
    pub fn walks(&self) -> &[Vec<FaceStep>] {
        &self.walks
    }

    pub fn orbit_count(&self) -> usize {
        self.walks.len()
    }

    pub fn face_count(&self) -> usize {
        self.walks.len() / 2
    }
}

/// Witness of switch-equivalence: relabeling `mapping` (a -> b labels) and the
/// switch set on `a`'s vertices that together carry `a` onto `b`, up to a
/// cyclic rotation of each order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub mapping: Vec<usize>,
    pub switched: Vec<bool>,
}

/// Tests switch-equivalence, optionally over graph isomorphisms. Requires
/// minimum degree 3 on both sides (the normal form is only canonical there);
/// returns `None` otherwise.
pub fn equivalent(
    a: &RotationSystem,
    b: &RotationSystem,
    allow_relabel: bool,
) -> Option<Equivalence> {
    let (ga, gb) = (a.graph(), b.graph());
    if ga.vertex_count() != gb.vertex_count()
        || ga.edge_count() != gb.edge_count()
        || ga.min_degree() < 3
        || gb.min_degree() < 3
    {
        return None;
    }
    let (fb, fb_flags) = b.format().expect("degree checked");
    if !allow_relabel {
        if ga != gb {
            return None;
        }
        let (fa, fa_flags) = a.format().expect("degree checked");
        if fa.pi == fb.pi && fa.signs == fb.signs {
            let switched = fa_flags
                .iter()
                .zip(&fb_flags)
                .map(|(x, y)| x != y)
                .collect();
            return Some(Equivalence {
                mapping: (0..ga.vertex_count()).collect(),
                switched,
            });
        }
        return None;
    }
    let n = ga.vertex_count();
    for sigma in graph_isomorphisms(ga, gb) {
        let c = a.relabel(&sigma);
        let (fc, fc_flags) = c.format().expect("degree checked");
        if fc.pi == fb.pi && fc.signs == fb.signs {
            let mut switched = vec![false; n];
            for v in 0..n {
                switched[v] = fc_flags[sigma[v]] != fb_flags[sigma[v]];
            }
            return Some(Equivalence {
                mapping: sigma,
                switched,
            });
        }
    }
    None
}

/// All graph isomorphisms `a -> b` as label maps, in lexicographic order of
/// the mapping. Backtracking on degree-compatible assignments.
pub(crate) fn graph_isomorphisms(a: &Graph, b: &Graph) -> Vec<Vec<usize>> {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack_iso(a, b, 0, &mut mapping, &mut used, &mut out);
    out
}

fn backtrack_iso(
    a: &Graph,
    b: &Graph,
    v: usize,
    mapping: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    let n = a.vertex_count();
    if v == n {
        out.push(mapping.clone());
        return;
    }
    'candidates: for w in 0..n {
        if used[w] || a.degree(v) != b.degree(w) {
            continue;
        }
        for (u, &mu) in mapping.iter().enumerate().take(v) {
            if a.has_edge(v, u) != b.has_edge(w, mu) {
                continue 'candidates;
            }
        }
        mapping[v] = w;
        used[w] = true;
        backtrack_iso(a, b, v + 1, mapping, used, out);
        used[w] = false;
        mapping[v] = usize::MAX;
    }
}

/// Rotation system induced on the branch vertices of a subdivision: each chain
/// collapses to one edge whose sign is the product along the chain, and each
/// branch vertex's order is the restriction of its order in `rs` to the
/// chains at it. Returns the smoothed system (on the core labels of the
/// returned [`Subdivision`]) together with the chain table.
pub fn induced_smoothed(
    rs: &RotationSystem,
    h: &Graph,
) -> Result<(RotationSystem, Subdivision), Error> {
    if !h.is_edge_subgraph_of(rs.graph()) {
        return Err(Error::NotASubdivision("not an edge subgraph of the host"));
    }
    let sub = Subdivision::analyze(h)?;
    let core = sub.core.clone();
    let k = core.vertex_count();

    // first h-edge of a chain at a branch vertex -> (core edge id, far core label)
    let mut first_edge = std::collections::HashMap::new();
    for (ce, &(c1, c2)) in core.edges().iter().enumerate() {
        let path = &sub.paths[ce];
        let (b1, b2) = (path[0], path[path.len() - 1]);
        debug_assert_eq!(b1, sub.branch[c1]);
        debug_assert_eq!(b2, sub.branch[c2]);
        first_edge.insert((b1, path[1]), (ce, c2));
        first_edge.insert((b2, path[path.len() - 2]), (ce, c1));
    }

    let mut pi = vec![Vec::new(); k];
    let mut signs = vec![Sign::Plus; core.edge_count()];
    for (order, &b) in pi.iter_mut().zip(&sub.branch) {
        for &u in rs.pi(b) {
            if !h.has_edge(b, u) {
                continue;
            }
            let &(_, far) = first_edge
                .get(&(b, u))
                .expect("every h-edge at a branch vertex starts a chain");
            order.push(far);
        }
    }
    for (ce, path) in sub.paths.iter().enumerate() {
        let mut s = Sign::Plus;
        for w in path.windows(2) {
            s = s * rs.sign_of(w[0], w[1]).unwrap();
        }
        signs[ce] = s;
    }
    let smoothed = RotationSystem::new(core, pi, signs)?;
    Ok((smoothed, sub))
}
