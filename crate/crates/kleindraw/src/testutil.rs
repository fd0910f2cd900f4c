//! Deterministic randomness and independent oracles shared by the unit tests.

use std::collections::HashMap;

use crate::graph::Graph;
use crate::perm::all_permutations;
use crate::rotation::{RotationSystem, Sign};

pub(crate) struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

pub(crate) fn random_permutation(n: usize, rng: &mut XorShift) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.below(i + 1));
    }
    p
}

pub(crate) fn random_signs(m: usize, rng: &mut XorShift) -> Vec<Sign> {
    (0..m)
        .map(|_| if rng.bool() { Sign::Minus } else { Sign::Plus })
        .collect()
}

pub(crate) fn random_switch_set(n: usize, rng: &mut XorShift) -> Vec<bool> {
    (0..n).map(|_| rng.bool()).collect()
}

/// Uniformly random orders and signs on `g`.
pub(crate) fn random_system(g: &Graph, rng: &mut XorShift) -> RotationSystem {
    let pi = (0..g.vertex_count())
        .map(|v| {
            let mut order = g.neighbors(v).to_vec();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.below(i + 1));
            }
            order
        })
        .collect();
    RotationSystem::new(g.clone(), pi, random_signs(g.edge_count(), rng)).unwrap()
}

/// Planarity oracle: a connected graph is planar iff some pure rotation
/// system has Euler characteristic 2. Exhaustive over the product of
/// per-vertex cyclic orders; only usable on tiny graphs.
pub(crate) fn planar_by_rotation_search(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n <= 2 || g.edge_count() <= 2 {
        return true;
    }
    assert!(g.is_connected(), "oracle corpus is connected");
    // fix each vertex's first neighbor to quotient out cyclic rotations
    let tails: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|v| {
            let nb = g.neighbors(v);
            let k = nb.len().saturating_sub(1);
            all_permutations(k)
                .into_iter()
                .map(|p| {
                    let mut order = vec![nb[0]];
                    order.extend(p.iter().map(|&i| nb[i + 1]));
                    order
                })
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; n];
    loop {
        let pi: Vec<Vec<usize>> = (0..n).map(|v| tails[v][idx[v]].clone()).collect();
        let rs = RotationSystem::positive(g.clone(), pi).unwrap();
        if rs.euler_characteristic() == 2 {
            return true;
        }
        // odometer
        let mut v = 0;
        loop {
            if v == n {
                return false;
            }
            idx[v] += 1;
            if idx[v] < tails[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

/// Euler characteristic through the orientation double cover: lift to a pure
/// system on twice the vertices, trace its faces with the plain orientable
/// walk, and halve. Independent of the signed tracer it cross-checks.
pub(crate) fn cover_euler_characteristic(rs: &RotationSystem) -> i64 {
    let g = rs.graph();
    let n = g.vertex_count();
    let lift = |v: usize, s: Sign| 2 * v + s.is_minus() as usize;
    // cover orders: positive sheet keeps the order, negative sheet reverses it
    let mut pi: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for v in 0..n {
        for s in [Sign::Plus, Sign::Minus] {
            let mut order: Vec<usize> = rs
                .pi(v)
                .iter()
                .map(|&u| lift(u, s * rs.sign_of(v, u).unwrap()))
                .collect();
            if s == Sign::Minus {
                order.reverse();
            }
            pi[lift(v, s)] = order;
        }
    }
    // darts of the cover
    let mut dart_id: HashMap<(usize, usize), usize> = HashMap::new();
    let mut darts: Vec<(usize, usize)> = Vec::new();
    for (v, order) in pi.iter().enumerate() {
        for &u in order {
            dart_id.insert((v, u), darts.len());
            darts.push((v, u));
        }
    }
    let mut visited = vec![false; darts.len()];
    let mut orbits = 0usize;
    for start in 0..darts.len() {
        if visited[start] {
            continue;
        }
        orbits += 1;
        let mut d = start;
        loop {
            visited[d] = true;
            let (a, b) = darts[d];
            let order = &pi[b];
            let i = order.iter().position(|&w| w == a).unwrap();
            let c = order[(i + 1) % order.len()];
            d = dart_id[&(b, c)];
            if d == start {
                break;
            }
        }
    }
    let chi_cover = 2 * n as i64 - 2 * g.edge_count() as i64 + orbits as i64;
    assert_eq!(chi_cover % 2, 0, "cover characteristic must be even");
    chi_cover / 2
}
