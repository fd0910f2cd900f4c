//! Deterministic randomness and shared fixtures for the integration suites.
#![allow(dead_code)] // each suite uses its own subset

use kleindraw::graph::{make_named, Graph};
use kleindraw::rotation::{RotationSystem, Sign};

pub struct XorShift(u64);

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

pub fn random_permutation(n: usize, rng: &mut XorShift) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.below(i + 1));
    }
    p
}

pub fn random_switch_set(n: usize, rng: &mut XorShift) -> Vec<bool> {
    (0..n).map(|_| rng.bool()).collect()
}

pub fn random_system(g: &Graph, rng: &mut XorShift) -> RotationSystem {
    let pi = (0..g.vertex_count())
        .map(|v| {
            let mut order = g.neighbors(v).to_vec();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.below(i + 1));
            }
            order
        })
        .collect();
    let signs = (0..g.edge_count())
        .map(|_| if rng.bool() { Sign::Minus } else { Sign::Plus })
        .collect();
    RotationSystem::new(g.clone(), pi, signs).unwrap()
}

/// First all-positive K5 rotation system with Euler characteristic zero in
/// odometer order: a torus embedding the Klein pipeline must refuse.
pub fn balanced_torus_k5() -> RotationSystem {
    let g = make_named("k5").unwrap();
    let mut tails: Vec<Vec<usize>> = (0..5).map(|v| g.neighbors(v)[1..].to_vec()).collect();
    loop {
        let pi: Vec<Vec<usize>> = (0..5)
            .map(|v| {
                let mut o = vec![g.neighbors(v)[0]];
                o.extend(&tails[v]);
                o
            })
            .collect();
        let rs = RotationSystem::positive(g.clone(), pi).unwrap();
        if rs.euler_characteristic() == 0 {
            return rs;
        }
        let mut v = 0;
        loop {
            if next_permutation(&mut tails[v]) {
                break;
            }
            tails[v].sort_unstable();
            v += 1;
            assert!(v < 5, "K5 has torus embeddings");
        }
    }
}

fn next_permutation(arr: &mut [usize]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}
