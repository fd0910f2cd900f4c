//! The drawing model on the flat Klein bottle.
//!
//! The fundamental domain is the half-open unit square. The vertical side
//! pair is glued with a flip (crossing it reverses y), the horizontal pair
//! directly. A drawing stores one point per vertex inside the square and one
//! deck transformation per edge telling how the segment to the other endpoint
//! leaves the square; all geometry happens in the unfolding.

pub mod pipeline;

use std::ops::{Add, Mul, Sub};

use crate::error::Error;
use crate::graph::Graph;
use crate::rotation::{RotationSystem, Sign};

/// Deck transformation of the Klein bottle's universal cover:
/// `(x, y) -> (a + x, b + y)` for even `a`, `(x, y) -> (a + x, b + 1 - y)`
/// for odd `a`. The x axis is the inverted direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KleinShift {
    pub a: i64,
    pub b: i64,
}

impl KleinShift {
    pub const IDENTITY: KleinShift = KleinShift { a: 0, b: 0 };

    pub fn new(a: i64, b: i64) -> KleinShift {
        KleinShift { a, b }
    }

    pub fn is_identity(self) -> bool {
        self == KleinShift::IDENTITY
    }

    fn flips(self) -> bool {
        self.a & 1 == 1
    }

    pub fn apply(self, p: Point) -> Point {
        if self.flips() {
            Point::new(self.a as f64 + p.x, self.b as f64 + 1.0 - p.y)
        } else {
            Point::new(self.a as f64 + p.x, self.b as f64 + p.y)
        }
    }

    /// Composition acting left to right on points:
    /// `compose(s, t).apply(p) == s.apply(t.apply(p))`.
    pub fn compose(self, t: KleinShift) -> KleinShift {
        if self.flips() {
            KleinShift::new(self.a + t.a, self.b - t.b)
        } else {
            KleinShift::new(self.a + t.a, self.b + t.b)
        }
    }

    pub fn inverse(self) -> KleinShift {
        if self.flips() {
            KleinShift::new(-self.a, self.b)
        } else {
            KleinShift::new(-self.a, -self.b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// The unique `(t, q)` with `q` in the half-open unit square and
/// `p == t.apply(q)`.
pub fn fold(p: Point) -> (KleinShift, Point) {
    let a = p.x.floor() as i64;
    let x = p.x - a as f64;
    if a & 1 == 0 {
        let b = p.y.floor() as i64;
        (KleinShift::new(a, b), Point::new(x, p.y - b as f64))
    } else {
        let b = p.y.ceil() as i64 - 1;
        (KleinShift::new(a, b), Point::new(x, b as f64 + 1.0 - p.y))
    }
}

fn in_unit_square(p: Point) -> bool {
    (0.0..1.0).contains(&p.x) && (0.0..1.0).contains(&p.y)
}

/// Straight-line drawing: one point per vertex in the unit square, one shift
/// per edge stored for the direction low label -> high label, and per-vertex
/// pin flags for the barycentric iteration.
#[derive(Debug, Clone)]
pub struct Drawing {
    graph: Graph,
    gamma: Vec<Point>,
    delta: Vec<KleinShift>,
    fixed: Vec<bool>,
}

impl Drawing {
    pub fn new(
        graph: Graph,
        gamma: Vec<Point>,
        delta: Vec<KleinShift>,
        fixed: Vec<bool>,
    ) -> Result<Drawing, Error> {
        if gamma.len() != graph.vertex_count()
            || delta.len() != graph.edge_count()
            || fixed.len() != graph.vertex_count()
        {
            return Err(Error::InvalidRotationSystem(
                "drawing table sizes do not match the graph".into(),
            ));
        }
        for (v, &p) in gamma.iter().enumerate() {
            if !in_unit_square(p) {
                return Err(Error::InvalidRotationSystem(format!(
                    "vertex {v} lies outside the unit square"
                )));
            }
        }
        Ok(Drawing {
            graph,
            gamma,
            delta,
            fixed,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn position(&self, v: usize) -> Point {
        self.gamma[v]
    }

    /// Stored shift of edge id `e`, oriented low label -> high label.
    pub fn shift(&self, e: usize) -> KleinShift {
        self.delta[e]
    }

    pub fn is_fixed(&self, v: usize) -> bool {
        self.fixed[v]
    }

    /// Shift of the edge `{v, u}` oriented `v -> u`.
    pub fn shift_from(&self, v: usize, u: usize) -> Result<KleinShift, Error> {
        let e = self
            .graph
            .edge_id(v, u)
            .ok_or(Error::NotIncident { at: v, u: v, v: u })?;
        Ok(if v < u {
            self.delta[e]
        } else {
            self.delta[e].inverse()
        })
    }

    /// Position of neighbor `u` in `v`'s chart of the unfolding.
    pub fn rel_coord(&self, v: usize, u: usize) -> Result<Point, Error> {
        Ok(self.shift_from(v, u)?.apply(self.gamma[u]))
    }

    /// Moves `v` to `p` (given in `v`'s current chart) and refolds.
    pub fn displace(&mut self, v: usize, p: Point) {
        self.gamma[v] = p;
        self.normalize_vertex(v);
    }

    /// Folds `v` back into the unit square, rewriting the shifts of its
    /// incident edges so that every neighbor's view of `v` is unchanged.
    pub fn normalize_vertex(&mut self, v: usize) {
        let (t, q) = fold(self.gamma[v]);
        if t.is_identity() {
            self.gamma[v] = q;
            return;
        }
        self.gamma[v] = q;
        for i in 0..self.graph.neighbors(v).len() {
            let u = self.graph.neighbors(v)[i];
            let e = self.graph.edge_id(v, u).unwrap();
            if v > u {
                // stored for u -> v: the copy of v seen from u moves by t
                self.delta[e] = self.delta[e].compose(t);
            } else {
                // stored for v -> u: v's own chart moved by t
                self.delta[e] = t.inverse().compose(self.delta[e]);
            }
        }
    }

    /// Relabels vertices by `sigma` (old -> new), keeping the geometry.
    pub fn relabel(&self, sigma: &[usize]) -> Drawing {
        let graph = self.graph.relabel(sigma);
        let n = graph.vertex_count();
        let mut gamma = vec![Point::new(0.0, 0.0); n];
        let mut fixed = vec![false; n];
        for v in 0..n {
            gamma[sigma[v]] = self.gamma[v];
            fixed[sigma[v]] = self.fixed[v];
        }
        let mut delta = vec![KleinShift::IDENTITY; graph.edge_count()];
        for (e, &(u, v)) in self.graph.edges().iter().enumerate() {
            let ne = graph.edge_id(sigma[u], sigma[v]).expect("relabeled edge");
            delta[ne] = if sigma[u] < sigma[v] {
                self.delta[e]
            } else {
                self.delta[e].inverse()
            };
        }
        Drawing {
            graph,
            gamma,
            delta,
            fixed,
        }
    }

    /// Unfolded segment of edge id `e`, from the low endpoint's chart.
    pub fn segment(&self, e: usize) -> (Point, Point) {
        let (u, v) = self.graph.edges()[e];
        (self.gamma[u], self.delta[e].apply(self.gamma[v]))
    }

    /// All edge pairs whose segments meet anywhere on the surface, tested in
    /// the unfolding against every deck translate within the shift range of
    /// the pair. Contact at a shared endpoint (same vertex, same copy) is not
    /// a crossing.
    pub fn crossings(&self, eps: f64) -> Vec<(usize, usize)> {
        let m = self.graph.edge_count();
        let mut out = Vec::new();
        for e in 0..m {
            for f in e..m {
                if self.edge_pair_conflicts(e, f, eps) {
                    out.push((e, f));
                }
            }
        }
        out
    }

    fn edge_pair_conflicts(&self, e: usize, f: usize, eps: f64) -> bool {
        let (e_lo, e_hi) = self.graph.edges()[e];
        let (f_lo, f_hi) = self.graph.edges()[f];
        let (p1, p2) = self.segment(e);
        let (q1, q2) = self.segment(f);
        let de = self.delta[e];
        let df = self.delta[f];
        let amax = 1 + de.a.abs() + df.a.abs();
        let bmax = 1 + de.b.abs() + df.b.abs();
        for a in -amax..=amax {
            for b in -bmax..=bmax {
                let t = KleinShift::new(a, b);
                if e == f && t.is_identity() {
                    continue;
                }
                let tq1 = t.apply(q1);
                let tq2 = t.apply(q2);
                // endpoints representing the same vertex copy may touch
                let mut allowed = Vec::new();
                if e_lo == f_lo && t.is_identity() {
                    allowed.push(p1);
                }
                if e_lo == f_hi && t.compose(df).is_identity() {
                    allowed.push(p1);
                }
                if e_hi == f_lo && de == t {
                    allowed.push(p2);
                }
                if e_hi == f_hi && de == t.compose(df) {
                    allowed.push(p2);
                }
                if segments_conflict(p1, p2, tq1, tq2, &allowed, eps) {
                    return true;
                }
            }
        }
        false
    }

    /// Cyclic counterclockwise angular order of the edges at each vertex,
    /// with the sign of an edge read off the parity of its shift.
    pub fn extract_rotation_system(&self) -> Result<RotationSystem, Error> {
        let n = self.graph.vertex_count();
        let mut pi = Vec::with_capacity(n);
        for v in 0..n {
            let mut angled: Vec<(f64, usize)> = Vec::new();
            for &u in self.graph.neighbors(v) {
                let dir = self.rel_coord(v, u)? - self.gamma[v];
                if dir.norm() < 1e-12 {
                    return Err(Error::DegenerateAngles(v));
                }
                angled.push((dir.y.atan2(dir.x), u));
            }
            angled.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            for i in 0..angled.len() {
                let gap = if i + 1 < angled.len() {
                    angled[i + 1].0 - angled[i].0
                } else {
                    angled[0].0 + std::f64::consts::TAU - angled[i].0
                };
                if angled.len() > 1 && gap.abs() < 1e-9 {
                    return Err(Error::DegenerateAngles(v));
                }
            }
            pi.push(angled.into_iter().map(|(_, u)| u).collect());
        }
        let signs = self
            .delta
            .iter()
            .map(|d| if d.flips() { Sign::Minus } else { Sign::Plus })
            .collect();
        RotationSystem::new(self.graph.clone(), pi, signs)
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// True when the two segments meet somewhere other than an allowed endpoint.
fn segments_conflict(p1: Point, p2: Point, q1: Point, q2: Point, allowed: &[Point], eps: f64) -> bool {
    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);
    let margin_e = eps * p1.dist(p2);
    let margin_f = eps * q1.dist(q2);
    // clear transversal crossing
    if o1 * o2 < 0.0 && o1.abs() > margin_e && o2.abs() > margin_e
        && o3 * o4 < 0.0 && o3.abs() > margin_f && o4.abs() > margin_f
    {
        return true;
    }
    // collinear overlap of positive length
    if o1.abs() <= margin_e && o2.abs() <= margin_e && o3.abs() <= margin_f && o4.abs() <= margin_f {
        let dir = p2 - p1;
        let len = dir.norm();
        if len > 0.0 {
            let t1 = (q1 - p1).dot(dir) / len;
            let t2 = (q2 - p1).dot(dir) / len;
            let lo = t1.min(t2).max(0.0);
            let hi = t1.max(t2).min(len);
            if hi - lo > eps {
                return true;
            }
        }
    }
    // endpoint contacts
    for (x, a, b) in [
        (p1, q1, q2),
        (p2, q1, q2),
        (q1, p1, p2),
        (q2, p1, p2),
    ] {
        if point_segment_distance(x, a, b) <= eps && !allowed.iter().any(|&w| w.dist(x) <= eps) {
            return true;
        }
    }
    false
}
