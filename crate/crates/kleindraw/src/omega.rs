//! Authored convex base drawings of the K5 and K3,3 embeddings on the flat
//! Klein bottle, plus the embedded copy of the generated database.
//!
//! The coordinates are hand-authored on a quarter-unit lattice; validity
//! (crossing-free, realizing the intended rotation system) is machine-checked
//! when the database is assembled, not assumed. Labels here are arbitrary:
//! database generation relabels each drawing onto its canonical system.

use crate::drawing::{Drawing, KleinShift, Point};
use crate::enumeration::EmbeddingRecord;
use crate::error::Error;
use crate::graph::{Graph, GraphKind};

/// Positions on the quarter lattice and per-edge shifts `(u, v, a, b)`
/// oriented `u -> v` with `u < v`.
fn base(
    kind: GraphKind,
    quarters: &[(f64, f64)],
    edges: &[(usize, usize, i64, i64)],
) -> (GraphKind, Drawing) {
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _, _)| (u, v)).collect();
    let graph = Graph::build(quarters.len(), &pairs).expect("authored edge list");
    let gamma: Vec<Point> = quarters
        .iter()
        .map(|&(x, y)| Point::new(x / 4.0, y / 4.0))
        .collect();
    let mut delta = vec![KleinShift::IDENTITY; graph.edge_count()];
    for &(u, v, a, b) in edges {
        delta[graph.edge_id(u, v).unwrap()] = KleinShift::new(a, b);
    }
    let fixed = vec![true; quarters.len()];
    (
        kind,
        Drawing::new(graph, gamma, delta, fixed).expect("authored drawing"),
    )
}

/// The thirteen authored convex base drawings (eleven for K5, two for K3,3).
pub fn authored_base_drawings() -> Vec<(GraphKind, Drawing)> {
    use GraphKind::{K33, K5};
    vec![
        base(
            K5,
            &[(2.0, 2.0), (2.0, 3.0), (2.0, 1.0), (3.0, 3.0), (1.0, 1.0)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, 0),
                (0, 3, 0, 0),
                (0, 4, 0, 0),
                (1, 2, 0, 1),
                (1, 3, 0, 0),
                (1, 4, 0, 1),
                (2, 3, 0, -1),
                (2, 4, 0, 0),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K5,
            &[(2.0, 1.0), (2.0, 2.0), (2.0, 3.0), (3.0, 2.0), (1.0, 2.0)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, -1),
                (0, 3, 0, 0),
                (0, 4, 0, 0),
                (1, 2, 0, 0),
                (1, 3, 0, 0),
                (1, 4, 0, 0),
                (2, 3, 0, 0),
                (2, 4, 0, 0),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K5,
            &[(2.0, 2.0), (2.0, 3.0), (3.0, 3.0), (3.0, 1.0), (1.0, 1.0)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, 0),
                (0, 3, 0, 0),
                (0, 4, 0, 0),
                (1, 2, 0, 0),
                (1, 3, 0, 1),
                (1, 4, 0, 1),
                (2, 3, 0, 1),
                (2, 4, 1, 0),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K5,
            &[(2.0, 1.0), (2.0, 2.0), (3.0, 2.0), (3.0, 3.0), (1.0, 3.0)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, 0),
                (0, 3, 0, -1),
                (0, 4, 0, -1),
                (1, 2, 0, 0),
                (1, 3, 0, 0),
                (1, 4, 0, 0),
                (2, 3, 0, 0),
                (2, 4, 1, 0),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K5,
            &[(2.0, 1.0), (2.0, 2.0), (3.0, 2.0), (2.5, 3.0), (1.0, 1.5)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, 0),
                (0, 3, 0, -1),
                (0, 4, 0, 0),
                (1, 2, 0, 0),
                (1, 3, 0, 0),
                (1, 4, 0, 0),
                (2, 3, 0, 0),
                (2, 4, 1, 0),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K5,
            &[(2.0, 1.0), (2.0, 2.0), (3.0, 1.0), (2.0, 3.0), (1.0, 1.0)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, 0),
                (0, 3, 0, -1),
                (0, 4, 0, 0),
                (1, 2, 0, 0),
                (1, 3, 0, 0),
                (1, 4, 0, 0),
                (2, 3, 1, 0),
                (2, 4, 1, -1),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K5,
            &[(2.5, 2.0), (3.0, 3.0), (1.0, 1.5), (3.0, 1.0), (1.0, 2.5)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, 0),
                (0, 3, 0, 0),
                (0, 4, 0, 0),
                (1, 2, 1, 0),
                (1, 3, 0, 1),
                (1, 4, 0, 0),
                (2, 3, 0, 0),
                (2, 4, 0, 0),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K5,
            &[(2.0, 2.0), (3.0, 3.0), (1.0, 1.0), (3.0, 1.0), (1.0, 3.0)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, 0),
                (0, 3, 0, 0),
                (0, 4, 0, 0),
                (1, 2, 1, 0),
                (1, 3, 0, 1),
                (1, 4, 0, 0),
                (2, 3, 0, 0),
                (2, 4, 0, -1),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K5,
            &[(2.0, 2.0), (3.0, 3.0), (1.0, 1.0), (3.0, 1.0), (1.0, 3.0)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, 0),
                (0, 3, 0, 0),
                (0, 4, 0, 0),
                (1, 2, 0, 1),
                (1, 3, 0, 1),
                (1, 4, 1, 1),
                (2, 3, -1, 0),
                (2, 4, 0, -1),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K5,
            &[(2.0, 2.0), (3.0, 3.0), (1.0, 1.0), (3.0, 1.0), (1.0, 3.0)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, 0),
                (0, 3, 0, 0),
                (0, 4, 0, 0),
                (1, 2, 1, 0),
                (1, 3, 0, 1),
                (1, 4, 0, 0),
                (2, 3, -1, -1),
                (2, 4, 0, -1),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K5,
            &[(2.25, 1.75), (2.0, 3.0), (1.5, 2.5), (3.0, 1.0), (1.0, 2.0)],
            &[
                (0, 1, 0, 0),
                (0, 2, 0, 0),
                (0, 3, 0, 0),
                (0, 4, 0, 0),
                (1, 2, 0, 0),
                (1, 3, 0, 1),
                (1, 4, 1, 0),
                (2, 3, -1, 0),
                (2, 4, 0, 0),
                (3, 4, 1, 0),
            ],
        ),
        base(
            K33,
            &[
                (2.0, 3.0),
                (2.3, 2.3),
                (3.0, 2.0),
                (1.0, 2.0),
                (1.7, 1.7),
                (2.0, 1.0),
            ],
            &[
                (0, 1, 0, 0),
                (0, 3, 0, 0),
                (0, 5, 0, 1),
                (1, 2, 0, 0),
                (1, 4, 0, 0),
                (2, 3, 1, 0),
                (2, 5, 0, 0),
                (3, 4, 0, 0),
                (4, 5, 0, 0),
            ],
        ),
        base(
            K33,
            &[
                (1.0, 2.7),
                (2.0, 3.2),
                (3.0, 2.7),
                (1.0, 1.3),
                (2.0, 0.8),
                (3.0, 1.3),
            ],
            &[
                (0, 1, 0, 0),
                (0, 3, 0, 0),
                (0, 5, -1, 0),
                (1, 2, 0, 0),
                (1, 4, 0, 1),
                (2, 3, 1, 0),
                (2, 5, 0, 0),
                (3, 4, 0, 0),
                (4, 5, 0, 0),
            ],
        ),
    ]
}

/// The generated database embedded at build time. Loading re-validates each
/// record; regenerating with `enumerate --graph all` must reproduce it byte
/// for byte.
pub fn builtin() -> Result<Vec<EmbeddingRecord>, Error> {
    crate::io::parse_omega(builtin_text())
}

/// Raw text of the embedded database.
pub fn builtin_text() -> &'static str {
    include_str!("omega_db.txt")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn authored_counts_and_shapes() {
        let all = authored_base_drawings();
        assert_eq!(all.len(), 13);
        assert_eq!(
            all.iter().filter(|(k, _)| *k == GraphKind::K5).count(),
            11
        );
        for (kind, d) in &all {
            assert_eq!(d.graph().edge_count(), kind.graph().edge_count());
            assert_eq!(d.graph().vertex_count(), kind.graph().vertex_count());
        }
    }

    #[test]
    fn authored_drawings_are_crossing_free_klein_systems() {
        for (i, (_, d)) in authored_base_drawings().iter().enumerate() {
            assert!(d.crossings(1e-9).is_empty(), "drawing {i} has crossings");
            let rs = d.extract_rotation_system().unwrap();
            assert_eq!(rs.euler_characteristic(), 0, "drawing {i} chi");
            assert!(!rs.is_balanced().unwrap(), "drawing {i} balanced");
        }
    }
}
