//! Exhaustive enumeration of the distinct unlabelled Klein-bottle embeddings
//! of a small graph, canonical forms over relabelings, and assembly of the
//! base-embedding database used by the drawing pipeline.

use std::collections::HashMap;

use crate::drawing::Drawing;
use crate::error::Error;
use crate::graph::{Graph, GraphKind};
use crate::perm::all_permutations;
use crate::rotation::{equivalent, RotationSystem, Sign};

/// Canonical representative of an unlabelled embedding: the lexicographic
/// minimum of the switch normal form over all `|V|!` relabelings, compared by
/// [`RotationSystem::sort_key`]. Invariant under relabeling and switching.
pub fn canonical_form(rs: &RotationSystem) -> Result<RotationSystem, Error> {
    let n = rs.graph().vertex_count();
    if n > 8 {
        return Err(Error::TooLarge {
            what: "canonical form",
            size: n,
            limit: 8,
        });
    }
    let mut best: Option<(Vec<u32>, RotationSystem)> = None;
    for sigma in all_permutations(n) {
        let (f, _) = rs.relabel(&sigma).format()?;
        let key = f.sort_key();
        if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
            best = Some((key, f));
        }
    }
    Ok(best.expect("at least the identity relabeling").1)
}

/// Upper bound for the number of labelled embeddings: `2^m * prod (d_i - 1)!`.
pub fn labelled_upper_bound(g: &Graph) -> u128 {
    let mut bound = 1u128 << g.edge_count();
    for v in 0..g.vertex_count() {
        for k in 1..g.degree(v) as u128 {
            bound *= k.max(1);
        }
    }
    bound
}

/// Output of the embedding scan: canonical systems with Euler characteristic
/// zero, and the subset produced by the all-positive signature (those are
/// torus embeddings, not Klein-bottle ones). Both lists are sorted by
/// canonical key.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub all: Vec<RotationSystem>,
    pub false_positives: Vec<RotationSystem>,
}

impl Enumeration {
    /// The distinct Klein-bottle embeddings: `all` minus `false_positives`.
    pub fn records(&self) -> Vec<RotationSystem> {
        let fp_keys: Vec<Vec<u32>> = self.false_positives.iter().map(|r| r.sort_key()).collect();
        self.all
            .iter()
            .filter(|r| !fp_keys.contains(&r.sort_key()))
            .cloned()
            .collect()
    }
}

/// Scans every edge-sign mask and every per-vertex neighbor permutation
/// (first entry pinned to the minimum neighbor, which quotients out cyclic
/// rotations), keeps the systems with Euler characteristic zero, and collects
/// their canonical forms. Masks are mapped to edges in ascending edge order.
pub fn enumerate_embeddings(g: &Graph) -> Result<Enumeration, Error> {
    enumerate_embeddings_impl(g, false)
}

/// Same scan restricted to sign masks with at most `ceil(m/2)` negative
/// edges. Every switch class contains such a representative (the frustration
/// of any signature is at most half the edge count), so the output is
/// identical to the full scan's.
pub fn enumerate_embeddings_half_masks(g: &Graph) -> Result<Enumeration, Error> {
    enumerate_embeddings_impl(g, true)
}

fn enumerate_embeddings_impl(g: &Graph, restrict_masks: bool) -> Result<Enumeration, Error> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n > 8 {
        return Err(Error::TooLarge {
            what: "embedding enumeration",
            size: n,
            limit: 8,
        });
    }
    for v in 0..n {
        if g.degree(v) < 3 {
            return Err(Error::DegreeTooLow {
                v,
                degree: g.degree(v),
            });
        }
    }
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }

    // per vertex: every order of the neighbor set starting at its minimum
    let orders: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|v| {
            let nb = g.neighbors(v);
            all_permutations(nb.len() - 1)
                .into_iter()
                .map(|p| {
                    let mut order = vec![nb[0]];
                    order.extend(p.iter().map(|&i| nb[i + 1]));
                    order
                })
                .collect()
        })
        .collect();

    let mut all: Vec<(Vec<u32>, RotationSystem)> = Vec::new();
    let mut false_positives: Vec<(Vec<u32>, RotationSystem)> = Vec::new();
    // normal form of a survivor -> index into `all`; the normal form is
    // switch-canonical, so distinct labelled embeddings collapse here and the
    // expensive relabeling pass runs once per labelled class
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();

    let half = m.div_ceil(2) as u32;
    for mask in 0u64..1 << m {
        if restrict_masks && mask.count_ones() > half {
            continue;
        }
        let signs: Vec<Sign> = (0..m)
            .map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
            .collect();
        let mut idx = vec![0usize; n];
        loop {
            let pi: Vec<Vec<usize>> = (0..n).map(|v| orders[v][idx[v]].clone()).collect();
            let rs = RotationSystem::new_unchecked(g.clone(), pi, signs.clone());
            if rs.euler_characteristic() == 0 {
                let (f, _) = rs.format()?;
                let fkey = f.sort_key();
                let slot = match seen.get(&fkey) {
                    Some(&i) => i,
                    None => {
                        let canon = canonical_form(&f)?;
                        let ckey = canon.sort_key();
                        let i = match all.iter().position(|(k, _)| *k == ckey) {
                            Some(i) => i,
                            None => {
                                all.push((ckey, canon));
                                all.len() - 1
                            }
                        };
                        seen.insert(fkey, i);
                        i
                    }
                };
                if mask == 0 && !false_positives.iter().any(|(k, _)| *k == all[slot].0) {
                    false_positives.push(all[slot].clone());
                }
            }
            // odometer over the permutation tuples
            let mut v = 0;
            loop {
                if v == n {
                    break;
                }
                idx[v] += 1;
                if idx[v] < orders[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
            if v == n {
                break;
            }
        }
    }
    all.sort_by(|a, b| a.0.cmp(&b.0));
    false_positives.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Enumeration {
        all: all.into_iter().map(|(_, r)| r).collect(),
        false_positives: false_positives.into_iter().map(|(_, r)| r).collect(),
    })
}

/// One base-embedding database entry: a canonical rotation system of K5 or
/// K3,3 paired with a convex crossing-free drawing that realizes it.
#[derive(Debug, Clone)]
pub struct EmbeddingRecord {
    pub id: u32,
    pub kind: GraphKind,
    pub system: RotationSystem,
    pub drawing: Drawing,
}

/// Validates one record body: Euler characteristic zero, unbalanced,
/// crossing-free, and the drawn angular orders realize the stored system.
pub(crate) fn validate_record(
    kind: GraphKind,
    index: usize,
    system: &RotationSystem,
    drawing: &Drawing,
) -> Result<(), Error> {
    let fail = |reason: &str| Error::DrawingInvalid {
        kind,
        index,
        reason: reason.to_string(),
    };
    if system.euler_characteristic() != 0 {
        return Err(fail("system does not have Euler characteristic 0"));
    }
    if system.is_balanced().map_err(|_| fail("system graph disconnected"))? {
        return Err(fail("system is balanced (a torus embedding)"));
    }
    if drawing.graph() != system.graph() {
        return Err(fail("drawing and system disagree on the graph"));
    }
    let crossings = drawing.crossings(1e-9);
    if !crossings.is_empty() {
        return Err(fail(&format!("drawing has {} crossing(s)", crossings.len())));
    }
    let extracted = drawing
        .extract_rotation_system()
        .map_err(|e| fail(&format!("extraction failed: {e}")))?;
    if equivalent(&extracted, system, false).is_none() {
        return Err(fail("drawing does not realize the stored system"));
    }
    Ok(())
}

fn build_omega_with(
    expected: &[(GraphKind, Vec<RotationSystem>)],
    entries: Vec<(GraphKind, RotationSystem, Drawing)>,
) -> Result<Vec<EmbeddingRecord>, Error> {
    let mut records = Vec::new();
    let mut used = vec![false; entries.len()];
    for (kind, canonicals) in expected {
        for (index, canon) in canonicals.iter().enumerate() {
            let ckey = canon.sort_key();
            let found = entries.iter().enumerate().find(|(i, (k, sys, _))| {
                !used[*i] && k == kind && sys.sort_key() == ckey
            });
            let Some((i, (_, system, drawing))) = found else {
                return Err(Error::MissingDrawing { kind: *kind, index });
            };
            used[i] = true;
            validate_record(*kind, index, system, drawing)?;
            records.push(EmbeddingRecord {
                id: records.len() as u32,
                kind: *kind,
                system: system.clone(),
                drawing: drawing.clone(),
            });
        }
    }
    if let Some(i) = used.iter().position(|&u| !u) {
        return Err(Error::DrawingInvalid {
            kind: entries[i].0,
            index: i,
            reason: "entry matches no canonical system".to_string(),
        });
    }
    Ok(records)
}

/// Pairs each canonical system produced by the enumeration with its authored
/// convex drawing, validates every record, and assigns ids (K5 records first,
/// then K3,3, each sorted by canonical key). Every canonical system must have
/// exactly one drawing and vice versa.
pub fn build_omega(
    entries: Vec<(GraphKind, RotationSystem, Drawing)>,
) -> Result<Vec<EmbeddingRecord>, Error> {
    let mut expected = Vec::new();
    for kind in [GraphKind::K5, GraphKind::K33] {
        expected.push((kind, enumerate_embeddings(&kind.graph())?.records()));
    }
    build_omega_with(&expected, entries)
}

/// Matches every canonical system of `kind` to the authored drawing that
/// realizes it, relabeled onto the canonical labels.
fn canonical_entries(
    kind: GraphKind,
    canonicals: &[RotationSystem],
) -> Result<Vec<(GraphKind, RotationSystem, Drawing)>, Error> {
    let authored = crate::omega::authored_base_drawings();
    let mut used = vec![false; authored.len()];
    let mut entries = Vec::new();
    for (index, canon) in canonicals.iter().enumerate() {
        let mut matched = None;
        for (i, (akind, drawing)) in authored.iter().enumerate() {
            if *akind != kind || used[i] {
                continue;
            }
            let extracted = drawing
                .extract_rotation_system()
                .map_err(|e| Error::DrawingInvalid {
                    kind,
                    index: i,
                    reason: format!("extraction failed: {e}"),
                })?;
            if let Some(eq) = equivalent(&extracted, canon, true) {
                matched = Some((i, drawing.relabel(&eq.mapping)));
                break;
            }
        }
        let Some((i, relabeled)) = matched else {
            return Err(Error::MissingDrawing { kind, index });
        };
        used[i] = true;
        entries.push((kind, canon.clone(), relabeled));
    }
    Ok(entries)
}

/// Regenerates the full database from the authored base drawings: enumerate,
/// match each canonical system to the authored drawing realizing it, relabel
/// that drawing onto the canonical labels, validate, and assemble.
pub fn generate_omega() -> Result<Vec<EmbeddingRecord>, Error> {
    let mut expected = Vec::new();
    let mut entries = Vec::new();
    for kind in [GraphKind::K5, GraphKind::K33] {
        let canonicals = enumerate_embeddings(&kind.graph())?.records();
        entries.extend(canonical_entries(kind, &canonicals)?);
        expected.push((kind, canonicals));
    }
    build_omega_with(&expected, entries)
}

/// Database records for a single kind, with ids renumbered from zero.
pub fn generate_omega_kind(kind: GraphKind) -> Result<Vec<EmbeddingRecord>, Error> {
    let canonicals = enumerate_embeddings(&kind.graph())?.records();
    let entries = canonical_entries(kind, &canonicals)?;
    build_omega_with(&[(kind, canonicals)], entries)
}
