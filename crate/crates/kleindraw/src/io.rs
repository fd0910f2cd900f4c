//! Text formats (.krs rotation systems, .kdr drawings, the base-embedding
//! database) and SVG rendering of the fundamental square.
//!
//! A `.krs` document carries a graph name, the vertex count, and one rotation
//! line per vertex; a trailing `-` on a neighbor marks the edge as twisted and
//! must appear on both endpoint lines. A `.kdr` document lists `vertex v x y`
//! coordinates in the half-open unit square and `edge u v a b` shifts for the
//! direction low label -> high label. The database file concatenates, per
//! record, a `.krs` block and a `.kdr` block between `embedding <id> <kind>`
//! and `end`.

use std::fmt::Write as _;

use crate::drawing::{Drawing, KleinShift, Point};
use crate::enumeration::{validate_record, EmbeddingRecord};
use crate::error::Error;
use crate::graph::{Graph, GraphKind};
use crate::rotation::{RotationSystem, Sign};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Numbered non-comment lines; line numbers are 1-based.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize, Error> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

// ---------------------------------------------------------------- krs

pub fn parse_krs(text: &str) -> Result<(String, RotationSystem), Error> {
    parse_krs_lines(&content_lines(text))
}

/// One parsed rotation line: source line, vertex, (neighbor, twisted) items.
type KrsRow = (usize, usize, Vec<(usize, bool)>);

fn parse_krs_lines(lines: &[(usize, &str)]) -> Result<(String, RotationSystem), Error> {
    let mut name: Option<String> = None;
    let mut count: Option<usize> = None;
    let mut rows: Vec<KrsRow> = Vec::new();
    for &(ln, line) in lines {
        if let Some(rest) = line.strip_prefix("graph ") {
            if name.replace(rest.trim().to_string()).is_some() {
                return Err(parse_err(ln, "duplicate graph line"));
            }
        } else if let Some(rest) = line.strip_prefix("vertices ") {
            let n = parse_usize(ln, rest.trim(), "vertex count")?;
            if count.replace(n).is_some() {
                return Err(parse_err(ln, "duplicate vertices line"));
            }
        } else if let Some(rest) = line.strip_prefix("rs ") {
            let Some((v_tok, items)) = rest.split_once(':') else {
                return Err(parse_err(ln, "rotation line needs `rs <v>: ...`"));
            };
            let v = parse_usize(ln, v_tok.trim(), "vertex label")?;
            let mut order = Vec::new();
            for tok in items.split_whitespace() {
                let (u_tok, twisted) = match tok.strip_suffix('-') {
                    Some(u_tok) => (u_tok, true),
                    None => (tok, false),
                };
                order.push((parse_usize(ln, u_tok, "neighbor label")?, twisted));
            }
            rows.push((ln, v, order));
        } else {
            return Err(parse_err(ln, format!("unrecognized line `{line}`")));
        }
    }
    let name = name.ok_or_else(|| parse_err(1, "missing graph line"))?;
    let n = count.ok_or_else(|| parse_err(1, "missing vertices line"))?;

    let mut pi_rows: Vec<Option<Vec<(usize, bool)>>> = vec![None; n];
    for (ln, v, order) in rows {
        if v >= n {
            return Err(parse_err(ln, format!("vertex {v} out of range")));
        }
        if pi_rows[v].replace(order).is_some() {
            return Err(parse_err(ln, format!("duplicate rotation line for {v}")));
        }
    }
    let pi_rows: Vec<Vec<(usize, bool)>> = pi_rows
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| parse_err(1, format!("missing rotation line for {v}"))))
        .collect::<Result<_, _>>()?;

    // neighbor sets must be symmetric and duplicate-free
    for (v, row) in pi_rows.iter().enumerate() {
        let mut nb: Vec<usize> = row.iter().map(|&(u, _)| u).collect();
        nb.sort_unstable();
        if nb.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::AdjacencyMismatch(v));
        }
        for &(u, _) in row {
            if u >= n || !pi_rows[u].iter().any(|&(x, _)| x == v) {
                return Err(Error::AdjacencyMismatch(v));
            }
        }
    }
    let mut edges = Vec::new();
    for (v, row) in pi_rows.iter().enumerate() {
        for &(u, _) in row {
            if v < u {
                edges.push((v, u));
            }
        }
    }
    let graph = Graph::build(n, &edges)?;
    let mut signs = vec![Sign::Plus; graph.edge_count()];
    for (v, row) in pi_rows.iter().enumerate() {
        for &(u, twisted) in row {
            let other = pi_rows[u].iter().find(|&&(x, _)| x == v).unwrap();
            if other.1 != twisted {
                return Err(Error::SignMismatch {
                    u: v.min(u),
                    v: v.max(u),
                });
            }
            if twisted {
                signs[graph.edge_id(v, u).unwrap()] = Sign::Minus;
            }
        }
    }
    let pi = pi_rows
        .into_iter()
        .map(|row| row.into_iter().map(|(u, _)| u).collect())
        .collect();
    let rs = RotationSystem::new(graph, pi, signs)?;
    Ok((name, rs))
}

pub fn write_krs(name: &str, rs: &RotationSystem) -> String {
    let mut out = String::new();
    writeln!(out, "graph {name}").unwrap();
    writeln!(out, "vertices {}", rs.graph().vertex_count()).unwrap();
    for v in 0..rs.graph().vertex_count() {
        write!(out, "rs {v}:").unwrap();
        for &u in rs.pi(v) {
            let mark = if rs.sign_of(v, u).unwrap().is_minus() {
                "-"
            } else {
                ""
            };
            write!(out, " {u}{mark}").unwrap();
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------- kdr

pub fn parse_kdr(text: &str) -> Result<Drawing, Error> {
    parse_kdr_lines(&content_lines(text))
}

fn parse_coord(ln: usize, tok: &str) -> Result<f64, Error> {
    let x: f64 = tok
        .parse()
        .map_err(|_| parse_err(ln, format!("bad coordinate `{tok}`")))?;
    if !(0.0..1.0).contains(&x) {
        return Err(parse_err(ln, format!("coordinate {tok} outside [0, 1)")));
    }
    Ok(x)
}

fn parse_kdr_lines(lines: &[(usize, &str)]) -> Result<Drawing, Error> {
    let mut verts: Vec<(usize, usize, Point)> = Vec::new();
    let mut edges: Vec<(usize, usize, usize, KleinShift)> = Vec::new();
    for &(ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["vertex", v, x, y] => {
                verts.push((
                    ln,
                    parse_usize(ln, v, "vertex label")?,
                    Point::new(parse_coord(ln, x)?, parse_coord(ln, y)?),
                ));
            }
            ["edge", u, v, a, b] => {
                let u = parse_usize(ln, u, "vertex label")?;
                let v = parse_usize(ln, v, "vertex label")?;
                let a: i64 = a.parse().map_err(|_| parse_err(ln, format!("bad shift `{a}`")))?;
                let b: i64 = b.parse().map_err(|_| parse_err(ln, format!("bad shift `{b}`")))?;
                if u >= v {
                    return Err(parse_err(ln, "edge line must list the lower label first"));
                }
                edges.push((ln, u, v, KleinShift::new(a, b)));
            }
            _ => return Err(parse_err(ln, format!("unrecognized line `{line}`"))),
        }
    }
    let n = verts.len();
    let mut gamma: Vec<Option<Point>> = vec![None; n];
    for (ln, v, p) in verts {
        if v >= n {
            return Err(parse_err(ln, format!("vertex {v} out of range for {n} vertex lines")));
        }
        if gamma[v].replace(p).is_some() {
            return Err(parse_err(ln, format!("duplicate vertex line for {v}")));
        }
    }
    let gamma: Vec<Point> = gamma.into_iter().map(|p| p.unwrap()).collect();
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(_, u, v, _)| (u, v)).collect();
    let graph = Graph::build(n, &pairs)?;
    let mut delta = vec![KleinShift::IDENTITY; graph.edge_count()];
    for (_, u, v, s) in edges {
        delta[graph.edge_id(u, v).unwrap()] = s;
    }
    Drawing::new(graph, gamma, delta, vec![false; n])
}

pub fn write_kdr(d: &Drawing) -> String {
    let mut out = String::new();
    for v in 0..d.graph().vertex_count() {
        let p = d.position(v);
        writeln!(out, "vertex {v} {:.17} {:.17}", p.x, p.y).unwrap();
    }
    for (e, &(u, v)) in d.graph().edges().iter().enumerate() {
        let s = d.shift(e);
        writeln!(out, "edge {u} {v} {} {}", s.a, s.b).unwrap();
    }
    out
}

// ---------------------------------------------------------------- omega db

fn parse_kind(ln: usize, tok: &str) -> Result<GraphKind, Error> {
    match tok {
        "k5" => Ok(GraphKind::K5),
        "k33" => Ok(GraphKind::K33),
        _ => Err(parse_err(ln, format!("unknown embedding kind `{tok}`"))),
    }
}

pub fn parse_omega(text: &str) -> Result<Vec<EmbeddingRecord>, Error> {
    let lines = content_lines(text);
    let mut records = Vec::new();
    let mut i = 0;
    let mut per_kind: std::collections::HashMap<GraphKind, usize> = Default::default();
    while i < lines.len() {
        let (ln, line) = lines[i];
        let toks: Vec<&str> = line.split_whitespace().collect();
        let ["embedding", id_tok, kind_tok] = toks.as_slice() else {
            return Err(parse_err(ln, "expected `embedding <id> <kind>`"));
        };
        let id = parse_usize(ln, id_tok, "embedding id")? as u32;
        if id != records.len() as u32 {
            return Err(parse_err(ln, format!("embedding ids must be sequential, got {id}")));
        }
        let kind = parse_kind(ln, kind_tok)?;
        i += 1;
        let mut krs_block = Vec::new();
        let mut kdr_block = Vec::new();
        let mut closed = false;
        while i < lines.len() {
            let (ln2, l2) = lines[i];
            i += 1;
            if l2 == "end" {
                closed = true;
                break;
            }
            if l2.starts_with("vertex ") || l2.starts_with("edge ") {
                kdr_block.push((ln2, l2));
            } else {
                krs_block.push((ln2, l2));
            }
        }
        if !closed {
            return Err(parse_err(ln, "embedding block missing `end`"));
        }
        let (_, system) = parse_krs_lines(&krs_block)?;
        let drawing = parse_kdr_lines(&kdr_block)?;
        let index = per_kind.entry(kind).or_insert(0);
        validate_record(kind, *index, &system, &drawing)?;
        *index += 1;
        records.push(EmbeddingRecord {
            id,
            kind,
            system,
            drawing,
        });
    }
    Ok(records)
}

pub fn write_omega(records: &[EmbeddingRecord]) -> String {
    let mut out = String::new();
    for r in records {
        writeln!(out, "embedding {} {}", r.id, r.kind).unwrap();
        out.push_str(&write_krs(r.kind.as_str(), &r.system));
        out.push_str(&write_kdr(&r.drawing));
        writeln!(out, "end").unwrap();
    }
    out
}

// ---------------------------------------------------------------- svg

const SVG_SCALE: f64 = 480.0;
const SVG_MARGIN: f64 = 40.0;

fn svg_map(p: Point) -> (f64, f64) {
    (
        SVG_MARGIN + p.x * SVG_SCALE,
        SVG_MARGIN + (1.0 - p.y) * SVG_SCALE,
    )
}

fn svg_segment(out: &mut String, p: Point, q: Point, class: &str) {
    if p.dist(q) < 1e-9 {
        return;
    }
    let (x1, y1) = svg_map(p);
    let (x2, y2) = svg_map(q);
    writeln!(
        out,
        r#"  <line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
    )
    .unwrap();
}

/// Splits the unfolded segment from `p` (inside the square) to `q` into the
/// pieces visible in the fundamental square, refolding at every side.
fn clipped_segments(mut p: Point, mut q: Point) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    for _ in 0..200 {
        let d = q - p;
        // earliest exit through a side, as a parameter along p -> q
        let mut t_exit = f64::INFINITY;
        let mut side = 0u8;
        for (limit, coord, delta, s) in [
            (0.0, p.x, d.x, 1u8),
            (1.0, p.x, d.x, 2u8),
            (0.0, p.y, d.y, 3u8),
            (1.0, p.y, d.y, 4u8),
        ] {
            if delta != 0.0 {
                let t = (limit - coord) / delta;
                if t > 1e-12 && t < t_exit && (limit - coord).signum() == delta.signum() {
                    t_exit = t;
                    side = s;
                }
            }
        }
        if t_exit >= 1.0 {
            out.push((p, q));
            return out;
        }
        let e = p + d * t_exit;
        out.push((p, e));
        let refold = |pt: Point| -> Point {
            match side {
                1 => Point::new(pt.x + 1.0, 1.0 - pt.y),
                2 => Point::new(pt.x - 1.0, 1.0 - pt.y),
                3 => Point::new(pt.x, pt.y + 1.0),
                _ => Point::new(pt.x, pt.y - 1.0),
            }
        };
        p = refold(e);
        q = refold(q);
    }
    out
}

/// Renders the fundamental square with its side-identification arrows, every
/// edge as its clipped unfolded segments, and labelled vertex glyphs.
/// `copies > 1` adds deck-translated ghost copies around the square.
pub fn render_svg(d: &Drawing, copies: usize) -> String {
    let reach = copies.max(1) as f64 - 1.0;
    let origin = -reach * SVG_SCALE;
    let extent = SVG_SCALE * (2.0 * reach + 1.0) + 2.0 * SVG_MARGIN;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{origin:.2} {origin:.2} {extent:.2} {extent:.2}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <style>
    .frame {{ stroke: #333; stroke-width: 2; fill: none; }}
    .arrow {{ fill: #333; }}
    .edge {{ stroke: #1f4e9c; stroke-width: 2; }}
    .ghost {{ stroke: #9bb5dd; stroke-width: 1; opacity: 0.6; }}
    .vertex {{ fill: #fff; stroke: #1f4e9c; stroke-width: 2; }}
    .label {{ font: 14px sans-serif; text-anchor: middle; dominant-baseline: central; }}
  </style>"#
    )
    .unwrap();

    // collect base-square pieces once; ghosts reuse them
    let mut pieces: Vec<(Point, Point)> = Vec::new();
    for e in 0..d.graph().edge_count() {
        let (p, q) = d.segment(e);
        pieces.extend(clipped_segments(p, q));
    }

    if copies > 1 {
        writeln!(out, r#"  <g class="ghostlayer">"#).unwrap();
        let r = copies as i64 - 1;
        for a in -r..=r {
            for b in -r..=r {
                if a == 0 && b == 0 {
                    continue;
                }
                let t = KleinShift::new(a, b);
                for &(p, q) in &pieces {
                    svg_segment(&mut out, t.apply(p), t.apply(q), "ghost");
                }
                for v in 0..d.graph().vertex_count() {
                    let (cx, cy) = svg_map(t.apply(d.position(v)));
                    writeln!(out, r#"  <circle class="ghost" cx="{cx:.2}" cy="{cy:.2}" r="9" fill="none"/>"#)
                        .unwrap();
                }
            }
        }
        writeln!(out, "  </g>").unwrap();
    }

    // fundamental square with identification marks: horizontal pair direct
    // (double arrows, same direction), vertical pair inverted (single arrows,
    // opposite directions)
    let (fx, fy) = svg_map(Point::new(0.0, 1.0));
    writeln!(
        out,
        r#"  <rect class="frame" x="{fx:.2}" y="{fy:.2}" width="{SVG_SCALE:.2}" height="{SVG_SCALE:.2}"/>"#
    )
    .unwrap();
    let tri = |out: &mut String, tip: Point, dir: (f64, f64)| {
        let (cx, cy) = svg_map(tip);
        let (dx, dy) = dir;
        let (nx, ny) = (-dy, dx);
        writeln!(
            out,
            r#"  <polygon class="arrow" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}"/>"#,
            cx + 8.0 * dx,
            cy + 8.0 * dy,
            cx - 8.0 * dx + 6.0 * nx,
            cy - 8.0 * dy + 6.0 * ny,
            cx - 8.0 * dx - 6.0 * nx,
            cy - 8.0 * dy - 6.0 * ny,
        )
        .unwrap();
    };
    for x in [0.45, 0.55] {
        tri(&mut out, Point::new(x, 0.0), (1.0, 0.0));
        tri(&mut out, Point::new(x, 1.0), (1.0, 0.0));
    }
    tri(&mut out, Point::new(1.0, 0.5), (0.0, -1.0)); // right side, upward
    tri(&mut out, Point::new(0.0, 0.5), (0.0, 1.0)); // left side, downward

    for &(p, q) in &pieces {
        svg_segment(&mut out, p, q, "edge");
    }
    for v in 0..d.graph().vertex_count() {
        let (cx, cy) = svg_map(d.position(v));
        writeln!(out, r#"  <circle class="vertex" cx="{cx:.2}" cy="{cy:.2}" r="11"/>"#).unwrap();
        writeln!(out, r#"  <text class="label" x="{cx:.2}" y="{cy:.2}">{v}</text>"#).unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

/// Segment pieces an edge contributes to the fundamental-square layer; the
/// renderer draws exactly these.
pub fn edge_piece_count(d: &Drawing, e: usize) -> usize {
    let (p, q) = d.segment(e);
    clipped_segments(p, q)
        .iter()
        .filter(|(a, b)| a.dist(*b) >= 1e-9)
        .count()
}
