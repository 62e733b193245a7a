use std::fmt::Write;

use hitomezashi_core::{decompose, Dir, DirectedEdge, ToroidalPattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Svg,
    Ascii,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub target: Target,
    pub cell: u32,
    pub outline: bool,
    /// Only drawn for symmetric patterns.
    pub diagonal: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            target: Target::Svg,
            cell: 40,
            outline: true,
            diagonal: true,
        }
    }
}

// Hand-picked first, then golden-angle hues.
const BASE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f",
];

/// Colour of the loop with canonical index `k`.
pub fn loop_color(k: usize) -> String {
    if k < BASE.len() {
        return BASE[k].to_string();
    }
    // Integer hue keeps the bytes platform-independent.
    let hue = (k as u64 * 137_508 / 1000) % 360;
    let (s, l) = (0.65, if k.is_multiple_of(2) { 0.42 } else { 0.55 });
    let c = (1.0 - (2.0 * l - 1.0_f64).abs()) * s;
    let h = hue as f64 / 60.0;
    let x = c * (1.0 - (h % 2.0 - 1.0).abs());
    let (r, g, b) = match hue / 60 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let byte = |v: f64| ((v + m) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", byte(r), byte(g), byte(b))
}

pub fn render(p: &ToroidalPattern, spec: &RenderSpec) -> String {
    match spec.target {
        Target::Svg => svg(p, spec),
        Target::Ascii => ascii(p),
    }
}

/// Segment of `e` inside the fundamental domain, endpoints in grid units.
fn segment(p: &ToroidalPattern, e: &DirectedEdge) -> ((i64, i64), (i64, i64)) {
    let (i, j) = (e.tail.0 as i64, e.tail.1 as i64);
    let (dx, dy) = e.dir.delta();
    let (mut a, mut b) = ((i, j), (i + dx, j + dy));
    if b.0 < 0 {
        a.0 += p.m() as i64;
        b.0 += p.m() as i64;
    }
    if b.1 < 0 {
        a.1 += p.n() as i64;
        b.1 += p.n() as i64;
    }
    (a, b)
}

fn svg(p: &ToroidalPattern, spec: &RenderSpec) -> String {
    let d = decompose(p);
    let owner = d.edge_owner();
    let cell = spec.cell.max(8) as i64;
    let margin = cell;
    let (m, n) = (p.m() as i64, p.n() as i64);
    let (w, h) = (m * cell + 2 * margin, n * cell + 2 * margin);
    let px = |v: (i64, i64)| (margin + v.0 * cell, margin + (n - v.1) * cell);
    let stroke = (cell / 10).max(2);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, "<title>{} ({} loops)</title>", p.id(), d.loops.len());
    let _ = writeln!(s, "<defs>");
    for k in 0..d.loops.len() {
        let _ = writeln!(
            s,
            r#"<marker id="a{k}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="4" markerHeight="4" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{}"/></marker>"#,
            loop_color(k)
        );
    }
    let _ = writeln!(s, "</defs>");
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);

    for (k, l) in d.loops.iter().enumerate() {
        let color = loop_color(k);
        let _ = writeln!(
            s,
            r#"<g class="loop" id="loop{k}" stroke="{color}" stroke-width="{stroke}" stroke-linecap="round" marker-end="url(#a{k})">"#
        );
        for e in &l.edges {
            let (a, b) = segment(p, e);
            let (pa, pb) = (px(a), px(b));
            // Shorten slightly so the arrowheads stay legible at corners.
            let (sx, sy) = (
                (pb.0 - pa.0).signum() * stroke,
                (pb.1 - pa.1).signum() * stroke,
            );
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                pa.0 + sx,
                pa.1 + sy,
                pb.0 - sx,
                pb.1 - sy
            );
        }
        let _ = writeln!(s, "</g>");
    }

    // Wrap-around stubs: the first row and column repeated faintly on
    // the far sides of the domain.
    let _ = writeln!(
        s,
        r#"<g class="wrap" opacity="0.3" stroke-width="{stroke}">"#
    );
    for e in p.edges() {
        let k = owner[p.edge_index(&e)];
        let (a, b) = segment(p, &e);
        let shift = match e.dir {
            Dir::N | Dir::S if a.0 == 0 => Some((m, 0)),
            Dir::E | Dir::W if a.1 == 0 => Some((0, n)),
            _ => None,
        };
        if let Some((tx, ty)) = shift {
            let (pa, pb) = (px((a.0 + tx, a.1 + ty)), px((b.0 + tx, b.1 + ty)));
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}"/>"#,
                pa.0,
                pa.1,
                pb.0,
                pb.1,
                loop_color(k)
            );
        }
    }
    let _ = writeln!(s, "</g>");

    if spec.outline {
        let (o, f) = (px((0, n)), px((m, 0)));
        let _ = writeln!(
            s,
            r#"<rect class="domain" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1.5" stroke-dasharray="3,4"/>"#,
            o.0,
            o.1,
            f.0 - o.0,
            f.1 - o.1
        );
    }
    if spec.diagonal && p.is_symmetric() {
        let (a, b) = (px((0, 0)), px((m, n)));
        let _ = writeln!(
            s,
            r#"<line class="diagonal" x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-width="1" stroke-dasharray="8,4"/>"#,
            a.0, a.1, b.0, b.1
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Vertices as `+`, edges as arrows; row and column 0 are repeated on the
/// far side, so the grid is `2N + 1` rows by `2M + 1` columns.
fn ascii(p: &ToroidalPattern) -> String {
    let (m, n) = (p.m(), p.n());
    let mut rows = vec![vec![' '; 2 * m + 1]; 2 * n + 1];
    for j in 0..=n {
        let r = 2 * (n - j);
        let row_plus = p.x().get(j % n).is_plus();
        for i in 0..=m {
            rows[r][2 * i] = '+';
            if i < m {
                rows[r][2 * i + 1] = if row_plus { '>' } else { '<' };
            }
            if j < n {
                rows[r - 1][2 * i] = if p.y().get(i % m).is_plus() { '^' } else { 'v' };
            }
        }
    }
    let mut s = String::new();
    for row in rows {
        let line: String = row.into_iter().collect();
        s.push_str(line.trim_end());
        s.push('\n');
    }
    s
}
