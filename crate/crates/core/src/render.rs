//! Deterministic SVG drawings of models, polygons and fundamental domains.

use std::fmt::Write;

use num_rational::Rational64;

use crate::charts::FixedPointAnalysis;
use crate::heights::LatticePolygon;
use crate::matchings::PerfectMatching;
use crate::tiling::{compute_faces, Color, Dart, DimerModel, Offset};

const CELL_PX: f64 = 200.0;
const MARGIN: f64 = 30.0;
const PANEL_PX: f64 = 260.0;

/// An SVG document and any warnings raised while laying it out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drawing {
    pub svg: String,
    pub warnings: Vec<String>,
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Vertex positions in the unit cell, with a grid layout when any are missing.
pub fn layout(model: &DimerModel) -> (Vec<(f64, f64)>, Option<String>) {
    if model.vertices().iter().all(|v| v.pos.is_some()) {
        let pos = model
            .vertices()
            .iter()
            .map(|v| {
                let (x, y) = v.pos.expect("checked above");
                (to_f64(x), to_f64(y))
            })
            .collect();
        return (pos, None);
    }
    let n = model.num_vertices().max(1);
    let cols = (1..=n).find(|c| c * c >= n).unwrap_or(1);
    let rows = n.div_ceil(cols);
    let pos = (0..model.num_vertices())
        .map(|k| {
            let (r, c) = (k / cols, k % cols);
            ((c as f64 + 0.5) / cols as f64, (r as f64 + 0.5) / rows as f64)
        })
        .collect();
    (
        pos,
        Some("vertex positions missing; using an automatic grid layout".into()),
    )
}

/// Maps world coordinates to pixels, flipping the y axis.
struct Frame {
    scale: f64,
    x0: f64,
    y1: f64,
    ox: f64,
    oy: f64,
}

impl Frame {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.ox + (x - self.x0) * self.scale,
            self.oy + (self.y1 - y) * self.scale,
        )
    }
}

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="{w:.0}" height="{h:.0}" fill="white"/>"#);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn point(pos: &[(f64, f64)], v: usize, cell: Offset) -> (f64, f64) {
    (pos[v].0 + cell.dx as f64, pos[v].1 + cell.dy as f64)
}

/// Two by two fundamental cells with every edge lift; edges of `matching` are thick.
///
/// Each edge is one `<g class="edge">` group holding its lifts, one per cell.
pub fn render_model(model: &DimerModel, matching: Option<&PerfectMatching>) -> Drawing {
    let (pos, warning) = layout(model);
    let size = 2.0 * CELL_PX + 2.0 * MARGIN;
    let frame = Frame {
        scale: CELL_PX,
        x0: 0.0,
        y1: 2.0,
        ox: MARGIN,
        oy: MARGIN,
    };
    let cells = [Offset::new(0, 0), Offset::new(1, 0), Offset::new(0, 1), Offset::new(1, 1)];
    let mut out = String::new();
    header(&mut out, size, size);
    let _ = writeln!(out, r##"<g class="cells" fill="none" stroke="#bbbbbb" stroke-dasharray="4 4">"##);
    for c in cells {
        let (x, y) = frame.px(c.dx as f64, c.dy as f64 + 1.0);
        let _ = writeln!(out, r#"<rect x="{x:.2}" y="{y:.2}" width="{CELL_PX:.2}" height="{CELL_PX:.2}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    for (e, edge) in model.edges().iter().enumerate() {
        let thick = matching.is_some_and(|d| d.contains(e));
        let (class, width) = if thick { ("edge matched", 6.0) } else { ("edge", 1.5) };
        let _ = writeln!(
            out,
            r##"<g class="{class}" data-edge="{}" stroke="#333333" stroke-width="{width:.1}">"##,
            escape(&edge.id)
        );
        for c in cells {
            let (x1, y1) = frame.px(point(&pos, edge.black, c).0, point(&pos, edge.black, c).1);
            let (x2, y2) = {
                let p = point(&pos, edge.white, c + edge.offset);
                frame.px(p.0, p.1)
            };
            let _ = writeln!(out, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
        }
        let _ = writeln!(out, "</g>");
    }
    for (v, vertex) in model.vertices().iter().enumerate() {
        let fill = match vertex.color {
            Color::Black => "black",
            Color::White => "white",
        };
        let _ = writeln!(
            out,
            r#"<g class="vertex" data-vertex="{}" fill="{fill}" stroke="black" stroke-width="1.5">"#,
            escape(&vertex.id)
        );
        for c in cells {
            let p = point(&pos, v, c);
            let (x, y) = frame.px(p.0, p.1);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="7"/>"#);
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Drawing {
        svg: out,
        warnings: warning.into_iter().collect(),
    }
}

/// The polygon on its lattice grid, each vertex labeled by its coordinates.
pub fn render_polygon(polygon: &LatticePolygon) -> String {
    let vs = &polygon.vertices;
    let (mut lo, mut hi) = (Offset::new(0, 0), Offset::new(1, 1));
    if let Some(first) = vs.first() {
        lo = *first;
        hi = *first;
    }
    for v in vs {
        lo = Offset::new(lo.dx.min(v.dx), lo.dy.min(v.dy));
        hi = Offset::new(hi.dx.max(v.dx), hi.dy.max(v.dy));
    }
    let (lo, hi) = (lo - Offset::new(1, 1), hi + Offset::new(1, 1));
    let unit = 60.0;
    let frame = Frame {
        scale: unit,
        x0: lo.dx as f64,
        y1: hi.dy as f64,
        ox: MARGIN,
        oy: MARGIN,
    };
    let w = (hi.dx - lo.dx) as f64 * unit + 2.0 * MARGIN;
    let h = (hi.dy - lo.dy) as f64 * unit + 2.0 * MARGIN;
    let mut out = String::new();
    header(&mut out, w, h);
    let _ = writeln!(out, r##"<g class="grid" fill="#999999">"##);
    for x in lo.dx..=hi.dx {
        for y in lo.dy..=hi.dy {
            let (px, py) = frame.px(x as f64, y as f64);
            let _ = writeln!(out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="2"/>"#);
        }
    }
    let _ = writeln!(out, "</g>");
    if !vs.is_empty() {
        let pts: Vec<String> = vs
            .iter()
            .map(|v| {
                let (x, y) = frame.px(v.dx as f64, v.dy as f64);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<polygon class="hull" points="{}" fill="#cfe0f5" stroke="#1f4e8c" stroke-width="2"/>"##,
            pts.join(" ")
        );
    }
    for v in vs {
        let (x, y) = frame.px(v.dx as f64, v.dy as f64);
        let _ = writeln!(out, r##"<circle class="vertex" cx="{x:.2}" cy="{y:.2}" r="5" fill="#1f4e8c"/>"##);
        let _ = writeln!(
            out,
            r#"<text class="vertex-label" x="{:.2}" y="{:.2}" font-family="monospace" font-size="12">({},{})</text>"#,
            x + 7.0,
            y - 7.0,
            v.dx,
            v.dy
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One panel per fixed point: the lifted faces of `F`, its boundary, and the
/// `delta` edges and marked points on it.
pub fn render_domains(model: &DimerModel, analysis: &FixedPointAnalysis) -> Drawing {
    let (pos, warning) = layout(model);
    let faces = compute_faces(model);
    let n = analysis.fixed_points.len().max(1);
    let w = n as f64 * (PANEL_PX + MARGIN) + MARGIN;
    let h = PANEL_PX + 3.0 * MARGIN;
    let mut out = String::new();
    header(&mut out, w, h);
    let tail_pt = |d: Dart, cell: Offset| point(&pos, model.tail(d), cell);
    for (i, fp) in analysis.fixed_points.iter().enumerate() {
        let polys: Vec<Vec<(f64, f64)>> = fp
            .domain
            .faces
            .iter()
            .map(|&(f, cell)| {
                faces.faces[f]
                    .darts()
                    .map(|d| tail_pt(d, cell + faces.tail_cell[d.0]))
                    .collect()
            })
            .collect();
        let all = polys.iter().flatten();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let ox = MARGIN + i as f64 * (PANEL_PX + MARGIN);
        let frame = Frame {
            scale: PANEL_PX / span,
            x0,
            y1,
            ox,
            oy: 2.0 * MARGIN,
        };
        let _ = writeln!(out, r#"<g class="domain" data-candidate="{i}">"#);
        let _ = writeln!(
            out,
            r#"<text x="{ox:.2}" y="{:.2}" font-family="monospace" font-size="12">#{i}: {}</text>"#,
            MARGIN,
            escape(fp.chart.chart_description.as_str())
        );
        for poly in &polys {
            let pts: Vec<String> = poly
                .iter()
                .map(|&(x, y)| {
                    let (px, py) = frame.px(x, y);
                    format!("{px:.2},{py:.2}")
                })
                .collect();
            let _ = writeln!(
                out,
                r##"<polygon class="face" points="{}" fill="#eef3ea" stroke="#aaaaaa" stroke-width="1"/>"##,
                pts.join(" ")
            );
        }
        for ld in &fp.domain.boundary {
            let a = tail_pt(ld.dart, ld.tail_cell);
            let b = point(&pos, model.head(ld.dart), ld.tail_cell + model.dart_offset(ld.dart));
            let (x1, y1) = frame.px(a.0, a.1);
            let (x2, y2) = frame.px(b.0, b.1);
            let delta = fp.domain.delta_edges.contains(&ld.dart.edge());
            let (class, stroke, width) = if delta {
                ("delta", "#c0392b", 4.0)
            } else {
                ("boundary", "#333333", 2.0)
            };
            let _ = writeln!(
                out,
                r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-width="{width:.1}"/>"#
            );
        }
        for p in &fp.domain.points {
            let q = point(&pos, p.vertex, p.cell);
            let (x, y) = frame.px(q.0, q.1);
            let fill = match p.color {
                Color::Black => "black",
                Color::White => "white",
            };
            let (class, r) = if p.valency > 0 { ("marked", 6.0) } else { ("point", 4.0) };
            let _ = writeln!(
                out,
                r#"<circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="{r:.1}" fill="{fill}" stroke="black"/>"#
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Drawing {
        svg: out,
        warnings: warning.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::heights::{char_poly, default_reference, newton_polygon};

    #[test]
    fn conifold_with_reference_has_one_thick_edge() {
        let m = catalog::conifold();
        let d0 = default_reference(&m).unwrap();
        let d = render_model(&m, Some(&d0));
        assert_eq!(d.svg.matches(r#"<g class="edge"#).count(), 4);
        assert_eq!(d.svg.matches(r#"<g class="edge matched""#).count(), 1);
        assert!(d.warnings.is_empty());
    }

    #[test]
    fn unit_square_has_four_labels() {
        let m = catalog::conifold();
        let p = newton_polygon(&char_poly(&m, &default_reference(&m).unwrap()).unwrap());
        let svg = render_polygon(&p);
        assert_eq!(svg.matches("class=\"vertex-label\"").count(), 4);
        for label in ["(0,0)", "(1,0)", "(0,1)", "(1,1)"] {
            assert!(svg.contains(label));
        }
    }

    #[test]
    fn drawings_are_deterministic() {
        let m = catalog::honeycomb();
        assert_eq!(render_model(&m, None), render_model(&m, None));
    }

    #[test]
    fn missing_positions_fall_back_to_a_grid() {
        let m = catalog::conifold();
        let json = crate::io::model_to_json(&m);
        let mut doc: serde_json::Value = serde_json::from_str(&json).unwrap();
        for v in doc["vertices"].as_array_mut().unwrap() {
            v.as_object_mut().unwrap().remove("pos");
        }
        let bare = crate::io::parse_model(&doc.to_string()).unwrap();
        let d = render_model(&bare, None);
        assert_eq!(d.warnings.len(), 1);
        assert_eq!(d.svg.matches("<circle").count(), 8);
    }
}
