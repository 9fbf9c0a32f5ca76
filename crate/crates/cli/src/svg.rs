//! Static SVG drawing of a planar complex and a curve in it.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use tropglue_core::{IntegralAffinePolytope, PolyhedralComplex, RationalPoint, TropicalCurve};

use crate::CliError;

const EPS: f64 = 1e-9;
const SCALE: f64 = 60.0;

type P = (f64, f64);

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn to_f64(p: &RationalPoint) -> P {
    let c = p.coords();
    (c[0].to_f64().unwrap_or(0.0), c[1].to_f64().unwrap_or(0.0))
}

/// Rows `a·x + b ≥ 0` as floats.
fn rows(p: &IntegralAffinePolytope) -> Vec<(f64, f64, f64)> {
    p.constraints()
        .iter()
        .map(|c| {
            let l = c.functional.linear.entries();
            (l[0].to_f64().unwrap_or(0.0), l[1].to_f64().unwrap_or(0.0), c.functional.constant.to_f64().unwrap_or(0.0))
        })
        .collect()
}

/// Vertices of `{rows} ∩ box`, in counter-clockwise order.
fn polygon(rows: &[(f64, f64, f64)]) -> Vec<P> {
    let mut pts: Vec<P> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        for s in &rows[i + 1..] {
            let det = r.0 * s.1 - r.1 * s.0;
            if det.abs() < EPS {
                continue;
            }
            let x = (-r.2 * s.1 + s.2 * r.1) / det;
            let y = (-r.0 * s.2 + s.0 * r.2) / det;
            let inside = rows.iter().all(|t| t.0 * x + t.1 * y + t.2 >= -1e-7);
            if inside && !pts.iter().any(|q| (q.0 - x).abs() + (q.1 - y).abs() < 1e-7) {
                pts.push((x, y));
            }
        }
    }
    let n = pts.len().max(1) as f64;
    let (cx, cy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    pts.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
    pts
}

fn boxed(mut r: Vec<(f64, f64, f64)>, b: (f64, f64, f64, f64)) -> Vec<(f64, f64, f64)> {
    r.extend([(1.0, 0.0, -b.0), (-1.0, 0.0, b.1), (0.0, 1.0, -b.2), (0.0, -1.0, b.3)]);
    r
}

/// Renders `c` (which must be planar) and optionally `g`.
pub fn render(c: &PolyhedralComplex, g: Option<&TropicalCurve>) -> Result<String, CliError> {
    if c.ambient_dim() != 2 {
        return Err(CliError::Validation(format!("diagrams need a planar complex, got dimension {}", c.ambient_dim())));
    }
    // bounding box from face corners and curve vertices
    let mut seen: Vec<P> = Vec::new();
    let wide = (-1e4, 1e4, -1e4, 1e4);
    for f in c.faces() {
        seen.extend(polygon(&boxed(rows(&f.polytope), wide)).into_iter().filter(|p| p.0.abs() < 1e3 && p.1.abs() < 1e3));
    }
    if let Some(g) = g {
        seen.extend(g.vertices().iter().map(|v| to_f64(&v.position)));
    }
    if seen.is_empty() {
        seen.push((0.0, 0.0));
    }
    let pad = 1.5;
    let b = seen.iter().fold((f64::MAX, f64::MIN, f64::MAX, f64::MIN), |b, p| (b.0.min(p.0), b.1.max(p.0), b.2.min(p.1), b.3.max(p.1)));
    let b = (b.0 - pad, b.1 + pad, b.2 - pad, b.3 + pad);
    let (w, h) = ((b.1 - b.0) * SCALE, (b.3 - b.2) * SCALE);
    let sx = |x: f64| (x - b.0) * SCALE;
    let sy = |y: f64| (b.3 - y) * SCALE;

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut faces: Vec<_> = c.faces().iter().collect();
    faces.sort_by_key(|f| std::cmp::Reverse(c.face_dimension(&f.id).unwrap_or(0)));
    for f in faces {
        let pts = polygon(&boxed(rows(&f.polytope), b));
        let path: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1))).collect();
        let _ = match pts.len() {
            0 => Ok(()),
            1 => writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="black"><title>{}</title></circle>"#, sx(pts[0].0), sy(pts[0].1), escape(&f.id)),
            2 => writeln!(out, r#"<polyline points="{}" stroke="black" stroke-width="1.5" fill="none"><title>{}</title></polyline>"#, path.join(" "), escape(&f.id)),
            _ => writeln!(out, r##"<polygon points="{}" fill="#eef2f7" stroke="#9aa5b1" stroke-width="0.5"><title>{}</title></polygon>"##, path.join(" "), escape(&f.id)),
        };
    }
    if let Some(g) = g {
        let pos = |id: &str| to_f64(&g.vertex(id).expect("validated reference").position);
        for e in g.edges() {
            let (a, z) = (pos(&e.tail), pos(&e.head));
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#c0392b" stroke-width="2"><title>{} {}</title></line>"##,
                sx(a.0), sy(a.1), sx(z.0), sy(z.1), escape(&e.id), e.derivative
            );
        }
        for e in g.ends() {
            let a = pos(&e.vertex);
            let d = e.derivative.entries();
            let (dx, dy) = (d[0].to_f64().unwrap_or(0.0), d[1].to_f64().unwrap_or(0.0));
            let norm = (dx * dx + dy * dy).sqrt();
            if norm < EPS {
                let _ = writeln!(out, r##"<text x="{:.2}" y="{:.2}" font-size="10" fill="#555">{}</text>"##, sx(a.0) + 5.0, sy(a.1) - 5.0, escape(&e.label));
                continue;
            }
            let z = (a.0 + 1.2 * dx / norm, a.1 + 1.2 * dy / norm);
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#c0392b" stroke-width="1.5" stroke-dasharray="4 2"><title>{}</title></line>"##,
                sx(a.0), sy(a.1), sx(z.0), sy(z.1), escape(&e.label)
            );
        }
        for v in g.vertices() {
            let p = to_f64(&v.position);
            let _ = writeln!(out, r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#c0392b"><title>{}</title></circle>"##, sx(p.0), sy(p.1), escape(&v.id));
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
