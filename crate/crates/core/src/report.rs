//! DOT and SVG renderings. Floating point appears here only, for display.

use std::fmt::Write;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::exact::{QVector, Rat};
use crate::geography::ValidGeography;
use crate::program::DecoratedNerve;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("drawing needs a geography with rho = 3, found rho = {0}")]
    Rank(usize),
    #[error("drawing needs a pointed support")]
    NotPointed,
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Undirected DOT graph of the 1-skeleton. Vertices are labelled `X/S`,
/// edges `type@T` with the type read from the lower to the higher index.
pub fn nerve_dot(n: &DecoratedNerve) -> String {
    let mut out = String::from("graph nerve {\n");
    for v in &n.vertices {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}/{}\"];",
            dot_escape(&v.id),
            dot_escape(&v.x_model),
            dot_escape(&v.s_model)
        );
    }
    for e in &n.edges {
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\" [label=\"{}@{}\"];",
            dot_escape(&n.vertices[e.a].id),
            dot_escape(&n.vertices[e.b].id),
            e.link_type,
            dot_escape(&e.t_model)
        );
    }
    out.push_str("}\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

const FILLS: [&str; 8] = [
    "#cfe2f3", "#d9ead3", "#fff2cc", "#f4cccc", "#d9d2e9", "#fce5cd", "#d0e0e3", "#ead1dc",
];

const SIZE: f64 = 600.0;
const MARGIN: f64 = 60.0;

/// Cross-section of a rank 3 geography by `lambda . x = 1`, where `lambda`
/// is the sum of the support's inward normals.
pub fn geography_svg(vg: &ValidGeography) -> Result<String, ReportError> {
    if vg.rho() != 3 {
        return Err(ReportError::Rank(vg.rho()));
    }
    let support = vg.support();
    if !support.is_pointed() {
        return Err(ReportError::NotPointed);
    }
    let lambda = support
        .normals()
        .iter()
        .fold(QVector::zeros(3), |acc, n| acc.add(n));
    let rays = vg.geography().rays();
    let points: Vec<Vec<f64>> = rays
        .iter()
        .map(|r| {
            let s = lambda.dot(r);
            r.coords().iter().map(|c| to_f64(&(c / &s))).collect()
        })
        .collect();

    // orthonormal frame of the plane, for display
    let l: Vec<f64> = lambda.coords().iter().map(to_f64).collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dotf = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let seed = if l[0].abs() < 0.9 * norm(&l) {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let ll = dotf(&l, &l);
    let mut u: Vec<f64> = (0..3).map(|i| seed[i] - dotf(&seed, &l) / ll * l[i]).collect();
    let nu = norm(&u);
    u.iter_mut().for_each(|x| *x /= nu);
    let mut w = vec![
        l[1] * u[2] - l[2] * u[1],
        l[2] * u[0] - l[0] * u[2],
        l[0] * u[1] - l[1] * u[0],
    ];
    let nw = norm(&w);
    w.iter_mut().for_each(|x| *x /= nw);
    let flat: Vec<(f64, f64)> = points.iter().map(|p| (dotf(p, &u), dotf(p, &w))).collect();

    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &flat {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let scale = (SIZE - 2.0 * MARGIN) / (x1 - x0).max(y1 - y0).max(1e-12);
    let screen = |(x, y): (f64, f64)| (MARGIN + (x - x0) * scale, SIZE - MARGIN - (y - y0) * scale);
    let pts: Vec<(f64, f64)> = flat.iter().map(|&p| screen(p)).collect();

    let around = |idx: &[usize]| -> Vec<usize> {
        let n = idx.len() as f64;
        let cx = idx.iter().map(|&i| pts[i].0).sum::<f64>() / n;
        let cy = idx.iter().map(|&i| pts[i].1).sum::<f64>() / n;
        let mut v = idx.to_vec();
        v.sort_by(|&a, &b| {
            let ta = (pts[a].1 - cy).atan2(pts[a].0 - cx);
            let tb = (pts[b].1 - cy).atan2(pts[b].0 - cx);
            ta.total_cmp(&tb)
        });
        v
    };
    let centroid = |idx: &[usize]| {
        let n = idx.len() as f64;
        (
            idx.iter().map(|&i| pts[i].0).sum::<f64>() / n,
            idx.iter().map(|&i| pts[i].1).sum::<f64>() / n,
        )
    };
    let name = |id: &str| {
        vg.model(id)
            .map(|m| m.display_name)
            .unwrap_or_else(|| id.to_string())
    };

    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">",
        s = num(SIZE)
    );
    let _ = writeln!(out, "<g font-family=\"serif\" font-size=\"14\" text-anchor=\"middle\">");
    let mut labels = String::new();
    for (i, c) in vg.geography().chambers().iter().enumerate() {
        let cell = &vg.cells()[vg.chamber_cell(i)];
        let order = around(&cell.key);
        let path: Vec<String> = order
            .iter()
            .map(|&k| format!("{},{}", num(pts[k].0), num(pts[k].1)))
            .collect();
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"{}\" stroke=\"#666666\" stroke-width=\"1\"/>",
            path.join(" "),
            FILLS[i % FILLS.len()]
        );
        let (cx, cy) = centroid(&cell.key);
        let _ = writeln!(
            labels,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            num(cx),
            num(cy),
            xml_escape(&name(&c.model))
        );
    }
    let rho = vg.rho();
    for c in vg.cells() {
        if c.big {
            continue;
        }
        let model = c.model.as_deref().unwrap_or("");
        if c.dim() + 1 == rho && c.key.len() == 2 {
            let (a, b) = (pts[c.key[0]], pts[c.key[1]]);
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" stroke-width=\"3\"/>",
                num(a.0),
                num(a.1),
                num(b.0),
                num(b.1)
            );
            let _ = writeln!(
                labels,
                "<text x=\"{}\" y=\"{}\" fill=\"#1c4587\">{}</text>",
                num((a.0 + b.0) / 2.0),
                num((a.1 + b.1) / 2.0 - 6.0),
                xml_escape(&name(model))
            );
        } else if c.dim() == 1 {
            let p = pts[c.key[0]];
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#000000\"/>",
                num(p.0),
                num(p.1)
            );
            let _ = writeln!(
                labels,
                "<text x=\"{}\" y=\"{}\" fill=\"#990000\">{}</text>",
                num(p.0),
                num(p.1 + 20.0),
                xml_escape(&name(model))
            );
        }
    }
    out.push_str(&labels);
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::program::decorated_nerve;

    #[test]
    fn dot_labels() {
        let vg = corpus::geography("dp2").into_valid().unwrap();
        let dot = nerve_dot(&decorated_nerve(&vg).unwrap());
        assert!(dot.starts_with("graph nerve {"));
        assert!(dot.contains("[label=\"P2/pt\"]"));
        assert!(dot.contains("[label=\"IV@pt\"]"));
        assert_eq!(dot.matches(" -- ").count(), 5);
    }

    #[test]
    fn svg_is_deterministic() {
        let vg = corpus::geography("fig4_bottom").into_valid().unwrap();
        let a = geography_svg(&vg).unwrap();
        let b = geography_svg(&vg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<polygon").count(), 4);
        assert!(a.contains("version=\"1.1\""));
    }
}
