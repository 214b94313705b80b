//! SVG drawings of planar translates.

use std::fmt::Write;

use multitile_core::lattice::enumerate_in_box;
use multitile_core::{Coset, Error, ExactScalar, Polytope, Result, Scalar, WindowMultiset};

const DEFAULT_PALETTE: [&str; 6] = ["#8ecae6", "#ffb703", "#90be6d", "#f28482", "#cdb4db", "#b5838d"];
const WIDTH_PX: f64 = 600.0;

/// Where translates come from: whole cosets or a finite list.
pub enum Source<'a> {
    Cosets(&'a [Coset]),
    Window(&'a WindowMultiset),
}

/// Decimal with at most 12 significant digits, no exponent. Magnitudes below
/// 1e-12 are rounding noise at drawing scale and print as 0.
pub fn num(x: f64) -> String {
    if x.abs() < 1e-12 || !x.is_finite() {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).clamp(0, 40) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Polygon outline of a convex `p`, counter-clockwise from the lowest-angle vertex.
fn outline(p: &Polytope) -> Vec<(f64, f64)> {
    let pts: Vec<(f64, f64)> = p
        .vertices()
        .iter()
        .map(|v| (v[0].approx_f64(), v[1].approx_f64()))
        .collect();
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut keyed: Vec<(f64, (f64, f64))> = pts.into_iter().map(|p| ((p.1 - cy).atan2(p.0 - cx), p)).collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    keyed.into_iter().map(|(_, p)| p).collect()
}

fn strictly_less(a: &Scalar, b: &Scalar) -> Result<bool> {
    Ok(a.try_cmp(b)?.is_lt())
}

/// Whether the open boxes `[lo, hi]` of `P + t` and the window overlap.
fn meets(p: &Polytope, t: &[Scalar], lower: &[Scalar], upper: &[Scalar]) -> Result<bool> {
    let (plo, phi) = p.bounding_box();
    for k in 0..2 {
        if !strictly_less(&(plo[k].clone() + &t[k]), &upper[k])?
            || !strictly_less(&lower[k], &(phi[k].clone() + &t[k]))?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn inside(x: &[Scalar], lower: &[Scalar], upper: &[Scalar]) -> Result<bool> {
    for k in 0..2 {
        if strictly_less(&x[k], &lower[k])? || strictly_less(&upper[k], &x[k])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Draws every translate `P + λ` that meets the window, filled by coset, with
/// the translation points as dots.
pub fn render_tiling(
    p: &Polytope,
    source: Source<'_>,
    lower: &[Scalar],
    upper: &[Scalar],
    palette: &[String],
) -> Result<String> {
    if p.dim() != 2 {
        return Err(Error::DimensionUnsupported(format!(
            "rendering needs d = 2, got {}",
            p.dim()
        )));
    }
    if lower.len() != 2 || upper.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: lower.len().max(upper.len()),
        });
    }
    for k in 0..2 {
        if !strictly_less(&lower[k], &upper[k])? {
            return Err(Error::InvalidInput("the render window is empty".into()));
        }
    }
    let (plo, phi) = p.bounding_box();
    let mut translates: Vec<(usize, Vec<Scalar>)> = Vec::new();
    match source {
        Source::Cosets(cs) => {
            // Translates meeting the window, and translation points inside it.
            let mut lo = Vec::with_capacity(2);
            let mut hi = Vec::with_capacity(2);
            for k in 0..2 {
                let a = lower[k].clone() - &phi[k];
                let b = upper[k].clone() - &plo[k];
                lo.push(if strictly_less(&a, &lower[k])? {
                    a
                } else {
                    lower[k].clone()
                });
                hi.push(if strictly_less(&upper[k], &b)? {
                    b
                } else {
                    upper[k].clone()
                });
            }
            for (i, c) in cs.iter().enumerate() {
                for (t, _) in enumerate_in_box(c, &lo, &hi)?.points {
                    translates.push((i, t));
                }
            }
        }
        Source::Window(w) => {
            for (t, _) in &w.points {
                translates.push((0, t.clone()));
            }
        }
    }

    let colors: Vec<&str> = if palette.is_empty() {
        DEFAULT_PALETTE.to_vec()
    } else {
        palette.iter().map(String::as_str).collect()
    };
    let (x0, x1) = (lower[0].approx_f64(), upper[0].approx_f64());
    let (y0, y1) = (lower[1].approx_f64(), upper[1].approx_f64());
    let (w, h) = (x1 - x0, y1 - y0);
    let stroke = w.max(h) / 300.0;
    let base = outline(p);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(WIDTH_PX),
        num(WIDTH_PX * h / w),
        num(x0),
        num(-y1),
        num(w),
        num(h)
    );
    let _ = writeln!(
        svg,
        r#"<defs><clipPath id="window"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"#,
        num(x0),
        num(-y1),
        num(w),
        num(h)
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#ffffff"/>"##,
        num(x0),
        num(-y1),
        num(w),
        num(h)
    );
    let mut tiles = String::new();
    let mut dots = String::new();
    for (i, t) in &translates {
        let (tx, ty) = (t[0].approx_f64(), t[1].approx_f64());
        if inside(t, lower, upper)? {
            let _ = writeln!(
                dots,
                r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                num(tx),
                num(-ty),
                num(stroke * 2.0)
            );
        }
        if !meets(p, t, lower, upper)? {
            continue;
        }
        let points: Vec<String> = base
            .iter()
            .map(|(x, y)| format!("{},{}", num(x + tx), num(-(y + ty))))
            .collect();
        let _ = writeln!(
            tiles,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.75" data-coset="{}"/>"#,
            points.join(" "),
            colors[i % colors.len()],
            i + 1
        );
    }
    if !tiles.is_empty() {
        let _ = writeln!(
            svg,
            r##"<g clip-path="url(#window)" stroke="#222222" stroke-width="{}" stroke-linejoin="round">"##,
            num(stroke)
        );
        svg.push_str(&tiles);
        svg.push_str("</g>\n");
    }
    if !dots.is_empty() {
        svg.push_str("<g fill=\"#000000\">\n");
        svg.push_str(&dots);
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
