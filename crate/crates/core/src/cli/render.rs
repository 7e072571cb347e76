//! SVG pictures of fans in rank two.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::fan::{Fan, StackyFan};
use crate::lattice::{lattice_index, LatticeIndex};
use crate::matrix::IVec;

const SIZE: f64 = 400.0;
const LENGTH: f64 = 160.0;

fn endpoint(v: &IVec) -> (f64, f64) {
    let x = v[0].to_f64().unwrap_or(0.0);
    let y = v[1].to_f64().unwrap_or(0.0);
    let r = x.hypot(y);
    (SIZE / 2.0 + LENGTH * x / r, SIZE / 2.0 - LENGTH * y / r)
}

fn require_rank_two(f: &Fan) -> Result<()> {
    if f.ambient() != 2 {
        return Err(Error::Dimension(format!(
            "only rank 2 fans can be drawn, this one has rank {}",
            f.ambient()
        )));
    }
    Ok(())
}

fn shade(out: &mut String, c: &Cone, fill: &str) {
    let c0 = SIZE / 2.0;
    let (a, b) = (endpoint(&c.rays()[0]), endpoint(&c.rays()[1]));
    let _ = writeln!(
        out,
        r#"  <polygon points="{c0:.3},{c0:.3} {:.3},{:.3} {:.3},{:.3}" fill="{fill}" fill-opacity="0.35" stroke="none"/>"#,
        a.0, a.1, b.0, b.1
    );
}

fn segment(out: &mut String, r: &IVec, style: &str) {
    let c0 = SIZE / 2.0;
    let (x, y) = endpoint(r);
    let _ = writeln!(
        out,
        r#"  <line x1="{c0:.3}" y1="{c0:.3}" x2="{x:.3}" y2="{y:.3}" {style}/>"#
    );
}

fn label(out: &mut String, r: &IVec, text: &str) {
    let (x, y) = endpoint(r);
    let _ = writeln!(
        out,
        r#"  <text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">{text}</text>"#,
        x + 4.0,
        y - 4.0
    );
}

fn vector(r: &IVec) -> String {
    let parts: Vec<String> = r.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Draws `f`; an overlay is drawn dashed on top, with the index of each
/// sublattice in `N ∩ Span σ` printed next to rays and cones where it is not 1.
pub fn render(f: &Fan, overlay: Option<&StackyFan>) -> Result<String> {
    require_rank_two(f)?;
    if let Some(o) = overlay {
        require_rank_two(o.fan())?;
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    for c in f.cones().iter().filter(|c| c.dim() == 2) {
        shade(&mut out, c, "#4a7ab7");
    }
    for r in f.rays() {
        segment(&mut out, &r.rays()[0], r##"stroke="#1b3a63" stroke-width="2""##);
        label(&mut out, &r.rays()[0], &vector(&r.rays()[0]));
    }
    if let Some(o) = overlay {
        for (c, s) in o.fan().cones().iter().zip(o.sublattices()) {
            if c.dim() == 1 {
                segment(
                    &mut out,
                    &c.rays()[0],
                    r##"stroke="#c0392b" stroke-width="1.5" stroke-dasharray="6,4""##,
                );
            }
            if c.is_zero() {
                continue;
            }
            if let LatticeIndex::Finite(k) = lattice_index(s, &c.span_lattice())? {
                if k != 1.into() {
                    let anchor: IVec = c
                        .rays()
                        .iter()
                        .fold(vec![0.into(), 0.into()], |a, r| crate::matrix::add_vec(&a, r));
                    let (x, y) = endpoint(&anchor);
                    let _ = writeln!(
                        out,
                        r##"  <text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12" fill="#c0392b">index {k}</text>"##,
                        (x + SIZE / 2.0) / 2.0,
                        (y + SIZE / 2.0) / 2.0 + 14.0
                    );
                }
            }
        }
    }
    let _ = writeln!(
        out,
        r#"  <circle cx="{0}" cy="{0}" r="3" fill="black"/>"#,
        SIZE / 2.0
    );
    out.push_str("</svg>\n");
    Ok(out)
}
