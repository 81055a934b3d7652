//! Static SVG pictures of 2-D unit balls.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::orthogonality::polyhedral_view;
use crate::space::{Face, Space};

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Width and height of the picture in pixels.
    pub size: u32,
    /// Shade the cone `A_f` over every facet.
    pub cones: bool,
    pub points: Vec<Vec<f64>>,
    /// For each marked point, draw the directions `y` with `x ⊥_B y`.
    pub orth_rays: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            size: 400,
            cones: false,
            points: Vec::new(),
            orth_rays: false,
        }
    }
}

const PALETTE: [&str; 4] = ["#dbe9f6", "#fde2c8", "#d9f0d3", "#eadcf2"];

pub fn render_ball_svg(space: &Space, opts: &RenderOptions) -> Result<String> {
    if space.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            found: space.dim(),
        });
    }
    let poly = polyhedral_view(space).ok_or_else(|| Error::UnsupportedSpace("rendering needs a polygon".into()))?;
    let verts = poly.vertices();
    let reach = verts
        .iter()
        .map(|v| v[0].abs().max(v[1].abs()))
        .chain(opts.points.iter().map(|p| p[0].abs().max(p[1].abs())))
        .fold(1.0f64, f64::max);
    let size = opts.size as f64;
    let half = size / 2.0;
    let k = 0.8 * half / reach;
    let px = |p: &[f64]| (half + k * p[0], half - k * p[1]);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        opts.size
    );
    let _ = writeln!(s, r##"<rect width="{0}" height="{0}" fill="#ffffff"/>"##, opts.size);
    let _ = writeln!(
        s,
        r##"<line x1="0" y1="{half:.3}" x2="{size:.3}" y2="{half:.3}" stroke="#bbbbbb" stroke-width="0.5"/>"##
    );
    let _ = writeln!(
        s,
        r##"<line x1="{half:.3}" y1="0" x2="{half:.3}" y2="{size:.3}" stroke="#bbbbbb" stroke-width="0.5"/>"##
    );
    if opts.cones {
        // sectors reach the frame so they read as unbounded cones
        let far = 1.5 * reach;
        for f in 0..poly.dual_vertices().len() {
            let facet = poly.facet(f);
            let (a, b) = (&verts[facet[0]], &verts[facet[1]]);
            let stretch = |v: &[f64]| {
                let n = v[0].abs().max(v[1].abs());
                [v[0] * far / n, v[1] * far / n]
            };
            let (pa, pb) = (px(&stretch(a)), px(&stretch(b)));
            let _ = writeln!(
                s,
                r#"<polygon class="cone" data-facet="{f}" points="{half:.3},{half:.3} {:.3},{:.3} {:.3},{:.3}" fill="{}" fill-opacity="0.8"/>"#,
                pa.0,
                pa.1,
                pb.0,
                pb.1,
                PALETTE[f % PALETTE.len()]
            );
        }
    }
    let outline: Vec<String> = verts
        .iter()
        .map(|v| {
            let (x, y) = px(v);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        s,
        r##"<polygon class="ball" points="{}" fill="none" stroke="#1f3b5a" stroke-width="2"/>"##,
        outline.join(" ")
    );
    for (i, v) in verts.iter().enumerate() {
        let (x, y) = px(v);
        let (lx, ly) = px(&[v[0] * 1.12, v[1] * 1.12]);
        let _ = writeln!(s, r##"<circle class="vertex" cx="{x:.3}" cy="{y:.3}" r="3" fill="#1f3b5a"/>"##);
        let _ = writeln!(
            s,
            r#"<text x="{lx:.3}" y="{ly:.3}" font-family="sans-serif" font-size="12" text-anchor="middle" dominant-baseline="middle">v{i}</text>"#
        );
    }
    for (i, p) in opts.points.iter().enumerate() {
        if p.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: p.len(),
            });
        }
        let (x, y) = px(p);
        let _ = writeln!(s, r##"<circle class="point" cx="{x:.3}" cy="{y:.3}" r="4" fill="#c0392b"/>"##);
        let _ = writeln!(
            s,
            r##"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12" fill="#c0392b">x{i}</text>"##,
            x + 6.0,
            y - 6.0
        );
        if opts.orth_rays {
            for d in orth_directions(space, p)? {
                let n = d[0].abs().max(d[1].abs());
                let end = px(&[1.5 * reach * d[0] / n, 1.5 * reach * d[1] / n]);
                let _ = writeln!(
                    s,
                    r##"<line class="orth" x1="{half:.3}" y1="{half:.3}" x2="{:.3}" y2="{:.3}" stroke="#c0392b" stroke-width="1.5" stroke-dasharray="5,3"/>"##,
                    end.0,
                    end.1
                );
            }
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Boundary rays of `x^⊥`: the two directions of `ker f` for each extreme
/// `f` in `J(x)`, deduplicated.
fn orth_directions(space: &Space, x: &[f64]) -> Result<Vec<[f64; 2]>> {
    let set = space.support_set(x)?;
    let funcs: Vec<Vec<f64>> = match &set.face {
        Face::Extremes { functionals, .. } => functionals.iter().map(|f| f.0.clone()).collect(),
        Face::SignPattern { .. } => return Err(Error::UnsupportedDimension { expected: 2, found: space.dim() }),
    };
    let mut out: Vec<[f64; 2]> = Vec::new();
    for f in funcs {
        let n = f[0].hypot(f[1]);
        for d in [[-f[1] / n, f[0] / n], [f[1] / n, -f[0] / n]] {
            if !out.iter().any(|e| (e[0] - d[0]).abs() < 1e-12 && (e[1] - d[1]).abs() < 1e-12) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{preset_space, Preset};

    #[test]
    fn octagon_and_hexagon() {
        let oct = preset_space(&Preset::Regular2nGon(4)).unwrap();
        let svg = render_ball_svg(&oct, &RenderOptions::default()).unwrap();
        assert_eq!(svg.matches(r#"class="vertex""#).count(), 8);
        assert_eq!(svg, render_ball_svg(&oct, &RenderOptions::default()).unwrap());
        let hex = preset_space(&Preset::Regular2nGon(3)).unwrap();
        let opts = RenderOptions {
            cones: true,
            ..Default::default()
        };
        assert_eq!(render_ball_svg(&hex, &opts).unwrap().matches(r#"class="cone""#).count(), 6);
    }

    #[test]
    fn square_point_rays() {
        let sq = preset_space(&Preset::Linf(2)).unwrap();
        let opts = RenderOptions {
            points: vec![vec![1.0, 0.3]],
            orth_rays: true,
            ..Default::default()
        };
        let svg = render_ball_svg(&sq, &opts).unwrap();
        assert_eq!(svg.matches(r#"class="point""#).count(), 1);
        assert_eq!(svg.matches(r#"class="orth""#).count(), 2);
        assert!(render_ball_svg(&preset_space(&Preset::Linf(3)).unwrap(), &opts).is_err());
    }
}
