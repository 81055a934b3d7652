//! Two-dimensional subspaces inside, or kept away from, the intersection of
//! two `eps`-orthogonality sets in dimension 3.
//!
//! A plane `V` lies in `x^⊥ε ∩ y^⊥ε` iff its unit circle `V ∩ S` does, by
//! homogeneity. `V ∩ B` is a polygon whose edges sit on facets of `B`, so the
//! norm is 1 along every edge and each `f(z)` is linear in the edge
//! parameter. That makes the check on each edge exact.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{cross, dot, euclid, lerp, plane_slice};
use crate::orthogonality::{is_eps_orthogonal, is_eps_orthogonal_definitional, polyhedral_view, OrthoConfig};
use crate::sampling::fibonacci_sphere;
use crate::space::{check_dim, Face, PolyhedralSpace, Space, Structure, SupportSet};

/// Number of grid normals tried after the structured candidates.
pub const GRID_NORMALS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckedExtreme {
    pub point: Vec<f64>,
    /// `min |f(z)|` over `J(x)`.
    pub min_support_x: f64,
    pub min_support_y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperspaceCertificate {
    pub basis: [Vec<f64>; 2],
    pub checked_extremes: Vec<CheckedExtreme>,
    /// `eps` minus the worst min-support value along `V ∩ S`.
    pub margin: f64,
}

fn functionals(set: &SupportSet<f64>) -> Result<Vec<Vec<f64>>> {
    match &set.face {
        Face::Extremes { functionals, .. } => Ok(functionals.iter().map(|f| f.0.clone()).collect()),
        Face::SignPattern { .. } => Err(Error::UnsupportedSpace("support face too large".into())),
    }
}

/// Edge parameters in `[0, 1]` where any two of the affine maps
/// `t -> a_i + t (b_i - a_i)` cross, plus the endpoints.
fn breakpoints(lines: &[(f64, f64)]) -> Vec<f64> {
    let mut ts = vec![0.0, 1.0];
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (a0, a1) = lines[i];
            let (b0, b1) = lines[j];
            let denom = (a1 - a0) - (b1 - b0);
            if denom.abs() > 1e-15 {
                let t = (b0 - a0) / denom;
                if t > 0.0 && t < 1.0 {
                    ts.push(t);
                }
            }
        }
    }
    ts
}

/// `max |.|`-free form of the worst point on an edge: the largest value of
/// `max(lo(z), -hi(z))` over the edge, where `lo`/`hi` range over `fs`.
fn worst_on_edge(fs: &[Vec<f64>], z0: &[f64], z1: &[f64]) -> f64 {
    let mut lines: Vec<(f64, f64)> = fs.iter().map(|f| (dot(f, z0), dot(f, z1))).collect();
    lines.extend(fs.iter().map(|f| (-dot(f, z0), -dot(f, z1))));
    lines.push((0.0, 0.0));
    let at = |t: f64, sign: f64| {
        fs.iter()
            .map(|f| sign * (dot(f, z0) + t * (dot(f, z1) - dot(f, z0))))
            .fold(f64::INFINITY, f64::min)
    };
    breakpoints(&lines)
        .into_iter()
        .map(|t| at(t, 1.0).max(at(t, -1.0)))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Exact margin of the plane with slice polygon `slice`: `eps` minus the
/// largest min-support value over its boundary, for both points.
fn plane_margin(fx: &[Vec<f64>], fy: &[Vec<f64>], eps: f64, slice: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0_f64;
    for k in 0..slice.len() {
        let (z0, z1) = (&slice[k], &slice[(k + 1) % slice.len()]);
        worst = worst.max(worst_on_edge(fx, z0, z1)).max(worst_on_edge(fy, z0, z1));
    }
    eps - worst
}

struct Candidate {
    basis: [Vec<f64>; 2],
}

fn canonical(normal: &[f64]) -> Option<[f64; 3]> {
    let n = euclid(normal);
    if n < 1e-9 {
        return None;
    }
    let mut v = [normal[0] / n, normal[1] / n, normal[2] / n];
    let lead = v.iter().find(|c| c.abs() > 1e-9).copied().unwrap_or(1.0);
    if lead < 0.0 {
        v.iter_mut().for_each(|c| *c = -*c);
    }
    Some(v)
}

/// Two vectors spanning the plane orthogonal to the unit vector `c`.
fn perpendicular_basis(c: &[f64; 3]) -> [Vec<f64>; 2] {
    let axis = (0..3).min_by(|&a, &b| c[a].abs().total_cmp(&c[b].abs())).unwrap();
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let u = cross(c, &e);
    let v = cross(c, &u);
    [u.to_vec(), v.to_vec()]
}

fn candidates(space: &PolyhedralSpace<f64>) -> Vec<Candidate> {
    let mut seen: Vec<[f64; 3]> = Vec::new();
    let mut out = Vec::new();
    let mut push = |normal: &[f64], basis: Option<[Vec<f64>; 2]>| {
        let Some(c) = canonical(normal) else { return };
        if seen.iter().any(|s| s.iter().zip(&c).all(|(a, b)| (a - b).abs() < 1e-9)) {
            return;
        }
        seen.push(c);
        let basis = basis.unwrap_or_else(|| perpendicular_basis(&c));
        out.push(Candidate { basis });
    };
    let verts = space.vertices();
    for a in 0..verts.len() {
        for b in (a + 1)..verts.len() {
            push(&cross(&verts[a], &verts[b]), Some([verts[a].0.clone(), verts[b].0.clone()]));
        }
    }
    let duals = space.dual_vertices();
    for f in duals {
        push(f, None);
    }
    for a in 0..duals.len() {
        for b in (a + 1)..duals.len() {
            push(&cross(&duals[a], &duals[b]), None);
        }
    }
    for n in fibonacci_sphere(GRID_NORMALS) {
        push(&n, None);
    }
    out
}

fn check_inputs(space: &Space, x: &[f64], y: &[f64]) -> Result<PolyhedralSpace<f64>> {
    if space.dim() != 3 {
        return Err(Error::UnsupportedDimension {
            expected: 3,
            found: space.dim(),
        });
    }
    check_dim(3, x)?;
    check_dim(3, y)?;
    polyhedral_view(space).ok_or_else(|| Error::UnsupportedSpace("hyperspace search needs a polyhedral ball".into()))
}

/// Searches planes through 0 for one inside `x^⊥ε ∩ y^⊥ε`.
///
/// Candidates are planes spanned by vertex pairs, kernels of dual vertices,
/// planes spanned by dual-vertex normals, then a grid of normals. `None`
/// means not found under this budget, not a proof of absence.
pub fn contains_hyperspace_witness(
    space: &Space,
    x: &[f64],
    y: &[f64],
    cfg: &OrthoConfig,
) -> Result<Option<HyperspaceCertificate>> {
    cfg.validate()?;
    let poly = check_inputs(space, x, y)?;
    let sx = space.support_set(x)?;
    let sy = space.support_set(y)?;
    let (fx, fy) = (functionals(&sx)?, functionals(&sy)?);
    for cand in candidates(&poly) {
        let slice = plane_slice(&poly, &cand.basis);
        if slice.len() < 3 {
            continue;
        }
        let margin = plane_margin(&fx, &fy, cfg.epsilon, &slice);
        if margin < -cfg.tol {
            continue;
        }
        if let Some(cert) = certify(space, x, y, cfg, cand.basis, &slice, margin)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Re-checks the slice vertices with both deciders. A disagreement outside
/// the tie band rejects the candidate.
fn certify(
    space: &Space,
    x: &[f64],
    y: &[f64],
    cfg: &OrthoConfig,
    basis: [Vec<f64>; 2],
    slice: &[Vec<f64>],
    margin: f64,
) -> Result<Option<HyperspaceCertificate>> {
    let mut checked = Vec::with_capacity(slice.len());
    for z in slice {
        for p in [x, y] {
            let a = is_eps_orthogonal(space, p, z, cfg)?;
            let b = is_eps_orthogonal_definitional(space, p, z, cfg)?;
            if !a.holds || (!b.holds && !a.is_tie(cfg.tol)) {
                return Ok(None);
            }
        }
        checked.push(CheckedExtreme {
            point: z.clone(),
            min_support_x: space.support_set(x)?.min_abs(z),
            min_support_y: space.support_set(y)?.min_abs(z),
        });
    }
    Ok(Some(HyperspaceCertificate {
        basis,
        checked_extremes: checked,
        margin,
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Obstruction {
    pub basis: [Vec<f64>; 2],
    /// Smallest `max(min-support at x, min-support at y) - eps` over `V ∩ S`.
    pub margin: f64,
    /// `V` meets `x^⊥ε ∩ y^⊥ε` only at 0.
    pub trivial_intersection: bool,
}

fn unit(n: usize, i: usize, s: f64) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = s;
    e
}

/// The coordinate plane that keeps `x^⊥ε ∩ y^⊥ε` free of hyperspaces in
/// `l_inf^n` and `l_1^n`, for smooth `x`, `y` with independent supports.
///
/// `l_inf`: the plane of the two support coordinates. `l_1`: a coordinate
/// where the sign patterns agree and one where they differ.
pub fn coordinate_obstruction(space: &Space, x: &[f64], y: &[f64], eps: f64) -> Result<Obstruction> {
    OrthoConfig::with_epsilon(eps)?;
    let poly = polyhedral_view(space)
        .filter(|p| matches!(p.structure(), Structure::Cube | Structure::CrossPolytope))
        .ok_or_else(|| Error::UnsupportedSpace("obstruction is defined for l_inf^n and l_1^n".into()))?;
    let n = poly.dim();
    check_dim(n, x)?;
    check_dim(n, y)?;
    let sx = space.support_set(x)?;
    let sy = space.support_set(y)?;
    if !sx.is_smooth() || !sy.is_smooth() {
        return Err(Error::HypothesisUnmet("x and y must be smooth points".into()));
    }
    let f = functionals(&sx)?.remove(0);
    let g = functionals(&sy)?.remove(0);
    let indep = f.iter().zip(&g).any(|(a, b)| (a - b).abs() > 1e-12) && f.iter().zip(&g).any(|(a, b)| (a + b).abs() > 1e-12);
    if !indep {
        return Err(Error::HypothesisUnmet("J(x) = +-J(y)".into()));
    }
    let (p, q, slice) = if poly.structure() == Structure::Cube {
        let p = f.iter().position(|c| c.abs() > 0.5).unwrap();
        let q = g.iter().position(|c| c.abs() > 0.5).unwrap();
        let corner = |a: f64, b: f64| {
            let mut v = vec![0.0; n];
            v[p] = a;
            v[q] = b;
            v
        };
        let slice = vec![corner(1.0, 1.0), corner(-1.0, 1.0), corner(-1.0, -1.0), corner(1.0, -1.0)];
        (p, q, slice)
    } else {
        let p = (0..n).find(|&i| f[i] == g[i]).unwrap();
        let q = (0..n).find(|&i| f[i] == -g[i]).unwrap();
        let slice = vec![unit(n, p, 1.0), unit(n, q, 1.0), unit(n, p, -1.0), unit(n, q, -1.0)];
        (p, q, slice)
    };
    // On each edge max(|f|, |g|) is piecewise linear with kinks where f, g,
    // f - g or f + g vanish.
    let mut best = f64::INFINITY;
    for k in 0..slice.len() {
        let (z0, z1) = (&slice[k], &slice[(k + 1) % slice.len()]);
        let lines = [
            (dot(&f, z0), dot(&f, z1)),
            (-dot(&f, z0), -dot(&f, z1)),
            (dot(&g, z0), dot(&g, z1)),
            (-dot(&g, z0), -dot(&g, z1)),
            (0.0, 0.0),
        ];
        for t in breakpoints(&lines) {
            let z = lerp(z0, z1, t);
            best = best.min(dot(&f, &z).abs().max(dot(&g, &z).abs()));
        }
    }
    let margin = best - eps;
    Ok(Obstruction {
        basis: [unit(n, p, 1.0), unit(n, q, 1.0)],
        margin,
        trivial_intersection: margin > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{preset_space, Preset};

    #[test]
    fn shared_support_gives_kernel_plane() {
        let s = preset_space(&Preset::Linf(3)).unwrap();
        let x = [1.0, 0.2, 0.3];
        let y = [1.0, -0.4, 0.1];
        let cert = contains_hyperspace_witness(&s, &x, &y, &OrthoConfig::with_epsilon(0.0).unwrap())
            .unwrap()
            .expect("ker f works");
        for e in &cert.checked_extremes {
            assert!(e.point[0].abs() < 1e-9);
        }
    }

    #[test]
    fn linf3_has_no_certificate() {
        let s = preset_space(&Preset::Linf(3)).unwrap();
        let (x, y) = ([1.0, 0.2, 0.3], [0.2, 1.0, 0.3]);
        let cfg = OrthoConfig::with_epsilon(0.6).unwrap();
        assert!(contains_hyperspace_witness(&s, &x, &y, &cfg).unwrap().is_none());
        let o = coordinate_obstruction(&s, &x, &y, 0.6).unwrap();
        assert!((o.margin - 0.4).abs() < 1e-12 && o.trivial_intersection);
        assert_eq!(o.basis, [vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
    }

    #[test]
    fn l1_obstruction() {
        let s = preset_space(&Preset::L1(3)).unwrap();
        let o = coordinate_obstruction(&s, &[1.0, 2.0, 3.0], &[1.0, -2.0, 3.0], 0.9).unwrap();
        assert!((o.margin - 0.1).abs() < 1e-12);
    }

    #[test]
    fn wrong_dimension() {
        let s = preset_space(&Preset::Linf(2)).unwrap();
        let err = contains_hyperspace_witness(&s, &[1.0, 0.0], &[0.0, 1.0], &OrthoConfig::default()).unwrap_err();
        assert_eq!(err, Error::UnsupportedDimension { expected: 3, found: 2 });
    }
}
