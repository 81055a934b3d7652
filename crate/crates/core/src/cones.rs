//! The decomposition of a polyhedral space into the open cones
//! `A_f = {x : J(x) = {f}}`, one per facet.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{axpy, dot, euclid, scale};
use crate::report::Check;
use crate::sampling::{self, SeededRng};
use crate::space::{check_dim, PolyhedralSpace, Space};

/// `A_f` for dual vertex `label`, with its facet and a point inside.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeRegion {
    pub label: usize,
    pub facet: Vec<usize>,
    /// Vertex centroid of the facet.
    pub representative: Vec<f64>,
    /// Distance inside the facet from the representative to the facet
    /// boundary.
    pub facet_inradius: f64,
    /// Euclidean distance from the representative to the boundary of `A_f`.
    pub cone_inradius: f64,
}

impl ConeRegion {
    /// Perturbation radius for the openness check.
    pub fn delta(&self) -> f64 {
        self.facet_inradius.min(self.cone_inradius) / 4.0
    }
}

fn check_label(space: &PolyhedralSpace<f64>, f: usize) -> Result<()> {
    if f >= space.dual_vertices().len() {
        return Err(Error::OutOfRange {
            what: "dual vertex index",
            value: f.to_string(),
        });
    }
    Ok(())
}

pub fn cone_region(space: &PolyhedralSpace<f64>, f: usize) -> Result<ConeRegion> {
    check_label(space, f)?;
    let n = space.dim();
    let facet = space.facet(f).to_vec();
    let mut c = vec![0.0; n];
    for &v in &facet {
        c = axpy(1.0, &space.vertices()[v], &c);
    }
    let c = scale(&c, 1.0 / facet.len() as f64);
    let fv = &space.dual_vertices()[f];
    let ff = dot(fv, fv);
    let mut facet_r = f64::INFINITY;
    let mut cone_r = f64::INFINITY;
    for (h, hv) in space.dual_vertices().iter().enumerate() {
        if h == f {
            continue;
        }
        let slack = 1.0 - hv.apply(&c);
        // component of h within the facet's hyperplane
        let proj = axpy(-dot(hv, fv) / ff, fv, hv);
        let pn = euclid(&proj);
        if pn > 1e-12 {
            facet_r = facet_r.min(slack / pn);
        }
        let diff: Vec<f64> = fv.iter().zip(hv.iter()).map(|(a, b)| a - b).collect();
        cone_r = cone_r.min((fv.apply(&c) - hv.apply(&c)) / euclid(&diff));
    }
    Ok(ConeRegion {
        label: f,
        facet,
        representative: c,
        facet_inradius: facet_r,
        cone_inradius: cone_r,
    })
}

/// `Ext J(x)` as dual-vertex indices: the `f` with `x` in the closure of
/// `A_f`. A singleton exactly when `x` is in some `A_f`.
pub fn extreme_support_labels(space: &PolyhedralSpace<f64>, x: &[f64]) -> Result<Vec<usize>> {
    space.extreme_support_labels(x)
}

/// `x` lies in the cone over the relative interior of the facet of `f`:
/// `f` attains the norm at `x` and no other dual vertex does.
pub fn conical_hull_membership(space: &PolyhedralSpace<f64>, f: usize, x: &[f64]) -> Result<bool> {
    check_label(space, f)?;
    Ok(space.extreme_support_labels(x)? == [f])
}

/// `τ(A_f)`: the regions whose closures meet that of `A_f` away from 0.
/// `f` itself is not listed.
pub fn neighbors(space: &PolyhedralSpace<f64>, f: usize) -> Result<Vec<usize>> {
    check_label(space, f)?;
    Ok(space.neighbors(f))
}

/// How far `x` sits inside `A_f`: `f(x)` minus the best competing dual
/// vertex, relative to `||x||`. Positive iff `x` is in `A_f` (up to tol).
pub(crate) fn depth(space: &PolyhedralSpace<f64>, f: usize, x: &[f64]) -> f64 {
    let fx = space.dual_vertices()[f].apply(x);
    let other = space
        .dual_vertices()
        .iter()
        .enumerate()
        .filter(|(h, _)| *h != f)
        .map(|(_, h)| h.apply(x))
        .fold(f64::NEG_INFINITY, f64::max);
    (fx - other) / space.norm_unchecked(x).max(1e-300)
}

pub(crate) fn member(space: &PolyhedralSpace<f64>, region: &ConeRegion, rng: &mut SeededRng) -> Vec<f64> {
    let d = sampling::gaussian(rng, space.dim());
    let d = scale(&d, region.delta() * rand::Rng::gen_range(rng, 0.0..1.0) / euclid(&d));
    let r: f64 = rand::Rng::gen_range(rng, 0.1..10.0);
    scale(&axpy(1.0, &d, &region.representative), r)
}

/// Sampled check of the five cone properties for `A_f`: nonempty, open,
/// closed under positive combinations, the closures cover the space, and
/// `closure(A_f) ∩ closure(A_-f) = {0}`.
pub fn region_properties_check(space: &PolyhedralSpace<f64>, f: usize, samples: usize, seed: u64) -> Result<Vec<Check>> {
    let region = cone_region(space, f)?;
    let tol = *space.tol();
    let mut rng = sampling::rng(seed);
    let mut out = Vec::with_capacity(5);

    let d0 = depth(space, f, &region.representative);
    let nonempty = conical_hull_membership(space, f, &region.representative)?;
    out.push(Check::new("nonempty", nonempty && d0 > tol, d0));

    let mut open_margin = f64::INFINITY;
    for _ in 0..samples {
        let d = sampling::gaussian(&mut rng, space.dim());
        let p = axpy(region.delta() / euclid(&d), &d, &region.representative);
        open_margin = open_margin.min(depth(space, f, &p));
    }
    out.push(Check::new("open", open_margin > tol, open_margin));

    let mut cone_margin = f64::INFINITY;
    for _ in 0..samples {
        let a = member(space, &region, &mut rng);
        let b = member(space, &region, &mut rng);
        let (s, t): (f64, f64) = (rand::Rng::gen_range(&mut rng, 0.01..5.0), rand::Rng::gen_range(&mut rng, 0.01..5.0));
        let p = axpy(s, &a, &scale(&b, t));
        cone_margin = cone_margin.min(depth(space, f, &p));
    }
    out.push(Check::new("convex_cone", cone_margin > tol, cone_margin));

    let as_space = Space::Polyhedral(space.clone());
    let neg = space.dual_antipode(f);
    let mut covered = true;
    let mut apart = f64::INFINITY;
    let mut points: Vec<Vec<f64>> = space.vertices().iter().map(|v| v.0.clone()).collect();
    points.extend((0..samples).map(|_| sampling::sphere_point(&as_space, &mut rng)));
    for p in &points {
        let labels = space.extreme_support_labels(p)?;
        covered &= !labels.is_empty();
        // closure membership of f and -f at once would need f(p) = -f(p) = ||p||
        let fp = space.dual_vertices()[f].apply(p);
        let np = space.dual_vertices()[neg].apply(p);
        let norm = space.norm_unchecked(p);
        apart = apart.min((norm - fp).max(norm - np) / norm);
        if labels.contains(&f) && labels.contains(&neg) {
            apart = apart.min(0.0);
        }
    }
    out.push(Check::new("covering", covered, if covered { 1.0 } else { -1.0 }));
    out.push(Check::new("antipodal_disjoint", apart > tol, apart));
    Ok(out)
}

/// Labels of `x` checked against the dimension first, for callers holding
/// a generic [`Space`].
pub fn labels_in(space: &Space, x: &[f64]) -> Result<Vec<usize>> {
    check_dim(space.dim(), x)?;
    match space {
        Space::Polyhedral(p) => p.extreme_support_labels(x),
        Space::Lp(_) => Err(Error::UnsupportedSpace("cone labels need a polyhedral space".into())),
    }
}
