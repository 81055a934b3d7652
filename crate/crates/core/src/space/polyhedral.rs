//! Polyhedral norms: the unit ball is a centrally symmetric polytope given by
//! its vertices, and the norm is evaluated through the facet functionals
//! (the vertices of the dual ball).

use log::warn;

use crate::error::{Error, Result};
use crate::scalar::{dot, max_abs, solve, Combinations, Rational, Scalar};

use super::presets::{cross_polytope_with_tol, cube_with_tol};
use super::support::{Face, SupportSet};
use super::{check_dim, Functional, Mode, Vector, DEFAULT_TOL};

/// Largest dimension for which `l1`-type faces are listed explicitly.
pub const SIGN_FACE_LIST_MAX_DIM: usize = 8;

/// Recognized special shapes. They get closed-form norm and support paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    General,
    /// `l_inf^n` ball.
    Cube,
    /// `l_1^n` ball.
    CrossPolytope,
}

#[derive(Clone, Debug)]
pub struct BuildOptions<S> {
    pub tol: S,
    /// Add `-v` for every input point `v` instead of rejecting asymmetric input.
    pub close_under_negation: bool,
}

impl BuildOptions<f64> {
    pub fn float() -> Self {
        BuildOptions {
            tol: DEFAULT_TOL,
            close_under_negation: true,
        }
    }
}

impl BuildOptions<Rational> {
    pub fn exact() -> Self {
        BuildOptions {
            tol: Rational::from_int(0),
            close_under_negation: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PolyhedralSpace<S = f64> {
    pub(super) dim: usize,
    pub(super) vertices: Vec<Vector<S>>,
    pub(super) dual_vertices: Vec<Functional<S>>,
    /// For each dual vertex, the indices of the vertices on its facet.
    pub(super) incidence: Vec<Vec<usize>>,
    pub(super) tol: S,
    pub(super) structure: Structure,
    pub(super) vertex_antipode: Vec<usize>,
    pub(super) dual_antipode: Vec<usize>,
}

impl<S: Scalar> PolyhedralSpace<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        if S::EXACT {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    pub fn tol(&self) -> &S {
        &self.tol
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    /// `Ext B_X`.
    pub fn vertices(&self) -> &[Vector<S>] {
        &self.vertices
    }

    /// `Ext B_X*`, one functional per facet.
    pub fn dual_vertices(&self) -> &[Functional<S>] {
        &self.dual_vertices
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// Facet vertex indices of dual vertex `f`.
    pub fn facet(&self, f: usize) -> &[usize] {
        &self.incidence[f]
    }

    /// Index of `-v` for vertex `v`.
    pub fn vertex_antipode(&self, v: usize) -> usize {
        self.vertex_antipode[v]
    }

    /// Index of `-f` for dual vertex `f`.
    pub fn dual_antipode(&self, f: usize) -> usize {
        self.dual_antipode[f]
    }

    pub fn norm(&self, x: &[S]) -> Result<S> {
        check_dim(self.dim, x)?;
        Ok(self.norm_unchecked(x))
    }

    pub(crate) fn norm_unchecked(&self, x: &[S]) -> S {
        match self.structure {
            Structure::Cube => max_abs(x),
            Structure::CrossPolytope => x.iter().fold(S::zero(), |acc, c| acc + c.abs()),
            Structure::General => self
                .dual_vertices
                .iter()
                .map(|f| f.apply(x))
                .fold(S::zero(), |m, v| if v > m { v } else { m }),
        }
    }

    pub fn dual_norm(&self, f: &[S]) -> Result<S> {
        check_dim(self.dim, f)?;
        Ok(self
            .vertices
            .iter()
            .map(|v| dot(f, v))
            .fold(S::zero(), |m, v| if v > m { v } else { m }))
    }

    /// Threshold below `||x||` within which a dual vertex still counts as
    /// supporting: `tol * (1 + ||x||)`.
    pub(crate) fn tie_gap(&self, norm: &S) -> S {
        self.tol.clone() * (S::one() + norm.clone())
    }

    pub fn support_set(&self, x: &[S]) -> Result<SupportSet<S>> {
        check_dim(self.dim, x)?;
        let value = self.norm_unchecked(x);
        if value <= self.tol || value.is_zero() {
            return Err(Error::ZeroVector);
        }
        let cutoff = value.clone() - self.tie_gap(&value);
        if self.structure == Structure::CrossPolytope && self.dim > SIGN_FACE_LIST_MAX_DIM {
            // f = s maximizes iff sum over sign mismatches of 2|x_i| stays
            // within the gap; coordinates that small are left free.
            let half_gap = self.tie_gap(&value) / S::from_int(2);
            let mut signs = Vec::with_capacity(self.dim);
            let mut free = Vec::new();
            for (i, c) in x.iter().enumerate() {
                if c.abs() <= half_gap {
                    signs.push(0);
                    free.push(i);
                } else if *c > S::zero() {
                    signs.push(1);
                } else {
                    signs.push(-1);
                }
            }
            return Ok(SupportSet {
                point: Vector(x.to_vec()),
                value,
                face: Face::SignPattern { signs, free },
            });
        }
        let labels: Vec<usize> = self
            .dual_vertices
            .iter()
            .enumerate()
            .filter(|(_, f)| f.apply(x) >= cutoff)
            .map(|(i, _)| i)
            .collect();
        let functionals = labels.iter().map(|&i| self.dual_vertices[i].clone()).collect();
        Ok(SupportSet {
            point: Vector(x.to_vec()),
            value,
            face: Face::Extremes {
                functionals,
                labels: Some(labels),
            },
        })
    }

    pub fn smoothness_order(&self, x: &[S]) -> Result<usize> {
        Ok(self.support_set(x)?.smoothness_order(self.tol.clone()))
    }

    /// Dual-vertex labels of `Ext J(x)`, i.e. the `f` with `x` in the closure
    /// of the cone region of `f`.
    pub fn extreme_support_labels(&self, x: &[S]) -> Result<Vec<usize>> {
        let s = self.support_set(x)?;
        match s.face {
            Face::Extremes { labels, .. } => Ok(labels.unwrap_or_default()),
            Face::SignPattern { .. } => Err(Error::UnsupportedSpace(
                "support face too large to enumerate labels".into(),
            )),
        }
    }

    /// Indices of facets sharing at least one vertex with facet `f`.
    pub fn neighbors(&self, f: usize) -> Vec<usize> {
        let mine = &self.incidence[f];
        (0..self.dual_vertices.len())
            .filter(|&g| g != f)
            .filter(|&g| self.incidence[g].iter().any(|v| mine.contains(v)))
            .collect()
    }

    /// Index of the dual vertex equal to `f` within tolerance.
    pub fn find_dual_vertex(&self, f: &[S]) -> Option<usize> {
        self.dual_vertices
            .iter()
            .position(|g| close(g, f, &self.tol))
    }

    pub fn find_vertex(&self, v: &[S]) -> Option<usize> {
        self.vertices.iter().position(|w| close(w, v, &self.tol))
    }
}

impl PolyhedralSpace<Rational> {
    pub fn to_float(&self) -> PolyhedralSpace<f64> {
        let conv = |v: &[Rational]| v.iter().map(Scalar::to_f64).collect::<Vec<f64>>();
        PolyhedralSpace {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| Vector(conv(v))).collect(),
            dual_vertices: self.dual_vertices.iter().map(|f| Functional(conv(f))).collect(),
            incidence: self.incidence.clone(),
            tol: DEFAULT_TOL,
            structure: self.structure,
            vertex_antipode: self.vertex_antipode.clone(),
            dual_antipode: self.dual_antipode.clone(),
        }
    }
}

pub(crate) fn close<S: Scalar>(a: &[S], b: &[S], tol: &S) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).abs() <= *tol)
}

fn neg<S: Scalar>(v: &[S]) -> Vec<S> {
    v.iter().map(|c| -c.clone()).collect()
}

/// Builds the polyhedral space whose unit ball is the convex hull of
/// `points`.
///
/// Facets are found by brute force: every `n`-subset of points spans a
/// candidate hyperplane `f = 1`, kept when no point lies beyond it. Points
/// that end up interior to the hull, or on its boundary without being
/// extreme, are dropped with a warning.
pub fn build_polyhedral<S: Scalar>(
    points: &[Vec<S>],
    opts: &BuildOptions<S>,
) -> Result<PolyhedralSpace<S>> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let n = first.len();
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "dimension",
            value: n.to_string(),
        });
    }
    for p in points {
        check_dim(n, p)?;
    }
    let tol = opts.tol.clone();

    let mut pts: Vec<Vec<S>> = Vec::with_capacity(points.len() * 2);
    for p in points {
        if !pts.iter().any(|q| close(q, p, &tol)) {
            pts.push(p.clone());
        }
    }
    let original = pts.len();
    for i in 0..original {
        let m = neg(&pts[i]);
        if !pts.iter().any(|q| close(q, &m, &tol)) {
            if !opts.close_under_negation {
                return Err(Error::AsymmetricInput { index: i });
            }
            pts.push(m);
        }
    }

    let rank = S::rank(&pts, &tol);
    if rank < n {
        return Err(Error::DegenerateSpan { rank, dim: n });
    }

    let scale = pts
        .iter()
        .map(|p| max_abs(p))
        .fold(S::zero(), |m, v| if v > m { v } else { m });
    let pivot_tol = if S::EXACT {
        S::zero()
    } else {
        S::from_f64(1e-12).unwrap() * scale
    };
    let one = S::one();
    let upper = one.clone() + tol.clone();
    let ill_window = tol.clone() * S::from_int(1000);

    let mut facets: Vec<Vec<S>> = Vec::new();
    for subset in Combinations::new(pts.len(), n) {
        let a: Vec<Vec<S>> = subset.iter().map(|&i| pts[i].clone()).collect();
        let Some(f) = solve(a, vec![one.clone(); n], &pivot_tol) else {
            continue;
        };
        if pts.iter().any(|p| dot(&f, p) > upper) {
            continue;
        }
        let mut duplicate = false;
        for (k, g) in facets.iter().enumerate() {
            let fscale = one.clone() + max_abs(&f);
            let dist = f
                .iter()
                .zip(g)
                .map(|(a, b)| (a.clone() - b.clone()).abs())
                .fold(S::zero(), |m, v| if v > m { v } else { m });
            if dist <= tol.clone() * fscale.clone() {
                duplicate = true;
                break;
            }
            if !S::EXACT && dist <= ill_window.clone() * fscale {
                return Err(Error::NumericallyIllConditioned {
                    first: k,
                    second: facets.len(),
                    distance: dist.to_f64(),
                });
            }
        }
        if !duplicate {
            facets.push(f);
        }
    }

    let lower = one.clone() - tol.clone();
    let mut vertices: Vec<Vec<S>> = Vec::new();
    for p in &pts {
        let active: Vec<Vec<S>> = facets
            .iter()
            .filter(|f| dot(f, p) >= lower)
            .cloned()
            .collect();
        if active.is_empty() {
            warn!("discarding interior point {:?}", p);
            continue;
        }
        if S::rank(&active, &tol) < n {
            warn!("discarding non-extreme boundary point {:?}", p);
            continue;
        }
        vertices.push(p.clone());
    }

    let space = assemble(n, vertices, facets, tol);
    Ok(detect_structure(space))
}

/// Fills in incidence and antipode tables; sorts planar data by angle.
pub(super) fn assemble<S: Scalar>(
    n: usize,
    mut vertices: Vec<Vec<S>>,
    mut facets: Vec<Vec<S>>,
    tol: S,
) -> PolyhedralSpace<S> {
    if n == 2 {
        let angle = |v: &Vec<S>| {
            let a = v[1].to_f64().atan2(v[0].to_f64());
            if a < -1e-12 {
                a + 2.0 * std::f64::consts::PI
            } else {
                a.max(0.0)
            }
        };
        vertices.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
        facets.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    }
    let lower = S::one() - tol.clone();
    let incidence: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| {
            vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| dot(f, v) >= lower)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let vertex_antipode = vertices
        .iter()
        .map(|v| {
            let m = neg(v);
            vertices
                .iter()
                .position(|w| close(w, &m, &tol))
                .expect("vertex set is symmetric")
        })
        .collect();
    let dual_antipode = facets
        .iter()
        .map(|f| {
            let m = neg(f);
            facets
                .iter()
                .position(|g| close(g, &m, &tol))
                .expect("facet set is symmetric")
        })
        .collect();
    PolyhedralSpace {
        dim: n,
        vertices: vertices.into_iter().map(Vector).collect(),
        dual_vertices: facets.into_iter().map(Functional).collect(),
        incidence,
        tol,
        structure: Structure::General,
        vertex_antipode,
        dual_antipode,
    }
}

fn detect_structure<S: Scalar>(space: PolyhedralSpace<S>) -> PolyhedralSpace<S> {
    let n = space.dim;
    let tol = space.tol.clone();
    let one = S::one();
    let is_unit = |c: &S| (c.abs() - one.clone()).abs() <= tol;
    let is_zero = |c: &S| c.abs() <= tol;
    if n < 30 && space.vertices.len() == 1usize << n && space.vertices.iter().all(|v| v.iter().all(is_unit)) {
        return cube_with_tol(n, tol);
    }
    if space.vertices.len() == 2 * n
        && space
            .vertices
            .iter()
            .all(|v| v.iter().filter(|c| is_unit(c)).count() == 1 && v.iter().filter(|c| is_zero(c)).count() == n - 1)
    {
        return cross_polytope_with_tol(n, tol);
    }
    space
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn octagon_points() -> Vec<Vec<f64>> {
        (0..8)
            .map(|i| {
                let t = i as f64 * std::f64::consts::FRAC_PI_4;
                vec![t.cos(), t.sin()]
            })
            .collect()
    }

    #[test]
    fn octagon_has_eight_two_vertex_facets() {
        let s = build_polyhedral(&octagon_points(), &BuildOptions::float()).unwrap();
        assert_eq!(s.vertices().len(), 8);
        assert_eq!(s.dual_vertices().len(), 8);
        assert!(s.incidence().iter().all(|f| f.len() == 2));
        for v in s.vertices() {
            assert!((s.norm(v).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cube_is_recognized() {
        let pts: Vec<Vec<f64>> = (0..8)
            .map(|b| (0..3).map(|i| if b >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
            .collect();
        let s = build_polyhedral(&pts, &BuildOptions::float()).unwrap();
        assert_eq!(s.structure(), Structure::Cube);
        assert_eq!(s.dual_vertices().len(), 6);
        assert!(s.incidence().iter().all(|f| f.len() == 4));
    }

    #[test]
    fn interior_and_duplicate_points_dropped() {
        let mut pts = octagon_points();
        pts.push(vec![0.1, 0.2]);
        pts.push(pts[0].clone());
        // midpoint of an edge: on the boundary, not extreme
        pts.push(vec![(1.0 + 0.5f64.sqrt()) / 2.0, 0.5f64.sqrt() / 2.0]);
        let s = build_polyhedral(&pts, &BuildOptions::float()).unwrap();
        assert_eq!(s.vertices().len(), 8);
    }

    #[test]
    fn asymmetric_input_rejected_without_closure() {
        let opts = BuildOptions {
            tol: 1e-9,
            close_under_negation: false,
        };
        let err = build_polyhedral(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]], &opts).unwrap_err();
        assert_eq!(err, Error::AsymmetricInput { index: 1 });
    }

    #[test]
    fn degenerate_and_mismatched_input() {
        let err = build_polyhedral(&[vec![1.0, 1.0], vec![2.0, 2.0]], &BuildOptions::float()).unwrap_err();
        assert_eq!(err, Error::DegenerateSpan { rank: 1, dim: 2 });
        let err = build_polyhedral(&[vec![1.0, 1.0], vec![2.0]], &BuildOptions::float()).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        let err = build_polyhedral::<f64>(&[], &BuildOptions::float()).unwrap_err();
        assert_eq!(err, Error::EmptyInput);
    }

    #[test]
    fn exact_hexagon_from_rationals() {
        let pts = vec![
            vec![q(1, 1), q(0, 1)],
            vec![q(1, 4), q(1, 2)],
            vec![q(-1, 2), q(1, 1)],
        ];
        let s = build_polyhedral(&pts, &BuildOptions::exact()).unwrap();
        assert_eq!(s.mode(), Mode::Exact);
        assert_eq!(s.vertices().len(), 4, "(1/4,1/2) lies on an edge and is dropped");
        for v in s.vertices() {
            assert_eq!(s.norm(v).unwrap(), q(1, 1));
        }
        for f in s.dual_vertices() {
            assert_eq!(s.dual_norm(f).unwrap(), q(1, 1));
        }
    }

    #[test]
    fn support_set_ties_exact() {
        let pts = vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(-1, 1)]];
        let s = build_polyhedral(&pts, &BuildOptions::exact()).unwrap();
        assert_eq!(s.structure(), Structure::Cube);
        let j = s.support_set(&[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(j.extreme_count(), 2);
        assert_eq!(s.smoothness_order(&[q(1, 1), q(1, 1)]).unwrap(), 2);
        let j = s.support_set(&[q(1, 1), q(1, 3)]).unwrap();
        assert_eq!(j.extreme_count(), 1);
        assert_eq!(s.support_set(&[q(0, 1), q(0, 1)]).unwrap_err(), Error::ZeroVector);
    }
}
