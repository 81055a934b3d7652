use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::lp::{Exponent, LpSpace};
use super::polyhedral::{assemble, build_polyhedral, BuildOptions, PolyhedralSpace, Structure};
use super::{Functional, Space, Vector, DEFAULT_TOL};

const POLYGON_RANGE: (usize, usize) = (2, 64);
const LP_RANGE: (usize, usize) = (2, 16);

fn default_tol<S: Scalar>() -> S {
    if S::EXACT {
        S::zero()
    } else {
        S::from_f64(DEFAULT_TOL).unwrap()
    }
}

fn unit<S: Scalar>(n: usize, i: usize, sign: i64) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::from_int(sign);
    v
}

fn sign_vectors<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|i| S::from_int(if mask >> i & 1 == 1 { -1 } else { 1 }))
                .collect()
        })
        .collect()
}

/// `l_inf^n`: vertices `{+-1}^n`, dual vertices `+-e_i`.
pub fn cube<S: Scalar>(n: usize) -> PolyhedralSpace<S> {
    cube_with_tol(n, default_tol())
}

/// `l_1^n`: vertices `+-e_i`, dual vertices `{+-1}^n`.
pub fn cross_polytope<S: Scalar>(n: usize) -> PolyhedralSpace<S> {
    cross_polytope_with_tol(n, default_tol())
}

pub(super) fn cube_with_tol<S: Scalar>(n: usize, tol: S) -> PolyhedralSpace<S> {
    let vertices = sign_vectors::<S>(n);
    let mut duals: Vec<Vec<S>> = (0..n).map(|i| unit(n, i, 1)).collect();
    duals.extend((0..n).map(|i| unit(n, i, -1)));
    let mut space = if n == 2 {
        assemble(n, vertices, duals, tol)
    } else {
        let all = (1usize << n) - 1;
        // vertex `mask` has coordinate i equal to -1 iff bit i is set
        let incidence = (0..2 * n)
            .map(|f| {
                let (i, neg) = (f % n, f >= n);
                (0..=all).filter(|m| (m >> i & 1 == 1) == neg).collect()
            })
            .collect();
        PolyhedralSpace {
            dim: n,
            vertices: vertices.into_iter().map(Vector).collect(),
            dual_vertices: duals.into_iter().map(Functional).collect(),
            incidence,
            tol,
            structure: Structure::General,
            vertex_antipode: (0..=all).map(|m| m ^ all).collect(),
            dual_antipode: (0..2 * n).map(|f| (f + n) % (2 * n)).collect(),
        }
    };
    space.structure = Structure::Cube;
    space
}

pub(super) fn cross_polytope_with_tol<S: Scalar>(n: usize, tol: S) -> PolyhedralSpace<S> {
    let mut vertices: Vec<Vec<S>> = (0..n).map(|i| unit(n, i, 1)).collect();
    vertices.extend((0..n).map(|i| unit(n, i, -1)));
    let duals = sign_vectors::<S>(n);
    let mut space = if n == 2 {
        assemble(n, vertices, duals, tol)
    } else {
        let all = (1usize << n) - 1;
        let incidence = (0..=all)
            .map(|m| (0..n).map(|i| if m >> i & 1 == 1 { i + n } else { i }).collect())
            .collect();
        PolyhedralSpace {
            dim: n,
            vertices: vertices.into_iter().map(Vector).collect(),
            dual_vertices: duals.into_iter().map(Functional).collect(),
            incidence,
            tol,
            structure: Structure::General,
            vertex_antipode: (0..2 * n).map(|v| (v + n) % (2 * n)).collect(),
            dual_antipode: (0..=all).map(|m| m ^ all).collect(),
        }
    };
    space.structure = Structure::CrossPolytope;
    space
}

/// The regular `2n`-gon with vertices `v_j` at angle `(j - 1) pi / n`,
/// `j = 1..2n`. Facet `j` joins `v_j` and `v_{j+1}`.
pub fn regular_polygon(n: usize) -> Result<PolyhedralSpace<f64>> {
    if n < POLYGON_RANGE.0 || n > POLYGON_RANGE.1 {
        return Err(Error::OutOfRange {
            what: "polygon parameter n",
            value: n.to_string(),
        });
    }
    let step = PI / n as f64;
    let vertices = (0..2 * n)
        .map(|j| {
            let t = j as f64 * step;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let r = 1.0 / (step / 2.0).cos();
    let duals = (0..2 * n)
        .map(|j| {
            let t = (j as f64 + 0.5) * step;
            vec![r * t.cos(), r * t.sin()]
        })
        .collect();
    Ok(assemble(2, vertices, duals, DEFAULT_TOL))
}

/// Prism over the regular octagon: vertices `u_i = (c_i, s_i, 1)` and
/// `v_i = (c_i, s_i, -1)`, stored in the order `u_1..u_8, v_1..v_8`.
pub fn octagonal_prism() -> PolyhedralSpace<f64> {
    let mut pts = Vec::with_capacity(16);
    for z in [1.0, -1.0] {
        for i in 0..8 {
            let t = i as f64 * PI / 4.0;
            pts.push(vec![t.cos(), t.sin(), z]);
        }
    }
    build_polyhedral(&pts, &BuildOptions::float()).expect("prism vertices are well-formed")
}

/// Named spaces available without an input file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Preset {
    Linf(usize),
    L1(usize),
    /// Regular `2n`-gon.
    Regular2nGon(usize),
    OctagonalPrism,
    Lp(usize, Exponent),
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Linf(n) => write!(f, "linf({n})"),
            Preset::L1(n) => write!(f, "l1({n})"),
            Preset::Regular2nGon(n) => write!(f, "regular_2n_gon({n})"),
            Preset::OctagonalPrism => write!(f, "octagonal_prism"),
            Preset::Lp(n, p) => write!(f, "lp({n},{p})"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let unknown = || Error::UnknownPreset(s.clone());
        if s == "octagonal_prism" {
            return Ok(Preset::OctagonalPrism);
        }
        let (name, rest) = s.split_once('(').ok_or_else(unknown)?;
        let args: Vec<&str> = rest.strip_suffix(')').ok_or_else(unknown)?.split(',').collect();
        let int = |a: &str| {
            a.parse::<usize>().map_err(|_| Error::OutOfRange {
                what: "preset argument",
                value: a.to_string(),
            })
        };
        match (name, args.as_slice()) {
            ("linf", [n]) => Ok(Preset::Linf(int(n)?)),
            ("l1", [n]) => Ok(Preset::L1(int(n)?)),
            ("regular_2n_gon", [n]) => Ok(Preset::Regular2nGon(int(n)?)),
            ("lp", [n, p]) => {
                let p = match *p {
                    "inf" => f64::INFINITY,
                    other => other.parse::<f64>().map_err(|_| Error::OutOfRange {
                        what: "p",
                        value: other.to_string(),
                    })?,
                };
                Ok(Preset::Lp(int(n)?, Exponent::new(p)?))
            }
            _ => Err(unknown()),
        }
    }
}

fn check_range(what: &'static str, n: usize, range: (usize, usize)) -> Result<()> {
    if n < range.0 || n > range.1 {
        return Err(Error::OutOfRange {
            what,
            value: n.to_string(),
        });
    }
    Ok(())
}

/// Float-mode instance of a preset. `linf`/`l1` carry their dual data
/// directly; use [`cube`] or [`cross_polytope`] with `Rational` for exact
/// mode.
pub fn preset_space(preset: &Preset) -> Result<Space> {
    Ok(match *preset {
        Preset::Linf(n) => {
            check_range("dimension", n, LP_RANGE)?;
            cube::<f64>(n).into()
        }
        Preset::L1(n) => {
            check_range("dimension", n, LP_RANGE)?;
            cross_polytope::<f64>(n).into()
        }
        Preset::Regular2nGon(n) => regular_polygon(n)?.into(),
        Preset::OctagonalPrism => octagonal_prism().into(),
        Preset::Lp(n, p) => {
            check_range("dimension", n, LP_RANGE)?;
            LpSpace::new(n, p)?.into()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn octagon_preset() {
        let s = regular_polygon(4).unwrap();
        let h = 0.5f64.sqrt();
        assert!((s.vertices()[1][0] - h).abs() < 1e-15 && (s.vertices()[1][1] - h).abs() < 1e-15);
        assert_eq!(s.dual_vertices().len(), 8);
        assert_eq!(s.facet(0), &[0, 1]);
        for v in s.vertices() {
            assert!((s.norm(v).unwrap() - 1.0).abs() < 1e-12);
        }
        for f in s.dual_vertices() {
            assert!((s.dual_norm(f).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cube_preset_matches_hull() {
        for n in 2..=4 {
            let c = cube::<f64>(n);
            let pts: Vec<Vec<f64>> = c.vertices().iter().map(|v| v.0.clone()).collect();
            let h = build_polyhedral(&pts, &BuildOptions { tol: 1e-9, close_under_negation: true }).unwrap();
            assert_eq!(h.structure(), Structure::Cube);
            assert_eq!(h.dual_vertices().len(), 2 * n);
            for (f, inc) in c.dual_vertices().iter().zip(c.incidence()) {
                assert_eq!(inc.len(), 1 << (n - 1));
                for &v in inc {
                    assert_eq!(f.apply(&c.vertices()[v]), 1.0);
                }
            }
            for v in 0..c.vertices().len() {
                let a = c.vertex_antipode(v);
                assert_eq!(c.vertices()[a].0, c.vertices()[v].neg().0);
            }
        }
    }

    #[test]
    fn cross_polytope_exact() {
        let c = cross_polytope::<Rational>(3);
        assert_eq!(c.dual_vertices().len(), 8);
        assert!(c.incidence().iter().all(|f| f.len() == 3));
        for f in 0..8 {
            assert_eq!(c.dual_vertices()[c.dual_antipode(f)], c.dual_vertices()[f].neg());
        }
    }

    #[test]
    fn prism_has_ten_facets() {
        let p = octagonal_prism();
        assert_eq!(p.vertices().len(), 16);
        assert_eq!(p.dual_vertices().len(), 10);
        let sides = p.incidence().iter().filter(|f| f.len() == 4).count();
        assert_eq!(sides, 8);
    }

    #[test]
    fn parse_presets() {
        assert_eq!("linf(3)".parse::<Preset>().unwrap(), Preset::Linf(3));
        assert_eq!("lp(4, inf)".parse::<Preset>().unwrap(), Preset::Lp(4, Exponent::Infinity));
        assert_eq!("lp(4,1.5)".parse::<Preset>().unwrap(), Preset::Lp(4, Exponent::Finite(1.5)));
        assert!(matches!("foo(2)".parse::<Preset>(), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset_space(&Preset::Regular2nGon(65)), Err(Error::OutOfRange { .. })));
        assert!(matches!(preset_space(&Preset::Lp(17, Exponent::Infinity)), Err(Error::OutOfRange { .. })));
        let p = Preset::Lp(3, Exponent::Finite(1.5));
        assert_eq!(p.to_string().parse::<Preset>().unwrap(), p);
    }
}
