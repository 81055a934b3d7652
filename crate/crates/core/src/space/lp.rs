use std::fmt;

use crate::error::{Error, Result};

use super::polyhedral::{PolyhedralSpace, SIGN_FACE_LIST_MAX_DIM};
use super::presets::{cross_polytope_with_tol, cube_with_tol};
use super::support::{Face, SupportSet};
use super::{check_dim, Functional, Vector, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::OutOfRange {
                what: "p",
                value: p.to_string(),
            })
        }
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// `l_p^n` over the reals, float mode only.
#[derive(Clone, Debug)]
pub struct LpSpace {
    dim: usize,
    p: Exponent,
    tol: f64,
}

fn p_norm(x: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => x.iter().fold(0.0_f64, |m, c| m.max(c.abs())),
        Exponent::Finite(1.0) => x.iter().map(|c| c.abs()).sum(),
        Exponent::Finite(p) => {
            // scale by the max modulus to keep |x_i|^p in range
            let m = x.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
            if m == 0.0 {
                return 0.0;
            }
            m * x.iter().map(|c| (c.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }
}

impl LpSpace {
    pub fn new(dim: usize, p: Exponent) -> Result<Self> {
        Self::with_tol(dim, p, DEFAULT_TOL)
    }

    pub fn with_tol(dim: usize, p: Exponent, tol: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::OutOfRange {
                what: "dimension",
                value: dim.to_string(),
            });
        }
        if let Exponent::Finite(v) = p {
            Exponent::new(v)?;
        }
        Ok(LpSpace { dim, p, tol })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn exponent(&self) -> Exponent {
        self.p
    }

    /// True for `1 < p < inf`, where the unit sphere is smooth.
    pub fn is_smooth(&self) -> bool {
        matches!(self.p, Exponent::Finite(p) if p > 1.0)
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x)?;
        Ok(p_norm(x, self.p))
    }

    pub(crate) fn norm_unchecked(&self, x: &[f64]) -> f64 {
        p_norm(x, self.p)
    }

    pub fn dual_norm(&self, f: &[f64]) -> Result<f64> {
        check_dim(self.dim, f)?;
        Ok(p_norm(f, self.p.conjugate()))
    }

    pub fn support_set(&self, x: &[f64]) -> Result<SupportSet<f64>> {
        check_dim(self.dim, x)?;
        let value = p_norm(x, self.p);
        if value <= self.tol {
            return Err(Error::ZeroVector);
        }
        let gap = self.tol * (1.0 + value);
        let face = match self.p {
            Exponent::Infinity => {
                let functionals = (0..self.dim)
                    .filter(|&i| x[i].abs() >= value - gap)
                    .map(|i| {
                        let mut f = vec![0.0; self.dim];
                        f[i] = x[i].signum();
                        Functional(f)
                    })
                    .collect();
                Face::Extremes {
                    functionals,
                    labels: None,
                }
            }
            Exponent::Finite(1.0) => {
                let mut signs = Vec::with_capacity(self.dim);
                let mut free = Vec::new();
                for (i, c) in x.iter().enumerate() {
                    if c.abs() <= gap / 2.0 {
                        signs.push(0i8);
                        free.push(i);
                    } else {
                        signs.push(if *c > 0.0 { 1 } else { -1 });
                    }
                }
                if self.dim > SIGN_FACE_LIST_MAX_DIM {
                    Face::SignPattern { signs, free }
                } else {
                    Face::Extremes {
                        functionals: sign_completions(&signs, &free),
                        labels: None,
                    }
                }
            }
            Exponent::Finite(p) => {
                let f = x
                    .iter()
                    .map(|c| c.signum() * (c.abs() / value).powf(p - 1.0))
                    .collect();
                Face::Extremes {
                    functionals: vec![Functional(f)],
                    labels: None,
                }
            }
        };
        Ok(SupportSet {
            point: Vector(x.to_vec()),
            value,
            face,
        })
    }

    /// The same space as a polyhedral one, for `p = 1` and `p = inf`.
    pub fn to_polyhedral(&self) -> Option<PolyhedralSpace<f64>> {
        match self.p {
            Exponent::Infinity => Some(cube_with_tol(self.dim, self.tol)),
            Exponent::Finite(1.0) => Some(cross_polytope_with_tol(self.dim, self.tol)),
            Exponent::Finite(_) => None,
        }
    }

    /// `[u, v]_p = sum u_i v_i |v_i|^(p-2) / ||v||^(p-2)`, and 0 at `v = 0`.
    pub fn semi_inner_product(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        check_dim(self.dim, u)?;
        check_dim(self.dim, v)?;
        let p = match self.p {
            Exponent::Finite(p) if p > 1.0 => p,
            other => return Err(Error::UnsupportedP(other.to_string())),
        };
        if p == 2.0 {
            return Ok(u.iter().zip(v).map(|(a, b)| a * b).sum());
        }
        let nv = p_norm(v, self.p);
        if nv == 0.0 {
            return Ok(0.0);
        }
        // normalizing each |v_i| by ||v|| first avoids overflow in the powers
        Ok(u
            .iter()
            .zip(v)
            .filter(|(_, b)| **b != 0.0)
            .map(|(a, b)| a * b.signum() * (b.abs() / nv).powf(p - 1.0))
            .sum::<f64>()
            * nv)
    }
}

/// All `+-1` completions of `signs` on the `free` coordinates.
pub(crate) fn sign_completions(signs: &[i8], free: &[usize]) -> Vec<Functional<f64>> {
    let k = free.len();
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0..(1usize << k) {
        let mut f: Vec<f64> = signs.iter().map(|&s| s as f64).collect();
        for (bit, &i) in free.iter().enumerate() {
            f[i] = if mask >> bit & 1 == 1 { -1.0 } else { 1.0 };
        }
        out.push(Functional(f));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(n: usize, p: f64) -> LpSpace {
        LpSpace::new(n, Exponent::new(p).unwrap()).unwrap()
    }

    #[test]
    fn norms() {
        assert_eq!(lp(3, f64::INFINITY).norm(&[0.5, 0.0, 0.0]).unwrap(), 0.5);
        assert_eq!(lp(3, 1.0).norm(&[1.0, -2.0, 0.5]).unwrap(), 3.5);
        assert!((lp(2, 2.0).norm(&[3.0, 4.0]).unwrap() - 5.0).abs() < 1e-12);
        assert!(lp(2, 2.0).norm(&[1.0]).is_err());
    }

    #[test]
    fn semi_inner_product_values() {
        let s = lp(2, 3.0);
        let v = s.semi_inner_product(&[1.0, 1.0], &[2.0, 1.0]).unwrap();
        assert!((v - 5.0 / 9f64.cbrt()).abs() < 1e-12);
        assert_eq!(s.semi_inner_product(&[1.0, 1.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(lp(2, 2.0).semi_inner_product(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert!(matches!(
            lp(2, 1.0).semi_inner_product(&[1.0, 0.0], &[0.0, 1.0]),
            Err(Error::UnsupportedP(_))
        ));
        // p < 2 with a zero coordinate in v
        let v = lp(2, 1.5).semi_inner_product(&[1.0, 1.0], &[1.0, 0.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn support_sets() {
        let s = lp(3, f64::INFINITY);
        assert_eq!(s.support_set(&[1.0, 1.0, 1.0]).unwrap().extreme_count(), 3);
        assert_eq!(s.support_set(&[0.5, 0.0, 0.0]).unwrap().extreme_count(), 1);
        let s = lp(3, 1.0);
        let j = s.support_set(&[1.0, 0.0, -2.0]).unwrap();
        assert_eq!(j.extreme_count(), 2);
        assert_eq!(j.smoothness_order(1e-9), 2);
        let s = lp(10, 1.0);
        let mut x = vec![0.0; 10];
        x[0] = 1.0;
        let j = s.support_set(&x).unwrap();
        assert_eq!(j.extreme_count(), 512);
        assert_eq!(j.smoothness_order(1e-9), 10);
        assert_eq!(j.range(&[0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]), (-2.0, 2.0));
    }
}
