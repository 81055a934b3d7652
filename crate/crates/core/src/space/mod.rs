//! Finite-dimensional normed spaces: polyhedral norms given by their unit-ball
//! vertices, and the `lp` norms.

mod lp;
mod polyhedral;
mod presets;
mod support;

pub use lp::{Exponent, LpSpace};
pub(crate) use lp::sign_completions;
pub use polyhedral::{build_polyhedral, BuildOptions, PolyhedralSpace, Structure};
pub use presets::{cross_polytope, cube, octagonal_prism, preset_space, regular_polygon, Preset};
pub use support::{Face, SupportSet};

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// A point of the space, stored by coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector<S = f64>(pub Vec<S>);

/// A linear functional, stored by its coefficient vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Functional<S = f64>(pub Vec<S>);

impl<S> Deref for Vector<S> {
    type Target = [S];
    fn deref(&self) -> &[S] {
        &self.0
    }
}

impl<S> Deref for Functional<S> {
    type Target = [S];
    fn deref(&self) -> &[S] {
        &self.0
    }
}

impl<S> From<Vec<S>> for Vector<S> {
    fn from(v: Vec<S>) -> Self {
        Vector(v)
    }
}

impl<S> From<Vec<S>> for Functional<S> {
    fn from(v: Vec<S>) -> Self {
        Functional(v)
    }
}

impl<S: Scalar> Functional<S> {
    pub fn apply(&self, x: &[S]) -> S {
        dot(&self.0, x)
    }

    pub fn neg(&self) -> Self {
        Functional(self.0.iter().map(|c| -c.clone()).collect())
    }
}

impl<S: Scalar> Vector<S> {
    pub fn scaled(&self, k: &S) -> Self {
        Vector(self.0.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        Vector(self.0.iter().map(|c| -c.clone()).collect())
    }
}

impl Functional<f64> {
    pub fn to_vec(&self) -> Vec<f64> {
        self.0.clone()
    }
}

pub(crate) fn check_dim<T>(expected: usize, x: &[T]) -> Result<()> {
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: x.len(),
        });
    }
    Ok(())
}

/// A float-mode space. Exact polyhedral spaces convert into this via
/// [`PolyhedralSpace::to_float`] for the numeric procedures.
#[derive(Clone, Debug)]
pub enum Space {
    Polyhedral(PolyhedralSpace<f64>),
    Lp(LpSpace),
}

impl From<PolyhedralSpace<f64>> for Space {
    fn from(p: PolyhedralSpace<f64>) -> Self {
        Space::Polyhedral(p)
    }
}

impl From<LpSpace> for Space {
    fn from(p: LpSpace) -> Self {
        Space::Lp(p)
    }
}

impl Space {
    pub fn dim(&self) -> usize {
        match self {
            Space::Polyhedral(p) => p.dim(),
            Space::Lp(l) => l.dim(),
        }
    }

    pub fn tol(&self) -> f64 {
        match self {
            Space::Polyhedral(p) => *p.tol(),
            Space::Lp(l) => l.tol(),
        }
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        match self {
            Space::Polyhedral(p) => p.norm(x),
            Space::Lp(l) => l.norm(x),
        }
    }

    /// Norm without the dimension check, for hot loops over known-good data.
    pub(crate) fn norm_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            Space::Polyhedral(p) => p.norm_unchecked(x),
            Space::Lp(l) => l.norm_unchecked(x),
        }
    }

    pub fn support_set(&self, x: &[f64]) -> Result<SupportSet<f64>> {
        match self {
            Space::Polyhedral(p) => p.support_set(x),
            Space::Lp(l) => l.support_set(x),
        }
    }

    pub fn smoothness_order(&self, x: &[f64]) -> Result<usize> {
        Ok(self.support_set(x)?.smoothness_order(self.tol()))
    }

    /// Operator norm of `f` as a functional on this space.
    pub fn dual_norm(&self, f: &[f64]) -> Result<f64> {
        match self {
            Space::Polyhedral(p) => p.dual_norm(f),
            Space::Lp(l) => l.dual_norm(f),
        }
    }

    pub fn as_polyhedral(&self) -> Option<&PolyhedralSpace<f64>> {
        match self {
            Space::Polyhedral(p) => Some(p),
            Space::Lp(_) => None,
        }
    }

    pub fn as_lp(&self) -> Option<&LpSpace> {
        match self {
            Space::Lp(l) => Some(l),
            Space::Polyhedral(_) => None,
        }
    }

    /// `x / ||x||`, or `ZeroVector` when the norm is within tolerance of 0.
    pub fn normalize(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.norm(x)?;
        if n <= self.tol() {
            return Err(Error::ZeroVector);
        }
        Ok(x.iter().map(|c| c / n).collect())
    }

    pub fn describe(&self) -> String {
        match self {
            Space::Polyhedral(p) => format!(
                "polyhedral dim={} vertices={} facets={} structure={:?}",
                p.dim(),
                p.vertices().len(),
                p.dual_vertices().len(),
                p.structure()
            ),
            Space::Lp(l) => format!("lp dim={} p={}", l.dim(), l.exponent()),
        }
    }
}
