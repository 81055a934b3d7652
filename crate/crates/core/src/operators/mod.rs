//! Linear operators between spaces and their interaction with approximate
//! orthogonality.

mod families;
mod isometry;
mod preserve;
mod structure;

pub use families::{counterexample_operator, Family};
pub use isometry::is_scalar_isometry;
pub use preserve::{preserves_eps_at, preserves_eps_global, structured_points, verify_witness, witness_search_nonpreservation};
pub use structure::{
    cardinality_checks, consecutive_vertex_check, facet_image_map, three_functional_independence, ConsecutiveReport,
    FacetImage, FacetImageMap, IndependenceCheck, VertexImage,
};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::Space;

#[derive(Clone, Debug)]
pub struct Operator {
    matrix: DMatrix<f64>,
    domain: Space,
    codomain: Space,
}

impl Operator {
    /// `rows` is the `m x n` matrix by rows; `n` is the domain dimension.
    pub fn new(rows: &[Vec<f64>], domain: Space, codomain: Space) -> Result<Self> {
        let m = codomain.dim();
        let n = domain.dim();
        if rows.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: rows.len(),
            });
        }
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
        }
        Ok(Operator {
            matrix: DMatrix::from_fn(m, n, |i, j| rows[i][j]),
            domain,
            codomain,
        })
    }

    /// An operator on a single space.
    pub fn endo(rows: &[Vec<f64>], space: Space) -> Result<Self> {
        Self::new(rows, space.clone(), space)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.matrix.nrows())
            .map(|i| self.matrix.row(i).iter().cloned().collect())
            .collect()
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.matrix.nrows())
            .map(|i| (0..self.matrix.ncols()).map(|j| self.matrix[(i, j)] * x[j]).sum())
            .collect()
    }

    /// `g o T` as a functional on the domain.
    pub fn pull_back(&self, g: &[f64]) -> Vec<f64> {
        (0..self.matrix.ncols())
            .map(|j| (0..self.matrix.nrows()).map(|i| g[i] * self.matrix[(i, j)]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|c| *c == 0.0)
    }

    pub fn rank(&self, tol: f64) -> usize {
        crate::scalar::rank_svd(&self.rows(), tol)
    }

    pub fn scaled(&self, k: f64) -> Operator {
        Operator {
            matrix: &self.matrix * k,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Sampled,
}

impl Method {
    pub fn weaker(self, other: Method) -> Method {
        if self == Method::Sampled || other == Method::Sampled {
            Method::Sampled
        } else {
            Method::Exact
        }
    }
}

/// `x ⊥_B y` but `Tx` not `eps`-orthogonal to `Ty`; `margin` is the
/// (negative) margin of the latter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Number of certified pieces: linear programs solved or samples drawn.
    pub checked: usize,
    pub method: Method,
    /// Worst `eps`-orthogonality margin found over the checked directions.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreservationConfig {
    pub tol: f64,
    /// Random points (global checks) or directions (sampled pointwise checks).
    pub samples: usize,
    pub seed: u64,
}

impl Default for PreservationConfig {
    fn default() -> Self {
        PreservationConfig {
            tol: 1e-9,
            samples: 200,
            seed: 0,
        }
    }
}
