//! Scalar abstraction shared by the exact (rational) and float code paths,
//! plus the handful of dense linear-algebra kernels the geometry needs.

use std::fmt::Debug;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub type Rational = BigRational;

/// Field element usable by the polyhedral machinery.
///
/// `f64` is the float mode; [`Rational`] is the exact mode, where every
/// tolerance is zero and comparisons are exact.
pub trait Scalar: Clone + Debug + PartialOrd + Signed + Send + Sync + 'static {
    const EXACT: bool;

    fn to_f64(&self) -> f64;
    fn from_int(v: i64) -> Self;
    /// Exact conversion for rationals (the binary value of the float).
    fn from_f64(v: f64) -> Option<Self>;
    /// Rank of the matrix whose rows are `rows`.
    fn rank(rows: &[Vec<Self>], tol: &Self) -> usize;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn rank(rows: &[Vec<f64>], tol: &f64) -> usize {
        rank_svd(rows, *tol)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Option<Self> {
        <Rational as FromPrimitive>::from_f64(v)
    }

    fn rank(rows: &[Vec<Rational>], tol: &Rational) -> usize {
        rank_elimination(rows, tol)
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn max_abs<S: Scalar>(a: &[S]) -> S {
    a.iter()
        .map(|x| x.abs())
        .fold(S::zero(), |m, x| if x > m { x } else { m })
}

/// Singular values below `tol * sigma_max` count as zero.
pub fn rank_svd(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0_f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    let cutoff = tol.max(f64::EPSILON * 16.0) * top;
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Row-echelon rank; a pivot counts when its magnitude exceeds `tol`.
#[allow(clippy::needless_range_loop)]
pub fn rank_elimination<S: Scalar>(rows: &[Vec<S>], tol: &S) -> usize {
    let mut a: Vec<Vec<S>> = rows.to_vec();
    if a.is_empty() {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    for c in 0..cols {
        if rank == a.len() {
            break;
        }
        let (best, mag) = (rank..a.len())
            .map(|r| (r, a[r][c].abs()))
            .fold((rank, S::zero()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if mag <= *tol || mag.is_zero() {
            continue;
        }
        a.swap(rank, best);
        let pivot = a[rank][c].clone();
        for r in (rank + 1)..a.len() {
            if a[r][c].is_zero() {
                continue;
            }
            let factor = a[r][c].clone() / pivot.clone();
            for k in c..cols {
                let delta = factor.clone() * a[rank][k].clone();
                a[r][k] = a[r][k].clone() - delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot magnitude is at most `pivot_tol`.
#[allow(clippy::needless_range_loop)]
pub fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>, pivot_tol: &S) -> Option<Vec<S>> {
    let n = b.len();
    for c in 0..n {
        let (best, mag) = (c..n)
            .map(|r| (r, a[r][c].abs()))
            .fold((c, S::zero()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if mag <= *pivot_tol || mag.is_zero() {
            return None;
        }
        a.swap(c, best);
        b.swap(c, best);
        let pivot = a[c][c].clone();
        for r in (c + 1)..n {
            if a[r][c].is_zero() {
                continue;
            }
            let factor = a[r][c].clone() / pivot.clone();
            for k in c..n {
                let delta = factor.clone() * a[c][k].clone();
                a[r][k] = a[r][k].clone() - delta;
            }
            let delta = factor * b[c].clone();
            b[r] = b[r].clone() - delta;
        }
    }
    let mut x = vec![S::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for k in (r + 1)..n {
            acc = acc - a[r][k].clone() * x[k].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Some(x)
}

/// Lexicographic k-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in (i + 1)..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn combinations_count() {
        assert_eq!(Combinations::new(5, 3).count(), 10);
        assert_eq!(Combinations::new(4, 4).count(), 1);
        assert_eq!(Combinations::new(3, 4).count(), 0);
        assert_eq!(
            Combinations::new(4, 2).collect::<Vec<_>>(),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn exact_solve_and_rank() {
        let a = vec![vec![q(1, 2), q(1, 3)], vec![q(1, 1), q(-1, 1)]];
        let x = solve(a, vec![q(1, 1), q(0, 1)], &Rational::zero()).unwrap();
        // x = y, x(1/2 + 1/3) = 1
        assert_eq!(x, vec![q(6, 5), q(6, 5)]);

        let rows = vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1)],
            vec![q(0, 1), q(1, 1), q(1, 1)],
        ];
        assert_eq!(rank_elimination(&rows, &Rational::zero()), 2);
    }

    #[test]
    fn float_rank_threshold() {
        let rows = vec![vec![1.0, 0.0], vec![1.0, 1e-12]];
        assert_eq!(rank_svd(&rows, 1e-9), 1);
        assert_eq!(rank_svd(&rows, 1e-14), 2);
    }

    #[test]
    fn singular_system_rejected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve(a, vec![1.0, 1.0], &1e-12).is_none());
    }
}
