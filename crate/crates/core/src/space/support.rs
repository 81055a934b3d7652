use crate::scalar::Scalar;

use super::{Functional, Vector};

/// The face `J(x)` of the dual ball, described by its extreme points.
#[derive(Clone, Debug, PartialEq)]
pub enum Face<S = f64> {
    /// Explicit extreme functionals. `labels` holds their dual-vertex indices
    /// when the space is polyhedral.
    Extremes {
        functionals: Vec<Functional<S>>,
        labels: Option<Vec<usize>>,
    },
    /// An `l1` face with `free` coordinates left open: its extreme points are
    /// all `+-1` completions of `signs` on `free`, too many to list.
    SignPattern { signs: Vec<i8>, free: Vec<usize> },
}

/// `Ext J(x)` at a nonzero point together with `||x||`.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportSet<S = f64> {
    pub point: Vector<S>,
    pub value: S,
    pub face: Face<S>,
}

impl<S: Scalar> SupportSet<S> {
    /// Number of extreme supporting functionals, saturating for huge sign faces.
    pub fn extreme_count(&self) -> usize {
        match &self.face {
            Face::Extremes { functionals, .. } => functionals.len(),
            Face::SignPattern { free, .. } => 1usize.checked_shl(free.len() as u32).unwrap_or(usize::MAX),
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.extreme_count() == 1
    }

    pub fn extremes(&self) -> Option<&[Functional<S>]> {
        match &self.face {
            Face::Extremes { functionals, .. } => Some(functionals),
            Face::SignPattern { .. } => None,
        }
    }

    pub fn labels(&self) -> Option<&[usize]> {
        match &self.face {
            Face::Extremes { labels, .. } => labels.as_deref(),
            Face::SignPattern { .. } => None,
        }
    }

    /// Min and max of `f(y)` over `f` in `J(x)`.
    pub fn range(&self, y: &[S]) -> (S, S) {
        match &self.face {
            Face::Extremes { functionals, .. } => {
                let mut it = functionals.iter().map(|f| f.apply(y));
                let first = it.next().expect("support set is never empty");
                it.fold((first.clone(), first), |(lo, hi), v| {
                    let lo = if v < lo { v.clone() } else { lo };
                    let hi = if v > hi { v } else { hi };
                    (lo, hi)
                })
            }
            Face::SignPattern { signs, free } => {
                let mut fixed = S::zero();
                for (i, s) in signs.iter().enumerate() {
                    if *s > 0 {
                        fixed = fixed + y[i].clone();
                    } else if *s < 0 {
                        fixed = fixed - y[i].clone();
                    }
                }
                let slack = free.iter().fold(S::zero(), |acc, &i| acc + y[i].abs());
                (fixed.clone() - slack.clone(), fixed + slack)
            }
        }
    }

    /// `min |f(y)|` over the convex face `J(x)`.
    pub fn min_abs(&self, y: &[S]) -> S {
        let (lo, hi) = self.range(y);
        if lo <= S::zero() && hi >= S::zero() {
            S::zero()
        } else if lo > S::zero() {
            lo
        } else {
            -hi
        }
    }

    /// `dim span J(x)`.
    pub fn smoothness_order(&self, tol: S) -> usize {
        match &self.face {
            Face::Extremes { functionals, .. } => {
                let rows: Vec<Vec<S>> = functionals.iter().map(|f| f.0.clone()).collect();
                S::rank(&rows, &tol)
            }
            // The completions span the base sign vector plus one coordinate
            // direction per free index.
            Face::SignPattern { free, .. } => free.len() + 1,
        }
    }
}
