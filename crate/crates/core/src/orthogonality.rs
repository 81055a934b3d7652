//! Birkhoff-James and approximate orthogonality.
//!
//! Two independent deciders are provided. [`is_eps_orthogonal`] uses the
//! supporting-functional characterization: `x` is `eps`-orthogonal to `y`
//! iff some `f` in `J(x)` has `|f(y)| <= eps ||y||`.
//! [`is_eps_orthogonal_definitional`] only evaluates norms along the line
//! `x + lambda y`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{axpy, kernel_crossings, null_space};
use crate::sampling;
use crate::scalar::rank_svd;
use crate::space::{check_dim, Face, PolyhedralSpace, Space, Structure};

#[derive(Clone, Debug, PartialEq)]
pub struct OrthoConfig {
    pub epsilon: f64,
    pub tol: f64,
    /// Multiplier on the provable bracket for the line search.
    pub bracket_factor: f64,
    /// The line search stops at bracket / grid.
    pub grid: u32,
}

impl Default for OrthoConfig {
    fn default() -> Self {
        OrthoConfig {
            epsilon: 0.0,
            tol: 1e-9,
            bracket_factor: 2.0,
            grid: 1 << 20,
        }
    }
}

impl OrthoConfig {
    pub fn with_epsilon(epsilon: f64) -> Result<Self> {
        let cfg = OrthoConfig {
            epsilon,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::BadEpsilon(self.epsilon));
        }
        Ok(())
    }
}

/// A boolean verdict with its achieved margin. Positive margins hold with
/// room to spare; `|margin| < 10 tol` is a boundary tie.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Decision {
    pub holds: bool,
    pub margin: f64,
}

impl Decision {
    pub fn is_tie(&self, tol: f64) -> bool {
        self.margin.abs() < 10.0 * tol
    }
}

/// Min and max of `f(y)` over `f` in `J(x)`.
pub fn support_range(space: &Space, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    check_dim(space.dim(), y)?;
    Ok(space.support_set(x)?.range(y))
}

/// `min |f(y)|` over `f` in `J(x)`.
pub fn min_support(space: &Space, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(space.dim(), y)?;
    Ok(space.support_set(x)?.min_abs(y))
}

pub fn is_bj_orthogonal(space: &Space, x: &[f64], y: &[f64], cfg: &OrthoConfig) -> Result<Decision> {
    let cfg = OrthoConfig {
        epsilon: 0.0,
        ..cfg.clone()
    };
    is_eps_orthogonal(space, x, y, &cfg)
}

/// Support-set test. The margin is `eps - min |f(y)| / ||y||`; the verdict
/// holds when the margin is at least `-tol`.
pub fn is_eps_orthogonal(space: &Space, x: &[f64], y: &[f64], cfg: &OrthoConfig) -> Result<Decision> {
    cfg.validate()?;
    let set = space.support_set(x)?;
    check_dim(space.dim(), y)?;
    let ny = space.norm_unchecked(y);
    if ny <= cfg.tol {
        return Ok(Decision {
            holds: true,
            margin: 1.0,
        });
    }
    let margin = cfg.epsilon - set.min_abs(y) / ny;
    Ok(Decision {
        holds: margin >= -cfg.tol,
        margin,
    })
}

/// Definition-based test on `phi(l) = ||x + l y||^2 + 2 eps |l| - 1` for unit
/// `x` and `y`.
///
/// `phi` is convex on each half-line with `phi(0) = 0`, so it stays
/// nonnegative iff its one-sided slopes at 0 do. Each half is minimized by
/// ternary search down to `bracket / grid`, and the slope is estimated from
/// the secant `phi(l) / l` at that scale with one Richardson step. The raw
/// minimum alone cannot separate near-ties: its deficit is quadratic in the
/// margin.
pub fn is_eps_orthogonal_definitional(space: &Space, x: &[f64], y: &[f64], cfg: &OrthoConfig) -> Result<Decision> {
    cfg.validate()?;
    let xn = space.normalize(x)?;
    let yn = space.normalize(y)?;
    let eps = cfg.epsilon;
    let phi = |l: f64| {
        let n = space.norm_unchecked(&axpy(l, &yn, &xn));
        (n - 1.0) * (n + 1.0) + 2.0 * eps * l.abs()
    };
    let bracket = cfg.bracket_factor * (1.0 + eps) * 2.0;
    let step = bracket / cfg.grid.max(1) as f64;

    let mut deficit = 0.0_f64;
    let mut margin = f64::INFINITY;
    for sign in [1.0, -1.0] {
        let f = |l: f64| phi(sign * l);
        let (mut a, mut b) = (0.0, bracket);
        while b - a > step {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if f(m1) <= f(m2) {
                b = m2;
            } else {
                a = m1;
            }
        }
        deficit = deficit.min(f(a).min(f(b)).min(f((a + b) / 2.0)));
        margin = margin.min(slope_at_zero(&f, step) / 2.0);
    }
    Ok(Decision {
        holds: deficit >= -cfg.tol && margin >= -cfg.tol,
        margin,
    })
}

/// Right slope at 0 of a convex `f` with `f(0) = 0`. A kink just right of 0
/// shows up as curvature in `f(l) / l`; the step is then shrunk, but not to
/// the point where rounding in `f` dominates.
fn slope_at_zero(f: &dyn Fn(f64) -> f64, step: f64) -> f64 {
    let mut l = step;
    let mut estimate = 0.0;
    for _ in 0..3 {
        let p1 = f(l) / l;
        let p2 = f(2.0 * l) / (2.0 * l);
        let p3 = f(3.0 * l) / (3.0 * l);
        estimate = 2.0 * p1 - p2;
        if (p3 - 2.0 * p2 + p1).abs() <= 1e-13 / l {
            break;
        }
        l /= 4.0;
    }
    estimate
}

/// A nonzero `y` with `x ⊥_B y`, taken from `ker f` for the first `f` in
/// `J(x)`.
pub fn bj_orthogonal_direction(space: &Space, x: &[f64]) -> Result<Vec<f64>> {
    let set = space.support_set(x)?;
    let n = space.dim();
    let f: Vec<f64> = match &set.face {
        Face::Extremes { functionals, .. } => functionals[0].0.clone(),
        Face::SignPattern { signs, .. } => signs.iter().map(|&s| if s < 0 { -1.0 } else { 1.0 }).collect(),
    };
    let fx: f64 = f.iter().zip(x).map(|(a, b)| a * b).sum();
    (0..n)
        .map(|i| {
            let mut y = vec![0.0; n];
            y[i] = 1.0;
            axpy(-f[i] / fx, x, &y)
        })
        .max_by(|a, b| space.norm_unchecked(a).total_cmp(&space.norm_unchecked(b)))
        .ok_or(Error::ZeroVector)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    /// `max |f(z)|` over `z` in `ker g`, `||z|| = 1`.
    pub k1: f64,
    /// `max |g(w)|` over `w` in `ker f`, `||w|| = 1`.
    pub k2: f64,
    /// `min(k1, k2) / 2`.
    pub eps_fg: f64,
}

fn k_value(space: &PolyhedralSpace<f64>, f: &[f64], g: &[f64]) -> f64 {
    kernel_crossings(space, g)
        .iter()
        .map(|z| crate::geom::dot(f, z).abs())
        .fold(0.0, f64::max)
}

/// Sampled `max |f(z)| / ||z||` over `z` in `ker g`: 4096 seeded directions
/// followed by 400 shrinking random-perturbation steps from the best one.
fn k_value_sampled(space: &Space, f: &[f64], g: &[f64]) -> f64 {
    let n = space.dim();
    let basis = null_space(&[g.to_vec()], n, 1e-12);
    let point = |c: &[f64]| -> Vec<f64> {
        let mut z = vec![0.0; n];
        for (ci, b) in c.iter().zip(&basis) {
            for k in 0..n {
                z[k] += ci * b[k];
            }
        }
        z
    };
    let value = |c: &[f64]| {
        let z = point(c);
        let nz = space.norm_unchecked(&z);
        if nz == 0.0 {
            0.0
        } else {
            crate::geom::dot(f, &z).abs() / nz
        }
    };
    let mut rng = sampling::rng(0x6b31);
    let mut best = vec![0.0; basis.len()];
    let mut best_val = -1.0;
    for _ in 0..4096 {
        let c = sampling::gaussian(&mut rng, basis.len());
        let v = value(&c);
        if v > best_val {
            best_val = v;
            best = c;
        }
    }
    let mut radius = 0.5;
    for _ in 0..400 {
        let d = sampling::gaussian(&mut rng, basis.len());
        let scale = crate::geom::euclid(&best);
        let c: Vec<f64> = best.iter().zip(&d).map(|(b, di)| b + radius * scale * di).collect();
        let v = value(&c);
        if v > best_val {
            best_val = v;
            best = c;
        } else {
            radius *= 0.97;
        }
    }
    best_val
}

/// `K1`, `K2` and `eps_fg = min(K1, K2) / 2` for independent norm-one
/// functionals. Polyhedral slices are exact; smooth `lp` slices are sampled.
pub fn hyperspace_threshold(space: &Space, f: &[f64], g: &[f64]) -> Result<Thresholds> {
    check_dim(space.dim(), f)?;
    check_dim(space.dim(), g)?;
    if rank_svd(&[f.to_vec(), g.to_vec()], 1e-9) < 2 {
        return Err(Error::DependentFunctionals);
    }
    for h in [f, g] {
        let d = space.dual_norm(h)?;
        if (d - 1.0).abs() > 1e-6 {
            return Err(Error::HypothesisUnmet(format!("functional has dual norm {d}, expected 1")));
        }
    }
    let (k1, k2) = match polyhedral_view(space) {
        Some(p) => (k_value(&p, f, g), k_value(&p, g, f)),
        None => (k_value_sampled(space, f, g), k_value_sampled(space, g, f)),
    };
    Ok(Thresholds {
        k1,
        k2,
        eps_fg: 0.5 * k1.min(k2),
    })
}

pub(crate) fn polyhedral_view(space: &Space) -> Option<PolyhedralSpace<f64>> {
    match space {
        Space::Polyhedral(p) => Some(p.clone()),
        Space::Lp(l) => l.to_polyhedral(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsilonX {
    pub value: f64,
    /// The pairwise minimum, when computed; it differs from `value` only
    /// when the `l_inf` / `l_1` convention applies.
    pub formula: Option<f64>,
    pub overridden: bool,
}

/// Work bound (pairs times slice points) beyond which the formula value is
/// skipped for `l_inf` / `l_1`, where it is informational only.
const FORMULA_BUDGET: usize = 50_000_000;

/// Pairwise minimum of `eps_fg` over linearly independent dual vertices.
pub fn epsilon_x_formula(space: &PolyhedralSpace<f64>) -> f64 {
    let duals = space.dual_vertices();
    let crossings: Vec<Vec<Vec<f64>>> = duals.iter().map(|g| kernel_crossings(space, g)).collect();
    let k = |f: usize, g: usize| {
        crossings[g]
            .iter()
            .map(|z| duals[f].apply(z).abs())
            .fold(0.0, f64::max)
    };
    let mut best = f64::INFINITY;
    for i in 0..duals.len() {
        for j in (i + 1)..duals.len() {
            if j == space.dual_antipode(i) || rank_svd(&[duals[i].0.clone(), duals[j].0.clone()], 1e-9) < 2 {
                continue;
            }
            best = best.min(0.5 * k(i, j).min(k(j, i)));
        }
    }
    best
}

/// The space constant `eps_X`. For `l_inf^n` and `l_1^n` it is 1 by
/// convention; the pairwise formula is still reported when affordable.
pub fn epsilon_x(space: &Space) -> Result<EpsilonX> {
    let poly = polyhedral_view(space).ok_or_else(|| {
        Error::UnsupportedSpace("eps_X needs a polyhedral space or the l_inf / l_1 convention".into())
    })?;
    let overridden = matches!(poly.structure(), Structure::Cube | Structure::CrossPolytope);
    if !overridden {
        let v = epsilon_x_formula(&poly);
        return Ok(EpsilonX {
            value: v,
            formula: Some(v),
            overridden: false,
        });
    }
    let f = poly.dual_vertices().len();
    let work = f.saturating_mul(f).saturating_mul(poly.vertices().len().saturating_mul(poly.vertices().len()));
    let formula = (work <= FORMULA_BUDGET).then(|| epsilon_x_formula(&poly));
    Ok(EpsilonX {
        value: 1.0,
        formula,
        overridden: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{preset_space, Exponent, LpSpace, Preset};

    fn linf(n: usize) -> Space {
        preset_space(&Preset::Linf(n)).unwrap()
    }

    fn cfg(eps: f64) -> OrthoConfig {
        OrthoConfig::with_epsilon(eps).unwrap()
    }

    /// Dense grid on the definition itself, independent of both deciders.
    fn grid_min_phi(space: &Space, x: &[f64], y: &[f64], eps: f64) -> f64 {
        let nx = space.norm(x).unwrap();
        let ny = space.norm(y).unwrap();
        (-40000..=40000)
            .map(|k| {
                let l = k as f64 * 1e-4;
                let n = space.norm(&axpy(l, y, x)).unwrap();
                n * n - nx * nx + 2.0 * eps * nx * l.abs() * ny
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn support_range_examples() {
        assert_eq!(support_range(&linf(3), &[1.0, 1.0, 1.0], &[1.0, -1.0, 0.0]).unwrap(), (-1.0, 1.0));
        let l2: Space = LpSpace::new(3, Exponent::Finite(2.0)).unwrap().into();
        let (lo, hi) = support_range(&l2, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert!(lo.abs() < 1e-15 && hi.abs() < 1e-15);
        assert_eq!(support_range(&linf(2), &[0.0, 0.0], &[1.0, 0.0]).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn bj_examples() {
        let s = linf(2);
        assert!(is_bj_orthogonal(&s, &[1.0, 0.3], &[0.0, 0.0], &cfg(0.0)).unwrap().holds);
        assert!(is_bj_orthogonal(&s, &[1.0, 0.3], &[0.0, 1.0], &cfg(0.0)).unwrap().holds);
        assert!(grid_min_phi(&s, &[1.0, 0.3], &[0.0, 1.0], 0.0) >= -1e-12);
        let l3: Space = LpSpace::new(5, Exponent::Finite(3.0)).unwrap().into();
        let x = [1.0; 5];
        let y = [4.0, -1.0, -1.0, -1.0, -1.0];
        assert!(is_bj_orthogonal(&l3, &x, &y, &cfg(0.0)).unwrap().holds);
        assert!(grid_min_phi(&l3, &x, &y, 0.0) >= -1e-9);
        let sip = l3.as_lp().unwrap().semi_inner_product(&y, &x).unwrap();
        assert!(sip.abs() < 1e-12);
    }

    #[test]
    fn eps_examples_linf2() {
        let s = linf(2);
        let (x, y) = ([1.0, 0.3], [0.2, 1.0]);
        for (eps, expect) in [(0.19, false), (0.21, true)] {
            let c = cfg(eps);
            assert_eq!(is_eps_orthogonal(&s, &x, &y, &c).unwrap().holds, expect);
            assert_eq!(is_eps_orthogonal_definitional(&s, &x, &y, &c).unwrap().holds, expect);
            assert_eq!(grid_min_phi(&s, &x, &y, eps) >= -1e-12, expect);
        }
        let c = cfg(0.5);
        assert!(!is_eps_orthogonal(&s, &x, &x, &c).unwrap().holds);
        assert!(!is_eps_orthogonal_definitional(&s, &x, &x, &c).unwrap().holds);
        assert_eq!(OrthoConfig::with_epsilon(1.0).unwrap_err(), Error::BadEpsilon(1.0));
    }

    #[test]
    fn definitional_resolves_near_ties() {
        // min-support 0.2 exactly; margins of +-2e-8 must be separated
        let s = linf(2);
        let (x, y) = ([1.0, 0.3], [0.2, 1.0]);
        assert!(is_eps_orthogonal_definitional(&s, &x, &y, &cfg(0.2 + 2e-8)).unwrap().holds);
        assert!(!is_eps_orthogonal_definitional(&s, &x, &y, &cfg(0.2 - 2e-8)).unwrap().holds);
    }

    #[test]
    fn thresholds() {
        let t = hyperspace_threshold(&linf(2), &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!((t.k1, t.k2, t.eps_fg), (1.0, 1.0, 0.5));
        let t = hyperspace_threshold(&linf(3), &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!((t.k1, t.k2), (1.0, 1.0));
        assert_eq!(
            hyperspace_threshold(&linf(2), &[1.0, 0.0], &[-1.0, 0.0]).unwrap_err(),
            Error::DependentFunctionals
        );
        let l2: Space = LpSpace::new(3, Exponent::Finite(2.0)).unwrap().into();
        let t = hyperspace_threshold(&l2, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert!((t.k1 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn epsilon_x_values() {
        let e = epsilon_x(&linf(3)).unwrap();
        assert_eq!(e.value, 1.0);
        assert!(e.overridden && e.formula.is_some());
        let e = epsilon_x(&preset_space(&Preset::L1(3)).unwrap()).unwrap();
        assert_eq!(e.value, 1.0);
        let oct = epsilon_x(&preset_space(&Preset::Regular2nGon(4)).unwrap()).unwrap();
        assert!(oct.value > 0.0 && oct.value <= 1.0 && !oct.overridden);
        let l3: Space = LpSpace::new(3, Exponent::Finite(3.0)).unwrap().into();
        assert!(matches!(epsilon_x(&l3), Err(Error::UnsupportedSpace(_))));
    }

    #[test]
    fn orthogonal_direction_exists() {
        let s = preset_space(&Preset::OctagonalPrism).unwrap();
        let x = [0.3, -0.2, 0.9];
        let y = bj_orthogonal_direction(&s, &x).unwrap();
        assert!(s.norm(&y).unwrap() > 0.1);
        assert!(is_bj_orthogonal(&s, &x, &y, &OrthoConfig::default()).unwrap().holds);
    }
}
