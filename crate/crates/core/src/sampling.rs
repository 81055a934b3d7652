//! Seeded random inputs. Every randomized procedure takes a seed and draws
//! from a ChaCha8 stream, so results are reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::space::{build_polyhedral, BuildOptions, PolyhedralSpace, Space};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// A random point of the unit sphere of `space`. The direction is
/// rotation-invariant, the radius is normalized in the space's own norm.
pub fn sphere_point(space: &Space, rng: &mut SeededRng) -> Vec<f64> {
    loop {
        let g = gaussian(rng, space.dim());
        let n = space.norm_unchecked(&g);
        if n > 1e-6 {
            return g.iter().map(|c| c / n).collect();
        }
    }
}

/// `k` nearly uniform unit vectors on the Euclidean 2-sphere.
pub fn fibonacci_sphere(k: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..k)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / k as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            [r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

/// The symmetric hull of `points` Gaussian points in dimension `dim`.
/// Retries until the points span the space.
/// Points are drawn on the Euclidean sphere so none is interior to the hull.
pub fn random_polyhedral(rng: &mut SeededRng, dim: usize, points: usize) -> PolyhedralSpace<f64> {
    loop {
        let pts: Vec<Vec<f64>> = (0..points.max(dim))
            .map(|_| {
                let g = gaussian(rng, dim);
                let n = g.iter().map(|c| c * c).sum::<f64>().sqrt();
                g.into_iter().map(|c| c / n).collect()
            })
            .collect();
        if let Ok(p) = build_polyhedral(&pts, &BuildOptions::float()) {
            return p;
        }
    }
}
