use bjorth::orthogonality::{
    bj_orthogonal_direction, epsilon_x, hyperspace_threshold, is_bj_orthogonal, is_eps_orthogonal,
    is_eps_orthogonal_definitional, OrthoConfig,
};
use bjorth::sampling::{gaussian, random_polyhedral, rng};
use bjorth::scalar::rank_svd;
use bjorth::space::{preset_space, Exponent, Preset, Space};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn cfg(eps: f64) -> OrthoConfig {
    OrthoConfig {
        epsilon: eps,
        tol: TOL,
        ..Default::default()
    }
}

fn space_for(kind: u8, seed: u64) -> Space {
    let mut r = rng(seed);
    match kind % 5 {
        0 => Space::Polyhedral(random_polyhedral(&mut r, 2, 2 + (seed % 5) as usize)),
        1 => Space::Polyhedral(random_polyhedral(&mut r, 3, 3 + (seed % 4) as usize)),
        2 => preset_space(&Preset::Lp(4, Exponent::Finite(1.5))).unwrap(),
        3 => preset_space(&Preset::Lp(4, Exponent::Finite(2.0))).unwrap(),
        _ => preset_space(&Preset::Lp(4, Exponent::Finite(3.0))).unwrap(),
    }
}

/// `y` close to a BJ-orthogonal direction, so both verdicts occur.
fn near_orthogonal(s: &Space, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut r = rng(seed ^ 0xabc);
    let x = gaussian(&mut r, s.dim());
    let y0 = bj_orthogonal_direction(s, &x).unwrap();
    let n = s.norm(&y0).unwrap();
    let noise = gaussian(&mut r, s.dim());
    let k = (seed % 7) as f64 / 10.0;
    let y = y0.iter().zip(&noise).map(|(a, b)| a / n + k * b).collect();
    (x, y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn deciders_agree(kind in any::<u8>(), seed in any::<u64>(), e in 0usize..10) {
        let s = space_for(kind, seed);
        let (x, y) = near_orthogonal(&s, seed);
        let c = cfg(e as f64 / 10.0);
        let a = is_eps_orthogonal(&s, &x, &y, &c).unwrap();
        prop_assume!(!a.is_tie(TOL));
        let b = is_eps_orthogonal_definitional(&s, &x, &y, &c).unwrap();
        prop_assert_eq!(a.holds, b.holds, "margin {}", a.margin);
    }

    #[test]
    fn homogeneous(kind in any::<u8>(), seed in any::<u64>(), eps in 0.0f64..0.95, a in 0.1f64..10.0, b in 0.1f64..10.0, sa: bool, sb: bool) {
        let s = space_for(kind, seed);
        let (x, y) = near_orthogonal(&s, seed);
        let c = cfg(eps);
        let d = is_eps_orthogonal(&s, &x, &y, &c).unwrap();
        prop_assume!(d.holds && !d.is_tie(TOL));
        let a = if sa { -a } else { a };
        let b = if sb { -b } else { b };
        let ax: Vec<f64> = x.iter().map(|v| a * v).collect();
        let by: Vec<f64> = y.iter().map(|v| b * v).collect();
        prop_assert!(is_eps_orthogonal(&s, &ax, &by, &c).unwrap().holds);
    }

    #[test]
    fn monotone_in_eps(kind in any::<u8>(), seed in any::<u64>(), e1 in 0.0f64..0.95, e2 in 0.0f64..0.95) {
        let s = space_for(kind, seed);
        let (x, y) = near_orthogonal(&s, seed);
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        if is_eps_orthogonal(&s, &x, &y, &cfg(lo)).unwrap().holds {
            prop_assert!(is_eps_orthogonal(&s, &x, &y, &cfg(hi)).unwrap().holds);
        }
    }

    #[test]
    fn zero_eps_is_bj(kind in any::<u8>(), seed in any::<u64>()) {
        let s = space_for(kind, seed);
        let (x, y) = near_orthogonal(&s, seed);
        prop_assert_eq!(
            is_eps_orthogonal(&s, &x, &y, &cfg(0.0)).unwrap().holds,
            is_bj_orthogonal(&s, &x, &y, &cfg(0.0)).unwrap().holds
        );
    }

    #[test]
    fn orthogonal_direction_exists(kind in any::<u8>(), seed in any::<u64>()) {
        let s = space_for(kind, seed);
        let x = gaussian(&mut rng(seed), s.dim());
        let y = bj_orthogonal_direction(&s, &x).unwrap();
        prop_assert!(s.norm(&y).unwrap() > TOL);
        prop_assert!(is_bj_orthogonal(&s, &x, &y, &cfg(0.0)).unwrap().holds);
    }

    #[test]
    fn threshold_ranges(seed in any::<u64>(), dim in 2usize..=3) {
        let p = random_polyhedral(&mut rng(seed), dim, dim + 2);
        let duals: Vec<Vec<f64>> = p.dual_vertices().iter().map(|f| f.0.clone()).collect();
        let s = Space::Polyhedral(p);
        for (i, f) in duals.iter().enumerate() {
            for g in &duals[i + 1..] {
                if rank_svd(&[f.clone(), g.clone()], 1e-9) < 2 {
                    continue;
                }
                let t = hyperspace_threshold(&s, f, g).unwrap();
                prop_assert!(t.k1 > 0.0 && t.k1 <= 1.0 + TOL);
                prop_assert!(t.k2 > 0.0 && t.k2 <= 1.0 + TOL);
                prop_assert!(t.eps_fg <= 0.5 + TOL);
            }
        }
        prop_assert!(epsilon_x(&s).unwrap().value <= 1.0);
    }
}
