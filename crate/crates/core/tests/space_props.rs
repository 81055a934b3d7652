use bjorth::io::{format_rational, parse_rational};
use bjorth::sampling::{gaussian, random_polyhedral, rng};
use bjorth::scalar::Rational;
use bjorth::space::{build_polyhedral, preset_space, BuildOptions, Exponent, Face, LpSpace, Preset, Space};
use num_bigint::BigInt;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn space_for(kind: u8, seed: u64) -> Space {
    let mut r = rng(seed);
    match kind % 6 {
        0 => Space::Polyhedral(random_polyhedral(&mut r, 2, 3 + (seed % 4) as usize)),
        1 => Space::Polyhedral(random_polyhedral(&mut r, 3, 4 + (seed % 3) as usize)),
        2 => preset_space(&Preset::Regular2nGon(3 + (seed % 4) as usize)).unwrap(),
        3 => preset_space(&Preset::OctagonalPrism).unwrap(),
        4 => preset_space(&Preset::Lp(4, Exponent::Finite(1.5 + (seed % 3) as f64))).unwrap(),
        _ => preset_space(&Preset::Linf(3)).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn duality_round_trip(seed in any::<u64>(), dim in 2usize..=3) {
        let p = random_polyhedral(&mut rng(seed), dim, dim + 3);
        for v in p.vertices() {
            prop_assert!((p.norm(&v.0).unwrap() - 1.0).abs() <= TOL);
        }
        for f in p.dual_vertices() {
            let m = p.vertices().iter().map(|v| f.apply(&v.0)).fold(f64::MIN, f64::max);
            prop_assert!((m - 1.0).abs() <= TOL);
        }
    }

    #[test]
    fn norm_axioms(kind in any::<u8>(), seed in any::<u64>(), a in -5.0f64..5.0) {
        let s = space_for(kind, seed);
        let mut r = rng(seed ^ 0x5eed);
        let x = gaussian(&mut r, s.dim());
        let y = gaussian(&mut r, s.dim());
        let ax: Vec<f64> = x.iter().map(|c| a * c).collect();
        let sum: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        let (nx, ny) = (s.norm(&x).unwrap(), s.norm(&y).unwrap());
        prop_assert!((s.norm(&ax).unwrap() - a.abs() * nx).abs() <= 4.0 * TOL * (1.0 + a.abs() * nx));
        prop_assert!(s.norm(&sum).unwrap() <= nx + ny + 4.0 * TOL);
    }

    #[test]
    fn support_set_is_sharp(kind in any::<u8>(), seed in any::<u64>()) {
        let s = space_for(kind, seed);
        let x = gaussian(&mut rng(seed ^ 7), s.dim());
        let set = s.support_set(&x).unwrap();
        let n = s.norm(&x).unwrap();
        let Face::Extremes { functionals, labels } = &set.face else { unreachable!() };
        prop_assert!(!functionals.is_empty());
        for f in functionals {
            prop_assert!(f.apply(&x) >= n - 2.0 * TOL);
            prop_assert!((s.dual_norm(&f.0).unwrap() - 1.0).abs() <= 1e-9);
        }
        if let (Some(p), Some(labels)) = (s.as_polyhedral(), labels) {
            for (i, g) in p.dual_vertices().iter().enumerate() {
                if !labels.contains(&i) {
                    prop_assert!(g.apply(&x) < n - TOL / 2.0);
                }
            }
        }
    }

    #[test]
    fn l2_semi_inner_product_is_dot(seed in any::<u64>()) {
        let l2 = LpSpace::new(4, Exponent::Finite(2.0)).unwrap();
        let mut r = rng(seed);
        let (u, v) = (gaussian(&mut r, 4), gaussian(&mut r, 4));
        let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        prop_assert!((l2.semi_inner_product(&u, &v).unwrap() - dot).abs() <= 1e-12);
    }

    #[test]
    fn exact_norm_matches_float(coords in prop::collection::vec((-6i64..=6, 1i64..=4), 6), x in prop::collection::vec(-9i64..=9, 2)) {
        let q = |(n, d): (i64, i64)| Rational::new(BigInt::from(n), BigInt::from(d));
        let pts: Vec<Vec<Rational>> = coords.chunks(2).map(|c| vec![q(c[0]), q(c[1])]).collect();
        let Ok(exact) = build_polyhedral(&pts, &BuildOptions::exact()) else { return Ok(()) };
        prop_assume!(x.iter().any(|c| *c != 0));
        let xq: Vec<Rational> = x.iter().map(|c| Rational::from_integer(BigInt::from(*c))).collect();
        let xf: Vec<f64> = x.iter().map(|c| *c as f64).collect();
        let ne = exact.norm(&xq).unwrap();
        let nf = exact.to_float().norm(&xf).unwrap();
        let back: f64 = format_rational(&ne).split('/').map(|s| s.parse::<f64>().unwrap()).fold(f64::NAN, |acc, v| if acc.is_nan() { v } else { acc / v });
        prop_assert!((back - nf).abs() <= 1e-9 * (1.0 + nf));
        prop_assert_eq!(parse_rational(&format_rational(&ne)).unwrap(), ne);
    }
}
