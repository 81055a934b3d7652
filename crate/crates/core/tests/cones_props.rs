use bjorth::cones::{conical_hull_membership, extreme_support_labels, neighbors};
use bjorth::sampling::{gaussian, random_polyhedral, rng};
use bjorth::space::{cross_polytope, cube, octagonal_prism, regular_polygon, PolyhedralSpace};
use proptest::prelude::*;

fn space_for(kind: u8, seed: u64) -> PolyhedralSpace<f64> {
    match kind % 6 {
        0 => regular_polygon(3 + (seed % 3) as usize).unwrap(),
        1 => cube(3),
        2 => cross_polytope(3),
        3 => octagonal_prism(),
        4 => random_polyhedral(&mut rng(seed), 2, 4),
        _ => random_polyhedral(&mut rng(seed), 3, 5),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smooth_points_have_one_label(kind in any::<u8>(), seed in any::<u64>()) {
        let p = space_for(kind, seed);
        let x = gaussian(&mut rng(seed ^ 3), p.dim());
        let labels = extreme_support_labels(&p, &x).unwrap();
        prop_assert_eq!(labels.len(), 1);
        prop_assert_eq!(labels.len(), p.support_set(&x).unwrap().extreme_count());
    }

    #[test]
    fn labels_cover_vertices(kind in any::<u8>(), seed in any::<u64>()) {
        let p = space_for(kind, seed);
        for v in p.vertices() {
            let labels = extreme_support_labels(&p, &v.0).unwrap();
            prop_assert!(labels.len() >= p.dim());
            prop_assert_eq!(labels.len(), p.support_set(&v.0).unwrap().extreme_count());
        }
    }

    #[test]
    fn neighbors_symmetric(kind in any::<u8>(), seed in any::<u64>()) {
        let p = space_for(kind, seed);
        for f in 0..p.dual_vertices().len() {
            let a = neighbors(&p, f).unwrap();
            let b = neighbors(&p, p.dual_antipode(f)).unwrap();
            prop_assert_eq!(a.len(), b.len());
            prop_assert!(!a.contains(&f));
        }
    }
}

/// Membership in the cone over facet `f` matches "the only label is `f`",
/// on random points and on points pushed onto facet boundaries.
#[test]
fn membership_matches_labels() {
    for kind in 0..6u8 {
        let p = space_for(kind, 11);
        let mut r = rng(kind as u64);
        for i in 0..1000 {
            let x = if i % 4 == 0 {
                let v = &p.vertices()[i % p.vertices().len()].0;
                let g = gaussian(&mut r, p.dim());
                v.iter().zip(&g).map(|(a, b)| a + 1e-3 * b * ((i % 3) as f64)).collect()
            } else {
                gaussian(&mut r, p.dim())
            };
            let labels = extreme_support_labels(&p, &x).unwrap();
            assert!(!labels.is_empty());
            for f in 0..p.dual_vertices().len() {
                let member = conical_hull_membership(&p, f, &x).unwrap();
                assert_eq!(member, labels == [f], "kind {kind} point {x:?} facet {f}");
            }
        }
    }
}
