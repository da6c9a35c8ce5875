use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use woldlab_core::catalog::{random_isometry, random_vector};
use woldlab_core::format::{parse_operator, write_operator};
use woldlab_core::{
    is_strongly_wandering, is_wandering, pair_decompose, wold_decompose, HVector, StructuredIsometry, Witness,
};

const TOL: f64 = 1e-9;

fn sample(seed: u64) -> (StructuredIsometry, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_isometry(&mut rng), rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn isometry_preserves_norms_and_inverts_on_the_left(seed in any::<u64>()) {
        let (v, mut rng) = sample(seed);
        for _ in 0..4 {
            let x = random_vector(&mut rng, &v, 6, 8);
            let vx = v.apply(&x).unwrap();
            prop_assert!((vx.norm() - x.norm()).abs() <= TOL);
            prop_assert!(v.apply_adjoint(&vx).unwrap().distance(&x) <= TOL);
        }
    }

    #[test]
    fn isometry_preserves_inner_products(seed in any::<u64>()) {
        let (v, mut rng) = sample(seed);
        let x = random_vector(&mut rng, &v, 6, 8);
        let y = random_vector(&mut rng, &v, 6, 8);
        let lhs = v.apply(&x).unwrap().inner(&v.apply(&y).unwrap());
        prop_assert!((lhs - x.inner(&y)).norm() <= TOL);
    }

    #[test]
    fn composition_matches_repeated_application(seed in any::<u64>()) {
        let (v, mut rng) = sample(seed);
        let vv = v.compose(&v).unwrap();
        let x = random_vector(&mut rng, &v, 6, 8);
        let twice = v.apply(&v.apply(&x).unwrap()).unwrap();
        prop_assert!(vv.apply(&x).unwrap().distance(&twice) <= TOL);
        prop_assert!(v.power(&x, 2).unwrap().distance(&twice) <= TOL);
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>()) {
        let (v, _) = sample(seed);
        let back = parse_operator(&write_operator(&v)).unwrap();
        prop_assert_eq!(back.first_difference(&v), None);
    }

    #[test]
    fn wold_pieces_are_orthogonal(seed in any::<u64>()) {
        let (v, _) = sample(seed);
        let w = wold_decompose(&v, 24);
        for (i, a) in w.shift_wandering_basis.iter().enumerate() {
            for (j, b) in w.shift_wandering_basis.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((a.inner(b) - Complex64::new(expected, 0.0)).norm() <= TOL);
            }
            prop_assert!(v.apply_adjoint(a).unwrap().norm() <= TOL);
        }
        for u in &w.unitary_window_basis {
            for k in &w.shift_orbit {
                prop_assert!(u.inner(k).norm() <= TOL);
            }
        }
        if w.exact {
            for x in w.window_vectors() {
                let s = w.shift_component(&x);
                let u = w.unitary_component(&x);
                prop_assert!(s.inner(&u).norm() <= TOL);
                prop_assert!(s.add(&u).distance(&x) <= TOL);
            }
        }
    }

    #[test]
    fn wandering_certificates_are_well_formed(seed in any::<u64>()) {
        let (v, mut rng) = sample(seed);
        for _ in 0..4 {
            let x = random_vector(&mut rng, &v, 4, 6);
            let c = is_wandering(&v, &x, 32).unwrap();
            prop_assert!(c.is_well_formed());
            if let Some(Witness::Exponent { n }) = &c.witness {
                let overlap = v.power(&x, *n).unwrap().inner(&x);
                prop_assert!(overlap.norm() > TOL);
            }
            let s = is_strongly_wandering(&v, &x, 32).unwrap();
            prop_assert!(s.is_well_formed());
            // strongly wandering implies wandering
            prop_assert!(!s.is_true() || !c.is_false());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pair_parts_are_mutually_orthogonal(seed in any::<u64>()) {
        let (v, _) = sample(seed);
        let vv = v.compose(&v).unwrap();
        let r = pair_decompose(&v, &vv, 16).unwrap();
        prop_assert!(r.max_overlap() <= TOL);
        for (_, part) in r.parts() {
            prop_assert!(part.certificate.is_well_formed());
            prop_assert!(part.subspace.orthonormality_defect() <= TOL);
        }
    }

    #[test]
    fn zero_vector_is_never_wandering(seed in any::<u64>()) {
        let (v, _) = sample(seed);
        let c = is_wandering(&v, &HVector::zero(), 8);
        prop_assert!(c.map(|c| !c.is_true()).unwrap_or(true));
    }
}
