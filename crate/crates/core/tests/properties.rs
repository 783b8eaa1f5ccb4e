use gatesplit::approx::{approx_separate, project_local};
use gatesplit::exact::{separate_rank_one, separate_unitary, TensorTerm, Verdict, SCHMIDT_TOL};
use gatesplit::generator::{exp_of, generator_of, HermitianGenerator, UnitaryGate};
use gatesplit::linalg::{
    kron, partial_trace, permute_sites, reshuffle, singular_values, Cut, NormKind, TensorSpace,
};
use gatesplit::random::{haar_unitary, random_hermitian, random_matrix, rng};
use gatesplit::Matrix;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_mixed_product(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let mut r = rng(seed);
        let (a, c): (Matrix, Matrix) = (random_matrix(&mut r, m, m), random_matrix(&mut r, m, m));
        let (b, d): (Matrix, Matrix) = (random_matrix(&mut r, n, n), random_matrix(&mut r, n, n));
        let lhs = kron(&a, &b).unwrap().matmul(&kron(&c, &d).unwrap());
        let rhs = kron(&a.matmul(&c), &b.matmul(&d)).unwrap();
        prop_assert!((&lhs - &rhs).max_abs() <= 1e-12 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn reshuffle_preserves_frobenius_norm(seed in any::<u64>(), dims in dims(), left in 0usize..3) {
        let space = TensorSpace::new(dims.clone()).unwrap();
        let cut = Cut::single(left % dims.len(), dims.len()).unwrap();
        let m: Matrix = random_matrix(&mut rng(seed), space.total(), space.total());
        let r = reshuffle(&m, &space, &cut).unwrap();
        prop_assert!((r.frobenius_norm() - m.frobenius_norm()).abs() <= 1e-12 * m.frobenius_norm());
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), m in 2usize..4, n in 2usize..4) {
        let mut r = rng(seed);
        let (a, b): (Matrix, Matrix) = (random_matrix(&mut r, m, m), random_matrix(&mut r, n, n));
        let space = TensorSpace::new(vec![m, n]).unwrap();
        let ab = kron(&a, &b).unwrap();
        let left = partial_trace(&ab, &space, 0).unwrap();
        let right = partial_trace(&ab, &space, 1).unwrap();
        prop_assert!((&left - &a.scale(b.trace())).max_abs() <= 1e-11);
        prop_assert!((&right - &b.scale(a.trace())).max_abs() <= 1e-11);
    }

    #[test]
    fn permutation_swaps_kron_order(seed in any::<u64>(), m in 2usize..4, n in 2usize..4) {
        let mut r = rng(seed);
        let (a, b): (Matrix, Matrix) = (random_matrix(&mut r, m, m), random_matrix(&mut r, n, n));
        let space = TensorSpace::new(vec![m, n]).unwrap();
        let moved = permute_sites(&kron(&a, &b).unwrap(), &space, &[1, 0]).unwrap();
        prop_assert!((&moved - &kron(&b, &a).unwrap()).max_abs() <= 1e-13);
    }

    #[test]
    fn generator_round_trip(seed in any::<u64>(), n in 2usize..6) {
        let u = UnitaryGate::new(haar_unitary(&mut rng(seed), n), TensorSpace::new(vec![n]).unwrap()).unwrap();
        let h = generator_of(&u).unwrap();
        prop_assert!(h.is_principal());
        let back = exp_of(&h, 1.0).unwrap();
        prop_assert!((back.matrix() - u.matrix()).max_abs() <= 1e-10);
    }

    #[test]
    fn oracle_verdict_matches_second_coefficient(seed in any::<u64>(), product in any::<bool>()) {
        let mut r = rng(seed);
        let space = TensorSpace::qubits(3).unwrap();
        let m = if product {
            kron(&haar_unitary::<f64, _>(&mut r, 2), &kron(&haar_unitary(&mut r, 2), &haar_unitary(&mut r, 2)).unwrap()).unwrap()
        } else {
            haar_unitary(&mut r, 8)
        };
        let u = UnitaryGate::new(m, space.clone()).unwrap();
        let res = separate_unitary(&u).unwrap();
        let worst = (0..2)
            .map(|k| {
                let s = singular_values(&reshuffle(u.matrix(), &space, &Cut::prefix(k, 3).unwrap()).unwrap()).unwrap();
                s[1] / s[0]
            })
            .fold(0.0, f64::max);
        prop_assert_eq!(res.verdict == Verdict::Separable, worst <= SCHMIDT_TOL);
        prop_assert_eq!(product, res.verdict == Verdict::Separable);
    }

    #[test]
    fn delta_regauging_leaves_gate_unchanged(seed in any::<u64>(), s in 0.2f64..5.0, t in -3.0f64..3.0) {
        let mut r = rng(seed);
        let space = TensorSpace::qubits(3).unwrap();
        let a: Matrix = random_hermitian(&mut r, 2, 1.0);
        let (l1, l2) = (0.7, -1.3);
        let base = TensorTerm::new(
            vec![Matrix::identity(2).scale_real(l1), Matrix::identity(2).scale_real(l2), a.clone()],
            space.clone(),
        )
        .unwrap();
        let regauged = TensorTerm::new(
            vec![Matrix::identity(2).scale_real(l1 * s), Matrix::identity(2).scale_real(l2 / s), a],
            space,
        )
        .unwrap();
        let x = separate_rank_one(&base, t).unwrap().reconstruct().unwrap();
        let y = separate_rank_one(&regauged, t).unwrap().reconstruct().unwrap();
        prop_assert!((&x - &y).max_abs() <= 1e-10);
    }

    #[test]
    fn measured_never_exceeds_bound(seed in any::<u64>(), t in 0.1f64..3.0) {
        let mut r = rng(seed);
        let space = TensorSpace::qubits(2).unwrap();
        let h = HermitianGenerator::new(random_hermitian(&mut r, 4, 1.0), space).unwrap();
        let u = exp_of(&h, t).unwrap();
        let res = approx_separate(&u, t, None).unwrap();
        prop_assert!(res.measured <= res.bound + 1e-9);
        prop_assert!(res.measured <= res.measured_phase_free + 1e-12);
        let fam = project_local(&generator_of(&u).unwrap().scaled(1.0 / t)).unwrap();
        prop_assert!(fam.locals().iter().all(|l| l.trace().norm() <= 1e-10));
        prop_assert_eq!(res.norm, NormKind::Operator);
    }

    #[test]
    fn single_precision_separates_products(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a: gatesplit::Matrix32 = haar_unitary(&mut r, 2);
        let b: gatesplit::Matrix32 = haar_unitary(&mut r, 3);
        let space = TensorSpace::new(vec![2, 3]).unwrap();
        let u = gatesplit::Gate32::with_tolerance(kron(&a, &b).unwrap(), space, 1e-4).unwrap();
        let tol = gatesplit::exact::Tolerances { schmidt: 1e-4, residual: 1e-4, ..Default::default() };
        let res = gatesplit::exact::separate_unitary_with(&u, &tol).unwrap();
        prop_assert!(res.is_separable());
    }
}
