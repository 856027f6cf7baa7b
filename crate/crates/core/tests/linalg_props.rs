use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use soc_core::linalg::random::{random_matrix, random_normal, random_unitary, random_upper_triangular};
use soc_core::linalg::{
    kron, operator_norm, permute_tensor_factors, spectral_radius, symmetrize, NormSettings,
};
use soc_core::{DenseMatrix, Limits};

fn norm(a: &DenseMatrix) -> f64 {
    operator_norm(a, NormSettings::default()).value
}

fn radius(a: &DenseMatrix) -> f64 {
    spectral_radius(a, NormSettings::gelfand()).value
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `‖A‖_F/√n ≤ ‖A‖ ≤ ‖A‖_F`.
fn frobenius_bracket(a: &DenseMatrix) -> (f64, f64) {
    let f = a.frobenius_norm();
    (f / (a.rows().max(1) as f64).sqrt(), f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_is_submultiplicative(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n);
        let b = random_matrix(&mut r, n);
        let ab = a.matmul(&b).unwrap();
        prop_assert!(norm(&ab) <= norm(&a) * norm(&b) * (1.0 + 1e-9));
    }

    #[test]
    fn norm_within_frobenius_bracket(seed in any::<u64>(), n in 1usize..7) {
        let a = random_matrix(&mut rng(seed), n);
        let (lo, hi) = frobenius_bracket(&a);
        let v = norm(&a);
        prop_assert!(v >= lo * (1.0 - 1e-9) && v <= hi * (1.0 + 1e-9));
    }

    #[test]
    fn kron_norm_is_multiplicative(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n);
        let b = random_matrix(&mut r, m);
        let k = kron(&a, &b, &Limits::default()).unwrap();
        let expected = norm(&a) * norm(&b);
        prop_assert!((norm(&k) - expected).abs() <= 1e-8 * expected);
    }

    #[test]
    fn radius_below_norm(seed in any::<u64>(), n in 1usize..6) {
        let a = random_matrix(&mut rng(seed), n);
        prop_assert!(radius(&a) <= norm(&a) * (1.0 + 1e-9));
    }

    #[test]
    fn triangular_radius_is_max_diagonal(seed in any::<u64>(), n in 1usize..6) {
        let a = random_upper_triangular(&mut rng(seed), n);
        let expected = (0..n).map(|i| a.get(i, i).norm()).fold(0.0, f64::max);
        prop_assert!((radius(&a) - expected).abs() <= 1e-6 * expected.max(1e-12));
    }

    #[test]
    fn radius_scales(seed in any::<u64>(), n in 1usize..6, t in -4.0f64..4.0) {
        let a = random_upper_triangular(&mut rng(seed), n);
        let lhs = radius(&a.scale_real(t));
        let rhs = t.abs() * radius(&a);
        prop_assert!((lhs - rhs).abs() <= 1e-6 * rhs.max(1e-12));
    }

    #[test]
    fn normal_matrices_have_norm_equal_radius(seed in any::<u64>(), n in 1usize..6) {
        let a = random_normal(&mut rng(seed), n, 0.1, 2.0);
        let (nv, rv) = (norm(&a), radius(&a));
        prop_assert!((nv - rv).abs() <= 1e-7 * nv);
    }

    #[test]
    fn unitary_is_isometric(seed in any::<u64>(), n in 1usize..6) {
        let u = random_unitary(&mut rng(seed), n);
        let uu = u.adjoint().matmul(&u).unwrap();
        prop_assert!(uu.max_abs_diff(&DenseMatrix::identity(n)) < 1e-12);
    }

    #[test]
    fn symmetrizer_idempotent_and_invariant(seed in any::<u64>(), d in 1usize..3, n in 1usize..4) {
        let limits = Limits::default();
        let size = d.pow(n as u32);
        let t = random_matrix(&mut rng(seed), size);
        let s = symmetrize(&t, n, d, &limits).unwrap();
        let ss = symmetrize(&s, n, d, &limits).unwrap();
        prop_assert!(ss.max_abs_diff(&s) < 1e-10);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(1);
        let ps = permute_tensor_factors(&s, &perm, d).unwrap();
        prop_assert!(ps.max_abs_diff(&s) < 1e-10);
    }
}

#[test]
fn jordan_block_fixture() {
    let j = DenseMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    assert_eq!(radius(&j), 0.0);
    assert!((norm(&j) - 1.0).abs() < 1e-12);
    assert!(!j.is_normal(1e-8).unwrap());
}

#[test]
fn tensor_power_of_diagonal_is_diagonal_products() {
    let a = DenseMatrix::diag(&[Complex64::new(0.0, 2.0), Complex64::new(-0.5, 0.0)]);
    let aa = kron(&a, &a, &Limits::default()).unwrap();
    let expected = [-4.0, 0.0, 0.0, 0.25];
    for (i, e) in expected.iter().enumerate() {
        let z = aa.get(i, i);
        assert!((z.re - e).abs() < 1e-15, "{z}");
    }
    assert!((norm(&aa) - 4.0).abs() < 1e-12);
}
