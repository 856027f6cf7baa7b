use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use soc_core::crosseff::{
    cross_effect_dims, cross_effect_report, cross_effect_report_direct, excision_check,
    surjection_oracle_dims,
};
use soc_core::functor::make_canonical;
use soc_core::linalg::random::{random_matrix, random_normal};
use soc_core::{CanonicalKind, DenseMatrix, Limits, PowerSeriesFunctor};

/// Weighted words of length `m` using every input: dynamic programming over
/// the set of inputs already used.
fn word_oracle(f: &PowerSeriesFunctor, dims: &[usize], m: usize) -> BigUint {
    if f.coeff(m) == 0.0 {
        return BigUint::zero();
    }
    let k = dims.len();
    let full = (1usize << k) - 1;
    let mut dp = vec![BigUint::zero(); full + 1];
    dp[0] = BigUint::from(1u8);
    for _ in 0..m {
        let mut next = vec![BigUint::zero(); full + 1];
        for (mask, w) in dp.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for (i, &d) in dims.iter().enumerate() {
                next[mask | 1 << i] += w * d;
            }
        }
        dp = next;
    }
    dp[full].clone()
}

fn canonicals(n: usize) -> Vec<PowerSeriesFunctor> {
    vec![
        make_canonical(CanonicalKind::Identity, n).unwrap(),
        make_canonical(CanonicalKind::Constant(2.0), n).unwrap(),
        make_canonical(CanonicalKind::Quadratic, n).unwrap(),
        make_canonical(CanonicalKind::Exponential, n).unwrap(),
        make_canonical(CanonicalKind::Geometric, n).unwrap(),
        make_canonical(CanonicalKind::Factorial, n).unwrap(),
        make_canonical(CanonicalKind::Polynomial(vec![1.0, 0.0, -1.0, 2.0]), n).unwrap(),
    ]
}

#[test]
fn three_way_dimension_agreement() {
    let l = Limits::default();
    for f in canonicals(8) {
        for k in 1..=3 {
            for code in 0..4usize.pow(k as u32) {
                let dims: Vec<usize> = (0..k).map(|i| code / 4usize.pow(i as u32) % 4).collect();
                let ie = cross_effect_dims(&f, &dims, 8, &l).unwrap();
                let sj = surjection_oracle_dims(&f, &dims, 8, &l).unwrap();
                assert_eq!(ie, sj, "{} {dims:?}", f.name());
                for m in 0..=8 {
                    assert_eq!(ie[m], word_oracle(&f, &dims, m), "{} {dims:?} m={m}", f.name());
                }
            }
        }
    }
}

#[test]
fn vanishing_fixtures() {
    let l = Limits::default();
    let id = make_canonical(CanonicalKind::Identity, 8).unwrap();
    let q = make_canonical(CanonicalKind::Quadratic, 8).unwrap();
    for dims in [[1, 1], [2, 3], [3, 3]] {
        assert!(cross_effect_dims(&id, &dims, 8, &l).unwrap().iter().all(Zero::is_zero));
    }
    for dims in [[1, 1, 1], [2, 3, 1], [3, 3, 3]] {
        assert!(cross_effect_dims(&q, &dims, 8, &l).unwrap().iter().all(Zero::is_zero));
    }
    let q2 = cross_effect_dims(&q, &[2, 3], 8, &l).unwrap();
    assert_eq!(q2[2], BigUint::from(12u8));
}

fn small_dims(k: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..4, k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dims_symmetric_under_input_permutation(dims in small_dims(4), rot in 0usize..4) {
        let l = Limits::default();
        let f = make_canonical(CanonicalKind::Exponential, 8).unwrap();
        let mut permuted = dims.clone();
        permuted.rotate_left(rot);
        prop_assert_eq!(
            cross_effect_dims(&f, &dims, 8, &l).unwrap(),
            cross_effect_dims(&f, &permuted, 8, &l).unwrap()
        );
    }

    #[test]
    fn multi_reduced(mut dims in small_dims(3), slot in 0usize..3) {
        let l = Limits::default();
        dims[slot] = 0;
        let f = make_canonical(CanonicalKind::Geometric, 8).unwrap();
        prop_assert!(cross_effect_dims(&f, &dims, 8, &l).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn zero_input_kills_report(seed in any::<u64>(), slot in 0usize..2) {
        let l = Limits::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inputs = vec![random_matrix(&mut rng, 2), random_matrix(&mut rng, 2)];
        inputs[slot] = DenseMatrix::zeros(2, 2);
        let f = make_canonical(CanonicalKind::Exponential, 6).unwrap();
        let rep = cross_effect_report(&f, &inputs, 6, 1e-12, &l).unwrap();
        prop_assert_eq!(rep.total_norm, 0.0);
        prop_assert!(rep.negligible);
    }

    #[test]
    fn factored_report_matches_direct(seed in any::<u64>()) {
        let l = Limits::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inputs = vec![random_matrix(&mut rng, 2), random_normal(&mut rng, 1, 0.2, 1.0)];
        let f = make_canonical(CanonicalKind::Geometric, 5).unwrap();
        let a = cross_effect_report(&f, &inputs, 5, 1e-9, &l).unwrap();
        let b = cross_effect_report_direct(&f, &inputs, 5, 1e-9, &l).unwrap();
        for (x, y) in a.per_degree.iter().zip(&b.per_degree) {
            prop_assert_eq!(&x.dim, &y.dim);
            prop_assert!((x.norm_estimate - y.norm_estimate).abs() <= 1e-8 * x.norm_estimate.max(1e-300));
            prop_assert!((x.radius - y.radius).abs() <= 1e-6 * x.radius.max(1e-12));
        }
    }
}

fn normal_tuples(seed: u64, count: usize, arity: usize) -> Vec<Vec<DenseMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..arity).map(|_| random_normal(&mut rng, 2, 0.2, 0.9)).collect())
        .collect()
}

#[test]
fn excision_on_normal_class() {
    let l = Limits::default();
    for m in 1..=3 {
        let mut coeffs = vec![0.5; m + 1];
        coeffs[m] = 1.0;
        let p = make_canonical(CanonicalKind::Polynomial(coeffs), 6).unwrap();
        let rep = excision_check(&p, m, &normal_tuples(m as u64, 10, m + 1), 1e-9, 6, &l).unwrap();
        assert!(rep.all_negligible() && rep.all_agree(), "degree {m}");
    }
    let e = make_canonical(CanonicalKind::Exponential, 6).unwrap();
    let rep = excision_check(&e, 2, &normal_tuples(7, 10, 3), 1e-9, 6, &l).unwrap();
    assert!(rep.none_negligible() && rep.all_agree());
}
