//! Seeded random matrices for experiments and tests.

use super::DenseMatrix;
use num_complex::Complex64;
use rand::Rng;

fn complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Dense matrix with entries uniform in the unit square of ℂ.
pub fn random_matrix(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let data = (0..n * n).map(|_| complex(rng)).collect();
    DenseMatrix::from_vec_unchecked(n, n, data)
}

/// Real upper-triangular matrix with entries uniform in `[-1, 1)`.
pub fn random_upper_triangular(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            out.set(i, j, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        }
    }
    out
}

/// Unitary matrix from modified Gram–Schmidt (applied twice) on random columns.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| complex(rng)).collect()).collect();
    for _pass in 0..2 {
        for k in 0..n {
            for j in 0..k {
                let (done, rest) = cols.split_at_mut(k);
                let q = &done[j];
                let proj: Complex64 = q.iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in rest[0].iter_mut().zip(q) {
                    *x -= proj * a;
                }
            }
            let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for x in cols[k].iter_mut() {
                *x /= norm;
            }
        }
    }
    let mut out = DenseMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            out.set(i, j, z);
        }
    }
    out
}

/// Normal matrix `U·diag(λ)·U*` with eigenvalue moduli in `[min_modulus, max_modulus]`
/// and uniformly random arguments.
pub fn random_normal(
    rng: &mut impl Rng,
    n: usize,
    min_modulus: f64,
    max_modulus: f64,
) -> DenseMatrix {
    let u = random_unitary(rng, n);
    let eig: Vec<Complex64> = (0..n)
        .map(|_| {
            let r = rng.gen_range(min_modulus..=max_modulus);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(r, theta)
        })
        .collect();
    u.matmul(&DenseMatrix::diag(&eig))
        .and_then(|m| m.matmul(&u.adjoint()))
        .expect("square factors")
}
