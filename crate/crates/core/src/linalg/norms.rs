//! Operator norm by power iteration on `A*A` and spectral radius by the
//! Gelfand limit `‖A^{2^k}‖^{1/2^k}` with per-step rescaling.

use super::DenseMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for the power-iteration start vector. Fixed so every run is
/// bit-reproducible.
const START_VECTOR_SEED: u64 = 0x005E_ED0F_5EC7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NormSettings {
    fn default() -> Self {
        NormSettings {
            tol: 1e-14,
            max_iter: 20_000,
        }
    }
}

impl NormSettings {
    /// Defaults for the Gelfand iteration, where each step doubles the power.
    pub fn gelfand() -> Self {
        NormSettings {
            tol: 1e-13,
            max_iter: 64,
        }
    }
}

/// One iterative estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub operator_norm: f64,
    pub spectral_radius: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn norm_report(a: &DenseMatrix, norm: NormSettings, radius: NormSettings) -> NormReport {
    let n = operator_norm(a, norm);
    let r = spectral_radius(a, radius);
    NormReport {
        operator_norm: n.value,
        spectral_radius: r.value,
        iterations: n.iterations + r.iterations,
        converged: n.converged && r.converged,
    }
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = vec_norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// Largest singular value of `a` (any shape).
///
/// Power iteration on `a*·a` from a seeded random complex start vector; the
/// estimate is `‖a·v‖` for the current unit vector `v`. `converged` is false
/// when `max_iter` is exhausted before successive estimates agree to `tol`
/// (relative).
pub fn operator_norm(a: &DenseMatrix, settings: NormSettings) -> NormEstimate {
    let cols = a.cols();
    if a.rows() == 0 || cols == 0 || a.is_zero() {
        return NormEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(START_VECTOR_SEED);
    let mut v: Vec<Complex64> = (0..cols)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    normalize(&mut v);

    let mut estimate = 0.0;
    for iter in 1..=settings.max_iter {
        let av = a.apply(&v);
        let current = vec_norm(&av);
        let mut w = a.apply_adjoint(&av);
        if normalize(&mut w) == 0.0 {
            // Start vector fell into the kernel; restart from the heaviest column.
            let heaviest = (0..cols)
                .max_by(|&x, &y| {
                    let cx: f64 = (0..a.rows()).map(|i| a.get(i, x).norm_sqr()).sum();
                    let cy: f64 = (0..a.rows()).map(|i| a.get(i, y).norm_sqr()).sum();
                    cx.total_cmp(&cy)
                })
                .unwrap_or(0);
            w = vec![Complex64::new(0.0, 0.0); cols];
            w[heaviest] = Complex64::new(1.0, 0.0);
        }
        if iter > 1 && (current - estimate).abs() <= settings.tol * current {
            return NormEstimate {
                value: current.max(estimate),
                iterations: iter,
                converged: true,
            };
        }
        estimate = current.max(estimate);
        v = w;
    }
    NormEstimate {
        value: estimate,
        iterations: settings.max_iter,
        converged: false,
    }
}

/// Spectral radius by Gelfand's formula.
///
/// Keeps `B_k = A^{2^k} / s_k` with `max |B_k| = 1` and the scalar
/// `scale_k = s_k^{1/2^k}`, so the estimate `scale_k · ‖B_k‖_F^{1/2^k}` never
/// overflows or underflows. Stops when successive estimates differ by less
/// than `tol` (relative). A matrix whose power vanishes exactly has radius 0.
pub fn spectral_radius(a: &DenseMatrix, settings: NormSettings) -> NormEstimate {
    if a.rows() == 0 || !a.is_square() {
        return NormEstimate {
            value: 0.0,
            iterations: 0,
            converged: a.rows() == 0,
        };
    }
    let first = a.max_abs();
    if first == 0.0 {
        return NormEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let mut scale = first;
    let mut b = a.scale_real(1.0 / first);
    let mut exponent = 1.0_f64;
    let mut estimate = scale * b.frobenius_norm();

    for iter in 1..=settings.max_iter {
        b = b.matmul(&b).expect("square");
        exponent *= 2.0;
        let m = b.max_abs();
        if m == 0.0 {
            return NormEstimate {
                value: 0.0,
                iterations: iter,
                converged: true,
            };
        }
        b = b.scale_real(1.0 / m);
        scale *= m.powf(1.0 / exponent);
        let next = scale * b.frobenius_norm().powf(1.0 / exponent);
        if iter >= 3 && (next - estimate).abs() <= settings.tol * next {
            return NormEstimate {
                value: next,
                iterations: iter,
                converged: true,
            };
        }
        estimate = next;
    }
    NormEstimate {
        value: estimate,
        iterations: settings.max_iter,
        converged: false,
    }
}
