//! Truncated exponential generating functions and their composition, used as
//! an independent check on partition-sum plethysm.

use crate::scalar::Scalar;
use crate::{Result, SocError};

/// Coefficients `a₀..a_N` of `Σ aₙ xⁿ`, where `aₙ = dim(n)/n!` (or
/// `weight(n)/n!`) when built from a symmetric sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Egf<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Egf<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "an EGF has at least a constant term");
        Egf { coeffs }
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }
}

/// Product of two coefficient vectors truncated to degree `n_max`.
fn truncated_mul<T: Scalar>(a: &[T], b: &[T], n_max: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n_max + 1];
    for (i, x) in a.iter().enumerate().take(n_max + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n_max + 1 - i) {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// `outer(inner(x))` truncated to degree `n_max`, by Horner substitution.
pub fn egf_compose<T: Scalar>(outer: &Egf<T>, inner: &Egf<T>, n_max: usize) -> Result<Egf<T>> {
    if !inner.coeff(0).is_zero() {
        return Err(SocError::contract(
            "inner series must have zero constant term",
            "series substitution",
        ));
    }
    let mut acc = vec![T::zero(); n_max + 1];
    for k in (0..=n_max).rev() {
        acc = truncated_mul(&acc, &inner.coeffs, n_max);
        acc[0] = acc[0].clone() + outer.coeff(k);
    }
    Ok(Egf { coeffs: acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn exp_minus_one(n: usize) -> Egf<BigRational> {
        let mut c = vec![q(0, 1)];
        for k in 1..=n {
            c.push(BigRational::from_integer(1.into()) / BigRational::factorial(k));
        }
        Egf::new(c)
    }

    #[test]
    fn bell_identity() {
        let e = exp_minus_one(5);
        let composed = egf_compose(&e, &e, 5).unwrap();
        let bell: Vec<BigRational> = (1..=5)
            .map(|n| composed.coeff(n) * BigRational::factorial(n))
            .collect();
        assert_eq!(bell, vec![q(1, 1), q(2, 1), q(5, 1), q(15, 1), q(52, 1)]);
    }

    #[test]
    fn identity_outer() {
        let x = Egf::new(vec![q(0, 1), q(1, 1)]);
        let inner = Egf::new(vec![q(0, 1), q(2, 1), q(-3, 7), q(1, 5)]);
        assert_eq!(egf_compose(&x, &inner, 3).unwrap(), inner);
    }

    #[test]
    fn square_into_square() {
        let sq = Egf::new(vec![0.0, 0.0, 1.0]);
        let got = egf_compose(&sq, &sq, 5).unwrap();
        assert_eq!(got.coeffs(), &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn rejects_constant_inner() {
        let e = Egf::new(vec![1.0, 1.0]);
        assert!(egf_compose(&e, &e, 3).unwrap_err().is_contract());
    }
}
