use super::DenseMatrix;
use crate::{Limits, Result, SocError};
use num_complex::Complex64;

/// How a norm on a direct sum is assembled from the norms of its summands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectSumNorm {
    /// ℓ¹ combination: sum of summand norms.
    #[default]
    LayerSum,
    /// ℓ^∞ combination: largest summand norm (the operator norm of a block diagonal).
    LayerMax,
}

impl DirectSumNorm {
    pub fn combine(self, norms: impl IntoIterator<Item = f64>) -> f64 {
        match self {
            DirectSumNorm::LayerSum => norms.into_iter().sum(),
            DirectSumNorm::LayerMax => norms.into_iter().fold(0.0, f64::max),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DirectSumNorm::LayerSum => "layer_sum",
            DirectSumNorm::LayerMax => "layer_max",
        }
    }
}

impl std::str::FromStr for DirectSumNorm {
    type Err = SocError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "layer_sum" => Ok(DirectSumNorm::LayerSum),
            "layer_max" => Ok(DirectSumNorm::LayerMax),
            other => Err(SocError::Validation(format!(
                "unknown convention {other:?} (expected layer_sum or layer_max)"
            ))),
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix, limits: &Limits) -> Result<DenseMatrix> {
    let rows = a
        .rows()
        .checked_mul(b.rows())
        .ok_or_else(|| SocError::capacity("kron rows", u128::MAX, limits.max_entries as u128))?;
    let cols = a
        .cols()
        .checked_mul(b.cols())
        .ok_or_else(|| SocError::capacity("kron cols", u128::MAX, limits.max_entries as u128))?;
    limits.check_entries("kron", rows, cols)?;

    let mut data = vec![Complex64::new(0.0, 0.0); rows * cols];
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            for p in 0..b.rows() {
                let out_row = (i * b.rows() + p) * cols + j * b.cols();
                for q in 0..b.cols() {
                    data[out_row + q] = x * b.get(p, q);
                }
            }
        }
    }
    Ok(DenseMatrix::from_vec_unchecked(rows, cols, data))
}

/// `a^{⊗n}`; `n = 0` gives the 1×1 identity.
pub fn tensor_power(a: &DenseMatrix, n: usize, limits: &Limits) -> Result<DenseMatrix> {
    let d = a.require_square("tensor_power")? as u128;
    let dim = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(d));
    match dim {
        Some(dim) if dim.saturating_mul(dim) <= limits.max_entries as u128 => {}
        _ => {
            return Err(SocError::capacity(
                format!("tensor power of degree {n}"),
                dim.map_or(u128::MAX, |x| x.saturating_mul(x)),
                limits.max_entries as u128,
            ))
        }
    }
    let mut out = DenseMatrix::identity(1);
    for _ in 0..n {
        out = kron(&out, a, limits)?;
    }
    Ok(out)
}

/// Block-diagonal `diag(a, b)`.
pub fn direct_sum(a: &DenseMatrix, b: &DenseMatrix, limits: &Limits) -> Result<DenseMatrix> {
    direct_sum_many(&[a, b], limits)
}

/// Block-diagonal sum of square blocks, in order.
pub fn direct_sum_many(blocks: &[&DenseMatrix], limits: &Limits) -> Result<DenseMatrix> {
    let mut n = 0usize;
    for b in blocks {
        n += b.require_square("direct_sum")?;
    }
    limits.check_entries("direct_sum", n, n)?;
    let mut out = DenseMatrix::zeros(n, n);
    let mut offset = 0;
    for b in blocks {
        let k = b.rows();
        for i in 0..k {
            for j in 0..k {
                out.set(offset + i, offset + j, b.get(i, j));
            }
        }
        offset += k;
    }
    Ok(out)
}
