//! Symmetric sequences reduced to per-degree `(dimension, weight)` data, and
//! their plethysm as a sum over set partitions:
//!
//! `dim((a∘b)ₙ) = Σ_{π ∈ Part([n])} dim(a_{|π|}) · Π_{P∈π} dim(b_{|P|})`,
//!
//! with weights combined by the same formula.

mod egf;
mod partition;

pub use egf::{egf_compose, Egf};
pub use partition::{
    blocks_of, enumerate_set_partitions, partition_type_counts, Block, SetPartition,
};

use crate::{Limits, Result, SocError};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq)]
pub struct SymSeq {
    dims: Vec<BigUint>,
    weights: Vec<f64>,
    reduced: bool,
}

impl SymSeq {
    pub fn new(dims: Vec<BigUint>, weights: Vec<f64>, reduced: bool) -> Result<Self> {
        if dims.is_empty() || dims.len() != weights.len() {
            return Err(SocError::Validation(format!(
                "symmetric sequence needs matching non-empty dims/weights (got {} and {})",
                dims.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(SocError::Validation(format!(
                "weights must be finite and nonnegative, found {w}"
            )));
        }
        if reduced && (!dims[0].is_zero() || weights[0] != 0.0) {
            return Err(SocError::Validation(
                "reduced sequence must have dim(0) = 0 and weight(0) = 0".into(),
            ));
        }
        Ok(SymSeq {
            dims,
            weights,
            reduced,
        })
    }

    /// Integer dimensions with weights equal to the dimensions.
    pub fn from_dims(dims: &[u64]) -> Result<Self> {
        let reduced = dims.first() == Some(&0);
        Self::new(
            dims.iter().map(|&d| BigUint::from(d)).collect(),
            dims.iter().map(|&d| d as f64).collect(),
            reduced,
        )
    }

    /// Dimension 1 in every degree `1..=max_degree`.
    pub fn ones(max_degree: usize) -> Self {
        let mut dims = vec![1u64; max_degree + 1];
        dims[0] = 0;
        Self::from_dims(&dims).expect("valid")
    }

    /// The plethysm unit: dimension 1 in degree 1 only.
    pub fn unit(max_degree: usize) -> Self {
        Self::concentrated(1, max_degree)
    }

    /// Dimension 1 in a single degree.
    pub fn concentrated(degree: usize, max_degree: usize) -> Self {
        let mut dims = vec![0u64; max_degree.max(degree) + 1];
        dims[degree] = 1;
        Self::from_dims(&dims).expect("valid")
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[BigUint] {
        &self.dims
    }

    pub fn dim(&self, n: usize) -> &BigUint {
        &self.dims[n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// True when degree 0 carries nothing, whatever the flag says.
    pub fn vanishes_at_zero(&self) -> bool {
        self.dims[0].is_zero() && self.weights[0] == 0.0
    }

    /// Highest degree with nonzero dimension or weight.
    pub fn support_degree(&self) -> Option<usize> {
        (0..self.dims.len())
            .rev()
            .find(|&n| !self.dims[n].is_zero() || self.weights[n] != 0.0)
    }

    /// `dim(n)/n!` as exact rationals.
    pub fn dims_egf(&self) -> Egf<BigRational> {
        let mut fact = BigInt::from(1);
        let coeffs = self
            .dims
            .iter()
            .enumerate()
            .map(|(n, d)| {
                if n > 0 {
                    fact *= n;
                }
                BigRational::new(BigInt::from(d.clone()), fact.clone())
            })
            .collect();
        Egf::new(coeffs)
    }

    /// `weight(n)/n!` in floating point.
    pub fn weights_egf(&self) -> Egf<f64> {
        let mut fact = 1.0;
        let coeffs = self
            .weights
            .iter()
            .enumerate()
            .map(|(n, &w)| {
                if n > 0 {
                    fact *= n as f64;
                }
                w / fact
            })
            .collect();
        Egf::new(coeffs)
    }
}

/// Partition-sum plethysm `a ∘ b` up to degree `n_max`.
///
/// The inner sequence must vanish in degree 0; nullary components are not
/// supported. Partitions are grouped by block-size type, so each type
/// contributes `count · a_{|π|} · Π b_{|P|}`, accumulated in the fixed
/// order of [`partition_type_counts`].
pub fn plethysm(a: &SymSeq, b: &SymSeq, n_max: usize, limits: &Limits) -> Result<SymSeq> {
    if !b.vanishes_at_zero() {
        return Err(SocError::contract(
            "inner symmetric sequence must be reduced (dim(0) = weight(0) = 0)",
            "operadic plethysm",
        ));
    }
    if n_max > a.max_degree() || n_max > b.max_degree() {
        return Err(SocError::Validation(format!(
            "plethysm to degree {n_max} needs both sequences defined that far (have {} and {})",
            a.max_degree(),
            b.max_degree()
        )));
    }
    let mut dims = Vec::with_capacity(n_max + 1);
    let mut weights = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut dim = BigUint::zero();
        let mut weight = 0.0;
        for (sizes, count) in partition_type_counts(n, limits)? {
            let k = sizes.len();
            if a.dims[k].is_zero() && a.weights[k] == 0.0 {
                continue;
            }
            let mut d = a.dims[k].clone() * BigUint::from(count);
            let mut w = a.weights[k] * count as f64;
            for &s in &sizes {
                d *= &b.dims[s];
                w *= b.weights[s];
            }
            dim += d;
            weight += w;
        }
        dims.push(dim);
        weights.push(weight);
    }
    SymSeq::new(dims, weights, a.reduced)
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum DimJson {
    Num(u64),
    Text(String),
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SymSeqJson {
    max_degree: usize,
    dims: Vec<DimJson>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
    #[serde(default)]
    reduced: Option<bool>,
}

impl Serialize for SymSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SymSeqJson {
            max_degree: self.max_degree(),
            dims: self
                .dims
                .iter()
                .map(|d| match d.to_u64() {
                    Some(v) => DimJson::Num(v),
                    None => DimJson::Text(d.to_string()),
                })
                .collect(),
            weights: Some(self.weights.clone()),
            reduced: Some(self.reduced),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SymSeqJson::deserialize(deserializer)?;
        if raw.dims.len() != raw.max_degree + 1 {
            return Err(D::Error::custom(format!(
                "max_degree {} needs {} dims, got {}",
                raw.max_degree,
                raw.max_degree + 1,
                raw.dims.len()
            )));
        }
        let dims = raw
            .dims
            .into_iter()
            .map(|d| match d {
                DimJson::Num(v) => Ok(BigUint::from(v)),
                DimJson::Text(s) => s.parse::<BigUint>().map_err(D::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let weights = raw
            .weights
            .unwrap_or_else(|| dims.iter().map(|d| d.to_f64().unwrap_or(f64::INFINITY)).collect());
        let reduced = raw.reduced.unwrap_or(dims[0].is_zero() && weights[0] == 0.0);
        SymSeq::new(dims, weights, reduced).map_err(D::Error::custom)
    }
}
