//! Cross-effects of power-series functors.
//!
//! For inputs of dimensions `d₁..d_k`, the degree-`m` part of `cr_k F` has
//! dimension `Σ_{S⊆[k]} (−1)^{k−|S|} (Σ_{i∈S} dᵢ)^m` whenever `c_m ≠ 0`.
//! Explicitly it is the direct sum, over surjections `φ: [m] → [k]`, of the
//! blocks `c_m·A_{φ(1)}⊗…⊗A_{φ(m)}`. Both routes are provided; alternating
//! sums only ever happen on integers.

use crate::functor::PowerSeriesFunctor;
use crate::linalg::{
    direct_sum_many, kron, operator_norm, spectral_radius, DenseMatrix, NormSettings,
    NORMALITY_REL_TOL,
};
use crate::{Limits, Result, SocError};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

/// Upper bound on `k^m` maps visited by surjection enumeration.
pub const SURJECTION_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CrossEffectDegree {
    pub degree: usize,
    pub dim: BigUint,
    /// Largest block operator norm (the operator norm of the degree-`m` part).
    pub norm_estimate: f64,
    /// Largest block spectral radius.
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossEffectReport {
    pub arity: usize,
    pub per_degree: Vec<CrossEffectDegree>,
    /// Sum of the per-degree norms.
    pub total_norm: f64,
    pub negligible: bool,
}

fn check_arity(k: usize, limits: &Limits) -> Result<()> {
    if k == 0 {
        return Err(SocError::Validation("cross-effects need arity ≥ 1".into()));
    }
    if k > limits.max_arity {
        return Err(SocError::capacity(
            "cross-effect arity",
            k as u128,
            limits.max_arity as u128,
        ));
    }
    Ok(())
}

/// Per-degree dimensions of `cr_k F` by inclusion-exclusion over input subsets.
pub fn cross_effect_dims(
    f: &PowerSeriesFunctor,
    input_dims: &[usize],
    n_max: usize,
    limits: &Limits,
) -> Result<Vec<BigUint>> {
    let k = input_dims.len();
    check_arity(k, limits)?;
    let subset_sums: Vec<(usize, BigInt)> = (0u32..1 << k)
        .map(|mask| {
            let total: usize = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| input_dims[i])
                .sum();
            (mask.count_ones() as usize, BigInt::from(total))
        })
        .collect();
    (0..=n_max)
        .map(|m| {
            if f.coeff(m) == 0.0 {
                return Ok(BigUint::zero());
            }
            let mut acc = BigInt::zero();
            for (size, total) in &subset_sums {
                let term = num_traits::pow(total.clone(), m);
                if (k - size).is_multiple_of(2) {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if acc.is_negative() {
                return Err(SocError::Invariant(format!(
                    "negative cross-effect dimension {acc} in degree {m}"
                )));
            }
            Ok(acc.to_biguint().expect("nonnegative"))
        })
        .collect()
}

/// Calls `visit` with each surjection `[m] → [k]` (0-based values), in
/// lexicographic order.
fn for_each_surjection(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if m < k {
        return;
    }
    let mut map = vec![0usize; m];
    let mut hits = vec![0usize; k];
    hits[0] = m;
    loop {
        if hits.iter().all(|&h| h > 0) {
            visit(&map);
        }
        // Odometer increment, last position fastest.
        let mut pos = m;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            hits[map[pos]] -= 1;
            if map[pos] + 1 < k {
                map[pos] += 1;
                hits[map[pos]] += 1;
                break;
            }
            map[pos] = 0;
            hits[0] += 1;
        }
    }
}

fn check_surjection_budget(m: usize, k: usize, limits: &Limits) -> Result<()> {
    if m > limits.max_surjection_degree {
        return Err(SocError::capacity(
            "surjection enumeration degree",
            m as u128,
            limits.max_surjection_degree as u128,
        ));
    }
    let maps = (k as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if maps > SURJECTION_ENUMERATION_CAP {
        return Err(SocError::capacity(
            "surjection enumeration maps",
            maps,
            SURJECTION_ENUMERATION_CAP,
        ));
    }
    Ok(())
}

/// Per-degree dimensions by summing `Π_j d_{φ(j)}` over surjections `φ`.
pub fn surjection_oracle_dims(
    f: &PowerSeriesFunctor,
    input_dims: &[usize],
    n_max: usize,
    limits: &Limits,
) -> Result<Vec<BigUint>> {
    let k = input_dims.len();
    check_arity(k, limits)?;
    (0..=n_max)
        .map(|m| {
            check_surjection_budget(m, k, limits)?;
            if f.coeff(m) == 0.0 {
                return Ok(BigUint::zero());
            }
            // Machine integers first; redo in big integers on overflow.
            let mut small: Option<u128> = Some(0);
            for_each_surjection(m, k, |phi| {
                small = small.and_then(|acc| {
                    phi.iter()
                        .try_fold(1u128, |p, &i| p.checked_mul(input_dims[i] as u128))
                        .and_then(|p| acc.checked_add(p))
                });
            });
            if let Some(total) = small {
                return Ok(BigUint::from(total));
            }
            let mut total = BigUint::zero();
            for_each_surjection(m, k, |phi| {
                total += phi
                    .iter()
                    .fold(BigUint::from(1u8), |acc, &i| acc * input_dims[i]);
            });
            Ok(total)
        })
        .collect()
}

/// One summand of the degree-`m` cross-effect.
#[derive(Debug, Clone)]
pub struct SurjectionBlock {
    /// The surjection as 0-based input indices.
    pub map: Vec<usize>,
    pub block: DenseMatrix,
}

fn check_inputs(inputs: &[DenseMatrix], limits: &Limits) -> Result<()> {
    check_arity(inputs.len(), limits)?;
    for a in inputs {
        a.require_square("cross_effect")?;
    }
    Ok(())
}

/// Blocks `c_m·A_{φ(1)}⊗…⊗A_{φ(m)}` for every surjection `φ: [m] → [k]`.
pub fn cross_effect_blocks(
    f: &PowerSeriesFunctor,
    inputs: &[DenseMatrix],
    m: usize,
    limits: &Limits,
) -> Result<Vec<SurjectionBlock>> {
    check_inputs(inputs, limits)?;
    let k = inputs.len();
    check_surjection_budget(m, k, limits)?;
    let c = f.coeff(m);
    let mut maps = Vec::new();
    for_each_surjection(m, k, |phi| maps.push(phi.to_vec()));
    maps.into_iter()
        .map(|map| {
            let mut block = DenseMatrix::identity(1);
            for &i in &map {
                block = kron(&block, &inputs[i], limits)?;
            }
            Ok(SurjectionBlock {
                map,
                block: block.scale_real(c),
            })
        })
        .collect()
}

/// Degree-`m` part of `cr_k F(A₁..A_k)` as one block-diagonal matrix; 0×0
/// when `m < k`.
pub fn cross_effect_evaluate(
    f: &PowerSeriesFunctor,
    inputs: &[DenseMatrix],
    m: usize,
    limits: &Limits,
) -> Result<DenseMatrix> {
    let blocks = cross_effect_blocks(f, inputs, m, limits)?;
    let refs: Vec<&DenseMatrix> = blocks.iter().map(|b| &b.block).collect();
    direct_sum_many(&refs, limits)
}

fn assemble_report(arity: usize, per_degree: Vec<CrossEffectDegree>, tol: f64) -> CrossEffectReport {
    let total_norm = per_degree.iter().map(|d| d.norm_estimate).sum();
    let negligible = per_degree.iter().all(|d| d.radius <= tol);
    CrossEffectReport {
        arity,
        per_degree,
        total_norm,
        negligible,
    }
}

/// Cross-effect report for degrees `0..=n_max`.
///
/// Block norms and radii are assembled from the factors: for a Kronecker
/// product, `‖⊗Aᵢ‖ = Π‖Aᵢ‖` and `r(⊗Aᵢ) = Π r(Aᵢ)`, so each input is measured
/// once. [`cross_effect_report_direct`] measures the assembled blocks instead.
pub fn cross_effect_report(
    f: &PowerSeriesFunctor,
    inputs: &[DenseMatrix],
    n_max: usize,
    tol: f64,
    limits: &Limits,
) -> Result<CrossEffectReport> {
    check_inputs(inputs, limits)?;
    let k = inputs.len();
    let dims: Vec<usize> = inputs.iter().map(DenseMatrix::rows).collect();
    let dim_table = cross_effect_dims(f, &dims, n_max, limits)?;
    let norms: Vec<f64> = inputs
        .iter()
        .map(|a| operator_norm(a, NormSettings::default()).value)
        .collect();
    let radii: Vec<f64> = inputs
        .iter()
        .map(|a| spectral_radius(a, NormSettings::gelfand()).value)
        .collect();
    let mut per_degree = Vec::with_capacity(n_max + 1);
    for (m, dim) in dim_table.into_iter().enumerate() {
        let c = f.coeff(m).abs();
        let (mut norm, mut radius) = (0.0f64, 0.0f64);
        if c != 0.0 && m >= k {
            check_surjection_budget(m, k, limits)?;
            for_each_surjection(m, k, |phi| {
                norm = norm.max(c * phi.iter().map(|&i| norms[i]).product::<f64>());
                radius = radius.max(c * phi.iter().map(|&i| radii[i]).product::<f64>());
            });
        }
        per_degree.push(CrossEffectDegree {
            degree: m,
            dim,
            norm_estimate: norm,
            radius,
        });
    }
    Ok(assemble_report(k, per_degree, tol))
}

/// Same report, measuring every explicit block with the iterative kernels.
pub fn cross_effect_report_direct(
    f: &PowerSeriesFunctor,
    inputs: &[DenseMatrix],
    n_max: usize,
    tol: f64,
    limits: &Limits,
) -> Result<CrossEffectReport> {
    check_inputs(inputs, limits)?;
    let k = inputs.len();
    let mut per_degree = Vec::with_capacity(n_max + 1);
    for m in 0..=n_max {
        let blocks = cross_effect_blocks(f, inputs, m, limits)?;
        let dim: usize = blocks.iter().map(|b| b.block.rows()).sum();
        let (mut norm, mut radius) = (0.0f64, 0.0f64);
        if f.coeff(m) != 0.0 {
            for b in &blocks {
                norm = norm.max(operator_norm(&b.block, NormSettings::default()).value);
                radius = radius.max(spectral_radius(&b.block, NormSettings::gelfand()).value);
            }
        }
        per_degree.push(CrossEffectDegree {
            degree: m,
            dim: if f.coeff(m) != 0.0 { BigUint::from(dim) } else { BigUint::zero() },
            norm_estimate: norm,
            radius,
        });
    }
    Ok(assemble_report(k, per_degree, tol))
}

/// Every block's spectral radius is at most `tol`.
pub fn is_spectrally_negligible(report: &CrossEffectReport, tol: f64) -> bool {
    report.per_degree.iter().all(|d| d.radius <= tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcisionSample {
    pub index: usize,
    pub max_radius: f64,
    pub max_norm: f64,
    /// `tol·(1 + Σ‖Aᵢ‖)`.
    pub norm_threshold: f64,
    /// All block radii ≤ tol.
    pub negligible: bool,
    /// All block norms ≤ the threshold.
    pub norm_small: bool,
    /// Empirical ratio `max_norm / max_radius`; 1 on the normal class, NaN when
    /// both vanish.
    pub control_ratio: f64,
}

impl ExcisionSample {
    pub fn agree(&self) -> bool {
        self.negligible == self.norm_small
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcisionReport {
    pub n: usize,
    pub samples: Vec<ExcisionSample>,
}

impl ExcisionReport {
    pub fn all_agree(&self) -> bool {
        self.samples.iter().all(ExcisionSample::agree)
    }

    pub fn all_negligible(&self) -> bool {
        self.samples.iter().all(|s| s.negligible)
    }

    pub fn none_negligible(&self) -> bool {
        self.samples.iter().all(|s| !s.negligible && !s.norm_small)
    }
}

/// Checks, sample by sample, that negligibility of `cr_{n+1}F` coincides with
/// its block norms being at most `tol·(1 + Σ‖Aᵢ‖)`. Degrees `0..=n_max` are
/// inspected. Inputs must be normal.
pub fn excision_check(
    f: &PowerSeriesFunctor,
    n: usize,
    samples: &[Vec<DenseMatrix>],
    tol: f64,
    n_max: usize,
    limits: &Limits,
) -> Result<ExcisionReport> {
    if n_max < n + 1 {
        return Err(SocError::Validation(format!(
            "excision check for n = {n} must inspect degrees up to at least {}",
            n + 1
        )));
    }
    let mut out = Vec::with_capacity(samples.len());
    for (index, tuple) in samples.iter().enumerate() {
        if tuple.len() != n + 1 {
            return Err(SocError::Validation(format!(
                "sample {index} has {} inputs, expected {}",
                tuple.len(),
                n + 1
            )));
        }
        for a in tuple {
            a.require_normal(NORMALITY_REL_TOL, "the excision criterion on the normal class")?;
        }
        let report = cross_effect_report(f, tuple, n_max, tol, limits)?;
        let input_norms: f64 = tuple
            .iter()
            .map(|a| operator_norm(a, NormSettings::default()).value)
            .sum();
        let norm_threshold = tol * (1.0 + input_norms);
        let max_norm = report.per_degree.iter().map(|d| d.norm_estimate).fold(0.0, f64::max);
        let max_radius = report.per_degree.iter().map(|d| d.radius).fold(0.0, f64::max);
        out.push(ExcisionSample {
            index,
            max_radius,
            max_norm,
            norm_threshold,
            negligible: is_spectrally_negligible(&report, tol),
            norm_small: report.per_degree.iter().all(|d| d.norm_estimate <= norm_threshold),
            control_ratio: if max_radius > 0.0 { max_norm / max_radius } else { f64::NAN },
        });
    }
    Ok(ExcisionReport { n, samples: out })
}

/// Dimensions as `u64` for display; panics if they do not fit.
pub fn dims_to_u64(dims: &[BigUint]) -> Vec<u64> {
    dims.iter().map(|d| d.to_u64().expect("dimension fits in u64")).collect()
}
