//! Growth profiles, the composition-stability constant, the binomial step of
//! its proof, and admissibility checks on normal inputs.

use crate::functor::{compose_coeffs, evaluate, PowerSeriesFunctor};
use crate::linalg::{spectral_radius, DenseMatrix, DirectSumNorm, NormSettings, NORMALITY_REL_TOL};
use crate::taylor::{radius_estimate, RadiusEstimate, TowerConfig};
use crate::{Limits, Result, SocError};
use serde::{Deserialize, Serialize};

/// Exponential coefficient bound `|cₙ| ≤ C·ρⁿ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthProfile {
    pub c: f64,
    pub rho: f64,
    /// `ρ` was attained at the last stored degree, so the true profile may
    /// be larger.
    pub peak_at_last_degree: bool,
}

impl GrowthProfile {
    /// Checks `|cₙ| ≤ C·ρⁿ·(1 + rel_tol)` for every stored degree.
    pub fn dominates(&self, f: &PowerSeriesFunctor, rel_tol: f64) -> bool {
        f.coeffs().iter().enumerate().all(|(n, c)| {
            let bound = self.c * self.rho.powi(n as i32);
            c.abs() <= bound * (1.0 + rel_tol)
        })
    }
}

/// Tightest profile at the stored truncation: `ρ = max_{n≥1} |cₙ|^{1/n}`,
/// `C = max_n |cₙ|/ρⁿ`. With `ρ = 0` only `c₀` survives and `C = |c₀|`.
pub fn fit_growth_profile(f: &PowerSeriesFunctor) -> GrowthProfile {
    let mut rho = 0.0f64;
    let mut arg = 0;
    for n in 1..=f.truncation() {
        let v = f.coeff(n).abs().powf(1.0 / n as f64);
        if v > rho {
            rho = v;
            arg = n;
        }
    }
    let c = if rho == 0.0 {
        f.coeff(0).abs()
    } else {
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| c.abs() / rho.powi(n as i32))
            .fold(0.0, f64::max)
    };
    GrowthProfile {
        c,
        rho,
        peak_at_last_degree: rho > 0.0 && arg == f.truncation() && f.truncation() > 1,
    }
}

/// `γ = K_pl·ρ_G·(1 + C_G·ρ_F)`.
pub fn composition_gamma(pf: &GrowthProfile, pg: &GrowthProfile, k_pl: f64) -> Result<f64> {
    if !(k_pl >= 1.0 && k_pl.is_finite()) {
        return Err(SocError::Validation(format!("K_pl must be finite and ≥ 1, got {k_pl}")));
    }
    Ok(k_pl * pg.rho * (1.0 + pg.c * pf.rho))
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `(Σ_{k=1..n} xᵏ·C(n−1, k−1), x·(1+x)^{n−1})`.
pub fn binomial_identity_check(x: f64, n: u32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(SocError::Validation("binomial identity needs n ≥ 1".into()));
    }
    let lhs = (1..=n as u64)
        .map(|k| x.powi(k as i32) * binomial(n as u64 - 1, k - 1) as f64)
        .sum();
    let rhs = x * (1.0 + x).powi(n as i32 - 1);
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRow {
    pub n: usize,
    pub coefficient: f64,
    /// `C'·γⁿ`.
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub outer: GrowthProfile,
    pub inner: GrowthProfile,
    pub k_pl: f64,
    pub gamma: f64,
    /// Smallest `C'` with `|cₙ(f∘g)| ≤ C'·γⁿ` over the table.
    pub c_prime: f64,
    pub composite: PowerSeriesFunctor,
    pub radius: RadiusEstimate,
    pub rows: Vec<StabilityRow>,
}

impl StabilityReport {
    /// `radius(f∘g) ≥ 1/γ − tol`.
    pub fn radius_bound_holds(&self, tol: f64) -> bool {
        self.gamma == 0.0 || self.radius.estimate >= 1.0 / self.gamma - tol
    }
}

/// Composes `f∘g` to degree `n_max` and measures its coefficients against
/// `γⁿ` built from the fitted profiles.
pub fn stability_report(
    f: &PowerSeriesFunctor,
    g: &PowerSeriesFunctor,
    k_pl: f64,
    n_max: usize,
    config: &TowerConfig,
    limits: &Limits,
) -> Result<StabilityReport> {
    let outer = fit_growth_profile(&f.restricted(n_max)?);
    let inner = fit_growth_profile(&g.restricted(n_max)?);
    let gamma = composition_gamma(&outer, &inner, k_pl)?;
    let composite = compose_coeffs(f, g, n_max, limits)?;
    let radius = radius_estimate(&composite, config)?;
    let raw: Vec<f64> = (0..=n_max)
        .map(|n| {
            let c = composite.coeff(n).abs();
            let scale = gamma.powi(n as i32);
            if c == 0.0 {
                0.0
            } else if scale == 0.0 {
                f64::INFINITY
            } else {
                c / scale
            }
        })
        .collect();
    let c_prime = raw.iter().copied().fold(0.0, f64::max);
    let rows = (0..=n_max)
        .map(|n| {
            let bound = c_prime * gamma.powi(n as i32);
            let coefficient = composite.coeff(n);
            StabilityRow {
                n,
                coefficient,
                bound,
                ratio: if bound > 0.0 { coefficient.abs() / bound } else { 0.0 },
            }
        })
        .collect();
    Ok(StabilityReport {
        outer,
        inner,
        k_pl,
        gamma,
        c_prime,
        composite,
        radius,
        rows,
    })
}

/// Growth function `Φ` of the admissibility inequality `‖F(A)‖ ≤ Φ(r(A))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GrowthFunction {
    Linear { c: f64 },
    Exp { c: f64 },
    Poly { coeffs: Vec<f64> },
}

impl GrowthFunction {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            GrowthFunction::Linear { c } => c * r,
            GrowthFunction::Exp { c } => c * r.exp(),
            GrowthFunction::Poly { coeffs } => coeffs.iter().rev().fold(0.0, |acc, &a| acc * r + a),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            GrowthFunction::Linear { c } | GrowthFunction::Exp { c } => c.is_finite() && *c >= 0.0,
            GrowthFunction::Poly { coeffs } => {
                !coeffs.is_empty() && coeffs.iter().all(|a| a.is_finite() && *a >= 0.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(SocError::Validation(format!(
                "growth function {self:?} must have finite nonnegative constants"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilitySample {
    pub index: usize,
    pub spectral_size: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Highest layer evaluated for this sample.
    pub evaluated_degree: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub phi: GrowthFunction,
    pub samples: Vec<AdmissibilitySample>,
}

impl AdmissibilityReport {
    pub fn all_pass(&self) -> bool {
        self.samples.iter().all(|s| s.pass)
    }
}

fn max_degree_within(d: usize, cap: usize, limit: usize) -> usize {
    let mut n = 0;
    let mut side: u128 = 1;
    while n < limit {
        let next = side * d as u128;
        if next * next > cap as u128 {
            break;
        }
        side = next;
        n += 1;
    }
    n
}

/// Checks `‖F(A)‖ ≤ Φ(r(A)) + tol` with the layer-sum norm on each normal
/// input. Layers are evaluated up to `max_degree`, the truncation, or the
/// largest degree within the entry cap, whichever is smallest.
pub fn admissibility_check(
    f: &PowerSeriesFunctor,
    inputs: &[DenseMatrix],
    phi: &GrowthFunction,
    tol: f64,
    max_degree: usize,
    limits: &Limits,
) -> Result<AdmissibilityReport> {
    phi.validate()?;
    let mut samples = Vec::with_capacity(inputs.len());
    for (index, a) in inputs.iter().enumerate() {
        let d = a.require_square("admissibility_check")?;
        a.require_normal(NORMALITY_REL_TOL, "admissibility on the spectrally controlled class")?;
        let r = spectral_radius(a, NormSettings::gelfand()).value;
        let limit = max_degree.min(f.truncation());
        let degree = if d <= 1 {
            limit
        } else {
            max_degree_within(d, limits.max_entries, limit)
        };
        let lhs = evaluate(f, a, degree, limits)?.total_norm(DirectSumNorm::LayerSum);
        let rhs = phi.eval(r);
        samples.push(AdmissibilitySample {
            index,
            spectral_size: r,
            lhs,
            rhs,
            evaluated_degree: degree,
            pass: lhs <= rhs + tol,
        });
    }
    Ok(AdmissibilityReport {
        phi: phi.clone(),
        samples,
    })
}
