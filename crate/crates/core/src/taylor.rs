//! Taylor tower of a power-series functor: truncations, remainder norms,
//! Cauchy–Hadamard radius estimates, remainder-versus-bound tables and
//! coefficient reconstruction from scalar probes.

use crate::functor::{evaluate, PowerSeriesFunctor};
use crate::linalg::{spectral_radius, DenseMatrix, DirectSumNorm, NormSettings, NORMALITY_REL_TOL};
use crate::{Limits, Result, SocError};

/// Tail smallness required of the truncated series defining `C_s`:
/// `|c_N|·s^N < CS_TAIL_REL·C_s`.
pub const CS_TAIL_REL: f64 = 1e-12;

/// Largest accepted 1-norm condition estimate for a probe Vandermonde matrix.
pub const VANDERMONDE_CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TowerConfig {
    pub convention: DirectSumNorm,
    pub n_max: usize,
    /// Trailing window of degrees used for the limsup estimate.
    pub radius_window: usize,
    pub tol: f64,
}

impl Default for TowerConfig {
    fn default() -> Self {
        TowerConfig {
            convention: DirectSumNorm::LayerSum,
            n_max: 16,
            radius_window: 6,
            tol: 1e-12,
        }
    }
}

impl TowerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radius_window < 2 || self.n_max < self.radius_window {
            return Err(SocError::Validation(format!(
                "tower config needs n_max ≥ radius_window ≥ 2 (got n_max {}, window {})",
                self.n_max, self.radius_window
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(SocError::Validation(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// `PₙF`: coefficients above degree `n` set to zero, truncation unchanged.
pub fn truncate(f: &PowerSeriesFunctor, n: usize) -> Result<PowerSeriesFunctor> {
    if n > f.truncation() {
        return Err(SocError::Validation(format!(
            "cannot take P{n} of {} with truncation {}",
            f.name(),
            f.truncation()
        )));
    }
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| if k <= n { c } else { 0.0 })
        .collect();
    PowerSeriesFunctor::new(format!("P{n}({})", f.name()), coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderValue {
    pub value: f64,
    /// `r` is at or beyond the estimated radius of convergence.
    pub beyond_radius: bool,
}

/// Norm bound of `F − PₙF` at spectral size `r`: the tail
/// `|c_k|·r^k, k = n+1..N`, combined by the configured convention.
pub fn remainder_norm(
    f: &PowerSeriesFunctor,
    n: usize,
    r: f64,
    config: &TowerConfig,
) -> Result<RemainderValue> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(SocError::Validation(format!("spectral size must be finite and ≥ 0, got {r}")));
    }
    let radius = radius_estimate(f, config)?;
    let tail = (n + 1..=f.truncation())
        .rev()
        .map(|k| f.coeff(k).abs() * r.powi(k as i32));
    Ok(RemainderValue {
        value: config.convention.combine(tail),
        beyond_radius: r >= radius.estimate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Constant,
    Increasing,
    Decreasing,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusEstimate {
    /// Estimated radius of convergence; `+∞` for an eventually-zero series.
    pub estimate: f64,
    pub eventually_zero: bool,
    /// `(n, |cₙ|^{1/n})` over the nonzero coefficients of the trailing window.
    pub window: Vec<(usize, f64)>,
    pub trend: Trend,
}

fn classify(values: &[f64]) -> Trend {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    let pairs: Vec<(f64, f64)> = values.windows(2).map(|w| (w[0], w[1])).collect();
    if pairs.iter().all(|&(a, b)| close(a, b)) {
        Trend::Constant
    } else if pairs.iter().all(|&(a, b)| b >= a || close(a, b)) {
        Trend::Increasing
    } else if pairs.iter().all(|&(a, b)| b <= a || close(a, b)) {
        Trend::Decreasing
    } else {
        Trend::Mixed
    }
}

/// Cauchy–Hadamard estimate `1 / limsup |cₙ|^{1/n}` from the trailing window
/// of degrees `N−w+1..=N`.
///
/// When the window values are monotone the tail-most value is the best
/// available proxy for the limsup (a decreasing sequence stays below it, an
/// increasing one above), so it is used. Oscillating windows use their
/// maximum. A window of zero coefficients marks the series as eventually
/// zero with radius `+∞`.
pub fn radius_estimate(f: &PowerSeriesFunctor, config: &TowerConfig) -> Result<RadiusEstimate> {
    if config.radius_window < 2 {
        return Err(SocError::Validation("radius window must be at least 2".into()));
    }
    let top = f.truncation();
    let start = (top + 1).saturating_sub(config.radius_window).max(1);
    let window: Vec<(usize, f64)> = (start..=top)
        .filter(|&n| f.coeff(n) != 0.0)
        .map(|n| (n, f.coeff(n).abs().powf(1.0 / n as f64)))
        .collect();
    if window.is_empty() {
        return Ok(RadiusEstimate {
            estimate: f64::INFINITY,
            eventually_zero: true,
            window,
            trend: Trend::Constant,
        });
    }
    let values: Vec<f64> = window.iter().map(|&(_, v)| v).collect();
    let trend = classify(&values);
    let limsup = match trend {
        Trend::Mixed => values.iter().copied().fold(0.0, f64::max),
        _ => *values.last().expect("non-empty"),
    };
    Ok(RadiusEstimate {
        estimate: 1.0 / limsup,
        eventually_zero: false,
        window,
        trend,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub remainder: f64,
    /// `C_s·(r/s)^{n+1}`.
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub spectral_size: f64,
    pub s: f64,
    pub c_s: f64,
    pub rows: Vec<ConvergenceRow>,
}

/// `a < b`, false when either is NaN.
fn below(a: f64, b: f64) -> bool {
    a.partial_cmp(&b) == Some(std::cmp::Ordering::Less)
}

/// `C_s = Σ |c_k|·s^k` over the stored coefficients, refusing when the last
/// term is not negligible.
pub fn growth_constant(f: &PowerSeriesFunctor, s: f64) -> Result<f64> {
    let terms: Vec<f64> = (0..=f.truncation())
        .map(|k| f.coeff(k).abs() * s.powi(k as i32))
        .collect();
    let c_s: f64 = terms.iter().rev().sum();
    let last = *terms.last().expect("non-empty");
    if last != 0.0 && !below(last, CS_TAIL_REL * c_s) {
        return Err(SocError::contract(
            format!(
                "truncation {} too short: |c_N|·s^N = {last:e} is not below {CS_TAIL_REL:e}·C_s = {:e}",
                f.truncation(),
                CS_TAIL_REL * c_s
            ),
            "the constant C_s of the quantitative convergence bound",
        ));
    }
    Ok(c_s)
}

/// Remainder norms of `F` at `A` against the bound `C_s·(r/s)^{n+1}`, for
/// `n = 0..=config.n_max`, where `r` is the spectral radius of `A`.
pub fn convergence_experiment(
    f: &PowerSeriesFunctor,
    a: &DenseMatrix,
    s: f64,
    config: &TowerConfig,
) -> Result<ConvergenceTable> {
    config.validate()?;
    a.require_normal(NORMALITY_REL_TOL, "the quantitative convergence bound")?;
    let r = spectral_radius(a, NormSettings::gelfand()).value;
    convergence_table(f, r, s, config)
}

/// [`convergence_experiment`] for a given spectral size.
pub fn convergence_table(
    f: &PowerSeriesFunctor,
    r: f64,
    s: f64,
    config: &TowerConfig,
) -> Result<ConvergenceTable> {
    config.validate()?;
    if !below(r, s) {
        return Err(SocError::contract(
            format!("spectral size r = {r} must be strictly below s = {s}"),
            "the quantitative convergence bound (r < s)",
        ));
    }
    let radius = radius_estimate(f, config)?.estimate;
    if !below(s, radius) {
        return Err(SocError::contract(
            format!("s = {s} must be strictly below the estimated radius {radius}"),
            "the quantitative convergence bound (s < R_F)",
        ));
    }
    let c_s = growth_constant(f, s)?;
    let q = r / s;
    let mut rows = Vec::with_capacity(config.n_max + 1);
    for n in 0..=config.n_max {
        let remainder = remainder_norm(f, n, r, config)?.value;
        let bound = c_s * q.powi(n as i32 + 1);
        if remainder > bound + config.tol {
            return Err(SocError::Invariant(format!(
                "remainder {remainder:e} exceeds bound {bound:e} at n = {n}"
            )));
        }
        let ratio = if bound > 0.0 { remainder / bound } else { 0.0 };
        rows.push(ConvergenceRow {
            n,
            remainder,
            bound,
            ratio,
        });
    }
    Ok(ConvergenceTable {
        spectral_size: r,
        s,
        c_s,
        rows,
    })
}

/// Probes `0.1, 0.2, …, 0.1·(n_max+1)`.
pub fn default_probes(n_max: usize) -> Vec<f64> {
    (1..=n_max + 1).map(|i| 0.1 * i as f64).collect()
}

/// LU factorization with partial pivoting of a small dense real matrix.
struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: Vec<f64>, n: usize) -> Result<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                .expect("non-empty");
            if a[pivot * n + col] == 0.0 {
                return Err(SocError::Conditioning {
                    estimate: f64::INFINITY,
                    limit: VANDERMONDE_CONDITION_LIMIT,
                });
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                perm.swap(col, pivot);
            }
            for row in col + 1..n {
                let factor = a[row * n + col] / a[col * n + col];
                a[row * n + col] = factor;
                for j in col + 1..n {
                    a[row * n + j] -= factor * a[col * n + j];
                }
            }
        }
        Ok(Lu { n, lu: a, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

fn one_norm(a: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Recovers `c₀..c_{n_max}` from the values `F(λᵢ)` on 1×1 probe matrices by
/// solving the Vandermonde system. Needs `n_max + 1` distinct positive probes
/// and `n_max ≥` the truncation of `f` (otherwise higher terms alias).
pub fn reconstruct_roundtrip(
    f: &PowerSeriesFunctor,
    probes: &[f64],
    n_max: usize,
    limits: &Limits,
) -> Result<PowerSeriesFunctor> {
    if probes.len() != n_max + 1 {
        return Err(SocError::Validation(format!(
            "{} probes given, {} needed for degree {n_max}",
            probes.len(),
            n_max + 1
        )));
    }
    if n_max < f.truncation() {
        return Err(SocError::Validation(format!(
            "reconstruction degree {n_max} is below truncation {}; higher terms would alias",
            f.truncation()
        )));
    }
    if probes.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
        return Err(SocError::Validation("probes must be finite and positive".into()));
    }
    let mut sorted = probes.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(SocError::Validation("probes must be distinct".into()));
    }

    let values: Vec<f64> = probes
        .iter()
        .map(|&p| {
            let ev = evaluate(f, &DenseMatrix::scalar(p), f.truncation(), limits)?;
            Ok(ev.layers.iter().map(|m| m.get(0, 0).re).rev().sum::<f64>())
        })
        .collect::<Result<_>>()?;

    let n = n_max + 1;
    let vandermonde: Vec<f64> = probes
        .iter()
        .flat_map(|&p| (0..n).map(move |j| p.powi(j as i32)))
        .collect();
    let lu = Lu::factor(vandermonde.clone(), n)?;
    let mut inverse = vec![0.0; n * n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        for (i, x) in lu.solve(&e).into_iter().enumerate() {
            inverse[i * n + j] = x;
        }
    }
    let condition = one_norm(&vandermonde, n) * one_norm(&inverse, n);
    if condition.is_nan() || condition > VANDERMONDE_CONDITION_LIMIT {
        return Err(SocError::Conditioning {
            estimate: condition,
            limit: VANDERMONDE_CONDITION_LIMIT,
        });
    }
    let coeffs = lu.solve(&values);
    PowerSeriesFunctor::new(format!("reconstructed-{}", f.name()), coeffs)
}
