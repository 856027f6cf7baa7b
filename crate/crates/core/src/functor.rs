//! Power-series functors `F(A) = ⊕ₙ cₙ·A^{⊗n}`.
//!
//! Coefficients are normalized derivative norms: `‖∂ₙF‖ = |cₙ|`, so the
//! exponential functor has `cₙ = 1/n!`. Composition therefore matches the
//! Taylor coefficients of the scalar composite `Σ cₖ(f)·(Σ cⱼ(g) xʲ)ᵏ`.

use crate::limits::{MAX_FACTORIAL_TRUNCATION, MAX_TRUNCATION};
use crate::linalg::{
    direct_sum_many, operator_norm, spectral_radius, tensor_power, DenseMatrix, DirectSumNorm,
    NormSettings,
};
use crate::scalar::{rational_from_f64, Scalar};
use crate::symseq::partition_type_counts;
use crate::{Limits, Result, SocError};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeriesFunctor {
    name: String,
    coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CanonicalKind {
    Identity,
    Constant(f64),
    Quadratic,
    Exponential,
    Geometric,
    /// Coefficients `c₀..c_m`, zero-padded to the truncation.
    Polynomial(Vec<f64>),
    Factorial,
}

impl PowerSeriesFunctor {
    pub fn new(name: impl Into<String>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(SocError::Validation("a functor needs at least c₀".into()));
        }
        if coeffs.len() > MAX_TRUNCATION + 1 {
            return Err(SocError::capacity(
                "functor truncation",
                (coeffs.len() - 1) as u128,
                MAX_TRUNCATION as u128,
            ));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(SocError::Validation(format!("coefficient c{i} is not finite")));
        }
        Ok(PowerSeriesFunctor {
            name: name.into(),
            coeffs,
        })
    }

    pub fn canonical(kind: CanonicalKind, truncation: usize) -> Result<Self> {
        make_canonical(kind, truncation)
    }

    /// Zero functor with the given truncation.
    pub fn zero(truncation: usize) -> Self {
        PowerSeriesFunctor {
            name: "zero".into(),
            coeffs: vec![0.0; truncation + 1],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `F(0) = 0`.
    pub fn is_reduced(&self) -> bool {
        self.coeffs[0] == 0.0
    }

    /// Copy with the constant term removed.
    pub fn reduced(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = 0.0;
        PowerSeriesFunctor {
            name: format!("reduced-{}", self.name),
            coeffs,
        }
    }

    /// Copy keeping only coefficients up to degree `n` (the truncation shrinks).
    pub fn restricted(&self, n: usize) -> Result<Self> {
        if n > self.truncation() {
            return Err(SocError::Validation(format!(
                "cannot restrict {} (truncation {}) to degree {n}",
                self.name,
                self.truncation()
            )));
        }
        Ok(PowerSeriesFunctor {
            name: self.name.clone(),
            coeffs: self.coeffs[..=n].to_vec(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Highest degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    /// `Σ cₙ xⁿ` for a scalar argument.
    pub fn eval_scalar(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Coefficients as exact rationals.
    pub fn exact_coeffs(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|&c| rational_from_f64(c).expect("coefficients are finite"))
            .collect()
    }
}

pub fn make_canonical(kind: CanonicalKind, truncation: usize) -> Result<PowerSeriesFunctor> {
    if truncation < 1 {
        return Err(SocError::Validation("canonical functors need truncation ≥ 1".into()));
    }
    if truncation > MAX_TRUNCATION {
        return Err(SocError::capacity(
            "functor truncation",
            truncation as u128,
            MAX_TRUNCATION as u128,
        ));
    }
    let n = truncation + 1;
    let (name, coeffs) = match kind {
        CanonicalKind::Identity => {
            let mut c = vec![0.0; n];
            c[1] = 1.0;
            ("identity".to_string(), c)
        }
        CanonicalKind::Constant(value) => {
            let mut c = vec![0.0; n];
            c[0] = value;
            ("constant".to_string(), c)
        }
        CanonicalKind::Quadratic => {
            let mut c = vec![0.0; n];
            if truncation >= 2 {
                c[2] = 1.0;
            } else {
                return Err(SocError::Validation("quadratic functor needs truncation ≥ 2".into()));
            }
            ("quadratic".to_string(), c)
        }
        CanonicalKind::Exponential => {
            let mut c = Vec::with_capacity(n);
            let mut fact = 1.0;
            for k in 0..n {
                if k > 0 {
                    fact *= k as f64;
                }
                c.push(1.0 / fact);
            }
            ("exponential".to_string(), c)
        }
        CanonicalKind::Geometric => ("geometric".to_string(), vec![1.0; n]),
        CanonicalKind::Polynomial(p) => {
            if p.len() > n {
                return Err(SocError::Validation(format!(
                    "polynomial of degree {} exceeds truncation {truncation}",
                    p.len() - 1
                )));
            }
            let mut c = p;
            c.resize(n, 0.0);
            ("polynomial".to_string(), c)
        }
        CanonicalKind::Factorial => {
            if truncation > MAX_FACTORIAL_TRUNCATION {
                return Err(SocError::capacity(
                    "factorial functor truncation (overflow guard)",
                    truncation as u128,
                    MAX_FACTORIAL_TRUNCATION as u128,
                ));
            }
            let mut c = Vec::with_capacity(n);
            let mut fact = 1.0;
            for k in 0..n {
                if k > 0 {
                    fact *= k as f64;
                }
                c.push(fact);
            }
            ("factorial".to_string(), c)
        }
    };
    PowerSeriesFunctor::new(name, coeffs)
}

/// JSON description of a functor, e.g. `{"kind":"exponential","truncation":16}`
/// or `{"kind":"polynomial","coeffs":[0,1,0.5]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub kind: FunctorKindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    /// Drop the constant term after construction.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reduced: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctorKindTag {
    Identity,
    Constant,
    Quadratic,
    Exponential,
    Geometric,
    Polynomial,
    Factorial,
    Zero,
}

/// Truncation used when a functor config does not give one.
pub const DEFAULT_TRUNCATION: usize = 16;

impl FunctorSpec {
    pub fn build(&self) -> Result<PowerSeriesFunctor> {
        let misplaced = |field: &str| {
            SocError::Validation(format!("field {field:?} is not valid for kind {:?}", self.kind))
        };
        if self.value.is_some() && self.kind != FunctorKindTag::Constant {
            return Err(misplaced("value"));
        }
        if self.coeffs.is_some() && self.kind != FunctorKindTag::Polynomial {
            return Err(misplaced("coeffs"));
        }
        let truncation = self.truncation.unwrap_or(DEFAULT_TRUNCATION);
        let f = match self.kind {
            FunctorKindTag::Identity => make_canonical(CanonicalKind::Identity, truncation)?,
            FunctorKindTag::Constant => {
                let value = self
                    .value
                    .ok_or_else(|| SocError::Validation("constant functor needs \"value\"".into()))?;
                make_canonical(CanonicalKind::Constant(value), truncation)?
            }
            FunctorKindTag::Quadratic => make_canonical(CanonicalKind::Quadratic, truncation)?,
            FunctorKindTag::Exponential => make_canonical(CanonicalKind::Exponential, truncation)?,
            FunctorKindTag::Geometric => make_canonical(CanonicalKind::Geometric, truncation)?,
            FunctorKindTag::Factorial => make_canonical(CanonicalKind::Factorial, truncation)?,
            FunctorKindTag::Polynomial => {
                let coeffs = self.coeffs.clone().ok_or_else(|| {
                    SocError::Validation("polynomial functor needs \"coeffs\"".into())
                })?;
                if coeffs.is_empty() {
                    return Err(SocError::Validation("polynomial needs at least c₀".into()));
                }
                let t = self.truncation.unwrap_or(coeffs.len() - 1).max(1);
                make_canonical(CanonicalKind::Polynomial(coeffs), t)?
            }
            FunctorKindTag::Zero => PowerSeriesFunctor::zero(truncation),
        };
        Ok(if self.reduced { f.reduced() } else { f })
    }
}

/// Homogeneous layers `cₙ·A^{⊗n}` of `F(A)` with their operator norms.
#[derive(Debug, Clone)]
pub struct BlockEvaluation {
    pub base_dim: usize,
    pub layers: Vec<DenseMatrix>,
    pub layer_norms: Vec<f64>,
}

impl BlockEvaluation {
    /// Norm of `F(A)` under the chosen direct-sum convention.
    pub fn total_norm(&self, convention: DirectSumNorm) -> f64 {
        convention.combine(self.layer_norms.iter().copied())
    }

    /// `F(A)` as one block-diagonal matrix.
    pub fn as_direct_sum(&self, limits: &Limits) -> Result<DenseMatrix> {
        let refs: Vec<&DenseMatrix> = self.layers.iter().collect();
        direct_sum_many(&refs, limits)
    }
}

/// Evaluates layers `0..=n_max` of `f` on `a`.
pub fn evaluate(
    f: &PowerSeriesFunctor,
    a: &DenseMatrix,
    n_max: usize,
    limits: &Limits,
) -> Result<BlockEvaluation> {
    let d = a.require_square("evaluate")?;
    if n_max > f.truncation() {
        return Err(SocError::Validation(format!(
            "evaluation to degree {n_max} exceeds truncation {} of {}",
            f.truncation(),
            f.name
        )));
    }
    let mut layers = Vec::with_capacity(n_max + 1);
    let mut layer_norms = Vec::with_capacity(n_max + 1);
    let mut power = DenseMatrix::identity(1);
    for n in 0..=n_max {
        if n > 0 {
            power = tensor_power_step(&power, a, n, limits)?;
        }
        let layer = power.scale_real(f.coeff(n));
        layer_norms.push(operator_norm(&layer, NormSettings::default()).value);
        layers.push(layer);
    }
    Ok(BlockEvaluation {
        base_dim: d,
        layers,
        layer_norms,
    })
}

fn tensor_power_step(
    prev: &DenseMatrix,
    a: &DenseMatrix,
    degree: usize,
    limits: &Limits,
) -> Result<DenseMatrix> {
    let size = (prev.rows() as u128) * (a.rows() as u128);
    if size * size > limits.max_entries as u128 {
        return Err(SocError::capacity(
            format!("evaluation layer of degree {degree}"),
            size * size,
            limits.max_entries as u128,
        ));
    }
    crate::linalg::kron(prev, a, limits)
}

/// Sampling estimate of `‖∂ₙF‖`: the largest `‖layer n‖ / r(A)ⁿ` over normal
/// samples with nonzero spectral radius. Equals `|cₙ|` on the normal class.
pub fn derivative_norm_estimate(
    f: &PowerSeriesFunctor,
    samples: &[DenseMatrix],
    n: usize,
    limits: &Limits,
) -> Result<f64> {
    let mut best: f64 = 0.0;
    for a in samples {
        a.require_normal(crate::linalg::NORMALITY_REL_TOL, "derivative norm sampling")?;
        let r = spectral_radius(a, NormSettings::gelfand()).value;
        if r == 0.0 {
            continue;
        }
        let power = tensor_power(a, n, limits)?.scale_real(f.coeff(n));
        let layer = operator_norm(&power, NormSettings::default()).value;
        best = best.max(layer / r.powi(n as i32));
    }
    Ok(best)
}

fn require_reduced_inner<T: Scalar>(g: &[T]) -> Result<()> {
    if g.first().is_some_and(|c| !c.is_zero()) {
        return Err(SocError::contract(
            "inner functor must be reduced (c₀ = 0)",
            "Faà di Bruno composition",
        ));
    }
    Ok(())
}

/// Composite coefficients by the Faà di Bruno partition sum.
///
/// With normalized coefficients the unnormalized derivatives are `k!·cₖ`, so
///
/// `n!·cₙ(f∘g) = Σ_{π ∈ Part([n])} |π|!·c_{|π|}(f) · Π_{P∈π} |P|!·c_{|P|}(g)`.
///
/// Partitions are grouped by block-size type.
pub fn compose_coeffs_generic<T: Scalar>(
    f: &[T],
    g: &[T],
    n_max: usize,
    limits: &Limits,
) -> Result<Vec<T>> {
    require_reduced_inner(g)?;
    if n_max >= f.len() || n_max >= g.len() {
        return Err(SocError::Validation(format!(
            "composition to degree {n_max} needs coefficients through degree {n_max} (have {} and {})",
            f.len().saturating_sub(1),
            g.len().saturating_sub(1)
        )));
    }
    let factorials: Vec<T> = (0..=n_max).map(T::factorial).collect();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut total = T::zero();
        for (sizes, count) in partition_type_counts(n, limits)? {
            let k = sizes.len();
            if f[k].is_zero() {
                continue;
            }
            let mut term = T::from_u64(count) * factorials[k].clone() * f[k].clone();
            for &s in &sizes {
                term = term * factorials[s].clone() * g[s].clone();
            }
            total = total + term;
        }
        out.push(total / factorials[n].clone());
    }
    Ok(out)
}

/// `f∘g` to degree `n_max` in floating point.
pub fn compose_coeffs(
    f: &PowerSeriesFunctor,
    g: &PowerSeriesFunctor,
    n_max: usize,
    limits: &Limits,
) -> Result<PowerSeriesFunctor> {
    let coeffs = compose_coeffs_generic(&f.coeffs, &g.coeffs, n_max, limits)?;
    PowerSeriesFunctor::new(format!("{}∘{}", f.name, g.name), coeffs)
}

/// `f∘g` to degree `n_max` in exact rational arithmetic.
pub fn compose_coeffs_exact(
    f: &PowerSeriesFunctor,
    g: &PowerSeriesFunctor,
    n_max: usize,
    limits: &Limits,
) -> Result<Vec<BigRational>> {
    compose_coeffs_generic(&f.exact_coeffs(), &g.exact_coeffs(), n_max, limits)
}

/// Taylor coefficients of `f(g(x))` by direct substitution: accumulates
/// `f_k · g(x)^k` with explicit truncated powers of `g`.
pub fn scalar_compose_oracle<T: Scalar>(f: &[T], g: &[T], n_max: usize) -> Result<Vec<T>> {
    require_reduced_inner(g)?;
    let g_at = |j: usize| g.get(j).cloned().unwrap_or_else(T::zero);
    let mut power = vec![T::zero(); n_max + 1];
    power[0] = T::one();
    let mut out = vec![T::zero(); n_max + 1];
    for (k, fk) in f.iter().enumerate().take(n_max + 1) {
        if k > 0 {
            let mut next = vec![T::zero(); n_max + 1];
            for (i, p) in power.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                for j in 1..=n_max - i {
                    next[i + j] = next[i + j].clone() + p.clone() * g_at(j);
                }
            }
            power = next;
        }
        if fk.is_zero() {
            continue;
        }
        for (o, p) in out.iter_mut().zip(&power) {
            *o = o.clone() + fk.clone() * p.clone();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn canonical_coefficients() {
        let e = make_canonical(CanonicalKind::Exponential, 5).unwrap();
        let expected = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0];
        for (c, x) in e.coeffs().iter().zip(expected) {
            assert!((c - x).abs() < 1e-16);
        }
        let id = make_canonical(CanonicalKind::Identity, 4).unwrap();
        assert_eq!(id.coeffs(), &[0.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(id.is_reduced());
        let g = make_canonical(CanonicalKind::Geometric, 3).unwrap();
        assert_eq!(g.coeffs(), &[1.0, 1.0, 1.0, 1.0]);
        let f = make_canonical(CanonicalKind::Factorial, 4).unwrap();
        assert_eq!(f.coeffs(), &[1.0, 1.0, 2.0, 6.0, 24.0]);
        let p = make_canonical(CanonicalKind::Polynomial(vec![1.0, 2.0]), 3).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn canonical_errors() {
        assert!(make_canonical(CanonicalKind::Factorial, 21).unwrap_err().is_capacity());
        assert!(make_canonical(CanonicalKind::Factorial, 20).is_ok());
        assert!(make_canonical(CanonicalKind::Identity, 0).is_err());
        assert!(make_canonical(CanonicalKind::Polynomial(vec![1.0; 5]), 3).is_err());
    }

    #[test]
    fn spec_parsing() {
        let s: FunctorSpec = serde_json::from_str(r#"{"kind":"exponential","truncation":16}"#).unwrap();
        assert_eq!(s.build().unwrap().truncation(), 16);
        let p: FunctorSpec = serde_json::from_str(r#"{"kind":"polynomial","coeffs":[0,0.5]}"#).unwrap();
        assert_eq!(p.build().unwrap().coeffs(), &[0.0, 0.5]);
        let r: FunctorSpec =
            serde_json::from_str(r#"{"kind":"geometric","truncation":4,"reduced":true}"#).unwrap();
        assert_eq!(r.build().unwrap().coeffs(), &[0.0, 1.0, 1.0, 1.0, 1.0]);
        assert!(serde_json::from_str::<FunctorSpec>(r#"{"kind":"exponential","oops":1}"#).is_err());
        assert!(serde_json::from_str::<FunctorSpec>(r#"{"kind":"sine"}"#).is_err());
        let bad: FunctorSpec = serde_json::from_str(r#"{"kind":"identity","value":2}"#).unwrap();
        assert!(bad.build().is_err());
        let c: FunctorSpec = serde_json::from_str(r#"{"kind":"constant","value":2.5,"truncation":2}"#).unwrap();
        assert_eq!(c.build().unwrap().coeffs(), &[2.5, 0.0, 0.0]);
    }

    #[test]
    fn evaluate_fixtures() {
        let l = Limits::default();
        let a = DenseMatrix::from_real_rows(&[vec![0.2, 0.1], vec![-0.3, 0.4]]).unwrap();
        let id = make_canonical(CanonicalKind::Identity, 3).unwrap();
        let ev = evaluate(&id, &a, 3, &l).unwrap();
        assert_eq!(ev.layers[1], a);
        assert!(ev.layers[0].is_zero() && ev.layers[2].is_zero() && ev.layers[3].is_zero());

        let quad = make_canonical(CanonicalKind::Quadratic, 2).unwrap();
        let ev = evaluate(&quad, &DenseMatrix::scalar(0.5), 2, &l).unwrap();
        assert_eq!(ev.layers[2], DenseMatrix::scalar(0.25));

        let exp = make_canonical(CanonicalKind::Exponential, 6).unwrap();
        let ev = evaluate(&exp, &DenseMatrix::scalar(0.5), 6, &l).unwrap();
        let mut fact = 1.0;
        for (n, norm) in ev.layer_norms.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((norm - 0.5f64.powi(n as i32) / fact).abs() < 1e-15);
        }
    }

    #[test]
    fn evaluate_capacity_names_degree() {
        let l = Limits {
            max_entries: 4096,
            ..Limits::default()
        };
        let exp = make_canonical(CanonicalKind::Exponential, 8).unwrap();
        let err = evaluate(&exp, &DenseMatrix::identity(2), 8, &l).unwrap_err();
        match err {
            SocError::Capacity { what, .. } => assert!(what.contains("degree 7"), "{what}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn quadratic_composition() {
        let l = Limits::default();
        let quad = make_canonical(CanonicalKind::Quadratic, 8).unwrap();
        let c = compose_coeffs(&quad, &quad, 8, &l).unwrap();
        assert_eq!(c.coeffs(), &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn reduced_exp_self_composition() {
        let l = Limits::default();
        let e = make_canonical(CanonicalKind::Exponential, 5).unwrap().reduced();
        let exact = compose_coeffs_exact(&e, &e, 5, &l).unwrap();
        // 1/k! is not dyadic, so compare against the exact composite of the
        // rounded inputs instead of Bellₙ/n!.
        let oracle = scalar_compose_oracle(&e.exact_coeffs(), &e.exact_coeffs(), 5).unwrap();
        assert_eq!(exact, oracle);
        let float = compose_coeffs(&e, &e, 5, &l).unwrap();
        let expected = [0.0, 1.0, 1.0, 5.0 / 6.0, 5.0 / 8.0, 13.0 / 30.0];
        for (got, want) in float.coeffs().iter().zip(expected) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn unit_laws() {
        let l = Limits::default();
        let id = make_canonical(CanonicalKind::Identity, 6).unwrap();
        let f = make_canonical(CanonicalKind::Geometric, 6).unwrap().reduced();
        assert_eq!(compose_coeffs(&f, &id, 6, &l).unwrap().coeffs(), f.coeffs());
        assert_eq!(compose_coeffs(&id, &f, 6, &l).unwrap().coeffs(), f.coeffs());
    }

    #[test]
    fn oracle_hand_expansion() {
        // f = x², g = x + x² gives x² + 2x³ + x⁴.
        let f = vec![q(0, 1), q(0, 1), q(1, 1)];
        let g = vec![q(0, 1), q(1, 1), q(1, 1)];
        let out = scalar_compose_oracle(&f, &g, 5).unwrap();
        assert_eq!(out, vec![q(0, 1), q(0, 1), q(1, 1), q(2, 1), q(1, 1), q(0, 1)]);
        let x = vec![0.0, 1.0];
        assert_eq!(scalar_compose_oracle(&x, &[0.0, 3.0, -1.0], 2).unwrap(), vec![0.0, 3.0, -1.0]);
    }

    #[test]
    fn rejects_unreduced_inner() {
        let l = Limits::default();
        let e = make_canonical(CanonicalKind::Exponential, 4).unwrap();
        assert!(compose_coeffs(&e, &e, 4, &l).unwrap_err().is_contract());
        assert!(scalar_compose_oracle(e.coeffs(), e.coeffs(), 4).unwrap_err().is_contract());
    }
}
