//! Experiment config schema. Unknown keys are rejected at every level, and
//! top-level fields a subcommand does not read are rejected too.

use crate::CliError;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use soc_core::analysis::GrowthFunction;
use soc_core::functor::FunctorSpec;
use soc_core::linalg::DirectSumNorm;
use soc_core::symseq::SymSeq;
use soc_core::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Radius,
    Remainder,
    Convergence,
    CrossEffect,
    Plethysm,
    ChainRule,
    Excision,
    Stability,
    Admissibility,
    Reconstruct,
}

impl Subcommand {
    pub const ALL: [Subcommand; 10] = [
        Subcommand::Radius,
        Subcommand::Remainder,
        Subcommand::Convergence,
        Subcommand::CrossEffect,
        Subcommand::Plethysm,
        Subcommand::ChainRule,
        Subcommand::Excision,
        Subcommand::Stability,
        Subcommand::Admissibility,
        Subcommand::Reconstruct,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Subcommand::Radius => "radius",
            Subcommand::Remainder => "remainder",
            Subcommand::Convergence => "convergence",
            Subcommand::CrossEffect => "cross-effect",
            Subcommand::Plethysm => "plethysm",
            Subcommand::ChainRule => "chain-rule",
            Subcommand::Excision => "excision",
            Subcommand::Stability => "stability",
            Subcommand::Admissibility => "admissibility",
            Subcommand::Reconstruct => "reconstruct",
        }
    }

    /// Top-level config fields the subcommand reads, beyond `subcommand`,
    /// `params`, `seed` and `output_path`.
    fn fields(self) -> &'static [&'static str] {
        match self {
            Subcommand::Radius | Subcommand::Reconstruct => &["functor"],
            Subcommand::Remainder | Subcommand::Convergence => &["functor", "matrix", "convention"],
            Subcommand::CrossEffect | Subcommand::Admissibility => &["functor", "inputs"],
            Subcommand::Plethysm => &[],
            Subcommand::ChainRule | Subcommand::Stability => &["functor"],
            Subcommand::Excision => &["functor", "inputs"],
        }
    }
}

/// Command-line values that take precedence over the config.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub convention: Option<DirectSumNorm>,
    pub k_pl: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub subcommand: Option<Subcommand>,
    #[serde(default)]
    pub functor: Option<FunctorSpec>,
    #[serde(default)]
    pub matrix: Option<DenseMatrix>,
    #[serde(default)]
    pub inputs: Option<Vec<DenseMatrix>>,
    #[serde(default)]
    pub convention: Option<DirectSumNorm>,
    #[serde(default)]
    pub params: Option<serde_json::Value>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    pub fn parse(raw: &str) -> Result<Self, CliError> {
        serde_json::from_str(raw).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Checks that the config matches `sub` and carries no unused fields.
    pub fn check_for(&self, sub: Subcommand) -> Result<(), CliError> {
        if let Some(declared) = self.subcommand {
            if declared != sub {
                return Err(CliError::Config(format!(
                    "config is for {:?}, invoked as {:?}",
                    declared.as_str(),
                    sub.as_str()
                )));
            }
        }
        let present = [
            ("functor", self.functor.is_some()),
            ("matrix", self.matrix.is_some()),
            ("inputs", self.inputs.is_some()),
            ("convention", self.convention.is_some()),
        ];
        for (name, here) in present {
            if here && !sub.fields().contains(&name) {
                return Err(CliError::Config(format!(
                    "field {name:?} is not used by {:?}",
                    sub.as_str()
                )));
            }
        }
        Ok(())
    }

    pub fn params<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        let value = self
            .params
            .clone()
            .unwrap_or_else(|| serde_json::Value::Object(Default::default()));
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("params: {e}")))
    }

    pub fn require_functor(&self) -> Result<&FunctorSpec, CliError> {
        self.functor
            .as_ref()
            .ok_or_else(|| CliError::Config("missing \"functor\"".into()))
    }

    pub fn require_matrix(&self) -> Result<&DenseMatrix, CliError> {
        self.matrix
            .as_ref()
            .ok_or_else(|| CliError::Config("missing \"matrix\"".into()))
    }

    pub fn require_inputs(&self) -> Result<&[DenseMatrix], CliError> {
        match &self.inputs {
            Some(v) if !v.is_empty() => Ok(v),
            _ => Err(CliError::Config("missing or empty \"inputs\"".into())),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusParams {
    pub truncations: Option<Vec<usize>>,
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemainderParams {
    /// Spectral size; alternative to `matrix`.
    pub r: Option<f64>,
    pub n_max: Option<usize>,
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceParams {
    pub s: f64,
    pub n_max: Option<usize>,
    pub window: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossEffectParams {
    pub n_max: Option<usize>,
    pub tol: Option<f64>,
    /// Measure assembled blocks instead of using the factored identities.
    #[serde(default)]
    pub direct: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlethysmParams {
    pub outer: SymSeq,
    pub inner: SymSeq,
    pub n_max: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainRuleParams {
    pub inner: FunctorSpec,
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcisionParams {
    /// Polynomial degree under test; cross-effects of arity `n + 1` are checked.
    pub n: usize,
    pub samples: Option<usize>,
    pub dim: Option<usize>,
    pub n_max: Option<usize>,
    pub tol: Option<f64>,
    pub min_modulus: Option<f64>,
    pub max_modulus: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityParams {
    pub inner: FunctorSpec,
    pub n_max: Option<usize>,
    pub k_pl: Option<f64>,
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdmissibilityParams {
    pub phi: GrowthFunction,
    pub tol: Option<f64>,
    pub max_degree: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructParams {
    pub probes: Option<Vec<f64>>,
    pub n_max: Option<usize>,
}
