//! One runner per subcommand, each turning a validated config into a table.

use crate::config::*;
use crate::csv::{flag, float, int, Table};
use crate::CliError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use soc_core::analysis::{admissibility_check, stability_report};
use soc_core::crosseff::{cross_effect_report, cross_effect_report_direct, excision_check};
use soc_core::functor::{compose_coeffs, scalar_compose_oracle};
use soc_core::linalg::random::random_normal;
use soc_core::linalg::{spectral_radius, DirectSumNorm, NormSettings, NORMALITY_REL_TOL};
use soc_core::symseq::plethysm;
use soc_core::taylor::{
    convergence_experiment, default_probes, radius_estimate, reconstruct_roundtrip, remainder_norm,
    TowerConfig,
};
use soc_core::{Limits, PowerSeriesFunctor};

/// Result of a run, before anything is written.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    pub seed: u64,
    pub convention: DirectSumNorm,
    pub output_path: Option<String>,
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    overrides: &'a Overrides,
    limits: &'a Limits,
    seed: u64,
    convention: DirectSumNorm,
}

impl Ctx<'_> {
    fn functor(&self) -> Result<PowerSeriesFunctor, CliError> {
        Ok(self.cfg.require_functor()?.build()?)
    }

    fn tower(&self, n_max: usize, window: Option<usize>, tol: Option<f64>) -> TowerConfig {
        let d = TowerConfig::default();
        TowerConfig {
            convention: self.convention,
            n_max,
            radius_window: window.unwrap_or(d.radius_window),
            tol: tol.unwrap_or(d.tol),
        }
    }
}

/// Parses `raw`, checks it against `sub` and runs it.
pub fn run(
    sub: Subcommand,
    raw: &str,
    overrides: &Overrides,
    limits: &Limits,
) -> Result<RunOutput, CliError> {
    let cfg = ExperimentConfig::parse(raw)?;
    cfg.check_for(sub)?;
    let ctx = Ctx {
        cfg: &cfg,
        overrides,
        limits,
        seed: overrides.seed.or(cfg.seed).unwrap_or(0),
        convention: overrides.convention.or(cfg.convention).unwrap_or_default(),
    };
    let table = match sub {
        Subcommand::Radius => radius(&ctx)?,
        Subcommand::Remainder => remainder(&ctx)?,
        Subcommand::Convergence => convergence(&ctx)?,
        Subcommand::CrossEffect => cross_effect(&ctx)?,
        Subcommand::Plethysm => pleth(&ctx)?,
        Subcommand::ChainRule => chain_rule(&ctx)?,
        Subcommand::Excision => excision(&ctx)?,
        Subcommand::Stability => stability(&ctx)?,
        Subcommand::Admissibility => admissibility(&ctx)?,
        Subcommand::Reconstruct => reconstruct(&ctx)?,
    };
    Ok(RunOutput {
        table,
        seed: ctx.seed,
        convention: ctx.convention,
        output_path: cfg.output_path.clone(),
    })
}

fn radius(ctx: &Ctx) -> Result<Table, CliError> {
    let p: RadiusParams = ctx.cfg.params()?;
    let f = ctx.functor()?;
    let truncations = p.truncations.unwrap_or_else(|| vec![f.truncation()]);
    let config = ctx.tower(f.truncation(), p.window, None);
    let mut t = Table::new(&["truncation", "estimate", "eventually_zero"]);
    for n in truncations {
        let est = radius_estimate(&f.restricted(n)?, &config)?;
        t.push(vec![int(n), float(est.estimate), flag(est.eventually_zero)]);
    }
    Ok(t)
}

fn remainder(ctx: &Ctx) -> Result<Table, CliError> {
    let p: RemainderParams = ctx.cfg.params()?;
    let f = ctx.functor()?;
    let r = match (p.r, &ctx.cfg.matrix) {
        (Some(r), None) => r,
        (None, Some(a)) => {
            a.require_normal(NORMALITY_REL_TOL, "the layer remainder bound on the normal class")?;
            spectral_radius(a, NormSettings::gelfand()).value
        }
        _ => {
            return Err(CliError::Config(
                "remainder needs exactly one of \"matrix\" and params.r".into(),
            ))
        }
    };
    let n_max = p.n_max.unwrap_or(f.truncation().min(20));
    let config = ctx.tower(f.truncation(), p.window, None);
    let mut t = Table::new(&["n", "remainder", "beyond_radius"]);
    for n in 0..=n_max {
        let rem = remainder_norm(&f, n, r, &config)?;
        t.push(vec![int(n), float(rem.value), flag(rem.beyond_radius)]);
    }
    Ok(t)
}

fn convergence(ctx: &Ctx) -> Result<Table, CliError> {
    let p: ConvergenceParams = ctx.cfg.params()?;
    let f = ctx.functor()?;
    let config = ctx.tower(p.n_max.unwrap_or(20), p.window, p.tol);
    let table = convergence_experiment(&f, ctx.cfg.require_matrix()?, p.s, &config)?;
    let mut t = Table::new(&["n", "remainder", "bound", "ratio"]);
    for row in table.rows {
        t.push(vec![int(row.n), float(row.remainder), float(row.bound), float(row.ratio)]);
    }
    Ok(t)
}

fn cross_effect(ctx: &Ctx) -> Result<Table, CliError> {
    let p: CrossEffectParams = ctx.cfg.params()?;
    let f = ctx.functor()?;
    let inputs = ctx.cfg.require_inputs()?;
    let n_max = p.n_max.unwrap_or(f.truncation().min(8));
    let tol = p.tol.unwrap_or(1e-9);
    let report = if p.direct {
        cross_effect_report_direct(&f, inputs, n_max, tol, ctx.limits)?
    } else {
        cross_effect_report(&f, inputs, n_max, tol, ctx.limits)?
    };
    let mut t = Table::new(&["degree", "dim", "norm", "radius", "negligible"]);
    for d in report.per_degree {
        t.push(vec![
            int(d.degree),
            int(&d.dim),
            float(d.norm_estimate),
            float(d.radius),
            flag(d.radius <= tol),
        ]);
    }
    Ok(t)
}

fn pleth(ctx: &Ctx) -> Result<Table, CliError> {
    let p: PlethysmParams = ctx.cfg.params()?;
    let out = plethysm(&p.outer, &p.inner, p.n_max, ctx.limits)?;
    let mut t = Table::new(&["n", "dim", "weight"]);
    for n in 1..=p.n_max {
        t.push(vec![int(n), int(out.dim(n)), float(out.weights()[n])]);
    }
    Ok(t)
}

fn chain_rule(ctx: &Ctx) -> Result<Table, CliError> {
    let p: ChainRuleParams = ctx.cfg.params()?;
    let f = ctx.functor()?;
    let g = p.inner.build()?;
    let n_max = p.n_max.unwrap_or(f.truncation().min(g.truncation()).min(8));
    let composite = compose_coeffs(&f, &g, n_max, ctx.limits)?;
    let oracle = scalar_compose_oracle(f.coeffs(), g.coeffs(), n_max)?;
    let mut t = Table::new(&["n", "partition_sum", "oracle", "abs_diff"]);
    for (n, o) in oracle.iter().enumerate() {
        let c = composite.coeff(n);
        t.push(vec![int(n), float(c), float(*o), float((c - o).abs())]);
    }
    Ok(t)
}

fn excision(ctx: &Ctx) -> Result<Table, CliError> {
    let p: ExcisionParams = ctx.cfg.params()?;
    let f = ctx.functor()?;
    let samples: Vec<Vec<soc_core::DenseMatrix>> = match &ctx.cfg.inputs {
        Some(inputs) => vec![inputs.clone()],
        None => {
            let (lo, hi) = (p.min_modulus.unwrap_or(0.1), p.max_modulus.unwrap_or(0.9));
            if !(0.0 <= lo && lo <= hi && hi.is_finite()) {
                return Err(CliError::Config(format!("bad modulus range [{lo}, {hi}]")));
            }
            let dim = p.dim.unwrap_or(2);
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            (0..p.samples.unwrap_or(20))
                .map(|_| (0..=p.n).map(|_| random_normal(&mut rng, dim, lo, hi)).collect())
                .collect()
        }
    };
    let n_max = p.n_max.unwrap_or(p.n + 1);
    let report = excision_check(&f, p.n, &samples, p.tol.unwrap_or(1e-9), n_max, ctx.limits)?;
    let mut t = Table::new(&[
        "sample",
        "max_radius",
        "max_norm",
        "norm_threshold",
        "negligible",
        "norm_small",
        "control_ratio",
    ]);
    for s in report.samples {
        t.push(vec![
            int(s.index),
            float(s.max_radius),
            float(s.max_norm),
            float(s.norm_threshold),
            flag(s.negligible),
            flag(s.norm_small),
            float(s.control_ratio),
        ]);
    }
    Ok(t)
}

fn stability(ctx: &Ctx) -> Result<Table, CliError> {
    let p: StabilityParams = ctx.cfg.params()?;
    let f = ctx.functor()?;
    let g = p.inner.build()?;
    let n_max = p.n_max.unwrap_or(f.truncation().min(g.truncation()).min(12));
    let k_pl = ctx.overrides.k_pl.or(p.k_pl).unwrap_or(1.0);
    let config = ctx.tower(n_max, p.window, None);
    let rep = stability_report(&f, &g, k_pl, n_max, &config, ctx.limits)?;
    let mut t = Table::new(&["n", "gamma", "coefficient", "bound", "ratio"]);
    for row in rep.rows {
        t.push(vec![
            int(row.n),
            float(rep.gamma),
            float(row.coefficient),
            float(row.bound),
            float(row.ratio),
        ]);
    }
    Ok(t)
}

fn admissibility(ctx: &Ctx) -> Result<Table, CliError> {
    let p: AdmissibilityParams = ctx.cfg.params()?;
    let f = ctx.functor()?;
    let inputs = ctx.cfg.require_inputs()?;
    let max_degree = p.max_degree.unwrap_or(f.truncation());
    let rep = admissibility_check(&f, inputs, &p.phi, p.tol.unwrap_or(1e-12), max_degree, ctx.limits)?;
    let mut t = Table::new(&["sample", "spectral_size", "lhs", "rhs", "evaluated_degree", "pass"]);
    for s in rep.samples {
        t.push(vec![
            int(s.index),
            float(s.spectral_size),
            float(s.lhs),
            float(s.rhs),
            int(s.evaluated_degree),
            flag(s.pass),
        ]);
    }
    Ok(t)
}

fn reconstruct(ctx: &Ctx) -> Result<Table, CliError> {
    let p: ReconstructParams = ctx.cfg.params()?;
    let f = ctx.functor()?;
    let n_max = p.n_max.unwrap_or(f.truncation());
    let probes = p.probes.unwrap_or_else(|| default_probes(n_max));
    let r = reconstruct_roundtrip(&f, &probes, n_max, ctx.limits)?;
    let mut t = Table::new(&["n", "original", "reconstructed", "abs_diff"]);
    for n in 0..=n_max {
        let (a, b) = (f.coeff(n), r.coeff(n));
        t.push(vec![int(n), float(a), float(b), float((a - b).abs())]);
    }
    Ok(t)
}
