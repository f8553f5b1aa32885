//! Monte Carlo experiments and closed-form parameter sweeps.
//!
//! Every trial draws from its own generator, seeded from the master seed and
//! the trial index, with one ChaCha stream per scheme. Results are therefore
//! independent of how trials are partitioned or scheduled, and per-trial
//! errors are always reduced in trial order.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::error_analysis::{
    delta_channel_uses, delta_qubit_budget, exact_error_entangled_closed, exact_error_separable_closed, scaled_delta,
    BudgetMode, ResourceBudget, Scheme,
};
use crate::estimation::{estimate_entangled, estimate_separable, sample_bell_counts, sample_separable_counts};
use crate::lattice::{Lattice, Slice};
use crate::sampling::{rng_from_seed, trial_seed, SimRng, GENERATOR_ID};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchemeSelection {
    Separable,
    Entangled,
    Both,
}

impl SchemeSelection {
    pub fn schemes(self) -> &'static [Scheme] {
        match self {
            SchemeSelection::Separable => &[Scheme::Separable],
            SchemeSelection::Entangled => &[Scheme::Entangled],
            SchemeSelection::Both => &Scheme::ALL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub p_true: ChannelParams,
    pub budget: ResourceBudget,
    pub scheme: SchemeSelection,
    pub trials: u64,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidTrials);
        }
        // Re-check in case the budget was deserialized.
        ResourceBudget::new(self.budget.mode(), self.budget.total())?;
        Ok(())
    }
}

/// Monte Carlo statistics of one scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub scheme: Scheme,
    /// Qubits per reference state (separable) or ebits (entangled).
    pub resource: u64,
    pub trials: u64,
    pub mean_error: f64,
    /// Standard error of the mean, from the `n - 1` sample deviation.
    pub std_error: f64,
    /// Closed-form expected error.
    pub reference: f64,
    /// `(mean - reference) / std_error`; `None` when the spread is zero and
    /// the mean misses the reference.
    pub z_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub generator: String,
    pub schemes: Vec<SchemeSummary>,
}

impl ExperimentSummary {
    pub fn scheme(&self, scheme: Scheme) -> Option<&SchemeSummary> {
        self.schemes.iter().find(|s| s.scheme == scheme)
    }
}

fn scheme_stream(scheme: Scheme) -> u64 {
    match scheme {
        Scheme::Separable => 0,
        Scheme::Entangled => 1,
    }
}

/// Generator for one scheme within trial `index`.
pub fn trial_rng(master_seed: u64, index: u64, scheme: Scheme) -> SimRng {
    let mut rng = rng_from_seed(trial_seed(master_seed, index));
    rng.set_stream(scheme_stream(scheme));
    rng
}

/// Resource used by `scheme` under `budget`.
pub fn scheme_resource(budget: &ResourceBudget, scheme: Scheme) -> u64 {
    match scheme {
        Scheme::Separable => budget.per_state(),
        Scheme::Entangled => budget.ebits(),
    }
}

/// Quadratic errors of trials `range`, in trial order.
pub fn trial_errors(cfg: &ExperimentConfig, scheme: Scheme, range: Range<u64>) -> Result<Vec<f64>> {
    cfg.validate()?;
    let p = cfg.p_true;
    let resource = scheme_resource(&cfg.budget, scheme);
    range
        .into_par_iter()
        .map(|index| {
            let mut rng = trial_rng(cfg.master_seed, index, scheme);
            let estimate = match scheme {
                Scheme::Separable => estimate_separable(&sample_separable_counts(&p, resource, &mut rng)?),
                Scheme::Entangled => estimate_entangled(&sample_bell_counts(&p, resource, &mut rng)?),
            };
            Ok(estimate.scored(&p).quadratic_error.expect("scored estimate"))
        })
        .collect()
}

/// Closed-form expected error of `scheme` under `budget`.
pub fn reference_error(p: &ChannelParams, budget: &ResourceBudget, scheme: Scheme) -> Result<f64> {
    let resource = scheme_resource(budget, scheme);
    match scheme {
        Scheme::Separable => exact_error_separable_closed(p, resource),
        Scheme::Entangled => exact_error_entangled_closed(p, resource),
    }
}

/// Mean, standard error and z-score of per-trial errors, summed in order.
pub fn summarize(scheme: Scheme, resource: u64, errors: &[f64], reference: f64) -> SchemeSummary {
    let n = errors.len();
    let mean = errors.iter().sum::<f64>() / n as f64;
    let std_error = if n > 1 {
        let ss: f64 = errors.iter().map(|e| (e - mean) * (e - mean)).sum();
        (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
    } else {
        0.0
    };
    let z_score = if std_error > 0.0 {
        Some((mean - reference) / std_error)
    } else if mean == reference {
        Some(0.0)
    } else {
        None
    };
    SchemeSummary {
        scheme,
        resource,
        trials: n as u64,
        mean_error: mean,
        std_error,
        reference,
        z_score,
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let schemes = cfg
        .scheme
        .schemes()
        .iter()
        .map(|&scheme| {
            let errors = trial_errors(cfg, scheme, 0..cfg.trials)?;
            let reference = reference_error(&cfg.p_true, &cfg.budget, scheme)?;
            Ok(summarize(
                scheme,
                scheme_resource(&cfg.budget, scheme),
                &errors,
                reference,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentSummary {
        config: *cfg,
        generator: GENERATOR_ID.to_string(),
        schemes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    SeparableError,
    EntangledError,
    DeltaQubits,
    DeltaUses,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub slice: Slice,
    pub grid_steps: u64,
    pub quantity: Quantity,
    /// Emit the resource-independent value, e.g. `N Δ` instead of `Δ`.
    pub scale_by_budget: bool,
}

/// Resource behind an unscaled sweep value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SweepResource {
    Budget(ResourceBudget),
    PerState(u64),
    Ebits(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub value: f64,
}

enum Evaluator {
    Scaled(Quantity),
    SeparableError(u64),
    EntangledError(u64),
    DeltaQubits(u64),
    DeltaUses(u64),
}

impl Evaluator {
    fn resolve(quantity: Quantity, scaled: bool, resource: Option<SweepResource>) -> Result<Self> {
        if scaled {
            return Ok(Evaluator::Scaled(quantity));
        }
        let resource = resource
            .ok_or_else(|| Error::IncompatibleResource("an unscaled sweep needs a resource budget".to_string()))?;
        let mismatch = |what: &str| Err(Error::IncompatibleResource(format!("{quantity:?} cannot use {what}")));
        let evaluator = match (quantity, resource) {
            (Quantity::SeparableError, SweepResource::PerState(m)) => Evaluator::SeparableError(m),
            (Quantity::SeparableError, SweepResource::Budget(b)) => Evaluator::SeparableError(b.per_state()),
            (Quantity::EntangledError, SweepResource::Ebits(n)) => Evaluator::EntangledError(n),
            (Quantity::EntangledError, SweepResource::Budget(b)) => Evaluator::EntangledError(b.ebits()),
            (Quantity::DeltaQubits, SweepResource::Budget(b)) if b.mode() == BudgetMode::Qubits => {
                Evaluator::DeltaQubits(b.total())
            }
            (Quantity::DeltaUses, SweepResource::Budget(b)) if b.mode() == BudgetMode::ChannelUses => {
                Evaluator::DeltaUses(b.total())
            }
            (_, SweepResource::Budget(b)) => return mismatch(&format!("a {} budget", b.mode())),
            (_, SweepResource::PerState(_)) => return mismatch("a per-state count"),
            (_, SweepResource::Ebits(_)) => return mismatch("an ebit count"),
        };
        match evaluator {
            Evaluator::SeparableError(0) | Evaluator::EntangledError(0) => {
                return Err(Error::ZeroResource { what: "sweep resource" });
            }
            Evaluator::DeltaQubits(n) => {
                ResourceBudget::qubits(n)?;
            }
            Evaluator::DeltaUses(k) => {
                ResourceBudget::channel_uses(k)?;
            }
            _ => {}
        }
        Ok(evaluator)
    }

    fn eval(&self, p: &ChannelParams) -> Result<f64> {
        match *self {
            Evaluator::Scaled(Quantity::SeparableError) => exact_error_separable_closed(p, 1),
            Evaluator::Scaled(Quantity::EntangledError) => exact_error_entangled_closed(p, 1),
            Evaluator::Scaled(Quantity::DeltaQubits) => Ok(scaled_delta(BudgetMode::Qubits, p)),
            Evaluator::Scaled(Quantity::DeltaUses) => Ok(scaled_delta(BudgetMode::ChannelUses, p)),
            Evaluator::SeparableError(m) => exact_error_separable_closed(p, m),
            Evaluator::EntangledError(n) => exact_error_entangled_closed(p, n),
            Evaluator::DeltaQubits(n) => delta_qubit_budget(p, n),
            Evaluator::DeltaUses(k) => delta_channel_uses(p, k),
        }
    }
}

/// Tabulates a closed-form quantity over the lattice of `spec`, rows in
/// lexicographic lattice order.
///
/// Scaled sweeps ignore `resource`.
pub fn run_sweep(spec: &SweepSpec, resource: Option<SweepResource>) -> Result<Vec<SweepRow>> {
    let lattice = Lattice::new(spec.slice, spec.grid_steps)?;
    let evaluator = Evaluator::resolve(spec.quantity, spec.scale_by_budget, resource)?;
    lattice
        .points()
        .map(|point| {
            let p = ChannelParams::from_array(point)?;
            Ok(SweepRow {
                p1: point[0],
                p2: point[1],
                p3: point[2],
                value: evaluator.eval(&p)?,
            })
        })
        .collect()
}
