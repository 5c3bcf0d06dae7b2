//! Seeded randomized checks of the coherence and imaginarity results.
//!
//! A check is a named trial function returning a slack: a trial passes
//! when `slack ≥ −tolerance`. Trial `i` of check `id` draws from the stream
//! `derive_seed(seed, id, i)`, so reports do not depend on scheduling.

mod finite;
mod gaussian;

use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::seed::{derive_seed, rng_from, Rng};

/// Tolerance for identities and inequalities between closed-form values.
pub const TOL_CLOSED: f64 = 1e-9;
/// Tolerance when an optimization-defined measure is involved.
pub const TOL_OPT: f64 = 1e-4;
/// Tolerance for the Gaussian results.
pub const TOL_GAUSSIAN: f64 = 1e-9;
/// Tolerance for the Gaussian channel-conjugation identity.
pub const TOL_CHANNEL_CONJ: f64 = 1e-10;
/// Default trial count per check.
pub const DEFAULT_TRIALS: usize = 1000;

/// Outcome of one trial.
#[derive(Debug, Clone)]
pub struct Trial {
    pub slack: f64,
    /// Everything needed to replay the trial.
    pub instance: Value,
}

impl Trial {
    pub fn new(slack: f64, instance: Value) -> Self {
        Trial { slack, instance }
    }
}

type TrialFn = dyn Fn(&mut Rng, usize) -> Result<Trial> + Send + Sync;

/// A named randomized check.
#[derive(Clone)]
pub struct Check {
    pub id: String,
    pub tolerance: f64,
    /// Trials used when the caller does not override the count.
    pub default_trials: usize,
    run: Arc<TrialFn>,
}

impl std::fmt::Debug for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Check")
            .field("id", &self.id)
            .field("tolerance", &self.tolerance)
            .field("default_trials", &self.default_trials)
            .finish()
    }
}

impl Check {
    pub fn new(
        id: impl Into<String>,
        tolerance: f64,
        run: impl Fn(&mut Rng, usize) -> Result<Trial> + Send + Sync + 'static,
    ) -> Self {
        Check {
            id: id.into(),
            tolerance,
            default_trials: DEFAULT_TRIALS,
            run: Arc::new(run),
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.default_trials = trials;
        self
    }

    /// Replays a single trial.
    pub fn trial(&self, seed: u64, index: usize) -> Result<Trial> {
        let mut rng = rng_from(derive_seed(seed, &self.id, index as u64));
        (self.run)(&mut rng, index)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub seed: u64,
    pub trials: usize,
    pub failures: usize,
    /// Smallest slack observed; `-inf` if a trial errored.
    pub worst_slack: f64,
    /// SHA-256 of the worst trial's instance JSON.
    pub instance_digest: String,
    pub worst_trial: usize,
    pub tolerance: f64,
    /// Worst instance, included when the check failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_instance: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn digest(instance: &Value) -> String {
    let bytes = serde_json::to_vec(instance).expect("JSON values serialize");
    hex::encode(Sha256::digest(&bytes))
}

/// Runs `trials` trials of `check`.
pub fn run_check(check: &Check, seed: u64, trials: usize, exec: Execution) -> Result<CheckReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trial count must be at least 1".into()));
    }
    let outcomes = par::map_indexed(exec, trials, |i| check.trial(seed, i));
    let mut failures = 0;
    let mut worst: Option<(usize, f64, Value)> = None;
    let mut error = None;
    for (i, out) in outcomes.into_iter().enumerate() {
        let (slack, instance) = match out {
            Ok(t) => (t.slack, t.instance),
            Err(e) => {
                if error.is_none() {
                    error = Some(format!("trial {i}: {e}"));
                }
                (f64::NEG_INFINITY, Value::String(e.to_string()))
            }
        };
        let slack = if slack.is_nan() { f64::NEG_INFINITY } else { slack };
        if slack < -check.tolerance {
            failures += 1;
        }
        if worst.as_ref().is_none_or(|w| slack < w.1) {
            worst = Some((i, slack, instance));
        }
    }
    let (worst_trial, worst_slack, instance) = worst.expect("trials >= 1");
    Ok(CheckReport {
        check_id: check.id.clone(),
        seed,
        trials,
        failures,
        worst_slack,
        instance_digest: digest(&instance),
        worst_trial,
        tolerance: check.tolerance,
        worst_instance: (failures > 0).then_some(instance),
        error,
    })
}

/// Every registered check, in a fixed order.
pub fn catalog() -> Vec<Check> {
    let mut out = finite::checks();
    out.extend(gaussian::checks());
    out
}

/// Checks whose id contains `filter` (all of them for `None`).
pub fn select(filter: Option<&str>) -> Result<Vec<Check>> {
    let all = catalog();
    match filter {
        None => Ok(all),
        Some(f) => {
            let chosen: Vec<Check> = all.into_iter().filter(|c| c.id.contains(f)).collect();
            if chosen.is_empty() {
                Err(Error::InvalidArgument(format!("no check matches filter `{f}`")))
            } else {
                Ok(chosen)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

/// Runs the selected checks. `trials` overrides each check's default.
pub fn run_all(seed: u64, filter: Option<&str>, trials: Option<usize>, exec: Execution) -> Result<Summary> {
    if trials == Some(0) {
        return Err(Error::InvalidArgument("trial count must be at least 1".into()));
    }
    let checks = select(filter)?;
    let reports = checks
        .iter()
        .map(|c| run_check(c, seed, trials.unwrap_or(c.default_trials), exec))
        .collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(CheckReport::passed);
    Ok(Summary { checks: reports, pass })
}
