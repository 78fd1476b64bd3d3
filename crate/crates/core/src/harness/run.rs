use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::histogram::Histogram;
use super::spec::ExperimentSpec;
use super::HarnessError;

/// Result of probing one sampled network with one random start state.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct InstanceOutcome {
    pub instance: u64,
    pub n: usize,
    pub period: Option<u64>,
    pub transient: u64,
    pub steps_executed: u64,
}

pub fn run_instance(spec: &ExperimentSpec, k: u64) -> Result<InstanceOutcome, HarnessError> {
    if k >= spec.trials {
        return Err(HarnessError::InvalidSpec(format!("instance {k} is beyond {} trials", spec.trials)));
    }
    let (net, s0) = spec.sample(k)?;
    let report = spec.engine.detect(&net, &s0, spec.cap)?;
    Ok(InstanceOutcome {
        instance: k,
        n: net.n(),
        period: report.period,
        transient: report.transient,
        steps_executed: report.steps_executed,
    })
}

/// Runs every instance, in instance order. `jobs` bounds the worker pool;
/// `None` uses rayon's global pool.
pub fn run_instances(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<Vec<InstanceOutcome>, HarnessError> {
    spec.validate()?;
    let work = || (0..spec.trials).into_par_iter().map(|k| run_instance(spec, k)).collect::<Result<Vec<_>, _>>();
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build()?.install(work),
        None => work(),
    }
}

pub fn run_experiment(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<Histogram, HarnessError> {
    Ok(histogram_of(&run_instances(spec, jobs)?))
}

pub fn histogram_of(outcomes: &[InstanceOutcome]) -> Histogram {
    Histogram::from_periods(outcomes.iter().map(|o| o.period))
}
