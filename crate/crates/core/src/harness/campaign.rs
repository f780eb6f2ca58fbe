use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{is_success, normalize_trace};
use crate::benchmarks::{self, BenchmarkSpec};
use crate::driver::{self, RunResult, SnsgaConfig};
use crate::error::{Error, Result};
use crate::objective::ObjectiveProblem;
use crate::timetable::{self, Schedule, TimetableInstance};

/// Everything recorded about one seeded run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub benchmark: String,
    pub seed: u64,
    pub success: bool,
    /// Evaluations spent by the run that stops on success.
    pub evaluations: u64,
    /// |fobj_alg - fobj_anal|; absent when the run failed.
    pub gap: Option<f64>,
    pub fobj_alg: Option<f64>,
    pub fobj_anal: f64,
    pub fobj_init: Option<f64>,
    /// Evaluations of the same seed run to its generation limit.
    pub full_run_evaluations: Option<u64>,
    pub error: Option<String>,
    pub run_result: Option<RunResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub benchmark: String,
    pub trials: usize,
    pub successes: usize,
    /// Percent of trials that succeeded.
    pub success_rate: f64,
    pub mean_evaluations_successful: Option<f64>,
    pub mean_gap_successful: Option<f64>,
    pub mean_full_run_evaluations: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CampaignOptions {
    /// Also rerun each seed without early stopping to record the full cost.
    pub full_runs: bool,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        Self { full_runs: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    /// Trial records grouped by benchmark, in seed order.
    pub trials: Vec<TrialOutcome>,
    pub reports: Vec<BenchmarkReport>,
}

/// One seeded run on `problem`, stopping as soon as the success test against
/// `optimum` passes.
pub fn run_trial(
    name: &str,
    problem: &ObjectiveProblem,
    optimum: f64,
    config: &SnsgaConfig,
    seed: u64,
    options: CampaignOptions,
) -> TrialOutcome {
    let stopping = SnsgaConfig {
        rng_seed: seed,
        target_objective: Some(optimum),
        ..config.clone()
    };
    let full_run_evaluations = options.full_runs.then(|| {
        let full = SnsgaConfig {
            rng_seed: seed,
            target_objective: None,
            ..config.clone()
        };
        driver::run(problem, &full).ok().map(|r| r.evaluations_used)
    });
    let full_run_evaluations = full_run_evaluations.flatten();
    match driver::run(problem, &stopping) {
        Ok(r) => TrialOutcome {
            benchmark: name.to_string(),
            seed,
            success: is_success(r.best_objective, optimum, r.initial_mean_objective),
            evaluations: r.evaluations_used,
            gap: Some((r.best_objective - optimum).abs()),
            fobj_alg: Some(r.best_objective),
            fobj_anal: optimum,
            fobj_init: Some(r.initial_mean_objective),
            full_run_evaluations,
            error: None,
            run_result: Some(r),
        },
        Err(e) => TrialOutcome {
            benchmark: name.to_string(),
            seed,
            success: false,
            evaluations: 0,
            gap: None,
            fobj_alg: None,
            fobj_anal: optimum,
            fobj_init: None,
            full_run_evaluations,
            error: Some(e.to_string()),
            run_result: None,
        },
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Summary statistics of one benchmark's trials.
pub fn report_from_trials(benchmark: &str, trials: &[TrialOutcome]) -> BenchmarkReport {
    let successful: Vec<&TrialOutcome> = trials.iter().filter(|t| t.success).collect();
    let successes = successful.len();
    BenchmarkReport {
        benchmark: benchmark.to_string(),
        trials: trials.len(),
        successes,
        success_rate: if trials.is_empty() { 0.0 } else { 100.0 * successes as f64 / trials.len() as f64 },
        mean_evaluations_successful: mean(successful.iter().map(|t| t.evaluations as f64)),
        mean_gap_successful: mean(successful.iter().filter_map(|t| t.gap)),
        mean_full_run_evaluations: mean(trials.iter().filter_map(|t| t.full_run_evaluations.map(|e| e as f64))),
    }
}

/// Runs `trials` seeds (`base_seed + i`) on each named benchmark.
///
/// Trials run in parallel; records come back in benchmark then seed order.
pub fn run_campaign(
    names: &[String],
    trials: usize,
    config: &SnsgaConfig,
    base_seed: u64,
    options: CampaignOptions,
) -> Result<CampaignResult> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    config.validate()?;
    let specs: Vec<BenchmarkSpec> = names.iter().map(|n| benchmarks::lookup(n)).collect::<Result<_>>()?;
    let jobs: Vec<(&BenchmarkSpec, u64)> = specs
        .iter()
        .flat_map(|s| (0..trials as u64).map(move |i| (s, base_seed + i)))
        .collect();
    let outcomes: Vec<TrialOutcome> = jobs
        .par_iter()
        .map(|(s, seed)| run_trial(s.name, &s.problem, s.known_optimum_value, config, *seed, options))
        .collect();
    let reports = specs
        .iter()
        .zip(outcomes.chunks(trials))
        .map(|(s, chunk)| report_from_trials(s.name, chunk))
        .collect();
    Ok(CampaignResult { trials: outcomes, reports })
}

/// Normalized best-so-far objective per generation for one seeded run to its
/// generation limit.
pub fn convergence_trace(spec: &BenchmarkSpec, config: &SnsgaConfig, seed: u64) -> Result<Vec<(usize, f64)>> {
    let config = SnsgaConfig {
        rng_seed: seed,
        target_objective: None,
        ..config.clone()
    };
    let run = driver::run(&spec.problem, &config)?;
    let values: Vec<f64> = run.trace.iter().map(|r| r.best_objective).collect();
    Ok(run
        .trace
        .iter()
        .map(|r| r.generation)
        .zip(normalize_trace(&values))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimetableSolution {
    pub schedule: Schedule,
    pub total_objective: f64,
    pub trace: Vec<(usize, f64)>,
    pub run: RunResult,
}

/// Optimizes a timetable instance. The population is raised to one more than
/// the encoded dimension when the configured size is too small for the simplex.
pub fn solve_timetable(instance: &TimetableInstance, config: &SnsgaConfig, seed: u64) -> Result<TimetableSolution> {
    if instance.requests().is_empty() {
        return Err(Error::InvalidParameter("instance has no requests".into()));
    }
    let problem = timetable::encode(instance);
    let config = SnsgaConfig {
        rng_seed: seed,
        population_size: config.population_size.max(problem.dimension() + 1),
        ..config.clone()
    };
    let run = driver::run(&problem, &config)?;
    let schedule = timetable::decode(instance, &run.best_point)?;
    let total_objective = timetable::total_objective(instance, &schedule)?;
    let trace = timetable::objective_trace(instance, &schedule)?;
    Ok(TimetableSolution { schedule, total_objective, trace, run })
}
