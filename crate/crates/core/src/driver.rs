//! The hybrid loop: simplex-seeded initial population, then generations of
//! tournament selection, blend crossover, Gaussian mutation and a simplex
//! refinement of the most promising offspring, with (mu + lambda) survival.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::is_success;
use crate::nsga::{self, GeneticParams};
use crate::objective::{evaluate_counted, EvalCounter, Evaluator, Halt, Individual, ObjectiveProblem, Population};
use crate::simplex::{nm_iterate, Simplex, SimplexCoefficients};

/// All tunables of a run. Defaults are the tuned values the method ships with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnsgaConfig {
    pub population_size: usize,
    pub max_generations: usize,
    pub crossover_ratio: f64,
    pub mutation_scale: f64,
    pub mutation_shrink: f64,
    pub simplex_side: f64,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub simplex_max_iters: usize,
    /// Share of offspring produced by crossover; the rest are mutated copies
    /// of a tournament winner.
    pub crossover_fraction: f64,
    /// Inner iterations per seed simplex during initialization;
    /// `None` means `min(simplex_max_iters, 10)`.
    pub init_simplex_iters: Option<usize>,
    pub rng_seed: u64,
    pub eval_budget: Option<u64>,
    /// Known optimum value; when set the run stops as soon as the best
    /// objective satisfies the success test against it.
    pub target_objective: Option<f64>,
}

impl Default for SnsgaConfig {
    fn default() -> Self {
        Self {
            population_size: 30,
            max_generations: 60,
            crossover_ratio: 1.2,
            mutation_scale: 0.1,
            mutation_shrink: 0.5,
            simplex_side: 2.0,
            reflection: 1.0,
            expansion: 4.0,
            contraction: 0.2,
            simplex_max_iters: 30,
            crossover_fraction: 0.8,
            init_simplex_iters: None,
            rng_seed: 0,
            eval_budget: None,
            target_objective: None,
        }
    }
}

impl SnsgaConfig {
    pub fn coefficients(&self) -> SimplexCoefficients {
        SimplexCoefficients {
            alpha: self.reflection,
            gamma: self.expansion,
            beta: self.contraction,
            side: self.simplex_side,
        }
    }

    pub fn genetic(&self) -> GeneticParams {
        GeneticParams {
            crossover_ratio: self.crossover_ratio,
            mutation_scale: self.mutation_scale,
            mutation_shrink: self.mutation_shrink,
        }
    }

    pub fn init_iters(&self) -> usize {
        self.init_simplex_iters.unwrap_or(self.simplex_max_iters.min(10))
    }

    pub fn validate(&self) -> Result<()> {
        self.coefficients().validate()?;
        self.genetic().validate()?;
        if self.population_size == 0 {
            return Err(Error::InvalidParameter("population_size must be positive".into()));
        }
        if self.max_generations == 0 {
            return Err(Error::InvalidParameter("max_generations must be positive".into()));
        }
        if self.simplex_max_iters == 0 {
            return Err(Error::InvalidParameter("simplex_max_iters must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_fraction) {
            return Err(Error::InvalidParameter(format!(
                "crossover_fraction must lie in [0, 1], got {}",
                self.crossover_fraction
            )));
        }
        if self.eval_budget == Some(0) {
            return Err(Error::InvalidParameter("eval_budget must be positive".into()));
        }
        if let Some(t) = self.target_objective {
            if !t.is_finite() {
                return Err(Error::InvalidParameter("target_objective must be finite".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxGenerations,
    BudgetExhausted,
    TargetReached,
}

/// One row of the convergence trace, taken at the end of a generation
/// (generation 0 is the initial population).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub generation: usize,
    /// Best objective evaluated so far in the run.
    pub best_objective: f64,
    /// Best objective in the surviving population.
    pub population_best: f64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_point: Vec<f64>,
    pub best_objective: f64,
    pub evaluations_used: u64,
    pub generations_used: usize,
    pub trace: Vec<TraceRecord>,
    pub initial_mean_objective: f64,
    pub stop_reason: StopReason,
}

/// Returned by [`initialize_population`] when evaluation stopped early.
#[derive(Debug, Clone)]
pub struct InitInterrupted {
    pub reason: Halt,
    pub partial: Population,
}

/// Deterministic random stream `stream` derived from `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Member with the smallest first objective; lowest index on ties.
pub fn best_of(population: &Population) -> Result<&Individual> {
    let mut best: Option<(usize, &Individual)> = None;
    for (index, m) in population.members.iter().enumerate() {
        if !m.is_evaluated() {
            return Err(Error::Unevaluated { index });
        }
        if best.is_none_or(|(_, b)| m.fitness() < b.fitness()) {
            best = Some((index, m));
        }
    }
    best.map(|(_, m)| m).ok_or(Error::EmptyPopulation)
}

/// Seeds the population from refined regular simplexes.
///
/// Each uniform random base point grows a regular simplex that is refined
/// for [`SnsgaConfig::init_iters`] iterations; the best vertex of each
/// simplex becomes one member.
pub fn initialize_population<R: Rng + ?Sized, E: Evaluator + ?Sized>(
    config: &SnsgaConfig,
    rng: &mut R,
    evaluator: &mut E,
) -> std::result::Result<Population, InitInterrupted> {
    let bounds = evaluator.bounds().clone();
    let coeffs = config.coefficients();
    let mut members = Vec::with_capacity(config.population_size);

    while members.len() < config.population_size {
        let base: Vec<f64> = bounds
            .intervals()
            .iter()
            .map(|iv| if iv.width() > 0.0 { rng.random_range(iv.low..=iv.high) } else { iv.low })
            .collect();
        let mut simplex = match Simplex::regular(&base, coeffs.side, evaluator) {
            Ok(s) => s,
            Err(reason) => {
                return Err(InitInterrupted {
                    reason,
                    partial: Population::new(members, 0),
                })
            }
        };
        let halted = nm_iterate(&mut simplex, &coeffs, evaluator, config.init_iters()).err();
        let best = simplex.best_index();
        members.push(simplex.into_vertices().swap_remove(best));
        if let Some(reason) = halted {
            return Err(InitInterrupted {
                reason,
                partial: Population::new(members, 0),
            });
        }
    }
    Ok(Population::new(members, 0))
}

/// Evaluator used inside a run: counts, enforces the budget, tracks the best
/// point seen and, once armed, stops at the first successful evaluation.
struct RunEvaluator<'a> {
    problem: &'a ObjectiveProblem,
    counter: EvalCounter,
    budget: Option<u64>,
    target: Option<(f64, f64)>,
    best: Option<(Vec<f64>, f64)>,
}

impl<'a> RunEvaluator<'a> {
    fn new(problem: &'a ObjectiveProblem, budget: Option<u64>) -> Self {
        Self {
            problem,
            counter: EvalCounter::new(),
            budget,
            target: None,
            best: None,
        }
    }

    fn best_value(&self) -> Option<f64> {
        self.best.as_ref().map(|(_, f)| *f)
    }

    fn target_met(&self) -> bool {
        match (self.target, self.best_value()) {
            (Some((target, init)), Some(best)) => is_success(best, target, init),
            _ => false,
        }
    }
}

impl Evaluator for RunEvaluator<'_> {
    fn problem(&self) -> &ObjectiveProblem {
        self.problem
    }

    fn evaluate(&mut self, point: &[f64]) -> std::result::Result<Vec<f64>, Halt> {
        if self.budget.is_some_and(|b| self.counter.count() >= b) {
            return Err(Halt::BudgetExhausted);
        }
        let values = evaluate_counted(self.problem, point, &mut self.counter)?;
        if self.best_value().is_none_or(|b| values[0] < b) {
            self.best = Some((point.to_vec(), values[0]));
            if self.target_met() {
                return Err(Halt::TargetReached);
            }
        }
        Ok(values)
    }
}

/// One generation: select, vary, refine, survive.
fn advance<R: Rng + ?Sized>(
    population: &mut Population,
    generation: usize,
    config: &SnsgaConfig,
    rng: &mut R,
    evaluator: &mut RunEvaluator<'_>,
) -> std::result::Result<(), Halt> {
    let bounds = evaluator.bounds().clone();
    let genetic = config.genetic();
    let n = bounds.dimension();

    nsga::fast_nondominated_sort(&mut population.members)?;

    let crossover_count = (config.crossover_fraction * config.population_size as f64).round() as usize;
    let mut offspring = Vec::with_capacity(config.population_size);
    for _ in 0..config.population_size {
        let a = nsga::binary_tournament(&population.members, rng)?;
        let mut child = if offspring.len() < crossover_count {
            let b = nsga::binary_tournament(&population.members, rng)?;
            nsga::crossover(a, b, genetic.crossover_ratio, &bounds, rng)?
        } else {
            nsga::mutate(a, &genetic, generation, config.max_generations, &bounds, rng)?
        };
        child.evaluate_with(evaluator)?;
        offspring.push(child);
    }

    offspring.sort_by(|a, b| a.fitness().total_cmp(&b.fitness()));
    let rest = offspring.split_off(n + 1);
    let mut simplex = Simplex::from_vertices(offspring)?;
    nm_iterate(&mut simplex, &config.coefficients(), evaluator, config.simplex_max_iters)?;

    let mut union = std::mem::take(&mut population.members);
    union.extend(simplex.into_vertices());
    union.extend(rest);
    nsga::fast_nondominated_sort(&mut union)?;
    union.sort_by(nsga::rank_fitness_cmp);
    union.truncate(config.population_size);
    population.members = union;
    population.generation = generation;
    Ok(())
}

/// Runs the hybrid optimizer on `problem`.
pub fn run(problem: &ObjectiveProblem, config: &SnsgaConfig) -> Result<RunResult> {
    config.validate()?;
    let n = problem.dimension();
    if config.population_size < n + 1 {
        return Err(Error::InvalidParameter(format!(
            "population_size {} is smaller than the {} vertices of a simplex in {n} dimensions",
            config.population_size,
            n + 1
        )));
    }

    let mut evaluator = RunEvaluator::new(problem, config.eval_budget);
    let mut init_rng = substream(config.rng_seed, 0);
    let (mut population, mut halt) = match initialize_population(config, &mut init_rng, &mut evaluator) {
        Ok(p) => (p, None),
        Err(InitInterrupted { reason, partial }) => (partial, Some(reason)),
    };
    if let Some(Halt::Failed(err)) = halt {
        return Err(err);
    }

    let initial_mean_objective = population
        .mean_fitness()
        .or(evaluator.best_value())
        .ok_or_else(|| Error::InvalidParameter("no evaluation fit in the budget".into()))?;

    let record = |population: &Population, generation: usize, ev: &RunEvaluator<'_>| TraceRecord {
        generation,
        best_objective: ev.best_value().unwrap_or(f64::INFINITY),
        population_best: best_of(population).map(Individual::fitness).unwrap_or(f64::INFINITY),
        evaluations: ev.counter.count(),
    };

    let mut trace = vec![record(&population, 0, &evaluator)];
    if let Some(target) = config.target_objective {
        evaluator.target = Some((target, initial_mean_objective));
        if halt.is_none() && evaluator.target_met() {
            halt = Some(Halt::TargetReached);
        }
    }

    let mut generations_used = 0;
    if halt.is_none() {
        for generation in 1..=config.max_generations {
            let mut rng = substream(config.rng_seed, generation as u64);
            let outcome = advance(&mut population, generation, config, &mut rng, &mut evaluator);
            generations_used = generation;
            trace.push(record(&population, generation, &evaluator));
            if let Err(h) = outcome {
                halt = Some(h);
                break;
            }
        }
    }

    let stop_reason = match halt {
        None => StopReason::MaxGenerations,
        Some(Halt::BudgetExhausted) => StopReason::BudgetExhausted,
        Some(Halt::TargetReached) => StopReason::TargetReached,
        Some(Halt::Failed(err)) => return Err(err),
    };
    let (best_point, best_objective) = evaluator.best.clone().expect("at least one evaluation");
    Ok(RunResult {
        best_point,
        best_objective,
        evaluations_used: evaluator.counter.count(),
        generations_used,
        trace,
        initial_mean_objective,
        stop_reason,
    })
}
