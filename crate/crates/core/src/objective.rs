//! Problem abstraction shared by every optimizer component.
//!
//! An [`ObjectiveProblem`] is a box-bounded minimization problem. All
//! evaluations go through an [`Evaluator`], which is where evaluation
//! counting (and, in the driver, budget and target handling) lives.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval `[low, high]` for a single coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn new(low: f64, high: f64) -> Self {
        Self { low, high }
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.low && x <= self.high
    }

    pub fn clamp(&self, x: f64) -> f64 {
        self.low.max(self.high.min(x))
    }
}

/// Per-coordinate box bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds(Vec<Interval>);

impl Bounds {
    /// Validates that every interval is finite with `low <= high`.
    ///
    /// Zero-width intervals are accepted; they pin a coordinate.
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidParameter("bounds must have at least one coordinate".into()));
        }
        for (index, iv) in intervals.iter().enumerate() {
            if !(iv.low.is_finite() && iv.high.is_finite()) || iv.low > iv.high {
                return Err(Error::InvalidBounds {
                    index,
                    low: iv.low,
                    high: iv.high,
                });
            }
        }
        Ok(Self(intervals))
    }

    /// The same interval repeated `dimension` times.
    pub fn uniform(dimension: usize, low: f64, high: f64) -> Result<Self> {
        Self::new(vec![Interval::new(low, high); dimension])
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.0.len() && self.0.iter().zip(point).all(|(iv, &x)| iv.contains(x))
    }

    /// Clamps `point` in place.
    pub fn clamp_in_place(&self, point: &mut [f64]) {
        for (x, iv) in point.iter_mut().zip(&self.0) {
            *x = iv.clamp(*x);
        }
    }
}

/// Replaces each coordinate with `max(low, min(high, x))`.
pub fn clip_to_bounds(point: &[f64], bounds: &Bounds) -> Result<Vec<f64>> {
    if point.len() != bounds.dimension() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dimension(),
            found: point.len(),
        });
    }
    let mut out = point.to_vec();
    bounds.clamp_in_place(&mut out);
    Ok(out)
}

type ObjectiveFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A bounded real-vector minimization problem.
///
/// Cloning is cheap; the objective function is shared.
#[derive(Clone)]
pub struct ObjectiveProblem {
    name: String,
    bounds: Bounds,
    objective_count: usize,
    func: Arc<ObjectiveFn>,
}

impl ObjectiveProblem {
    pub fn new<F>(name: impl Into<String>, bounds: Bounds, objective_count: usize, func: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        assert!(objective_count >= 1, "objective_count must be positive");
        Self {
            name: name.into(),
            bounds,
            objective_count,
            func: Arc::new(func),
        }
    }

    /// Single-objective problem from a scalar function.
    pub fn scalar<F>(name: impl Into<String>, bounds: Bounds, func: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, bounds, 1, move |x| vec![func(x)])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.bounds.dimension()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn objective_count(&self) -> usize {
        self.objective_count
    }

    /// Raw, uncounted evaluation. Optimizers must go through an [`Evaluator`].
    pub fn evaluate_uncounted(&self, point: &[f64]) -> Vec<f64> {
        (self.func)(point)
    }
}

impl fmt::Debug for ObjectiveProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveProblem")
            .field("name", &self.name)
            .field("dimension", &self.dimension())
            .field("objective_count", &self.objective_count)
            .finish_non_exhaustive()
    }
}

/// Number of objective evaluations performed within one run.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct EvalCounter {
    count: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn starting_at(count: u64) -> Self {
        Self { count }
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}

/// Evaluates `point` and bumps `counter` by exactly one.
///
/// The counter is incremented even when the objective turns out non-finite:
/// the evaluation did happen.
pub fn evaluate_counted(
    problem: &ObjectiveProblem,
    point: &[f64],
    counter: &mut EvalCounter,
) -> Result<Vec<f64>> {
    if point.len() != problem.dimension() {
        return Err(Error::DimensionMismatch {
            expected: problem.dimension(),
            found: point.len(),
        });
    }
    counter.count += 1;
    let values = problem.evaluate_uncounted(point);
    if values.len() != problem.objective_count() || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure {
            point: point.to_vec(),
        });
    }
    Ok(values)
}

/// Why an evaluation request was not (or should no longer be) served.
#[derive(Debug, Clone, PartialEq)]
pub enum Halt {
    /// The evaluation budget is spent; no evaluation was performed.
    BudgetExhausted,
    /// The evaluation just performed met the run's target; stop now.
    TargetReached,
    Failed(Error),
}

impl From<Error> for Halt {
    fn from(err: Error) -> Self {
        Halt::Failed(err)
    }
}

/// Source of counted objective evaluations.
pub trait Evaluator {
    fn problem(&self) -> &ObjectiveProblem;

    fn evaluate(&mut self, point: &[f64]) -> std::result::Result<Vec<f64>, Halt>;

    fn bounds(&self) -> &Bounds {
        self.problem().bounds()
    }
}

/// Plain evaluator: counts, never halts except on numerical failure.
pub struct CountedEvaluator<'a> {
    problem: &'a ObjectiveProblem,
    counter: &'a mut EvalCounter,
}

impl<'a> CountedEvaluator<'a> {
    pub fn new(problem: &'a ObjectiveProblem, counter: &'a mut EvalCounter) -> Self {
        Self { problem, counter }
    }
}

impl Evaluator for CountedEvaluator<'_> {
    fn problem(&self) -> &ObjectiveProblem {
        self.problem
    }

    fn evaluate(&mut self, point: &[f64]) -> std::result::Result<Vec<f64>, Halt> {
        Ok(evaluate_counted(self.problem, point, self.counter)?)
    }
}

/// A real-coded candidate solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub position: Vec<f64>,
    objectives: Option<Vec<f64>>,
    pub rank: Option<usize>,
}

impl Individual {
    pub fn new(position: Vec<f64>) -> Self {
        Self {
            position,
            objectives: None,
            rank: None,
        }
    }

    pub fn evaluated(position: Vec<f64>, objectives: Vec<f64>) -> Self {
        Self {
            position,
            objectives: Some(objectives),
            rank: None,
        }
    }

    pub fn is_evaluated(&self) -> bool {
        self.objectives.is_some()
    }

    pub fn objectives(&self) -> Option<&[f64]> {
        self.objectives.as_deref()
    }

    /// First objective; `+inf` for unevaluated members so they sort last.
    pub fn fitness(&self) -> f64 {
        self.objectives
            .as_ref()
            .and_then(|o| o.first().copied())
            .unwrap_or(f64::INFINITY)
    }

    pub fn dimension(&self) -> usize {
        self.position.len()
    }

    /// Evaluates the current position through `evaluator`.
    pub fn evaluate_with<E: Evaluator + ?Sized>(
        &mut self,
        evaluator: &mut E,
    ) -> std::result::Result<(), Halt> {
        let values = evaluator.evaluate(&self.position)?;
        self.objectives = Some(values);
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub members: Vec<Individual>,
    pub generation: usize,
}

impl Population {
    pub fn new(members: Vec<Individual>, generation: usize) -> Self {
        Self { members, generation }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn mean_fitness(&self) -> Option<f64> {
        if self.members.is_empty() {
            return None;
        }
        Some(self.members.iter().map(Individual::fitness).sum::<f64>() / self.members.len() as f64)
    }
}
