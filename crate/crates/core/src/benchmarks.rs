//! The ten classic multimodal test problems with their known optima.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::objective::{Bounds, Interval, ObjectiveProblem};

/// Branin RCOS.
pub fn branin(x: &[f64]) -> f64 {
    let b = 5.1 / (4.0 * PI * PI);
    let c = 5.0 / PI;
    let t = 1.0 / (8.0 * PI);
    (x[1] - b * x[0] * x[0] + c * x[0] - 6.0).powi(2) + 10.0 * (1.0 - t) * x[0].cos() + 10.0
}

pub fn goldstein_price(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let p = 1.0 + (a + b + 1.0).powi(2) * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
    let q = 30.0 + (2.0 * a - 3.0 * b).powi(2) * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
    p * q
}

/// Bohachevsky B2.
pub fn b2(x: &[f64]) -> f64 {
    x[0] * x[0] + 2.0 * x[1] * x[1] - 0.3 * (3.0 * PI * x[0]).cos() - 0.4 * (4.0 * PI * x[1]).cos() + 0.7
}

pub fn shubert(x: &[f64]) -> f64 {
    let term = |v: f64| (1..=5).map(|j| j as f64 * ((j as f64 + 1.0) * v + j as f64).cos()).sum::<f64>();
    term(x[0]) * term(x[1])
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

pub fn zakharov(x: &[f64]) -> f64 {
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let lin: f64 = x.iter().enumerate().map(|(i, v)| 0.5 * (i as f64 + 1.0) * v).sum();
    sq + lin.powi(2) + lin.powi(4)
}

const HARTMANN3_A: [[f64; 3]; 4] = [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]];
const HARTMANN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.0381, 0.5743, 0.8828],
];
const HARTMANN3_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

/// Hartmann, 3 variables, 4 terms.
pub fn hartmann3(x: &[f64]) -> f64 {
    -(0..4)
        .map(|i| {
            let inner: f64 = (0..3).map(|j| HARTMANN3_A[i][j] * (x[j] - HARTMANN3_P[i][j]).powi(2)).sum();
            HARTMANN3_C[i] * (-inner).exp()
        })
        .sum::<f64>()
}

const SHEKEL_A: [[f64; 4]; 5] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
];
const SHEKEL_C: [f64; 5] = [0.1, 0.2, 0.2, 0.4, 0.4];

/// Shekel, 4 variables, 5 terms.
pub fn shekel5(x: &[f64]) -> f64 {
    -(0..5)
        .map(|i| {
            let d: f64 = (0..4).map(|j| (x[j] - SHEKEL_A[i][j]).powi(2)).sum();
            1.0 / (d + SHEKEL_C[i])
        })
        .sum::<f64>()
}

/// A registered test problem and its analytical minimum.
#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub problem: ObjectiveProblem,
    /// Short identifier used on the command line and in output files.
    pub name: &'static str,
    /// Label as it appears in the published result tables.
    pub label: &'static str,
    pub known_optimum_value: f64,
    pub known_optimum_points: Vec<Vec<f64>>,
    /// Allowed |f(x*) - f*| when checking the registry.
    pub optimum_tolerance: f64,
    pub source_note: &'static str,
}

impl BenchmarkSpec {
    pub fn dimension(&self) -> usize {
        self.problem.dimension()
    }
}

fn spec(
    name: &'static str,
    label: &'static str,
    bounds: Bounds,
    f: fn(&[f64]) -> f64,
    optimum: f64,
    points: Vec<Vec<f64>>,
    source_note: &'static str,
) -> BenchmarkSpec {
    BenchmarkSpec {
        problem: ObjectiveProblem::scalar(name, bounds, f),
        name,
        label,
        known_optimum_value: optimum,
        known_optimum_points: points,
        optimum_tolerance: 1e-6,
        source_note,
    }
}

fn cube(n: usize, lo: f64, hi: f64) -> Bounds {
    Bounds::uniform(n, lo, hi).expect("static bounds are valid")
}

/// The ten benchmark problems, in published table order.
pub fn registry() -> Vec<BenchmarkSpec> {
    let branin_bounds = Bounds::new(vec![Interval::new(-5.0, 10.0), Interval::new(0.0, 15.0)]).unwrap();
    let mut specs = vec![
        spec(
            "RC",
            "RC",
            branin_bounds,
            branin,
            5.0 / (4.0 * PI),
            vec![vec![-PI, 12.275], vec![PI, 2.275], vec![3.0 * PI, 2.475]],
            "Branin RCOS; x1 in [-5, 10], x2 in [0, 15]; three global minima, f* = 5/(4 pi) ~ 0.397887",
        ),
        spec(
            "GP",
            "GP",
            cube(2, -2.0, 2.0),
            goldstein_price,
            3.0,
            vec![vec![0.0, -1.0]],
            "Goldstein-Price; [-2, 2]^2; f* = 3 at (0, -1)",
        ),
        spec(
            "B2",
            "B2",
            cube(2, -100.0, 100.0),
            b2,
            0.0,
            vec![vec![0.0, 0.0]],
            "Bohachevsky B2; [-100, 100]^2; f* = 0 at the origin",
        ),
        spec(
            "SH",
            "SH",
            cube(2, -10.0, 10.0),
            shubert,
            -186.730_908_831_023_9,
            vec![
                vec![-7.083_506_409_397_382, 4.858_056_877_022_195],
                vec![-1.425_128_428_956_442_3, -0.800_321_100_506_760_2],
            ],
            "Shubert; [-10, 10]^2; 18 global minima, f* ~ -186.7309",
        ),
        spec(
            "R2",
            "R_2",
            cube(2, -5.0, 10.0),
            rosenbrock,
            0.0,
            vec![vec![1.0; 2]],
            "Rosenbrock; [-5, 10]^2; f* = 0 at (1, 1)",
        ),
        spec(
            "Z2",
            "Z_2",
            cube(2, -5.0, 10.0),
            zakharov,
            0.0,
            vec![vec![0.0; 2]],
            "Zakharov; [-5, 10]^2; f* = 0 at the origin",
        ),
        spec(
            "H34",
            "H_{3,4}",
            cube(3, 0.0, 1.0),
            hartmann3,
            -3.862_779_787_332_663,
            vec![vec![0.114_588_881_225_412_87, 0.555_648_895_473_937_1, 0.852_546_984_217_274_6]],
            "Hartmann 3-variable 4-term; [0, 1]^3; f* ~ -3.86278",
        ),
        spec(
            "S45",
            "S_{4,5}",
            cube(4, 0.0, 10.0),
            shekel5,
            -10.153_199_679_058_229,
            vec![vec![
                4.000_037_152_376_549,
                4.000_133_278_657_566,
                4.000_037_151_057_555,
                4.000_133_277_090_425,
            ]],
            "Shekel 4-variable 5-term; [0, 10]^4; f* ~ -10.1532 near (4, 4, 4, 4)",
        ),
        spec(
            "R5",
            "R_5",
            cube(5, -5.0, 10.0),
            rosenbrock,
            0.0,
            vec![vec![1.0; 5]],
            "Rosenbrock; [-5, 10]^5; f* = 0 at (1, ..., 1)",
        ),
        spec(
            "R10",
            "R_{10}",
            cube(10, -5.0, 10.0),
            rosenbrock,
            0.0,
            vec![vec![1.0; 10]],
            "Rosenbrock; [-5, 10]^10; f* = 0 at (1, ..., 1)",
        ),
    ];
    // The Shekel minimizer is usually quoted to only a few digits.
    specs.iter_mut().find(|s| s.name == "S45").unwrap().optimum_tolerance = 1e-4;
    specs
}

/// Looks a benchmark up by short name (case-insensitive) or table label.
pub fn lookup(name: &str) -> Result<BenchmarkSpec> {
    registry()
        .into_iter()
        .find(|s| s.name.eq_ignore_ascii_case(name) || s.label == name)
        .ok_or_else(|| Error::UnknownBenchmark(name.to_string()))
}

/// Evaluates each spec at each of its optimum points and returns the largest
/// deviation per spec, failing on the first one above its tolerance.
pub fn verify_registry(specs: &[BenchmarkSpec]) -> Result<Vec<(String, f64)>> {
    specs
        .iter()
        .map(|s| {
            let deviation = s
                .known_optimum_points
                .iter()
                .map(|p| (s.problem.evaluate_uncounted(p)[0] - s.known_optimum_value).abs())
                .fold(0.0, f64::max);
            if !(deviation <= s.optimum_tolerance) || s.known_optimum_points.is_empty() {
                return Err(Error::RegistryIntegrity {
                    name: s.name.to_string(),
                    deviation,
                    tolerance: s.optimum_tolerance,
                });
            }
            Ok((s.name.to_string(), deviation))
        })
        .collect()
}

/// Serializable summary of one registry entry.
#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkSummary {
    pub name: String,
    pub label: String,
    pub dimension: usize,
    pub bounds: Vec<(f64, f64)>,
    pub optimum_value: f64,
    pub optimum_points: Vec<Vec<f64>>,
    pub source_note: String,
}

impl From<&BenchmarkSpec> for BenchmarkSummary {
    fn from(s: &BenchmarkSpec) -> Self {
        Self {
            name: s.name.to_string(),
            label: s.label.to_string(),
            dimension: s.dimension(),
            bounds: s.problem.bounds().intervals().iter().map(|iv| (iv.low, iv.high)).collect(),
            optimum_value: s.known_optimum_value,
            optimum_points: s.known_optimum_points.clone(),
            source_note: s.source_note.to_string(),
        }
    }
}

/// The registry as a JSON document.
pub fn export_registry() -> Result<String> {
    let summaries: Vec<BenchmarkSummary> = registry().iter().map(BenchmarkSummary::from).collect();
    Ok(serde_json::to_string_pretty(&summaries)?)
}
