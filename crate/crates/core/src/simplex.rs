//! Nelder-Mead simplex geometry and the reflect / expand / contract loop.
//!
//! There is no shrink step. When contraction fails to improve on the worst
//! vertex the contracted point replaces it anyway, so every iteration costs
//! one or two evaluations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{Evaluator, Halt, Individual};

/// Reflection, expansion and contraction coefficients plus the edge length
/// used when building a regular simplex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexCoefficients {
    pub alpha: f64,
    pub gamma: f64,
    pub beta: f64,
    pub side: f64,
}

impl Default for SimplexCoefficients {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            gamma: 4.0,
            beta: 0.2,
            side: 2.0,
        }
    }
}

impl SimplexCoefficients {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("reflection coefficient must be > 0, got {}", self.alpha)));
        }
        if !(self.gamma > 1.0) {
            return Err(Error::InvalidParameter(format!("expansion coefficient must be > 1, got {}", self.gamma)));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidParameter(format!("contraction coefficient must lie in [0, 1], got {}", self.beta)));
        }
        if !(self.side > 0.0) || !self.side.is_finite() {
            return Err(Error::InvalidParameter(format!("simplex side must be > 0, got {}", self.side)));
        }
        Ok(())
    }
}

/// Offsets `(p, q)` of a regular simplex with edge length `side` in `n` dimensions.
pub fn regular_offsets(n: usize, side: f64) -> (f64, f64) {
    let nf = n as f64;
    let scale = side / (nf * std::f64::consts::SQRT_2);
    let root = (nf + 1.0).sqrt();
    (scale * (root + nf - 1.0), scale * (root - 1.0))
}

/// Vertices of a regular simplex with `base` as its first vertex.
///
/// Vertex `j` (1-based) moves `p` along axis `j` and `q` along every other axis.
pub fn regular_simplex(base: &[f64], side: f64) -> Result<Vec<Vec<f64>>> {
    let n = base.len();
    if n == 0 {
        return Err(Error::InvalidParameter("regular simplex needs dimension >= 1".into()));
    }
    if !(side > 0.0) {
        return Err(Error::InvalidParameter(format!("simplex side must be > 0, got {side}")));
    }
    let (p, q) = regular_offsets(n, side);
    let mut vertices = Vec::with_capacity(n + 1);
    vertices.push(base.to_vec());
    for j in 0..n {
        let v = base
            .iter()
            .enumerate()
            .map(|(s, &x)| x + if s == j { p } else { q })
            .collect();
        vertices.push(v);
    }
    Ok(vertices)
}

fn check_same_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// `(1 + alpha) * centroid - alpha * worst`
pub fn reflect(worst: &[f64], centroid: &[f64], alpha: f64) -> Result<Vec<f64>> {
    check_same_len(centroid, worst)?;
    Ok(centroid
        .iter()
        .zip(worst)
        .map(|(&c, &w)| (1.0 + alpha) * c - alpha * w)
        .collect())
}

/// `gamma * reflected + (1 - gamma) * centroid`
pub fn expand(reflected: &[f64], centroid: &[f64], gamma: f64) -> Result<Vec<f64>> {
    check_same_len(centroid, reflected)?;
    Ok(reflected
        .iter()
        .zip(centroid)
        .map(|(&r, &c)| gamma * r + (1.0 - gamma) * c)
        .collect())
}

/// `beta * worst + (1 - beta) * centroid`
pub fn contract(worst: &[f64], centroid: &[f64], beta: f64) -> Result<Vec<f64>> {
    check_same_len(centroid, worst)?;
    Ok(worst
        .iter()
        .zip(centroid)
        .map(|(&w, &c)| beta * w + (1.0 - beta) * c)
        .collect())
}

/// Which move replaced the worst vertex in one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Expansion,
    Reflection,
    Contraction,
}

/// `n + 1` evaluated vertices in `n` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Individual>,
}

impl Simplex {
    pub fn from_vertices(vertices: Vec<Individual>) -> Result<Self> {
        let n = vertices.first().map(Individual::dimension).unwrap_or(0);
        if n == 0 || vertices.len() != n + 1 {
            return Err(Error::InvalidParameter(format!(
                "a simplex in {n} dimensions needs {} vertices, got {}",
                n + 1,
                vertices.len()
            )));
        }
        for (index, v) in vertices.iter().enumerate() {
            if v.dimension() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.dimension(),
                });
            }
            if !v.is_evaluated() {
                return Err(Error::Unevaluated { index });
            }
        }
        Ok(Self { vertices })
    }

    /// Builds a regular simplex around `base`, clips it to the problem
    /// bounds and evaluates every vertex.
    pub fn regular<E: Evaluator + ?Sized>(
        base: &[f64],
        side: f64,
        evaluator: &mut E,
    ) -> std::result::Result<Self, Halt> {
        let bounds = evaluator.bounds().clone();
        let mut vertices = Vec::with_capacity(base.len() + 1);
        for mut point in regular_simplex(base, side)? {
            bounds.clamp_in_place(&mut point);
            let mut v = Individual::new(point);
            v.evaluate_with(evaluator)?;
            vertices.push(v);
        }
        Ok(Self::from_vertices(vertices)?)
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Individual] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Individual> {
        self.vertices
    }

    /// Orders vertices best first. Stable, so equal vertices keep their order.
    pub fn sort_vertices(&mut self) {
        self.vertices.sort_by(|a, b| a.fitness().total_cmp(&b.fitness()));
    }

    /// Index of the best vertex; lowest index on ties.
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.vertices.iter().enumerate().skip(1) {
            if v.fitness() < self.vertices[best].fitness() {
                best = i;
            }
        }
        best
    }

    /// Index of the worst vertex; lowest index on ties.
    pub fn worst_index(&self) -> usize {
        let mut worst = 0;
        for (i, v) in self.vertices.iter().enumerate().skip(1) {
            if v.fitness() > self.vertices[worst].fitness() {
                worst = i;
            }
        }
        worst
    }

    pub fn best(&self) -> &Individual {
        &self.vertices[self.best_index()]
    }

    /// Mean of every vertex except `excluded`.
    fn centroid_without(&self, excluded: usize) -> Vec<f64> {
        let n = self.dimension();
        let mut c = vec![0.0; n];
        for (i, v) in self.vertices.iter().enumerate() {
            if i == excluded {
                continue;
            }
            for (acc, x) in c.iter_mut().zip(&v.position) {
                *acc += x;
            }
        }
        c.iter_mut().for_each(|x| *x /= n as f64);
        c
    }

    /// Runs a single iteration, replacing the worst vertex.
    pub fn step<E: Evaluator + ?Sized>(
        &mut self,
        coeffs: &SimplexCoefficients,
        evaluator: &mut E,
    ) -> std::result::Result<Move, Halt> {
        let bounds = evaluator.bounds().clone();
        let h = self.worst_index();
        let f_best = self.best().fitness();
        let f_worst = self.vertices[h].fitness();
        let centroid = self.centroid_without(h);

        let mut reflected = Individual::new(reflect(&self.vertices[h].position, &centroid, coeffs.alpha)?);
        bounds.clamp_in_place(&mut reflected.position);
        reflected.evaluate_with(evaluator)?;

        let (replacement, mv) = if reflected.fitness() < f_best {
            let mut expanded = Individual::new(expand(&reflected.position, &centroid, coeffs.gamma)?);
            bounds.clamp_in_place(&mut expanded.position);
            expanded.evaluate_with(evaluator)?;
            if expanded.fitness() < reflected.fitness() {
                (expanded, Move::Expansion)
            } else {
                (reflected, Move::Reflection)
            }
        } else if reflected.fitness() < f_worst {
            (reflected, Move::Reflection)
        } else {
            let mut contracted = Individual::new(contract(&self.vertices[h].position, &centroid, coeffs.beta)?);
            bounds.clamp_in_place(&mut contracted.position);
            contracted.evaluate_with(evaluator)?;
            (contracted, Move::Contraction)
        };
        self.vertices[h] = replacement;
        Ok(mv)
    }
}

/// Arithmetic mean of the `n` vertices other than the worst one.
pub fn centroid_excluding_worst(simplex: &Simplex) -> Vec<f64> {
    simplex.centroid_without(simplex.worst_index())
}

/// Runs up to `max_iters` iterations in place.
///
/// On a halt the simplex keeps every replacement completed so far.
pub fn nm_iterate<E: Evaluator + ?Sized>(
    simplex: &mut Simplex,
    coeffs: &SimplexCoefficients,
    evaluator: &mut E,
    max_iters: usize,
) -> std::result::Result<(), Halt> {
    for _ in 0..max_iters {
        simplex.step(coeffs, evaluator)?;
    }
    Ok(())
}
