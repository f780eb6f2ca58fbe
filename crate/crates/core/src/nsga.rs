//! Real-coded genetic operators and fast non-dominated sorting.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{Bounds, Individual};

/// `a` dominates `b` when it is no worse in every objective and strictly
/// better in at least one (minimization).
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Partitions `members` into non-dominated fronts and stores each member's
/// front index in its `rank`.
///
/// Returns member indices per front, ascending within each front.
pub fn fast_nondominated_sort(members: &mut [Individual]) -> Result<Vec<Vec<usize>>> {
    for (index, m) in members.iter().enumerate() {
        if !m.is_evaluated() {
            return Err(Error::Unevaluated { index });
        }
    }
    let objs: Vec<&[f64]> = members.iter().map(|m| m.objectives().unwrap()).collect();
    let n = members.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];

    for i in 0..n {
        for j in i + 1..n {
            if dominates(objs[i], objs[j]) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if dominates(objs[j], objs[i]) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by[p] {
                domination_count[q] -= 1;
                if domination_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }

    for (rank, front) in fronts.iter().enumerate() {
        for &i in front {
            members[i].rank = Some(rank);
        }
    }
    Ok(fronts)
}

/// Ordering key used for selection and survival: rank, then first objective.
pub fn rank_fitness_cmp(a: &Individual, b: &Individual) -> std::cmp::Ordering {
    let ra = a.rank.unwrap_or(usize::MAX);
    let rb = b.rank.unwrap_or(usize::MAX);
    ra.cmp(&rb).then_with(|| a.fitness().total_cmp(&b.fitness()))
}

/// Deterministic winner between members `i` and `j`: lower rank, then lower
/// fitness, then lower index.
pub fn tournament_winner(members: &[Individual], i: usize, j: usize) -> usize {
    match rank_fitness_cmp(&members[i], &members[j]) {
        std::cmp::Ordering::Less => i,
        std::cmp::Ordering::Greater => j,
        std::cmp::Ordering::Equal => i.min(j),
    }
}

/// Draws two members uniformly (with replacement) and returns the winner.
pub fn binary_tournament<'a, R: Rng + ?Sized>(members: &'a [Individual], rng: &mut R) -> Result<&'a Individual> {
    if members.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let i = rng.random_range(0..members.len());
    let j = rng.random_range(0..members.len());
    Ok(&members[tournament_winner(members, i, j)])
}

/// Crossover ratio, mutation scale and mutation shrink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneticParams {
    pub crossover_ratio: f64,
    pub mutation_scale: f64,
    pub mutation_shrink: f64,
}

impl Default for GeneticParams {
    fn default() -> Self {
        Self {
            crossover_ratio: 1.2,
            mutation_scale: 0.1,
            mutation_shrink: 0.5,
        }
    }
}

impl GeneticParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.crossover_ratio > 0.0) {
            return Err(Error::InvalidParameter(format!("crossover ratio must be > 0, got {}", self.crossover_ratio)));
        }
        if !(self.mutation_scale > 0.0) {
            return Err(Error::InvalidParameter(format!("mutation scale must be > 0, got {}", self.mutation_scale)));
        }
        if !(self.mutation_shrink > 0.0 && self.mutation_shrink <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "mutation shrink must lie in (0, 1], got {}",
                self.mutation_shrink
            )));
        }
        Ok(())
    }
}

/// Blend crossover: `c_i = a_i + r_i * ratio * (b_i - a_i)` with `r_i ~ U[0, 1]`,
/// clipped to `bounds`. The child is unevaluated.
pub fn crossover<R: Rng + ?Sized>(
    parent_a: &Individual,
    parent_b: &Individual,
    ratio: f64,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Individual> {
    if parent_a.dimension() != parent_b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: parent_a.dimension(),
            found: parent_b.dimension(),
        });
    }
    if parent_a.dimension() != bounds.dimension() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dimension(),
            found: parent_a.dimension(),
        });
    }
    let mut child: Vec<f64> = parent_a
        .position
        .iter()
        .zip(&parent_b.position)
        .map(|(&a, &b)| {
            let r: f64 = rng.random();
            a + r * ratio * (b - a)
        })
        .collect();
    bounds.clamp_in_place(&mut child);
    Ok(Individual::new(child))
}

/// Mutation standard deviation at `generation` for a coordinate of the given width.
pub fn mutation_sigma(scale: f64, shrink: f64, generation: usize, max_generations: usize, width: f64) -> f64 {
    let progress = if max_generations == 0 {
        0.0
    } else {
        generation as f64 / max_generations as f64
    };
    scale * (1.0 - shrink * progress) * width
}

/// Adds shrinking Gaussian noise to every coordinate, then clips.
pub fn mutate<R: Rng + ?Sized>(
    individual: &Individual,
    params: &GeneticParams,
    generation: usize,
    max_generations: usize,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Individual> {
    if individual.dimension() != bounds.dimension() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dimension(),
            found: individual.dimension(),
        });
    }
    if generation > max_generations {
        return Err(Error::InvalidParameter(format!(
            "generation {generation} exceeds maximum {max_generations}"
        )));
    }
    let mut pos: Vec<f64> = individual
        .position
        .iter()
        .zip(bounds.intervals())
        .map(|(&x, iv)| {
            let sigma = mutation_sigma(
                params.mutation_scale,
                params.mutation_shrink,
                generation,
                max_generations,
                iv.width(),
            );
            let z: f64 = rng.sample(StandardNormal);
            x + sigma * z
        })
        .collect();
    bounds.clamp_in_place(&mut pos);
    Ok(Individual::new(pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pop(objs: &[Vec<f64>]) -> Vec<Individual> {
        objs.iter()
            .enumerate()
            .map(|(i, o)| Individual::evaluated(vec![i as f64], o.clone()))
            .collect()
    }

    /// Front construction by repeated peeling with a full pairwise scan.
    fn brute_force_fronts(objs: &[Vec<f64>]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..objs.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| !remaining.iter().any(|&j| dominates(&objs[j], &objs[i])))
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn dominance_is_irreflexive_and_asymmetric() {
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]));
        assert!(dominates(&[1.0, 2.0], &[1.0, 3.0]));
        assert!(!dominates(&[1.0, 3.0], &[1.0, 2.0]));
        assert!(!dominates(&[1.0, 5.0], &[5.0, 1.0]));
    }

    #[test]
    fn scalar_sort_is_fitness_order() {
        let mut m = pop(&[vec![3.0], vec![1.0], vec![2.0]]);
        let fronts = fast_nondominated_sort(&mut m).unwrap();
        assert_eq!(fronts, vec![vec![1], vec![2], vec![0]]);
        assert_eq!(m[0].rank, Some(2));
    }

    #[test]
    fn two_objective_example() {
        let mut m = pop(&[vec![1.0, 5.0], vec![5.0, 1.0], vec![3.0, 3.0], vec![4.0, 4.0]]);
        let fronts = fast_nondominated_sort(&mut m).unwrap();
        assert_eq!(fronts, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn identical_members_share_front() {
        let mut m = pop(&vec![vec![2.0, 2.0]; 5]);
        let fronts = fast_nondominated_sort(&mut m).unwrap();
        assert_eq!(fronts, vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn unevaluated_member_is_rejected() {
        let mut m = pop(&[vec![1.0]]);
        m.push(Individual::new(vec![0.0]));
        assert_eq!(fast_nondominated_sort(&mut m).unwrap_err(), Error::Unevaluated { index: 1 });
    }

    #[test]
    fn tournament_rules() {
        let mut m = pop(&[vec![5.0], vec![2.0]]);
        m[0].rank = Some(3);
        m[1].rank = Some(0);
        assert_eq!(tournament_winner(&m, 0, 1), 1);
        assert_eq!(tournament_winner(&m, 1, 0), 1);
        m = pop(&[vec![2.0], vec![5.0]]);
        m[0].rank = Some(0);
        m[1].rank = Some(0);
        assert_eq!(tournament_winner(&m, 1, 0), 0);
        let tie = vec![m[0].clone(), m[0].clone()];
        assert_eq!(tournament_winner(&tie, 1, 0), 0);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let single = pop(&[vec![7.0]]);
        assert_eq!(binary_tournament(&single, &mut rng).unwrap().fitness(), 7.0);
        assert_eq!(binary_tournament(&[], &mut rng).unwrap_err(), Error::EmptyPopulation);
    }

    #[test]
    fn crossover_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b2 = Bounds::uniform(2, -5.0, 5.0).unwrap();
        let same = Individual::new(vec![1.0, 1.0]);
        assert_eq!(crossover(&same, &same, 1.2, &b2, &mut rng).unwrap().position, vec![1.0, 1.0]);

        let unit = Bounds::uniform(1, 0.0, 1.0).unwrap();
        let a = Individual::new(vec![0.0]);
        let b = Individual::new(vec![1.0]);
        for _ in 0..1000 {
            let c = crossover(&a, &b, 1.2, &unit, &mut rng).unwrap();
            assert!((0.0..=1.0).contains(&c.position[0]));
        }
        assert!(crossover(&a, &same, 1.2, &b2, &mut rng).is_err());
    }

    #[test]
    fn crossover_distribution_mean() {
        // r ~ U[0,1] scaled by 1.2 gives a child uniform on [0, 1.2]; mean 0.6.
        let wide = Bounds::uniform(1, -10.0, 10.0).unwrap();
        let a = Individual::new(vec![0.0]);
        let b = Individual::new(vec![1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mut sum = 0.0;
        let mut max: f64 = 0.0;
        for _ in 0..n {
            let c = crossover(&a, &b, 1.2, &wide, &mut rng).unwrap().position[0];
            sum += c;
            max = max.max(c);
        }
        let mean = sum / n as f64;
        // standard error = 1.2 / sqrt(12 n) ≈ 1.1e-3
        assert!((mean - 0.6).abs() < 5e-3, "mean {mean}");
        assert!(max > 1.19 && max <= 1.2);
    }

    #[test]
    fn sigma_schedule() {
        assert!((mutation_sigma(0.1, 0.5, 0, 60, 10.0) - 1.0).abs() < 1e-15);
        assert!((mutation_sigma(0.1, 0.5, 60, 60, 10.0) - 0.5).abs() < 1e-15);
        assert!((mutation_sigma(0.1, 0.5, 60, 60, 1.0) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn mutation_std_matches_sigma() {
        let bounds = Bounds::uniform(1, -1000.0, 1000.0).unwrap();
        let params = GeneticParams { mutation_scale: 0.001, ..Default::default() };
        let ind = Individual::new(vec![0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 50_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| mutate(&ind, &params, 0, 10, &bounds, &mut rng).unwrap().position[0])
            .collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var.sqrt() - 2.0).abs() < 0.05, "std {}", var.sqrt());
    }

    #[test]
    fn tiny_scale_is_near_identity() {
        let bounds = Bounds::uniform(3, -1.0, 1.0).unwrap();
        let params = GeneticParams { mutation_scale: 1e-300, ..Default::default() };
        let ind = Individual::new(vec![0.25, -0.5, 0.75]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let out = mutate(&ind, &params, 3, 10, &bounds, &mut rng).unwrap();
        for (a, b) in out.position.iter().zip(&ind.position) {
            assert!((a - b).abs() < 1e-250);
        }
    }

    #[test]
    fn params_validation() {
        assert!(GeneticParams::default().validate().is_ok());
        assert!(GeneticParams { mutation_shrink: 1.5, ..Default::default() }.validate().is_err());
        assert!(GeneticParams { crossover_ratio: 0.0, ..Default::default() }.validate().is_err());
    }

    proptest! {
        #[test]
        fn sort_matches_brute_force(
            objs in (1usize..=3).prop_flat_map(|m| prop::collection::vec(prop::collection::vec(0u8..6, m), 1..=50))
        ) {
            let objs: Vec<Vec<f64>> = objs.into_iter().map(|o| o.into_iter().map(f64::from).collect()).collect();
            let mut m = pop(&objs);
            let fronts = fast_nondominated_sort(&mut m).unwrap();
            prop_assert_eq!(&fronts, &brute_force_fronts(&objs));
            for &i in &fronts[0] {
                prop_assert!(!objs.iter().any(|o| dominates(o, &objs[i])));
            }
        }

        #[test]
        fn sigma_non_increasing(g in 0usize..60, scale in 0.01f64..1.0, shrink in 0.0f64..=1.0) {
            prop_assert!(mutation_sigma(scale, shrink, g + 1, 60, 3.0) <= mutation_sigma(scale, shrink, g, 60, 3.0));
        }

        #[test]
        fn operators_stay_in_bounds(
            a in prop::collection::vec(-2.0f64..2.0, 3),
            b in prop::collection::vec(-2.0f64..2.0, 3),
            seed in any::<u64>(),
            g in 0usize..=20,
        ) {
            let bounds = Bounds::uniform(3, -2.0, 2.0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let child = crossover(&Individual::new(a), &Individual::new(b), 1.2, &bounds, &mut rng).unwrap();
            prop_assert!(bounds.contains(&child.position));
            let mutated = mutate(&child, &GeneticParams::default(), g, 20, &bounds, &mut rng).unwrap();
            prop_assert!(bounds.contains(&mutated.position));
        }
    }
}
