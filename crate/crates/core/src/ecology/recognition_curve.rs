use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::heuristics::{recognition_accuracy, recognition_decide, Decision};
use crate::seed::{self, derive_seed};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub recognized: usize,
    pub formula: f64,
    pub simulated: f64,
}

/// Expected and simulated recognition-heuristic accuracy for every number of
/// recognized objects `0..=population`.
///
/// Each simulated trial draws a uniform pair of distinct objects. In a mixed
/// pair the recognized object is the better one with probability `alpha`;
/// when both are recognized, knowledge picks the better one with probability
/// `beta`; otherwise the heuristic guesses.
pub fn less_is_more_curve(
    population: usize,
    alpha: f64,
    beta: f64,
    trials: u64,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    // validates population, alpha and beta
    recognition_accuracy(population, 0, alpha, beta)?;

    (0..=population)
        .into_par_iter()
        .map(|n| {
            let formula = recognition_accuracy(population, n, alpha, beta)?;
            let mut rng = seed::rng(derive_seed(seed, n as u64));
            let mut correct = 0u64;
            for _ in 0..trials {
                // objects 0..n are the recognized ones
                let i = rng.random_range(0..population);
                let k = rng.random_range(0..population - 1);
                let j = if k >= i { k + 1 } else { k };
                let (ra, rb) = (i < n, j < n);
                let a_better = match (ra, rb) {
                    (true, false) => rng.random_bool(alpha),
                    (false, true) => !rng.random_bool(alpha),
                    _ => rng.random_bool(0.5),
                };
                let truth = if a_better {
                    Decision::ChooseA
                } else {
                    Decision::ChooseB
                };
                let knows = ra && rb && rng.random_bool(beta);
                let knowledge = || if knows { truth } else { truth.flipped() };
                let decision = recognition_decide(ra, rb, knowledge, &mut rng);
                if decision == truth {
                    correct += 1;
                }
            }
            Ok(CurvePoint {
                recognized: n,
                formula,
                simulated: correct as f64 / trials as f64,
            })
        })
        .collect()
}
