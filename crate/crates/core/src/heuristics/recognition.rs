//! The recognition heuristic and its expected accuracy.

use std::collections::BTreeSet;

use rand::Rng;

use super::Decision;
use crate::seed;
use crate::{Error, Result};

/// If exactly one object is recognized, choose it. If both are, defer to
/// `knowledge`. If neither is, guess.
pub fn recognition_choose<K>(
    a_id: &str,
    b_id: &str,
    recognized: &BTreeSet<String>,
    knowledge: K,
    seed: u64,
) -> Decision
where
    K: FnOnce(&str, &str) -> Decision,
{
    recognition_decide(
        recognized.contains(a_id),
        recognized.contains(b_id),
        || knowledge(a_id, b_id),
        &mut seed::rng(seed),
    )
}

/// [`recognition_choose`] on precomputed recognition flags and a caller-owned
/// random stream; used by the simulations.
pub fn recognition_decide<K, R>(
    a_recognized: bool,
    b_recognized: bool,
    knowledge: K,
    rng: &mut R,
) -> Decision
where
    K: FnOnce() -> Decision,
    R: Rng + ?Sized,
{
    match (a_recognized, b_recognized) {
        (true, false) => Decision::ChooseA,
        (false, true) => Decision::ChooseB,
        (true, true) => knowledge(),
        (false, false) => {
            if rng.random_bool(0.5) {
                Decision::ChooseA
            } else {
                Decision::ChooseB
            }
        }
    }
}

/// Expected proportion correct over a uniformly drawn pair from `population`
/// objects of which `recognized` are recognized, given recognition validity
/// `alpha` and knowledge validity `beta`.
pub fn recognition_accuracy(
    population: usize,
    recognized: usize,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    if population < 2 {
        return Err(Error::param("population", "must be at least 2"));
    }
    if recognized > population {
        return Err(Error::param(
            "recognized",
            format!("{recognized} exceeds the population size {population}"),
        ));
    }
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                name,
                value: v,
                range: "[0, 1]",
            });
        }
    }
    let big_n = population as f64;
    let n = recognized as f64;
    let u = big_n - n;
    let pairs = big_n * (big_n - 1.0);
    Ok((2.0 * n * u * alpha + u * (u - 1.0) * 0.5 + n * (n - 1.0) * beta) / pairs)
}
