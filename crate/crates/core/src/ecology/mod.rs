//! Task environments and the ecological-rationality benchmark.

mod benchmark;
mod least_squares;
mod recognition_curve;

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::heuristics::WeightVector;
use crate::indicators::{Direction, IndicatorDefinition};
use crate::seed;
use crate::{Error, Result};

pub use benchmark::{
    run_benchmark, split_indices, BenchmarkReport, BuiltinStrategy, Outcome, PairStrategy,
    RepetitionSummary, SplitConfig, StrategyReport, TrainingFit,
};
pub use least_squares::{fit_linear_weights, fit_linear_weights_reduced};
pub use recognition_curve::{less_is_more_curve, CurvePoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvObject {
    pub id: String,
    pub criterion: f64,
    pub cues: BTreeMap<String, f64>,
}

/// Objects with a criterion and a common set of cues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    objects: Vec<EnvObject>,
    cue_directions: BTreeMap<String, Direction>,
}

impl Environment {
    pub fn new(
        objects: Vec<EnvObject>,
        cue_directions: BTreeMap<String, Direction>,
    ) -> Result<Self> {
        if objects.len() < 2 {
            return Err(Error::TooFewObjects {
                needed: 2,
                got: objects.len(),
            });
        }
        for o in &objects {
            if !o.criterion.is_finite() {
                return Err(Error::InvalidEnvironment(format!(
                    "object `{}` has a non-finite criterion",
                    o.id
                )));
            }
            if o.cues.len() != cue_directions.len()
                || !o.cues.keys().all(|k| cue_directions.contains_key(k))
            {
                return Err(Error::InvalidEnvironment(format!(
                    "object `{}` does not carry exactly the environment's cues",
                    o.id
                )));
            }
            if let Some((cue, _)) = o.cues.iter().find(|(_, v)| !v.is_finite()) {
                return Err(Error::NonFiniteCue {
                    object: o.id.clone(),
                    cue: cue.clone(),
                });
            }
        }
        Ok(Environment {
            objects,
            cue_directions,
        })
    }

    pub fn objects(&self) -> &[EnvObject] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn direction(&self, cue: &str) -> Option<Direction> {
        self.cue_directions.get(cue).copied()
    }

    pub fn cue_directions(&self) -> &BTreeMap<String, Direction> {
        &self.cue_directions
    }

    /// Cue names in ascending order.
    pub fn cue_names(&self) -> Vec<String> {
        self.cue_directions.keys().cloned().collect()
    }

    pub fn cue_definitions(&self) -> Vec<IndicatorDefinition> {
        self.cue_directions
            .iter()
            .map(|(n, d)| {
                IndicatorDefinition::new(n.clone(), *d).expect("names validated on construction")
            })
            .collect()
    }

    /// The objects at `indices`, as an environment of their own.
    pub fn subset(&self, indices: &[usize]) -> Result<Environment> {
        Environment::new(
            indices.iter().map(|&i| self.objects[i].clone()).collect(),
            self.cue_directions.clone(),
        )
    }
}

fn object_id(i: usize, total: usize) -> String {
    let width = total.saturating_sub(1).to_string().len();
    format!("o{i:0width$}")
}

/// Random binary cue profiles with criterion equal to the weighted cue sum.
pub fn generate_binary_environment(
    weights: &WeightVector,
    n_objects: usize,
    seed: u64,
) -> Result<Environment> {
    if n_objects < 2 {
        return Err(Error::TooFewObjects {
            needed: 2,
            got: n_objects,
        });
    }
    weights.ensure_non_negative()?;
    let mut rng = seed::rng(seed);
    let objects = (0..n_objects)
        .map(|i| {
            let cues: BTreeMap<String, f64> = weights
                .iter()
                .map(|(name, _)| {
                    (
                        name.to_owned(),
                        if rng.random_bool(0.5) { 1.0 } else { 0.0 },
                    )
                })
                .collect();
            let criterion = weights.iter().map(|(name, w)| w * cues[name]).sum();
            EnvObject {
                id: object_id(i, n_objects),
                criterion,
                cues,
            }
        })
        .collect();
    let dirs = weights
        .iter()
        .map(|(n, _)| (n.to_owned(), Direction::HigherIsBetter))
        .collect();
    Environment::new(objects, dirs)
}

/// Standard-normal criterion; each cue is `r * criterion + sqrt(1 - r^2) * noise`
/// for its target correlation `r`.
pub fn generate_gaussian_environment(
    correlations: &[(String, f64)],
    n_objects: usize,
    seed: u64,
) -> Result<Environment> {
    if n_objects < 2 {
        return Err(Error::TooFewObjects {
            needed: 2,
            got: n_objects,
        });
    }
    let mut dirs = BTreeMap::new();
    for (name, r) in correlations {
        if !(-1.0..=1.0).contains(r) {
            return Err(Error::OutOfRange {
                name: "correlation",
                value: *r,
                range: "[-1, 1]",
            });
        }
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        if dirs
            .insert(name.clone(), Direction::HigherIsBetter)
            .is_some()
        {
            return Err(Error::DuplicateCue(name.clone()));
        }
    }
    let mut rng = seed::rng(seed);
    let objects = (0..n_objects)
        .map(|i| {
            let criterion: f64 = rng.sample(StandardNormal);
            let cues = correlations
                .iter()
                .map(|(name, r)| {
                    let noise: f64 = rng.sample(StandardNormal);
                    let value = if r.abs() == 1.0 {
                        r * criterion
                    } else {
                        r * criterion + (1.0 - r * r).sqrt() * noise
                    };
                    (name.clone(), value)
                })
                .collect();
            EnvObject {
                id: object_id(i, n_objects),
                criterion,
                cues,
            }
        })
        .collect();
    Environment::new(objects, dirs)
}
