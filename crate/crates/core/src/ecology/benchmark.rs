//! Out-of-sample pair-comparison benchmark.
//!
//! Each repetition shuffles the objects with its own derived seed, fits cue
//! validities and least-squares weights on the training part only, and asks
//! every strategy to decide every unordered test pair. Pairs whose criterion
//! values are equal have no correct answer and are not scored. An undecided
//! outcome scores one half.

use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fit_linear_weights_reduced, EnvObject, Environment};
use crate::heuristics::{
    minimalist_choose, one_reason_choose, tallying_choose, validity_order, weighted_linear_choose,
    CueOrder, Decision, DiscriminationRule, WeightVector,
};
use crate::indicators::IndicatorDefinition;
use crate::seed::{self, derive_seed};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub repetitions: usize,
    pub seed: u64,
}

impl SplitConfig {
    pub fn new(train_fraction: f64, repetitions: usize, seed: u64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::OutOfRange {
                name: "train_fraction",
                value: train_fraction,
                range: "(0, 1)",
            });
        }
        if repetitions == 0 {
            return Err(Error::param("repetitions", "must be positive"));
        }
        Ok(SplitConfig {
            train_fraction,
            repetitions,
            seed,
        })
    }

    fn rep_seed(&self, rep: usize) -> u64 {
        derive_seed(self.seed, rep as u64)
    }
}

/// Train and test indices (each ascending) for one repetition.
pub fn split_indices(
    n: usize,
    split: &SplitConfig,
    rep: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let train_n = (split.train_fraction * n as f64).round() as usize;
    if train_n < 2 {
        return Err(Error::InvalidSplit(format!(
            "training part would hold {train_n} of {n} objects; at least 2 are needed"
        )));
    }
    if n - train_n.min(n) < 2 {
        return Err(Error::InvalidSplit(format!(
            "test part would hold {} of {n} objects; at least 2 are needed",
            n - train_n.min(n)
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seed::rng(split.rep_seed(rep)));
    let mut train = order[..train_n].to_vec();
    let mut test = order[train_n..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Everything learned from the training objects of one repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingFit {
    pub cues: Vec<IndicatorDefinition>,
    pub cue_order: CueOrder,
    pub validities: Vec<(String, f64)>,
    pub weights: WeightVector,
    /// Cues left at weight 0 because they were linearly dependent on the
    /// training sample.
    pub dropped_cues: Vec<String>,
}

impl TrainingFit {
    pub fn fit(train: &Environment) -> Result<Self> {
        let (cue_order, validities) = validity_order(train)?;
        let (weights, dropped_cues) = fit_linear_weights_reduced(train)?;
        Ok(TrainingFit {
            cues: train.cue_definitions(),
            cue_order,
            validities,
            weights,
            dropped_cues,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub decision: Decision,
    pub cues_inspected: usize,
}

/// A strategy the benchmark can evaluate.
pub trait PairStrategy: Sync {
    fn name(&self) -> String;

    /// Decides one test pair. `pair_seed` is a per-pair random stream for
    /// strategies that need one.
    fn decide(
        &self,
        fit: &TrainingFit,
        a: &EnvObject,
        b: &EnvObject,
        pair_seed: u64,
    ) -> Result<Outcome>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BuiltinStrategy {
    TakeTheBest(DiscriminationRule),
    Minimalist,
    Tallying,
    WeightedLinear,
}

impl BuiltinStrategy {
    pub const NAMES: [&'static str; 4] =
        ["take-the-best", "minimalist", "tallying", "weighted-linear"];
}

impl FromStr for BuiltinStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "take-the-best" => Ok(BuiltinStrategy::TakeTheBest(DiscriminationRule::default())),
            "minimalist" => Ok(BuiltinStrategy::Minimalist),
            "tallying" => Ok(BuiltinStrategy::Tallying),
            "weighted-linear" => Ok(BuiltinStrategy::WeightedLinear),
            _ => Err(Error::param(
                "strategy",
                format!("`{s}` is not one of {}", BuiltinStrategy::NAMES.join(", ")),
            )),
        }
    }
}

impl PairStrategy for BuiltinStrategy {
    fn name(&self) -> String {
        match self {
            BuiltinStrategy::TakeTheBest(_) => "take-the-best",
            BuiltinStrategy::Minimalist => "minimalist",
            BuiltinStrategy::Tallying => "tallying",
            BuiltinStrategy::WeightedLinear => "weighted-linear",
        }
        .to_owned()
    }

    fn decide(
        &self,
        fit: &TrainingFit,
        a: &EnvObject,
        b: &EnvObject,
        pair_seed: u64,
    ) -> Result<Outcome> {
        let (decision, cues_inspected) = match self {
            BuiltinStrategy::TakeTheBest(rule) => {
                let t = one_reason_choose(a, b, &fit.cue_order, *rule)?;
                (t.decision, t.cues_inspected())
            }
            BuiltinStrategy::Minimalist => {
                let t = minimalist_choose(a, b, &fit.cues, pair_seed)?;
                (t.decision, t.cues_inspected())
            }
            BuiltinStrategy::Tallying => (tallying_choose(a, b, &fit.cues)?, fit.cues.len()),
            BuiltinStrategy::WeightedLinear => (
                weighted_linear_choose(a, b, &fit.weights)?,
                fit.weights.len(),
            ),
        };
        Ok(Outcome {
            decision,
            cues_inspected,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub name: String,
    /// Mean over repetitions of (correct + 0.5 * undecided) / scored pairs.
    pub accuracy: f64,
    /// Mean cues inspected per decision.
    pub frugality: f64,
    pub decisions: u64,
    pub undecided_rate: f64,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl StrategyReport {
    pub fn time_per_thousand(&self) -> Duration {
        if self.decisions == 0 {
            Duration::ZERO
        } else {
            self.wall_time.mul_f64(1000.0 / self.decisions as f64)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionSummary {
    pub index: usize,
    pub seed: u64,
    pub train_ids: Vec<String>,
    pub scored_pairs: u64,
    pub cue_order: Vec<String>,
    pub validities: Vec<(String, f64)>,
    pub weights: Vec<(String, f64)>,
    pub dropped_cues: Vec<String>,
    /// Per strategy, in report order; absent when no pair was scorable.
    pub accuracy: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub objects: usize,
    pub cues: usize,
    pub split: SplitConfig,
    pub scored_pairs: u64,
    pub strategies: Vec<StrategyReport>,
    pub repetitions: Vec<RepetitionSummary>,
}

impl BenchmarkReport {
    pub fn strategy(&self, name: &str) -> Option<&StrategyReport> {
        self.strategies.iter().find(|s| s.name == name)
    }
}

#[derive(Default)]
struct Tally {
    credit: f64,
    undecided: u64,
    decisions: u64,
    cues: u64,
    elapsed: Duration,
}

fn run_repetition(
    env: &Environment,
    strategies: &[&dyn PairStrategy],
    split: &SplitConfig,
    rep: usize,
) -> Result<(RepetitionSummary, Vec<Tally>)> {
    let (train, test) = split_indices(env.len(), split, rep)?;
    let rep_seed = split.rep_seed(rep);
    let fit = TrainingFit::fit(&env.subset(&train)?)?;
    let objects = env.objects();

    let mut pairs = Vec::new();
    for (x, &i) in test.iter().enumerate() {
        for &j in &test[x + 1..] {
            let k = pairs.len() as u64;
            if objects[i].criterion != objects[j].criterion {
                pairs.push((i, j, derive_seed(rep_seed, k)));
            }
        }
    }

    let mut tallies = Vec::with_capacity(strategies.len());
    for strategy in strategies {
        let started = Instant::now();
        let mut t = Tally::default();
        for &(i, j, pair_seed) in &pairs {
            let (a, b) = (&objects[i], &objects[j]);
            let out = strategy.decide(&fit, a, b, pair_seed)?;
            let truth = if a.criterion > b.criterion {
                Decision::ChooseA
            } else {
                Decision::ChooseB
            };
            t.decisions += 1;
            t.cues += out.cues_inspected as u64;
            if out.decision == Decision::Undecided {
                t.undecided += 1;
                t.credit += 0.5;
            } else if out.decision == truth {
                t.credit += 1.0;
            }
        }
        t.elapsed = started.elapsed();
        tallies.push(t);
    }

    let scored = pairs.len() as u64;
    let summary = RepetitionSummary {
        index: rep,
        seed: rep_seed,
        train_ids: train.iter().map(|&i| objects[i].id.clone()).collect(),
        scored_pairs: scored,
        cue_order: fit.cue_order.names(),
        validities: fit.validities,
        weights: fit.weights.as_slice().to_vec(),
        dropped_cues: fit.dropped_cues,
        accuracy: tallies
            .iter()
            .map(|t| (scored > 0).then(|| t.credit / scored as f64))
            .collect(),
    };
    Ok((summary, tallies))
}

/// Runs every strategy over `split.repetitions` seeded train/test splits.
/// The report is identical for identical inputs, wall times aside.
pub fn run_benchmark(
    env: &Environment,
    strategies: &[&dyn PairStrategy],
    split: &SplitConfig,
) -> Result<BenchmarkReport> {
    if strategies.is_empty() {
        return Err(Error::NoStrategies);
    }
    split_indices(env.len(), split, 0)?;

    let reps = (0..split.repetitions)
        .into_par_iter()
        .map(|rep| run_repetition(env, strategies, split, rep))
        .collect::<Result<Vec<_>>>()?;

    let scored_pairs: u64 = reps.iter().map(|(s, _)| s.scored_pairs).sum();
    if scored_pairs == 0 {
        return Err(Error::NoScorablePairs);
    }

    let strategies = strategies
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let per_rep: Vec<f64> = reps.iter().filter_map(|(r, _)| r.accuracy[k]).collect();
            let accuracy = per_rep.iter().sum::<f64>() / per_rep.len() as f64;
            let (decisions, undecided, cues, elapsed) = reps.iter().fold(
                (0u64, 0u64, 0u64, Duration::ZERO),
                |(d, u, c, e), (_, t)| {
                    let t = &t[k];
                    (d + t.decisions, u + t.undecided, c + t.cues, e + t.elapsed)
                },
            );
            StrategyReport {
                name: s.name(),
                accuracy,
                frugality: cues as f64 / decisions as f64,
                decisions,
                undecided_rate: undecided as f64 / decisions as f64,
                wall_time: elapsed,
            }
        })
        .collect();

    Ok(BenchmarkReport {
        objects: env.len(),
        cues: env.cue_directions().len(),
        split: *split,
        scored_pairs,
        strategies,
        repetitions: reps.into_iter().map(|(s, _)| s).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecology::{generate_binary_environment, generate_gaussian_environment};

    struct Abstain;

    impl PairStrategy for Abstain {
        fn name(&self) -> String {
            "abstain".into()
        }

        fn decide(&self, _: &TrainingFit, _: &EnvObject, _: &EnvObject, _: u64) -> Result<Outcome> {
            Ok(Outcome {
                decision: Decision::Undecided,
                cues_inspected: 0,
            })
        }
    }

    fn noncompensatory(n: usize, seed: u64) -> Environment {
        let w: WeightVector = "c1=4,c2=2,c3=1".parse().unwrap();
        generate_binary_environment(&w, n, seed).unwrap()
    }

    #[test]
    fn abstaining_scores_one_half() {
        let env = noncompensatory(20, 1);
        let split = SplitConfig::new(0.5, 5, 3).unwrap();
        let report = run_benchmark(&env, &[&Abstain], &split).unwrap();
        assert_eq!(report.strategies[0].accuracy, 0.5);
        assert_eq!(report.strategies[0].undecided_rate, 1.0);
    }

    #[test]
    fn split_fraction_must_be_proper() {
        assert!(SplitConfig::new(1.0, 1, 0).is_err());
        assert!(SplitConfig::new(0.0, 1, 0).is_err());
        assert!(SplitConfig::new(0.5, 0, 0).is_err());
        let env = noncompensatory(4, 1);
        let split = SplitConfig::new(0.9, 1, 0).unwrap();
        assert!(matches!(
            run_benchmark(&env, &[&BuiltinStrategy::Tallying], &split),
            Err(Error::InvalidSplit(_))
        ));
        let split = SplitConfig::new(0.5, 1, 0).unwrap();
        assert!(matches!(
            run_benchmark(&env, &[], &split),
            Err(Error::NoStrategies)
        ));
    }

    #[test]
    fn splits_are_reproducible_and_disjoint() {
        let split = SplitConfig::new(0.5, 3, 42).unwrap();
        let (train, test) = split_indices(20, &split, 1).unwrap();
        assert_eq!(
            (train.clone(), test.clone()),
            split_indices(20, &split, 1).unwrap()
        );
        assert_eq!(train.len(), 10);
        assert!(train.iter().all(|i| !test.contains(i)));
        assert_ne!(train, split_indices(20, &split, 2).unwrap().0);
    }

    #[test]
    fn take_the_best_equals_linear_when_noncompensatory() {
        let env = noncompensatory(400, 8);
        let split = SplitConfig::new(0.5, 10, 5).unwrap();
        let ttb = BuiltinStrategy::TakeTheBest(DiscriminationRule::default());
        let report =
            run_benchmark(&env, &[&ttb, &BuiltinStrategy::WeightedLinear], &split).unwrap();
        let (a, b) = (&report.strategies[0], &report.strategies[1]);
        // Large training samples rank the cues in weight order and fit exact weights.
        for r in &report.repetitions {
            assert!(r.dropped_cues.is_empty());
            assert_eq!(r.cue_order, ["c1", "c2", "c3"]);
        }
        assert_eq!(a.accuracy, b.accuracy);
        assert!(a.frugality < 3.0);
        assert_eq!(b.frugality, 3.0);
    }

    #[test]
    fn report_is_deterministic() {
        let targets = vec![("x".to_owned(), 0.7), ("y".to_owned(), 0.3)];
        let env = generate_gaussian_environment(&targets, 30, 2).unwrap();
        let split = SplitConfig::new(0.5, 8, 11).unwrap();
        let ttb = BuiltinStrategy::TakeTheBest(DiscriminationRule::default());
        let all: Vec<&dyn PairStrategy> = vec![
            &ttb,
            &BuiltinStrategy::Minimalist,
            &BuiltinStrategy::Tallying,
            &BuiltinStrategy::WeightedLinear,
        ];
        let strip = |mut r: BenchmarkReport| {
            r.strategies
                .iter_mut()
                .for_each(|s| s.wall_time = Duration::ZERO);
            r
        };
        let first = strip(run_benchmark(&env, &all, &split).unwrap());
        let second = strip(run_benchmark(&env, &all, &split).unwrap());
        assert_eq!(first, second);
        for s in &first.strategies {
            assert!((0.0..=1.0).contains(&s.accuracy));
            assert!(s.frugality <= 2.0);
        }
    }

    #[test]
    fn test_criteria_do_not_leak_into_training() {
        let targets = vec![
            ("x".to_owned(), 0.6),
            ("y".to_owned(), 0.4),
            ("z".to_owned(), 0.1),
        ];
        let env = generate_gaussian_environment(&targets, 24, 4).unwrap();
        let split = SplitConfig::new(0.5, 6, 9).unwrap();
        let base = run_benchmark(&env, &[&BuiltinStrategy::Tallying], &split).unwrap();
        for (rep, summary) in base.repetitions.iter().enumerate() {
            let (_, test) = split_indices(env.len(), &split, rep).unwrap();
            let mut objects = env.objects().to_vec();
            let mut criteria: Vec<f64> = test.iter().map(|&i| objects[i].criterion).collect();
            criteria.reverse();
            criteria.rotate_left(1);
            for (&i, c) in test.iter().zip(criteria) {
                objects[i].criterion = c;
            }
            let permuted = Environment::new(objects, env.cue_directions().clone()).unwrap();
            let again = run_benchmark(&permuted, &[&BuiltinStrategy::Tallying], &split).unwrap();
            let other = &again.repetitions[rep];
            assert_eq!(summary.cue_order, other.cue_order);
            assert_eq!(summary.validities, other.validities);
            assert_eq!(summary.weights, other.weights);
        }
    }

    #[test]
    fn builtin_names_parse() {
        for name in BuiltinStrategy::NAMES {
            assert_eq!(name.parse::<BuiltinStrategy>().unwrap().name(), name);
        }
        assert!("greedy".parse::<BuiltinStrategy>().is_err());
    }
}
