//! Decision strategies built from search, stopping and decision rules.
//!
//! Pairwise strategies return a [`Decision`] and, where cues are inspected one
//! at a time, a [`DecisionTrace`] that records every inspected cue so a
//! decision can be audited and replayed.

mod lexicographic;
mod linear;
mod recognition;
mod screening;
mod trace;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ecology::EnvObject;
use crate::indicators::{CandidateProfile, Direction, IndicatorDefinition};
use crate::{Error, Result};

pub use lexicographic::{
    cue_validity, minimalist_choose, minimalist_order, one_reason_choose, take_the_best_choose,
    validity_order,
};
pub use linear::{tallying_choose, weighted_linear_choose, weighted_sum};
pub use recognition::{recognition_accuracy, recognition_choose, recognition_decide};
pub use screening::{one_cue_select, ConsiderationSet, RankedCandidate};
pub use trace::TraceParseError;

/// Anything that carries named cue values.
pub trait Cues {
    fn label(&self) -> &str;
    fn cue(&self, name: &str) -> Option<f64>;
}

impl Cues for CandidateProfile {
    fn label(&self) -> &str {
        &self.id
    }

    fn cue(&self, name: &str) -> Option<f64> {
        self.indicator(name)
    }
}

impl Cues for EnvObject {
    fn label(&self) -> &str {
        &self.id
    }

    fn cue(&self, name: &str) -> Option<f64> {
        self.cues.get(name).copied()
    }
}

impl<T: Cues + ?Sized> Cues for &T {
    fn label(&self) -> &str {
        (**self).label()
    }

    fn cue(&self, name: &str) -> Option<f64> {
        (**self).cue(name)
    }
}

/// Looks up a cue that must be present and finite.
pub(crate) fn require_cue(obj: &impl Cues, name: &str) -> Result<f64> {
    match obj.cue(name) {
        None => Err(Error::MissingCue {
            object: obj.label().to_owned(),
            cue: name.to_owned(),
        }),
        Some(v) if !v.is_finite() => Err(Error::NonFiniteCue {
            object: obj.label().to_owned(),
            cue: name.to_owned(),
        }),
        Some(v) => Ok(v),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderProvenance {
    FunderGoals,
    ValidityRanked,
    RandomSeeded,
}

/// The search rule: cues in the order they are inspected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CueOrder {
    cues: Vec<IndicatorDefinition>,
    provenance: OrderProvenance,
}

impl CueOrder {
    pub fn new(cues: Vec<IndicatorDefinition>, provenance: OrderProvenance) -> Result<Self> {
        if cues.is_empty() {
            return Err(Error::EmptyCueOrder);
        }
        let mut seen = BTreeSet::new();
        for c in &cues {
            if !seen.insert(c.name()) {
                return Err(Error::DuplicateCue(c.name().to_owned()));
            }
        }
        Ok(CueOrder { cues, provenance })
    }

    /// An order supplied by the funder, e.g. from its stated goals.
    pub fn funder_goals(cues: Vec<IndicatorDefinition>) -> Result<Self> {
        Self::new(cues, OrderProvenance::FunderGoals)
    }

    pub fn cues(&self) -> &[IndicatorDefinition] {
        &self.cues
    }

    pub fn provenance(&self) -> OrderProvenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.cues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cues.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.cues.iter().map(|c| c.name().to_owned()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscriminationMode {
    #[default]
    Absolute,
    Relative,
}

impl DiscriminationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiscriminationMode::Absolute => "absolute",
            DiscriminationMode::Relative => "relative",
        }
    }
}

impl FromStr for DiscriminationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "absolute" => Ok(DiscriminationMode::Absolute),
            "relative" => Ok(DiscriminationMode::Relative),
            _ => Err(Error::param(
                "mode",
                format!("`{s}` is not one of absolute, relative"),
            )),
        }
    }
}

/// When two scores "differ substantially". The default (`delta = 0`,
/// absolute) is strict inequality.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DiscriminationRule {
    delta: f64,
    mode: DiscriminationMode,
}

impl DiscriminationRule {
    pub fn new(delta: f64, mode: DiscriminationMode) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::OutOfRange {
                name: "delta",
                value: delta,
                range: "[0, inf)",
            });
        }
        Ok(DiscriminationRule { delta, mode })
    }

    pub fn absolute(delta: f64) -> Result<Self> {
        Self::new(delta, DiscriminationMode::Absolute)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn mode(&self) -> DiscriminationMode {
        self.mode
    }

    pub fn discriminates(&self, a: f64, b: f64) -> bool {
        let diff = (a - b).abs();
        match self.mode {
            DiscriminationMode::Relative => {
                let scale = a.abs().max(b.abs());
                if scale > 0.0 {
                    diff / scale > self.delta
                } else {
                    diff > self.delta
                }
            }
            DiscriminationMode::Absolute => diff > self.delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    #[serde(rename = "chooseA")]
    ChooseA,
    #[serde(rename = "chooseB")]
    ChooseB,
    #[serde(rename = "undecided")]
    Undecided,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::ChooseA => "chooseA",
            Decision::ChooseB => "chooseB",
            Decision::Undecided => "undecided",
        }
    }

    /// The same decision with the two options swapped.
    pub fn flipped(self) -> Self {
        match self {
            Decision::ChooseA => Decision::ChooseB,
            Decision::ChooseB => Decision::ChooseA,
            Decision::Undecided => Decision::Undecided,
        }
    }

    pub(crate) fn from_ordering(ord: std::cmp::Ordering) -> Self {
        match ord {
            std::cmp::Ordering::Greater => Decision::ChooseA,
            std::cmp::Ordering::Less => Decision::ChooseB,
            std::cmp::Ordering::Equal => Decision::Undecided,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Decision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "chooseA" => Ok(Decision::ChooseA),
            "chooseB" => Ok(Decision::ChooseB),
            "undecided" => Ok(Decision::Undecided),
            _ => Err(format!("unknown decision `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoppingReason {
    Discriminated,
    CuesExhausted,
}

impl StoppingReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StoppingReason::Discriminated => "discriminated",
            StoppingReason::CuesExhausted => "cues_exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub cue: String,
    pub direction: Direction,
    pub score_a: f64,
    pub score_b: f64,
    pub discriminated: bool,
}

/// Record of one lexicographic decision. Only the last step may have
/// discriminated, and the stopping reason says whether it did.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTrace {
    pub rule: DiscriminationRule,
    pub steps: Vec<TraceStep>,
    pub stopping_reason: StoppingReason,
    pub decision: Decision,
}

impl DecisionTrace {
    pub fn cues_inspected(&self) -> usize {
        self.steps.len()
    }

    /// Re-derives the decision from the recorded scores and rule, checking
    /// that every recorded discrimination flag and the stopping reason agree.
    pub fn replay(&self) -> Result<Decision, TraceParseError> {
        let mut decision = Decision::Undecided;
        let mut stopped = false;
        for (i, step) in self.steps.iter().enumerate() {
            if stopped {
                return Err(TraceParseError::new(format!(
                    "step {} follows a discriminating step",
                    i + 1
                )));
            }
            let discriminated = self.rule.discriminates(step.score_a, step.score_b);
            if discriminated != step.discriminated {
                return Err(TraceParseError::new(format!(
                    "step {} records discriminated={} but the rule gives {}",
                    i + 1,
                    step.discriminated,
                    discriminated
                )));
            }
            if discriminated {
                decision =
                    Decision::from_ordering(step.direction.compare(step.score_a, step.score_b));
                stopped = true;
            }
        }
        let reason = if stopped {
            StoppingReason::Discriminated
        } else {
            StoppingReason::CuesExhausted
        };
        if reason != self.stopping_reason {
            return Err(TraceParseError::new(format!(
                "stopping reason {} does not match the steps ({})",
                self.stopping_reason.as_str(),
                reason.as_str()
            )));
        }
        if decision != self.decision {
            return Err(TraceParseError::new(format!(
                "recorded decision {} but the steps give {}",
                self.decision, decision
            )));
        }
        Ok(decision)
    }
}

/// Linear-model weights, in a fixed cue order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightVector {
    weights: Vec<(String, f64)>,
}

impl WeightVector {
    pub fn new(weights: Vec<(String, f64)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (name, w) in &weights {
            if name.is_empty() {
                return Err(Error::EmptyName);
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateCue(name.clone()));
            }
            if !w.is_finite() {
                return Err(Error::InvalidWeight {
                    cue: name.clone(),
                    value: *w,
                    reason: "weights must be finite",
                });
            }
        }
        Ok(WeightVector { weights })
    }

    /// Weight 1 on every cue, i.e. tallying.
    pub fn unit<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::new(names.iter().map(|n| (n.as_ref().to_owned(), 1.0)).collect())
    }

    /// Rejects negative weights, as required by the ranking model.
    pub fn ensure_non_negative(&self) -> Result<()> {
        match self.weights.iter().find(|(_, w)| *w < 0.0) {
            Some((cue, w)) => Err(Error::InvalidWeight {
                cue: cue.clone(),
                value: *w,
                reason: "weights must be non-negative",
            }),
            None => Ok(()),
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.weights
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, w)| *w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(n, w)| (n.as_str(), *w))
    }

    pub fn names(&self) -> Vec<String> {
        self.weights.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[(String, f64)] {
        &self.weights
    }
}

/// Parses `name=weight,name=weight`.
impl FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut weights = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Error::param("weights", format!("`{part}` is not name=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::param("weights", format!("`{value}` is not a number")))?;
            weights.push((name.trim().to_owned(), value));
        }
        WeightVector::new(weights)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, w)) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}={w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cue_order_invariants() {
        let hcp = IndicatorDefinition::higher("hcp").unwrap();
        assert!(matches!(
            CueOrder::funder_goals(vec![]),
            Err(Error::EmptyCueOrder)
        ));
        assert!(matches!(
            CueOrder::funder_goals(vec![hcp.clone(), hcp.clone()]),
            Err(Error::DuplicateCue(c)) if c == "hcp"
        ));
        let order = CueOrder::funder_goals(vec![hcp]).unwrap();
        assert_eq!(order.provenance(), OrderProvenance::FunderGoals);
    }

    #[test]
    fn discrimination_rule() {
        let strict = DiscriminationRule::default();
        assert!(strict.discriminates(1.0, 2.0));
        assert!(!strict.discriminates(2.0, 2.0));

        let two = DiscriminationRule::absolute(2.0).unwrap();
        assert!(!two.discriminates(6.0, 5.0));
        assert!(!two.discriminates(7.0, 5.0));
        assert!(two.discriminates(9.0, 3.0));

        let rel = DiscriminationRule::new(0.5, DiscriminationMode::Relative).unwrap();
        assert!(rel.discriminates(10.0, 4.0));
        assert!(!rel.discriminates(10.0, 6.0));
        // both zero: falls back to the absolute comparison
        assert!(!rel.discriminates(0.0, 0.0));
        let rel0 = DiscriminationRule::new(0.0, DiscriminationMode::Relative).unwrap();
        assert!(rel0.discriminates(0.0, 1.0));

        assert!(DiscriminationRule::absolute(-1.0).is_err());
        assert!(DiscriminationRule::absolute(f64::NAN).is_err());
    }

    #[test]
    fn weight_vector_parsing() {
        let w: WeightVector = "hcp=4, collab=2,single=-1".parse().unwrap();
        assert_eq!(w.get("collab"), Some(2.0));
        assert_eq!(w.names(), ["hcp", "collab", "single"]);
        assert!(w.ensure_non_negative().is_err());
        assert_eq!(w.to_string(), "hcp=4,collab=2,single=-1");
        assert!("hcp".parse::<WeightVector>().is_err());
        assert!("hcp=x".parse::<WeightVector>().is_err());
        assert!("hcp=1,hcp=2".parse::<WeightVector>().is_err());
        assert!("hcp=inf".parse::<WeightVector>().is_err());
    }

    #[test]
    fn replay_rejects_inconsistent_traces() {
        let step = |a, b, d| TraceStep {
            cue: "c".into(),
            direction: Direction::HigherIsBetter,
            score_a: a,
            score_b: b,
            discriminated: d,
        };
        let mut trace = DecisionTrace {
            rule: DiscriminationRule::default(),
            steps: vec![step(1.0, 1.0, false), step(3.0, 2.0, true)],
            stopping_reason: StoppingReason::Discriminated,
            decision: Decision::ChooseA,
        };
        assert_eq!(trace.replay().unwrap(), Decision::ChooseA);
        trace.decision = Decision::ChooseB;
        assert!(trace.replay().is_err());
        trace.decision = Decision::ChooseA;
        trace.steps[0].discriminated = true;
        assert!(trace.replay().is_err());
    }
}
