//! Compensatory baselines: tallying and the weighted-linear model.

use std::cmp::Ordering;

use super::{require_cue, Cues, Decision, WeightVector};
use crate::indicators::IndicatorDefinition;
use crate::Result;

/// Counts the cues favouring each option; the larger tally wins. A cue on
/// which the two options tie favours neither.
pub fn tallying_choose(
    a: &impl Cues,
    b: &impl Cues,
    cues: &[IndicatorDefinition],
) -> Result<Decision> {
    let mut tally: i64 = 0;
    for cue in cues {
        let sa = require_cue(a, cue.name())?;
        let sb = require_cue(b, cue.name())?;
        match cue.direction().compare(sa, sb) {
            Ordering::Greater => tally += 1,
            Ordering::Less => tally -= 1,
            Ordering::Equal => {}
        }
    }
    Ok(Decision::from_ordering(tally.cmp(&0)))
}

pub fn weighted_sum(obj: &impl Cues, weights: &WeightVector) -> Result<f64> {
    weights
        .iter()
        .map(|(name, w)| Ok(w * require_cue(obj, name)?))
        .sum()
}

/// The larger weighted sum wins; exactly equal sums are undecided.
pub fn weighted_linear_choose(
    a: &impl Cues,
    b: &impl Cues,
    weights: &WeightVector,
) -> Result<Decision> {
    let sa = weighted_sum(a, weights)?;
    let sb = weighted_sum(b, weights)?;
    Ok(Decision::from_ordering(
        sa.partial_cmp(&sb).unwrap_or(Ordering::Equal),
    ))
}
