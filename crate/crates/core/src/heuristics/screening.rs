use serde::{Deserialize, Serialize};

use super::{require_cue, Cues};
use crate::indicators::{quota, IndicatorDefinition};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate {
    pub id: String,
    pub value: f64,
}

/// Candidates passed on to detailed evaluation, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsiderationSet {
    pub cue: IndicatorDefinition,
    pub selected: Vec<RankedCandidate>,
    pub rejected: Vec<RankedCandidate>,
    /// Indicator value of the last selected candidate.
    pub cutoff_value: f64,
    /// Requested fraction `x`.
    pub quota: f64,
    /// `ceil(x * m)` before tie expansion.
    pub quota_count: usize,
}

impl ConsiderationSet {
    pub fn selected_ids(&self) -> Vec<&str> {
        self.selected.iter().map(|c| c.id.as_str()).collect()
    }
}

/// One-cue screening: rank on a single indicator and keep the top `x`
/// fraction. Every candidate tied with the last one inside the quota is kept
/// as well, so the set can be larger than `ceil(x * m)`.
pub fn one_cue_select<T: Cues>(
    profiles: &[T],
    cue: &IndicatorDefinition,
    x: f64,
) -> Result<ConsiderationSet> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::OutOfRange {
            name: "quota",
            value: x,
            range: "(0, 1]",
        });
    }
    if profiles.is_empty() {
        return Err(Error::NoProfiles);
    }
    let mut ranked = profiles
        .iter()
        .map(|p| {
            Ok(RankedCandidate {
                id: p.label().to_owned(),
                value: require_cue(p, cue.name())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let direction = cue.direction();
    ranked.sort_by(|a, b| {
        direction
            .compare(b.value, a.value)
            .then_with(|| a.id.cmp(&b.id))
    });

    let q = quota(x, ranked.len());
    let cutoff_value = ranked[q - 1].value;
    let keep = q + ranked[q..]
        .iter()
        .take_while(|c| c.value == cutoff_value)
        .count();
    let rejected = ranked.split_off(keep);
    Ok(ConsiderationSet {
        cue: cue.clone(),
        selected: ranked,
        rejected,
        cutoff_value,
        quota: x,
        quota_count: q,
    })
}
