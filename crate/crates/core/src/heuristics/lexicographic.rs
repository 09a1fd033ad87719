//! One-reason choice and its take-the-best and minimalist search rules.

use rand::seq::SliceRandom;

use super::{
    require_cue, CueOrder, Cues, Decision, DecisionTrace, DiscriminationRule, OrderProvenance,
    StoppingReason, TraceStep,
};
use crate::ecology::Environment;
use crate::indicators::IndicatorDefinition;
use crate::seed;
use crate::{Error, Result};

/// Inspects cues in order and stops at the first one on which the two
/// options differ by more than the rule's `delta`; that cue alone decides.
pub fn one_reason_choose(
    a: &impl Cues,
    b: &impl Cues,
    order: &CueOrder,
    rule: DiscriminationRule,
) -> Result<DecisionTrace> {
    scan(a, b, order.cues(), rule)
}

fn scan(
    a: &impl Cues,
    b: &impl Cues,
    cues: &[IndicatorDefinition],
    rule: DiscriminationRule,
) -> Result<DecisionTrace> {
    // Validate everything up front so errors do not depend on where search stops.
    let scores = cues
        .iter()
        .map(|c| Ok((require_cue(a, c.name())?, require_cue(b, c.name())?)))
        .collect::<Result<Vec<_>>>()?;

    let mut steps = Vec::new();
    for (cue, (sa, sb)) in cues.iter().zip(scores) {
        let discriminated = rule.discriminates(sa, sb);
        steps.push(TraceStep {
            cue: cue.name().to_owned(),
            direction: cue.direction(),
            score_a: sa,
            score_b: sb,
            discriminated,
        });
        if discriminated {
            return Ok(DecisionTrace {
                rule,
                steps,
                stopping_reason: StoppingReason::Discriminated,
                decision: Decision::from_ordering(cue.direction().compare(sa, sb)),
            });
        }
    }
    Ok(DecisionTrace {
        rule,
        steps,
        stopping_reason: StoppingReason::CuesExhausted,
        decision: Decision::Undecided,
    })
}

/// Share of discriminating object pairs in which the object with the better
/// cue value also has the higher criterion. Pairs with equal criterion count
/// as discriminating but not correct. 0.5 when the cue never discriminates.
pub fn cue_validity(env: &Environment, cue: &str) -> Result<f64> {
    let direction = env.direction(cue).ok_or_else(|| Error::MissingCue {
        object: "environment".to_owned(),
        cue: cue.to_owned(),
    })?;
    let objects = env.objects();
    let mut discriminating = 0u64;
    let mut correct = 0u64;
    for (i, a) in objects.iter().enumerate() {
        let ca = a.cues[cue];
        for b in &objects[i + 1..] {
            let cb = b.cues[cue];
            let ord = direction.compare(ca, cb);
            if ord.is_eq() {
                continue;
            }
            discriminating += 1;
            if ord == a.criterion.total_cmp(&b.criterion) {
                correct += 1;
            }
        }
    }
    Ok(if discriminating == 0 {
        0.5
    } else {
        correct as f64 / discriminating as f64
    })
}

/// All environment cues by validity, best first; ties by name.
pub fn validity_order(env: &Environment) -> Result<(CueOrder, Vec<(String, f64)>)> {
    let mut scored = env
        .cue_definitions()
        .into_iter()
        .map(|c| Ok((cue_validity(env, c.name())?, c)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|(va, ca), (vb, cb)| vb.total_cmp(va).then_with(|| ca.name().cmp(cb.name())));
    let validities = scored
        .iter()
        .map(|(v, c)| (c.name().to_owned(), *v))
        .collect();
    let order = CueOrder::new(
        scored.into_iter().map(|(_, c)| c).collect(),
        OrderProvenance::ValidityRanked,
    )?;
    Ok((order, validities))
}

/// One-reason choice with cues ordered by validity in `env`.
pub fn take_the_best_choose(
    a: &impl Cues,
    b: &impl Cues,
    env: &Environment,
    rule: DiscriminationRule,
) -> Result<DecisionTrace> {
    let (order, _) = validity_order(env)?;
    one_reason_choose(a, b, &order, rule)
}

/// A seeded uniform permutation of `cues`.
pub fn minimalist_order(cues: &[IndicatorDefinition], seed: u64) -> Result<CueOrder> {
    let mut shuffled = cues.to_vec();
    shuffled.shuffle(&mut seed::rng(seed));
    CueOrder::new(shuffled, OrderProvenance::RandomSeeded)
}

/// One-reason choice with cues drawn at random, without repeats, and strict
/// discrimination.
pub fn minimalist_choose(
    a: &impl Cues,
    b: &impl Cues,
    cues: &[IndicatorDefinition],
    seed: u64,
) -> Result<DecisionTrace> {
    let order = minimalist_order(cues, seed)?;
    one_reason_choose(a, b, &order, DiscriminationRule::default())
}
