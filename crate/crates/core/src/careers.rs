//! Synthetic careers with planted hot streaks, and hot-streak detection.
//!
//! Detection works on `y = log10(impact + 1)`. Every interval of at least
//! [`DetectionConfig::min_len`] works that leaves at least one work outside is
//! scored with a two-level step model (one mean inside, one outside), keeping
//! only intervals whose inside mean is the higher one. The best interval (least
//! residual sum of squares; ties to the earlier start, then the shorter
//! interval) is accepted when its BIC-style score
//!
//! ```text
//! n * ln(RSS / n) + penalty * extra_parameters
//! ```
//!
//! beats both the single-level model (two extra parameters for the step) and
//! a straight-line trend (one extra parameter). The trend competitor keeps a
//! smooth rise or decline from being reported as a streak.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::seed;
use crate::{Error, Result};

/// Shortest sequence [`detect_hot_streak`] accepts.
pub const MIN_SEQUENCE_LEN: usize = 5;

/// Residual sums of squares are floored at this much per observation, so a
/// noiseless fit has a finite score.
const RSS_FLOOR_PER_OBS: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CareerSequence {
    owner: String,
    impacts: Vec<f64>,
}

impl CareerSequence {
    pub fn new(owner: impl Into<String>, impacts: Vec<f64>) -> Result<Self> {
        if impacts.is_empty() {
            return Err(Error::SequenceTooShort { len: 0, min: 1 });
        }
        if let Some((i, v)) = impacts
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::param(
                "impacts",
                format!("position {i} holds {v}; impacts must be finite and non-negative"),
            ));
        }
        Ok(CareerSequence {
            owner: owner.into(),
            impacts,
        })
    }

    pub fn owner(&self) -> &str {
        &self.owner
    }

    pub fn impacts(&self) -> &[f64] {
        &self.impacts
    }

    pub fn len(&self) -> usize {
        self.impacts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.impacts.is_empty()
    }

    /// Every impact multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        CareerSequence::new(
            self.owner.clone(),
            self.impacts.iter().map(|v| v * k).collect(),
        )
    }
}

/// Inclusive index range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        (self.start..=self.end).contains(&i)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CareerParams {
    pub length: usize,
    pub baseline_mean: f64,
    pub streak_multiplier: f64,
    pub streak_min_len: usize,
    pub streak_max_len: usize,
    /// Standard deviation of the natural-log impact noise.
    pub noise_sigma: f64,
}

/// Impacts `baseline_mean * exp(noise_sigma * z)`, multiplied by
/// `streak_multiplier` inside a uniformly placed interval whose length is
/// drawn uniformly from the allowed range. Returns the planted interval.
pub fn generate_career(params: &CareerParams, seed: u64) -> Result<(CareerSequence, Interval)> {
    let p = params;
    if p.length == 0 {
        return Err(Error::param("length", "must be positive"));
    }
    if !(p.baseline_mean.is_finite() && p.baseline_mean > 0.0) {
        return Err(Error::param("baseline_mean", "must be positive and finite"));
    }
    if !(p.streak_multiplier.is_finite() && p.streak_multiplier >= 1.0) {
        return Err(Error::param("streak_multiplier", "must be at least 1"));
    }
    if !(p.noise_sigma.is_finite() && p.noise_sigma >= 0.0) {
        return Err(Error::param("noise_sigma", "must be non-negative"));
    }
    if p.streak_min_len == 0 || p.streak_min_len > p.streak_max_len {
        return Err(Error::param(
            "streak_len",
            format!("invalid range {}..={}", p.streak_min_len, p.streak_max_len),
        ));
    }
    if p.streak_max_len > p.length {
        return Err(Error::param(
            "streak_len",
            format!(
                "streaks up to {} works cannot fit a career of {}",
                p.streak_max_len, p.length
            ),
        ));
    }

    let mut rng = seed::rng(seed);
    let len = rng.random_range(p.streak_min_len..=p.streak_max_len);
    let start = rng.random_range(0..=p.length - len);
    let interval = Interval {
        start,
        end: start + len - 1,
    };
    let impacts = (0..p.length)
        .map(|i| {
            let z: f64 = rng.sample(StandardNormal);
            let base = p.baseline_mean * (p.noise_sigma * z).exp();
            if interval.contains(i) {
                base * p.streak_multiplier
            } else {
                base
            }
        })
        .collect();
    Ok((CareerSequence::new("synthetic", impacts)?, interval))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    pub min_len: usize,
    /// Penalty per extra parameter; `None` means `2 * ln(n)`.
    pub penalty_per_parameter: Option<f64>,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig {
            min_len: 3,
            penalty_per_parameter: None,
        }
    }
}

impl DetectionConfig {
    pub fn penalty(&self, n: usize) -> f64 {
        self.penalty_per_parameter
            .unwrap_or_else(|| 2.0 * (n as f64).ln())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    /// No admissible interval has a higher inside level.
    NoElevatedInterval,
    /// The best step does not beat the single-level model.
    BelowPenalty,
    /// A straight-line trend explains the sequence at least as well.
    ExplainedByTrend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HotStreakFit {
    pub interval: Option<Interval>,
    /// Mean log-impact outside the streak, or over everything when absent.
    pub baseline_level: f64,
    pub streak_level: Option<f64>,
    /// Single-level score minus step score for the best candidate interval.
    pub penalized_score_gain: Option<f64>,
    pub rejection: Option<Rejection>,
}

struct Candidate {
    interval: Interval,
    rss: f64,
    inside: f64,
    outside: f64,
}

fn log_impacts(seq: &CareerSequence) -> Vec<f64> {
    seq.impacts().iter().map(|v| (v + 1.0).log10()).collect()
}

fn best_step(z: &[f64], min_len: usize) -> Option<Candidate> {
    let n = z.len();
    let mut s1 = vec![0.0; n + 1];
    let mut s2 = vec![0.0; n + 1];
    for (i, v) in z.iter().enumerate() {
        s1[i + 1] = s1[i] + v;
        s2[i + 1] = s2[i] + v * v;
    }
    let mut best: Option<Candidate> = None;
    for start in 0..n {
        for end in start + min_len.max(1) - 1..n {
            let len = end - start + 1;
            if len >= n {
                break;
            }
            let in_sum = s1[end + 1] - s1[start];
            let in_sq = s2[end + 1] - s2[start];
            let out_sum = s1[n] - in_sum;
            let out_sq = s2[n] - in_sq;
            let (li, lo) = (len as f64, (n - len) as f64);
            let (inside, outside) = (in_sum / li, out_sum / lo);
            if inside <= outside {
                continue;
            }
            let rss = ((in_sq - in_sum * in_sum / li) + (out_sq - out_sum * out_sum / lo)).max(0.0);
            if best.as_ref().is_none_or(|b| rss < b.rss) {
                best = Some(Candidate {
                    interval: Interval { start, end },
                    rss,
                    inside,
                    outside,
                });
            }
        }
    }
    best
}

fn trend_rss(z: &[f64]) -> f64 {
    let n = z.len() as f64;
    let t_mean = (n - 1.0) / 2.0;
    let z_mean = z.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, v) in z.iter().enumerate() {
        let dt = t as f64 - t_mean;
        sxy += dt * (v - z_mean);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    z.iter()
        .enumerate()
        .map(|(t, v)| {
            let r = v - z_mean - slope * (t as f64 - t_mean);
            r * r
        })
        .sum()
}

pub fn detect_hot_streak(seq: &CareerSequence, config: &DetectionConfig) -> Result<HotStreakFit> {
    let n = seq.len();
    if n < MIN_SEQUENCE_LEN {
        return Err(Error::SequenceTooShort {
            len: n,
            min: MIN_SEQUENCE_LEN,
        });
    }
    if config.min_len == 0 {
        return Err(Error::param("min_len", "must be positive"));
    }
    let penalty = config.penalty(n);
    if !(penalty.is_finite() && penalty >= 0.0) {
        return Err(Error::param("penalty", "must be finite and non-negative"));
    }

    let y = log_impacts(seq);
    let mean = y.iter().sum::<f64>() / n as f64;
    let z: Vec<f64> = y.iter().map(|v| v - mean).collect();

    let nf = n as f64;
    let floor = nf * RSS_FLOOR_PER_OBS;
    let score = |rss: f64, extra: f64| nf * (rss.max(floor) / nf).ln() + penalty * extra;

    let absent = |gain, rejection| HotStreakFit {
        interval: None,
        baseline_level: mean,
        streak_level: None,
        penalized_score_gain: gain,
        rejection: Some(rejection),
    };

    let Some(best) = best_step(&z, config.min_len) else {
        return Ok(absent(None, Rejection::NoElevatedInterval));
    };
    let rss0: f64 = z.iter().map(|v| v * v).sum();
    let step = score(best.rss, 2.0);
    let gain = score(rss0, 0.0) - step;
    if gain <= 0.0 {
        return Ok(absent(Some(gain), Rejection::BelowPenalty));
    }
    if step >= score(trend_rss(&z), 1.0) {
        return Ok(absent(Some(gain), Rejection::ExplainedByTrend));
    }
    Ok(HotStreakFit {
        interval: Some(best.interval),
        baseline_level: best.outside + mean,
        streak_level: Some(best.inside + mean),
        penalized_score_gain: Some(gain),
        rejection: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreakSummary {
    pub overall_mean: f64,
    pub baseline_mean: f64,
    pub streak_mean: Option<f64>,
    pub fit: HotStreakFit,
}

/// Mean raw impact overall, outside and inside the detected streak.
pub fn streak_adjusted_summary(
    seq: &CareerSequence,
    config: &DetectionConfig,
) -> Result<StreakSummary> {
    let fit = detect_hot_streak(seq, config)?;
    let v = seq.impacts();
    let mean = |xs: &mut dyn Iterator<Item = f64>| {
        let (s, c) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
        s / c as f64
    };
    let overall_mean = mean(&mut v.iter().copied());
    let (baseline_mean, streak_mean) = match fit.interval {
        None => (overall_mean, None),
        Some(iv) => (
            mean(
                &mut v
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !iv.contains(*i))
                    .map(|(_, x)| *x),
            ),
            Some(mean(&mut v[iv.start..=iv.end].iter().copied())),
        ),
    };
    Ok(StreakSummary {
        overall_mean,
        baseline_mean,
        streak_mean,
        fit,
    })
}
