//! Line-oriented text form of a [`DecisionTrace`].
//!
//! ```text
//! trace v1
//! rule mode=absolute delta=2
//! step cue=hcp direction=higher a=6 b=5 discriminated=false
//! step cue=collab direction=higher a=9 b=3 discriminated=true
//! stop reason=discriminated decision=chooseA
//! ```
//!
//! Cue names are percent-escaped for whitespace, control characters and `%`.
//! Numbers use the shortest representation that parses back to the same
//! value. Parsing replays the trace, so a parsed trace is always consistent.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::{DecisionTrace, DiscriminationMode, DiscriminationRule, StoppingReason, TraceStep};

const HEADER: &str = "trace v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}{message}", line.map(|l| format!("trace line {l}: ")).unwrap_or_default())]
pub struct TraceParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl TraceParseError {
    pub(crate) fn new(message: impl Into<String>) -> Self {
        TraceParseError {
            line: None,
            message: message.into(),
        }
    }

    fn at(line: usize, message: impl Into<String>) -> Self {
        TraceParseError {
            line: Some(line),
            message: message.into(),
        }
    }
}

fn escape(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        if c == '%' || c.is_whitespace() || c.is_control() {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                let _ = write!(out, "%{b:02X}");
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn unescape(s: &str) -> Option<String> {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = s.get(i + 1..i + 3)?;
            out.push(u8::from_str_radix(hex, 16).ok()?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).ok()
}

impl fmt::Display for DecisionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{HEADER}")?;
        writeln!(
            f,
            "rule mode={} delta={}",
            self.rule.mode().as_str(),
            self.rule.delta()
        )?;
        for s in &self.steps {
            writeln!(
                f,
                "step cue={} direction={} a={} b={} discriminated={}",
                escape(&s.cue),
                s.direction.as_str(),
                s.score_a,
                s.score_b,
                s.discriminated
            )?;
        }
        writeln!(
            f,
            "stop reason={} decision={}",
            self.stopping_reason.as_str(),
            self.decision
        )
    }
}

/// Splits `tag k=v k=v` and checks the keys appear exactly as expected.
fn fields<'a>(
    line_no: usize,
    line: &'a str,
    tag: &str,
    keys: &[&str],
) -> Result<Vec<&'a str>, TraceParseError> {
    let mut parts = line.split_ascii_whitespace();
    if parts.next() != Some(tag) {
        return Err(TraceParseError::at(
            line_no,
            format!("expected `{tag}` record"),
        ));
    }
    let mut values = Vec::with_capacity(keys.len());
    for key in keys {
        let part = parts
            .next()
            .ok_or_else(|| TraceParseError::at(line_no, format!("missing `{key}`")))?;
        match part.split_once('=') {
            Some((k, v)) if k == *key => values.push(v),
            _ => {
                return Err(TraceParseError::at(
                    line_no,
                    format!("expected `{key}=...`, found `{part}`"),
                ))
            }
        }
    }
    if let Some(extra) = parts.next() {
        return Err(TraceParseError::at(
            line_no,
            format!("unexpected `{extra}`"),
        ));
    }
    Ok(values)
}

fn number(line_no: usize, key: &str, v: &str) -> Result<f64, TraceParseError> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(TraceParseError::at(
            line_no,
            format!("`{key}` must be a finite number, found `{v}`"),
        )),
    }
}

fn boolean(line_no: usize, v: &str) -> Result<bool, TraceParseError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(TraceParseError::at(
            line_no,
            format!("`{v}` is not true/false"),
        )),
    }
}

impl FromStr for DecisionTrace {
    type Err = TraceParseError;

    fn from_str(s: &str) -> Result<Self, TraceParseError> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        match lines.next() {
            Some((_, HEADER)) => {}
            Some((n, _)) => return Err(TraceParseError::at(n, format!("expected `{HEADER}`"))),
            None => return Err(TraceParseError::new("empty trace")),
        }

        let (n, line) = lines
            .next()
            .ok_or_else(|| TraceParseError::new("missing rule record"))?;
        let v = fields(n, line, "rule", &["mode", "delta"])?;
        let mode: DiscriminationMode = v[0]
            .parse()
            .map_err(|e: crate::Error| TraceParseError::at(n, e.to_string()))?;
        let rule = DiscriminationRule::new(number(n, "delta", v[1])?, mode)
            .map_err(|e| TraceParseError::at(n, e.to_string()))?;

        let mut steps = Vec::new();
        let stop = loop {
            let (n, line) = lines
                .next()
                .ok_or_else(|| TraceParseError::new("missing stop record"))?;
            if line.starts_with("stop") {
                break (n, line);
            }
            let v = fields(
                n,
                line,
                "step",
                &["cue", "direction", "a", "b", "discriminated"],
            )?;
            let cue = unescape(v[0])
                .filter(|c| !c.is_empty())
                .ok_or_else(|| TraceParseError::at(n, "malformed cue name"))?;
            steps.push(TraceStep {
                cue,
                direction: v[1]
                    .parse()
                    .map_err(|e: String| TraceParseError::at(n, e))?,
                score_a: number(n, "a", v[2])?,
                score_b: number(n, "b", v[3])?,
                discriminated: boolean(n, v[4])?,
            });
        };

        let (n, line) = stop;
        let v = fields(n, line, "stop", &["reason", "decision"])?;
        let stopping_reason = match v[0] {
            "discriminated" => StoppingReason::Discriminated,
            "cues_exhausted" => StoppingReason::CuesExhausted,
            other => {
                return Err(TraceParseError::at(
                    n,
                    format!("unknown stopping reason `{other}`"),
                ))
            }
        };
        let decision = v[1]
            .parse()
            .map_err(|e: String| TraceParseError::at(n, e))?;
        if let Some((n, _)) = lines.next() {
            return Err(TraceParseError::at(n, "content after stop record"));
        }

        let trace = DecisionTrace {
            rule,
            steps,
            stopping_reason,
            decision,
        };
        trace.replay()?;
        Ok(trace)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{one_reason_choose, CueOrder, Decision};
    use super::*;
    use crate::indicators::{CandidateProfile, Direction, IndicatorDefinition};
    use proptest::prelude::*;

    #[test]
    fn text_form_is_one_line_per_cue() {
        let a = CandidateProfile::new("A", vec![])
            .with_indicator("hcp", 6.0)
            .unwrap()
            .with_indicator("co authors", 9.5)
            .unwrap();
        let b = CandidateProfile::new("B", vec![])
            .with_indicator("hcp", 5.0)
            .unwrap()
            .with_indicator("co authors", 3.0)
            .unwrap();
        let order = CueOrder::funder_goals(vec![
            IndicatorDefinition::higher("hcp").unwrap(),
            IndicatorDefinition::higher("co authors").unwrap(),
        ])
        .unwrap();
        let t =
            one_reason_choose(&a, &b, &order, DiscriminationRule::absolute(2.0).unwrap()).unwrap();
        let text = t.to_string();
        assert_eq!(
            text,
            "trace v1\n\
             rule mode=absolute delta=2\n\
             step cue=hcp direction=higher a=6 b=5 discriminated=false\n\
             step cue=co%20authors direction=higher a=9.5 b=3 discriminated=true\n\
             stop reason=discriminated decision=chooseA\n"
        );
        let back: DecisionTrace = text.parse().unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_tampered_traces() {
        let good = "trace v1\nrule mode=absolute delta=0\nstep cue=x direction=higher a=1 b=2 discriminated=true\nstop reason=discriminated decision=chooseB\n";
        assert!(good.parse::<DecisionTrace>().is_ok());
        let wrong_decision = good.replace("decision=chooseB", "decision=chooseA");
        assert!(wrong_decision.parse::<DecisionTrace>().is_err());
        let wrong_flag = good.replace("discriminated=true", "discriminated=false");
        assert!(wrong_flag.parse::<DecisionTrace>().is_err());
        assert!("".parse::<DecisionTrace>().is_err());
        assert!("trace v1\n".parse::<DecisionTrace>().is_err());
        let nan = good.replace("a=1", "a=NaN");
        let err = nan.parse::<DecisionTrace>().unwrap_err();
        assert_eq!(err.line, Some(3));
        let trailing = format!("{good}step cue=x direction=higher a=1 b=1 discriminated=false\n");
        assert!(trailing.parse::<DecisionTrace>().is_err());
        assert!(good
            .replace("cue=x", "cue=%G0")
            .parse::<DecisionTrace>()
            .is_err());
    }

    #[test]
    fn escape_round_trip() {
        for name in ["plain", "two words", "100%", "tab\there", "ünï cödé"] {
            assert_eq!(unescape(&escape(name)).as_deref(), Some(name));
        }
    }

    proptest! {
        #[test]
        fn display_then_parse_is_identity(
            scores in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 1..6),
            delta in 0.0f64..10.0,
            names in prop::collection::vec("[a-z %]{1,8}", 6),
        ) {
            let mut uniq: Vec<String> = names.clone();
            uniq.sort();
            uniq.dedup();
            prop_assume!(uniq.len() >= scores.len());
            let defs: Vec<_> = uniq.iter().take(scores.len()).map(|n| {
                IndicatorDefinition::new(n.clone(), Direction::HigherIsBetter).unwrap()
            }).collect();
            let a = defs.iter().zip(&scores).fold(CandidateProfile::new("A", vec![]), |p, (d, s)| p.with_indicator(d.name(), s.0).unwrap());
            let b = defs.iter().zip(&scores).fold(CandidateProfile::new("B", vec![]), |p, (d, s)| p.with_indicator(d.name(), s.1).unwrap());
            let order = CueOrder::funder_goals(defs).unwrap();
            let t = one_reason_choose(&a, &b, &order, DiscriminationRule::absolute(delta).unwrap()).unwrap();
            let back: DecisionTrace = t.to_string().parse().unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert!(matches!(back.decision, Decision::ChooseA | Decision::ChooseB | Decision::Undecided));
        }
    }
}
