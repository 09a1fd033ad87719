use std::fmt::Write as _;

use bbh::careers::{Interval, StreakSummary};
use bbh::ecology::BenchmarkReport;
use bbh::heuristics::{ConsiderationSet, Decision, DecisionTrace};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChoiceBody {
    pub a: String,
    pub b: String,
    pub decision: Decision,
    pub cues_inspected: usize,
    /// Weighted sums of `a` and `b`, for weighted-linear.
    pub scores: Option<(f64, f64)>,
    pub trace: Option<DecisionTrace>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub name: String,
    pub micros_per_thousand: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchBody {
    #[serde(flatten)]
    pub report: BenchmarkReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Vec<Timing>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CareerBody {
    pub length: usize,
    /// Streak planted by the generator.
    pub planted: Option<Interval>,
    pub summary: StreakSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkloadBody {
    pub reviews_per_member_per_day: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Body {
    Screen(ConsiderationSet),
    Choose(ChoiceBody),
    Bench(BenchBody),
    Career(CareerBody),
    Workload(WorkloadBody),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: RunConfig,
    pub body: Body,
}

#[derive(Serialize)]
struct Machine<'a> {
    config: &'a RunConfig,
    result: &'a Body,
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(render_value).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// Left-aligned columns separated by two spaces, no trailing blanks.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                write!(s, "{cell:<w$}  ").unwrap();
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(headers.to_vec());
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
    out
}

impl Report {
    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Machine {
            config: &self.config,
            result: &self.body,
        })
        .expect("reports serialize to JSON");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let c = &self.config;
        let mut rows = vec![
            vec!["tool".to_owned(), format!("{} {}", c.tool, c.version)],
            vec!["command".to_owned(), c.command.to_owned()],
            vec!["seed".to_owned(), c.seed.to_string()],
        ];
        for (role, path) in &c.inputs {
            rows.push(vec![format!("input.{role}"), path.clone()]);
        }
        if let Some(out) = &c.out {
            rows.push(vec!["out".to_owned(), out.clone()]);
        }
        for (k, v) in &c.parameters {
            match v {
                Value::Object(map) => {
                    for (sub, sv) in map {
                        rows.push(vec![format!("{k}.{sub}"), render_value(sv)]);
                    }
                }
                _ => rows.push(vec![k.to_string(), render_value(v)]),
            }
        }
        let mut out = table(&["setting", "value"], &rows);
        out.push('\n');
        out.push_str(&match &self.body {
            Body::Screen(s) => screen_table(s),
            Body::Choose(c) => choice_table(c),
            Body::Bench(b) => bench_table(b),
            Body::Career(c) => career_table(c),
            Body::Workload(w) => format!(
                "reviews per member per day: {:.4}\n",
                w.reviews_per_member_per_day
            ),
        });
        out
    }
}

fn screen_table(s: &ConsiderationSet) -> String {
    let mut out = format!(
        "consideration set on {}: {} of {} kept (quota {} -> {}, cutoff {})\n\n",
        s.cue,
        s.selected.len(),
        s.selected.len() + s.rejected.len(),
        s.quota,
        s.quota_count,
        s.cutoff_value
    );
    let rows: Vec<Vec<String>> = s
        .selected
        .iter()
        .map(|c| (c, "selected"))
        .chain(s.rejected.iter().map(|c| (c, "rejected")))
        .enumerate()
        .map(|(i, (c, status))| {
            vec![
                (i + 1).to_string(),
                c.id.clone(),
                c.value.to_string(),
                status.to_owned(),
            ]
        })
        .collect();
    out.push_str(&table(&["rank", "candidate", "value", "status"], &rows));
    out
}

fn choice_table(c: &ChoiceBody) -> String {
    let chosen = match c.decision {
        Decision::ChooseA => format!(" ({})", c.a),
        Decision::ChooseB => format!(" ({})", c.b),
        Decision::Undecided => String::new(),
    };
    let mut out = format!(
        "decision: {}{chosen}\ncues inspected: {}\n",
        c.decision, c.cues_inspected
    );
    if let Some((sa, sb)) = c.scores {
        writeln!(out, "weighted sums: {} = {sa}, {} = {sb}", c.a, c.b).unwrap();
    }
    if let Some(trace) = &c.trace {
        let rows: Vec<Vec<String>> = trace
            .steps
            .iter()
            .map(|s| {
                vec![
                    s.cue.clone(),
                    s.direction.as_str().to_owned(),
                    s.score_a.to_string(),
                    s.score_b.to_string(),
                    if s.discriminated { "yes" } else { "no" }.to_owned(),
                ]
            })
            .collect();
        out.push('\n');
        out.push_str(&table(
            &["cue", "direction", &c.a, &c.b, "discriminates"],
            &rows,
        ));
        writeln!(out, "\nstopped: {}", trace.stopping_reason.as_str()).unwrap();
        out.push_str("\ntrace record:\n");
        out.push_str(&trace.to_string());
    }
    out
}

fn bench_table(b: &BenchBody) -> String {
    let r = &b.report;
    let mut out = format!(
        "{} objects, {} cues, {} repetitions at train fraction {}, {} scored test pairs\n\n",
        r.objects, r.cues, r.split.repetitions, r.split.train_fraction, r.scored_pairs
    );
    let mut headers = vec![
        "strategy",
        "accuracy",
        "frugality",
        "undecided",
        "decisions",
    ];
    if b.timing.is_some() {
        headers.push("us/1000");
    }
    let rows: Vec<Vec<String>> = r
        .strategies
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut row = vec![
                s.name.clone(),
                format!("{:.4}", s.accuracy),
                format!("{:.3}", s.frugality),
                format!("{:.4}", s.undecided_rate),
                s.decisions.to_string(),
            ];
            if let Some(t) = &b.timing {
                row.push(format!("{:.1}", t[i].micros_per_thousand));
            }
            row
        })
        .collect();
    out.push_str(&table(&headers, &rows));
    out
}

fn career_table(c: &CareerBody) -> String {
    let s = &c.summary;
    let fmt_iv = |iv: &Interval| format!("{}..={} ({} works)", iv.start, iv.end, iv.len());
    let mut rows = vec![vec!["works".to_owned(), c.length.to_string()]];
    if let Some(p) = &c.planted {
        rows.push(vec!["planted streak".to_owned(), fmt_iv(p)]);
    }
    rows.push(vec![
        "detected streak".to_owned(),
        match (&s.fit.interval, &s.fit.rejection) {
            (Some(iv), _) => fmt_iv(iv),
            (None, Some(r)) => format!(
                "none ({})",
                serde_json::to_value(r)
                    .map(|v| render_value(&v))
                    .unwrap_or_default()
            ),
            (None, None) => "none".to_owned(),
        },
    ]);
    rows.push(vec![
        "baseline log level".to_owned(),
        format!("{:.6}", s.fit.baseline_level),
    ]);
    if let Some(l) = s.fit.streak_level {
        rows.push(vec!["streak log level".to_owned(), format!("{l:.6}")]);
    }
    if let Some(g) = s.fit.penalized_score_gain {
        rows.push(vec!["penalized score gain".to_owned(), format!("{g:.6}")]);
    }
    rows.push(vec![
        "mean impact".to_owned(),
        format!("{:.6}", s.overall_mean),
    ]);
    rows.push(vec![
        "mean impact outside streak".to_owned(),
        format!("{:.6}", s.baseline_mean),
    ]);
    if let Some(m) = s.streak_mean {
        rows.push(vec![
            "mean impact inside streak".to_owned(),
            format!("{m:.6}"),
        ]);
    }
    table(&["measure", "value"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_columns() {
        let t = table(
            &["a", "long"],
            &[vec!["xyz".into(), "1".into()], vec!["q".into(), "".into()]],
        );
        assert_eq!(t, "a    long\nxyz  1\nq\n");
    }

    #[test]
    fn workload_report_formats() {
        let mut config = RunConfig::new("workload", 0);
        config.param("query", serde_json::json!({"papers": 1}));
        let r = Report {
            config,
            body: Body::Workload(WorkloadBody {
                reviews_per_member_per_day: 2.5,
            }),
        };
        let text = r.to_table();
        assert!(text.contains("query.papers  1"), "{text}");
        assert!(text.ends_with("reviews per member per day: 2.5000\n"));
        let json: Value = serde_json::from_str(&r.to_machine()).unwrap();
        assert_eq!(json["result"]["reviews_per_member_per_day"], 2.5);
        assert_eq!(json["config"]["tool"], "bbh");
    }
}
