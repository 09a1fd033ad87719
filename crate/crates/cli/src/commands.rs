use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bbh::careers::{self, CareerParams, DetectionConfig};
use bbh::ecology::{self, BuiltinStrategy, Environment, PairStrategy, SplitConfig};
use bbh::heuristics::{
    minimalist_choose, one_cue_select, one_reason_choose, tallying_choose, weighted_linear_choose,
    weighted_sum, CueOrder, DiscriminationMode, DiscriminationRule, WeightVector,
};
use bbh::indicators::{
    finalize_publication_list, score_profile, CandidateProfile, IndicatorDefinition,
    ReferenceCorpus, DEFAULT_TOP_FRACTION, HIGHLY_CITED,
};
use bbh::io;

use crate::args::{
    BenchArgs, CareerArgs, ChooseArgs, ChooseStrategy, Cli, Command, Common, Format, Generator,
    ProfileSources, ScreenArgs, WorkloadArgs,
};
use crate::config::{parse_config, FileConfig, RunConfig};
use crate::report::{BenchBody, Body, CareerBody, ChoiceBody, Report, Timing, WorkloadBody};
use crate::workload::{workload, WorkloadQuery};
use crate::{write_file, CliError};

const DEFAULT_QUOTA: f64 = 0.10;
const DEFAULT_CUE_ORDER: &str = "highly_cited_papers,citations,publications";
const DEFAULT_BINARY_WEIGHTS: &str = "c1=4,c2=2,c3=1";
const DEFAULT_CORRELATIONS: &str = "c1=0.8,c2=0.5,c3=0.2";

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

fn parse_file<T>(path: &Path, parse: impl FnOnce(&str) -> bbh::Result<T>) -> Result<T, CliError> {
    parse(&read(path)?).map_err(|source| CliError::Input {
        path: path.to_owned(),
        source,
    })
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    raw.parse().map_err(|e| usage(format!("--{key}: {e}")))
}

fn cue_list(key: &str, raw: &str) -> Result<Vec<IndicatorDefinition>, CliError> {
    raw.split(',')
        .map(|s| parse_value::<IndicatorDefinition>(key, s.trim()))
        .collect()
}

struct Ctx {
    file: FileConfig,
    config: RunConfig,
    format: Format,
    out: Option<PathBuf>,
}

impl Ctx {
    fn new(command: &'static str, common: &Common) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(path) => parse_config(&read(path)?)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
            None => FileConfig::default(),
        };
        let seed = common.seed.or(file.seed).unwrap_or(0);
        let mut config = RunConfig::new(command, seed);
        if let Some(path) = &common.config {
            config.input("config", path);
        }
        let out = common.out.clone().or(file.out.clone());
        config.out = out.as_ref().map(|p| p.display().to_string());
        Ok(Ctx {
            format: common.format.or(file.format).unwrap_or(Format::Table),
            file,
            config,
            out,
        })
    }

    fn seed(&self) -> u64 {
        self.config.seed
    }

    fn rule(
        &mut self,
        delta: Option<f64>,
        mode: &Option<String>,
    ) -> Result<DiscriminationRule, CliError> {
        let delta = delta.or(self.file.delta).unwrap_or(0.0);
        let mode = match mode.as_ref().or(self.file.mode.as_ref()) {
            Some(m) => parse_value::<DiscriminationMode>("mode", m)?,
            None => DiscriminationMode::Absolute,
        };
        let rule = DiscriminationRule::new(delta, mode)?;
        self.config.param("delta", rule.delta());
        self.config.param("mode", rule.mode().as_str());
        Ok(rule)
    }

    fn finish(self, body: Body) -> (Report, Format, Option<PathBuf>) {
        (
            Report {
                config: self.config,
                body,
            },
            self.format,
            self.out,
        )
    }
}

fn load_profiles(ctx: &mut Ctx, src: &ProfileSources) -> Result<Vec<CandidateProfile>, CliError> {
    let f = &ctx.file;
    let corpus_path = src.corpus.clone().or(f.corpus.clone());
    let candidates_path = src.candidates.clone().or(f.candidates.clone());
    let decisions_path = src.decisions.clone().or(f.decisions.clone());
    let indicators_path = src.indicators.clone().or(f.indicators.clone());
    let p = src.p.or(f.p).unwrap_or(DEFAULT_TOP_FRACTION);
    ctx.config.param("p", p);

    let mut profiles = Vec::new();
    if let Some(cpath) = &candidates_path {
        let Some(corpus_path) = &corpus_path else {
            return Err(usage("--candidates needs --corpus to score publications"));
        };
        ctx.config.input("corpus", corpus_path);
        ctx.config.input("candidates", cpath);
        let corpus: ReferenceCorpus = parse_file(corpus_path, io::parse_corpus)?
            .into_iter()
            .collect();
        let candidates = parse_file(cpath, io::parse_candidates)?;
        let mut verdicts = match &decisions_path {
            Some(d) => {
                ctx.config.input("decisions", d);
                parse_file(d, io::parse_decisions)?
            }
            None => BTreeMap::new(),
        };
        for cand in candidates {
            let own: BTreeMap<_, _> = cand
                .publications
                .iter()
                .filter_map(|pb| verdicts.remove_entry(&pb.id))
                .collect();
            let finalized = if own.is_empty() {
                cand
            } else {
                finalize_publication_list(&cand, &own)?
            };
            profiles.push(score_profile(&finalized, &corpus, p)?);
        }
        if let Some(id) = verdicts.keys().next() {
            return Err(usage(format!(
                "decision for publication `{id}` matches no candidate publication"
            )));
        }
    } else if decisions_path.is_some() {
        return Err(usage("--decisions needs --candidates"));
    } else if corpus_path.is_some() {
        return Err(usage("--corpus needs --candidates"));
    }

    if let Some(ipath) = &indicators_path {
        ctx.config.input("indicators", ipath);
        for row in parse_file(ipath, io::parse_indicator_table)? {
            match profiles.iter_mut().find(|p| p.id == row.id) {
                Some(target) => {
                    for (name, value) in row.indicators() {
                        target.set_indicator(name.clone(), *value)?;
                    }
                }
                None => profiles.push(row),
            }
        }
    }
    if candidates_path.is_none() && indicators_path.is_none() {
        return Err(usage(
            "no candidates: pass --candidates with --corpus, or --indicators",
        ));
    }
    Ok(profiles)
}

fn screen(args: &ScreenArgs) -> Result<(Report, Format, Option<PathBuf>), CliError> {
    let mut ctx = Ctx::new("screen", &args.common)?;
    let profiles = load_profiles(&mut ctx, &args.sources)?;
    let cue = match args.cue.as_ref().or(ctx.file.cue.as_ref()) {
        Some(c) => parse_value::<IndicatorDefinition>("cue", c)?,
        None => IndicatorDefinition::higher(HIGHLY_CITED)?,
    };
    let quota = args.quota.or(ctx.file.quota).unwrap_or(DEFAULT_QUOTA);
    ctx.config.param("cue", cue.to_string());
    ctx.config.param("quota", quota);
    let set = one_cue_select(&profiles, &cue, quota)?;
    Ok(ctx.finish(Body::Screen(set)))
}

fn choose(args: &ChooseArgs) -> Result<(Report, Format, Option<PathBuf>), CliError> {
    let mut ctx = Ctx::new("choose", &args.common)?;
    let profiles = load_profiles(&mut ctx, &args.sources)?;
    let a_id = args
        .a
        .clone()
        .or(ctx.file.a.clone())
        .ok_or_else(|| usage("--a is required"))?;
    let b_id = args
        .b
        .clone()
        .or(ctx.file.b.clone())
        .ok_or_else(|| usage("--b is required"))?;
    let find = |id: &str| {
        profiles
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| usage(format!("unknown candidate `{id}`")))
    };
    let (a, b) = (find(&a_id)?, find(&b_id)?);
    let strategy = args
        .strategy
        .or(ctx.file.strategy)
        .unwrap_or(ChooseStrategy::OneReason);
    ctx.config.param("a", &a_id);
    ctx.config.param("b", &b_id);
    ctx.config.param("strategy", strategy);

    let cue_raw = args
        .cue_order
        .clone()
        .or(ctx.file.cue_order.clone())
        .unwrap_or_else(|| DEFAULT_CUE_ORDER.to_owned());
    let weights_raw = args.weights.clone().or(ctx.file.weights.clone());
    let cue_order = || cue_list("cue-order", &cue_raw);
    let mut body = ChoiceBody {
        a: a_id.clone(),
        b: b_id.clone(),
        decision: bbh::heuristics::Decision::Undecided,
        cues_inspected: 0,
        scores: None,
        trace: None,
    };
    match strategy {
        ChooseStrategy::OneReason | ChooseStrategy::Minimalist => {
            let cues = cue_order()?;
            ctx.config.param(
                "cue_order",
                cues.iter().map(ToString::to_string).collect::<Vec<_>>(),
            );
            let trace = if strategy == ChooseStrategy::OneReason {
                let rule = ctx.rule(args.delta, &args.mode)?;
                one_reason_choose(a, b, &CueOrder::funder_goals(cues)?, rule)?
            } else {
                minimalist_choose(a, b, &cues, ctx.seed())?
            };
            body.decision = trace.decision;
            body.cues_inspected = trace.cues_inspected();
            body.trace = Some(trace);
        }
        ChooseStrategy::Tallying => {
            let cues = cue_order()?;
            ctx.config.param(
                "cue_order",
                cues.iter().map(ToString::to_string).collect::<Vec<_>>(),
            );
            body.decision = tallying_choose(a, b, &cues)?;
            body.cues_inspected = cues.len();
        }
        ChooseStrategy::WeightedLinear => {
            let raw = weights_raw.ok_or_else(|| usage("weighted-linear needs --weights"))?;
            let weights: WeightVector = parse_value("weights", &raw)?;
            ctx.config.param("weights", weights.to_string());
            body.decision = weighted_linear_choose(a, b, &weights)?;
            body.cues_inspected = weights.len();
            body.scores = Some((weighted_sum(a, &weights)?, weighted_sum(b, &weights)?));
        }
    }
    Ok(ctx.finish(Body::Choose(body)))
}

fn bench(args: &BenchArgs) -> Result<(Report, Format, Option<PathBuf>), CliError> {
    let mut ctx = Ctx::new("bench", &args.common)?;
    let f = ctx.file.clone();
    let env_path = args.env.clone().or(f.env);
    let generator = args.generate.or(f.generate);
    let env: Environment = match (&env_path, generator) {
        (Some(_), Some(_)) => return Err(usage("--env and --generate are exclusive")),
        (None, None) => return Err(usage("bench needs --env or --generate")),
        (Some(path), None) => {
            ctx.config.input("env", path);
            parse_file(path, io::parse_environment)?
        }
        (None, Some(g)) => {
            let objects = args.objects.or(f.objects).unwrap_or(20);
            ctx.config.param("generate", g);
            ctx.config.param("objects", objects);
            let seed = bbh::seed::derive_seed(ctx.seed(), 0);
            match g {
                Generator::Binary => {
                    let raw = args
                        .weights
                        .as_deref()
                        .or(f.weights.as_deref())
                        .unwrap_or(DEFAULT_BINARY_WEIGHTS);
                    let w: WeightVector = parse_value("weights", raw)?;
                    ctx.config.param("weights", w.to_string());
                    ecology::generate_binary_environment(&w, objects, seed)?
                }
                Generator::Gaussian => {
                    let raw = args
                        .correlations
                        .as_deref()
                        .or(f.correlations.as_deref())
                        .unwrap_or(DEFAULT_CORRELATIONS);
                    let r: WeightVector = parse_value("correlations", raw)?;
                    ctx.config.param("correlations", r.to_string());
                    ecology::generate_gaussian_environment(r.as_slice(), objects, seed)?
                }
            }
        }
    };
    let train_fraction = args.train_fraction.or(f.train_fraction).unwrap_or(0.5);
    let repetitions = args.repetitions.or(f.repetitions).unwrap_or(100);
    let split = SplitConfig::new(
        train_fraction,
        repetitions,
        bbh::seed::derive_seed(ctx.seed(), 1),
    )?;
    ctx.config.param("train_fraction", train_fraction);
    ctx.config.param("repetitions", repetitions);
    let rule = ctx.rule(args.delta, &args.mode)?;
    let names: Vec<String> = match args.strategies.as_deref().or(f.strategies.as_deref()) {
        Some(raw) => raw.split(',').map(|s| s.trim().to_owned()).collect(),
        None => BuiltinStrategy::NAMES
            .iter()
            .map(|s| s.to_string())
            .collect(),
    };
    let strategies = names
        .iter()
        .map(|n| match parse_value::<BuiltinStrategy>("strategies", n)? {
            BuiltinStrategy::TakeTheBest(_) => Ok(BuiltinStrategy::TakeTheBest(rule)),
            s => Ok(s),
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    ctx.config.param("strategies", &names);
    ctx.config.param("timing", args.timing);

    if let Some(path) = &args.save_env {
        write_file(path, &io::write_environment(&env), &ctx.config)?;
    }
    let dyns: Vec<&dyn PairStrategy> = strategies.iter().map(|s| s as &dyn PairStrategy).collect();
    let report = ecology::run_benchmark(&env, &dyns, &split)?;
    let timing: Vec<Timing> = report
        .strategies
        .iter()
        .map(|s| Timing {
            name: s.name.clone(),
            micros_per_thousand: s.time_per_thousand().as_secs_f64() * 1e6,
        })
        .collect();
    for t in &timing {
        eprintln!(
            "{}: {:.1} us per 1000 decisions",
            t.name, t.micros_per_thousand
        );
    }
    Ok(ctx.finish(Body::Bench(BenchBody {
        report,
        timing: args.timing.then_some(timing),
    })))
}

fn career(args: &CareerArgs) -> Result<(Report, Format, Option<PathBuf>), CliError> {
    let mut ctx = Ctx::new("career", &args.common)?;
    let f = ctx.file.clone();
    let input = args.input.clone().or(f.input);
    let (seq, planted) = match (&input, args.generate) {
        (Some(_), true) => return Err(usage("--input and --generate are exclusive")),
        (None, false) => return Err(usage("career needs --input or --generate")),
        (Some(path), false) => {
            ctx.config.input("career", path);
            let owner = path
                .file_stem()
                .map_or("career".into(), |s| s.to_string_lossy().into_owned());
            (parse_file(path, |t| io::parse_career(&owner, t))?, None)
        }
        (None, true) => {
            let params = CareerParams {
                length: args.length.or(f.length).unwrap_or(30),
                baseline_mean: args.baseline.or(f.baseline).unwrap_or(5.0),
                streak_multiplier: args.multiplier.or(f.multiplier).unwrap_or(10.0),
                streak_min_len: args.streak_min.or(f.streak_min).unwrap_or(10),
                streak_max_len: args.streak_max.or(f.streak_max).unwrap_or(10),
                noise_sigma: args.sigma.or(f.sigma).unwrap_or(0.1),
            };
            ctx.config.param("generate", &params);
            let (seq, iv) = careers::generate_career(&params, ctx.seed())?;
            (seq, Some(iv))
        }
    };
    let detection = DetectionConfig {
        min_len: args.min_len.or(f.min_len).unwrap_or(3),
        penalty_per_parameter: args.penalty.or(f.penalty),
    };
    ctx.config.param("min_len", detection.min_len);
    ctx.config
        .param("penalty_per_parameter", detection.penalty(seq.len()));
    if let Some(path) = &args.save_career {
        write_file(path, &io::write_career(&seq), &ctx.config)?;
    }
    let summary = careers::streak_adjusted_summary(&seq, &detection)?;
    Ok(ctx.finish(Body::Career(CareerBody {
        length: seq.len(),
        planted,
        summary,
    })))
}

fn workload_cmd(args: &WorkloadArgs) -> Result<(Report, Format, Option<PathBuf>), CliError> {
    let mut ctx = Ctx::new("workload", &args.common)?;
    let f = &ctx.file;
    let need = |v: Option<u64>, name: &str| v.ok_or_else(|| usage(format!("--{name} is required")));
    let q = WorkloadQuery::new(
        need(args.papers.or(f.papers), "papers")?,
        need(args.reviews.or(f.reviews), "reviews")?,
        need(args.panel.or(f.panel), "panel")?,
        need(args.days.or(f.days), "days")?,
    )?;
    ctx.config.param("query", q);
    let value = workload(&q);
    Ok(ctx.finish(Body::Workload(WorkloadBody {
        reviews_per_member_per_day: value,
    })))
}

/// Builds the report for a parsed command line, together with the requested
/// output format and `--out` stem.
pub fn build_report(cli: &Cli) -> Result<(Report, Format, Option<PathBuf>), CliError> {
    match &cli.command {
        Command::Screen(a) => screen(a),
        Command::Choose(a) => choose(a),
        Command::Bench(a) => bench(a),
        Command::Career(a) => career(a),
        Command::Workload(a) => workload_cmd(a),
    }
}
