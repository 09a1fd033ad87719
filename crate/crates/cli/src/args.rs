use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

const FILE_FORMATS: &str = "\
Input tables have a header row and are comma separated, or tab separated when
the header contains a tab. Column names are exact:

  corpus       id, year, category, citations, doc_type
  candidates   candidate_id, id, year, category, citations, doc_type, validated
  indicators   candidate_id, then one numeric column per indicator
  decisions    id, decision
  environment  id, criterion, then one column per cue (`name` or `name:lower`)
  career       position, impact

doc_type is article, review or other; validated is pending, included or
excluded; decision is included or excluded. Computed indicators are
highly_cited_papers, publications and citations.

Cue lists are comma separated `name[:lower]`; weight lists are `name=value`
pairs separated by commas. Every option can also be set in a TOML file passed
with --config, using the option name with underscores as the key; flags
override the file.";

#[derive(Debug, Parser)]
#[command(name = "bbh", version, about = "Bibliometrics-based heuristics for research evaluation", after_long_help = FILE_FORMATS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank candidates on one indicator and keep the top fraction
    Screen(ScreenArgs),
    /// Compare two candidates with a one-reason or compensatory strategy
    Choose(ChooseArgs),
    /// Out-of-sample pair-comparison benchmark on a task environment
    Bench(BenchArgs),
    /// Detect a hot streak in a career, read from a file or generated
    Career(CareerArgs),
    /// Reviews per panel member per working day
    Workload(WorkloadArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChooseStrategy {
    OneReason,
    Minimalist,
    Tallying,
    WeightedLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Binary,
    Gaussian,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML file with values for any option of this command
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Master seed; every random stream is derived from it [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write <STEM>.json and <STEM>.txt instead of printing the report
    #[arg(long, value_name = "STEM")]
    pub out: Option<PathBuf>,
    /// Report format on standard output [default: table]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProfileSources {
    /// Reference corpus table
    #[arg(long, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
    /// Candidate publication lists; scored against --corpus
    #[arg(long, value_name = "FILE")]
    pub candidates: Option<PathBuf>,
    /// Validation verdicts for pending publications
    #[arg(long, value_name = "FILE")]
    pub decisions: Option<PathBuf>,
    /// Precomputed indicator table, merged into the candidate profiles
    #[arg(long, value_name = "FILE")]
    pub indicators: Option<PathBuf>,
    /// Top fraction that counts as highly cited [default: 0.10]
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScreenArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sources: ProfileSources,
    /// Screening indicator, `name[:lower]` [default: highly_cited_papers]
    #[arg(long)]
    pub cue: Option<String>,
    /// Fraction of candidates to keep, in (0, 1] [default: 0.10]
    #[arg(long)]
    pub quota: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ChooseArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sources: ProfileSources,
    /// First candidate id
    #[arg(long)]
    pub a: Option<String>,
    /// Second candidate id
    #[arg(long)]
    pub b: Option<String>,
    /// Decision strategy [default: one-reason]
    #[arg(long, value_enum)]
    pub strategy: Option<ChooseStrategy>,
    /// Cues in inspection order [default: highly_cited_papers,citations,publications]
    #[arg(long)]
    pub cue_order: Option<String>,
    /// Smallest difference that discriminates [default: 0]
    #[arg(long)]
    pub delta: Option<f64>,
    /// How differences are measured: absolute or relative [default: absolute]
    #[arg(long)]
    pub mode: Option<String>,
    /// Weights for weighted-linear
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    /// Environment table
    #[arg(long, value_name = "FILE")]
    pub env: Option<PathBuf>,
    /// Generate the environment instead of reading one
    #[arg(long, value_enum)]
    pub generate: Option<Generator>,
    /// Number of generated objects [default: 20]
    #[arg(long)]
    pub objects: Option<usize>,
    /// Cue weights of a binary environment [default: c1=4,c2=2,c3=1]
    #[arg(long)]
    pub weights: Option<String>,
    /// Cue-criterion correlations of a gaussian environment [default: c1=0.8,c2=0.5,c3=0.2]
    #[arg(long)]
    pub correlations: Option<String>,
    /// Share of objects used for training [default: 0.5]
    #[arg(long)]
    pub train_fraction: Option<f64>,
    /// Number of random splits [default: 100]
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Comma-separated strategies [default: take-the-best,minimalist,tallying,weighted-linear]
    #[arg(long)]
    pub strategies: Option<String>,
    /// Discrimination threshold for take-the-best [default: 0]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Discrimination mode for take-the-best [default: absolute]
    #[arg(long)]
    pub mode: Option<String>,
    /// Put measured decision times in the report (makes reruns differ)
    #[arg(long)]
    pub timing: bool,
    /// Also write the environment used to this file
    #[arg(long, value_name = "FILE")]
    pub save_env: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CareerArgs {
    #[command(flatten)]
    pub common: Common,
    /// Career table
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Generate a career with a planted streak instead of reading one
    #[arg(long)]
    pub generate: bool,
    /// Works in a generated career [default: 30]
    #[arg(long)]
    pub length: Option<usize>,
    /// Mean impact outside the streak [default: 5]
    #[arg(long)]
    pub baseline: Option<f64>,
    /// Impact multiplier inside the streak [default: 10]
    #[arg(long)]
    pub multiplier: Option<f64>,
    /// Shortest planted streak [default: 10]
    #[arg(long)]
    pub streak_min: Option<usize>,
    /// Longest planted streak [default: 10]
    #[arg(long)]
    pub streak_max: Option<usize>,
    /// Log-normal impact noise [default: 0.1]
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Shortest streak the detector considers [default: 3]
    #[arg(long)]
    pub min_len: Option<usize>,
    /// Score penalty per extra parameter [default: 2 ln n]
    #[arg(long)]
    pub penalty: Option<f64>,
    /// Also write the career used to this file
    #[arg(long, value_name = "FILE")]
    pub save_career: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct WorkloadArgs {
    #[command(flatten)]
    pub common: Common,
    /// Papers to assess
    #[arg(long)]
    pub papers: Option<u64>,
    /// Reviews per paper
    #[arg(long)]
    pub reviews: Option<u64>,
    /// Panel members
    #[arg(long)]
    pub panel: Option<u64>,
    /// Working days available
    #[arg(long)]
    pub days: Option<u64>,
}
