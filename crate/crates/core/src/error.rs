use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown publication id `{0}`")]
    UnknownPublication(String),

    #[error("reference corpus has no group for category `{category}`, year {year}")]
    MissingGroup { category: String, year: i32 },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("publication `{id}` is not eligible: {reason}")]
    IneligiblePublication { id: String, reason: &'static str },

    #[error("candidate `{candidate}` still has {count} pending publication(s)")]
    PendingPublications { candidate: String, count: usize },

    #[error("indicator name must not be empty")]
    EmptyName,

    #[error("`{object}` has no value for cue `{cue}`")]
    MissingCue { object: String, cue: String },

    #[error("`{object}` has a non-finite value for cue `{cue}`")]
    NonFiniteCue { object: String, cue: String },

    #[error("cue `{0}` appears more than once")]
    DuplicateCue(String),

    #[error("cue order must name at least one cue")]
    EmptyCueOrder,

    #[error("weight for cue `{cue}` is {value}, which is not allowed here: {reason}")]
    InvalidWeight {
        cue: String,
        value: f64,
        reason: &'static str,
    },

    #[error("at least one candidate profile is required")]
    NoProfiles,

    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),

    #[error("need at least {needed} objects, got {got}")]
    TooFewObjects { needed: usize, got: usize },

    #[error("cue matrix is rank deficient; dependent cue(s): {}", .0.join(", "))]
    RankDeficient(Vec<String>),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("at least one strategy is required")]
    NoStrategies,

    #[error("no test pair with distinct criterion values in any repetition")]
    NoScorablePairs,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sequence has {len} values, at least {min} required")]
    SequenceTooShort { len: usize, min: usize },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("missing column `{0}`")]
    MissingColumn(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
