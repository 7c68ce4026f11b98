use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the evaluation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("config error: {0}")]
    Config(String),

    // data model
    #[error("file {0} is empty")]
    EmptyFile(PathBuf),
    #[error("duplicate header column `{0}`")]
    DuplicateHeader(String),
    #[error("column `{0}` declared in schema is missing from the data")]
    MissingColumn(String),
    #[error("value `{value}` is not a declared category of `{variable}` (row {row})")]
    UnknownCategory {
        variable: String,
        value: String,
        row: usize,
    },
    #[error("value `{value}` in numeric column `{variable}` is not a finite number (row {row})")]
    MalformedNumeric {
        variable: String,
        value: String,
        row: usize,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is not categorical")]
    NotCategorical(String),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("table has no rows")]
    EmptyTable,

    // risk
    #[error("synthetic table has no rows")]
    EmptySynth,
    #[error("baseline attribution probability is 1; marginal TCAP undefined")]
    DegenerateBaseline,

    // utility
    #[error("negative proportion passed to ROC")]
    NegativeInput,
    #[error("numeric variable `{0}` has no binning rule")]
    MissingBinning(String),
    #[error("confidence interval has zero width")]
    ZeroWidthInterval,
    #[error("logistic fit did not converge: data are (quasi-)separated")]
    Separation,
    #[error("information matrix is singular (collinear design)")]
    SingularInformation,
    #[error("design has {rows} rows for {terms} terms")]
    RankDeficient { rows: usize, terms: usize },

    // equivalence
    #[error("reference curve has no points")]
    EmptyCurve,
    #[error("no scores supplied")]
    EmptyScores,

    /// An error with pipeline context attached, e.g. `target=TENURE keys=3`.
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Metric,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping any context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self.root() {
            Error::Config(_) | Error::InvalidSchema(_) | Error::UnknownVariable(_) => {
                ErrorClass::Config
            }
            Error::Io { .. }
            | Error::Csv(_)
            | Error::EmptyFile(_)
            | Error::DuplicateHeader(_)
            | Error::MissingColumn(_)
            | Error::UnknownCategory { .. }
            | Error::MalformedNumeric { .. }
            | Error::EmptyTable
            | Error::EmptySynth
            | Error::EmptyCurve
            | Error::EmptyScores => ErrorClass::Data,
            _ => ErrorClass::Metric,
        }
    }

    /// Exit code contract: 2 config, 3 data, 4 metric failure.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Config => 2,
            ErrorClass::Data => 3,
            ErrorClass::Metric => 4,
        }
    }
}

pub(crate) trait ResultExt<T> {
    fn context_with<F: FnOnce() -> String>(self, f: F) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn context_with<F: FnOnce() -> String>(self, f: F) -> Result<T> {
        self.map_err(|e| e.context(f()))
    }
}
