use thiserror::Error;

/// Byte range `start..end` into the parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    /// Smallest span covering both.
    pub fn join(self, other: SourceSpan) -> SourceSpan {
        SourceSpan::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl std::fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),

    #[error("substitution target `{0}` is not a monomial element")]
    NonMonomialBinding(String),

    #[error("cannot parse `{input}`: {message}")]
    Parse { input: String, message: String },

    #[error("partition size mismatch: |{0}| != |{1}|")]
    SizeMismatch(String, String),

    #[error("invalid partition `{0}`")]
    InvalidPartition(String),

    #[error("cell ({row}, {col}) lies outside the diagram of ({partition})")]
    CellOutside {
        row: usize,
        col: usize,
        partition: String,
    },

    #[error("unknown basis `{0}`")]
    UnknownBasis(String),

    #[error("pExp undefined at nonzero constant term")]
    NonzeroConstantTerm,

    #[error("pLog requires constant term 1, found {0}")]
    ConstantTermNotOne(String),

    #[error("unsupported depth: alphabet products of more than 2 symbols")]
    UnsupportedDepth,

    #[error("alphabet coefficient `{0}` has a small variable in its denominator")]
    SmallVariableInDenominator(String),

    #[error("negative power of small variable in `{0}`")]
    NegativeSmallPower(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("linear system is inconsistent or underdetermined for {0}")]
    SingularSystem(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("syntax error at {span}: {message}; expected one of: {}", expected.join(", "))]
    Syntax {
        span: SourceSpan,
        message: String,
        expected: Vec<String>,
    },

    #[error("type error at {span}: {message}")]
    Type { span: SourceSpan, message: String },
}
