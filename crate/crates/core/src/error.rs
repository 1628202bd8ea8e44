use std::fmt;

use crate::polyring::VariableId;

/// Location-tagged failure from one of the text parsers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(VariableId),
    #[error("variable `{0}` is zero but appears with a negative exponent")]
    ZeroToNegativePower(VariableId),
    #[error("grammar construction needs integer parameters, got {0}")]
    NonIntegerParams(String),
    #[error("variable `{0}` is not in the grammar alphabet")]
    UnknownVariable(VariableId),
    #[error("expansion of D^{n} does not separate the columns: {detail}")]
    NonTriangularExpansion { n: usize, detail: String },
    #[error("row {requested} is out of range (triangle has rows 0..={max})")]
    RowOutOfRange { requested: usize, max: usize },
    #[error("parameter a1 must be nonzero")]
    ZeroA1,
    #[error("parameter a2 must be nonzero")]
    ZeroA2,
    #[error("series needs constant term 1")]
    NonUnitConstantTerm,
    #[error("series needs constant term 0")]
    NonZeroConstantTerm,
    #[error("inner series of a composition needs constant term 0")]
    NonZeroInnerConstant,
    #[error("constant term of the series is not invertible")]
    NonInvertibleConstantTerm,
    #[error("degenerate evaluation point: {0}")]
    DegeneratePoint(String),
    #[error("y must differ from 0 and 1")]
    DegenerateY,
    #[error("enumeration budget of {budget} objects exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("negative leaf multiplicity in rule or seed: {0}")]
    NegativeLeafMultiplicity(String),
    #[error("rule for `{0}` is not a single monomial with positive integer coefficient")]
    NonMonomialRule(VariableId),
    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
