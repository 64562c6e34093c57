use thiserror::Error;

use crate::formula::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable x{0} does not occur in the formula")]
    UnknownVariable(Var),
    #[error("formula has no variables to split on")]
    NoVariables,
    #[error("assignment does not cover variable x{0}")]
    IncompleteAssignment(Var),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("formula has {vars} variables, above the exhaustive limit of {limit}")]
    TooLarge { vars: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("polynomial bound has negative coefficient {coefficient} at degree {degree}")]
    InvalidBound { degree: usize, coefficient: i64 },
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("oracle failed: {0}")]
    Failed(String),
}

/// Failures of the deciders and the enumerator-driven counter.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("selector returned a formula that is neither of its arguments")]
    SelectorContractViolation,
    #[error("tree node `{node}` is longer than the root length {root_len}")]
    EncodingInvariantBroken { node: String, root_len: usize },
    #[error("combiner operand is a constant formula")]
    ConstantOperand,
    #[error("enumerator contract violated: {0}")]
    OracleContractViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
