use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("arity mismatch for predicate {name}: expected {expected}, found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("cyclic predicate definition through {0}")]
    CyclicDefinition(String),
    #[error("predicate {0} has no evaluable meaning")]
    OpaquePredicate(String),
    #[error("formula contains a predicate atom {0}")]
    PredicatePresent(String),
    #[error("formula has free variables: {0}")]
    FreeVariables(String),
    #[error("formula contains an order atom: {0}")]
    OrderAtom(String),
    #[error("formula is not quantifier-free")]
    Quantified,
    #[error("point outside domain: {0}")]
    Domain(String),
    #[error("bounded evaluation unstable at {0}")]
    Unknown(String),
    #[error("integer overflow during bounded evaluation")]
    Overflow,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
