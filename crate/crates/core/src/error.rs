use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("variable {0} does not belong to signature {1}")]
    UnknownVariable(String, String),
    #[error("operation requires {expected}, got signature {got}")]
    WrongSignature { expected: &'static str, got: String },
    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(String, String),
    #[error("formal variable {0} is already bound in an operand")]
    VariableCollision(String),
    #[error("inconsistent parities in multiplication table: {0}")]
    InconsistentParity(String),
    #[error("linear map is not defined on {0}")]
    UndefinedMap(String),
    #[error("no realization registered for {0}")]
    UnregisteredAlgebra(String),
    #[error("closure failure: {0}")]
    ClosureFailure(String),
    #[error("span bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("eigenspace has rank ({even}|{odd}), expected ({want_even}|{want_odd})")]
    EigenspaceRank {
        even: usize,
        odd: usize,
        want_even: usize,
        want_odd: usize,
    },
    #[error("no admissible element found: {0}")]
    NoAdmissible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
