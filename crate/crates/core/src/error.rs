use thiserror::Error;

use crate::algebra::Flavor;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("flavor mismatch: {left} vs {right}")]
    FlavorMismatch { left: Flavor, right: Flavor },
    #[error("operation `{op}` is not defined for flavor {flavor}")]
    UnsupportedFlavor { op: &'static str, flavor: Flavor },
    #[error("monomial not admissible in flavor {flavor}: {reason}")]
    Inadmissible { flavor: Flavor, reason: String },
    #[error("group element has length {got}, expected {expected}")]
    GroupRank { expected: usize, got: usize },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("no image for generator `{0}`")]
    MissingImage(String),
    #[error("cannot project from {from} to {to}")]
    IncompatibleProjection { from: Flavor, to: Flavor },
    #[error("cannot lift from {from} to {to}")]
    IncompatibleLift { from: Flavor, to: Flavor },
    #[error("formal inverse undefined: term `{0}` has filtration weight 0")]
    ZeroWeightTerm(String),
    #[error("unbounded enumeration: set a word-length bound or an action bound")]
    UnboundedEnumeration,
    #[error("certificate does not verify: {0}")]
    Verification(String),
    #[error("incompatible spec family: {0}")]
    IncompatibleFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
}
