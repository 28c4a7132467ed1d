//! Error type shared across the crate.

use num::BigUint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("cannot factor zero")]
    FactorZero,
    #[error("incomplete factorization: unfactored cofactor {cofactor}")]
    IncompleteFactorization { cofactor: BigUint },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
    #[error("invalid polynomial literal {0:?}")]
    ParsePoly(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("resultant of two zero polynomials")]
    BothZero,
    #[error("discriminant requires degree >= 1")]
    DegreeZeroDiscriminant,
    #[error("too many divisor candidates ({0}) in rational root search")]
    DivisorOverflow(usize),
    #[error("variable {0:?} missing from evaluation assignment")]
    MissingVariable(String),
    #[error("leading coefficient is zero; not a cubic")]
    NotCubic,
    #[error("negative iteration count")]
    NegativeIteration,
    #[error("degenerate critical point: B = 0 gives a single doubled critical point")]
    DegenerateCriticalPoint,
    #[error("collision analysis requires the constant term 1 (the Az^3+Bz family has a fixed collided value)")]
    ZeroConstantTerm,
    #[error("critical points do not collide at iterate {ell}")]
    NoCollision { ell: usize },
    #[error("{0}")]
    UnsupportedRange(String),
    #[error("label {0:?} is not a word over {{0,1,2}}")]
    BadLabel(String),
    #[error("node level {level} with offset {offset} exceeds portrait depth {depth}")]
    OutOfTree { level: usize, offset: usize, depth: usize },
    #[error("sign parameter m must be >= 1")]
    BadSignDepth,
    #[error("ell must be >= 2")]
    BadEll,
    #[error("labels have different levels ({0} vs {1})")]
    LevelMismatch(usize, usize),
    #[error("automorphism is not in Q at the requested level")]
    NotInQ,
    #[error("generators have mismatched depths")]
    DepthMismatch,
    #[error("element set is not closed under composition")]
    NotClosed,
    #[error("character is not multiplicative: {0}")]
    BadCharacter(String),
    #[error("inconsistent S-data: {0}")]
    InconsistentSData(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("preperiodic orbit: {0}")]
    PreperiodicOrbit(String),
    #[error("degenerate value: {0}")]
    DegenerateValue(String),
    #[error("invalid portrait serialization: {0}")]
    BadPortrait(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
