use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("square classes belong to different groups")]
    MixedGroups,
    #[error("unknown square-class label `{0}`")]
    UnknownLabel(String),
    #[error("intersection of an empty list of sets")]
    EmptyIntersection,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token at offset {0}")]
    UnexpectedToken(usize),
    #[error("division by a non-constant or zero expression")]
    BadDivision,
    #[error("exponent must be a small non-negative integer")]
    BadExponent,
    #[error("`{0}` is not a polynomial")]
    NotPolynomial(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("the zero scalar has no square class")]
    ZeroScalar,
    #[error("contradiction: no class remains for `{0}`")]
    ContradictionFound(String),
    #[error("every branch of the hypotheses is contradictory")]
    InconsistentHypotheses,
    #[error("missing fact for `{0}`")]
    MissingFact(String),
    #[error("unsupported substitution scalar `{0}`")]
    BadSubstitution(String),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("fewer than 3 unit bits of precision remain")]
    PrecisionExhausted,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no square class")]
    Zero,
    #[error("Hilbert symbol search disagrees with the lattice for ({a}, {b})")]
    OracleMismatch { a: String, b: String },
    #[error("the trivial class has no quadratic extension")]
    TrivialClass,
    #[error("`{0}` is not a rational number")]
    BadRational(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("unknown theorem `{0}`")]
    UnknownTheorem(String),
    #[error("unknown table `{0}`")]
    UnknownTable(String),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}
