//! Error types for the library. Numeric certification failures are kept
//! separate from algebraic errors so callers can tell a precision problem
//! from a genuine math failure.

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum WordError {
    #[error("genus {genus} is below 2; the hyperbolic model needs g >= 2")]
    GenusTooSmall { genus: u16 },
    #[error("letter {letter} out of range for genus {genus}")]
    LetterOutOfRange { letter: i16, genus: u16 },
    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: u16, right: u16 },
    #[error("word length {len} exceeds the cap {cap}")]
    TooLong { len: usize, cap: usize },
    #[error("cannot parse word token `{token}`")]
    BadToken { token: String },
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MapError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("constructed automorphism does not fix the relator: c maps to `{image}`")]
    RelatorNotFixed { image: String },
    #[error("forward and backward images are not inverse on generator {index}")]
    NotInverse { index: usize },
    #[error("point-push descent check failed on generator {index}")]
    DescentFailed { index: usize },
    #[error("invalid generator letter {letter}")]
    BadGenerator { letter: i16 },
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum RepError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("generator {index} fails |trace| > 2: trace {trace}")]
    NotHyperbolic { index: usize, trace: f64 },
    #[error("determinant of generator {index} drifted to {det}")]
    BadDeterminant { index: usize, det: f64 },
    #[error("relator residual {residual} exceeds tolerance {tol}")]
    RelatorResidual { residual: f64, tol: f64 },
    #[error("euler number of the built representation is {found}, expected {expected}")]
    EulerMismatch { found: i64, expected: i64 },
    #[error("matrix is elliptic; no boundary fixed point")]
    EllipticFixedPoint,
    #[error("matrix has non-positive determinant")]
    NonPositiveDet,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LiftError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("word length {len} exceeds the evaluation budget {budget}")]
    BudgetExceeded { len: usize, budget: usize },
    #[error("integer certification failed: residual {residual} for {what}")]
    CertificationFailed { what: &'static str, residual: f64 },
    #[error("precision exhausted resolving {what} even in extended precision")]
    PrecisionExhausted { what: &'static str },
    #[error("euler cocycle value {value} outside {{-1,0,1}}")]
    TauOutOfRange { value: i64 },
}

impl LiftError {
    /// True when the failure is numeric (certification / precision), as
    /// opposed to an algebraic precondition.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            LiftError::CertificationFailed { .. } | LiftError::PrecisionExhausted { .. }
        )
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CocycleError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error("additivity violated: R(phi)({alpha} . {beta}) != R(phi)({alpha}) + R(phi)({beta})")]
    AdditivityViolated { alpha: String, beta: String },
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FieldError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("field angles must be pairwise distinct: ends {first} and {second} coincide")]
    AngleCollision { first: usize, second: usize },
    #[error("fatgraph boundary word `{found}` is not a rotation of the relator or its inverse")]
    BadBoundary { found: String },
    #[error("turning sum {ticks}/{per_turn} of a closed loop is not an integer number of turns")]
    NonIntegerTurning { ticks: i64, per_turn: i64 },
}
