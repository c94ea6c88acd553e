use thiserror::Error;

use crate::exact::UPoly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the kernel can report.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("linear system is inconsistent (row {row})")]
    Inconsistent { row: usize },

    #[error("polynomial {0} is not square-free")]
    NotSquareFree(String),

    #[error("tower elements belong to unrelated contexts")]
    ContextMismatch,

    #[error("division by zero")]
    ZeroDivision,

    #[error("element is a zero divisor in the tower ring: {detail}")]
    NotInvertible {
        /// A nontrivial factor of a defining modulus, when the failure
        /// happened in a single generator.
        factor: Option<UPoly>,
        detail: String,
    },

    #[error("curve is not smooth: {0}")]
    NotSmooth(String),

    #[error("section over x = {x} has multiple roots")]
    MultipleRoots { x: String },

    #[error("section over x = {x} drops degree (leading coefficient vanishes)")]
    DegreeDrop { x: String },

    #[error("vertical tangent (f_y = 0) at the point over x = {x}")]
    VerticalTangent { x: String },

    #[error("both poles lie over the same abscissa x = {x}")]
    SameAbscissa { x: String },

    #[error("point over x = {x} does not lie on the curve")]
    PointNotOnCurve { x: String },

    #[error("abscissa {0} is not rational; only rational abscissas are supported")]
    IrrationalAbscissaUnsupported(String),

    #[error("pole of order {order} at the point over x = {x}")]
    HigherOrderPole { x: String, order: i64 },

    #[error("cannot evaluate at a pole (x = {x})")]
    EvaluationAtPole { x: String },

    #[error("the chosen poles are not in general position (singular {size}x{size} system)")]
    DegeneratePoints { size: usize },

    #[error("expected {expected} additional poles (the genus), got {got}")]
    WrongPoleCount { expected: usize, got: usize },

    #[error("residue verification failed: {0}")]
    Verification(String),

    #[error("no rational point found on the conic within the search bound")]
    NoRationalPoint,

    #[error("root index {index} out of range for a section with {count} roots")]
    RootIndex { index: usize, count: usize },

    #[error("series truncated too early: {0}")]
    SeriesTooShort(String),

    #[error("root isolation failed: {0}")]
    Isolation(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
