use serde::Serialize;
use thiserror::Error;
use weier_core::Error as CoreError;

/// Failures of a command-line request.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown variable '{name}' at position {pos} (only x and y are allowed)")]
    UnknownVariable { name: String, pos: usize },

    #[error("{0}")]
    Usage(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Machine-readable error object of the structured output.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Syntax { .. } => "SyntaxError",
            CliError::UnknownVariable { .. } => "UnknownVariable",
            CliError::Usage(_) => "Usage",
            CliError::Verification(_) => "VerificationFailed",
            CliError::Core(e) => match e {
                CoreError::Verification(_) => "VerificationFailed",
                CoreError::NotSmooth(_) => "NotSmooth",
                CoreError::MultipleRoots { .. } => "MultipleRoots",
                CoreError::SameAbscissa { .. } => "SameAbscissa",
                CoreError::PointNotOnCurve { .. } => "PointNotOnCurve",
                CoreError::DegreeDrop { .. } => "DegreeDrop",
                CoreError::VerticalTangent { .. } => "VerticalTangent",
                CoreError::DegeneratePoints { .. } => "DegeneratePoints",
                CoreError::NotInvertible { .. } => "NotInvertible",
                CoreError::Inconsistent { .. } => "Inconsistent",
                CoreError::EvaluationAtPole { .. } => "EvaluationAtPole",
                CoreError::WrongPoleCount { .. } => "WrongPoleCount",
                CoreError::NoRationalPoint => "NoRationalPoint",
                CoreError::RootIndex { .. } => "RootIndex",
                CoreError::HigherOrderPole { .. } => "HigherOrderPole",
                CoreError::IrrationalAbscissaUnsupported(_) => "IrrationalAbscissaUnsupported",
                CoreError::ZeroPolynomial
                | CoreError::NotSquareFree(_)
                | CoreError::ContextMismatch
                | CoreError::ZeroDivision
                | CoreError::SeriesTooShort(_)
                | CoreError::Isolation(_)
                | CoreError::Internal(_) => "Internal",
            },
        }
    }

    /// Process exit code; each domain error has its own.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "VerificationFailed" => 1,
            "Usage" => 2,
            "SyntaxError" => 3,
            "UnknownVariable" => 4,
            "NotSmooth" => 10,
            "MultipleRoots" => 11,
            "SameAbscissa" => 12,
            "PointNotOnCurve" => 13,
            "DegreeDrop" => 14,
            "VerticalTangent" => 15,
            "DegeneratePoints" => 16,
            "NotInvertible" => 17,
            "Inconsistent" => 18,
            "EvaluationAtPole" => 19,
            "WrongPoleCount" => 21,
            "NoRationalPoint" => 22,
            "RootIndex" => 23,
            "HigherOrderPole" => 24,
            "IrrationalAbscissaUnsupported" => 25,
            _ => 20,
        }
    }

    pub fn report(&self) -> ErrorReport {
        let position = match self {
            CliError::Syntax { pos, .. } | CliError::UnknownVariable { pos, .. } => Some(*pos),
            _ => None,
        };
        ErrorReport { kind: self.kind(), message: self.to_string(), exit_code: self.exit_code(), position }
    }
}
