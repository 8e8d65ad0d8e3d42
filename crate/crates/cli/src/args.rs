//! Flag parsers and the mapping from library errors to exit codes.

use num_complex::Complex64;
use sewing_core::special::Tau;
use sewing_core::{parse_complex, SewingError};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

pub fn complex(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

/// A complex value with positive imaginary part.
pub fn tau(s: &str) -> Result<Tau, String> {
    Tau::new(complex(s)?).map_err(|e| e.to_string())
}

pub fn order(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("{s:?} is not a non-negative integer"))?;
    if n == 0 {
        return Err("order must be at least 1".into());
    }
    Ok(n)
}

pub fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(format!("{s:?} must be positive and finite"));
    }
    Ok(x)
}

/// A failure with the message to print and the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl From<SewingError> for Failure {
    fn from(e: SewingError) -> Self {
        let code = match e {
            SewingError::OutOfDomain { .. }
            | SewingError::Pole
            | SewingError::NearDegenerate { .. }
            | SewingError::ActionSingular => EXIT_DOMAIN,
            SewingError::Divergence { .. }
            | SewingError::DomainExit { .. }
            | SewingError::ToleranceNotMet { .. }
            | SewingError::TruncationTooCoarse { .. }
            | SewingError::BudgetExceeded { .. } => EXIT_CONVERGENCE,
            SewingError::InvalidArgument(_)
            | SewingError::Range { .. }
            | SewingError::OrderOutOfRange { .. }
            | SewingError::UnassignedGenerator(_) => EXIT_PARSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("cannot write output: {e}"))
    }
}
