use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::TWO_PI_I;
use crate::error::{Result, SewingError};

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::complex::JsonComplex", into = "crate::complex::JsonComplex")]
pub struct Tau(Complex64);

impl Tau {
    pub fn new(value: Complex64) -> Result<Self> {
        if !(value.im > 0.0) || !value.re.is_finite() || !value.im.is_finite() {
            return Err(SewingError::InvalidArgument(format!(
                "tau must lie in the upper half-plane, got {value}"
            )));
        }
        Ok(Tau(value))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    /// `q = exp(2πiτ)`.
    pub fn q(self) -> Complex64 {
        (TWO_PI_I * self.0).exp()
    }

    /// `γτ = (aτ+b)/(cτ+d)`.
    pub fn mobius(self, a: i64, b: i64, c: i64, d: i64) -> Result<Tau> {
        let t = self.0;
        Tau::new((t * a as f64 + b as f64) / (t * c as f64 + d as f64))
    }
}

impl TryFrom<crate::complex::JsonComplex> for Tau {
    type Error = SewingError;
    fn try_from(v: crate::complex::JsonComplex) -> Result<Self> {
        Tau::new(v.0)
    }
}

impl From<Tau> for crate::complex::JsonComplex {
    fn from(t: Tau) -> Self {
        crate::complex::JsonComplex(t.0)
    }
}

/// Truncation control for q-series and other adaptive sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTolerance {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl SeriesTolerance {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || max_terms == 0 {
            return Err(SewingError::InvalidArgument(
                "tolerance must be positive and max_terms at least 1".into(),
            ));
        }
        Ok(SeriesTolerance { abs_tol, max_terms })
    }
}

impl Default for SeriesTolerance {
    fn default() -> Self {
        SeriesTolerance {
            abs_tol: 1e-14,
            max_terms: 10_000,
        }
    }
}
