//! Symmetric `2×2` period matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{re_im, TWO_PI_I};

/// A symmetric `2×2` complex matrix; the upper triangle is stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodMatrix {
    #[serde(with = "re_im")]
    pub omega11: Complex64,
    #[serde(with = "re_im")]
    pub omega12: Complex64,
    #[serde(with = "re_im")]
    pub omega22: Complex64,
}

impl PeriodMatrix {
    pub fn new(omega11: Complex64, omega12: Complex64, omega22: Complex64) -> Self {
        PeriodMatrix {
            omega11,
            omega12,
            omega22,
        }
    }

    pub fn diag(t1: Complex64, t2: Complex64) -> Self {
        PeriodMatrix::new(t1, Complex64::new(0.0, 0.0), t2)
    }

    /// Builds `Ω` from the three values of `2πiΩ`.
    pub fn from_scaled(s11: Complex64, s12: Complex64, s22: Complex64) -> Self {
        PeriodMatrix::new(s11 / TWO_PI_I, s12 / TWO_PI_I, s22 / TWO_PI_I)
    }

    /// `(2πiΩ₁₁, 2πiΩ₁₂, 2πiΩ₂₂)`.
    pub fn scaled(&self) -> [Complex64; 3] {
        [
            self.omega11 * TWO_PI_I,
            self.omega12 * TWO_PI_I,
            self.omega22 * TWO_PI_I,
        ]
    }

    pub fn entries(&self) -> [Complex64; 3] {
        [self.omega11, self.omega12, self.omega22]
    }

    pub fn as_array(&self) -> [[Complex64; 2]; 2] {
        [[self.omega11, self.omega12], [self.omega12, self.omega22]]
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &PeriodMatrix) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Whether `Im Ω` is positive definite.
    pub fn in_siegel_space(&self) -> bool {
        let (a, b, d) = (self.omega11.im, self.omega12.im, self.omega22.im);
        a > 0.0 && a * d - b * b > 0.0
    }
}
