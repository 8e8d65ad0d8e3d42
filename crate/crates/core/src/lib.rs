//! Genus-two period matrices from torus sewing data.

pub mod complex;
pub mod epsilon;
pub mod error;
pub mod formal;
pub mod groups;
pub mod linalg;
pub mod moments;
pub mod newton;
pub mod period;
pub mod rho;
pub mod special;
pub mod sphere;

pub use complex::{format_complex, parse_complex, ComplexValue, JsonComplex, I, TWO_PI_I};
pub use error::{Result, SewingError};
pub use period::PeriodMatrix;
