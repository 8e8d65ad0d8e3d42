//! Complex scalar helpers shared by every module.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SewingError};

pub type ComplexValue = Complex64;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `2πi`, the scale of the period lattice.
pub const TWO_PI_I: Complex64 = Complex64 {
    re: 0.0,
    im: 2.0 * std::f64::consts::PI,
};

#[derive(Serialize, Deserialize)]
struct ReIm {
    re: f64,
    im: f64,
}

/// Serde adapter writing a complex number as `{"re": .., "im": ..}`.
pub mod re_im {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReIm { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        let v = ReIm::deserialize(d)?;
        Ok(Complex64::new(v.re, v.im))
    }
}

/// Wrapper that serializes as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JsonComplex(#[serde(with = "re_im")] pub Complex64);

impl From<Complex64> for JsonComplex {
    fn from(z: Complex64) -> Self {
        JsonComplex(z)
    }
}

/// Parses `a+bi`, `a-bi`, `bi`, `a`, `i`, `-i`, optionally wrapped in parentheses.
/// `j` is accepted in place of `i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || SewingError::InvalidArgument(format!("cannot parse complex number {text:?}"));
    let mut s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.starts_with('(') && s.ends_with(')') && s.len() >= 2 {
        s = s[1..s.len() - 1].to_string();
    }
    let s = s.replace('j', "i");
    if s.is_empty() {
        return Err(bad());
    }
    let value = if let Some(body) = s.strip_suffix('i') {
        // Split at the last sign that is not part of an exponent and not leading.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx] as char;
            if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_part.is_empty() {
            0.0
        } else {
            re_part.parse::<f64>().map_err(|_| bad())?
        };
        let im = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse::<f64>().map_err(|_| bad())?,
        };
        Complex64::new(re, im)
    } else {
        Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0)
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

/// Formats a complex number in the `a+bi` syntax accepted by [`parse_complex`].
pub fn format_complex(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
