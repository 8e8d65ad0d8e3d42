use num_complex::Complex64;

use super::eisenstein::eisenstein;
use super::tau::{SeriesTolerance, Tau};
use super::weierstrass::weierstrass_p;
use crate::error::{Result, SewingError};

/// Largest `k` and `l` accepted by the C/D coefficients.
pub const MAX_COEFF_INDEX: usize = 256;

/// `(−1)^{k+1}(k+l−1)!/((k−1)!(l−1)!)` as a product of ratios.
pub fn combinatorial_factor(k: usize, l: usize) -> Result<f64> {
    for idx in [k, l] {
        if idx == 0 {
            return Err(SewingError::InvalidArgument("indices start at 1".into()));
        }
        if idx > MAX_COEFF_INDEX {
            return Err(SewingError::Range {
                index: idx,
                max: MAX_COEFF_INDEX,
            });
        }
    }
    // (k+l−1)!/((k−1)!(l−1)!) = l · C(k+l−1, k−1)
    let (small, large) = if k <= l { (k, l) } else { (l, k) };
    let mut v = 1.0f64;
    for j in 1..small {
        v = v * (large + j) as f64 / j as f64;
    }
    v *= large as f64;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * v)
}

/// `C(k,l,τ) = (−1)^{k+1}(k+l−1)!/((k−1)!(l−1)!)·E_{k+l}(τ)`.
pub fn c_coeff(k: usize, l: usize, tau: Tau, tol: SeriesTolerance) -> Result<Complex64> {
    let f = combinatorial_factor(k, l)?;
    Ok(eisenstein(k + l, tau, tol)? * f)
}

/// `D(k,l,τ,z) = (−1)^{k+1}(k+l−1)!/((k−1)!(l−1)!)·P_{k+l}(τ,z)`.
pub fn d_coeff(k: usize, l: usize, tau: Tau, z: Complex64, tol: SeriesTolerance) -> Result<Complex64> {
    let f = combinatorial_factor(k, l)?;
    Ok(weierstrass_p(k + l, tau, z, tol)? * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau(re: f64, im: f64) -> Tau {
        Tau::new(Complex64::new(re, im)).unwrap()
    }

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|j| j as f64).product()
    }

    #[test]
    fn factor_matches_factorials() {
        for k in 1..=12 {
            for l in 1..=12 {
                let direct = factorial(k + l - 1) / (factorial(k - 1) * factorial(l - 1));
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                let f = combinatorial_factor(k, l).unwrap();
                assert!((f - sign * direct).abs() <= 1e-12 * direct);
            }
        }
        assert!(combinatorial_factor(128, 128).unwrap().is_finite());
        assert!(matches!(combinatorial_factor(257, 1), Err(SewingError::Range { .. })));
    }

    #[test]
    fn c_symmetry_and_small_cases() {
        let t = tau(0.2, 0.9);
        let tol = SeriesTolerance::default();
        assert_eq!(c_coeff(1, 1, t, tol).unwrap(), eisenstein(2, t, tol).unwrap());
        assert_eq!(c_coeff(1, 2, t, tol).unwrap(), Complex64::new(0.0, 0.0));
        for k in 1..=10 {
            for l in 1..=10 {
                let a = c_coeff(k, l, t, tol).unwrap();
                let b = c_coeff(l, k, t, tol).unwrap();
                assert!((a - b).norm() <= 1e-12 * a.norm());
            }
        }
    }

    #[test]
    fn d_parity() {
        let t = tau(-0.1, 1.1);
        let z = Complex64::new(0.9, 0.4);
        let tol = SeriesTolerance::default();
        assert_eq!(d_coeff(1, 1, t, z, tol).unwrap(), weierstrass_p(2, t, z, tol).unwrap());
        assert!((d_coeff(2, 1, t, z, tol).unwrap() + 2.0 * weierstrass_p(3, t, z, tol).unwrap()).norm() < 1e-14);
        for k in 1..=6 {
            for l in 1..=6 {
                let a = d_coeff(k, l, t, z, tol).unwrap();
                let b = d_coeff(l, k, t, z, tol).unwrap();
                let s = if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
                assert!((a - b * s).norm() <= 1e-12 * a.norm());
            }
        }
    }
}
