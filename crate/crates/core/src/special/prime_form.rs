use num_complex::Complex64;
use std::f64::consts::PI;

use super::eisenstein::EisensteinTable;
use super::lattice::LatticeTau;
use super::tau::{SeriesTolerance, Tau};
use crate::complex::{I, TWO_PI_I};
use crate::error::{Result, SewingError};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `η(τ) = q^{1/24} ∏(1−qⁿ)`.
pub fn dedekind_eta(tau: Tau, tol: SeriesTolerance) -> Result<Complex64> {
    let t = tau.value();
    let abs_q = (-2.0 * PI * t.im).exp();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut bound = f64::INFINITY;
    for n in 1..=tol.max_terms {
        prod *= 1.0 - (TWO_PI_I * t * n as f64).exp();
        // |log ∏_{m>n}(1−q^m)| ≤ 2|q|^{n+1}/(1−|q|) once |q|^{n+1} ≤ 1/2
        let next = abs_q.powi(n as i32 + 1);
        if next <= 0.5 {
            bound = 2.0 * next / (1.0 - abs_q);
            if bound < tol.abs_tol {
                return Ok((TWO_PI_I * t / 24.0).exp() * prod);
            }
        }
    }
    Err(SewingError::ToleranceNotMet {
        terms: tol.max_terms,
        achieved: bound,
    })
}

/// `θ₁(τ,z) = Σ_n exp(πiτ(n+½)² + (n+½)(z+iπ))`.
pub fn theta1(tau: Tau, z: Complex64, tol: SeriesTolerance) -> Result<Complex64> {
    let t = tau.value();
    let term = |n: i64| {
        let h = n as f64 + 0.5;
        (I * PI * t * h * h + (z + I * PI) * h).exp()
    };
    let center = (z.re / (2.0 * PI * t.im) - 0.5).round() as i64;
    let mut sum = term(center);
    let peak = sum.norm().max(f64::MIN_POSITIVE);
    for j in 1..=tol.max_terms as i64 {
        let a = term(center + j);
        let b = term(center - j);
        sum += a + b;
        if a.norm() + b.norm() < 1e-3 * tol.abs_tol * peak && j > 1 {
            return Ok(sum);
        }
    }
    Err(SewingError::ToleranceNotMet {
        terms: tol.max_terms,
        achieved: (term(center + tol.max_terms as i64)).norm(),
    })
}

/// `K(τ,z) = −iθ₁(τ,z)/η(τ)³`, valid for every `z`.
pub fn prime_form_theta(tau: Tau, z: Complex64, tol: SeriesTolerance) -> Result<Complex64> {
    let eta = dedekind_eta(tau, tol)?;
    Ok(-I * theta1(tau, z, tol)? / (eta * eta * eta))
}

/// `K(τ,z) = z·exp(−Σ_{k≥2} E_k z^k/k)`, valid for `|z| < D(Λ_τ)`.
pub fn prime_form_series(tau: Tau, z: Complex64, tol: SeriesTolerance) -> Result<Complex64> {
    if z == ZERO {
        return Ok(ZERO);
    }
    let d = LatticeTau::new(tau).min_length();
    let r = z.norm() / d;
    if r >= 1.0 {
        return Err(SewingError::InvalidArgument(
            "prime-form series used outside its disc of convergence".into(),
        ));
    }
    let mut m_max = 2usize;
    while 8.0 * r.powi(m_max as i32) / (1.0 - r) > 1e-18 {
        m_max += 2;
        if m_max > tol.max_terms.max(4) {
            return Err(SewingError::ToleranceNotMet {
                terms: m_max,
                achieved: 8.0 * r.powi(m_max as i32),
            });
        }
    }
    let table = EisensteinTable::new(tau, m_max, tol)?;
    let mut sum = ZERO;
    let z2 = z * z;
    let mut zp = z2;
    for k in (2..=m_max).step_by(2) {
        sum += table.get(k)? * zp / k as f64;
        zp *= z2;
    }
    Ok(z * (-sum).exp())
}

/// The elliptic prime form `K(τ,z)`; `K(τ,0) = 0` exactly.
pub fn prime_form(tau: Tau, z: Complex64, tol: SeriesTolerance) -> Result<Complex64> {
    if z == ZERO {
        return Ok(ZERO);
    }
    let d = LatticeTau::new(tau).min_length();
    if z.norm() < 0.5 * d {
        prime_form_series(tau, z, tol)
    } else {
        prime_form_theta(tau, z, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::lattice_min;

    fn tau(re: f64, im: f64) -> Tau {
        Tau::new(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn eta_at_i() {
        // Γ(1/4)/(2π^{3/4}), Γ(1/4) = 3.6256099082219083119
        let expected = 3.625_609_908_221_908_3 / (2.0 * PI.powf(0.75));
        let v = dedekind_eta(tau(0.0, 1.0), SeriesTolerance::default()).unwrap();
        assert!((v.re - expected).abs() < 1e-14 && v.im.abs() < 1e-15);
    }

    #[test]
    fn eta_conjugation_symmetry() {
        let a = dedekind_eta(tau(0.3, 0.8), SeriesTolerance::default()).unwrap();
        let b = dedekind_eta(tau(-0.3, 0.8), SeriesTolerance::default()).unwrap();
        assert!((a.norm() - b.norm()).abs() < 1e-14);
    }

    #[test]
    fn eta_modular_s() {
        // η(−1/τ) = √(−iτ) η(τ)
        let t = tau(0.2, 1.1);
        let s = t.mobius(0, -1, 1, 0).unwrap();
        let lhs = dedekind_eta(s, SeriesTolerance::default()).unwrap();
        let rhs = (-I * t.value()).sqrt() * dedekind_eta(t, SeriesTolerance::default()).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn routes_agree() {
        let tol = SeriesTolerance::default();
        for t in [tau(0.0, 1.0), tau(0.4, 0.7), tau(-0.1, 1.6)] {
            let d = lattice_min(t);
            for (r, phase) in [(0.05, 0.3), (0.2, 2.0), (0.39, -1.2)] {
                let z = Complex64::from_polar(r * d, phase);
                let a = prime_form_series(t, z, tol).unwrap();
                let b = prime_form_theta(t, z, tol).unwrap();
                assert!((a - b).norm() < 1e-10, "{t:?} {z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn small_z_and_odd() {
        let t = tau(0.25, 0.9);
        let tol = SeriesTolerance::default();
        let z = Complex64::new(1e-4, 2e-4);
        assert!((prime_form(t, z, tol).unwrap() / z - 1.0).norm() < 1e-6);
        let w = Complex64::new(0.7, 1.9);
        assert!((prime_form(t, -w, tol).unwrap() + prime_form(t, w, tol).unwrap()).norm() < 1e-12);
        assert_eq!(prime_form(t, ZERO, tol).unwrap(), ZERO);
    }

    #[test]
    fn quasi_period_one() {
        let t = tau(0.1, 1.3);
        let tol = SeriesTolerance::default();
        let z = Complex64::new(0.6, 0.9);
        let a = prime_form(t, z + TWO_PI_I, tol).unwrap();
        let b = prime_form(t, z, tol).unwrap();
        assert!((a + b).norm() < 1e-12);
    }
}
