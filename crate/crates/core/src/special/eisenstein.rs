use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::f64::consts::PI;

use super::bernoulli::bernoulli;
use super::tau::{SeriesTolerance, Tau};
use crate::complex::TWO_PI_I;
use crate::error::{Result, SewingError};

/// `ln((n)!)` by direct summation.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|j| (j as f64).ln()).sum()
}

/// Constant term `−B_k/k!` of `E_k`; zero for odd `k`.
pub fn eisenstein_constant(k: usize) -> f64 {
    if k % 2 == 1 || k == 0 {
        return 0.0;
    }
    if k <= 30 {
        let b = bernoulli(k).expect("even k");
        let value = b.to_f64().expect("finite Bernoulli number");
        return -value / ln_factorial(k).exp();
    }
    // −B_k/k! = 2ζ(k)(−1)^{k/2}/(2π)^k
    let zeta: f64 = (1..=12).map(|n| (n as f64).powi(-(k as i32))).sum();
    let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign * 2.0 * zeta * (-(k as f64) * (2.0 * PI).ln()).exp()
}

/// `E_k(τ) = −B_k/k! + (2/(k−1)!) Σ σ_{k−1}(n) qⁿ`, summed in Lambert form.
///
/// The sum stops once the geometric tail bound falls below
/// `abs_tol·|−B_k/k!|`, i.e. the tolerance is relative to the constant term.
pub fn eisenstein(k: usize, tau: Tau, tol: SeriesTolerance) -> Result<Complex64> {
    if k < 2 {
        return Err(SewingError::InvalidArgument(format!(
            "Eisenstein series requires k >= 2, got {k}"
        )));
    }
    if k % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let c = eisenstein_constant(k);
    let target = tol.abs_tol * c.abs();
    let t = tau.value();
    let abs_q = (-2.0 * PI * t.im).exp();
    let ln_abs_q = -2.0 * PI * t.im;
    let ln_pref = 2f64.ln() - ln_factorial(k - 1);
    let km1 = (k - 1) as f64;

    let mut sum = Complex64::new(0.0, 0.0);
    let mut bound = f64::INFINITY;
    for n in 1..=tol.max_terms {
        let nf = n as f64;
        let qn = (TWO_PI_I * t * nf).exp();
        let term =
            (Complex64::new(ln_pref + km1 * nf.ln(), 0.0) + TWO_PI_I * t * nf).exp() / (Complex64::new(1.0, 0.0) - qn);
        sum += term;
        let ratio = ((nf + 2.0) / (nf + 1.0)).powf(km1) * abs_q;
        if ratio < 1.0 {
            let next = (ln_pref + km1 * (nf + 1.0).ln() + (nf + 1.0) * ln_abs_q).exp();
            bound = next / (1.0 - ratio) / (1.0 - abs_q);
            if bound < target {
                return Ok(sum + c);
            }
        }
    }
    Err(SewingError::ToleranceNotMet {
        terms: tol.max_terms,
        achieved: bound,
    })
}

/// `E_0, …, E_max` at a fixed `τ`, with `E_0 = E_1 = 0`.
#[derive(Debug, Clone)]
pub struct EisensteinTable {
    tau: Tau,
    values: Vec<Complex64>,
}

impl EisensteinTable {
    pub fn new(tau: Tau, max_k: usize, tol: SeriesTolerance) -> Result<Self> {
        let mut values = vec![Complex64::new(0.0, 0.0); max_k + 1];
        for k in (2..=max_k).step_by(2) {
            values[k] = eisenstein(k, tau, tol)?;
        }
        Ok(EisensteinTable { tau, values })
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    pub fn max_k(&self) -> usize {
        self.values.len() - 1
    }

    /// `E_k`, or an error beyond the table.
    pub fn get(&self, k: usize) -> Result<Complex64> {
        self.values.get(k).copied().ok_or(SewingError::Range {
            index: k,
            max: self.max_k(),
        })
    }
}
