use num_complex::Complex64;

use super::eisenstein::{ln_factorial, EisensteinTable};
use super::lattice::LatticeTau;
use super::tau::{SeriesTolerance, Tau};
use crate::complex::TWO_PI_I;
use crate::error::{Result, SewingError};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest derivative order evaluated through the polynomial in `u = 1/(e^z−1)`;
/// higher orders use partial fractions, which avoid cancellation.
const POLY_MAX_ORDER: usize = 6;

/// Coefficients of `d^j/dz^j u` as a polynomial in `u`, for `j ≤ POLY_MAX_ORDER`.
fn derivative_polys() -> Vec<Vec<f64>> {
    let mut polys = vec![vec![0.0, 1.0]];
    for j in 0..POLY_MAX_ORDER {
        let c = &polys[j];
        let mut next = vec![0.0; c.len() + 1];
        for i in 1..next.len() {
            let a = if i < c.len() { c[i] } else { 0.0 };
            let b = c[i - 1];
            next[i] = -(i as f64) * a - (i as f64 - 1.0) * b;
        }
        polys.push(next);
    }
    polys
}

fn horner(coeffs: &[f64], u: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * u + c)
}

/// `(−1)^{k−1}/(k−1)! · d^{k−1}/dz^{k−1} [1/(e^z−1)]`, with the `k = 1` value being `u` itself.
fn elementary_part(k: usize, z: Complex64, polys: &[Vec<f64>]) -> Complex64 {
    let j = k - 1;
    if j > POLY_MAX_ORDER {
        // Σ_n (z − 2πin)^{−k}
        let two_pi = 2.0 * std::f64::consts::PI;
        let center = (z.im / two_pi).round() as i64;
        let mut sum = ZERO;
        let mut n = 0i64;
        loop {
            let a = (z - TWO_PI_I * (center + n) as f64).powi(-(k as i32));
            let b = if n > 0 {
                (z - TWO_PI_I * (center - n) as f64).powi(-(k as i32))
            } else {
                ZERO
            };
            sum += a + b;
            if n > 2 && (a.norm() + b.norm()) < 1e-18 * sum.norm() {
                break;
            }
            n += 1;
            if n > 100_000 {
                break;
            }
        }
        return sum;
    }
    let (zz, reflect) = if z.re < 0.0 { (-z, true) } else { (z, false) };
    let u = Complex64::new(1.0, 0.0) / (zz.exp() - 1.0);
    let mut d = horner(&polys[j], u);
    if reflect {
        d = if j == 0 {
            -1.0 - d
        } else if j % 2 == 0 {
            -d
        } else {
            d
        };
    }
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    d * sign / ln_factorial(j).exp()
}

/// Values `P_1(τ,z), …, P_max(τ,z)` at one point `z ∉ Λ_τ`.
#[derive(Debug, Clone)]
pub struct EllipticTable {
    values: Vec<Complex64>,
}

impl EllipticTable {
    pub fn new(tau: Tau, z: Complex64, max_k: usize, tol: SeriesTolerance) -> Result<Self> {
        if max_k == 0 {
            return Err(SewingError::InvalidArgument("P_k requires k >= 1".into()));
        }
        let lat = LatticeTau::new(tau);
        let d = lat.min_length();
        let near = lat.nearest(z);
        let zn = z - near.value;
        if zn.norm() <= 1e-13 * d {
            return Err(SewingError::Pole);
        }
        let mut values = vec![ZERO; max_k + 1];
        if zn.norm() < 0.5 * d {
            laurent(tau, zn, d, max_k, tol, &mut values)?;
            values[1] -= near.m as f64;
        } else {
            let (zr, m, _) = lat.reduce_tau_basis(z);
            q_expansion(tau, zr, max_k, tol, &mut values)?;
            values[1] -= m as f64;
        }
        Ok(EllipticTable { values })
    }

    pub fn max_k(&self) -> usize {
        self.values.len() - 1
    }

    /// `P_k`; `P_0` is not stored.
    pub fn get(&self, k: usize) -> Result<Complex64> {
        if k == 0 || k > self.max_k() {
            return Err(SewingError::Range {
                index: k,
                max: self.max_k(),
            });
        }
        Ok(self.values[k])
    }
}

fn ln_binom(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `P_k(z) = z^{−k} + (−1)^k Σ_{m≥k} C(m−1,k−1) E_m z^{m−k}`, valid for `|z| < D`.
fn laurent(tau: Tau, z: Complex64, d: f64, max_k: usize, tol: SeriesTolerance, out: &mut [Complex64]) -> Result<()> {
    let r = z.norm() / d;
    // |E_m| ≤ 8 D^{−m} for m ≥ 4 is ample; find the last m whose term can matter.
    let mut m_max = max_k + 2;
    loop {
        let ln_term = ln_binom(m_max - 1, max_k - 1) + (m_max as f64) * r.ln() + 8f64.ln();
        let ratio = (m_max as f64 / (m_max + 1 - max_k) as f64) * r;
        if ln_term < (1e-18f64).ln() && ratio < 1.0 {
            break;
        }
        m_max += 1;
        if m_max > 4000 {
            return Err(SewingError::ToleranceNotMet {
                terms: m_max,
                achieved: ln_term.exp(),
            });
        }
    }
    let table = EisensteinTable::new(tau, m_max, tol)?;
    for k in 1..=max_k {
        let mut sum = ZERO;
        let mut zp = Complex64::new(1.0, 0.0);
        for m in k..=m_max {
            if m >= 2 && m % 2 == 0 {
                sum += table.get(m)? * zp * ln_binom(m - 1, k - 1).exp();
            }
            zp *= z;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        out[k] = z.powi(-(k as i32)) + sum * sign;
    }
    Ok(())
}

/// The `q_z = e^z` expansion, valid for `|q| < |q_z| < |q|^{−1}`.
fn q_expansion(tau: Tau, z: Complex64, max_k: usize, tol: SeriesTolerance, out: &mut [Complex64]) -> Result<()> {
    let polys = derivative_polys();
    let t = tau.value();
    let ln_abs_q = -2.0 * std::f64::consts::PI * t.im;
    let abs_q = ln_abs_q.exp();
    let rho_ln = ln_abs_q + z.re.abs();
    if rho_ln >= 0.0 {
        return Err(SewingError::InvalidArgument(
            "q_z expansion used outside its annulus".into(),
        ));
    }
    let rho = rho_ln.exp();
    for k in 1..=max_k {
        let elem = elementary_part(k, z, &polys);
        let km1 = (k - 1) as f64;
        let ln_pref = -ln_factorial(k - 1);
        let parity = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let mut sum = ZERO;
        let mut done = false;
        let mut bound = f64::INFINITY;
        for n in 1..=tol.max_terms {
            let nf = n as f64;
            let qn = (TWO_PI_I * t * nf).exp();
            let lambert = qn / (1.0 - qn);
            let qz = (z * nf).exp();
            let qzi = (-z * nf).exp();
            sum += lambert * (qz - qzi * parity) * (ln_pref + km1 * nf.ln()).exp();
            let ratio = ((nf + 2.0) / (nf + 1.0)).powf(km1) * rho;
            if ratio < 1.0 {
                let next = (ln_pref + km1 * (nf + 1.0).ln() + (nf + 1.0) * rho_ln).exp();
                bound = 2.0 * next / (1.0 - ratio) / (1.0 - abs_q);
                let scale = (elem - sum).norm().max(f64::MIN_POSITIVE);
                if bound < tol.abs_tol * scale {
                    done = true;
                    break;
                }
            }
        }
        if !done {
            return Err(SewingError::ToleranceNotMet {
                terms: tol.max_terms,
                achieved: bound,
            });
        }
        let half = if k == 1 { 0.5 } else { 0.0 };
        let sign = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
        out[k] = elem + half * sign - sum * sign;
    }
    Ok(())
}

/// `P_k(τ,z)` for `k ≥ 1`.
pub fn weierstrass_p(k: usize, tau: Tau, z: Complex64, tol: SeriesTolerance) -> Result<Complex64> {
    if k == 0 {
        return Err(SewingError::InvalidArgument("P_k requires k >= 1".into()));
    }
    EllipticTable::new(tau, z, k, tol)?.get(k)
}

/// Reference evaluation `P_k(τ,z) = Σ_λ (z−λ)^{−k}` for `k ≥ 3`, by direct lattice summation.
pub fn weierstrass_p_lattice_sum(k: usize, tau: Tau, z: Complex64, radius: i64) -> Result<Complex64> {
    if k < 3 {
        return Err(SewingError::InvalidArgument(
            "lattice sum converges absolutely only for k >= 3".into(),
        ));
    }
    let lat = LatticeTau::new(tau);
    let near = lat.nearest(z);
    let zn = z - near.value;
    if zn.norm() <= 1e-13 * lat.min_length() {
        return Err(SewingError::Pole);
    }
    let (b1, b2) = lat.reduced_basis();
    let mut sum = ZERO;
    // accumulate shells from the outside in to limit rounding
    for s in (0..=radius).rev() {
        let mut shell = ZERO;
        for i in -s..=s {
            for j in -s..=s {
                if i.abs().max(j.abs()) != s {
                    continue;
                }
                let l = b1.value * i as f64 + b2.value * j as f64;
                shell += (zn - l).powi(-(k as i32));
            }
        }
        sum += shell;
    }
    Ok(sum)
}
