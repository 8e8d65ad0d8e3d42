//! Sphere self-sewing models: the simple `q`-sewing, the Catalan sewing,
//! the sums `S_{n,k}`, and `E₂` from Catalan data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::TWO_PI_I;
use crate::error::{Result, SewingError};
use crate::linalg::{solve_id_minus, solve_id_minus_vec, CMatrix, CVector};
use crate::moments::{a_matrix, det_id_minus, sphere_moments, x_blocks, BlockMomentMatrix, MomentMatrix};
use crate::special::{dedekind_eta, SeriesTolerance, Tau};

/// A Catalan parameter `|χ| < 1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatalanChi {
    #[serde(with = "crate::complex::re_im")]
    pub chi: Complex64,
}

impl CatalanChi {
    pub fn new(chi: Complex64) -> Result<Self> {
        if !(chi.norm() < 0.25) {
            return Err(SewingError::OutOfDomain {
                margin: 4.0 * chi.norm(),
            });
        }
        Ok(CatalanChi { chi })
    }
}

/// Catalan number `(1/n)·C(2n, n+1)`.
pub fn catalan_number(n: u64) -> u64 {
    // C_n = C(2n,n)/(n+1), and (1/n)C(2n,n+1) equals the same value
    let mut c: u64 = 1;
    for i in 0..n {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// `f(χ) = (1−√(1−4χ))/(2χ) − 1`, the solution of `χ = f/(1+f)²` with `f(0) = 0`.
pub fn catalan_f(c: CatalanChi) -> Complex64 {
    let chi = c.chi;
    if chi.norm() < 1e-3 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut p = chi;
        for n in 1..=14u64 {
            sum += p * catalan_number(n) as f64;
            p *= chi;
        }
        return sum;
    }
    (1.0 - (1.0 - 4.0 * chi).sqrt()) / (2.0 * chi) - 1.0
}

/// `N`-th truncation of the continued fraction `F = 1/(1 − χF)`, starting from `F₁ = 1`.
pub fn continued_fraction(chi: Complex64, n: usize) -> Complex64 {
    let mut f = Complex64::new(1.0, 0.0);
    for _ in 1..n {
        f = 1.0 / (1.0 - chi * f);
    }
    f
}

fn ln_binom(n: usize, k: usize) -> f64 {
    let lf = |m: usize| (2..=m).map(|j| (j as f64).ln()).sum::<f64>();
    lf(n) - lf(k) - lf(n - k)
}

/// The map `(Tg)(k) = Σ_{m≤M} χ^m C(k+m−1, m) g(m)` on vectors indexed by `k = 1..M`.
fn catalan_operator(chi: Complex64, m_max: usize) -> CMatrix {
    let mut powers = vec![Complex64::new(1.0, 0.0); m_max + 1];
    for m in 1..=m_max {
        powers[m] = powers[m - 1] * chi;
    }
    CMatrix::from_fn(m_max, m_max, |i, j| {
        let (k, m) = (i + 1, j + 1);
        powers[m] * ln_binom(k + m - 1, m).exp()
    })
}

/// `S_{n,k}(χ)` for `n = 1..=n_max` and a fixed `k`, each index summed to `m_max`.
pub fn s_nk_sequence(n_max: usize, k: usize, chi: Complex64, m_max: usize) -> Result<Vec<Complex64>> {
    if n_max == 0 || k == 0 || k > m_max {
        return Err(SewingError::InvalidArgument("need n, k >= 1 and k <= M".into()));
    }
    let t = catalan_operator(chi, m_max);
    let mut g = CVector::from_element(m_max, Complex64::new(1.0, 0.0));
    let mut out = vec![g[k - 1]];
    for _ in 1..n_max {
        g = &t * &g;
        out.push(g[k - 1]);
    }
    Ok(out)
}

/// `S_{n,k}(χ)` with every summation index running to `m_max`.
pub fn s_nk(n: usize, k: usize, chi: Complex64, m_max: usize) -> Result<Complex64> {
    Ok(*s_nk_sequence(n, k, chi, m_max)?.last().expect("non-empty"))
}

/// Residuals of the simple sphere self-sewing with modulus `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleTorusReport {
    #[serde(with = "crate::complex::re_im")]
    pub det: Complex64,
    #[serde(with = "crate::complex::re_im")]
    pub product: Complex64,
    /// `max |(I−R)(k,l) − δ_kl(1−q^k)|`.
    pub diagonal_residual: f64,
    /// `|det(I−R) − ∏(1−q^k)²|`.
    pub product_residual: f64,
    /// `|det(I−R) − q^{−1/12}η(τ)²|`, absent for `q = 0`.
    pub eta_residual: Option<f64>,
    pub order: usize,
}

/// Simple sewing data with `I−R = diag(1−q^k)` on both blocks.
pub fn simple_sphere_moments(q: Complex64, n: usize) -> BlockMomentMatrix {
    let d = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            q.powu(i as u32 + 1)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    BlockMomentMatrix {
        order: n,
        blocks: [[d.clone(), CMatrix::zeros(n, n)], [CMatrix::zeros(n, n), d]],
    }
}

pub fn torus_modulus_simple(q: Complex64, n: usize) -> Result<SimpleTorusReport> {
    if !(q.norm() < 1.0) {
        return Err(SewingError::OutOfDomain { margin: q.norm() });
    }
    let r = simple_sphere_moments(q, n);
    let flat = r.flatten();
    let id_minus = CMatrix::identity(2 * n, 2 * n) - &flat;
    let mut diagonal_residual: f64 = 0.0;
    for i in 0..2 * n {
        for j in 0..2 * n {
            let expected = if i == j {
                1.0 - q.powu((i % n) as u32 + 1)
            } else {
                Complex64::new(0.0, 0.0)
            };
            diagonal_residual = diagonal_residual.max((id_minus[(i, j)] - expected).norm());
        }
    }
    let det = det_id_minus(&r)?.det;
    let product: Complex64 = (1..=n).map(|k| (1.0 - q.powu(k as u32)).powu(2)).product();
    let eta_residual = if q.norm() == 0.0 {
        None
    } else {
        let tau = Tau::new(q.ln() / TWO_PI_I)?;
        let eta = dedekind_eta(tau, SeriesTolerance::default())?;
        let reference = (-tau.value() * TWO_PI_I / 12.0).exp() * eta * eta;
        Some((det - reference).norm())
    };
    Ok(SimpleTorusReport {
        det,
        product,
        diagonal_residual,
        product_residual: (det - product).norm(),
        eta_residual,
        order: n,
    })
}

/// `2πiτ = log χ − β⁽⁰⁾(I−R⁽⁰⁾)^{−1}β̄⁽⁰⁾ᵀ` for the Catalan sewing, and `q = exp(2πiτ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatalanModulus {
    #[serde(with = "crate::complex::re_im")]
    pub two_pi_i_tau: Complex64,
    #[serde(with = "crate::complex::re_im")]
    pub q: Complex64,
}

pub fn torus_modulus_catalan(c: CatalanChi, n: usize) -> Result<CatalanModulus> {
    if c.chi.norm() == 0.0 {
        return Err(SewingError::OutOfDomain { margin: 0.0 });
    }
    let (r, beta) = sphere_moments(c.chi, n)?;
    let flat = r.flatten();
    // z = β(I−R)^{−1}, from (I−R)ᵀzᵀ = βᵀ
    let z = solve_id_minus_vec(&flat.transpose(), &beta.flatten())?;
    let correction = (z.transpose() * beta.bar().flatten())[0];
    let two_pi_i_tau = c.chi.ln() - correction;
    Ok(CatalanModulus {
        two_pi_i_tau,
        q: two_pi_i_tau.exp(),
    })
}

/// `(I+B⁽⁰⁾)^{−1}(1,1)` at truncation `n`.
pub fn catalan_resolvent_11(c: CatalanChi, n: usize) -> Result<Complex64> {
    let (r, _) = sphere_moments(c.chi, n)?;
    // R₁₁ = −B, so I+B = I−R₁₁
    let mut e = CMatrix::zeros(n, 1);
    e[(0, 0)] = Complex64::new(1.0, 0.0);
    Ok(solve_id_minus(&r.blocks[0][0], &e)?[(0, 0)])
}

/// `E₂(q = f(χ)) = −1/12 + (2χ/(1−4χ))·(I+B⁽⁰⁾)^{−1}(1,1)`.
pub fn e2_from_catalan(c: CatalanChi, n: usize) -> Result<Complex64> {
    let chi = c.chi;
    Ok(-1.0 / 12.0 + 2.0 * chi / (1.0 - 4.0 * chi) * catalan_resolvent_11(c, n)?)
}

/// `G(χ) = 1/12 + E₂(q = f(χ))`.
pub fn g_chi(c: CatalanChi, n: usize) -> Result<Complex64> {
    Ok(e2_from_catalan(c, n)? + 1.0 / 12.0)
}

/// Residuals of the torus/sphere attachment: with the sphere's vanishing
/// moment matrix in the first slot, `X₂₂` equals the torus moment matrix and
/// the other blocks vanish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttachReport {
    pub x22_residual: f64,
    pub x11_norm: f64,
    pub x12_norm: f64,
    pub x21_norm: f64,
}

pub fn sphere_attach_check(tau: Tau, eps: Complex64, n: usize, tol: SeriesTolerance) -> Result<AttachReport> {
    let torus = a_matrix(tau, eps, n, tol)?;
    let sphere = MomentMatrix::zeros(n);
    let x = x_blocks(&sphere, &torus)?;
    let max_abs = |m: &CMatrix| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(AttachReport {
        x22_residual: max_abs(&(&x.x22 - &torus.entries)),
        x11_norm: max_abs(&x.x11),
        x12_norm: max_abs(&x.x12),
        x21_norm: max_abs(&x.x21),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::eisenstein;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn catalan_numbers() {
        let first: Vec<u64> = (1..=6).map(catalan_number).collect();
        assert_eq!(first, vec![1, 2, 5, 14, 42, 132]);
        // (1/n)C(2n, n+1) directly
        for n in 1..=10u64 {
            let binom: u64 = (0..n + 1).fold(1u64, |acc, i| acc * (2 * n - i) / (i + 1));
            assert_eq!(binom / n, catalan_number(n));
        }
    }

    #[test]
    fn functional_equation() {
        for chi in [c(0.2, 0.0), c(0.05, 0.1), c(-0.2, 0.0), c(5e-4, 1e-4), c(0.0, 0.0)] {
            let f = catalan_f(CatalanChi::new(chi).unwrap());
            assert!((chi - f / ((1.0 + f) * (1.0 + f))).norm() < 1e-13);
        }
        assert!(CatalanChi::new(c(0.25, 0.0)).is_err());
    }

    #[test]
    fn series_and_closed_form_agree() {
        let chi = c(9.9e-4, 0.0);
        let closed = (1.0 - (1.0 - 4.0 * chi).sqrt()) / (2.0 * chi) - 1.0;
        assert!((catalan_f(CatalanChi::new(chi).unwrap()) - closed).norm() < 1e-12);
    }

    #[test]
    fn s_nk_small_cases() {
        let chi = c(0.1, 0.0);
        assert_eq!(s_nk(1, 3, chi, 50).unwrap(), c(1.0, 0.0));
        // S_{2,1} = Σ χ^m = χ/(1−χ)
        assert!((s_nk(2, 1, chi, 150).unwrap() - chi / (1.0 - chi)).norm() < 1e-14);
    }

    #[test]
    fn continued_fraction_converges_geometrically() {
        let chi = c(0.2, 0.0);
        let target = 1.0 + catalan_f(CatalanChi::new(chi).unwrap());
        let e10 = (continued_fraction(chi, 10) - target).norm();
        let e20 = (continued_fraction(chi, 20) - target).norm();
        let e30 = (continued_fraction(chi, 30) - target).norm();
        assert!(e20 < e10 && e30 < e20);
        let r1 = e20 / e10;
        let r2 = e30 / e20;
        assert!((r1.ln() - r2.ln()).abs() < 0.2 * r1.ln().abs());
    }

    #[test]
    fn simple_torus() {
        let rep = torus_modulus_simple(c(0.3, 0.0), 30).unwrap();
        assert!(rep.product_residual < 1e-12);
        assert!(rep.eta_residual.unwrap() < 1e-10);
        assert_eq!(rep.diagonal_residual, 0.0);
        let zero = torus_modulus_simple(c(0.0, 0.0), 10).unwrap();
        assert_eq!(zero.det, c(1.0, 0.0));
        assert!(zero.eta_residual.is_none());
    }

    #[test]
    fn catalan_modulus_and_e2() {
        let chi = CatalanChi::new(c(0.05, 0.0)).unwrap();
        let f = catalan_f(chi);
        let m = torus_modulus_catalan(chi, 20).unwrap();
        assert!((m.q - f).norm() < 1e-9);
        assert!((m.two_pi_i_tau - f.ln()).norm() < 1e-9);
        let chi = CatalanChi::new(c(0.1, 0.0)).unwrap();
        let e2 = e2_from_catalan(chi, 24).unwrap();
        let tau = Tau::new(catalan_f(chi).ln() / TWO_PI_I).unwrap();
        let oracle = eisenstein(2, tau, SeriesTolerance::default()).unwrap();
        assert!((e2 - oracle).norm() < 1e-9);
        let tiny = CatalanChi::new(c(1e-6, 0.0)).unwrap();
        assert!((torus_modulus_catalan(tiny, 8).unwrap().q / tiny.chi - 1.0).norm() < 1e-5);
        assert!((e2_from_catalan(tiny, 8).unwrap() + 1.0 / 12.0).norm() < 1e-5);
    }

    #[test]
    fn attach_structure() {
        let t = Tau::new(c(0.1, 1.2)).unwrap();
        let r = sphere_attach_check(t, c(0.3, 0.1), 10, SeriesTolerance::default()).unwrap();
        assert!(r.x22_residual < 1e-14 && r.x11_norm < 1e-14 && r.x12_norm < 1e-14 && r.x21_norm < 1e-14);
        let r0 = sphere_attach_check(t, c(0.0, 0.0), 6, SeriesTolerance::default()).unwrap();
        assert_eq!(r0.x22_residual + r0.x11_norm + r0.x12_norm + r0.x21_norm, 0.0);
    }
}
