//! A torus self-sewn with parameter `ρ` at punctures separated by `w`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{re_im, TWO_PI_I};
use crate::epsilon::{g_action_eps, invert_eps, DomainCheck, EpsPoint, Inversion};
use crate::error::{Result, SewingError};
use crate::groups::{GElement, LElement};
use crate::linalg::{solve_id_minus, CMatrix};
use crate::moments::{beta_vector_with_root, r_matrix_with_root, BlockMomentMatrix, MomentVector};
use crate::newton::{newton_solve, NewtonOptions};
use crate::period::PeriodMatrix;
use crate::special::{eisenstein, prime_form, EisensteinTable, EllipticTable, LatticeTau, SeriesTolerance, Tau};
use crate::sphere::{catalan_f, CatalanChi};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 16;

/// Cap on the number of paths visited by the necklace enumeration.
pub const PATH_LIMIT: usize = 2_000_000;

/// A point `(τ, w, ρ)` with the integer selecting the branch of the logarithm in `Ω₂₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoPoint {
    pub tau: Tau,
    #[serde(with = "re_im")]
    pub w: Complex64,
    #[serde(with = "re_im")]
    pub rho: Complex64,
    pub branch: i64,
}

impl RhoPoint {
    pub fn new(tau: Tau, w: Complex64, rho: Complex64, branch: i64) -> Self {
        RhoPoint { tau, w, rho, branch }
    }
}

/// A point `(τ, w, χ)` with `χ = −ρ/w²`; `w = 0` is the degenerate boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiPoint {
    pub tau: Tau,
    #[serde(with = "re_im")]
    pub w: Complex64,
    #[serde(with = "re_im")]
    pub chi: Complex64,
}

impl ChiPoint {
    pub fn new(tau: Tau, w: Complex64, chi: Complex64) -> Self {
        ChiPoint { tau, w, chi }
    }
}

/// `min_λ |w − λ| > 2|ρ|^{1/2} > 0`; `margin = 2|ρ|^{1/2} / min_λ |w − λ|`.
pub fn in_domain_rho(p: &RhoPoint) -> DomainCheck {
    let dist = LatticeTau::new(p.tau).distance(p.w);
    let bound = 2.0 * p.rho.norm().sqrt();
    let margin = if dist > 0.0 { bound / dist } else { f64::INFINITY };
    DomainCheck {
        inside: p.rho.norm() > 0.0 && margin < 1.0,
        margin,
    }
}

fn require_domain(p: &RhoPoint) -> Result<()> {
    let d = in_domain_rho(p);
    if !d.inside {
        return Err(SewingError::OutOfDomain { margin: d.margin });
    }
    Ok(())
}

/// `(0 < |χ| < 1/4)` and, for `w ≠ 0`, `(τ, w, −w²χ)` in the ρ-domain.
pub fn in_domain_chi(c: &ChiPoint) -> DomainCheck {
    let chi_margin = 4.0 * c.chi.norm();
    if c.w == Complex64::new(0.0, 0.0) || c.chi.norm() == 0.0 {
        return DomainCheck {
            inside: c.chi.norm() > 0.0 && chi_margin < 1.0,
            margin: chi_margin,
        };
    }
    let r = in_domain_rho(&RhoPoint::new(c.tau, c.w, -c.w * c.w * c.chi, 0));
    DomainCheck {
        inside: r.inside && chi_margin < 1.0,
        margin: r.margin.max(chi_margin),
    }
}

/// `Log(−ρ/K(τ,w)²)` with the principal logarithm.
pub fn principal_log_term(tau: Tau, w: Complex64, rho: Complex64, tol: SeriesTolerance) -> Result<Complex64> {
    let k = prime_form(tau, w, tol)?;
    Ok((-rho / (k * k)).ln())
}

/// `R` and `β` at a point sharing one root `s` of `ρ`.
pub fn moment_data(
    p: &RhoPoint,
    s: Complex64,
    n: usize,
    tol: SeriesTolerance,
) -> Result<(BlockMomentMatrix, MomentVector)> {
    let e = EisensteinTable::new(p.tau, 2 * n, tol)?;
    let pk = EllipticTable::new(p.tau, p.w, 2 * n, tol)?;
    Ok((
        r_matrix_with_root(&e, &pk, s, n)?,
        beta_vector_with_root(&e, &pk, s, n)?,
    ))
}

/// The period matrix with an explicit root `s` of `ρ`.
pub fn period_matrix_rho_with_root(p: &RhoPoint, s: Complex64, n: usize, tol: SeriesTolerance) -> Result<PeriodMatrix> {
    require_domain(p)?;
    let (r, beta) = moment_data(p, s, n, tol)?;
    let flat = r.flatten();
    let mut e = CMatrix::zeros(2 * n, 2);
    e[(0, 0)] = Complex64::new(1.0, 0.0);
    e[(n, 1)] = Complex64::new(1.0, 0.0);
    // columns (1,1) of both blocks of (I−R)^{−1}
    let cols = solve_id_minus(&flat, &e)?;
    let sigma = cols[(0, 0)] + cols[(0, 1)] + cols[(n, 0)] + cols[(n, 1)];
    // βM as a column, from (I−R)ᵀ(βM)ᵀ = βᵀ
    let bt = CMatrix::from_column_slice(2 * n, 1, beta.flatten().as_slice());
    let bm = solve_id_minus(&flat.transpose(), &bt)?;
    let beta_bar = beta.bar().flatten();
    let bmb = (0..2 * n).map(|i| bm[(i, 0)] * beta_bar[i]).sum::<Complex64>();
    let s11 = TWO_PI_I * p.tau.value() - p.rho * sigma;
    let s12 = p.w - s * (bm[(0, 0)] + bm[(n, 0)]);
    let s22 = principal_log_term(p.tau, p.w, p.rho, tol)? + TWO_PI_I * p.branch as f64 - bmb;
    Ok(PeriodMatrix::from_scaled(s11, s12, s22))
}

/// `Ω(τ, w, ρ)` at truncation order `n` with the principal root of `ρ`.
pub fn period_matrix_rho(p: &RhoPoint, n: usize, tol: SeriesTolerance) -> Result<PeriodMatrix> {
    period_matrix_rho_with_root(p, p.rho.sqrt(), n, tol)
}

/// The three necklace sums `ω₁₁`, `ω_{β1}`, `ω_{ββ̄}` and the dual `ω_{1β̄}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoWeights {
    #[serde(with = "re_im")]
    pub omega_11: Complex64,
    #[serde(with = "re_im")]
    pub omega_beta_1: Complex64,
    #[serde(with = "re_im")]
    pub omega_1_betabar: Complex64,
    #[serde(with = "re_im")]
    pub omega_beta_betabar: Complex64,
}

/// Depth-first sum over paths `(k₀,a₀) → … → (k_m,a_m)` of edge products `R_{ab}(k,l)`.
///
/// Budgets are in half-units of the ρ-exponent: an edge `(k,l)` costs `k+l`,
/// the start and end weights cost `start_cost(k₀)` and `end_cost(k_m)`.
struct PathSum<'a> {
    r: &'a BlockMomentMatrix,
    budget: usize,
    visited: usize,
}

impl PathSum<'_> {
    fn walk<E>(
        &mut self,
        node: (usize, usize),
        used: usize,
        weight: Complex64,
        end: &E,
        acc: &mut Complex64,
    ) -> Result<()>
    where
        E: Fn((usize, usize)) -> Option<(usize, Complex64)>,
    {
        self.visited += 1;
        if self.visited > PATH_LIMIT {
            return Err(SewingError::BudgetExceeded { budget: self.budget });
        }
        let (k, a) = node;
        if let Some((cost, w)) = end(node) {
            if used + cost <= self.budget {
                *acc += weight * w;
            }
        }
        for l in 1..=self.r.order {
            if used + k + l > self.budget {
                break;
            }
            for b in 1..=2 {
                let edge = self.r.get(a, b, k, l);
                self.walk((l, b), used + k + l, weight * edge, end, acc)?;
            }
        }
        Ok(())
    }
}

/// Necklace sums with every weight's ρ-exponent at most `max_rho_order`.
pub fn necklace_weights_rho(p: &RhoPoint, max_rho_order: usize, tol: SeriesTolerance) -> Result<RhoWeights> {
    require_domain(p)?;
    let budget = 2 * max_rho_order;
    let n = budget.max(1);
    let (r, beta) = moment_data(p, p.rho.sqrt(), n, tol)?;
    let beta_bar = beta.bar();
    let mut walker = PathSum {
        r: &r,
        budget,
        visited: 0,
    };
    let one = Complex64::new(1.0, 0.0);
    let end_at_one = |(k, _): (usize, usize)| if k == 1 { Some((0, one)) } else { None };
    let end_betabar = |(k, a): (usize, usize)| Some((k, beta_bar.get(a, k)));

    let mut omega_11 = Complex64::new(0.0, 0.0);
    let mut omega_beta_1 = Complex64::new(0.0, 0.0);
    let mut omega_1_betabar = Complex64::new(0.0, 0.0);
    let mut omega_beta_betabar = Complex64::new(0.0, 0.0);
    for a in 1..=2 {
        walker.walk((1, a), 0, one, &end_at_one, &mut omega_11)?;
        walker.walk((1, a), 0, one, &end_betabar, &mut omega_1_betabar)?;
        for k in 1..=n {
            if k > budget {
                break;
            }
            let start = beta.get(a, k);
            walker.walk((k, a), k, start, &end_at_one, &mut omega_beta_1)?;
            walker.walk((k, a), k, start, &end_betabar, &mut omega_beta_betabar)?;
        }
    }
    Ok(RhoWeights {
        omega_11,
        omega_beta_1,
        omega_1_betabar,
        omega_beta_betabar,
    })
}

/// The period matrix assembled from necklace sums truncated at `max_rho_order`.
pub fn necklace_period_rho(p: &RhoPoint, max_rho_order: usize, tol: SeriesTolerance) -> Result<PeriodMatrix> {
    let wts = necklace_weights_rho(p, max_rho_order, tol)?;
    let s = p.rho.sqrt();
    Ok(PeriodMatrix::from_scaled(
        TWO_PI_I * p.tau.value() - p.rho * wts.omega_11,
        p.w - s * wts.omega_beta_1,
        principal_log_term(p.tau, p.w, p.rho, tol)? + TWO_PI_I * p.branch as f64 - wts.omega_beta_betabar,
    ))
}

fn transport_branch(
    old: &RhoPoint,
    tau: Tau,
    w: Complex64,
    rho: Complex64,
    shift: Complex64,
    tol: SeriesTolerance,
) -> Result<i64> {
    let old_log = principal_log_term(old.tau, old.w, old.rho, tol)? + TWO_PI_I * old.branch as f64;
    let new_log = principal_log_term(tau, w, rho, tol)?;
    let k = (old_log + shift - new_log) / TWO_PI_I;
    Ok(k.re.round() as i64)
}

/// Action of `L` on `(τ, w, ρ)` with the branch integer transported.
pub fn l_action_rho(g: LElement, p: &RhoPoint, tol: SeriesTolerance) -> Result<RhoPoint> {
    let (tau, w, rho, shift) = match g {
        LElement::Mu { a, b, c } => {
            let (af, bf, cf) = (a as f64, b as f64, c as f64);
            let w = p.w + TWO_PI_I * (af * p.tau.value() + bf);
            let shift = TWO_PI_I * af * af * p.tau.value() + 2.0 * af * p.w + TWO_PI_I * (af * bf + cf);
            (p.tau, w, p.rho, shift)
        }
        LElement::Gamma1(m) => {
            let j = m.j(p.tau.value());
            let shift = -(m.c as f64) * p.w * p.w / (TWO_PI_I * j);
            (m.act(p.tau)?, p.w / j, p.rho / (j * j), shift)
        }
    };
    let branch = transport_branch(p, tau, w, rho, shift, tol)?;
    Ok(RhoPoint::new(tau, w, rho, branch))
}

/// `max |F(g.p) − g.F(p)|`, comparing `Ω₂₂` exactly through the transported branch.
pub fn equivariance_residual_rho(g: LElement, p: &RhoPoint, n: usize, tol: SeriesTolerance) -> Result<f64> {
    let lhs = period_matrix_rho(&l_action_rho(g, p, tol)?, n, tol)?;
    let rhs = g.to_sp4().act(&period_matrix_rho(p, n, tol)?)?;
    Ok(lhs.max_abs_diff(&rhs))
}

/// `log f(χ)` on the branch `Log χ + 2 Log(1+f)` continuous with the χ-chart.
pub fn log_catalan_f(chi: CatalanChi) -> Complex64 {
    let f = catalan_f(chi);
    chi.chi.ln() + 2.0 * (1.0 + f).ln()
}

/// Leading-order period matrix near `w = 0`, with remainder `O(w⁴)`.
pub fn degeneration_period(c: &ChiPoint, tol: SeriesTolerance) -> Result<PeriodMatrix> {
    let chi = CatalanChi::new(c.chi)?;
    if c.chi.norm() == 0.0 {
        return Err(SewingError::OutOfDomain { margin: 0.0 });
    }
    let log_f = log_catalan_f(chi);
    let e2_f = eisenstein(2, Tau::new(log_f / TWO_PI_I)?, tol)?;
    let g = 1.0 / 12.0 + e2_f;
    let e2 = eisenstein(2, c.tau, tol)?;
    let root = (1.0 - 4.0 * c.chi).sqrt();
    let w2 = c.w * c.w * (1.0 - 4.0 * c.chi);
    Ok(PeriodMatrix::from_scaled(
        TWO_PI_I * c.tau.value() + w2 * g,
        c.w * root * (1.0 + w2 * e2 * g),
        log_f + w2 * e2,
    ))
}

/// The ρ-point of a χ-point with `w ≠ 0`, its branch continuous with `log f(χ)` at `w = 0`.
pub fn rho_point(c: &ChiPoint, tol: SeriesTolerance) -> Result<RhoPoint> {
    if c.w == Complex64::new(0.0, 0.0) {
        return Err(SewingError::OutOfDomain { margin: f64::INFINITY });
    }
    let rho = -c.w * c.w * c.chi;
    let k = prime_form(c.tau, c.w, tol)?;
    let principal = principal_log_term(c.tau, c.w, rho, tol)?;
    // −ρ/K² = χ(w/K)² with w/K → 1 as w → 0
    let target = c.chi.ln() + 2.0 * (c.w / k).ln();
    let branch = ((target - principal) / TWO_PI_I).re.round() as i64;
    Ok(RhoPoint::new(c.tau, c.w, rho, branch))
}

/// `F^χ(τ, w, χ)`; at `w = 0` the limit `diag(τ, log f(χ)/2πi)`.
pub fn period_matrix_chi(c: &ChiPoint, n: usize, tol: SeriesTolerance) -> Result<PeriodMatrix> {
    let d = in_domain_chi(c);
    if !d.inside {
        return Err(SewingError::OutOfDomain { margin: d.margin });
    }
    if c.w == Complex64::new(0.0, 0.0) {
        return Ok(PeriodMatrix::diag(
            c.tau.value(),
            log_catalan_f(CatalanChi::new(c.chi)?) / TWO_PI_I,
        ));
    }
    period_matrix_rho(&rho_point(c, tol)?, n, tol)
}

/// Holomorphic Jacobian of `(Ω₁₁, Ω₂₂, Ω₁₂)` with respect to `(τ, w, χ)`.
pub fn jacobian_chi(c: &ChiPoint, n: usize, tol: SeriesTolerance) -> Result<[[Complex64; 3]; 3]> {
    let h = 1e-6;
    let eval = |q: &ChiPoint| -> Result<[Complex64; 3]> {
        let o = period_matrix_chi(q, n, tol)?;
        Ok([o.omega11, o.omega22, o.omega12])
    };
    let mut jac = [[Complex64::new(0.0, 0.0); 3]; 3];
    for col in 0..3 {
        let shift = |sign: f64| -> Result<ChiPoint> {
            let d = Complex64::new(sign * h, 0.0);
            Ok(match col {
                0 => ChiPoint::new(Tau::new(c.tau.value() + d)?, c.w, c.chi),
                1 => ChiPoint::new(c.tau, c.w + d, c.chi),
                _ => ChiPoint::new(c.tau, c.w, c.chi + d),
            })
        };
        let fp = eval(&shift(1.0)?)?;
        let fm = eval(&shift(-1.0)?)?;
        for row in 0..3 {
            jac[row][col] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Leading-order inverse of `F^χ` near `w = 0`.
pub fn seed_chi(target: &PeriodMatrix) -> Result<ChiPoint> {
    let f = (TWO_PI_I * target.omega22).exp();
    let chi = f / ((1.0 + f) * (1.0 + f));
    let w = TWO_PI_I * target.omega12 / (1.0 - 4.0 * chi).sqrt();
    Ok(ChiPoint::new(Tau::new(target.omega11)?, w, chi))
}

/// Inverts `F^χ` by Newton iteration.
pub fn invert_chi(
    target: &PeriodMatrix,
    seed: Option<ChiPoint>,
    opts: NewtonOptions,
    n: usize,
    tol: SeriesTolerance,
) -> Result<Inversion<ChiPoint>> {
    let seed = match seed {
        Some(s) => s,
        None => seed_chi(target)?,
    };
    let to_point = |x: &[Complex64; 3]| -> Option<ChiPoint> { Some(ChiPoint::new(Tau::new(x[0]).ok()?, x[1], x[2])) };
    let f = |x: &[Complex64; 3]| -> Result<[Complex64; 3]> {
        let c = to_point(x).ok_or(SewingError::OutOfDomain { margin: f64::INFINITY })?;
        let o = period_matrix_chi(&c, n, tol)?;
        Ok([o.omega11, o.omega12, o.omega22])
    };
    let inside = |x: &[Complex64; 3]| to_point(x).map(|c| in_domain_chi(&c).inside).unwrap_or(false);
    let out = newton_solve(
        f,
        inside,
        [target.omega11, target.omega12, target.omega22],
        [seed.tau.value(), seed.w, seed.chi],
        opts,
    )?;
    Ok(Inversion {
        point: to_point(&out.x).expect("accepted iterate is in the domain"),
        iterations: out.iterations,
        residual: out.residual,
    })
}

/// Action of `Γ₁` on χ-coordinates: `(γτ, w/(cτ+d), χ)`.
pub fn gamma1_action_chi(m: crate::groups::Sl2, c: &ChiPoint) -> Result<ChiPoint> {
    Ok(ChiPoint::new(m.act(c.tau)?, c.w / m.j(c.tau.value()), c.chi))
}

/// The ε-coordinates of the surface with χ-coordinates `c`.
pub fn eps_from_rho(c: &ChiPoint, n: usize, opts: NewtonOptions, tol: SeriesTolerance) -> Result<Inversion<EpsPoint>> {
    let omega = period_matrix_chi(c, n, tol)?;
    invert_eps(&omega, None, opts, crate::epsilon::DEFAULT_ORDER.max(n), tol)
}

/// `|eps_from_rho(γ.c) − γ.eps_from_rho(c)|` for `γ ∈ Γ₁`.
pub fn composition_residual(
    m: crate::groups::Sl2,
    c: &ChiPoint,
    n: usize,
    opts: NewtonOptions,
    tol: SeriesTolerance,
) -> Result<f64> {
    let lhs = eps_from_rho(&gamma1_action_chi(m, c)?, n, opts, tol)?.point;
    let rhs = g_action_eps(GElement::Gamma1(m), &eps_from_rho(c, n, opts, tol)?.point)?;
    Ok([
        (lhs.tau1.value() - rhs.tau1.value()).norm(),
        (lhs.tau2.value() - rhs.tau2.value()).norm(),
        (lhs.eps - rhs.eps).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}
