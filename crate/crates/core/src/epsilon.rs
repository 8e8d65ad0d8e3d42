//! Two tori sewn with parameter `ε`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{re_im, TWO_PI_I};
use crate::error::{Result, SewingError};
use crate::groups::{sp4_action, GElement};
use crate::linalg::{solve_id_minus_vec, CVector};
use crate::moments::{a_matrix_with_root, x_blocks, MomentMatrix};
use crate::newton::{newton_solve, NewtonOptions};
use crate::period::PeriodMatrix;
use crate::special::{
    combinatorial_factor, eisenstein, lattice_min, weierstrass_p, EisensteinTable, EllipticTable, SeriesTolerance, Tau,
};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 12;

/// A point `(τ₁, τ₂, ε)` of the ε-sewing domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsPoint {
    pub tau1: Tau,
    pub tau2: Tau,
    #[serde(with = "re_im")]
    pub eps: Complex64,
}

impl EpsPoint {
    pub fn new(tau1: Tau, tau2: Tau, eps: Complex64) -> Self {
        EpsPoint { tau1, tau2, eps }
    }
}

/// Domain membership with the ratio of the parameter to its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainCheck {
    pub inside: bool,
    pub margin: f64,
}

/// `|ε| < D(Λ_{τ₁})D(Λ_{τ₂})/4`; `margin = |ε|/bound`.
pub fn in_domain_eps(p: &EpsPoint) -> DomainCheck {
    let bound = 0.25 * lattice_min(p.tau1) * lattice_min(p.tau2);
    let margin = p.eps.norm() / bound;
    DomainCheck {
        inside: margin < 1.0,
        margin,
    }
}

fn require_domain(p: &EpsPoint) -> Result<()> {
    let d = in_domain_eps(p);
    if !d.inside {
        return Err(SewingError::OutOfDomain { margin: d.margin });
    }
    Ok(())
}

/// The two moment matrices at a point, sharing one choice of `√ε`.
pub fn moment_pair(p: &EpsPoint, s: Complex64, n: usize, tol: SeriesTolerance) -> Result<(MomentMatrix, MomentMatrix)> {
    let e1 = EisensteinTable::new(p.tau1, 2 * n, tol)?;
    let e2 = EisensteinTable::new(p.tau2, 2 * n, tol)?;
    Ok((a_matrix_with_root(&e1, s, n)?, a_matrix_with_root(&e2, s, n)?))
}

fn unit(n: usize) -> CVector {
    let mut e = CVector::zeros(n);
    e[0] = Complex64::new(1.0, 0.0);
    e
}

/// The period matrix with an explicit choice `s` of `√ε`.
pub fn period_matrix_eps_with_root(p: &EpsPoint, s: Complex64, n: usize, tol: SeriesTolerance) -> Result<PeriodMatrix> {
    require_domain(p)?;
    let (a1, a2) = moment_pair(p, s, n, tol)?;
    let x = solve_id_minus_vec(&(&a1.entries * &a2.entries), &unit(n))?;
    let y = solve_id_minus_vec(&(&a2.entries * &a1.entries), &unit(n))?;
    let eps = p.eps;
    let s11 = TWO_PI_I * p.tau1.value() + eps * (&a2.entries * &x)[0];
    let s22 = TWO_PI_I * p.tau2.value() + eps * (&a1.entries * &y)[0];
    let s12 = -eps * x[0];
    Ok(PeriodMatrix::from_scaled(s11, s12, s22))
}

/// `Ω(τ₁,τ₂,ε)` at truncation order `n`.
pub fn period_matrix_eps(p: &EpsPoint, n: usize, tol: SeriesTolerance) -> Result<PeriodMatrix> {
    period_matrix_eps_with_root(p, p.eps.sqrt(), n, tol)
}

/// The two expressions `(I−A₁A₂)^{−1}(1,1)` and `(I−A₂A₁)^{−1}(1,1)` for `−2πiΩ₁₂/ε`.
pub fn off_diagonal_duality(p: &EpsPoint, n: usize, tol: SeriesTolerance) -> Result<(Complex64, Complex64)> {
    require_domain(p)?;
    let (a1, a2) = moment_pair(p, p.eps.sqrt(), n, tol)?;
    let x = solve_id_minus_vec(&(&a1.entries * &a2.entries), &unit(n))?;
    let y = solve_id_minus_vec(&(&a2.entries * &a1.entries), &unit(n))?;
    Ok((x[0], y[0]))
}

/// A chequered necklace: node labels from end to end with alternating edge types.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Necklace {
    pub node_labels: Vec<usize>,
    /// Type of the first edge; later edges alternate.
    pub first_edge: u8,
}

impl Necklace {
    pub fn edge_count(&self) -> usize {
        self.node_labels.len() - 1
    }

    pub fn edge_types(&self) -> Vec<u8> {
        (0..self.edge_count())
            .map(|i| {
                if i % 2 == 0 {
                    self.first_edge
                } else {
                    3 - self.first_edge
                }
            })
            .collect()
    }

    /// Exponent of `ε` in the weight: `1 + Σ interior labels`, or 0 for the bare node.
    pub fn eps_exponent(&self) -> usize {
        if self.edge_count() == 0 {
            0
        } else {
            1 + self.node_labels[1..self.node_labels.len() - 1].iter().sum::<usize>()
        }
    }
}

/// All necklaces with end labels 1, the given first edge type and edge-count
/// parity, and `ε`-exponent at most `budget`. Interior labels are odd, since
/// every other weight vanishes.
pub fn enumerate_necklaces(first_edge: u8, odd_edges: bool, budget: usize, limit: usize) -> Result<Vec<Necklace>> {
    let mut out = Vec::new();
    if !odd_edges {
        out.push(Necklace {
            node_labels: vec![1],
            first_edge,
        });
    }
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(interior) = stack.pop() {
        let used: usize = interior.iter().sum();
        if 1 + used > budget {
            continue;
        }
        let edges = interior.len() + 1;
        if (edges % 2 == 1) == odd_edges {
            let mut labels = vec![1];
            labels.extend(&interior);
            labels.push(1);
            out.push(Necklace {
                node_labels: labels,
                first_edge,
            });
            if out.len() > limit {
                return Err(SewingError::BudgetExceeded { budget: limit });
            }
        }
        let mut k = 1;
        while 1 + used + k <= budget {
            let mut next = interior.clone();
            next.push(k);
            stack.push(next);
            k += 2;
        }
    }
    out.sort_by(|a, b| (a.eps_exponent(), &a.node_labels).cmp(&(b.eps_exponent(), &b.node_labels)));
    Ok(out)
}

/// Default cap on the number of necklaces enumerated per series.
pub const NECKLACE_LIMIT: usize = 2_000_000;

/// Weight of a necklace: the product of `A_a(k,l)` along its edges.
fn necklace_weight(nk: &Necklace, s: Complex64, e1: &EisensteinTable, e2: &EisensteinTable) -> Result<Complex64> {
    let mut w = Complex64::new(1.0, 0.0);
    for (i, t) in nk.edge_types().iter().enumerate() {
        let (k, l) = (nk.node_labels[i], nk.node_labels[i + 1]);
        let table = if *t == 1 { e1 } else { e2 };
        let c = combinatorial_factor(k, l)? * table.get(k + l)?;
        w *= s.powu((k + l) as u32) / ((k * l) as f64).sqrt() * c;
    }
    Ok(w)
}

/// `Ω` from necklace sums with weight exponent at most `max_eps_order`.
pub fn necklace_period_eps(p: &EpsPoint, max_eps_order: usize, tol: SeriesTolerance) -> Result<PeriodMatrix> {
    require_domain(p)?;
    let kmax = max_eps_order + 2;
    let e1 = EisensteinTable::new(p.tau1, kmax, tol)?;
    let e2 = EisensteinTable::new(p.tau2, kmax, tol)?;
    let s = p.eps.sqrt();
    let sum = |first: u8, odd: bool| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for nk in enumerate_necklaces(first, odd, max_eps_order, NECKLACE_LIMIT)? {
            acc += necklace_weight(&nk, s, &e1, &e2)?;
        }
        Ok(acc)
    };
    let omega11 = sum(2, true)?;
    let omega22 = sum(1, true)?;
    let omega12 = sum(1, false)?;
    let eps = p.eps;
    Ok(PeriodMatrix::from_scaled(
        TWO_PI_I * p.tau1.value() + eps * omega11,
        -eps * omega12,
        TWO_PI_I * p.tau2.value() + eps * omega22,
    ))
}

/// `a_a(k,x) = √k ε^{k/2} P_{k+1}(τ_a,x)` for `k ≤ n`.
fn a_vector(tau: Tau, x: Complex64, s: Complex64, n: usize, tol: SeriesTolerance) -> Result<CVector> {
    let p = EllipticTable::new(tau, x, n + 1, tol)?;
    let mut v = CVector::zeros(n);
    for k in 1..=n {
        v[k - 1] = (k as f64).sqrt() * s.powu(k as u32) * p.get(k + 1)?;
    }
    Ok(v)
}

/// Density `f` of the sewn bilinear form `f(x,y)dxdy` for `x` on torus `a`, `y` on torus `b`.
pub fn bilinear_form_eps(
    p: &EpsPoint,
    x: Complex64,
    y: Complex64,
    surfaces: (usize, usize),
    n: usize,
    tol: SeriesTolerance,
) -> Result<Complex64> {
    require_domain(p)?;
    let (a, b) = surfaces;
    if !(1..=2).contains(&a) || !(1..=2).contains(&b) {
        return Err(SewingError::InvalidArgument("surface labels are 1 or 2".into()));
    }
    let s = p.eps.sqrt();
    let (a1, a2) = moment_pair(p, s, n, tol)?;
    let xb = x_blocks(&a1, &a2)?;
    let tau_of = |i: usize| if i == 1 { p.tau1 } else { p.tau2 };
    let ax = a_vector(tau_of(a), x, s, n, tol)?;
    let ay = a_vector(tau_of(b), y, s, n, tol)?;
    if a == b {
        let abar = 3 - a;
        let corr = (ax.transpose() * xb.get(abar, abar) * &ay)[0];
        Ok(weierstrass_p(2, tau_of(a), x - y, tol)? + corr)
    } else {
        let m = xb.get(b, a) - crate::linalg::CMatrix::identity(n, n);
        Ok((ax.transpose() * m * &ay)[0])
    }
}

/// Action of `G` on `(τ₁, τ₂, ε)`.
pub fn g_action_eps(g: GElement, p: &EpsPoint) -> Result<EpsPoint> {
    let image = match g {
        GElement::Gamma1(m) => EpsPoint::new(m.act(p.tau1)?, p.tau2, p.eps / m.j(p.tau1.value())),
        GElement::Gamma2(m) => EpsPoint::new(p.tau1, m.act(p.tau2)?, p.eps / m.j(p.tau2.value())),
        GElement::BetaSwap => EpsPoint::new(p.tau2, p.tau1, p.eps),
    };
    debug_assert!(in_domain_eps(&image).inside == in_domain_eps(p).inside);
    Ok(image)
}

/// `max |F(g.p) − g.F(p)|` over the three entries.
pub fn equivariance_residual_eps(g: GElement, p: &EpsPoint, n: usize, tol: SeriesTolerance) -> Result<f64> {
    let lhs = period_matrix_eps(&g_action_eps(g, p)?, n, tol)?;
    let rhs = sp4_action(g, &period_matrix_eps(p, n, tol)?)?;
    Ok(lhs.max_abs_diff(&rhs))
}

/// Holomorphic Jacobian of `(2πiΩ₁₁, 2πiΩ₂₂, 2πiΩ₁₂)` with respect to `(2πiτ₁, 2πiτ₂, ε)`.
pub fn jacobian_eps(p: &EpsPoint, n: usize, tol: SeriesTolerance) -> Result<[[Complex64; 3]; 3]> {
    let h = 1e-6;
    let eval = |q: &EpsPoint| -> Result<[Complex64; 3]> {
        let s = period_matrix_eps(q, n, tol)?.scaled();
        Ok([s[0], s[2], s[1]])
    };
    let mut jac = [[Complex64::new(0.0, 0.0); 3]; 3];
    for col in 0..3 {
        let shift = |sign: f64| -> Result<EpsPoint> {
            let d = Complex64::new(sign * h, 0.0);
            Ok(match col {
                0 => EpsPoint::new(Tau::new(p.tau1.value() + d / TWO_PI_I)?, p.tau2, p.eps),
                1 => EpsPoint::new(p.tau1, Tau::new(p.tau2.value() + d / TWO_PI_I)?, p.eps),
                _ => EpsPoint::new(p.tau1, p.tau2, p.eps + d),
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

/// Result of a Newton inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inversion<P> {
    pub point: P,
    pub iterations: usize,
    pub residual: f64,
}

/// Leading-order inverse of `F^ε` near `ε = 0`.
pub fn seed_eps(target: &PeriodMatrix, tol: SeriesTolerance) -> Result<EpsPoint> {
    let o12 = target.omega12;
    let t11 = Tau::new(target.omega11)?;
    let t22 = Tau::new(target.omega22)?;
    let e2_1 = eisenstein(2, t11, tol)?;
    let e2_2 = eisenstein(2, t22, tol)?;
    let tau1 = Tau::new(target.omega11 - TWO_PI_I * o12 * o12 * e2_2)?;
    let tau2 = Tau::new(target.omega22 - TWO_PI_I * o12 * o12 * e2_1)?;
    let x = TWO_PI_I * o12;
    let eps = -x * (1.0 - x * x * e2_1 * e2_2);
    Ok(EpsPoint::new(tau1, tau2, eps))
}

/// Inverts `F^ε` by Newton iteration from `seed` or the leading-order seed.
pub fn invert_eps(
    target: &PeriodMatrix,
    seed: Option<EpsPoint>,
    opts: NewtonOptions,
    n: usize,
    tol: SeriesTolerance,
) -> Result<Inversion<EpsPoint>> {
    let seed = match seed {
        Some(s) => s,
        None => seed_eps(target, tol)?,
    };
    let to_point = |x: &[Complex64; 3]| -> Option<EpsPoint> {
        Some(EpsPoint::new(Tau::new(x[0]).ok()?, Tau::new(x[1]).ok()?, x[2]))
    };
    let f = |x: &[Complex64; 3]| -> Result<[Complex64; 3]> {
        let p = to_point(x).ok_or(SewingError::OutOfDomain { margin: f64::INFINITY })?;
        let o = period_matrix_eps(&p, n, tol)?;
        Ok([o.omega11, o.omega22, o.omega12])
    };
    let inside = |x: &[Complex64; 3]| to_point(x).map(|p| in_domain_eps(&p).inside).unwrap_or(false);
    let out = newton_solve(
        f,
        inside,
        [target.omega11, target.omega22, target.omega12],
        [seed.tau1.value(), seed.tau2.value(), seed.eps],
        opts,
    )?;
    Ok(Inversion {
        point: to_point(&out.x).expect("accepted iterate is in the domain"),
        iterations: out.iterations,
        residual: out.residual,
    })
}
