//! Symbolic period-matrix series from rational moment matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{Generator, GradedPoly};
use crate::error::{Result, SewingError};

pub const MAX_EPS_ORDER: usize = 10;
pub const MAX_RHO_ORDER: usize = 5;

/// The three series `2πiΩ₁₁`, `2πiΩ₁₂`, `2πiΩ₂₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicPeriod {
    pub omega11: GradedPoly,
    pub omega12: GradedPoly,
    pub omega22: GradedPoly,
    pub max_order: usize,
}

impl SymbolicPeriod {
    pub fn entries(&self) -> [&GradedPoly; 3] {
        [&self.omega11, &self.omega12, &self.omega22]
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `(−1)^{k+1}(k+l−1)!/((k−1)!·l!)`: the moment factor after conjugating by `diag(√k)`.
fn scaled_factor(k: usize, l: usize) -> BigRational {
    let sign = if k % 2 == 1 { 1 } else { -1 };
    BigRational::new(
        BigInt::from(sign) * factorial(k + l - 1),
        factorial(k - 1) * factorial(l),
    )
}

type PolyMatrix = Vec<Vec<GradedPoly>>;
type PolyVector = Vec<GradedPoly>;

fn mat_vec(m: &PolyMatrix, v: &PolyVector, max_half: i64) -> PolyVector {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(GradedPoly::zero(), |acc, (a, b)| acc + a.mul_truncated(b, max_half))
        })
        .collect()
}

fn dot(a: &PolyVector, b: &PolyVector, max_half: i64) -> GradedPoly {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(GradedPoly::zero(), |acc, (x, y)| acc + x.mul_truncated(y, max_half))
}

fn torus_matrix(n: usize, gen: fn(u32) -> Generator) -> PolyMatrix {
    (1..=n)
        .map(|k| {
            (1..=n)
                .map(|l| {
                    if (k + l) % 2 == 1 {
                        GradedPoly::zero()
                    } else {
                        GradedPoly::term(scaled_factor(k, l), (k + l) as i64, &[(gen((k + l) as u32), 1)])
                    }
                })
                .collect()
        })
        .collect()
}

fn unit(n: usize) -> PolyVector {
    let mut v = vec![GradedPoly::zero(); n];
    v[0] = GradedPoly::integer(1);
    v
}

fn check_integer_powers(series: &[&GradedPoly]) {
    for s in series {
        assert!(
            s.has_integer_powers(),
            "half-integer parameter power survived: {}",
            s.to_canonical_string("x")
        );
    }
}

/// `Σ_n (A_bA_a)^n e₁` contracted two ways: returns `(Σ (A_b u_n)(1), Σ u_n(1))`.
fn neumann_pair(a: &PolyMatrix, b: &PolyMatrix, n: usize, max_half: i64) -> (GradedPoly, GradedPoly) {
    let mut u = unit(n);
    let mut diag = GradedPoly::zero();
    let mut off = GradedPoly::zero();
    loop {
        off = off + u[0].clone();
        let w = mat_vec(b, &u, max_half);
        diag = diag + w[0].clone();
        u = mat_vec(a, &w, max_half);
        if u.iter().all(GradedPoly::is_zero) {
            return (diag, off);
        }
    }
}

/// The ε-series of `2πiΩ` through `ε^{max_order}`.
pub fn symbolic_period_eps(max_order: usize) -> Result<SymbolicPeriod> {
    if max_order > MAX_EPS_ORDER {
        return Err(SewingError::OrderOutOfRange {
            order: max_order as u32,
            max: MAX_EPS_ORDER as u32,
        });
    }
    let max_half = 2 * max_order as i64;
    let n = max_order + 1;
    let a1 = torus_matrix(n, Generator::E);
    let a2 = torus_matrix(n, Generator::F);
    // the outer factor ε costs two half units
    let inner = max_half - 2;
    let (d1, o1) = neumann_pair(&a1, &a2, n, inner);
    let (d2, _) = neumann_pair(&a2, &a1, n, inner);
    let omega11 = GradedPoly::generator(Generator::TwoPiITau1) + d1.shift(2);
    let omega22 = GradedPoly::generator(Generator::TwoPiITau2) + d2.shift(2);
    let omega12 = -o1.shift(2);
    let out = SymbolicPeriod {
        omega11: omega11.truncate(max_half),
        omega12: omega12.truncate(max_half),
        omega22: omega22.truncate(max_half),
        max_order,
    };
    check_integer_powers(&out.entries());
    Ok(out)
}

/// The ρ-series of `2πiΩ` through `ρ^{max_order}`, with `log(−ρ/K²)` as an opaque head.
pub fn symbolic_period_rho(max_order: usize) -> Result<SymbolicPeriod> {
    if max_order > MAX_RHO_ORDER {
        return Err(SewingError::OrderOutOfRange {
            order: max_order as u32,
            max: MAX_RHO_ORDER as u32,
        });
    }
    let max_half = 2 * max_order as i64;
    let n = max_order + 1;
    let size = 2 * n;
    let neg = |x: BigRational| -x;
    // flattened index: (k, a) ↦ (a−1)·n + (k−1)
    let mut r: PolyMatrix = vec![vec![GradedPoly::zero(); size]; size];
    for k in 1..=n {
        for l in 1..=n {
            let f = scaled_factor(k, l);
            let h = (k + l) as i64;
            let p = GradedPoly::term(neg(f.clone()), h, &[(Generator::P((k + l) as u32), 1)]);
            r[k - 1][l - 1] = p.clone();
            r[n + k - 1][n + l - 1] = if (k + l) % 2 == 0 { p } else { -p };
            if (k + l) % 2 == 0 {
                let e = GradedPoly::term(neg(f), h, &[(Generator::E((k + l) as u32), 1)]);
                r[k - 1][n + l - 1] = e.clone();
                r[n + k - 1][l - 1] = e;
            }
        }
    }
    let p_minus_e = |k: usize| {
        let p = GradedPoly::generator(Generator::P(k as u32));
        if k % 2 == 0 {
            p - GradedPoly::generator(Generator::E(k as u32))
        } else {
            p
        }
    };
    let sign = |a: usize, k: usize| -> i64 {
        if a == 1 || k % 2 == 1 {
            -1
        } else {
            1
        }
    };
    let mut beta_row: PolyVector = vec![GradedPoly::zero(); size];
    let mut beta_col: PolyVector = vec![GradedPoly::zero(); size];
    for k in 1..=n {
        let base = p_minus_e(k).shift(k as i64);
        for a in 1..=2 {
            let abar = 3 - a;
            beta_row[(a - 1) * n + k - 1] = base.scale(&BigRational::new(BigInt::from(sign(a, k)), BigInt::from(k)));
            beta_col[(a - 1) * n + k - 1] = base.scale(&BigRational::from_integer(BigInt::from(sign(abar, k))));
        }
    }
    let mut u: PolyVector = vec![GradedPoly::zero(); size];
    u[0] = GradedPoly::integer(1);
    u[n] = GradedPoly::integer(1);
    let mut z = beta_col.clone();
    let mut sigma = GradedPoly::zero();
    let mut t12 = GradedPoly::zero();
    let mut t22 = GradedPoly::zero();
    loop {
        sigma = sigma + u[0].clone() + u[n].clone();
        t12 = t12 + dot(&beta_row, &u, max_half - 1);
        t22 = t22 + dot(&beta_row, &z, max_half);
        u = mat_vec(&r, &u, max_half);
        z = mat_vec(&r, &z, max_half);
        if u.iter().all(GradedPoly::is_zero) && z.iter().all(GradedPoly::is_zero) {
            break;
        }
    }
    let omega11 = GradedPoly::generator(Generator::TwoPiITau1) - sigma.shift(2);
    let omega12 = GradedPoly::generator(Generator::W) - t12.shift(1);
    let omega22 = GradedPoly::generator(Generator::LogHead) - t22;
    let out = SymbolicPeriod {
        omega11: omega11.truncate(max_half),
        omega12: omega12.truncate(max_half),
        omega22: omega22.truncate(max_half),
        max_order,
    };
    check_integer_powers(&out.entries());
    Ok(out)
}
