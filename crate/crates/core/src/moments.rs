//! Truncated moment matrices and vectors: `A_a`, `Q`, `R`, `β`, the X-blocks,
//! and determinants of `I − ·`.

use num_complex::Complex64;

use crate::error::{Result, SewingError};
use crate::linalg::{det_id_minus_matrix, solve_id_minus, CMatrix, CVector, DetResult};
use crate::special::{combinatorial_factor, EisensteinTable, EllipticTable, SeriesTolerance, Tau};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// An `N×N` truncation of a moment matrix indexed by `k,l ≥ 1`.
///
/// Entry `(k,l)` sits at `(k−1,l−1)` and carries parameter power `(k+l)/2`.
/// `supported_order` is the parameter order to which products of these
/// truncations are complete.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    pub order: usize,
    pub entries: CMatrix,
    pub supported_order: usize,
}

impl MomentMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(SewingError::InvalidArgument(
                "moment matrix must be square and non-empty".into(),
            ));
        }
        let order = entries.nrows();
        Ok(MomentMatrix {
            order,
            entries,
            supported_order: order + 1,
        })
    }

    pub fn zeros(order: usize) -> Self {
        MomentMatrix {
            order,
            entries: CMatrix::zeros(order, order),
            supported_order: usize::MAX,
        }
    }

    /// Entry `(k,l)` with one-based indices.
    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.entries[(k - 1, l - 1)]
    }
}

/// A `2×2` arrangement of `N×N` blocks indexed by `a,b ∈ {1,2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMomentMatrix {
    pub order: usize,
    pub blocks: [[CMatrix; 2]; 2],
}

impl BlockMomentMatrix {
    /// Entry `R_ab(k,l)` with one-based indices.
    pub fn get(&self, a: usize, b: usize, k: usize, l: usize) -> Complex64 {
        self.blocks[a - 1][b - 1][(k - 1, l - 1)]
    }

    /// The `2N×2N` matrix with `(a,k)` flattened to `(a−1)N + k−1`.
    pub fn flatten(&self) -> CMatrix {
        let n = self.order;
        let mut m = CMatrix::zeros(2 * n, 2 * n);
        for a in 0..2 {
            for b in 0..2 {
                m.view_mut((a * n, b * n), (n, n)).copy_from(&self.blocks[a][b]);
            }
        }
        m
    }

    pub fn from_flat(order: usize, m: &CMatrix) -> Self {
        let block = |a: usize, b: usize| m.view((a * order, b * order), (order, order)).into_owned();
        BlockMomentMatrix {
            order,
            blocks: [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]],
        }
    }
}

/// A pair of length-`N` vectors indexed by `a ∈ {1,2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    pub order: usize,
    pub blocks: [CVector; 2],
}

impl MomentVector {
    pub fn get(&self, a: usize, k: usize) -> Complex64 {
        self.blocks[a - 1][k - 1]
    }

    pub fn flatten(&self) -> CVector {
        let n = self.order;
        CVector::from_fn(2 * n, |i, _| self.blocks[i / n][i % n])
    }

    /// `β̄`, the vector with its two blocks exchanged.
    pub fn bar(&self) -> Self {
        MomentVector {
            order: self.order,
            blocks: [self.blocks[1].clone(), self.blocks[0].clone()],
        }
    }
}

/// `s^{k+l}/√(kl)·(combinatorial factor)` for all `k,l ≤ n`.
fn weighted_factors(s: Complex64, n: usize) -> Result<CMatrix> {
    let mut powers = vec![Complex64::new(1.0, 0.0); 2 * n + 1];
    for j in 1..=2 * n {
        powers[j] = powers[j - 1] * s;
    }
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        for l in 1..=n {
            let f = combinatorial_factor(k, l)? / ((k * l) as f64).sqrt();
            m[(k - 1, l - 1)] = powers[k + l] * f;
        }
    }
    Ok(m)
}

/// `A(k,l) = s^{k+l}/√(kl)·C(k,l,τ)` with `s` a chosen square root of `ε`.
pub fn a_matrix_with_root(table: &EisensteinTable, s: Complex64, n: usize) -> Result<MomentMatrix> {
    let w = weighted_factors(s, n)?;
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        for l in 1..=n {
            if (k + l) % 2 == 0 {
                m[(k - 1, l - 1)] = w[(k - 1, l - 1)] * table.get(k + l)?;
            }
        }
    }
    MomentMatrix::new(m)
}

/// `A_a` for the torus `τ` with the principal root of `ε`.
pub fn a_matrix(tau: Tau, eps: Complex64, n: usize, tol: SeriesTolerance) -> Result<MomentMatrix> {
    let table = EisensteinTable::new(tau, 2 * n, tol)?;
    a_matrix_with_root(&table, eps.sqrt(), n)
}

/// Self-sewing data `R` from tables of `E_k(τ)` and `P_k(τ,w)`, with `s` a root of `ρ`.
pub fn r_matrix_with_root(e: &EisensteinTable, p: &EllipticTable, s: Complex64, n: usize) -> Result<BlockMomentMatrix> {
    let w = weighted_factors(s, n)?;
    let mut d_kl = CMatrix::zeros(n, n);
    let mut d_lk = CMatrix::zeros(n, n);
    let mut c = CMatrix::zeros(n, n);
    for k in 1..=n {
        for l in 1..=n {
            let f = w[(k - 1, l - 1)];
            let pk = p.get(k + l)?;
            // D(l,k) = (−1)^{k+l} D(k,l)
            let parity = if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
            d_kl[(k - 1, l - 1)] = -f * pk;
            d_lk[(k - 1, l - 1)] = -f * pk * parity;
            c[(k - 1, l - 1)] = -f * e.get(k + l)?;
        }
    }
    Ok(BlockMomentMatrix {
        order: n,
        blocks: [[d_kl, c.clone()], [c, d_lk]],
    })
}

/// `R` for the self-sewn torus `(τ, w, ρ)` with the principal root of `ρ`.
pub fn r_matrix(tau: Tau, w: Complex64, rho: Complex64, n: usize, tol: SeriesTolerance) -> Result<BlockMomentMatrix> {
    let e = EisensteinTable::new(tau, 2 * n, tol)?;
    let p = EllipticTable::new(tau, w, 2 * n, tol)?;
    r_matrix_with_root(&e, &p, rho.sqrt(), n)
}

/// `β_a(k) = s^k/√k·(P_k(τ,w) − E_k(τ))·[−1, (−1)^k]`, with `E_1 = 0`.
pub fn beta_vector_with_root(e: &EisensteinTable, p: &EllipticTable, s: Complex64, n: usize) -> Result<MomentVector> {
    let mut b1 = CVector::zeros(n);
    let mut b2 = CVector::zeros(n);
    let mut sp = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        sp *= s;
        let ek = if k >= 2 { e.get(k)? } else { ZERO };
        let v = sp / (k as f64).sqrt() * (p.get(k)? - ek);
        b1[k - 1] = -v;
        b2[k - 1] = if k % 2 == 0 { v } else { -v };
    }
    Ok(MomentVector {
        order: n,
        blocks: [b1, b2],
    })
}

/// `β` for `(τ, w, ρ)` with the principal root of `ρ`.
pub fn beta_vector(tau: Tau, w: Complex64, rho: Complex64, n: usize, tol: SeriesTolerance) -> Result<MomentVector> {
    let e = EisensteinTable::new(tau, 2 * n, tol)?;
    let p = EllipticTable::new(tau, w, 2 * n, tol)?;
    beta_vector_with_root(&e, &p, rho.sqrt(), n)
}

/// Genus-zero self-sewing data `(R⁽⁰⁾, β⁽⁰⁾)` at `χ = −ρ/w²`.
pub fn sphere_moments(chi: Complex64, n: usize) -> Result<(BlockMomentMatrix, MomentVector)> {
    if !(chi.norm() < 0.25) {
        return Err(SewingError::OutOfDomain {
            margin: chi.norm() * 4.0,
        });
    }
    let s = (-chi).sqrt();
    let b = weighted_factors(s, n)?;
    let r = BlockMomentMatrix {
        order: n,
        blocks: [
            [-b.clone(), CMatrix::zeros(n, n)],
            [CMatrix::zeros(n, n), -b.transpose()],
        ],
    };
    let mut b1 = CVector::zeros(n);
    let mut b2 = CVector::zeros(n);
    let mut sp = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        sp *= s;
        let v = sp / (k as f64).sqrt();
        b1[k - 1] = -v;
        b2[k - 1] = if k % 2 == 0 { v } else { -v };
    }
    Ok((
        r,
        MomentVector {
            order: n,
            blocks: [b1, b2],
        },
    ))
}

/// `Q = [[0, −A₁], [−A₂, 0]]`.
pub fn q_matrix(a1: &MomentMatrix, a2: &MomentMatrix) -> Result<BlockMomentMatrix> {
    check_orders(a1, a2)?;
    let n = a1.order;
    Ok(BlockMomentMatrix {
        order: n,
        blocks: [
            [CMatrix::zeros(n, n), -a1.entries.clone()],
            [-a2.entries.clone(), CMatrix::zeros(n, n)],
        ],
    })
}

fn check_orders(a1: &MomentMatrix, a2: &MomentMatrix) -> Result<()> {
    if a1.order != a2.order {
        return Err(SewingError::InvalidArgument(format!(
            "moment matrix orders differ: {} vs {}",
            a1.order, a2.order
        )));
    }
    Ok(())
}

/// The four X-blocks of the sewn bilinear form.
#[derive(Debug, Clone, PartialEq)]
pub struct XBlocks {
    pub x11: CMatrix,
    pub x12: CMatrix,
    pub x21: CMatrix,
    pub x22: CMatrix,
}

impl XBlocks {
    pub fn get(&self, a: usize, b: usize) -> &CMatrix {
        match (a, b) {
            (1, 1) => &self.x11,
            (1, 2) => &self.x12,
            (2, 1) => &self.x21,
            _ => &self.x22,
        }
    }
}

/// `X_aa = A_a(I−A_āA_a)^{−1}` and `X_aā = I − (I−A_aA_ā)^{−1}`.
pub fn x_blocks(a1: &MomentMatrix, a2: &MomentMatrix) -> Result<XBlocks> {
    check_orders(a1, a2)?;
    let n = a1.order;
    let id = CMatrix::identity(n, n);
    let p12 = &a1.entries * &a2.entries;
    let p21 = &a2.entries * &a1.entries;
    let inv12 = solve_id_minus(&p12, &id)?;
    let inv21 = solve_id_minus(&p21, &id)?;
    Ok(XBlocks {
        x11: &a1.entries * &inv21,
        x22: &a2.entries * &inv12,
        x12: &id - inv12,
        x21: &id - inv21,
    })
}

/// `T_N(k,l) = Σ_{m ≤ N−(k+l)/2} A₁(k,m)A₂(m,l)` for `k,l ≤ 2N−3`, clipped to the matrix order.
pub fn truncated_product(a1: &MomentMatrix, a2: &MomentMatrix, n_eps: usize) -> Result<CMatrix> {
    check_orders(a1, a2)?;
    let size = (2 * n_eps).saturating_sub(3).min(a1.order);
    let mut t = CMatrix::zeros(size, size);
    for k in 1..=size {
        for l in 1..=size {
            let twice_limit = 2 * n_eps as i64 - (k + l) as i64;
            if twice_limit < 2 {
                continue;
            }
            let m_max = ((twice_limit / 2) as usize).min(a1.order);
            let mut acc = ZERO;
            for m in 1..=m_max {
                acc += a1.get(k, m) * a2.get(m, l);
            }
            t[(k - 1, l - 1)] = acc;
        }
    }
    Ok(t)
}

/// `det(I − A₁A₂)` on the index-dependent truncation `T_N`.
pub fn det_id_minus_product(a1: &MomentMatrix, a2: &MomentMatrix, n_eps: usize) -> Result<DetResult> {
    let t = truncated_product(a1, a2, n_eps)?;
    det_id_minus_matrix(&t, n_eps)
}

/// `det(I − R)` on the flattened `2N×2N` matrix.
pub fn det_id_minus(r: &BlockMomentMatrix) -> Result<DetResult> {
    det_id_minus_matrix(&r.flatten(), r.order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{c_coeff, d_coeff, eisenstein, weierstrass_p};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tau(re: f64, im: f64) -> Tau {
        Tau::new(Complex64::new(re, im)).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn a_matrix_entries() {
        let t = tau(0.1, 1.2);
        let eps = c(0.2, 0.1);
        let tol = SeriesTolerance::default();
        let a = a_matrix(t, eps, 6, tol).unwrap();
        let e2 = eisenstein(2, t, tol).unwrap();
        let e4 = eisenstein(4, t, tol).unwrap();
        assert!((a.get(1, 1) - eps * e2).norm() < 1e-15);
        assert_eq!(a.get(1, 2), ZERO);
        assert!((a.get(1, 3) - eps * eps * e4 * 3f64.sqrt()).norm() < 1e-15);
        for k in 1..=6 {
            for l in 1..=6 {
                assert!((a.get(k, l) - a.get(l, k)).norm() < 1e-14 * a.get(k, l).norm().max(1e-300));
                let direct = eps.sqrt().powu((k + l) as u32) / ((k * l) as f64).sqrt() * c_coeff(k, l, t, tol).unwrap();
                assert!((a.get(k, l) - direct).norm() < 1e-13 * direct.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn r_matrix_entries_and_symmetry() {
        let t = tau(0.0, 1.0);
        let w = c(0.8, 1.1);
        let rho = c(0.01, 0.005);
        let tol = SeriesTolerance::default();
        let r = r_matrix(t, w, rho, 5, tol).unwrap();
        let e2 = eisenstein(2, t, tol).unwrap();
        assert!((r.get(1, 2, 1, 1) + rho * e2).norm() < 1e-15);
        assert!((r.get(1, 1, 1, 1) + rho * weierstrass_p(2, t, w, tol).unwrap()).norm() < 1e-14);
        let s = rho.sqrt();
        for k in 1..=5 {
            for l in 1..=5 {
                let d = -s.powu((k + l) as u32) / ((k * l) as f64).sqrt() * d_coeff(k, l, t, w, tol).unwrap();
                assert!((r.get(1, 1, k, l) - d).norm() < 1e-12 * d.norm());
                for a in 1..=2 {
                    for b in 1..=2 {
                        let lhs = r.get(a, b, k, l);
                        let rhs = r.get(3 - b, 3 - a, l, k);
                        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1e-300));
                    }
                }
            }
        }
    }

    #[test]
    fn beta_entries() {
        let t = tau(0.2, 0.9);
        let w = c(1.0, 0.7);
        let rho = c(0.02, -0.01);
        let tol = SeriesTolerance::default();
        let b = beta_vector(t, w, rho, 6, tol).unwrap();
        let p1 = weierstrass_p(1, t, w, tol).unwrap();
        assert!((b.get(1, 1) + rho.sqrt() * p1).norm() < 1e-14);
        let p2 = weierstrass_p(2, t, w, tol).unwrap();
        let e2 = eisenstein(2, t, tol).unwrap();
        assert!((b.get(2, 2) - rho * (p2 - e2) / 2f64.sqrt()).norm() < 1e-14);
        for k in 1..=6 {
            let s = if k % 2 == 0 { -1.0 } else { 1.0 };
            assert!((b.get(2, k) - b.get(1, k) * s).norm() < 1e-15);
        }
    }

    #[test]
    fn sphere_data() {
        let chi = c(0.1, 0.02);
        let (r, b) = sphere_moments(chi, 5).unwrap();
        // R = −diag(B, Bᵀ) with B(1,1) = −χ
        assert!((r.get(1, 1, 1, 1) - chi).norm() < 1e-16);
        assert_eq!(r.get(1, 2, 2, 3), ZERO);
        let s = (-chi).sqrt();
        assert!((b.get(1, 1) + s).norm() < 1e-16 && (b.get(2, 1) + s).norm() < 1e-16);
        assert!(sphere_moments(c(0.3, 0.0), 4).is_err());
    }

    fn random_small(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> MomentMatrix {
        let m = CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let m = (&m + m.transpose()) * c(scale / n as f64, 0.0);
        MomentMatrix::new(m).unwrap()
    }

    #[test]
    fn x_blocks_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a1 = random_small(&mut rng, 6, 0.3);
        let a2 = random_small(&mut rng, 6, 0.3);
        let x = x_blocks(&a1, &a2).unwrap();
        // X = A + QX
        let q = q_matrix(&a1, &a2).unwrap().flatten();
        let xf = BlockMomentMatrix {
            order: 6,
            blocks: [[x.x11.clone(), x.x12.clone()], [x.x21.clone(), x.x22.clone()]],
        }
        .flatten();
        let af = BlockMomentMatrix {
            order: 6,
            blocks: [
                [a1.entries.clone(), CMatrix::zeros(6, 6)],
                [CMatrix::zeros(6, 6), a2.entries.clone()],
            ],
        }
        .flatten();
        assert!((&xf - (&af + &q * &xf)).norm() < 1e-12);

        let zero = MomentMatrix::zeros(6);
        let y = x_blocks(&a1, &zero).unwrap();
        assert_eq!(y.x22, CMatrix::zeros(6, 6));
        assert!((y.x11.clone() - &a1.entries).norm() < 1e-15);
        assert!(y.x12.norm() < 1e-15 && y.x21.norm() < 1e-15);
    }

    #[test]
    fn determinants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a1 = random_small(&mut rng, 8, 0.4);
        let a2 = random_small(&mut rng, 8, 0.4);
        let d = det_id_minus_product(&a1, &MomentMatrix::zeros(8), 6).unwrap();
        assert!((d.det - 1.0).norm() < 1e-15);
        // det(I−Q²) = det(I−A₁A₂)² on the full truncation
        let q = q_matrix(&a1, &a2).unwrap().flatten();
        let q2 = &q * &q;
        let lhs = det_id_minus_matrix(&q2, 8).unwrap();
        let prod = &a1.entries * &a2.entries;
        let rhs = det_id_minus_matrix(&prod, 8).unwrap();
        assert!((lhs.det - rhs.det * rhs.det).norm() < 1e-12);
        // det(I±Q) = det(I−A₁A₂)
        let plus = det_id_minus_matrix(&(-&q), 8).unwrap();
        let minus = det_id_minus_matrix(&q, 8).unwrap();
        assert!((plus.det - rhs.det).norm() < 1e-12 && (minus.det - rhs.det).norm() < 1e-12);
    }

    #[test]
    fn truncated_product_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a1 = random_small(&mut rng, 10, 0.4);
        let a2 = random_small(&mut rng, 10, 0.4);
        let t = truncated_product(&a1, &a2, 4).unwrap();
        assert_eq!(t.nrows(), 5);
        // k=l=1: m ≤ 3
        let expected: Complex64 = (1..=3).map(|m| a1.get(1, m) * a2.get(m, 1)).sum();
        assert!((t[(0, 0)] - expected).norm() < 1e-15);
        // k+l = 7: m ≤ 0.5 → empty
        assert_eq!(t[(2, 3)], ZERO);
    }
}
