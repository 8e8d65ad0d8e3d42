//! Dense kernels for `(I−M)^{−1}` applications and determinants.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::complex::TWO_PI_I;
use crate::error::{Result, SewingError};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const RESIDUAL_TOL: f64 = 1e-12;

/// Smallest singular value of `m`.
pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

fn id_minus(m: &CMatrix) -> CMatrix {
    CMatrix::identity(m.nrows(), m.ncols()) - m
}

/// `(I−M)^{−1}·rhs` by LU with one step of iterative refinement.
pub fn solve_id_minus(m: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    if m.nrows() != m.ncols() || m.nrows() != rhs.nrows() {
        return Err(SewingError::InvalidArgument("incompatible dimensions".into()));
    }
    let a = id_minus(m);
    let degenerate = || SewingError::NearDegenerate {
        smallest_singular_value: smallest_singular_value(&a),
    };
    let lu = a.clone().lu();
    let mut x = lu.solve(rhs).ok_or_else(degenerate)?;
    let r = rhs - &a * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    let residual = (rhs - &a * &x).norm();
    if !residual.is_finite() || residual > RESIDUAL_TOL * rhs.norm().max(f64::MIN_POSITIVE) {
        return Err(degenerate());
    }
    Ok(x)
}

/// Vector form of [`solve_id_minus`].
pub fn solve_id_minus_vec(m: &CMatrix, rhs: &CVector) -> Result<CVector> {
    let x = solve_id_minus(m, &CMatrix::from_column_slice(rhs.len(), 1, rhs.as_slice()))?;
    Ok(CVector::from_column_slice(x.as_slice()))
}

/// `det(I−M)` and a logarithm of it, each from an LU factorization.
pub fn lu_det_logdet(m: &CMatrix) -> (Complex64, Complex64) {
    let a = id_minus(m);
    let lu = a.lu();
    let sign: f64 = lu.p().determinant();
    let u = lu.u();
    let mut det = Complex64::new(sign, 0.0);
    let mut log = if sign < 0.0 {
        Complex64::new(0.0, std::f64::consts::PI)
    } else {
        Complex64::new(0.0, 0.0)
    };
    for i in 0..u.nrows() {
        det *= u[(i, i)];
        log += u[(i, i)].ln();
    }
    (det, log)
}

/// `Tr log(I−M) = −Σ_{n≥1} Tr(Mⁿ)/n`, or `None` if the series does not settle.
pub fn trace_log_series(m: &CMatrix) -> Option<Complex64> {
    if m.nrows() == 0 {
        return Some(Complex64::new(0.0, 0.0));
    }
    let mut power = m.clone();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    for n in 1..=4000usize {
        let term = power.trace() / n as f64;
        sum -= term;
        let tail_scale = power.norm();
        if !tail_scale.is_finite() || tail_scale > 1e12 {
            return None;
        }
        if tail_scale < 1e-17 * sum.norm().max(1.0) {
            quiet += 1;
            if quiet >= 2 {
                return Some(sum);
            }
        } else {
            quiet = 0;
        }
        power = &power * m;
    }
    None
}

/// Determinant data for `det(I−M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetResult {
    pub det: Complex64,
    pub log_det: Complex64,
    pub truncation_order: usize,
}

/// `det(I−M)` by LU, with the logarithm reconciled against the trace-log series.
pub fn det_id_minus_matrix(m: &CMatrix, truncation_order: usize) -> Result<DetResult> {
    let (det, mut log_det) = lu_det_logdet(m);
    if let Some(trace_log) = trace_log_series(m) {
        let k = ((trace_log - log_det) / TWO_PI_I).re.round();
        log_det += TWO_PI_I * k;
        let discrepancy = (log_det - trace_log).norm();
        if discrepancy > 1e-8 * trace_log.norm().max(1.0) {
            return Err(SewingError::TruncationTooCoarse { discrepancy });
        }
    }
    Ok(DetResult {
        det,
        log_det,
        truncation_order,
    })
}
