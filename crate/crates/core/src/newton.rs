//! Damped Newton iteration for holomorphic maps `ℂ³ → ℂ³` with a
//! finite-difference Jacobian over the six real coordinates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, SewingError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Target for the largest entry of `F(x) − target`.
    pub tol: f64,
    pub max_iterations: usize,
    /// Relative central-difference step per real coordinate.
    pub fd_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-12,
            max_iterations: 50,
            fd_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOutcome {
    pub x: [Complex64; 3],
    pub iterations: usize,
    pub residual: f64,
}

fn max_norm(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn diff(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn to_real(v: &[Complex64; 3]) -> DVector<f64> {
    DVector::from_iterator(6, v.iter().flat_map(|z| [z.re, z.im]))
}

/// Solves `f(x) = target` starting from `seed`.
///
/// `f` returns an error outside its domain; `in_domain` is consulted before
/// every evaluation so that steps leaving the domain are shortened.
pub fn newton_solve<F, D>(
    f: F,
    in_domain: D,
    target: [Complex64; 3],
    seed: [Complex64; 3],
    opts: NewtonOptions,
) -> Result<NewtonOutcome>
where
    F: Fn(&[Complex64; 3]) -> Result<[Complex64; 3]>,
    D: Fn(&[Complex64; 3]) -> bool,
{
    if !in_domain(&seed) {
        return Err(SewingError::DomainExit { iteration: 0 });
    }
    let mut x = seed;
    let mut r = diff(&f(&x)?, &target);
    let mut res = max_norm(&r);
    for iteration in 0..opts.max_iterations {
        if res < opts.tol {
            return Ok(NewtonOutcome {
                x,
                iterations: iteration,
                residual: res,
            });
        }
        let mut jac = DMatrix::<f64>::zeros(6, 6);
        for col in 0..6 {
            let i = col / 2;
            let h = opts.fd_step * x[i].norm().max(1.0);
            let dir = if col % 2 == 0 {
                Complex64::new(h, 0.0)
            } else {
                Complex64::new(0.0, h)
            };
            let mut xp = x;
            let mut xm = x;
            xp[i] += dir;
            xm[i] -= dir;
            if !in_domain(&xp) || !in_domain(&xm) {
                return Err(SewingError::DomainExit { iteration });
            }
            let d = to_real(&diff(&f(&xp)?, &f(&xm)?)) / (2.0 * h);
            jac.set_column(col, &d);
        }
        let step = jac.lu().solve(&(-to_real(&r))).ok_or(SewingError::Divergence {
            iterations: iteration,
            residual: res,
        })?;
        let dx = [
            Complex64::new(step[0], step[1]),
            Complex64::new(step[2], step[3]),
            Complex64::new(step[4], step[5]),
        ];
        let mut lambda = 1.0;
        let mut accepted = false;
        let mut left_domain = false;
        for _ in 0..30 {
            let trial = [x[0] + dx[0] * lambda, x[1] + dx[1] * lambda, x[2] + dx[2] * lambda];
            if in_domain(&trial) {
                if let Ok(ft) = f(&trial) {
                    let rt = diff(&ft, &target);
                    let res_t = max_norm(&rt);
                    if res_t < res || lambda == 1.0 && res_t <= 1.5 * res && res < 1e3 * opts.tol {
                        x = trial;
                        r = rt;
                        res = res_t;
                        accepted = true;
                        break;
                    }
                }
            } else {
                left_domain = true;
            }
            lambda *= 0.5;
        }
        if !accepted {
            if left_domain {
                return Err(SewingError::DomainExit { iteration });
            }
            return Err(SewingError::Divergence {
                iterations: iteration,
                residual: res,
            });
        }
    }
    if res < opts.tol {
        return Ok(NewtonOutcome {
            x,
            iterations: opts.max_iterations,
            residual: res,
        });
    }
    Err(SewingError::Divergence {
        iterations: opts.max_iterations,
        residual: res,
    })
}
