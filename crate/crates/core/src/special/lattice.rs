use num_complex::Complex64;

use super::tau::Tau;
use crate::complex::TWO_PI_I;

/// A lattice vector `2πi(mτ+n)` with its integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticePoint {
    pub value: Complex64,
    pub m: i64,
    pub n: i64,
}

/// The period lattice `Λ_τ = 2πi(ℤτ + ℤ)` with a Gauss-reduced basis.
#[derive(Debug, Clone, Copy)]
pub struct LatticeTau {
    tau: Tau,
    b1: LatticePoint,
    b2: LatticePoint,
}

fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

impl LatticeTau {
    pub fn new(tau: Tau) -> Self {
        let t = tau.value();
        let mut b1 = LatticePoint {
            value: TWO_PI_I * t,
            m: 1,
            n: 0,
        };
        let mut b2 = LatticePoint {
            value: TWO_PI_I,
            m: 0,
            n: 1,
        };
        if b2.value.norm_sqr() < b1.value.norm_sqr() {
            std::mem::swap(&mut b1, &mut b2);
        }
        loop {
            let mu = (dot(b1.value, b2.value) / b1.value.norm_sqr()).round();
            if mu != 0.0 {
                let k = mu as i64;
                b2 = LatticePoint {
                    value: b2.value - b1.value * mu,
                    m: b2.m - k * b1.m,
                    n: b2.n - k * b1.n,
                };
            }
            if b2.value.norm_sqr() < b1.value.norm_sqr() {
                std::mem::swap(&mut b1, &mut b2);
            } else {
                break;
            }
        }
        LatticeTau { tau, b1, b2 }
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    /// Reduced basis; `b1` is a shortest non-zero vector.
    pub fn reduced_basis(&self) -> (LatticePoint, LatticePoint) {
        (self.b1, self.b2)
    }

    fn combine(&self, i: i64, j: i64) -> LatticePoint {
        LatticePoint {
            value: self.b1.value * i as f64 + self.b2.value * j as f64,
            m: i * self.b1.m + j * self.b2.m,
            n: i * self.b1.n + j * self.b2.n,
        }
    }

    /// Minimal length `D(Λ_τ)`, confirmed over a window of the reduced basis.
    pub fn min_length(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in -2i64..=2 {
            for j in -2i64..=2 {
                if i != 0 || j != 0 {
                    best = best.min(self.combine(i, j).value.norm());
                }
            }
        }
        best
    }

    /// Real coordinates of `z` in the reduced basis.
    fn coords(&self, z: Complex64) -> (f64, f64) {
        let (u, v) = (self.b1.value, self.b2.value);
        let det = u.re * v.im - u.im * v.re;
        let x = (z.re * v.im - z.im * v.re) / det;
        let y = (u.re * z.im - u.im * z.re) / det;
        (x, y)
    }

    /// A lattice point nearest to `z`.
    pub fn nearest(&self, z: Complex64) -> LatticePoint {
        let (x, y) = self.coords(z);
        let (x0, y0) = (x.floor() as i64, y.floor() as i64);
        let mut best = self.combine(x0, y0);
        let mut best_d = (z - best.value).norm();
        for i in x0 - 1..=x0 + 2 {
            for j in y0 - 1..=y0 + 2 {
                let p = self.combine(i, j);
                let d = (z - p.value).norm();
                if d < best_d {
                    best = p;
                    best_d = d;
                }
            }
        }
        best
    }

    /// Distance from `z` to the lattice.
    pub fn distance(&self, z: Complex64) -> f64 {
        (z - self.nearest(z).value).norm()
    }

    /// Writes `z = z_r + 2πi(mτ+n)` with `|Re z_r| ≤ π Im τ` and `|Im z_r − 2π Re(τ)·a| ≤ π`.
    pub fn reduce_tau_basis(&self, z: Complex64) -> (Complex64, i64, i64) {
        let t = self.tau.value();
        let u = z / TWO_PI_I;
        let m = (u.im / t.im).round();
        let n = (u.re - m * t.re).round();
        let zr = z - TWO_PI_I * (t * m + n);
        (zr, m as i64, n as i64)
    }
}

/// `D(Λ_τ)`, the length of a shortest non-zero lattice vector.
pub fn lattice_min(tau: Tau) -> f64 {
    LatticeTau::new(tau).min_length()
}
