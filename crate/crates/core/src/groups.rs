//! Modular and symplectic group elements acting on sewing data and on `ℍ₂`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SewingError};
use crate::period::PeriodMatrix;
use crate::special::Tau;

/// An element of `SL(2,ℤ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(SewingError::InvalidArgument(format!(
                "matrix [[{a},{b}],[{c},{d}]] does not have determinant 1"
            )));
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub const IDENTITY: Sl2 = Sl2 { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Sl2 = Sl2 {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };
    pub const T: Sl2 = Sl2 { a: 1, b: 1, c: 0, d: 1 };

    /// The cocycle `j(γ,τ) = cτ + d`.
    pub fn j(&self, tau: Complex64) -> Complex64 {
        tau * self.c as f64 + self.d as f64
    }

    pub fn act(&self, tau: Tau) -> Result<Tau> {
        tau.mobius(self.a, self.b, self.c, self.d)
    }

    pub fn compose(&self, other: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }
}

/// An element of `Sp(4,ℤ)` in block form `[[A, B], [C, D]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sp4 {
    pub a: [[i64; 2]; 2],
    pub b: [[i64; 2]; 2],
    pub c: [[i64; 2]; 2],
    pub d: [[i64; 2]; 2],
}

type M2 = [[Complex64; 2]; 2];

fn to_c(m: [[i64; 2]; 2]) -> M2 {
    let f = |x: i64| Complex64::new(x as f64, 0.0);
    [[f(m[0][0]), f(m[0][1])], [f(m[1][0]), f(m[1][1])]]
}

fn mul(x: M2, y: M2) -> M2 {
    let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    r
}

fn add(x: M2, y: M2) -> M2 {
    [
        [x[0][0] + y[0][0], x[0][1] + y[0][1]],
        [x[1][0] + y[1][0], x[1][1] + y[1][1]],
    ]
}

impl Sp4 {
    /// `Ω ↦ (AΩ+B)(CΩ+D)^{−1}`.
    pub fn act(&self, omega: &PeriodMatrix) -> Result<PeriodMatrix> {
        let o = omega.as_array();
        let num = add(mul(to_c(self.a), o), to_c(self.b));
        let den = add(mul(to_c(self.c), o), to_c(self.d));
        let det = den[0][0] * den[1][1] - den[0][1] * den[1][0];
        let scale = den.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        if det.norm() <= 1e-14 * scale * scale {
            return Err(SewingError::ActionSingular);
        }
        let inv = [[den[1][1] / det, -den[0][1] / det], [-den[1][0] / det, den[0][0] / det]];
        let r = mul(num, inv);
        Ok(PeriodMatrix::new(r[0][0], (r[0][1] + r[1][0]) * 0.5, r[1][1]))
    }

    /// Checks `MᵀJM = J`.
    pub fn is_symplectic(&self) -> bool {
        let mut m = [[0i64; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = self.a[i][j];
                m[i][j + 2] = self.b[i][j];
                m[i + 2][j] = self.c[i][j];
                m[i + 2][j + 2] = self.d[i][j];
            }
        }
        let mut jm = [[0i64; 4]; 4];
        jm[0][2] = 1;
        jm[1][3] = 1;
        jm[2][0] = -1;
        jm[3][1] = -1;
        for i in 0..4 {
            for k in 0..4 {
                let mut s = 0;
                for p in 0..4 {
                    for q in 0..4 {
                        s += m[p][i] * jm[p][q] * m[q][k];
                    }
                }
                if s != jm[i][k] {
                    return false;
                }
            }
        }
        true
    }
}

/// Generators of `G = (Γ₁ × Γ₂) ⋊ ⟨β⟩` acting on ε-sewing data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GElement {
    Gamma1(Sl2),
    Gamma2(Sl2),
    BetaSwap,
}

impl GElement {
    pub fn to_sp4(&self) -> Sp4 {
        match *self {
            GElement::Gamma1(g) => Sp4 {
                a: [[g.a, 0], [0, 1]],
                b: [[g.b, 0], [0, 0]],
                c: [[g.c, 0], [0, 0]],
                d: [[g.d, 0], [0, 1]],
            },
            GElement::Gamma2(g) => Sp4 {
                a: [[1, 0], [0, g.a]],
                b: [[0, 0], [0, g.b]],
                c: [[0, 0], [0, g.c]],
                d: [[1, 0], [0, g.d]],
            },
            GElement::BetaSwap => Sp4 {
                a: [[0, 1], [1, 0]],
                b: [[0, 0], [0, 0]],
                c: [[0, 0], [0, 0]],
                d: [[0, 1], [1, 0]],
            },
        }
    }
}

/// Generators of `L = Ĥ ⋊ Γ₁` acting on ρ-sewing data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LElement {
    Mu { a: i64, b: i64, c: i64 },
    Gamma1(Sl2),
}

impl LElement {
    pub fn to_sp4(&self) -> Sp4 {
        match *self {
            LElement::Mu { a, b, c } => Sp4 {
                a: [[1, 0], [a, 1]],
                b: [[0, b], [b, c]],
                c: [[0, 0], [0, 0]],
                d: [[1, -a], [0, 1]],
            },
            LElement::Gamma1(g) => GElement::Gamma1(g).to_sp4(),
        }
    }
}

/// `γ.Ω = (AΩ+B)(CΩ+D)^{−1}` for an element of `G`.
pub fn sp4_action(g: GElement, omega: &PeriodMatrix) -> Result<PeriodMatrix> {
    g.to_sp4().act(omega)
}
