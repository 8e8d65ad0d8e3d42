//! Exact graded polynomials over Eisenstein and elliptic generators with a
//! formal sewing parameter, and the symbolic period-matrix series.

mod parse;
mod series;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SewingError};

pub use parse::parse_poly;
pub use series::{symbolic_period_eps, symbolic_period_rho, SymbolicPeriod, MAX_EPS_ORDER, MAX_RHO_ORDER};

/// A polynomial generator.
///
/// `E(k)` is `E_k(τ₁)` (or `E_k(τ)` for self-sewing), `F(k)` is `E_k(τ₂)`,
/// `P(k)` is `P_k(τ, w)`. The heads stand for `2πiτ₁`, `2πiτ₂`, `w` and
/// `log(−ρ/K(τ,w)²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    E(u32),
    F(u32),
    P(u32),
    TwoPiITau1,
    TwoPiITau2,
    W,
    LogHead,
}

impl Generator {
    pub fn weight(&self) -> u32 {
        match *self {
            Generator::E(k) | Generator::F(k) | Generator::P(k) => k,
            _ => 0,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Generator::E(k) => format!("E{k}"),
            Generator::F(k) => format!("F{k}"),
            Generator::P(k) => format!("P{k}"),
            Generator::TwoPiITau1 => "tau1".into(),
            Generator::TwoPiITau2 => "tau2".into(),
            Generator::W => "w".into(),
            Generator::LogHead => "log".into(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Key of one term: parameter power in half units, total weight, monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub half_power: i64,
    pub weight: u32,
    pub monomial: Vec<(Generator, u32)>,
}

impl TermKey {
    fn new(half_power: i64, monomial: Vec<(Generator, u32)>) -> Self {
        let weight = monomial.iter().map(|(g, p)| g.weight() * p).sum();
        TermKey {
            half_power,
            weight,
            monomial,
        }
    }

    fn times(&self, other: &TermKey) -> TermKey {
        let mut merged: BTreeMap<Generator, u32> = self.monomial.iter().copied().collect();
        for &(g, p) in &other.monomial {
            *merged.entry(g).or_insert(0) += p;
        }
        TermKey::new(self.half_power + other.half_power, merged.into_iter().collect())
    }
}

/// A polynomial in the generators and a formal parameter, with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedPoly {
    terms: BTreeMap<TermKey, BigRational>,
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl GradedPoly {
    pub fn zero() -> Self {
        GradedPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        GradedPoly::term(c, 0, &[])
    }

    pub fn integer(n: i64) -> Self {
        GradedPoly::constant(rational(n))
    }

    /// `c · param^{half_power/2} · Π g^p`.
    pub fn term(c: BigRational, half_power: i64, monomial: &[(Generator, u32)]) -> Self {
        let mut p = GradedPoly::zero();
        if !c.is_zero() {
            let mut merged: BTreeMap<Generator, u32> = BTreeMap::new();
            for &(g, e) in monomial {
                if e > 0 {
                    *merged.entry(g).or_insert(0) += e;
                }
            }
            p.terms
                .insert(TermKey::new(half_power, merged.into_iter().collect()), c);
        }
        p
    }

    pub fn generator(g: Generator) -> Self {
        GradedPoly::term(rational(1), 0, &[(g, 1)])
    }

    /// The formal parameter to the power `half_power/2`.
    pub fn param_half_power(half_power: i64) -> Self {
        GradedPoly::term(rational(1), half_power, &[])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: TermKey, c: BigRational) {
        let slot = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Drops every term with parameter power above `max_half/2`.
    pub fn truncate(&self, max_half: i64) -> Self {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.half_power <= max_half)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Product truncated at parameter power `max_half/2`.
    pub fn mul_truncated(&self, other: &GradedPoly, max_half: i64) -> Self {
        let mut out = GradedPoly::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                if ka.half_power + kb.half_power > max_half {
                    continue;
                }
                out.add_term(ka.times(kb), va * vb);
            }
        }
        out
    }

    /// The coefficient of `param^{half_power/2}` as a polynomial in the generators.
    pub fn coefficient(&self, half_power: i64) -> GradedPoly {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.half_power == half_power)
                .map(|(k, v)| (TermKey::new(0, k.monomial.clone()), v.clone()))
                .collect(),
        }
    }

    /// Multiplies by `param^{half_power/2}`.
    pub fn shift(&self, half_power: i64) -> GradedPoly {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (TermKey::new(k.half_power + half_power, k.monomial.clone()), v.clone()))
                .collect(),
        }
    }

    pub fn max_half_power(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.half_power).max()
    }

    /// True when every parameter power is an integer.
    pub fn has_integer_powers(&self) -> bool {
        self.terms.keys().all(|k| k.half_power % 2 == 0)
    }

    /// Replaces each generator by its image under `map`.
    pub fn rename(&self, map: impl Fn(Generator) -> Generator) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (k, v) in &self.terms {
            let mono: Vec<(Generator, u32)> = k.monomial.iter().map(|&(g, p)| (map(g), p)).collect();
            out = out + GradedPoly::term(v.clone(), k.half_power, &mono);
        }
        out
    }

    /// Canonical one-line text form, terms in key order.
    pub fn to_canonical_string(&self, param: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, v)) in self.terms.iter().enumerate() {
            let negative = v.is_negative();
            let mag = v.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (k.monomial.is_empty() && k.half_power == 0) {
                factors.push(mag.to_string());
            }
            for &(g, p) in &k.monomial {
                factors.push(if p == 1 { g.name() } else { format!("{}^{p}", g.name()) });
            }
            match k.half_power {
                0 => {}
                2 => factors.push(param.to_string()),
                h if h % 2 == 0 => factors.push(format!("{param}^{}", h / 2)),
                h => factors.push(format!("{param}^({h}/2)")),
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Machine-readable term list.
    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .map(|(k, v)| JsonTerm {
                coefficient: v.to_string(),
                param_power: if k.half_power % 2 == 0 {
                    (k.half_power / 2).to_string()
                } else {
                    format!("{}/2", k.half_power)
                },
                monomial: k
                    .monomial
                    .iter()
                    .map(|&(g, p)| JsonFactor {
                        symbol: g.name(),
                        power: p,
                    })
                    .collect(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonFactor {
    pub symbol: String,
    pub power: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coefficient: String,
    pub param_power: String,
    pub monomial: Vec<JsonFactor>,
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(mut self, rhs: GradedPoly) -> GradedPoly {
        for (k, v) in rhs.terms {
            self.add_term(k, v);
        }
        self
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: GradedPoly) -> GradedPoly {
        self + (-rhs)
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.mul_truncated(rhs, i64::MAX)
    }
}

/// Evaluates `s` with generator values from `assignment` and parameter `param`.
///
/// Half-integer parameter powers use the principal square root.
pub fn evaluate_series(
    s: &GradedPoly,
    assignment: &HashMap<Generator, Complex64>,
    param: Complex64,
) -> Result<Complex64> {
    let root = param.sqrt();
    let mut total = Complex64::new(0.0, 0.0);
    for (k, v) in &s.terms {
        let mut term = Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0);
        for &(g, p) in &k.monomial {
            let value = assignment
                .get(&g)
                .ok_or_else(|| SewingError::UnassignedGenerator(g.name()))?;
            term *= value.powu(p);
        }
        term *= if k.half_power >= 0 {
            root.powu(k.half_power as u32)
        } else {
            root.powi(k.half_power as i32)
        };
        total += term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(k: u32) -> GradedPoly {
        GradedPoly::generator(Generator::E(k))
    }

    #[test]
    fn ring_arithmetic() {
        let a = e(2) + GradedPoly::integer(1);
        let sq = &a * &a;
        let expected = &e(2) * &e(2) + e(2).scale(&rational(2)) + GradedPoly::integer(1);
        assert_eq!(sq, expected);
        assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn truncation_and_coefficients() {
        let p = GradedPoly::param_half_power(1) + GradedPoly::param_half_power(4).scale(&rational(3));
        assert_eq!(p.truncate(2).len(), 1);
        assert!(!p.has_integer_powers());
        assert_eq!(p.coefficient(4), GradedPoly::integer(3));
        assert_eq!((&p * &p).truncate(2), GradedPoly::param_half_power(2));
    }

    #[test]
    fn evaluation() {
        let mut env = HashMap::new();
        assert_eq!(
            evaluate_series(&GradedPoly::integer(5), &env, Complex64::new(0.3, 0.0)).unwrap(),
            Complex64::new(5.0, 0.0)
        );
        let p = e(4).shift(2) + GradedPoly::integer(2);
        assert!(matches!(
            evaluate_series(&p, &env, Complex64::new(1.0, 0.0)),
            Err(SewingError::UnassignedGenerator(_))
        ));
        env.insert(Generator::E(4), Complex64::new(0.0, 0.0));
        assert_eq!(
            evaluate_series(&p, &env, Complex64::new(7.0, 0.0)).unwrap(),
            Complex64::new(2.0, 0.0)
        );
        env.insert(Generator::E(4), Complex64::new(2.0, 1.0));
        let v = evaluate_series(&p, &env, Complex64::new(0.5, 0.0)).unwrap();
        assert!((v - Complex64::new(3.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn canonical_text() {
        let p = GradedPoly::generator(Generator::TwoPiITau1)
            + e(2).shift(4).scale(&rational(-3))
            + (&e(2) * &GradedPoly::generator(Generator::F(4))).shift(4);
        assert_eq!(p.to_canonical_string("eps"), "tau1 - 3*E2*eps^2 + E2*F4*eps^2");
        assert_eq!(GradedPoly::zero().to_canonical_string("eps"), "0");
        let json = p.to_json_terms();
        assert_eq!(json[1].coefficient, "-3");
        assert_eq!(json[1].param_power, "2");
    }
}
