use std::collections::HashMap;

use num_complex::Complex64;
use sewing_core::epsilon::{period_matrix_eps, EpsPoint};
use sewing_core::formal::*;
use sewing_core::rho::{period_matrix_rho, principal_log_term, RhoPoint};
use sewing_core::special::{EisensteinTable, EllipticTable, SeriesTolerance, Tau};
use sewing_core::TWO_PI_I;

mod common;
use common::*;

#[test]
fn eps_series_matches_table_but_one_coefficient() {
    let s = symbolic_period_eps(9).unwrap();
    let o11 = parse_poly(EPS_OMEGA11, "eps").unwrap();
    assert_eq!(s.omega11, o11);
    assert_eq!(s.omega22, o11.rename(swap_tori));
    // The printed ε⁸ coefficient of −2πiΩ₁₂/ε has 5·E₂E₆F₂F₆; the three
    // necklaces (1,1,5), (1,5,1), (5,1,1) each weigh 5, giving 15.
    let printed = parse_poly(EPS_OMEGA12, "eps").unwrap();
    let difference = s.omega12.clone() - printed;
    assert_eq!(difference, parse_poly("-10*E2*E6*F2*F6*eps^9", "eps").unwrap());
    let e8f8 = s.omega12.coefficient(18);
    let seven = e8f8
        .terms()
        .find(|(k, _)| k.monomial == vec![(Generator::E(8), 1), (Generator::F(8), 1)])
        .map(|(_, v)| v.to_string());
    assert_eq!(seven, Some("-7".into()));
}

#[test]
fn disputed_coefficient_settled_numerically() {
    // With E₂E₆F₂F₆ enlarged at τ₁ = τ₂ = 0.6i, the computed series has an
    // O(ε¹¹) remainder while the printed one leaves an O(ε⁹) error.
    let t = Tau::new(c(0.0, 0.6)).unwrap();
    let env = eps_assignment(t, t, 20);
    let ours = symbolic_period_eps(9).unwrap().omega12;
    let printed = parse_poly(EPS_OMEGA12, "eps").unwrap();
    let err = |series: &GradedPoly, eps: f64| {
        let eps = c(eps, 0.0);
        let numeric = period_matrix_eps(&EpsPoint::new(t, t, eps), 30, SeriesTolerance::default())
            .unwrap()
            .scaled()[1];
        (evaluate_series(series, &env, eps).unwrap() - numeric).norm()
    };
    let ours_ratio = err(&ours, 0.8) / err(&ours, 0.4);
    let printed_ratio = err(&printed, 0.8) / err(&printed, 0.4);
    assert!(ours_ratio > 1700.0, "{ours_ratio}");
    assert!(printed_ratio < 1300.0, "{printed_ratio}");
    assert!(err(&ours, 0.4) < err(&printed, 0.4) / 3.0);
}

#[test]
fn eps_series_swap_symmetry() {
    let s = symbolic_period_eps(10).unwrap();
    assert_eq!(s.omega22, s.omega11.rename(swap_tori));
    assert_eq!(s.omega12, s.omega12.rename(swap_tori));
    // only odd powers in Ω₁₂, even in the diagonal
    assert!(s.omega12.terms().all(|(k, _)| k.half_power % 4 == 2));
    assert!(s.omega11.terms().all(|(k, _)| k.half_power % 4 == 0));
}

#[test]
fn rho_series_matches_table() {
    let s = symbolic_period_rho(4).unwrap();
    assert_eq!(s.omega11, parse_poly(RHO_OMEGA11, "rho").unwrap());
    assert_eq!(s.omega12, parse_poly(RHO_OMEGA12, "rho").unwrap());
    assert_eq!(s.omega22, parse_poly(RHO_OMEGA22, "rho").unwrap());
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn eps_assignment(t1: Tau, t2: Tau, max_k: usize) -> HashMap<Generator, Complex64> {
    let tol = SeriesTolerance::default();
    let e = EisensteinTable::new(t1, max_k, tol).unwrap();
    let f = EisensteinTable::new(t2, max_k, tol).unwrap();
    let mut env = HashMap::new();
    for k in (2..=max_k).step_by(2) {
        env.insert(Generator::E(k as u32), e.get(k).unwrap());
        env.insert(Generator::F(k as u32), f.get(k).unwrap());
    }
    env.insert(Generator::TwoPiITau1, TWO_PI_I * t1.value());
    env.insert(Generator::TwoPiITau2, TWO_PI_I * t2.value());
    env
}

#[test]
fn eps_series_agrees_with_numeric_pipeline() {
    let s = symbolic_period_eps(9).unwrap();
    for (t1, t2, eps) in [
        (c(0.0, 1.0), c(0.0, 2.0), c(0.1, 0.0)),
        (c(0.2, 1.3), c(-0.1, 0.9), c(0.05, 0.05)),
        (c(0.5, 1.0), c(0.0, 1.5), c(-0.08, 0.02)),
    ] {
        let (t1, t2) = (Tau::new(t1).unwrap(), Tau::new(t2).unwrap());
        let env = eps_assignment(t1, t2, 20);
        let numeric = period_matrix_eps(&EpsPoint::new(t1, t2, eps), 16, SeriesTolerance::default())
            .unwrap()
            .scaled();
        let bound = 5.0 * eps.norm().powi(10);
        for (series, value) in s.entries().iter().zip(numeric) {
            let v = evaluate_series(series, &env, eps).unwrap() / TWO_PI_I;
            assert!(
                (v - value / TWO_PI_I).norm() < bound,
                "{:e} vs {bound:e}",
                (v - value / TWO_PI_I).norm()
            );
        }
    }
}

#[test]
fn rho_series_agrees_with_numeric_pipeline() {
    let tol = SeriesTolerance::default();
    let s = symbolic_period_rho(5).unwrap();
    for (t, w, rho) in [
        (c(0.0, 1.0), c(1.0, 0.3), c(0.002, 0.001)),
        (c(0.1, 1.1), c(1.0, 0.5), c(0.001, -0.001)),
        (c(-0.3, 0.9), c(0.5, -1.0), c(-0.002, 0.0)),
    ] {
        let t = Tau::new(t).unwrap();
        let e = EisensteinTable::new(t, 12, tol).unwrap();
        let p = EllipticTable::new(t, w, 12, tol).unwrap();
        let mut env = HashMap::new();
        for k in 1..=12u32 {
            env.insert(Generator::P(k), p.get(k as usize).unwrap());
            if k % 2 == 0 {
                env.insert(Generator::E(k), e.get(k as usize).unwrap());
            }
        }
        env.insert(Generator::TwoPiITau1, TWO_PI_I * t.value());
        env.insert(Generator::W, w);
        env.insert(Generator::LogHead, principal_log_term(t, w, rho, tol).unwrap());
        let numeric = period_matrix_rho(&RhoPoint::new(t, w, rho, 0), 16, tol)
            .unwrap()
            .scaled();
        for (series, value) in s.entries().iter().zip(numeric) {
            let v = evaluate_series(series, &env, rho).unwrap();
            // remainder O(ρ⁶) with coefficients of size |P_k|^… at these points
            assert!((v - value).norm() < 1e-9, "{:e}", (v - value).norm());
        }
    }
}

#[test]
fn zero_assignment_keeps_heads_only() {
    let s = symbolic_period_eps(6).unwrap();
    let mut env: HashMap<Generator, Complex64> = HashMap::new();
    for k in (2..=12).step_by(2) {
        env.insert(Generator::E(k), c(0.0, 0.0));
        env.insert(Generator::F(k), c(0.0, 0.0));
    }
    env.insert(Generator::TwoPiITau1, c(1.0, 2.0));
    env.insert(Generator::TwoPiITau2, c(3.0, 4.0));
    let eps = c(0.3, 0.0);
    assert_eq!(evaluate_series(&s.omega11, &env, eps).unwrap(), c(1.0, 2.0));
    assert_eq!(evaluate_series(&s.omega22, &env, eps).unwrap(), c(3.0, 4.0));
    assert!((evaluate_series(&s.omega12, &env, eps).unwrap() + eps).norm() < 1e-15);
}
