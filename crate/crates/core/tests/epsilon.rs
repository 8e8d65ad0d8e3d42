use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sewing_core::epsilon::*;
use sewing_core::groups::{GElement, Sl2};
use sewing_core::newton::NewtonOptions;
use sewing_core::period::PeriodMatrix;
use sewing_core::special::{weierstrass_p, SeriesTolerance, Tau};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn tau(re: f64, im: f64) -> Tau {
    Tau::new(c(re, im)).unwrap()
}

fn tol() -> SeriesTolerance {
    SeriesTolerance::default()
}

fn random_point(rng: &mut ChaCha8Rng) -> EpsPoint {
    let t1 = tau(rng.gen_range(-0.5..0.5), rng.gen_range(0.9..1.6));
    let t2 = tau(rng.gen_range(-0.5..0.5), rng.gen_range(0.9..1.6));
    let r = rng.gen_range(0.05..0.3);
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    EpsPoint::new(t1, t2, Complex64::from_polar(r, phase))
}

#[test]
fn necklaces_match_matrix_route() {
    let p = EpsPoint::new(tau(0.0, 1.0), tau(0.0, 2.0), c(0.2, 0.0));
    let m = period_matrix_eps(&p, 16, tol()).unwrap();
    let nk = necklace_period_eps(&p, 8, tol()).unwrap();
    assert!(m.max_abs_diff(&nk) < 1e-10, "{}", m.max_abs_diff(&nk));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let p = random_point(&mut rng);
        let m = period_matrix_eps(&p, 16, tol()).unwrap();
        let nk = necklace_period_eps(&p, 10, tol()).unwrap();
        // weight order 10 ⇒ period error O(ε¹²)
        let bound = 50.0 * p.eps.norm().powi(12);
        assert!(m.max_abs_diff(&nk) < bound.max(1e-13));
    }
}

#[test]
fn degenerate_necklace_and_first_edge() {
    let p = EpsPoint::new(tau(0.0, 1.0), tau(0.0, 2.0), c(0.05, 0.02));
    let o = necklace_period_eps(&p, 0, tol()).unwrap();
    let s = o.scaled();
    assert!((s[1] + p.eps).norm() < 1e-16 * 10.0);
    assert_eq!(s[0], sewing_core::complex::TWO_PI_I * p.tau1.value());
    let o2 = necklace_period_eps(&p, 2, tol()).unwrap().scaled();
    let f2 = sewing_core::special::eisenstein(2, p.tau2, tol()).unwrap();
    assert!((o2[0] - sewing_core::complex::TWO_PI_I * p.tau1.value() - p.eps * p.eps * f2).norm() < 1e-14);
}

#[test]
fn off_diagonal_duality_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let p = random_point(&mut rng);
        let (x, y) = off_diagonal_duality(&p, 14, tol()).unwrap();
        assert!((x - y).norm() < 1e-12);
    }
}

#[test]
fn equivariance_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gens = [
        GElement::Gamma1(Sl2::S),
        GElement::Gamma1(Sl2::T),
        GElement::Gamma2(Sl2::S),
        GElement::Gamma2(Sl2::T),
        GElement::BetaSwap,
    ];
    for _ in 0..3 {
        let p = random_point(&mut rng);
        for g in gens {
            let r = equivariance_residual_eps(g, &p, 16, tol()).unwrap();
            assert!(r < 1e-8, "{g:?} at {p:?}: {r}");
        }
    }
    let p = EpsPoint::new(tau(0.0, 1.0), tau(0.0, 2.0), c(0.3, 0.0));
    assert!(equivariance_residual_eps(GElement::BetaSwap, &p, 16, tol()).unwrap() < 1e-9);
    assert_eq!(
        equivariance_residual_eps(GElement::Gamma1(Sl2::IDENTITY), &p, 16, tol()).unwrap(),
        0.0
    );
}

#[test]
fn domain_preserved_by_g() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let p = random_point(&mut rng);
        for g in [
            GElement::Gamma1(Sl2::S),
            GElement::Gamma2(Sl2::new(2, 1, 1, 1).unwrap()),
            GElement::BetaSwap,
        ] {
            let q = g_action_eps(g, &p).unwrap();
            assert!((in_domain_eps(&q).margin - in_domain_eps(&p).margin).abs() < 1e-12);
        }
    }
}

#[test]
fn holomorphy_mean_value() {
    let p = EpsPoint::new(tau(0.1, 1.1), tau(-0.2, 1.4), c(0.15, 0.05));
    let center = period_matrix_eps(&p, 16, tol()).unwrap();
    let m = 32;
    let mut mean = [c(0.0, 0.0); 3];
    for j in 0..m {
        let e = p.eps + Complex64::from_polar(0.05, std::f64::consts::TAU * j as f64 / m as f64);
        let o = period_matrix_eps(&EpsPoint::new(p.tau1, p.tau2, e), 16, tol()).unwrap();
        for (acc, v) in mean.iter_mut().zip(o.entries()) {
            *acc += v / m as f64;
        }
    }
    let mean = PeriodMatrix::new(mean[0], mean[1], mean[2]);
    assert!(mean.max_abs_diff(&center) < 1e-8);
}

#[test]
fn truncation_order_scaling() {
    let t1 = tau(0.0, 1.0);
    let t2 = tau(0.0, 1.3);
    let n = 4;
    let diff = |eps: f64| {
        let p = EpsPoint::new(t1, t2, c(eps, 0.0));
        let a = period_matrix_eps(&p, n, tol()).unwrap();
        let b = period_matrix_eps(&p, n + 2, tol()).unwrap();
        a.max_abs_diff(&b)
    };
    let ratio = diff(0.4) / diff(0.2);
    // |Ω(N) − Ω(N+2)| = O(|ε|^{N+1}) or higher
    assert!(ratio > 2f64.powi(n as i32 + 1) * 0.8, "ratio {ratio}");
}

#[test]
fn siegel_membership_interior() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let p = random_point(&mut rng);
        assert!(in_domain_eps(&p).margin < 0.5);
        assert!(period_matrix_eps(&p, 12, tol()).unwrap().in_siegel_space());
    }
}

#[test]
fn branch_flip_invariance() {
    let p = EpsPoint::new(tau(0.2, 1.1), tau(-0.1, 0.9), c(-0.2, 0.1));
    let a = period_matrix_eps_with_root(&p, p.eps.sqrt(), 14, tol()).unwrap();
    let b = period_matrix_eps_with_root(&p, -p.eps.sqrt(), 14, tol()).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-12);
}

#[test]
fn bilinear_form_properties() {
    let p = EpsPoint::new(tau(0.1, 1.0), tau(0.0, 1.4), c(0.05, 0.02));
    let x = c(1.5, 0.9);
    let y = c(-1.2, 1.7);
    for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let f = bilinear_form_eps(&p, x, y, (a, b), 12, tol()).unwrap();
        let g = bilinear_form_eps(&p, y, x, (b, a), 12, tol()).unwrap();
        assert!((f - g).norm() < 1e-10 * f.norm().max(1.0));
    }
    // ε → 0 on one torus
    let small = EpsPoint::new(p.tau1, p.tau2, c(1e-9, 0.0));
    let f = bilinear_form_eps(&small, x, y, (1, 1), 8, tol()).unwrap();
    assert!((f - weierstrass_p(2, p.tau1, x - y, tol()).unwrap()).norm() < 1e-12);
    // leading cross term −Σ a₁(k,x)a₂(k,y)
    let eps = c(1e-3, 0.0);
    let q = EpsPoint::new(p.tau1, p.tau2, eps);
    let f = bilinear_form_eps(&q, x, y, (1, 2), 8, tol()).unwrap();
    let lead = -eps * weierstrass_p(2, p.tau1, x, tol()).unwrap() * weierstrass_p(2, p.tau2, y, tol()).unwrap();
    assert!((f - lead).norm() < 1e-2 * lead.norm());
}

#[test]
fn inversion_round_trip() {
    let p = EpsPoint::new(tau(0.0, 1.0), tau(0.0, 2.0), c(0.1, 0.0));
    let o = period_matrix_eps(&p, 16, tol()).unwrap();
    let inv = invert_eps(&o, None, NewtonOptions::default(), 16, tol()).unwrap();
    assert!((inv.point.tau1.value() - p.tau1.value()).norm() < 1e-9);
    assert!((inv.point.tau2.value() - p.tau2.value()).norm() < 1e-9);
    assert!((inv.point.eps - p.eps).norm() < 1e-9);

    let diag = PeriodMatrix::diag(c(0.1, 1.2), c(-0.3, 0.8));
    let inv = invert_eps(&diag, None, NewtonOptions::default(), 12, tol()).unwrap();
    assert_eq!(inv.point.eps, c(0.0, 0.0));
    assert_eq!(inv.iterations, 0);
}
