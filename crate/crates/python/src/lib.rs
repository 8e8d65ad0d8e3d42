//! Python bindings for genus-two period matrices from sewn tori.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use sewing_core::epsilon::{self, EpsPoint};
use sewing_core::formal::{symbolic_period_eps, symbolic_period_rho};
use sewing_core::groups::{GElement, LElement, Sl2};
use sewing_core::newton::NewtonOptions;
use sewing_core::rho::{self, ChiPoint, RhoPoint};
use sewing_core::special::{self, SeriesTolerance, Tau};
use sewing_core::sphere::{self, CatalanChi};
use sewing_core::SewingError;

pyo3::create_exception!(
    genus2,
    OutOfDomainError,
    PyValueError,
    "The point lies outside the sewing domain."
);
pyo3::create_exception!(
    genus2,
    ConvergenceError,
    PyRuntimeError,
    "A series or Newton iteration did not converge."
);

fn err(e: SewingError) -> PyErr {
    let msg = e.to_string();
    match e {
        SewingError::OutOfDomain { .. }
        | SewingError::Pole
        | SewingError::NearDegenerate { .. }
        | SewingError::ActionSingular => OutOfDomainError::new_err(msg),
        SewingError::Divergence { .. }
        | SewingError::DomainExit { .. }
        | SewingError::ToleranceNotMet { .. }
        | SewingError::TruncationTooCoarse { .. }
        | SewingError::BudgetExceeded { .. } => ConvergenceError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

fn to_tau(z: Complex64) -> PyResult<Tau> {
    Tau::new(z).map_err(err)
}

fn tol(abs_tol: f64) -> PyResult<SeriesTolerance> {
    SeriesTolerance::new(abs_tol, 10_000).map_err(err)
}

fn newton(newton_tol: f64, max_iter: usize) -> NewtonOptions {
    NewtonOptions {
        tol: newton_tol,
        max_iterations: max_iter,
        ..NewtonOptions::default()
    }
}

/// A symmetric 2x2 period matrix.
#[pyclass(name = "PeriodMatrix", module = "genus2", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyPeriodMatrix(sewing_core::PeriodMatrix);

#[pymethods]
impl PyPeriodMatrix {
    #[new]
    fn new(omega11: Complex64, omega12: Complex64, omega22: Complex64) -> Self {
        PyPeriodMatrix(sewing_core::PeriodMatrix::new(omega11, omega12, omega22))
    }

    #[getter]
    fn omega11(&self) -> Complex64 {
        self.0.omega11
    }

    #[getter]
    fn omega12(&self) -> Complex64 {
        self.0.omega12
    }

    #[getter]
    fn omega22(&self) -> Complex64 {
        self.0.omega22
    }

    /// The matrix as nested lists.
    fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.0.as_array()
    }

    /// True when the matrix is symmetric with positive-definite imaginary part.
    fn in_siegel_space(&self) -> bool {
        self.0.in_siegel_space()
    }

    fn max_abs_diff(&self, other: &PyPeriodMatrix) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "PeriodMatrix(omega11={}, omega12={}, omega22={})",
            self.0.omega11, self.0.omega12, self.0.omega22
        )
    }
}

/// E_k(tau) from its Lambert series.
#[pyfunction]
#[pyo3(signature = (k, tau, abs_tol = 1e-14))]
fn eisenstein(k: usize, tau: Complex64, abs_tol: f64) -> PyResult<Complex64> {
    special::eisenstein(k, to_tau(tau)?, tol(abs_tol)?).map_err(err)
}

/// P_k(tau, z).
#[pyfunction]
#[pyo3(signature = (k, tau, z, abs_tol = 1e-14))]
fn weierstrass_p(k: usize, tau: Complex64, z: Complex64, abs_tol: f64) -> PyResult<Complex64> {
    special::weierstrass_p(k, to_tau(tau)?, z, tol(abs_tol)?).map_err(err)
}

/// The prime form K(tau, z).
#[pyfunction]
#[pyo3(signature = (tau, z, abs_tol = 1e-14))]
fn prime_form(tau: Complex64, z: Complex64, abs_tol: f64) -> PyResult<Complex64> {
    special::prime_form(to_tau(tau)?, z, tol(abs_tol)?).map_err(err)
}

/// (inside, margin) for the eps-sewing domain.
#[pyfunction]
fn in_domain_eps(tau1: Complex64, tau2: Complex64, eps: Complex64) -> PyResult<(bool, f64)> {
    let d = epsilon::in_domain_eps(&EpsPoint::new(to_tau(tau1)?, to_tau(tau2)?, eps));
    Ok((d.inside, d.margin))
}

/// (inside, margin) for the rho-sewing domain.
#[pyfunction]
fn in_domain_rho(tau: Complex64, w: Complex64, rho: Complex64) -> PyResult<(bool, f64)> {
    let d = rho::in_domain_rho(&RhoPoint::new(to_tau(tau)?, w, rho, 0));
    Ok((d.inside, d.margin))
}

/// Period matrix of two tori sewn with parameter eps, at truncation order N.
#[pyfunction]
#[pyo3(signature = (tau1, tau2, eps, order = epsilon::DEFAULT_ORDER, abs_tol = 1e-14))]
fn period_matrix_eps(
    tau1: Complex64,
    tau2: Complex64,
    eps: Complex64,
    order: usize,
    abs_tol: f64,
) -> PyResult<PyPeriodMatrix> {
    let p = EpsPoint::new(to_tau(tau1)?, to_tau(tau2)?, eps);
    epsilon::period_matrix_eps(&p, order, tol(abs_tol)?)
        .map(PyPeriodMatrix)
        .map_err(err)
}

/// Period matrix of a self-sewn torus; `branch` selects the logarithm in omega22.
#[pyfunction]
#[pyo3(signature = (tau, w, rho, branch = 0, order = rho::DEFAULT_ORDER, abs_tol = 1e-14))]
fn period_matrix_rho(
    tau: Complex64,
    w: Complex64,
    rho: Complex64,
    branch: i64,
    order: usize,
    abs_tol: f64,
) -> PyResult<PyPeriodMatrix> {
    let p = RhoPoint::new(to_tau(tau)?, w, rho, branch);
    rho::period_matrix_rho(&p, order, tol(abs_tol)?)
        .map(PyPeriodMatrix)
        .map_err(err)
}

/// Period matrix in the coordinates (tau, w, chi) with chi = -rho/w^2.
#[pyfunction]
#[pyo3(signature = (tau, w, chi, order = rho::DEFAULT_ORDER, abs_tol = 1e-14))]
fn period_matrix_chi(
    tau: Complex64,
    w: Complex64,
    chi: Complex64,
    order: usize,
    abs_tol: f64,
) -> PyResult<PyPeriodMatrix> {
    let c = ChiPoint::new(to_tau(tau)?, w, chi);
    rho::period_matrix_chi(&c, order, tol(abs_tol)?)
        .map(PyPeriodMatrix)
        .map_err(err)
}

/// Period matrix from necklaces up to eps^max_order.
#[pyfunction]
#[pyo3(signature = (tau1, tau2, eps, max_order = 8, abs_tol = 1e-14))]
fn necklace_period_eps(
    tau1: Complex64,
    tau2: Complex64,
    eps: Complex64,
    max_order: usize,
    abs_tol: f64,
) -> PyResult<PyPeriodMatrix> {
    let p = EpsPoint::new(to_tau(tau1)?, to_tau(tau2)?, eps);
    epsilon::necklace_period_eps(&p, max_order, tol(abs_tol)?)
        .map(PyPeriodMatrix)
        .map_err(err)
}

/// Period matrix from necklaces up to rho^max_order.
#[pyfunction]
#[pyo3(signature = (tau, w, rho, branch = 0, max_order = 4, abs_tol = 1e-14))]
fn necklace_period_rho(
    tau: Complex64,
    w: Complex64,
    rho: Complex64,
    branch: i64,
    max_order: usize,
    abs_tol: f64,
) -> PyResult<PyPeriodMatrix> {
    let p = RhoPoint::new(to_tau(tau)?, w, rho, branch);
    rho::necklace_period_rho(&p, max_order, tol(abs_tol)?)
        .map(PyPeriodMatrix)
        .map_err(err)
}

/// (tau1, tau2, eps) with the given period matrix.
#[pyfunction]
#[pyo3(signature = (omega, order = 16, newton_tol = 1e-12, max_iter = 50, abs_tol = 1e-14))]
fn invert_eps(
    omega: &PyPeriodMatrix,
    order: usize,
    newton_tol: f64,
    max_iter: usize,
    abs_tol: f64,
) -> PyResult<(Complex64, Complex64, Complex64)> {
    let inv = epsilon::invert_eps(&omega.0, None, newton(newton_tol, max_iter), order, tol(abs_tol)?).map_err(err)?;
    Ok((inv.point.tau1.value(), inv.point.tau2.value(), inv.point.eps))
}

/// (tau, w, chi) with the given period matrix.
#[pyfunction]
#[pyo3(signature = (omega, order = 16, newton_tol = 1e-12, max_iter = 50, abs_tol = 1e-14))]
fn invert_chi(
    omega: &PyPeriodMatrix,
    order: usize,
    newton_tol: f64,
    max_iter: usize,
    abs_tol: f64,
) -> PyResult<(Complex64, Complex64, Complex64)> {
    let inv = rho::invert_chi(&omega.0, None, newton(newton_tol, max_iter), order, tol(abs_tol)?).map_err(err)?;
    Ok((inv.point.tau.value(), inv.point.w, inv.point.chi))
}

/// (tau1, tau2, eps) of the surface with coordinates (tau, w, chi).
#[pyfunction]
#[pyo3(signature = (tau, w, chi, order = 16, newton_tol = 1e-12, max_iter = 50, abs_tol = 1e-14))]
fn eps_from_rho(
    tau: Complex64,
    w: Complex64,
    chi: Complex64,
    order: usize,
    newton_tol: f64,
    max_iter: usize,
    abs_tol: f64,
) -> PyResult<(Complex64, Complex64, Complex64)> {
    let c = ChiPoint::new(to_tau(tau)?, w, chi);
    let inv = rho::eps_from_rho(&c, order, newton(newton_tol, max_iter), tol(abs_tol)?).map_err(err)?;
    Ok((inv.point.tau1.value(), inv.point.tau2.value(), inv.point.eps))
}

/// Equivariance residuals for S and T on each torus and the swap beta.
#[pyfunction]
#[pyo3(signature = (tau1, tau2, eps, order = 16, abs_tol = 1e-14))]
fn equivariance_eps(
    tau1: Complex64,
    tau2: Complex64,
    eps: Complex64,
    order: usize,
    abs_tol: f64,
) -> PyResult<BTreeMap<String, f64>> {
    let p = EpsPoint::new(to_tau(tau1)?, to_tau(tau2)?, eps);
    let t = tol(abs_tol)?;
    let gens = [
        ("gamma1_S", GElement::Gamma1(Sl2::S)),
        ("gamma1_T", GElement::Gamma1(Sl2::T)),
        ("gamma2_S", GElement::Gamma2(Sl2::S)),
        ("gamma2_T", GElement::Gamma2(Sl2::T)),
        ("beta", GElement::BetaSwap),
    ];
    gens.into_iter()
        .map(|(name, g)| {
            Ok((
                name.to_string(),
                epsilon::equivariance_residual_eps(g, &p, order, t).map_err(err)?,
            ))
        })
        .collect()
}

/// Equivariance residuals for mu(1,0,0), mu(0,1,0), mu(0,0,1), T and S.
#[pyfunction]
#[pyo3(signature = (tau, w, rho, branch = 0, order = 16, abs_tol = 1e-14))]
fn equivariance_rho(
    tau: Complex64,
    w: Complex64,
    rho: Complex64,
    branch: i64,
    order: usize,
    abs_tol: f64,
) -> PyResult<BTreeMap<String, f64>> {
    let p = RhoPoint::new(to_tau(tau)?, w, rho, branch);
    let t = tol(abs_tol)?;
    let gens = [
        ("mu_100", LElement::Mu { a: 1, b: 0, c: 0 }),
        ("mu_010", LElement::Mu { a: 0, b: 1, c: 0 }),
        ("mu_001", LElement::Mu { a: 0, b: 0, c: 1 }),
        ("gamma1_T", LElement::Gamma1(Sl2::T)),
        ("gamma1_S", LElement::Gamma1(Sl2::S)),
    ];
    gens.into_iter()
        .map(|(name, g)| {
            Ok((
                name.to_string(),
                rho::equivariance_residual_rho(g, &p, order, t).map_err(err)?,
            ))
        })
        .collect()
}

/// f(chi), the root of chi = f/(1+f)^2 vanishing at chi = 0.
#[pyfunction]
fn catalan_f(chi: Complex64) -> PyResult<Complex64> {
    Ok(sphere::catalan_f(CatalanChi::new(chi).map_err(err)?))
}

/// q of the torus obtained by self-sewing the Catalan sphere, at truncation order N.
#[pyfunction]
#[pyo3(signature = (chi, order = 24))]
fn torus_modulus_catalan(chi: Complex64, order: usize) -> PyResult<Complex64> {
    let c = CatalanChi::new(chi).map_err(err)?;
    Ok(sphere::torus_modulus_catalan(c, order).map_err(err)?.q)
}

/// E_2 at q = f(chi) from the Catalan sphere moments.
#[pyfunction]
#[pyo3(signature = (chi, order = 24))]
fn e2_from_catalan(chi: Complex64, order: usize) -> PyResult<Complex64> {
    sphere::e2_from_catalan(CatalanChi::new(chi).map_err(err)?, order).map_err(err)
}

/// Exact series of 2*pi*i*Omega as canonical strings keyed by entry.
#[pyfunction]
fn appendix_series(formalism: &str, order: usize) -> PyResult<BTreeMap<String, String>> {
    let (s, param) = match formalism {
        "eps" => (symbolic_period_eps(order).map_err(err)?, "eps"),
        "rho" => (symbolic_period_rho(order).map_err(err)?, "rho"),
        other => {
            return Err(PyValueError::new_err(format!(
                "formalism must be 'eps' or 'rho', got {other:?}"
            )))
        }
    };
    Ok([
        ("omega11", &s.omega11),
        ("omega12", &s.omega12),
        ("omega22", &s.omega22),
    ]
    .into_iter()
    .map(|(k, p)| (k.to_string(), p.to_canonical_string(param)))
    .collect())
}

#[pymodule]
fn genus2(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("OutOfDomainError", m.py().get_type::<OutOfDomainError>())?;
    m.add("ConvergenceError", m.py().get_type::<ConvergenceError>())?;
    m.add_class::<PyPeriodMatrix>()?;
    m.add_function(wrap_pyfunction!(eisenstein, m)?)?;
    m.add_function(wrap_pyfunction!(weierstrass_p, m)?)?;
    m.add_function(wrap_pyfunction!(prime_form, m)?)?;
    m.add_function(wrap_pyfunction!(in_domain_eps, m)?)?;
    m.add_function(wrap_pyfunction!(in_domain_rho, m)?)?;
    m.add_function(wrap_pyfunction!(period_matrix_eps, m)?)?;
    m.add_function(wrap_pyfunction!(period_matrix_rho, m)?)?;
    m.add_function(wrap_pyfunction!(period_matrix_chi, m)?)?;
    m.add_function(wrap_pyfunction!(necklace_period_eps, m)?)?;
    m.add_function(wrap_pyfunction!(necklace_period_rho, m)?)?;
    m.add_function(wrap_pyfunction!(invert_eps, m)?)?;
    m.add_function(wrap_pyfunction!(invert_chi, m)?)?;
    m.add_function(wrap_pyfunction!(eps_from_rho, m)?)?;
    m.add_function(wrap_pyfunction!(equivariance_eps, m)?)?;
    m.add_function(wrap_pyfunction!(equivariance_rho, m)?)?;
    m.add_function(wrap_pyfunction!(catalan_f, m)?)?;
    m.add_function(wrap_pyfunction!(torus_modulus_catalan, m)?)?;
    m.add_function(wrap_pyfunction!(e2_from_catalan, m)?)?;
    m.add_function(wrap_pyfunction!(appendix_series, m)?)?;
    Ok(())
}
