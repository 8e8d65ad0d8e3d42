//! One function per subcommand, each returning the serialized output.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use sewing_core::epsilon::{self, EpsPoint, Inversion};
use sewing_core::formal::{symbolic_period_eps, symbolic_period_rho, GradedPoly, JsonTerm};
use sewing_core::groups::{GElement, LElement, Sl2};
use sewing_core::newton::NewtonOptions;
use sewing_core::rho::{self, ChiPoint, RhoPoint};
use sewing_core::special::{eisenstein as eisenstein_k, SeriesTolerance, Tau};
use sewing_core::sphere::{self, CatalanChi};
use sewing_core::{JsonComplex, PeriodMatrix, TWO_PI_I};

use crate::args::Failure;
use crate::{EpsArgs, Formalism, NewtonArgs, RhoArgs, SeriesFormat, TargetArgs};

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
pub struct PeriodOutput {
    #[serde(flatten)]
    pub period: PeriodMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<i64>,
    pub margin: f64,
    pub order: usize,
}

#[derive(Serialize)]
struct Report {
    residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    values: BTreeMap<String, JsonComplex>,
    margin: f64,
    order: usize,
}

#[derive(Serialize)]
struct InversionOutput<P: Serialize> {
    #[serde(flatten)]
    inversion: Inversion<P>,
    margin: f64,
    order: usize,
}

#[derive(Serialize)]
struct EisensteinValue {
    k: usize,
    value: JsonComplex,
}

#[derive(Serialize)]
struct EisensteinOutput {
    tau: Tau,
    values: Vec<EisensteinValue>,
    /// `|q|`, the ratio of the geometric tail.
    margin: f64,
    order: usize,
}

fn newton_options(n: NewtonArgs) -> NewtonOptions {
    NewtonOptions {
        tol: n.newton_tol,
        max_iterations: n.max_iter,
        ..NewtonOptions::default()
    }
}

fn eps_point(a: &EpsArgs) -> EpsPoint {
    EpsPoint::new(a.tau1, a.tau2, a.eps)
}

fn target(t: &TargetArgs) -> PeriodMatrix {
    PeriodMatrix::new(t.omega11, t.omega12, t.omega22)
}

pub fn eisenstein(tau: Tau, ks: &[usize], tol: SeriesTolerance) -> Result<String, Failure> {
    let mut values = Vec::with_capacity(ks.len());
    for &k in ks {
        values.push(EisensteinValue {
            k,
            value: eisenstein_k(k, tau, tol)?.into(),
        });
    }
    Ok(to_json(&EisensteinOutput {
        tau,
        values,
        margin: tau.q().norm(),
        order: ks.iter().copied().max().unwrap_or(0),
    }))
}

pub fn period_eps_output(p: &EpsPoint, order: usize, tol: SeriesTolerance) -> Result<PeriodOutput, Failure> {
    Ok(PeriodOutput {
        period: epsilon::period_matrix_eps(p, order, tol)?,
        branch: None,
        margin: epsilon::in_domain_eps(p).margin,
        order,
    })
}

pub fn period_eps(a: &EpsArgs, order: usize, tol: SeriesTolerance) -> Result<String, Failure> {
    Ok(to_json(&period_eps_output(&eps_point(a), order, tol)?))
}

pub fn period_rho_output(p: &RhoPoint, order: usize, tol: SeriesTolerance) -> Result<PeriodOutput, Failure> {
    Ok(PeriodOutput {
        period: rho::period_matrix_rho(p, order, tol)?,
        branch: Some(p.branch),
        margin: rho::in_domain_rho(p).margin,
        order,
    })
}

pub fn period_chi_output(c: &ChiPoint, order: usize, tol: SeriesTolerance) -> Result<PeriodOutput, Failure> {
    let period = rho::period_matrix_chi(c, order, tol)?;
    let branch = if c.w == Complex64::new(0.0, 0.0) {
        None
    } else {
        Some(rho::rho_point(c, tol)?.branch)
    };
    Ok(PeriodOutput {
        period,
        branch,
        margin: rho::in_domain_chi(c).margin,
        order,
    })
}

pub fn period_rho(a: &RhoArgs, order: usize, tol: SeriesTolerance) -> Result<String, Failure> {
    let out = match (a.rho, a.chi) {
        (Some(r), _) => period_rho_output(&RhoPoint::new(a.tau, a.w, r, a.branch), order, tol)?,
        (None, Some(chi)) => period_chi_output(&ChiPoint::new(a.tau, a.w, chi), order, tol)?,
        (None, None) => return Err(Failure::usage("one of --rho or --chi is required")),
    };
    Ok(to_json(&out))
}

pub fn necklace_eps(a: &EpsArgs, max_order: usize, tol: SeriesTolerance) -> Result<String, Failure> {
    let p = eps_point(a);
    Ok(to_json(&PeriodOutput {
        period: epsilon::necklace_period_eps(&p, max_order, tol)?,
        branch: None,
        margin: epsilon::in_domain_eps(&p).margin,
        order: max_order,
    }))
}

pub fn necklace_rho(
    tau: Tau,
    w: Complex64,
    r: Complex64,
    branch: i64,
    max_order: usize,
    tol: SeriesTolerance,
) -> Result<String, Failure> {
    let p = RhoPoint::new(tau, w, r, branch);
    Ok(to_json(&PeriodOutput {
        period: rho::necklace_period_rho(&p, max_order, tol)?,
        branch: Some(branch),
        margin: rho::in_domain_rho(&p).margin,
        order: max_order,
    }))
}

pub fn invert_eps(t: &TargetArgs, order: usize, n: NewtonArgs, tol: SeriesTolerance) -> Result<String, Failure> {
    let inv = epsilon::invert_eps(&target(t), None, newton_options(n), order, tol)?;
    Ok(to_json(&InversionOutput {
        margin: epsilon::in_domain_eps(&inv.point).margin,
        inversion: inv,
        order,
    }))
}

pub fn invert_chi(t: &TargetArgs, order: usize, n: NewtonArgs, tol: SeriesTolerance) -> Result<String, Failure> {
    let inv = rho::invert_chi(&target(t), None, newton_options(n), order, tol)?;
    Ok(to_json(&InversionOutput {
        margin: rho::in_domain_chi(&inv.point).margin,
        inversion: inv,
        order,
    }))
}

pub fn equivariance_eps(a: &EpsArgs, order: usize, tol: SeriesTolerance) -> Result<String, Failure> {
    let p = eps_point(a);
    let gens = [
        ("gamma1_S", GElement::Gamma1(Sl2::S)),
        ("gamma1_T", GElement::Gamma1(Sl2::T)),
        ("gamma2_S", GElement::Gamma2(Sl2::S)),
        ("gamma2_T", GElement::Gamma2(Sl2::T)),
        ("beta", GElement::BetaSwap),
    ];
    let mut residuals = BTreeMap::new();
    for (name, g) in gens {
        residuals.insert(name.to_string(), epsilon::equivariance_residual_eps(g, &p, order, tol)?);
    }
    Ok(to_json(&Report {
        residuals,
        values: BTreeMap::new(),
        margin: epsilon::in_domain_eps(&p).margin,
        order,
    }))
}

pub fn equivariance_rho(
    tau: Tau,
    w: Complex64,
    r: Complex64,
    branch: i64,
    order: usize,
    tol: SeriesTolerance,
) -> Result<String, Failure> {
    let p = RhoPoint::new(tau, w, r, branch);
    let gens = [
        ("mu_100", LElement::Mu { a: 1, b: 0, c: 0 }),
        ("mu_010", LElement::Mu { a: 0, b: 1, c: 0 }),
        ("mu_001", LElement::Mu { a: 0, b: 0, c: 1 }),
        ("gamma1_T", LElement::Gamma1(Sl2::T)),
        ("gamma1_S", LElement::Gamma1(Sl2::S)),
    ];
    let mut residuals = BTreeMap::new();
    for (name, g) in gens {
        residuals.insert(name.to_string(), rho::equivariance_residual_rho(g, &p, order, tol)?);
    }
    Ok(to_json(&Report {
        residuals,
        values: BTreeMap::new(),
        margin: rho::in_domain_rho(&p).margin,
        order,
    }))
}

/// Terms kept in the Catalan operator when summing `S_{n,k}`.
const CATALAN_TERMS: usize = 200;
/// Number of `S_{n,k}` summed against `(1+f)^k`.
const CATALAN_N: usize = 40;

pub fn catalan(chi: Complex64, order: usize, tol: SeriesTolerance) -> Result<String, Failure> {
    let c = CatalanChi::new(chi)?;
    let f = sphere::catalan_f(c);
    let mut residuals = BTreeMap::new();
    let mut values = BTreeMap::new();
    residuals.insert(
        "functional_equation".to_string(),
        (chi - f / ((1.0 + f) * (1.0 + f))).norm(),
    );
    for k in 1..=4 {
        let total: Complex64 = sphere::s_nk_sequence(CATALAN_N, k, chi, CATALAN_TERMS)?
            .into_iter()
            .sum();
        residuals.insert(format!("s_nk_sum_k{k}"), (total - (1.0 + f).powu(k as u32)).norm());
    }
    values.insert("f".to_string(), f.into());
    if chi.norm() > 0.0 {
        let modulus = sphere::torus_modulus_catalan(c, order)?;
        residuals.insert("modulus".to_string(), (modulus.q - f).norm());
        values.insert("q".to_string(), modulus.q.into());
        let e2 = sphere::e2_from_catalan(c, order)?;
        let oracle = eisenstein_k(2, Tau::new(f.ln() / TWO_PI_I)?, tol)?;
        residuals.insert("e2".to_string(), (e2 - oracle).norm());
        values.insert("e2".to_string(), e2.into());
    }
    Ok(to_json(&Report {
        residuals,
        values,
        margin: 4.0 * chi.norm(),
        order,
    }))
}

#[derive(Serialize)]
struct SeriesOutput {
    formalism: &'static str,
    order: usize,
    omega11: Vec<JsonTerm>,
    omega12: Vec<JsonTerm>,
    omega22: Vec<JsonTerm>,
}

pub fn appendix_series(formalism: Formalism, order: usize, format: SeriesFormat) -> Result<String, Failure> {
    let (s, param, name) = match formalism {
        Formalism::Eps => (symbolic_period_eps(order)?, "eps", "eps"),
        Formalism::Rho => (symbolic_period_rho(order)?, "rho", "rho"),
    };
    Ok(match format {
        SeriesFormat::Text => {
            let line = |label: &str, p: &GradedPoly| format!("2*pi*i*{label} = {}\n", p.to_canonical_string(param));
            let mut out = line("Omega11", &s.omega11);
            out.push_str(&line("Omega12", &s.omega12));
            out.push_str(&line("Omega22", &s.omega22));
            out
        }
        SeriesFormat::Json => to_json(&SeriesOutput {
            formalism: name,
            order,
            omega11: s.omega11.to_json_terms(),
            omega12: s.omega12.to_json_terms(),
            omega22: s.omega22.to_json_terms(),
        }),
    })
}

pub fn map_rho_to_eps(
    tau: Tau,
    w: Complex64,
    chi: Complex64,
    order: usize,
    n: NewtonArgs,
    tol: SeriesTolerance,
) -> Result<String, Failure> {
    let c = ChiPoint::new(tau, w, chi);
    let inv = rho::eps_from_rho(&c, order, newton_options(n), tol)?;
    Ok(to_json(&InversionOutput {
        inversion: inv,
        margin: rho::in_domain_chi(&c).margin,
        order,
    }))
}
