//! Period matrices over a linear grid in one parameter, computed in parallel
//! and emitted in grid order.

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use sewing_core::epsilon::EpsPoint;
use sewing_core::rho::{ChiPoint, RhoPoint};
use sewing_core::special::{SeriesTolerance, Tau};
use sewing_core::JsonComplex;

use crate::args::{self, Failure};
use crate::commands::{period_chi_output, period_eps_output, period_rho_output, to_json, PeriodOutput};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFormalism {
    Eps,
    Rho,
    Chi,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    formalism: SweepFormalism,
    /// Parameter to vary: tau1, tau2 or eps (eps); tau, w or rho (rho); tau, w or chi (chi).
    #[arg(long)]
    param: String,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    from: Complex64,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    to: Complex64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 11, value_parser = args::order)]
    steps: usize,
    #[arg(long, value_parser = args::tau, allow_hyphen_values = true)]
    tau1: Option<Tau>,
    #[arg(long, value_parser = args::tau, allow_hyphen_values = true)]
    tau2: Option<Tau>,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    eps: Option<Complex64>,
    #[arg(long, value_parser = args::tau, allow_hyphen_values = true)]
    tau: Option<Tau>,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    w: Option<Complex64>,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    rho: Option<Complex64>,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    chi: Option<Complex64>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    branch: i64,
    /// Truncation order N; 12 for eps, 16 otherwise.
    #[arg(long, value_parser = args::order)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
    format: SweepFormat,
}

fn names(f: SweepFormalism) -> [&'static str; 3] {
    match f {
        SweepFormalism::Eps => ["tau1", "tau2", "eps"],
        SweepFormalism::Rho => ["tau", "w", "rho"],
        SweepFormalism::Chi => ["tau", "w", "chi"],
    }
}

fn base_values(a: &SweepArgs) -> [Option<Complex64>; 3] {
    let t = |x: Option<Tau>| x.map(Tau::value);
    match a.formalism {
        SweepFormalism::Eps => [t(a.tau1), t(a.tau2), a.eps],
        SweepFormalism::Rho => [t(a.tau), a.w, a.rho],
        SweepFormalism::Chi => [t(a.tau), a.w, a.chi],
    }
}

/// The three coordinates at each grid point, validated up front.
fn grid(a: &SweepArgs) -> Result<(usize, Vec<[Complex64; 3]>), Failure> {
    let names = names(a.formalism);
    let slot = names.iter().position(|n| *n == a.param).ok_or_else(|| {
        Failure::usage(format!(
            "invalid value '{}' for '--param': expected one of {}",
            a.param,
            names.join(", ")
        ))
    })?;
    let base = base_values(a);
    let mut fixed = [Complex64::new(0.0, 0.0); 3];
    for (i, name) in names.iter().enumerate() {
        if i == slot {
            continue;
        }
        fixed[i] =
            base[i].ok_or_else(|| Failure::usage(format!("--{name} is required when sweeping --{}", a.param)))?;
    }
    let points = (0..a.steps)
        .map(|i| {
            let t = if a.steps == 1 {
                0.0
            } else {
                i as f64 / (a.steps - 1) as f64
            };
            let mut v = fixed;
            v[slot] = a.from + (a.to - a.from) * t;
            v
        })
        .collect();
    Ok((slot, points))
}

fn evaluate(
    f: SweepFormalism,
    v: [Complex64; 3],
    branch: i64,
    order: usize,
    tol: SeriesTolerance,
) -> Result<PeriodOutput, Failure> {
    match f {
        SweepFormalism::Eps => period_eps_output(&EpsPoint::new(Tau::new(v[0])?, Tau::new(v[1])?, v[2]), order, tol),
        SweepFormalism::Rho => period_rho_output(&RhoPoint::new(Tau::new(v[0])?, v[1], v[2], branch), order, tol),
        SweepFormalism::Chi => period_chi_output(&ChiPoint::new(Tau::new(v[0])?, v[1], v[2]), order, tol),
    }
}

#[derive(Serialize)]
struct JsonRow {
    index: usize,
    param: JsonComplex,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    result: Option<PeriodOutput>,
    status: String,
}

const CSV_HEADER: [&str; 12] = [
    "index",
    "param_re",
    "param_im",
    "omega11_re",
    "omega11_im",
    "omega12_re",
    "omega12_im",
    "omega22_re",
    "omega22_im",
    "margin",
    "order",
    "status",
];

pub fn run(a: &SweepArgs, tol: SeriesTolerance) -> Result<String, Failure> {
    let (slot, points) = grid(a)?;
    let order = a.order.unwrap_or(match a.formalism {
        SweepFormalism::Eps => 12,
        _ => 16,
    });
    let results: Vec<Result<PeriodOutput, Failure>> = points
        .par_iter()
        .map(|v| evaluate(a.formalism, *v, a.branch, order, tol))
        .collect();
    match a.format {
        SweepFormat::Json => {
            let rows: Vec<JsonRow> = points
                .iter()
                .zip(results)
                .enumerate()
                .map(|(index, (v, r))| {
                    let (result, status) = match r {
                        Ok(out) => (Some(out), "ok".to_string()),
                        Err(f) => (None, f.message),
                    };
                    JsonRow {
                        index,
                        param: v[slot].into(),
                        result,
                        status,
                    }
                })
                .collect();
            Ok(to_json(&rows))
        }
        SweepFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Failure::usage(format!("cannot write CSV: {e}"));
            w.write_record(CSV_HEADER).map_err(io)?;
            for (index, (v, r)) in points.iter().zip(results).enumerate() {
                let p = v[slot];
                let mut record = vec![index.to_string(), p.re.to_string(), p.im.to_string()];
                match r {
                    Ok(out) => {
                        for z in out.period.entries() {
                            record.push(z.re.to_string());
                            record.push(z.im.to_string());
                        }
                        record.push(out.margin.to_string());
                        record.push(out.order.to_string());
                        record.push("ok".into());
                    }
                    Err(f) => {
                        record.extend(std::iter::repeat_n(String::new(), 7));
                        record.push(order.to_string());
                        record.push(f.message);
                    }
                }
                w.write_record(&record).map_err(io)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Failure::usage(format!("cannot write CSV: {e}")))?;
            Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
        }
    }
}
