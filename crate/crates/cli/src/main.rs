//! `genus2`: genus-two period matrices from sewn tori on the command line.

mod args;
mod commands;
mod sweep;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use sewing_core::special::Tau;

use args::Failure;

#[derive(Parser, Debug)]
#[command(name = "genus2", version, about = "Genus-two period matrices from torus sewing data")]
struct Cli {
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Absolute tolerance for q-series tails.
    #[arg(long, global = true, default_value_t = 1e-14, value_parser = args::positive)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eisenstein series E_k(tau) for one or more weights.
    Eisenstein {
        #[arg(long, value_parser = args::tau, allow_hyphen_values = true)]
        tau: Tau,
        /// Weights, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
        k: Vec<usize>,
    },
    /// Period matrix of two tori sewn with parameter eps.
    PeriodEps {
        #[command(flatten)]
        point: EpsArgs,
        /// Truncation order N of the moment matrices.
        #[arg(long, default_value_t = 12, value_parser = args::order)]
        order: usize,
    },
    /// Period matrix of a self-sewn torus, from rho or from chi = -rho/w^2.
    PeriodRho {
        #[command(flatten)]
        point: RhoArgs,
        /// Truncation order N of the moment matrices.
        #[arg(long, default_value_t = 16, value_parser = args::order)]
        order: usize,
    },
    /// Period matrix from the necklace expansion.
    #[command(subcommand)]
    Necklace(NecklaceCommand),
    /// Recovers sewing parameters from a period matrix by Newton iteration.
    #[command(subcommand)]
    Invert(InvertCommand),
    /// Residuals of the modular equivariance of the period map over a generator set.
    #[command(subcommand)]
    Equivariance(EquivarianceCommand),
    /// Catalan sphere checks at chi.
    Catalan {
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
        chi: Complex64,
        /// Truncation order N of the sphere moment matrices.
        #[arg(long, default_value_t = 24, value_parser = args::order)]
        order: usize,
    },
    /// Exact series of 2*pi*i*Omega in the sewing parameter.
    AppendixSeries {
        #[arg(long, value_enum)]
        formalism: Formalism,
        /// Highest power of the parameter kept.
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SeriesFormat::Text)]
        format: SeriesFormat,
    },
    /// eps-coordinates of the surface with chi-coordinates (tau, w, chi).
    MapRhoToEps {
        #[arg(long, value_parser = args::tau, allow_hyphen_values = true)]
        tau: Tau,
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
        w: Complex64,
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
        chi: Complex64,
        #[arg(long, default_value_t = 16, value_parser = args::order)]
        order: usize,
        #[command(flatten)]
        newton: NewtonArgs,
    },
    /// Period matrices along a line in one parameter.
    ///
    /// CSV columns: index, param_re, param_im, omega11_re, omega11_im,
    /// omega12_re, omega12_im, omega22_re, omega22_im, margin, order, status.
    /// `status` is `ok` or the error for that grid point, whose period
    /// columns are then empty.
    Sweep(sweep::SweepArgs),
}

#[derive(Args, Debug, Clone)]
struct EpsArgs {
    #[arg(long, value_parser = args::tau, allow_hyphen_values = true)]
    tau1: Tau,
    #[arg(long, value_parser = args::tau, allow_hyphen_values = true)]
    tau2: Tau,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    eps: Complex64,
}

#[derive(Args, Debug, Clone)]
struct RhoArgs {
    #[arg(long, value_parser = args::tau, allow_hyphen_values = true)]
    tau: Tau,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    w: Complex64,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true, required_unless_present = "chi", conflicts_with = "chi")]
    rho: Option<Complex64>,
    /// chi = -rho/w^2; the branch of the logarithm is then chosen continuously from w = 0.
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    chi: Option<Complex64>,
    /// Branch integer of the logarithm in Omega22.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true, conflicts_with = "chi")]
    branch: i64,
}

#[derive(Args, Debug, Clone, Copy)]
struct NewtonArgs {
    /// Target residual of the Newton iteration.
    #[arg(long, default_value_t = 1e-12, value_parser = args::positive)]
    newton_tol: f64,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
}

#[derive(Args, Debug, Clone, Copy)]
struct TargetArgs {
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    omega11: Complex64,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    omega12: Complex64,
    #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
    omega22: Complex64,
}

#[derive(Subcommand, Debug)]
enum NecklaceCommand {
    Eps {
        #[command(flatten)]
        point: EpsArgs,
        /// Highest power of eps kept.
        #[arg(long, default_value_t = 8)]
        max_order: usize,
    },
    Rho {
        #[arg(long, value_parser = args::tau, allow_hyphen_values = true)]
        tau: Tau,
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
        w: Complex64,
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
        rho: Complex64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        branch: i64,
        /// Highest power of rho kept.
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
}

#[derive(Subcommand, Debug)]
enum InvertCommand {
    Eps {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 16, value_parser = args::order)]
        order: usize,
        #[command(flatten)]
        newton: NewtonArgs,
    },
    Chi {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 16, value_parser = args::order)]
        order: usize,
        #[command(flatten)]
        newton: NewtonArgs,
    },
}

#[derive(Subcommand, Debug)]
enum EquivarianceCommand {
    /// Generators S and T on each torus and the swap beta.
    Eps {
        #[command(flatten)]
        point: EpsArgs,
        #[arg(long, default_value_t = 16, value_parser = args::order)]
        order: usize,
    },
    /// Generators mu(1,0,0), mu(0,1,0), mu(0,0,1), T and S.
    Rho {
        #[arg(long, value_parser = args::tau, allow_hyphen_values = true)]
        tau: Tau,
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
        w: Complex64,
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
        rho: Complex64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        branch: i64,
        #[arg(long, default_value_t = 16, value_parser = args::order)]
        order: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Formalism {
    Eps,
    Rho,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SeriesFormat {
    Text,
    Json,
}

fn run(cli: Cli) -> Result<String, Failure> {
    let tol = sewing_core::special::SeriesTolerance::new(cli.tol, 10_000)?;
    match cli.command {
        Command::Eisenstein { tau, k } => commands::eisenstein(tau, &k, tol),
        Command::PeriodEps { point, order } => commands::period_eps(&point, order, tol),
        Command::PeriodRho { point, order } => commands::period_rho(&point, order, tol),
        Command::Necklace(NecklaceCommand::Eps { point, max_order }) => commands::necklace_eps(&point, max_order, tol),
        Command::Necklace(NecklaceCommand::Rho {
            tau,
            w,
            rho,
            branch,
            max_order,
        }) => commands::necklace_rho(tau, w, rho, branch, max_order, tol),
        Command::Invert(InvertCommand::Eps { target, order, newton }) => {
            commands::invert_eps(&target, order, newton, tol)
        }
        Command::Invert(InvertCommand::Chi { target, order, newton }) => {
            commands::invert_chi(&target, order, newton, tol)
        }
        Command::Equivariance(EquivarianceCommand::Eps { point, order }) => {
            commands::equivariance_eps(&point, order, tol)
        }
        Command::Equivariance(EquivarianceCommand::Rho {
            tau,
            w,
            rho,
            branch,
            order,
        }) => commands::equivariance_rho(tau, w, rho, branch, order, tol),
        Command::Catalan { chi, order } => commands::catalan(chi, order, tol),
        Command::AppendixSeries {
            formalism,
            order,
            format,
        } => commands::appendix_series(formalism, order, format),
        Command::MapRhoToEps {
            tau,
            w,
            chi,
            order,
            newton,
        } => commands::map_rho_to_eps(tau, w, chi, order, newton, tol),
        Command::Sweep(a) => sweep::run(&a, tol),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { args::EXIT_PARSE } else { 0 };
            std::process::exit(code);
        }
    };
    let output = cli.output.clone();
    let result = run(cli).and_then(|text| {
        match output {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    });
    if let Err(f) = result {
        eprintln!("error: {}", f.message);
        std::process::exit(f.code);
    }
}
