//! `modelrisk` — CSV curve data for worst-case risk bounds and model-risk
//! measures.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric failure.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use modelrisk::basel;
use modelrisk::bounds::{cantelli_es_paper_literal, multiplier_ratio, BoundKind};
use modelrisk::dist::Distribution;
use modelrisk::measures::{
    finite_radius_rm, finite_radius_var_extremes, local_measure, moment_class_es_report,
    moment_class_var_report, LocalFamilyKind, PerturbationFamily,
};
use modelrisk::oracle::{search_extremal_es, search_extremal_var, SearchConstraints};
use modelrisk::special::{norm_pdf, norm_quantile};

use config::{overlay_enum, FileConfig, GridArgs};
use output::{emit, fmt9};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl From<modelrisk::Error> for CliError {
    fn from(e: modelrisk::Error) -> Self {
        match e {
            modelrisk::Error::Integrability(_) | modelrisk::Error::RootBracket(_) => {
                CliError::Numeric(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "modelrisk", version, about)]
struct Cli {
    /// JSON configuration file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path (written atomically); stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplier ratio curves of the closed-form tail bounds.
    Curves {
        #[arg(long, value_enum)]
        kind: Option<CurveKind>,
        /// Use the historically printed (inconsistent) integrated Cantelli
        /// ES formula instead of the corrected one. Diagnostic only.
        #[arg(long)]
        paper_literal: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// AM/RM/M_K over the fixed-moment class for a reference law.
    MomentClass {
        #[arg(long, value_enum)]
        measure: Option<MeasureArg>,
        #[arg(long = "ref", value_enum)]
        reference: Option<RefArg>,
        /// Degrees of freedom for the Student-t reference.
        #[arg(long)]
        nu: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Local measure of model risk for VaR under a shrinking family.
    Local {
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long = "ref", value_enum)]
        reference: Option<RefArg>,
        #[arg(long)]
        nu: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Finite-radius mixture-class VaR extremes and relative measure.
    MixtureSweep {
        /// Mixture contamination bound in (0, 1).
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "ref", value_enum)]
        reference: Option<RefArg>,
        #[arg(long)]
        nu: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Closed-form sharp bounds vs the brute-force two-point sweep.
    OracleCheck {
        #[arg(long, value_enum)]
        measure: Option<MeasureArg>,
        /// Resolution of the mass sweep.
        #[arg(long)]
        p_grid: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Regulatory capital charge from a VaR history CSV.
    Basel {
        /// History file with header `day,var`, a day-0 row and days -1..-60.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Regulatory multiplier in [3, 4].
        #[arg(long)]
        lambda: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CurveKind {
    ChebyshevVar,
    ChebyshevEs,
    CantelliVar,
    CantelliEs,
    SharpVar,
    SharpEs,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MeasureArg {
    Var,
    Es,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RefArg {
    Normal,
    StudentT,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Kolmogorov,
    Levy,
    Mixture,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("MODELRISK_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Config(format!("MODELRISK_THREADS '{raw}' must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let cfg = FileConfig::load(cli.config.as_ref())?;
    let out_path = cli.output.or_else(|| cfg.output.clone());
    let text = match cli.command {
        Command::Curves {
            kind,
            paper_literal,
            grid,
        } => {
            let kind = overlay_enum(kind, cfg.kind.as_ref(), CurveKind::All)?;
            let literal = paper_literal || cfg.paper_literal.unwrap_or(false);
            curves_csv(kind, literal, &grid.resolve(&cfg)?)?
        }
        Command::MomentClass {
            measure,
            reference,
            nu,
            grid,
        } => {
            let measure = overlay_enum(measure, cfg.measure.as_ref(), MeasureArg::Var)?;
            let x0 = reference_law(reference, nu, &cfg)?;
            moment_class_csv(measure, &x0, &grid.resolve(&cfg)?)?
        }
        Command::Local {
            family,
            reference,
            nu,
            grid,
        } => {
            let family = overlay_enum(family, cfg.family.as_ref(), FamilyArg::Mixture)?;
            let x0 = reference_law(reference, nu, &cfg)?;
            local_csv(family, &x0, &grid.resolve(&cfg)?)?
        }
        Command::MixtureSweep {
            eps,
            reference,
            nu,
            grid,
        } => {
            let eps = eps.or(cfg.eps).unwrap_or(0.1);
            let x0 = reference_law(reference, nu, &cfg)?;
            mixture_sweep_csv(eps, &x0, &grid.resolve(&cfg)?)?
        }
        Command::OracleCheck {
            measure,
            p_grid,
            grid,
        } => {
            let measure = overlay_enum(measure, cfg.measure.as_ref(), MeasureArg::Var)?;
            let p_grid = p_grid.or(cfg.p_grid).unwrap_or(100_000);
            oracle_check_csv(measure, p_grid, &grid.resolve(&cfg)?)?
        }
        Command::Basel { input, lambda } => {
            let input = input
                .or_else(|| cfg.input.clone())
                .ok_or_else(|| CliError::Config("basel needs --input".into()))?;
            let lambda = lambda.or(cfg.lambda).unwrap_or(3.0);
            let b = basel::ingest_history(&input, lambda)?;
            format!("capital_charge\n{}\n", fmt9(basel::capital_charge(&b)))
        }
    };
    emit(&text, out_path.as_deref())
}

fn reference_law(
    reference: Option<RefArg>,
    nu: Option<f64>,
    cfg: &FileConfig,
) -> Result<Distribution, CliError> {
    let reference = overlay_enum(reference, cfg.reference.as_ref(), RefArg::Normal)?;
    match reference {
        RefArg::Normal => Ok(Distribution::StandardNormal),
        RefArg::StudentT => {
            let nu = nu.or(cfg.nu).unwrap_or(3.0);
            Ok(Distribution::standardized_student_t(nu)?)
        }
    }
}

/// Evaluates one row per grid point in parallel, preserving ascending order.
fn rows<F>(alphas: &[f64], f: F) -> Result<String, CliError>
where
    F: Fn(f64) -> Result<String, CliError> + Sync,
{
    let rows: Vec<String> = alphas
        .par_iter()
        .map(|&a| f(a))
        .collect::<Result<_, _>>()?;
    Ok(rows.join("\n") + "\n")
}

fn single_ratio(kind: BoundKind, literal: bool, alpha: f64) -> Result<f64, CliError> {
    if literal && kind == BoundKind::CantelliEs {
        let z = norm_quantile(alpha);
        return Ok(cantelli_es_paper_literal(1.0, alpha)? / (norm_pdf(z) / alpha));
    }
    Ok(multiplier_ratio(kind, alpha)?)
}

fn curves_csv(kind: CurveKind, literal: bool, alphas: &[f64]) -> Result<String, CliError> {
    let one = |k: BoundKind| -> Result<String, CliError> {
        let body = rows(alphas, |a| {
            Ok(format!("{},{}", fmt9(a), fmt9(single_ratio(k, literal, a)?)))
        })?;
        Ok(format!("alpha,ratio\n{body}"))
    };
    match kind {
        CurveKind::ChebyshevVar => one(BoundKind::ChebyshevVar),
        CurveKind::ChebyshevEs => one(BoundKind::ChebyshevEs),
        CurveKind::CantelliVar => one(BoundKind::CantelliVar),
        CurveKind::CantelliEs => one(BoundKind::CantelliEs),
        CurveKind::SharpVar => one(BoundKind::SharpVar),
        CurveKind::SharpEs => one(BoundKind::SharpEs),
        CurveKind::All => {
            let body = rows(alphas, |a| {
                let mut cells = vec![fmt9(a)];
                for k in BoundKind::ALL {
                    cells.push(fmt9(single_ratio(k, literal, a)?));
                }
                Ok(cells.join(","))
            })?;
            Ok(format!(
                "alpha,chebyshev_var,chebyshev_es,cantelli_var,cantelli_es,sharp_var,sharp_es\n{body}"
            ))
        }
    }
}

fn moment_class_csv(
    measure: MeasureArg,
    x0: &Distribution,
    alphas: &[f64],
) -> Result<String, CliError> {
    let body = rows(alphas, |a| {
        let r = match measure {
            MeasureArg::Var => moment_class_var_report(x0, a)?,
            MeasureArg::Es => moment_class_es_report(x0, a)?,
        };
        Ok([r.rho0, r.rho_sup, r.rho_inf, r.am, r.rm, r.m_k]
            .iter()
            .fold(fmt9(a), |acc, v| acc + "," + &fmt9(*v)))
    })?;
    Ok(format!("alpha,rho0,rho_sup,rho_inf,am,rm,m_k\n{body}"))
}

fn local_csv(family: FamilyArg, x0: &Distribution, alphas: &[f64]) -> Result<String, CliError> {
    let kind = match family {
        FamilyArg::Kolmogorov => LocalFamilyKind::KolmogorovBall,
        FamilyArg::Levy => LocalFamilyKind::LevyBall,
        FamilyArg::Mixture => LocalFamilyKind::MixtureClass,
    };
    let body = rows(alphas, |a| {
        Ok(format!("{},{}", fmt9(a), fmt9(local_measure(kind, x0, a)?)))
    })?;
    Ok(format!("alpha,lm\n{body}"))
}

fn mixture_sweep_csv(eps: f64, x0: &Distribution, alphas: &[f64]) -> Result<String, CliError> {
    let body = rows(alphas, |a| {
        let family = PerturbationFamily::MixtureClass {
            center: x0.clone(),
            radius: eps,
        };
        let (inf, sup) = finite_radius_var_extremes(&family, a)?;
        let rm = finite_radius_rm(&family, a)?;
        Ok(format!(
            "{},{},{},{}",
            fmt9(a),
            fmt9(inf),
            fmt9(sup),
            fmt9(rm)
        ))
    })?;
    Ok(format!("alpha,inf_var,sup_var,rm\n{body}"))
}

fn oracle_check_csv(
    measure: MeasureArg,
    p_grid: usize,
    alphas: &[f64],
) -> Result<String, CliError> {
    let c = SearchConstraints {
        p_grid,
        ..Default::default()
    };
    let body = rows(alphas, |a| {
        let (closed_inf, closed_sup, found) = match measure {
            MeasureArg::Var => (
                -((1.0 - a) / a).sqrt(),
                (a / (1.0 - a)).sqrt(),
                search_extremal_var(a, &c)?,
            ),
            MeasureArg::Es => (0.0, ((1.0 - a) / a).sqrt(), search_extremal_es(a, &c)?),
        };
        let (inf, sup) = found;
        Ok([
            closed_inf,
            inf,
            inf - closed_inf,
            closed_sup,
            sup,
            sup - closed_sup,
        ]
        .iter()
        .fold(fmt9(a), |acc, v| acc + "," + &fmt9(*v)))
    })?;
    Ok(format!(
        "alpha,closed_inf,oracle_inf,gap_inf,closed_sup,oracle_sup,gap_sup\n{body}"
    ))
}
