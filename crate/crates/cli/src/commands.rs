//! Subcommands.

use std::io::Write;

use anyhow::{anyhow, bail};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use cauchy_deriv::budget::{nodes_darboux, nodes_entire, nodes_finite_r, nodes_prg_quasioptimal, NodeBudget, Tolerance};
use cauchy_deriv::driver::{derivative_with, digit_loss_estimate, DriverConfig};
use cauchy_deriv::quad::{Executor, Status};
use cauchy_deriv::radius::{
    auto_radius, condition_at, log_grid, optimal_radius_empirical, radius_darboux, radius_nonneg_convex,
    radius_prg_asymptotic, radius_saddle, RadiusPlan,
};
use cauchy_deriv::sfun::{catalog, factorial_scaled};
use cauchy_deriv::{AnalyticFunction, Error};

use crate::output::{float, scaled, write_csv, write_record, Format, NodesRecord, OutputRecord, RadiusRecord};
use crate::tables::{table_rows, Table};
use crate::target::TargetArgs;

#[derive(Debug, Parser)]
#[command(name = "cauchy-deriv", version, about = "Taylor coefficients and derivatives by trapezoidal Cauchy integrals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute f^(n)(0) or a_n.
    Derive(DeriveArgs),
    /// Condition number over a log-spaced radius grid, as CSV.
    Scan(ScanArgs),
    /// Select a contour radius.
    Radius(RadiusArgs),
    /// Asymptotic node-count estimate.
    Nodes(NodesArgs),
    /// Regenerate a published table as CSV.
    Table {
        #[arg(value_enum)]
        name: Table,
    },
    /// List catalog functions.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Nonneg,
    Saddle,
    Prg,
    Darboux,
    Scan,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long)]
    pub n: u64,
    /// Contour radius.
    #[arg(long = "r", value_name = "R", conflicts_with = "radius_method")]
    pub radius: Option<f64>,
    #[arg(long, value_enum)]
    pub radius_method: Option<Method>,
    /// Target relative error of the doubling driver.
    #[arg(long, default_value_t = 1e-15)]
    pub tol: f64,
    /// Emit a_n instead of f^(n)(0).
    #[arg(long)]
    pub coefficient: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub rmin: f64,
    #[arg(long)]
    pub rmax: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Use the reference condition number against the exact coefficient.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct NodesArgs {
    /// Relative tolerance; exponents beyond the double range are accepted.
    #[arg(long)]
    pub eps: Tolerance,
    #[arg(long = "r", value_name = "R")]
    pub radius: Option<f64>,
    #[arg(long = "R", value_name = "R")]
    pub big_r: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Runs a command; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, exec: &dyn Executor) -> anyhow::Result<i32> {
    match cli.command {
        Command::Derive(a) => derive(&a, out, exec),
        Command::Scan(a) => scan(&a, out).map(|_| 0),
        Command::Radius(a) => radius(&a, out).map(|_| 0),
        Command::Nodes(a) => nodes(&a, out).map(|_| 0),
        Command::Table { name } => {
            let (header, rows) = table_rows(name, exec)?;
            write_csv(out, &header, &rows)?;
            Ok(0)
        }
        Command::List => {
            for e in catalog() {
                writeln!(out, "{:<20} {}", e.name(), e.description())?;
            }
            Ok(0)
        }
    }
}

fn saddle_start(f: &AnalyticFunction, n: u64) -> anyhow::Result<Complex64> {
    let theta = f.saddle_rays().first().copied().unwrap_or(0.0);
    if let (Some(rho), Some(tau)) = (f.order(), f.type_()) {
        if rho > 0.0 {
            let r = radius_prg_asymptotic(n, rho, tau)?.radius;
            return Ok(Complex64::from_polar(r, theta));
        }
    }
    match f.saddle_seed() {
        Some(seed) => Ok(seed(n)),
        None => bail!("--method saddle needs order and type (--rho, --tau) or a catalog saddle seed"),
    }
}

fn plan_for(target: &crate::target::Target, n: u64, method: Method) -> anyhow::Result<RadiusPlan> {
    let f = &target.function;
    Ok(match method {
        Method::Auto => auto_radius(f, n)?,
        Method::Nonneg => {
            if !f.nonnegative_coefficients() {
                bail!("--method nonneg needs a function with nonnegative coefficients (--nonneg for --expr)");
            }
            radius_nonneg_convex(f, n)?
        }
        Method::Saddle => radius_saddle(f, n, saddle_start(f, n)?)?,
        Method::Prg => match (f.order(), f.type_()) {
            (Some(rho), Some(tau)) => radius_prg_asymptotic(n, rho, tau)?,
            _ => bail!("--method prg needs order and type (--rho, --tau)"),
        },
        Method::Darboux => match f.darboux() {
            Some(d) => radius_darboux(n, d.beta, d.singularity.norm())?,
            None => bail!("--method darboux needs a dominant singularity (--R and --beta)"),
        },
        Method::Scan => {
            let big_r = f.radius_of_convergence();
            let (lo, hi) = if big_r.is_finite() {
                (big_r * 1e-3, big_r * (1.0 - 1e-6))
            } else {
                (1e-2, 10.0 * (n + 1) as f64)
            };
            optimal_radius_empirical(f, target.coefficient(n), n, lo, hi)?
        }
    })
}

fn derive(a: &DeriveArgs, out: &mut dyn Write, exec: &dyn Executor) -> anyhow::Result<i32> {
    let target = a.target.resolve()?;
    let f = &target.function;
    let plan = match a.radius {
        Some(r) => {
            let big_r = f.radius_of_convergence();
            if !(r > 0.0 && r.is_finite()) {
                bail!("--r must be positive");
            }
            if r >= big_r {
                return Err(Error::RadiusOutsideDisk { r, big_r }.into());
            }
            RadiusPlan::fixed(r)
        }
        None => plan_for(&target, a.n, a.radius_method.unwrap_or(Method::Auto))?,
    };
    let cfg = DriverConfig::default().with_tol(a.tol);
    let outcome = derivative_with(f, a.n, &plan, &cfg, exec)?;
    let value = if a.coefficient {
        outcome.value * factorial_scaled(a.n).recip()
    } else {
        outcome.value
    };
    let oracle_rel_error = target.coefficient(a.n).and_then(|exact| {
        let exact = if a.coefficient { exact } else { exact * factorial_scaled(a.n) };
        (!exact.is_zero()).then(|| (value - exact).abs_ratio(&exact))
    });
    let mut warnings: Vec<String> = plan.warning.iter().cloned().collect();
    if outcome.kappa_m * a.tol > 1.0 {
        warnings.push("no correct digits expected: kappa * tol > 1".into());
    }
    let (re, im) = scaled(&value);
    let record = OutputRecord {
        function: target.label.clone(),
        n: a.n,
        quantity: if a.coefficient { "coefficient" } else { "derivative" },
        value: re,
        value_im: im,
        kappa: outcome.kappa_m,
        m_used: outcome.m_used,
        radius: outcome.radius,
        strategy: plan.strategy.as_str(),
        predicted_digit_loss: plan.predicted_digit_loss,
        digit_loss: digit_loss_estimate(outcome.kappa_m),
        rel_error_estimate: outcome.rel_error_estimate,
        oracle_rel_error,
        status: outcome.status.as_str(),
        warning: (!warnings.is_empty()).then(|| warnings.join("; ")),
    };
    write_record(out, &record, a.format)?;
    Ok(if outcome.status == Status::Converged { 0 } else { 1 })
}

fn scan(a: &ScanArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let target = a.target.resolve()?;
    let f = &target.function;
    if !(a.rmin > 0.0 && a.rmin < a.rmax) {
        bail!("need 0 < --rmin < --rmax");
    }
    let big_r = f.radius_of_convergence();
    if a.rmax >= big_r {
        return Err(Error::RadiusOutsideDisk { r: a.rmax, big_r }.into());
    }
    if a.points < 2 {
        bail!("--points must be at least 2");
    }
    let exact = if a.oracle {
        let c = target.coefficient(a.n).ok_or_else(|| anyhow!("no exact coefficient available for --oracle"))?;
        Some(c)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(a.points);
    for r in log_grid(a.rmin, a.rmax, a.points) {
        let kappa = condition_at(f, exact, a.n, r)?;
        rows.push(vec![float(r), float(kappa), float(digit_loss_estimate(kappa))]);
    }
    write_csv(out, &["r", "kappa", "digit_loss"], &rows)
}

fn radius(a: &RadiusArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let target = a.target.resolve()?;
    let plan = plan_for(&target, a.n, a.method)?;
    let record = RadiusRecord {
        function: target.label.clone(),
        n: a.n,
        radius: plan.radius,
        strategy: plan.strategy.as_str(),
        saddle_re: plan.saddle_point.map(|z| z.re),
        saddle_im: plan.saddle_point.map(|z| z.im),
        predicted_nodes: plan.predicted_nodes,
        predicted_digit_loss: plan.predicted_digit_loss,
        warning: plan.warning.clone(),
    };
    write_record(out, &record, a.format)
}

/// Picks the budget regime from the flags that are present.
pub fn node_budget(a: &NodesArgs) -> anyhow::Result<NodeBudget> {
    let given = (a.radius.is_some(), a.big_r.is_some(), a.rho.is_some(), a.tau.is_some(), a.n.is_some(), a.beta.is_some());
    let budget = match given {
        (true, true, false, false, false, false) if a.alpha.is_none() => {
            nodes_finite_r(a.eps, a.radius.unwrap(), a.big_r.unwrap())?
        }
        (true, false, true, true, false, false) if a.alpha.is_none() => {
            nodes_entire(a.eps, a.radius.unwrap(), a.rho.unwrap(), a.tau.unwrap())?
        }
        (false, false, true, false, true, false) if a.alpha.is_none() => {
            nodes_prg_quasioptimal(a.eps, a.n.unwrap(), a.rho.unwrap())?
        }
        (false, false, false, false, true, true) => nodes_darboux(a.eps, a.n.unwrap(), a.beta.unwrap(), a.alpha)?,
        _ => bail!(
            "give exactly one of: --r --R | --r --rho --tau | --n --rho | --n --beta [--alpha] (besides --eps)"
        ),
    };
    Ok(budget)
}

fn nodes(a: &NodesArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let b = node_budget(a)?;
    let record = NodesRecord {
        regime: b.regime.as_str(),
        eps: a.eps.to_string(),
        estimate: b.m_estimate,
        sampling_floor: b.sampling_floor,
        recommendation: b.recommendation(),
        note: "asymptotic estimate",
    };
    write_record(out, &record, a.format)
}
