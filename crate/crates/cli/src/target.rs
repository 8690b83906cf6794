//! Resolution of `--fn` / `--expr` into a function with metadata.

use anyhow::{bail, Context};
use clap::Args;
use num_complex::Complex64;

use cauchy_deriv::expr::parse;
use cauchy_deriv::sfun::lookup;
use cauchy_deriv::{AnalyticFunction, ScaledComplex};

#[derive(Clone, Debug, Default, Args)]
#[group(id = "function", required = true, multiple = false, args = ["name", "expr"])]
pub struct TargetArgs {
    /// Catalog function, e.g. exp, bell, airy_ai, f_beta:11/2 (see `list`).
    #[arg(long = "fn", value_name = "NAME")]
    pub name: Option<String>,
    /// Expression in z, e.g. "z/(exp(z)-1)".
    #[arg(long, value_name = "TEXT")]
    pub expr: Option<String>,
    /// Radius of convergence of --expr (default: entire).
    #[arg(long = "R", value_name = "R", requires = "expr")]
    pub big_r: Option<f64>,
    /// Order of growth of --expr.
    #[arg(long, requires = "expr")]
    pub rho: Option<f64>,
    /// Type of growth of --expr (needs --rho).
    #[arg(long, requires_all = ["expr", "rho"])]
    pub tau: Option<f64>,
    /// Exponent of the dominant singularity (1 - z/R)^beta of --expr (needs --R).
    #[arg(long, requires_all = ["expr", "big_r"], allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Declare that --expr has nonnegative Taylor coefficients.
    #[arg(long, requires = "expr")]
    pub nonneg: bool,
}

/// A resolved function with its exact-coefficient oracle, if any.
pub struct Target {
    pub label: String,
    pub function: AnalyticFunction,
    oracle: Option<Box<dyn Fn(u64) -> Option<ScaledComplex>>>,
}

impl Target {
    pub fn coefficient(&self, n: u64) -> Option<ScaledComplex> {
        self.oracle.as_ref().and_then(|o| o(n))
    }
}

impl TargetArgs {
    pub fn resolve(&self) -> anyhow::Result<Target> {
        if let Some(name) = &self.name {
            let entry = lookup(name)?;
            let function = entry.function().clone();
            let label = entry.name().to_string();
            return Ok(Target {
                label,
                function,
                oracle: Some(Box::new(move |n| entry.coefficient(n))),
            });
        }
        let Some(text) = &self.expr else {
            bail!("one of --fn or --expr is required");
        };
        let e = parse(text).with_context(|| format!("cannot parse {text:?}"))?;
        let mut f = e.to_function();
        if let Some(r) = self.big_r {
            if !(r > 0.0) {
                bail!("--R must be positive");
            }
            f = f.with_radius(r);
        }
        match (self.rho, self.tau) {
            (Some(rho), Some(tau)) => f = f.with_growth(rho, tau),
            (Some(rho), None) => f = f.with_order(rho),
            _ => {}
        }
        if let (Some(beta), Some(r)) = (self.beta, self.big_r) {
            f = f.with_darboux(beta, Complex64::new(r, 0.0));
        }
        if self.nonneg {
            f = f.with_nonnegative_coefficients();
        }
        Ok(Target {
            label: text.clone(),
            function: f,
            oracle: None,
        })
    }
}
