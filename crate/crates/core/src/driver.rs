//! Adaptive node doubling with geometric error extrapolation.
//!
//! Starting from `m = max(n + 1, floor)` nodes, the ring is doubled (old
//! samples reused as the even nodes) until the extrapolated relative error
//! `(err0/err1)^2 err0` drops below `kappa_m * tol`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quad::{
    discrete_condition_number, mean_modulus, radius_power, sample_ring_with, trapezoidal_coefficient,
    AnalyticFunction, Executor, QuadratureOutcome, SampleRing, Sequential, Status,
};
use crate::radius::{RadiusPlan, Strategy};
use crate::scaled::ScaledComplex;
use crate::sfun::factorial_scaled;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriverConfig {
    /// Target relative error before amplification by `kappa_m`.
    pub tol: f64,
    pub m_initial_floor: usize,
    pub m_max: usize,
    /// Multiply the coefficient by `n!`.
    pub scale_to_derivative: bool,
}

impl Default for DriverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-15,
            m_initial_floor: 8,
            m_max: 1 << 20,
            scale_to_derivative: false,
        }
    }
}

impl DriverConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn initial_nodes(&self, n: u64) -> usize {
        ((n + 1) as usize).max(self.m_initial_floor)
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.m_initial_floor == 0 || self.m_max == 0 {
            return Err(Error::Domain("invalid driver configuration"));
        }
        Ok(())
    }
}

/// Computes `a_n` (or `n! a_n`) on the circle of radius `r`.
pub fn taylor_coefficient(
    f: &AnalyticFunction,
    n: u64,
    r: f64,
    cfg: &DriverConfig,
) -> Result<QuadratureOutcome> {
    taylor_coefficient_with(f, n, r, cfg, &Sequential)
}

pub fn taylor_coefficient_with(
    f: &AnalyticFunction,
    n: u64,
    r: f64,
    cfg: &DriverConfig,
    exec: &dyn Executor,
) -> Result<QuadratureOutcome> {
    run(f, n, r, cfg, exec, false)
}

/// `f^(n)(0) = n! a_n` at the radius of `plan`.
pub fn derivative(
    f: &AnalyticFunction,
    n: u64,
    plan: &RadiusPlan,
    cfg: &DriverConfig,
) -> Result<QuadratureOutcome> {
    derivative_with(f, n, plan, cfg, &Sequential)
}

pub fn derivative_with(
    f: &AnalyticFunction,
    n: u64,
    plan: &RadiusPlan,
    cfg: &DriverConfig,
    exec: &dyn Executor,
) -> Result<QuadratureOutcome> {
    let cfg = DriverConfig {
        scale_to_derivative: true,
        ..*cfg
    };
    let boundary = plan.strategy == Strategy::Darboux;
    run(f, n, plan.radius, &cfg, exec, boundary)
}

/// Digits lost to round-off, `log10 kappa` (zero for `kappa < 1`).
pub fn digit_loss_estimate(kappa: f64) -> f64 {
    if kappa > 1.0 {
        kappa.log10()
    } else {
        0.0
    }
}

fn run(
    f: &AnalyticFunction,
    n: u64,
    r: f64,
    cfg: &DriverConfig,
    exec: &dyn Executor,
    allow_boundary: bool,
) -> Result<QuadratureOutcome> {
    cfg.validate()?;
    let big_r = f.radius_of_convergence();
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain("radius must be positive"));
    }
    if r > big_r || (r == big_r && !allow_boundary) {
        return Err(Error::RadiusOutsideDisk { r, big_r });
    }
    let m0 = cfg.initial_nodes(n);
    let mut ring = sample_ring_with(f, r, m0, exec)?;
    let mut prev = trapezoidal_coefficient(&ring, n);
    let mut err1: Option<f64> = None;
    let mut last_err = None;
    loop {
        if 2 * ring.count() > cfg.m_max {
            let kappa = discrete_condition_number(&ring, n);
            return Ok(outcome(prev, &ring, n, kappa, last_err, Status::MaxNodesReached, cfg));
        }
        ring = ring.refine(f, exec)?;
        let val = trapezoidal_coefficient(&ring, n);
        let kappa = discrete_condition_number(&ring, n);
        let err0 = relative_change(&ring, n, val, prev);
        // The first comparison never stops: for odd m0 and an even or odd f
        // the first doubling aliases the same coefficients.
        let err = match err1 {
            None => f64::INFINITY,
            Some(_) if err0 == 0.0 => 0.0,
            Some(e1) => (err0 / e1).powi(2) * err0,
        };
        last_err = Some(err);
        if !kappa.is_finite() {
            return Ok(outcome(val, &ring, n, kappa, Some(err), Status::DegenerateDenominator, cfg));
        }
        if err <= kappa * cfg.tol {
            return Ok(outcome(val, &ring, n, kappa, Some(err), Status::Converged, cfg));
        }
        prev = val;
        err1 = Some(err0);
    }
}

// |val - prev| / |val|, or relative to the circle mean when val is negligible.
fn relative_change(ring: &SampleRing, n: u64, val: ScaledComplex, prev: ScaledComplex) -> f64 {
    let diff = val - prev;
    let scale = mean_modulus(ring) * radius_power(ring.radius(), n);
    if val.is_zero() || val.abs_ratio(&scale) < 1e-300 {
        diff.abs_ratio(&scale)
    } else {
        diff.abs_ratio(&val)
    }
}

fn outcome(
    value: ScaledComplex,
    ring: &SampleRing,
    n: u64,
    kappa: f64,
    err: Option<f64>,
    status: Status,
    cfg: &DriverConfig,
) -> QuadratureOutcome {
    let value = if cfg.scale_to_derivative {
        value * factorial_scaled(n)
    } else {
        value
    };
    QuadratureOutcome {
        value,
        m_used: ring.count(),
        kappa_m: kappa,
        rel_error_estimate: err.filter(|e| e.is_finite()),
        status,
        radius: ring.radius(),
    }
}
