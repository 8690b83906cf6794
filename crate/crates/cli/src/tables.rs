//! Pipelines regenerating the published tables.

use clap::ValueEnum;
use num_complex::Complex64;

use cauchy_deriv::budget::{nodes_entire, Tolerance};
use cauchy_deriv::driver::{taylor_coefficient_with, DriverConfig};
use cauchy_deriv::quad::{sample_ring, trapezoidal_coefficient, Executor};
use cauchy_deriv::radius::radius_saddle;
use cauchy_deriv::saddle::gamma_resonance;
use cauchy_deriv::sfun::{factorial_scaled, ln_factorial, lookup};
use cauchy_deriv::ScaledComplex;

use crate::output::float;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Airy,
    Bi,
    #[value(name = "m_exp")]
    MExp,
    Gamma,
    Functions,
}

/// A row of the Airy and Bi tables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryRow {
    pub n: u64,
    pub r_diamond: f64,
    pub kappa_diamond: f64,
    pub n_two_thirds: f64,
    pub kappa_at_n_two_thirds: f64,
}

pub const AIRY_ORDERS: [u64; 4] = [1, 10, 100, 1000];

/// Saddle radius on the first catalog ray and driver `kappa_m` there and
/// at `n^{2/3}`.
pub fn airy_rows(name: &str, orders: &[u64], exec: &dyn Executor) -> anyhow::Result<Vec<AiryRow>> {
    let entry = lookup(name)?;
    let f = entry.function();
    let theta = f.saddle_rays().first().copied().unwrap_or(0.0);
    let cfg = DriverConfig::default();
    orders
        .iter()
        .map(|&n| {
            let r0 = (n as f64).powf(2.0 / 3.0);
            let plan = radius_saddle(f, n, Complex64::from_polar(r0, theta))?;
            let at_saddle = taylor_coefficient_with(f, n, plan.radius, &cfg, exec)?;
            let at_r0 = taylor_coefficient_with(f, n, r0, &cfg, exec)?;
            Ok(AiryRow {
                n,
                r_diamond: plan.radius,
                kappa_diamond: at_saddle.kappa_m,
                n_two_thirds: r0,
                kappa_at_n_two_thirds: at_r0.kappa_m,
            })
        })
        .collect()
}

/// A row of the `e^z` node-count table (`n = 10`, `r = 10`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MExpRow {
    pub eps: Tolerance,
    pub minimal_m: usize,
    pub bound: f64,
}

const M_EXP_N: u64 = 10;
const M_EXP_R: f64 = 10.0;
// Below this tolerance the error is evaluated from the aliasing series.
const MEASURABLE_EPS: f64 = 1e-14;

/// Relative trapezoidal error for `e^z` from the aliasing identity
/// `delta_m = sum_{k>=1} r^{km} n!/(n+km)!`, in extended range.
pub fn exp_aliasing_error(n: u64, r: f64, m: usize) -> ScaledComplex {
    let mut sum = ScaledComplex::ZERO;
    let base = ln_factorial(n);
    for k in 1u64.. {
        let idx = n + k * m as u64;
        let term = ScaledComplex::from_log(Complex64::new(
            (k * m as u64) as f64 * r.ln() + base - ln_factorial(idx),
            0.0,
        ));
        sum = sum + term;
        if term.abs_ratio(&sum) < 1e-20 || k > 10_000 {
            break;
        }
    }
    sum
}

/// Measured relative error of the `m`-node trapezoidal sum for `e^z`.
pub fn exp_measured_error(n: u64, r: f64, m: usize) -> anyhow::Result<f64> {
    let f = lookup("exp")?.function().clone();
    let ring = sample_ring(&f, r, m)?;
    let exact = factorial_scaled(n).recip();
    Ok((trapezoidal_coefficient(&ring, n) - exact).abs_ratio(&exact))
}

/// Smallest `m > n` with relative error at most `eps`.
pub fn minimal_exp_nodes(eps: Tolerance) -> anyhow::Result<usize> {
    let target = -eps.log_inv();
    let first = M_EXP_N as usize + 1;
    for m in first..1_000_000 {
        let ok = if eps.eps() >= MEASURABLE_EPS {
            exp_measured_error(M_EXP_N, M_EXP_R, m)? <= eps.eps()
        } else {
            exp_aliasing_error(M_EXP_N, M_EXP_R, m).ln_abs() <= target
        };
        if ok {
            return Ok(m);
        }
    }
    anyhow::bail!("no node count below 1e6 reaches the tolerance")
}

pub fn m_exp_rows() -> anyhow::Result<Vec<MExpRow>> {
    ["1e-12", "1e-100", "1e-1000"]
        .iter()
        .map(|s| {
            let eps: Tolerance = s.parse()?;
            Ok(MExpRow {
                eps,
                minimal_m: minimal_exp_nodes(eps)?,
                bound: nodes_entire(eps, M_EXP_R, 1.0, 1.0)?.m_estimate,
            })
        })
        .collect()
}

/// A row of the `1/Gamma` resonance table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaRow {
    pub n: u64,
    pub radius: f64,
    pub kappa_diamond: f64,
    pub sec_phi: f64,
}

pub const GAMMA_ORDERS: [u64; 18] = [
    2002, 2003, 2004, 2005, 2006, 2007, 2008, 2009, 2010, 10931, 10932, 10933, 10934, 10935, 10936, 10937, 10938,
    10939,
];

/// Driver `kappa_m` for `1/Gamma` at `|e^{W(1/2-n)}|` next to `|sec phi_n|`.
pub fn gamma_rows(orders: &[u64], exec: &dyn Executor) -> anyhow::Result<Vec<GammaRow>> {
    let entry = lookup("rgamma")?;
    let cfg = DriverConfig::default();
    orders
        .iter()
        .map(|&n| {
            let g = gamma_resonance(n)?;
            let out = taylor_coefficient_with(entry.function(), n, g.r, &cfg, exec)?;
            Ok(GammaRow {
                n,
                radius: g.r,
                kappa_diamond: out.kappa_m,
                sec_phi: g.sec_abs,
            })
        })
        .collect()
}

/// Growth data of entire functions: `f, order, type, r_diamond(n),
/// lim kappa_diamond, indicator, Omega, omega`, with the catalog entry
/// carrying the same function where one exists.
pub const FUNCTIONS: [[&str; 9]; 15] = [
    ["exp(z)", "1", "1", "n", "1", "cos(theta)", "1", "1", "exp"],
    ["cos(z)", "1", "1", "n", "1", "|sin(theta)|", "2", "1/2", "cos"],
    ["sin(z)", "1", "1", "n", "1", "|sin(theta)|", "2", "1/2", "sin"],
    ["J_k(z)", "1", "1", "n", "1", "|sin(theta)|", "2", "1/2", "bessel_j"],
    ["I_k(z)", "1", "1", "n", "1", "|cos(theta)|", "2", "1/2", "bessel_i"],
    ["z^(-k/2) I_k(2 sqrt(z))", "1/2", "2", "n^2", "1", "2 cos(theta/2)", "1", "1", "bessel_i_reduced"],
    ["erf(z)", "2", "1", "sqrt(n/2)", "1", "(-cos(2 theta))_+", "2", "1/2", "erf"],
    ["exp(-z^2)", "2", "1", "sqrt(n/2)", "1", "-cos(2 theta)", "2", "1/2", "gauss"],
    ["Ai(z)", "3/2", "2/3", "n^(2/3)", "2/sqrt(3)", "-(2/3) cos(3 theta/2)", "2", "1/sqrt(3)", "airy_ai"],
    ["Bi(z)", "3/2", "2/3", "n^(2/3)", "4/3", "(2/3) |cos(3 theta/2)|", "3", "2/3", "airy_bi"],
    ["C(z)", "2", "pi/2", "sqrt(n/pi)", "1", "(pi/2) |sin(2 theta)|", "4", "1/4", ""],
    ["S(z)", "2", "pi/2", "sqrt(n/pi)", "1", "(pi/2) |sin(2 theta)|", "4", "1/4", ""],
    ["(-z;q)_inf", "0", "", "q^(1/2 - n)", "1", "", "", "", "q_pochhammer"],
    ["1/Gamma(z)", "1", "inf", "exp(Re W(1/2 - n))", "(1, inf)", "", "", "", "rgamma"],
    ["exp(exp(z)-1)", "inf", "", "W(n)", "1", "", "", "", "bell"],
];

pub const FUNCTIONS_HEADER: [&str; 9] = [
    "f", "order", "type", "r_diamond", "lim_kappa_diamond", "indicator", "Omega", "omega", "catalog",
];

/// Header and rows of a table as strings.
pub fn table_rows(table: Table, exec: &dyn Executor) -> anyhow::Result<(Vec<&'static str>, Vec<Vec<String>>)> {
    Ok(match table {
        Table::Airy | Table::Bi => {
            let name = if table == Table::Airy { "airy_ai" } else { "airy_bi" };
            let rows = airy_rows(name, &AIRY_ORDERS, exec)?;
            (
                vec!["n", "r_diamond", "kappa_diamond", "n_pow_2_3", "kappa_at_n_pow_2_3"],
                rows.iter()
                    .map(|r| {
                        vec![
                            r.n.to_string(),
                            float(r.r_diamond),
                            float(r.kappa_diamond),
                            float(r.n_two_thirds),
                            float(r.kappa_at_n_two_thirds),
                        ]
                    })
                    .collect(),
            )
        }
        Table::MExp => (
            vec!["eps", "minimal_m", "bound"],
            m_exp_rows()?
                .iter()
                .map(|r| vec![r.eps.to_string(), r.minimal_m.to_string(), float(r.bound)])
                .collect(),
        ),
        Table::Gamma => (
            vec!["n", "radius", "kappa_diamond", "sec_phi"],
            gamma_rows(&GAMMA_ORDERS, exec)?
                .iter()
                .map(|r| vec![r.n.to_string(), float(r.radius), float(r.kappa_diamond), float(r.sec_phi)])
                .collect(),
        ),
        Table::Functions => (
            FUNCTIONS_HEADER.to_vec(),
            FUNCTIONS
                .iter()
                .map(|row| row.iter().map(|s| s.to_string()).collect())
                .collect(),
        ),
    })
}
