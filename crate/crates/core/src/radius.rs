//! Choice of the contour radius.
//!
//! Strategies: convex minimization of `log f(e^s) - n s` for nonnegative
//! coefficients, Newton on the saddle-point equation `z L'(z) = n`, the
//! asymptotic radius `(n/(tau rho))^{1/rho}`, Darboux rules near an
//! algebraic singularity, and golden-section search on measured `log kappa`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::budget::{nodes_darboux, nodes_entire, nodes_finite_r, nodes_prg_quasioptimal, Tolerance};
use crate::driver::{taylor_coefficient, DriverConfig};
use crate::error::{Error, Result};
use crate::quad::{fd_step, reference_condition_number_adaptive, AnalyticFunction};
use crate::saddle::{saddle_kappa_estimate, symmetric_saddles};
use crate::scaled::ScaledComplex;
use crate::sfun::catalog::binomial_series_coefficient;
use crate::sfun::log_gamma_complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    UserFixed,
    NonnegConvex,
    Saddle,
    PrgAsymptotic,
    Darboux,
    EmpiricalScan,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::UserFixed => "user_fixed",
            Strategy::NonnegConvex => "nonneg_convex",
            Strategy::Saddle => "saddle",
            Strategy::PrgAsymptotic => "prg_asymptotic",
            Strategy::Darboux => "darboux",
            Strategy::EmpiricalScan => "empirical_scan",
        }
    }
}

/// A chosen radius with the strategy that produced it and its predictions.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusPlan {
    pub radius: f64,
    pub strategy: Strategy,
    pub predicted_nodes: Option<u64>,
    pub predicted_digit_loss: Option<f64>,
    pub saddle_point: Option<Complex64>,
    pub warning: Option<String>,
}

impl RadiusPlan {
    fn new(radius: f64, strategy: Strategy) -> Self {
        Self {
            radius,
            strategy,
            predicted_nodes: None,
            predicted_digit_loss: None,
            saddle_point: None,
            warning: None,
        }
    }

    /// A plan for a caller-supplied radius.
    pub fn fixed(radius: f64) -> Self {
        Self::new(radius, Strategy::UserFixed)
    }
}

/// Sampled `(r, kappa)` pairs for one `n`, sorted by `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionCurve {
    pub n: u64,
    pub entries: Vec<(f64, f64)>,
}

impl ConditionCurve {
    /// The entry with the smallest `kappa` (first one on ties).
    pub fn argmin(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for &(r, k) in &self.entries {
            if best.map_or(true, |(_, b)| k < b) {
                best = Some((r, k));
            }
        }
        best
    }

    /// Second divided differences of `log kappa` against `log r`.
    pub fn log_second_differences(&self) -> Vec<f64> {
        let pts: Vec<(f64, f64)> = self.entries.iter().map(|&(r, k)| (r.ln(), k.ln())).collect();
        pts.windows(3)
            .map(|w| {
                let d1 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                let d2 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
                2.0 * (d2 - d1) / (w[2].0 - w[0].0)
            })
            .collect()
    }
}

fn default_tol() -> Tolerance {
    Tolerance::from_digits(15.0).unwrap_or(Tolerance::from_eps(1e-15).unwrap_or_else(|_| unreachable!()))
}

fn log_abs(f: &AnalyticFunction, r: f64) -> f64 {
    f.log_evaluate(Complex64::new(r, 0.0)).re
}

// d/ds [log f(e^s) - n s]
fn slope(f: &AnalyticFunction, n: u64, s: f64) -> f64 {
    let r = s.exp();
    r * f.log_derivative(Complex64::new(r, 0.0)).re - n as f64
}

const S_LIMIT: f64 = 700.0;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizer of `g(s) = log f(e^s) - n s` for entire `f` with nonnegative
/// Taylor coefficients.
///
/// The bracket is found by doubling `s` away from zero until the slope
/// changes sign; golden-section search narrows it to `1e-6`, and bisection
/// on the slope finishes to `|ds| <= 1e-12`.
pub fn radius_nonneg_convex(f: &AnalyticFunction, n: u64) -> Result<RadiusPlan> {
    if n == 0 {
        return Err(Error::Domain("n must be positive"));
    }
    if !f.is_entire() || !f.nonnegative_coefficients() {
        return Err(Error::NoStrategy(String::from(
            "nonneg_convex needs an entire function with nonnegative coefficients",
        )));
    }
    let s0 = slope(f, n, 0.0);
    if s0.is_nan() {
        return Err(Error::NoInteriorMinimizer);
    }
    let (mut lo, mut hi) = if s0 == 0.0 {
        (0.0, 0.0)
    } else {
        let dir = if s0 < 0.0 { 1.0 } else { -1.0 };
        let mut inner = 0.0;
        let mut step = 1.0;
        loop {
            let s = (dir * step).clamp(-S_LIMIT, S_LIMIT);
            let v = slope(f, n, s);
            if v.is_nan() {
                return Err(Error::NoInteriorMinimizer);
            }
            if (v > 0.0) == (dir > 0.0) || v == 0.0 {
                break if dir > 0.0 { (inner, s) } else { (s, inner) };
            }
            if s.abs() >= S_LIMIT {
                return Err(Error::NoInteriorMinimizer);
            }
            inner = s;
            step *= 2.0;
        }
    };
    if hi > lo {
        let g = |s: f64| log_abs(f, s.exp()) - n as f64 * s;
        let (a, b) = golden_section(g, lo, hi, 1e-6);
        if slope(f, n, a) <= 0.0 && slope(f, n, b) >= 0.0 {
            lo = a;
            hi = b;
        }
        for _ in 0..200 {
            if hi - lo <= 1e-12 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if slope(f, n, mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let r = (0.5 * (lo + hi)).exp();
    let mut plan = RadiusPlan::new(r, Strategy::NonnegConvex);
    if let (Some(rho), Some(tau)) = (f.order(), f.type_()) {
        plan.predicted_nodes = nodes_entire(default_tol(), r, rho, tau).ok().map(|b| b.recommendation().max(n + 1));
    }
    plan.predicted_digit_loss = predicted_saddle_loss(f, Complex64::new(r, 0.0), n);
    Ok(plan)
}

// Returns the final bracket.
fn golden_section<G: FnMut(f64) -> f64>(mut g: G, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    for _ in 0..400 {
        if b - a <= width {
            break;
        }
        if g1 <= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - INV_PHI * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + INV_PHI * (b - a);
            g2 = g(x2);
        }
    }
    (a, b)
}

fn predicted_saddle_loss(f: &AnalyticFunction, z: Complex64, n: u64) -> Option<f64> {
    let saddles = symmetric_saddles(f, z, n).ok()?;
    let k = saddle_kappa_estimate(&saddles).ok()?;
    k.is_finite().then(|| crate::driver::digit_loss_estimate(k))
}

/// Newton iteration on `G(z) = z L'(z) - n`, started at `z0`.
///
/// `G'` comes from central differences with one Richardson step; steps are
/// halved until `|G|` decreases. Converges when `|G| <= 1e-10 n`.
pub fn radius_saddle(f: &AnalyticFunction, n: u64, z0: Complex64) -> Result<RadiusPlan> {
    if n == 0 {
        return Err(Error::Domain("n must be positive"));
    }
    let z = solve_saddle(f, n, z0)?;
    let mut plan = RadiusPlan::new(z.norm(), Strategy::Saddle);
    plan.saddle_point = Some(z);
    plan.predicted_digit_loss = predicted_saddle_loss(f, z, n);
    if let Some(rho) = f.order() {
        plan.predicted_nodes = nodes_prg_quasioptimal(default_tol(), n, rho).ok().map(|b| b.recommendation());
    }
    Ok(plan)
}

fn solve_saddle(f: &AnalyticFunction, n: u64, z0: Complex64) -> Result<Complex64> {
    let nf = n as f64;
    let g = |z: Complex64| z * f.log_derivative(z) - nf;
    let mut z = z0;
    let mut gz = g(z);
    if !gz.is_finite() {
        if !f.has_log() && f.evaluate(z) == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroOfFunction);
        }
        return Err(Error::SaddleNotConverged { re: z.re, im: z.im });
    }
    for _ in 0..100 {
        if gz.norm() <= 1e-10 * nf {
            return Ok(z);
        }
        let h = fd_step(z);
        let d = |h: f64| (g(z + h) - g(z - h)) / (2.0 * h);
        let dg = (d(0.5 * h) * 4.0 - d(h)) / 3.0;
        let step = gz / dg;
        if !step.is_finite() {
            break;
        }
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-12 {
            let zn = z - step * t;
            let gn = g(zn);
            if gn.is_finite() && gn.norm() < gz.norm() {
                z = zn;
                gz = gn;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    if gz.norm() <= 1e-10 * nf {
        Ok(z)
    } else {
        Err(Error::SaddleNotConverged { re: z.re, im: z.im })
    }
}

/// `(n / (tau rho))^{1/rho}`.
pub fn radius_prg_asymptotic(n: u64, rho: f64, tau: f64) -> Result<RadiusPlan> {
    if !(rho > 0.0 && tau > 0.0 && rho.is_finite() && tau.is_finite()) {
        return Err(Error::Domain("order and type must be positive"));
    }
    let r = (n as f64 / (tau * rho)).powf(1.0 / rho);
    if !(r > 0.0) {
        return Err(Error::Domain("n must be positive"));
    }
    let mut plan = RadiusPlan::new(r, Strategy::PrgAsymptotic);
    plan.predicted_nodes = nodes_prg_quasioptimal(default_tol(), n, rho).ok().map(|b| b.recommendation());
    Ok(plan)
}

fn is_nonneg_integer(x: f64) -> bool {
    x >= 0.0 && x.fract() == 0.0
}

/// Radius rules for a dominant singularity `(1 - z/z0)^beta` with `|z0| = R`.
///
/// The predicted loss is `log10 kappa(f_beta; n, r/R)`, an upper bound when
/// the regular factor peaks at the singularity.
pub fn radius_darboux(n: u64, beta: f64, big_r: f64) -> Result<RadiusPlan> {
    if n < 2 {
        return Err(Error::Domain("Darboux rules need n >= 2"));
    }
    if !beta.is_finite() || !(big_r > 0.0 && big_r.is_finite()) {
        return Err(Error::Domain("Darboux rules need finite beta and R"));
    }
    if is_nonneg_integer(beta) {
        return Err(Error::NotABranchPoint);
    }
    let nf = n as f64;
    let rho = if beta > -1.0 {
        1.0
    } else if beta == -1.0 {
        1.0 - 1.0 / (nf * nf.ln())
    } else {
        1.0 + (beta + 1.0) / nf
    };
    let mut plan = RadiusPlan::new(big_r * rho, Strategy::Darboux);
    plan.predicted_nodes = nodes_darboux(default_tol(), n, beta, None).ok().map(|b| b.recommendation());
    plan.predicted_digit_loss = fbeta_condition_number(n, beta, rho).ok().map(crate::driver::digit_loss_estimate);
    if beta > -1.0 {
        plan.warning = Some(String::from(
            "unbounded condition number: the loss grows like n^(beta+1) on the boundary circle",
        ));
    }
    Ok(plan)
}

/// `kappa(n, rho)` for `(1 - z)^beta`, `0 < rho <= 1` (`rho = 1` needs
/// `beta > -1`).
pub fn fbeta_condition_number(n: u64, beta: f64, rho: f64) -> Result<f64> {
    let an = binomial_series_coefficient(beta, n);
    if rho >= 1.0 {
        if !(beta > -1.0) {
            return Err(Error::Domain("the boundary mean is infinite for beta <= -1"));
        }
        // M_1(1) = Gamma(1 + beta) / Gamma(1 + beta/2)^2
        let lg = |x: f64| log_gamma_complex(Complex64::new(x, 0.0)).map(|v| v.re);
        let ln_m1 = lg(1.0 + beta)? - 2.0 * lg(1.0 + 0.5 * beta)?;
        return Ok(ScaledComplex::from_log(Complex64::new(ln_m1, 0.0)).abs_ratio(&an.abs()));
    }
    let f = crate::sfun::catalog::f_beta(beta).function().clone();
    reference_condition_number_adaptive(&f, an, n, rho)
}

/// `kappa` at `r`: reference value when `exact_an` is given, else the
/// discrete value from a driver run.
pub fn condition_at(f: &AnalyticFunction, exact_an: Option<ScaledComplex>, n: u64, r: f64) -> Result<f64> {
    match exact_an {
        Some(a) => reference_condition_number_adaptive(f, a, n, r),
        None => taylor_coefficient(f, n, r, &DriverConfig::default()).map(|o| o.kappa_m),
    }
}

fn check_bracket(f: &AnalyticFunction, r_lo: f64, r_hi: f64) -> Result<()> {
    if !(r_lo > 0.0 && r_lo < r_hi && r_hi.is_finite()) {
        return Err(Error::Domain("need 0 < r_lo < r_hi"));
    }
    let big_r = f.radius_of_convergence();
    if r_hi >= big_r {
        return Err(Error::RadiusOutsideDisk { r: r_hi, big_r });
    }
    Ok(())
}

/// `kappa` on `points` log-spaced radii in `[r_lo, r_hi]`.
pub fn scan_condition(
    f: &AnalyticFunction,
    exact_an: Option<ScaledComplex>,
    n: u64,
    r_lo: f64,
    r_hi: f64,
    points: usize,
) -> Result<ConditionCurve> {
    check_bracket(f, r_lo, r_hi)?;
    if points < 3 {
        return Err(Error::Domain("a scan needs at least 3 points"));
    }
    let radii = log_grid(r_lo, r_hi, points);
    let mut entries = Vec::with_capacity(points);
    for r in radii {
        entries.push((r, condition_at(f, exact_an, n, r)?));
    }
    Ok(ConditionCurve { n, entries })
}

/// `points` log-spaced radii from `r_lo` to `r_hi` inclusive.
pub fn log_grid(r_lo: f64, r_hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (r_lo.ln(), r_hi.ln());
    (0..points)
        .map(|i| {
            if i + 1 == points {
                r_hi
            } else if i == 0 {
                r_lo
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

const COARSE_POINTS: usize = 9;

/// Golden-section minimization of `log kappa` over `log r`, to relative
/// radius tolerance `1e-3`.
///
/// A coarse grid is checked for unimodality first; if it is not unimodal
/// the best grid point is returned with a warning. Flat minima are resolved
/// toward the smallest radius within `1.001x` of the minimum.
pub fn optimal_radius_empirical(
    f: &AnalyticFunction,
    exact_an: Option<ScaledComplex>,
    n: u64,
    r_lo: f64,
    r_hi: f64,
) -> Result<RadiusPlan> {
    check_bracket(f, r_lo, r_hi)?;
    let kappa = |u: f64| condition_at(f, exact_an, n, u.exp());
    let grid = log_grid(r_lo, r_hi, COARSE_POINTS);
    let mut values = Vec::with_capacity(COARSE_POINTS);
    for &r in &grid {
        values.push(kappa(r.ln())?.ln());
    }
    let mut k = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[k] {
            k = i;
        }
    }
    let unimodal = is_unimodal(&values, k);
    let (mut best_u, mut best) = (grid[k].ln(), values[k]);
    let mut warning = None;
    if unimodal {
        let a = grid[k.saturating_sub(1)].ln();
        let b = grid[(k + 1).min(COARSE_POINTS - 1)].ln();
        let mut err = None;
        let (a, b) = golden_section(
            |u| match kappa(u) {
                Ok(v) => v.ln(),
                Err(e) => {
                    err.get_or_insert(e);
                    f64::INFINITY
                }
            },
            a,
            b,
            1e-3,
        );
        if let Some(e) = err {
            return Err(e);
        }
        let u = 0.5 * (a + b);
        let v = kappa(u)?.ln();
        if v < best {
            best_u = u;
            best = v;
        }
        // Smallest radius within 1.001x of the minimum.
        let step = (1.0f64 - 1e-3).ln();
        let lo = r_lo.ln();
        let limit = best + 1.001f64.ln();
        let mut u = best_u;
        while u + step >= lo {
            let v = kappa(u + step)?.ln();
            if v > limit {
                break;
            }
            u += step;
            if v < best {
                best = v;
            }
        }
        best_u = u;
    } else {
        warning = Some(String::from("non-unimodal condition samples; returning the best grid point"));
    }
    let r = best_u.exp();
    let mut plan = RadiusPlan::new(r, Strategy::EmpiricalScan);
    plan.predicted_digit_loss = Some(crate::driver::digit_loss_estimate(best.exp()));
    let big_r = f.radius_of_convergence();
    if big_r.is_finite() {
        plan.predicted_nodes = nodes_finite_r(default_tol(), r, big_r).ok().map(|b| b.recommendation().max(n + 1));
    }
    plan.warning = warning;
    Ok(plan)
}

fn is_unimodal(values: &[f64], k: usize) -> bool {
    let tol = |a: f64, b: f64| 1e-6 * a.abs().max(b.abs()).max(1.0);
    values[..=k].windows(2).all(|w| w[1] <= w[0] + tol(w[0], w[1]))
        && values[k..].windows(2).all(|w| w[1] + tol(w[0], w[1]) >= w[0])
}

// |f| at z against its largest sampled value on the circle |z|.
fn is_ring_max(f: &AnalyticFunction, z: Complex64) -> bool {
    let r = z.norm();
    let at = f.log_evaluate(z).re;
    (0..256).all(|j| {
        let w = Complex64::from_polar(r, core::f64::consts::TAU * j as f64 / 256.0);
        let v = f.log_evaluate(w).re;
        !(v > at + 1e-9 * at.abs().max(1.0))
    })
}

/// Picks a strategy from the metadata of `f`.
///
/// Order: nonnegative coefficients; known order and type (asymptotic radius
/// refined by saddle solves along the catalog rays); a saddle seed; Darboux
/// metadata; an empirical search over `(1e-3 R, (1 - 1e-6) R)` or, for
/// entire functions, `(1e-2, 10 (n + 1))`.
pub fn auto_radius(f: &AnalyticFunction, n: u64) -> Result<RadiusPlan> {
    if n == 0 {
        return Err(Error::Domain("n must be positive"));
    }
    if f.is_entire() && f.nonnegative_coefficients() {
        return radius_nonneg_convex(f, n);
    }
    if f.is_entire() {
        if let (Some(rho), Some(tau)) = (f.order(), f.type_()) {
            if rho > 0.0 {
                let base = radius_prg_asymptotic(n, rho, tau)?;
                let rays: Vec<f64> = if f.saddle_rays().is_empty() {
                    alloc::vec![0.0]
                } else {
                    f.saddle_rays().to_vec()
                };
                let mut fallback: Option<(f64, RadiusPlan)> = None;
                for theta in rays {
                    let z0 = Complex64::from_polar(base.radius, theta);
                    let Ok(mut plan) = radius_saddle(f, n, z0) else {
                        continue;
                    };
                    let z = plan.saddle_point.unwrap_or(z0);
                    if is_ring_max(f, z) {
                        plan.predicted_nodes = base.predicted_nodes;
                        return Ok(plan);
                    }
                    let height = f.log_evaluate(z).re;
                    if fallback.as_ref().map_or(true, |(h, _)| height > *h) {
                        fallback = Some((height, plan));
                    }
                }
                return Ok(match fallback {
                    Some((_, plan)) => plan,
                    None => base,
                });
            }
        }
        if let Some(seed) = f.saddle_seed() {
            return radius_saddle(f, n, seed(n));
        }
    }
    let big_r = f.radius_of_convergence();
    if let Some(d) = f.darboux() {
        if big_r.is_finite() {
            return radius_darboux(n.max(2), d.beta, big_r);
        }
    }
    let (lo, hi) = if big_r.is_finite() {
        (big_r * 1e-3, big_r * (1.0 - 1e-6))
    } else {
        (1e-2, 10.0 * (n + 1) as f64)
    };
    optimal_radius_empirical(f, None, n, lo, hi).map_err(|e| match e {
        Error::Domain(_) => Error::NoStrategy(format!(
            "no nonnegative-coefficient flag, order/type, saddle seed or Darboux data, and the empirical search failed ({e})"
        )),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sfun::{lambert_w0, lookup};
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn nonneg_examples() {
        let exp = lookup("exp").unwrap().function().clone();
        for n in [1u64, 7, 50, 300] {
            let p = radius_nonneg_convex(&exp, n).unwrap();
            assert!((p.radius / n as f64 - 1.0).abs() < 1e-10, "{n}: {}", p.radius);
        }
        let bell = lookup("bell").unwrap().function().clone();
        let p = radius_nonneg_convex(&bell, 100).unwrap();
        let w = lambert_w0(100.0).unwrap();
        assert!((p.radius / w - 1.0).abs() < 1e-8);
        let q = lookup("q_pochhammer:0.5").unwrap().function().clone();
        let p = radius_nonneg_convex(&q, 20).unwrap();
        assert!((p.radius / 2f64.powf(19.5) - 1.0).abs() < 0.05, "{}", p.radius);
        let ai = lookup("airy_ai").unwrap().function().clone();
        assert!(radius_nonneg_convex(&ai, 5).is_err());
    }

    #[test]
    fn saddle_examples() {
        let exp = lookup("exp").unwrap().function().clone();
        let p = radius_saddle(&exp, 40, c(37.0, 0.0)).unwrap();
        assert!((p.saddle_point.unwrap() - c(40.0, 0.0)).norm() < 1e-9);
        let ai = lookup("airy_ai").unwrap().function().clone();
        let ray = Complex64::from_polar(1.0, 2.0 * core::f64::consts::FRAC_PI_3);
        let p = radius_saddle(&ai, 10, ray * 10f64.powf(2.0 / 3.0)).unwrap();
        assert!((p.radius - 4.72421).abs() < 5e-6, "{}", p.radius);
        let bi = lookup("airy_bi").unwrap().function().clone();
        let p = radius_saddle(&bi, 100, ray * 21.5).unwrap();
        assert!((p.radius - 21.58047).abs() < 5e-6, "{}", p.radius);
    }

    #[test]
    fn prg_examples() {
        assert_eq!(radius_prg_asymptotic(10, 1.0, 1.0).unwrap().radius, 10.0);
        let r = radius_prg_asymptotic(100, 1.5, 2.0 / 3.0).unwrap().radius;
        assert!((r - 21.54435).abs() < 1e-5);
        assert!((radius_prg_asymptotic(8, 2.0, 1.0).unwrap().radius - 2.0).abs() < 1e-15);
        assert!(radius_prg_asymptotic(8, 0.0, 1.0).is_err());
    }

    #[test]
    fn darboux_examples() {
        let half_pi = core::f64::consts::FRAC_PI_2;
        let p = radius_darboux(100, -6.0, half_pi).unwrap();
        assert!((p.radius - half_pi * 0.95).abs() < 1e-15);
        assert!((p.radius - 1.49226).abs() < 1e-5);
        let tau = core::f64::consts::TAU;
        let p = radius_darboux(100, -1.0, tau).unwrap();
        assert!((p.radius - tau * (1.0 - 1.0 / (100.0 * 100f64.ln()))).abs() < 1e-14);
        let p = radius_darboux(100, -1.0, 1.0).unwrap();
        assert!((p.radius - 0.997829).abs() < 1e-6);
        let p = radius_darboux(100, 5.5, 1.0).unwrap();
        assert_eq!(p.radius, 1.0);
        assert!(p.warning.is_some());
        assert!(p.predicted_digit_loss.unwrap() > 12.0);
        assert_eq!(radius_darboux(100, 2.0, 1.0).unwrap_err(), Error::NotABranchPoint);
    }

    #[test]
    fn fbeta_condition_values() {
        let k = fbeta_condition_number(100, -1.0, 1.0 - 1.0 / (100.0 * 100f64.ln())).unwrap();
        assert!((k - 3.25).abs() < 0.05, "{k}");
        let k = fbeta_condition_number(100, -6.0, 0.95).unwrap();
        assert!((k - 1.0769).abs() < 1e-3, "{k}");
    }

    #[test]
    fn scan_examples() {
        let entry = lookup("exp").unwrap();
        let f = entry.function().clone();
        let curve = scan_condition(&f, entry.coefficient(10), 10, 1.0, 100.0, 41).unwrap();
        let (r, _) = curve.argmin().unwrap();
        assert!((r / 10.5 - 1.0).abs() < 0.15, "{r}");
        let curve = scan_condition(&f, entry.coefficient(100), 100, 1.0, 2.0, 3).unwrap();
        assert!((curve.entries[0].1 / 1.182e158 - 1.0).abs() < 1e-3);
        let sq = AnalyticFunction::new(|z: Complex64| z * z);
        let curve = scan_condition(&sq, None, 2, 0.1, 10.0, 5).unwrap();
        assert!(curve.entries.iter().all(|&(_, k)| (k - 1.0).abs() < 1e-12));
        assert!(scan_condition(&sq, None, 2, 1.0, 0.5, 5).is_err());
    }

    #[test]
    fn empirical_examples() {
        let entry = lookup("exp").unwrap();
        let p = optimal_radius_empirical(entry.function(), entry.coefficient(10), 10, 1.0, 100.0).unwrap();
        assert!((p.radius / 10.5 - 1.0).abs() < 0.02, "{}", p.radius);
        let kappa = 10f64.powf(p.predicted_digit_loss.unwrap());
        assert!(kappa <= 1.3);
        let f1 = lookup("f_beta:-1").unwrap();
        let p = optimal_radius_empirical(f1.function(), f1.coefficient(100), 100, 0.9, 0.9999).unwrap();
        assert!(10f64.powf(p.predicted_digit_loss.unwrap()) <= 4.8);
        let sq = AnalyticFunction::new(|z: Complex64| z * z);
        let p = optimal_radius_empirical(&sq, None, 2, 0.5, 2.0).unwrap();
        assert!(p.predicted_digit_loss.unwrap() < 1e-12);
    }

    #[test]
    fn auto_dispatch() {
        let p = auto_radius(&lookup("exp").unwrap().function().clone(), 50).unwrap();
        assert_eq!(p.strategy, Strategy::NonnegConvex);
        assert!((p.radius - 50.0).abs() < 1e-8);
        let p = auto_radius(&lookup("bernoulli").unwrap().function().clone(), 100).unwrap();
        assert_eq!(p.strategy, Strategy::Darboux);
        let p = auto_radius(&lookup("airy_ai").unwrap().function().clone(), 10).unwrap();
        assert_eq!(p.strategy, Strategy::Saddle);
        assert!((p.radius - 4.72421).abs() < 5e-6);
        let p = auto_radius(&lookup("rgamma").unwrap().function().clone(), 50).unwrap();
        assert_eq!(p.strategy, Strategy::Saddle);
    }

    #[test]
    fn first_order_condition() {
        for name in ["exp", "bell", "bessel_i:0"] {
            let f = lookup(name).unwrap().function().clone();
            for n in [5u64, 20, 60] {
                let r = radius_nonneg_convex(&f, n).unwrap().radius;
                let h = 1e-5 * r;
                let d = (log_abs(&f, r + h) - log_abs(&f, r - h)) / (2.0 * h);
                assert!((r * d - n as f64).abs() <= 1e-6 * n as f64, "{name} {n}");
            }
        }
    }

    #[test]
    fn monotone_in_n() {
        for name in ["exp", "bell"] {
            let f = lookup(name).unwrap().function().clone();
            let mut prev = 0.0;
            for n in 2..=50 {
                let r = radius_nonneg_convex(&f, n).unwrap().radius;
                assert!(r >= prev, "{name} {n}");
                prev = r;
            }
        }
    }

    #[test]
    fn coercivity() {
        let entry = lookup("exp").unwrap();
        let a = entry.coefficient(10);
        assert!(condition_at(entry.function(), a, 10, 0.01).unwrap() > 1e10);
        assert!(condition_at(entry.function(), a, 10, 1e4).unwrap() > 1e10);
    }

    #[test]
    fn log_kappa_is_convex_on_oracle_scans() {
        for (name, n, lo, hi) in [("exp", 10, 0.5, 60.0), ("bell", 30, 0.3, 6.0), ("airy_ai", 21, 1.0, 20.0)] {
            let e = lookup(name).unwrap();
            let curve = scan_condition(e.function(), e.coefficient(n), n, lo, hi, 25).unwrap();
            let scale = curve.entries.iter().map(|&(_, k)| k.ln().abs()).fold(1.0, f64::max);
            for d in curve.log_second_differences() {
                assert!(d >= -1e-6 * scale, "{name}: {d}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn saddle_residual_is_small(n in 1u64..200) {
            let exp = lookup("exp").unwrap().function().clone();
            let p = radius_saddle(&exp, n, c(n as f64 * 0.7 + 1.0, 0.3)).unwrap();
            let z = p.saddle_point.unwrap();
            prop_assert!((z * exp.log_derivative(z) - n as f64).norm() <= 1e-10 * n as f64);
        }
    }
}
