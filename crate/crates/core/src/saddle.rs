//! Saddle-point diagnostics for the Cauchy integrand `z^{-n} f(z)`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dd::{Dd, DdComplex, PI};
use crate::error::{Error, Result};
use crate::quad::{fd_step, AnalyticFunction};
use crate::scaled::ScaledComplex;
use crate::sfun::lambert_w0_complex;

/// The integrand data at a saddle `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleInfo {
    pub z: Complex64,
    /// `z f'(z)/f(z)`.
    pub a: Complex64,
    /// `z a'(z)`.
    pub b: Complex64,
    /// `z^{-n} f(z)`.
    pub f_value: ScaledComplex,
}

impl SaddleInfo {
    /// Collects `a`, `b` and `z^{-n} f(z)` at `z`.
    pub fn at(f: &AnalyticFunction, z: Complex64, n: u64) -> Result<Self> {
        let (a, b) = log_derivative_coefficients(f, z)?;
        let value = f.evaluate_scaled(z).ok_or(Error::ZeroOfFunction)?;
        let f_value = value * ScaledComplex::from_complex(z).powi(-(n as i64));
        Ok(Self { z, a, b, f_value })
    }
}

fn check_nonzero(f: &AnalyticFunction, z: Complex64) -> Result<()> {
    if !f.has_log() && f.evaluate(z) == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroOfFunction);
    }
    Ok(())
}

/// `a(z) = z L'(z)` and `b(z) = z a'(z)` for `L = log f`.
///
/// `a'` comes from central differences of `a` with one Richardson step.
pub fn log_derivative_coefficients(f: &AnalyticFunction, z: Complex64) -> Result<(Complex64, Complex64)> {
    check_nonzero(f, z)?;
    let a_at = |w: Complex64| w * f.log_derivative(w);
    let a = a_at(z);
    if !a.is_finite() {
        return Err(Error::ZeroOfFunction);
    }
    let h = fd_step(z);
    let d = |h: f64| (a_at(z + h) - a_at(z - h)) / (2.0 * h);
    let d1 = d(h);
    let d2 = d(0.5 * h);
    let da = (d2 * 4.0 - d1) / 3.0;
    Ok((a, z * da))
}

/// Multi-saddle estimate `(sum |F|/sqrt(Re b)) / |sum F/sqrt(b)|` of the
/// condition number at the saddle radius.
pub fn saddle_kappa_estimate(saddles: &[SaddleInfo]) -> Result<f64> {
    if saddles.is_empty() {
        return Err(Error::Domain("saddle estimate needs at least one saddle"));
    }
    let mut num = ScaledComplex::ZERO;
    let mut den = ScaledComplex::ZERO;
    for s in saddles {
        if !(s.b.re > 0.0) {
            return Err(Error::Domain("saddle needs Re b > 0"));
        }
        num = num + s.f_value.abs().scale(1.0 / s.b.re.sqrt());
        den = den + s.f_value * ScaledComplex::from_complex(s.b.sqrt().inv());
    }
    if den.is_zero() {
        return Ok(f64::INFINITY);
    }
    Ok(num.abs_ratio(&den))
}

/// `(1 + (Im b / Re b)^2)^{1/4}`, the loss from a circle crossing the saddle
/// off the direction of steepest descent.
pub fn steepest_descent_deviation(b: Complex64) -> Result<f64> {
    if !(b.re > 0.0) || !b.is_finite() {
        return Err(Error::Domain("steepest descent deviation needs Re b > 0"));
    }
    let t = b.im / b.re;
    Ok((1.0 + t * t).sqrt().sqrt())
}

/// Phase data of `1/Gamma` at its approximate saddle `e^{W(1/2 - n)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaResonance {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub sec_abs: f64,
}

/// `r = |z|`, `theta = arg z`, the collective phase `phi` and `|sec phi|`
/// for `z = e^{W(1/2 - n)}`.
///
/// The phase is of size `n`, so `W` is polished and `phi` evaluated in
/// double-double arithmetic.
pub fn gamma_resonance(n: u64) -> Result<GammaResonance> {
    if n < 2 {
        return Err(Error::Domain("gamma resonance needs n >= 2"));
    }
    let big_n = Dd::from_f64(n as f64) - 0.5;
    let seed = lambert_w0_complex(Complex64::new(0.5 - n as f64, 0.0))?;
    // Newton on w + ln w = ln(n - 1/2) + i pi.
    let target = DdComplex::new(big_n.ln(), PI);
    let one = DdComplex::new(Dd::ONE, Dd::ZERO);
    let mut w = DdComplex::new(Dd::from_f64(seed.re), Dd::from_f64(seed.im));
    for _ in 0..4 {
        let g = w.add(w.ln()).sub(target);
        let step = g.mul(w).div(w.add(one));
        w = w.sub(step);
    }
    let theta = w.im;
    let (s, c) = theta.sin_cos();
    let s2 = s.sqr();
    let x = c / s - theta / s2;
    let correction = if x.hi == 0.0 {
        Dd::ZERO
    } else {
        x.recip().atan() * 0.5
    };
    let phi = big_n * (s2 / theta - theta + theta / (big_n.sqr() * 12.0)) - correction;
    let (_, cp) = phi.sin_cos();
    Ok(GammaResonance {
        r: w.re.to_f64().exp(),
        theta: theta.to_f64(),
        phi: phi.to_f64(),
        sec_abs: 1.0 / cp.abs().to_f64(),
    })
}

/// Saddle candidates `z` and, for real-symmetric `f`, `conj z`.
pub fn symmetric_saddles(f: &AnalyticFunction, z: Complex64, n: u64) -> Result<Vec<SaddleInfo>> {
    let mut out = alloc::vec![SaddleInfo::at(f, z, n)?];
    if z.im.abs() > 1e-12 * z.norm() && is_real_symmetric(f, z) {
        out.push(SaddleInfo::at(f, z.conj(), n)?);
    }
    Ok(out)
}

fn is_real_symmetric(f: &AnalyticFunction, z: Complex64) -> bool {
    match (f.evaluate_scaled(z), f.evaluate_scaled(z.conj())) {
        (Some(a), Some(b)) if !a.is_zero() => (a.conj() - b).abs_ratio(&a) <= 1e-10,
        _ => false,
    }
}
