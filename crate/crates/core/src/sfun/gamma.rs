//! Complex log-gamma, digamma and factorials.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::scaled::{CompensatedSum, ScaledComplex};

const LN_PI: f64 = 1.1447298858494002;
const HALF_LN_TAU: f64 = 0.9189385332046728;
const PI: f64 = core::f64::consts::PI;
const TAU: f64 = core::f64::consts::TAU;
// B_{2k} for k = 1..8.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];
const STIRLING_MIN: f64 = 15.0;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor()
}

/// Principal branch of `log Gamma(z)`.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(Error::Domain("log_gamma_complex needs a finite argument"));
    }
    if is_pole(z) {
        return Err(Error::Pole);
    }
    if z.re >= 0.5 {
        return Ok(log_gamma_right(z));
    }
    let sign = if z.im.is_sign_negative() { -1.0 } else { 1.0 };
    let branch = sign * TAU * (0.5 * z.re + 0.25).floor();
    let one = Complex64::new(1.0, 0.0);
    Ok(Complex64::new(LN_PI, branch) - ln_sin_pi(z) - log_gamma_right(one - z))
}

fn log_gamma_right(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    if z.norm() < STIRLING_MIN {
        let n = (STIRLING_MIN - z.re).ceil().max(0.0) as usize;
        for k in 0..n {
            shift += (z + k as f64).ln();
        }
        w = z + n as f64;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k2 = 2.0 * (k + 1) as f64;
        series += p * (b / (k2 * (k2 - 1.0)));
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_TAU + series - shift
}

/// `sin(pi x)` with exact argument reduction.
pub fn sin_pi(x: f64) -> f64 {
    let mut r = x - 2.0 * (x * 0.5).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

/// `cos(pi x)` with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn sin_pi_complex(z: Complex64) -> Complex64 {
    let (sx, cx) = (sin_pi(z.re), cos_pi(z.re));
    let y = PI * z.im;
    Complex64::new(sx * y.cosh(), cx * y.sinh())
}

// Principal log of sin(pi z), stable when |Im z| is large.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() <= 1.0 {
        return sin_pi_complex(z).ln();
    }
    let w = if z.im > 0.0 { z } else { z.conj() };
    // sin(pi w) = (i/2) e^{-i pi w} (1 - e^{2 pi i w})
    let q = Complex64::new(cos_pi(2.0 * w.re), sin_pi(2.0 * w.re)) * (-TAU * w.im).exp();
    let tail = ln_1p(-q);
    let t = 0.5 - w.re;
    let t = t - 2.0 * (t * 0.5).round();
    let mut l = Complex64::new(PI * w.im - core::f64::consts::LN_2, PI * t) + tail;
    if l.im <= -PI {
        l.im += TAU;
    } else if l.im > PI {
        l.im -= TAU;
    }
    if z.im > 0.0 {
        l
    } else {
        l.conj()
    }
}

fn ln_1p(q: Complex64) -> Complex64 {
    if q.norm() < 1e-5 {
        q - q * q * 0.5 + q * q * q / 3.0
    } else {
        (q + 1.0).ln()
    }
}

/// Digamma `psi(z) = Gamma'(z)/Gamma(z)`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole);
    }
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        return Ok(digamma_right(one - z) - cot_pi(z) * PI);
    }
    Ok(digamma_right(z))
}

fn digamma_right(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    if z.norm() < STIRLING_MIN {
        let n = (STIRLING_MIN - z.re).ceil().max(0.0) as usize;
        for k in 0..n {
            shift += (z + k as f64).inv();
        }
        w = z + n as f64;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k2 = 2.0 * (k + 1) as f64;
        series += p * (b / k2);
        p *= inv2;
    }
    w.ln() - inv * 0.5 - series - shift
}

fn cot_pi(z: Complex64) -> Complex64 {
    if z.im.abs() <= 1.0 {
        let s = sin_pi_complex(z);
        let y = PI * z.im;
        let c = Complex64::new(cos_pi(z.re) * y.cosh(), -sin_pi(z.re) * y.sinh());
        return c / s;
    }
    let w = if z.im > 0.0 { z } else { z.conj() };
    // cot(pi w) = -i (1 + q)/(1 - q), q = e^{2 pi i w}
    let q = Complex64::new(cos_pi(2.0 * w.re), sin_pi(2.0 * w.re)) * (-TAU * w.im).exp();
    let c = Complex64::new(0.0, -1.0) * (q + 1.0) / (Complex64::new(1.0, 0.0) - q);
    if z.im > 0.0 {
        c
    } else {
        c.conj()
    }
}

/// `ln n!` by compensated summation of `ln k` (log-gamma beyond 1e5).
pub fn ln_factorial(n: u64) -> f64 {
    if n > 100_000 {
        return log_gamma_right(Complex64::new(n as f64 + 1.0, 0.0)).re;
    }
    let mut acc = CompensatedSum::new();
    for k in 2..=n {
        acc.add((k as f64).ln());
    }
    acc.value()
}

/// `n!` as a scaled real, from a double-double running product.
pub fn factorial_scaled(n: u64) -> ScaledComplex {
    if n > 1_000_000 {
        return ScaledComplex::from_log(Complex64::new(ln_factorial(n), 0.0));
    }
    let mut p = Dd::ONE;
    let mut binary = 0i64;
    for k in 2..=n {
        p = p * (k as f64);
        if p.hi > 1e200 {
            p = Dd {
                hi: p.hi * 2f64.powi(-600),
                lo: p.lo * 2f64.powi(-600),
            };
            binary += 600;
        }
    }
    crate::dd::scaled_from_binary(p, binary)
}
