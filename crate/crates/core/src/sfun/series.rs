//! Power-series evaluators with range-safe accumulation.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dd::scaled_complex_from_binary;
use crate::scaled::{CompensatedComplexSum, ScaledComplex};
use crate::sfun::gamma::factorial_scaled;

pub const AI0: f64 = 0.355_028_053_887_817_24;
pub const AI1: f64 = -0.258_819_403_792_806_8;
pub const BI0: f64 = 0.614_926_627_446_000_7;
pub const BI1: f64 = 0.448_288_357_353_826_36;

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_BY: f64 = 2.409919865102884e-181; // 2^-600
const RESCALE_BITS: i64 = 600;
const MAX_TERMS: u64 = 2_000_000;

/// Sums `u_0 = 1, u_{j+1} = u_j * ratio(j)`, returning `sum u_j` and
/// `sum weight(j) u_j`.
pub fn hyper_series<R, W>(ratio: R, weight: W) -> (ScaledComplex, ScaledComplex)
where
    R: Fn(u64) -> Complex64,
    W: Fn(u64) -> f64,
{
    let mut u = Complex64::new(1.0, 0.0);
    let mut plain = CompensatedComplexSum::new();
    let mut weighted = CompensatedComplexSum::new();
    let mut binary = 0i64;
    let mut peak_log = 0.0f64;
    for j in 0..MAX_TERMS {
        plain.add(u);
        weighted.add(u * weight(j));
        let q = ratio(j);
        u *= q;
        if u.re == 0.0 && u.im == 0.0 {
            break;
        }
        let a = u.norm();
        let log = a.ln() + binary as f64 * core::f64::consts::LN_2;
        peak_log = peak_log.max(log);
        if q.norm() < 0.5 && log < peak_log - 43.0 {
            break;
        }
        if a > RESCALE_ABOVE {
            u *= RESCALE_BY;
            plain = scaled_sum(plain, RESCALE_BY);
            weighted = scaled_sum(weighted, RESCALE_BY);
            binary += RESCALE_BITS;
        }
    }
    (
        scaled_complex_from_binary(plain.value(), binary),
        scaled_complex_from_binary(weighted.value(), binary),
    )
}

fn scaled_sum(s: CompensatedComplexSum, f: f64) -> CompensatedComplexSum {
    let mut out = CompensatedComplexSum::new();
    out.add(s.value() * f);
    out
}

/// `(y(z), y'(z))` for the solution of `y'' = z y` with `y(0) = c0`, `y'(0) = c1`.
pub fn airy_scaled(z: Complex64, c0: f64, c1: f64) -> (ScaledComplex, ScaledComplex) {
    if z.re == 0.0 && z.im == 0.0 {
        return (ScaledComplex::from_real(c0), ScaledComplex::from_real(c1));
    }
    let z3 = z * z * z;
    let (s0, w0) = hyper_series(
        |j| {
            let k = 3.0 * j as f64;
            z3 / ((k + 3.0) * (k + 2.0))
        },
        |j| 3.0 * j as f64,
    );
    let (s1, w1) = hyper_series(
        |j| {
            let k = 3.0 * j as f64;
            z3 / ((k + 4.0) * (k + 3.0))
        },
        |j| 3.0 * j as f64 + 1.0,
    );
    let zs = ScaledComplex::from_complex(z);
    let a = ScaledComplex::from_real(c0);
    let b = ScaledComplex::from_real(c1);
    let value = a * s0 + b * zs * s1;
    let deriv = a * w0 / zs + b * w1;
    (value, deriv)
}

/// `I_k(z)` (`sign = 1`) or `J_k(z)` (`sign = -1`).
pub fn bessel_scaled(k: u32, z: Complex64, sign: f64) -> ScaledComplex {
    let w = z * z * 0.25 * sign;
    let kf = k as f64;
    let (s, _) = hyper_series(|j| w / ((j as f64 + 1.0) * (j as f64 + 1.0 + kf)), |_| 0.0);
    let lead = ScaledComplex::from_complex(z * 0.5).powi(k as i64) / factorial_scaled(k as u64);
    lead * s
}

/// `z^{-k/2} I_k(2 sqrt z) = sum z^j / (j! (j+k)!)`.
pub fn bessel_i_reduced(k: u32, z: Complex64) -> ScaledComplex {
    let kf = k as f64;
    let (s, _) = hyper_series(|j| z / ((j as f64 + 1.0) * (j as f64 + 1.0 + kf)), |_| 0.0);
    s / factorial_scaled(k as u64)
}

/// `erf z` from its Maclaurin series.
pub fn erf(z: Complex64) -> Complex64 {
    let w = -(z * z);
    let (_, s) = hyper_series(|j| w / (j as f64 + 1.0), |j| 1.0 / (2.0 * j as f64 + 1.0));
    s.to_complex() * z * (2.0 / core::f64::consts::PI.sqrt())
}

/// `e^z - 1` without cancelation near zero.
pub fn expm1(z: Complex64) -> Complex64 {
    let s = (0.5 * z.im).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * s * s,
        z.re.exp() * z.im.sin(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn airy_reference_values() {
        let one = Complex64::new(1.0, 0.0);
        let (ai, dai) = airy_scaled(one, AI0, AI1);
        assert!(rel(ai.to_complex(), Complex64::new(0.1352924163128814, 0.0)) < 1e-14);
        assert!(rel(dai.to_complex(), Complex64::new(-0.1591474412967932, 0.0)) < 1e-14);
        let (bi, _) = airy_scaled(one, BI0, BI1);
        assert!(rel(bi.to_complex(), Complex64::new(1.207423594952871, 0.0)) < 1e-14);
        let (ai, _) = airy_scaled(Complex64::new(-2.0, 0.0), AI0, AI1);
        assert!(rel(ai.to_complex(), Complex64::new(0.2274074282016856, 0.0)) < 1e-14);
        let (ai, _) = airy_scaled(Complex64::new(5.0, 0.0), AI0, AI1);
        assert!(rel(ai.to_complex(), Complex64::new(1.083444281360744e-4, 0.0)) < 1e-8);
    }

    #[test]
    fn airy_growth_ray() {
        let r: f64 = 20.0;
        let z = Complex64::from_polar(r, 2.0 * core::f64::consts::PI / 3.0);
        let (ai, _) = airy_scaled(z, AI0, AI1);
        let zeta = 2.0 / 3.0 * r.powf(1.5);
        let model = zeta - 0.25 * r.ln() - (2.0 * core::f64::consts::PI.sqrt()).ln() + (5.0 / 72.0 / zeta).ln_1p();
        assert!((ai.ln_abs() - model).abs() < 1e-4, "{}", ai.ln_abs() - model);
        let (big, _) = airy_scaled(Complex64::from_polar(110.0, 2.0), AI0, AI1);
        assert!(big.is_finite() && big.ln_abs() > 700.0);
    }

    #[test]
    fn bessel_values() {
        let x = Complex64::new(1.0, 0.0);
        assert!(rel(bessel_scaled(0, x, 1.0).to_complex(), Complex64::new(1.2660658777520082, 0.0)) < 1e-15);
        assert!(rel(bessel_scaled(1, x, -1.0).to_complex(), Complex64::new(0.44005058574493355, 0.0)) < 1e-15);
        let v = bessel_i_reduced(0, Complex64::new(0.25, 0.0)).to_complex();
        assert!(rel(v, Complex64::new(1.2660658777520082, 0.0)) < 1e-15);
    }

    #[test]
    fn erf_and_expm1() {
        let v = erf(Complex64::new(0.5, 0.0));
        assert!(rel(v, Complex64::new(0.5204998778130465, 0.0)) < 1e-15);
        let z = Complex64::new(1e-10, 2e-10);
        assert!(rel(expm1(z), z + z * z * 0.5) < 1e-15);
    }
}
