//! Principal branch of the Lambert W function.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const INV_E: f64 = 0.36787944117144233;
const E: f64 = core::f64::consts::E;

/// `W_0(x)` for real `x >= -1/e`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < -INV_E - 4.0 * f64::EPSILON * INV_E {
        return Err(Error::Domain("lambert_w0 needs x >= -1/e"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if x < -0.2 {
        let q = 2.0 * (E * x + 1.0);
        if q <= 0.0 {
            return Ok(-1.0);
        }
        let p = q.sqrt();
        let seed = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
        if p < 1e-4 {
            return Ok(seed);
        }
        return Ok(halley(x, seed));
    }
    if x > 3.0 {
        let l1 = x.ln();
        let l2 = l1.ln();
        let mut w = l1 - l2 + l2 / l1;
        // Newton on w + ln w = ln x.
        for _ in 0..50 {
            let next = w * (1.0 + l1 - w.ln()) / (1.0 + w);
            let done = (next - w).abs() <= 2.0 * f64::EPSILON * next.abs();
            w = next;
            if done {
                break;
            }
        }
        return Ok(w);
    }
    let seed = if x.abs() < 0.2 {
        // Taylor series sum (-k)^{k-1} x^k / k!.
        x * (1.0 + x * (-1.0 + x * (1.5 + x * (-8.0 / 3.0 + x * (125.0 / 24.0 + x * (-54.0 / 5.0))))))
    } else {
        let l = x.ln_1p();
        l * (1.0 - (1.0 + l).ln() / (2.0 + l))
    };
    Ok(halley(x, seed))
}

fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..60 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= 2.0 * f64::EPSILON * w.abs().max(1e-300) {
            break;
        }
    }
    w
}

/// Principal branch `W_0(z)` for complex `z`; on the cut `z < -1/e` the
/// value with positive imaginary part.
pub fn lambert_w0_complex(z: Complex64) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(Error::Domain("lambert_w0_complex needs a finite argument"));
    }
    let z = if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    };
    if z.im == 0.0 && z.re >= -INV_E {
        return lambert_w0(z.re).map(|w| Complex64::new(w, 0.0));
    }
    let one = Complex64::new(1.0, 0.0);
    let near_branch = (z + INV_E).norm() < 0.7;
    let mut w = if near_branch {
        let p = ((z * E + 1.0) * 2.0).sqrt();
        -one + p * (one + p * (-1.0 / 3.0 + p * (11.0 / 72.0)))
    } else if z.norm() < 3.0 {
        (z + 1.0).ln()
    } else {
        let l1 = z.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    let large = z.norm() > 1e3;
    let lz = z.ln();
    for _ in 0..100 {
        let next = if large {
            w * (one + lz - w.ln()) / (one + w)
        } else {
            let ew = w.exp();
            let f = w * ew - z;
            let wp1 = w + 1.0;
            let denom = ew * wp1 - (w + 2.0) * f / (wp1 * 2.0);
            w - f / denom
        };
        if !next.is_finite() {
            return Err(Error::NotConverged);
        }
        let step = (next - w).norm();
        w = next;
        if step <= 4.0 * f64::EPSILON * w.norm().max(1.0) {
            return Ok(w);
        }
    }
    Err(Error::NotConverged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // w <- (w^2 + x e^{-w}) / (w + 1)
    fn fixed_point_oracle(x: f64) -> f64 {
        let mut w = 0.5;
        for _ in 0..200 {
            w = (w * w + x * (-w).exp()) / (w + 1.0);
        }
        w
    }

    #[test]
    fn real_examples() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        let omega = fixed_point_oracle(1.0);
        assert!((omega - 0.5671432904097838).abs() < 1e-15);
        assert!((lambert_w0(1.0).unwrap() - omega).abs() < 1e-15);
        assert!((lambert_w0(-INV_E).unwrap() + 1.0).abs() < 1e-7);
        assert!(lambert_w0(-0.5).is_err());
    }

    #[test]
    fn complex_examples() {
        let w = lambert_w0_complex(Complex64::new(1.0, 0.0)).unwrap();
        assert!((w.re - fixed_point_oracle(1.0)).abs() < 1e-15 && w.im == 0.0);
        let w = lambert_w0_complex(Complex64::new(E, 0.0)).unwrap();
        assert!((w - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let z = Complex64::new(-2005.5, 0.0);
        let w = lambert_w0_complex(z).unwrap();
        assert!(w.im > 0.0 && w.im < core::f64::consts::PI);
        assert!((w * w.exp() - z).norm() < 1e-13 * z.norm());
        let w = lambert_w0_complex(Complex64::new(-1.0, -0.0)).unwrap();
        assert!(w.im > 0.0);
    }

    #[test]
    fn identity_on_log_grid() {
        for i in 0..1000 {
            let x = 10f64.powf(-300.0 + 600.0 * i as f64 / 999.0);
            let w = lambert_w0(x).unwrap();
            let resid = if x > 10.0 {
                (w + w.ln() - x.ln()).abs() / x.ln()
            } else {
                (w * w.exp() - x).abs() / x.max(1.0)
            };
            assert!(resid <= 1e-15, "x = {x}: {resid}");
        }
        for i in 0..1000 {
            let x = -INV_E * (i as f64 / 1000.0);
            let w = lambert_w0(x).unwrap();
            assert!((w * w.exp() - x).abs() <= 1e-13, "x = {x}");
        }
    }

    #[test]
    fn complex_identity_grid() {
        for i in 0..1000 {
            let t = i as f64 / 1000.0;
            let modulus = 10f64.powf(-6.0 + 18.0 * t);
            let angle = core::f64::consts::PI * (2.0 * ((i * 37) % 1000) as f64 / 1000.0 - 1.0);
            let z = Complex64::from_polar(modulus, angle);
            let w = lambert_w0_complex(z).unwrap();
            assert!(w.im.abs() < core::f64::consts::PI);
            let resid = (w * w.exp() - z).norm();
            assert!(resid <= 1e-13 * z.norm().max(1.0), "z = {z}: {resid}");
        }
    }

    proptest! {
        #[test]
        fn real_identity(x in -0.36787944117144..1e6f64) {
            let w = lambert_w0(x).unwrap();
            prop_assert!((w * w.exp() - x).abs() <= 1e-13 * x.abs().max(1.0));
        }

        #[test]
        fn complex_identity(re in -1e4..1e4f64, im in -1e4..1e4f64) {
            let z = Complex64::new(re, im);
            let w = lambert_w0_complex(z).unwrap();
            prop_assert!((w * w.exp() - z).norm() <= 1e-13 * z.norm().max(1.0));
        }
    }
}
