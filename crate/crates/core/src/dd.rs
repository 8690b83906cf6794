//! Double-double arithmetic, used where phases of size ~1e4 must be
//! resolved to ~1e-16 absolute.

use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::scaled::ScaledComplex;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const PI: Dd = Dd {
    hi: 3.141592653589793,
    lo: 1.2246467991473532e-16,
};
pub const FRAC_PI_2: Dd = Dd {
    hi: 1.5707963267948966,
    lo: 6.123233995736766e-17,
};
pub const LN_10: Dd = Dd {
    hi: 2.302585092994046,
    lo: -2.1707562233822494e-16,
};
const LN_2: Dd = Dd {
    hi: 0.6931471805599453,
    lo: 2.3190468138462996e-17,
};

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn exp(self) -> Dd {
        let k = (self.hi / LN_2.hi).round();
        let r = self - LN_2 * k;
        let r = r * (1.0 / 1024.0);
        // Taylor series of e^r - 1 on |r| < 4e-4.
        let mut term = r;
        let mut sum = r;
        for i in 2..16 {
            term = term * r / (i as f64);
            sum = sum + term;
        }
        for _ in 0..10 {
            sum = sum * (sum + 2.0);
        }
        let y = sum + 1.0;
        Dd {
            hi: y.hi * 2f64.powi(k as i32),
            lo: y.lo * 2f64.powi(k as i32),
        }
    }

    pub fn ln(self) -> Dd {
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - 1.0;
        }
        y
    }

    /// Returns `(sin x, cos x)`.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let k = (self.hi / FRAC_PI_2.hi).round();
        let r = self - FRAC_PI_2 * k;
        let r2 = r.sqr();
        let mut s = r;
        let mut c = Dd::ONE;
        let mut ts = r;
        let mut tc = Dd::ONE;
        for i in 1..20 {
            let a = (2 * i) as f64;
            ts = -(ts * r2) / (a * (a + 1.0));
            tc = -(tc * r2) / ((a - 1.0) * a);
            s = s + ts;
            c = c + tc;
        }
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn atan(self) -> Dd {
        let mut t = Dd::from_f64(self.hi.atan());
        for _ in 0..2 {
            let (s, c) = t.sin_cos();
            t = t - (s - self * c) / (c + self * s);
        }
        t
    }

    /// Angle of `(x, y)` in `(-pi, pi]`.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        if x.hi.abs() >= y.hi.abs() {
            let a = (y / x).atan();
            if x.hi > 0.0 {
                a
            } else if y.hi >= 0.0 {
                a + PI
            } else {
                a - PI
            }
        } else {
            let a = (x / y).atan();
            if y.hi > 0.0 {
                FRAC_PI_2 - a
            } else {
                -FRAC_PI_2 - a
            }
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, b: f64) -> Dd {
        self + Dd::from_f64(b)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    fn sub(self, b: f64) -> Dd {
        self + Dd::from_f64(-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, b: f64) -> Dd {
        self * Dd::from_f64(b)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + q3
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, b: f64) -> Dd {
        self / Dd::from_f64(b)
    }
}

/// `p * 2^binary` as a scaled value, converting the binary exponent exactly.
pub fn scaled_from_binary(p: Dd, binary: i64) -> ScaledComplex {
    scaled_exp(LN_2 * (binary as f64) + p.ln())
}

/// `m * 2^binary` for a complex `m`.
pub fn scaled_complex_from_binary(m: Complex64, binary: i64) -> ScaledComplex {
    if binary == 0 {
        return ScaledComplex::from_complex(m);
    }
    let t = LN_2 * (binary as f64);
    let k = t.hi.floor();
    let frac = (t - k).to_f64();
    ScaledComplex::new(m * frac.exp(), k)
}

/// `e^t` as a scaled value, keeping the fractional part of `t` to double-double accuracy.
pub fn scaled_exp(t: Dd) -> ScaledComplex {
    let k = t.hi.floor();
    ScaledComplex::new(Complex64::new((t - k).exp().to_f64(), 0.0), k)
}

/// `r^{-n}` as a scaled real.
pub fn radius_power(r: f64, n: u64) -> ScaledComplex {
    if n == 0 {
        return ScaledComplex::ONE;
    }
    scaled_exp(-(Dd::from_f64(r).ln() * (n as f64)))
}

/// Complex double-double, just enough for a Lambert W refinement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn new(re: Dd, im: Dd) -> Self {
        Self { re, im }
    }

    pub fn ln(self) -> Self {
        let m2 = self.re.sqr() + self.im.sqr();
        Self::new(m2.ln() * 0.5, Dd::atan2(self.im, self.re))
    }

    pub fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }

    pub fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn div(self, o: Self) -> Self {
        let d = o.re.sqr() + o.im.sqr();
        Self::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_functions() {
        let two = Dd::from_f64(2.0);
        assert!(((two.ln() * 0.5).exp().sqr() - two).to_f64().abs() < 1e-30);
        let e = Dd::ONE.exp();
        assert!((e.hi - core::f64::consts::E).abs() < 5e-16);
        assert!((e.ln() - Dd::ONE).to_f64().abs() < 1e-30);
        let (sn, cs) = Dd::from_f64(6000.25).sin_cos();
        assert!((sn.sqr() + cs.sqr() - Dd::ONE).to_f64().abs() < 1e-30);
        let (s6, _) = (PI * 6.0).sin_cos();
        assert!(s6.to_f64().abs() < 1e-30);
        let a = Dd::from_f64(0.7).atan();
        let (s, c) = a.sin_cos();
        assert!((s / c - Dd::from_f64(0.7)).to_f64().abs() < 1e-30);
        assert!((Dd::atan2(Dd::ONE, -Dd::ONE) - PI * 0.75).to_f64().abs() < 1e-30);
    }
}
