//! Extended-range complex numbers and compensated summation.
//!
//! A [`ScaledComplex`] stores `mantissa * e^exponent` with `|mantissa|` in
//! `[1, e)` and an integral exponent, so that circle values such as
//! `e^1342` stay representable.

use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dd::{Dd, LN_10};

const E: f64 = core::f64::consts::E;
// Exponent gap beyond which the smaller addend is below one ulp.
const NEGLIGIBLE_GAP: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledComplex {
    mantissa: Complex64,
    exponent: f64,
}

impl Default for ScaledComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl ScaledComplex {
    pub const ZERO: Self = Self {
        mantissa: Complex64::new(0.0, 0.0),
        exponent: 0.0,
    };
    pub const ONE: Self = Self {
        mantissa: Complex64::new(1.0, 0.0),
        exponent: 0.0,
    };

    /// Builds `mantissa * e^exponent` and normalizes.
    pub fn new(mantissa: Complex64, exponent: f64) -> Self {
        if mantissa.re == 0.0 && mantissa.im == 0.0 {
            return Self::ZERO;
        }
        let (m, bias) = prescale(mantissa);
        let k = (m.norm().ln() + exponent).floor();
        let v = Self::normalize(m * (exponent - k).exp(), k);
        match bias {
            Bias::Up => v * TWO_600,
            Bias::Down => v * TWO_M600,
            Bias::None => v,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0.0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), 0.0)
    }

    /// `e^l` for a complex logarithm `l`; `Re l = -inf` gives zero.
    pub fn from_log(l: Complex64) -> Self {
        if l.re == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let k = l.re.floor();
        let frac = l.re - k;
        let m = Complex64::from_polar(frac.exp(), l.im);
        Self::normalize(m, k)
    }

    fn normalize(mut m: Complex64, mut k: f64) -> Self {
        let a = m.norm();
        if a >= E {
            m /= E;
            k += 1.0;
        } else if a < 1.0 {
            m *= E;
            k -= 1.0;
        }
        Self {
            mantissa: m,
            exponent: k,
        }
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mantissa.is_finite() && self.exponent.is_finite()
    }

    /// Converts to a hardware complex; may overflow to infinity or underflow to zero.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let e = self.exponent;
        if e > 0.0 && e <= 1400.0 {
            let h = (e * 0.5).floor();
            self.mantissa * h.exp() * (e - h).exp()
        } else if e < 0.0 && e >= -1400.0 {
            let h = (e * 0.5).ceil();
            self.mantissa * h.exp() * (e - h).exp()
        } else {
            self.mantissa * e.exp()
        }
    }

    /// Real part as a hardware double.
    pub fn to_f64(&self) -> f64 {
        self.to_complex().re
    }

    /// Natural logarithm with the principal argument of the mantissa.
    pub fn ln(&self) -> Complex64 {
        let l = self.mantissa.ln();
        Complex64::new(l.re + self.exponent, l.im)
    }

    /// `ln |self|`, `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.norm().ln() + self.exponent
        }
    }

    /// `log10 |self|`.
    pub fn log10_abs(&self) -> f64 {
        self.ln_abs() / core::f64::consts::LN_10
    }

    /// `(m, d)` with `self = m * 10^d` and `1 <= max(|m.re|, |m.im|) < 10`
    /// (zero gives `(0, 0)`).
    pub fn to_decimal(&self) -> (Complex64, i64) {
        if self.is_zero() || !self.is_finite() {
            return (self.mantissa, 0);
        }
        let big = self.mantissa.re.abs().max(self.mantissa.im.abs());
        let mut d = ((big.ln() + self.exponent) / core::f64::consts::LN_10).floor() as i64;
        let at = |d: i64| {
            let t = Dd::from_f64(self.exponent) - LN_10 * (d as f64);
            self.mantissa * t.exp().to_f64()
        };
        let mut m = at(d);
        let lead = |m: Complex64| m.re.abs().max(m.im.abs());
        if lead(m) >= 10.0 {
            d += 1;
            m = at(d);
        } else if lead(m) < 1.0 {
            d -= 1;
            m = at(d);
        }
        (m, d)
    }

    /// Modulus as a nonnegative scaled real.
    pub fn abs(&self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::normalize(Complex64::new(self.mantissa.norm(), 0.0), self.exponent)
    }

    pub fn conj(&self) -> Self {
        Self {
            mantissa: self.mantissa.conj(),
            exponent: self.exponent,
        }
    }

    pub fn scale(&self, x: f64) -> Self {
        Self::new(self.mantissa * x, self.exponent)
    }

    /// Multiplies by `e^s` for a real `s`.
    pub fn shift(&self, s: f64) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self::new(self.mantissa, self.exponent + s)
    }

    pub fn recip(&self) -> Self {
        Self::new(self.mantissa.inv(), -self.exponent)
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = Self::ONE;
        let mut base = *self;
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = result * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        result
    }

    /// `|self| / |other|` as a hardware double.
    pub fn abs_ratio(&self, other: &Self) -> f64 {
        if other.is_zero() {
            return if self.is_zero() { f64::NAN } else { f64::INFINITY };
        }
        if self.is_zero() {
            return 0.0;
        }
        let gap = self.exponent - other.exponent;
        let q = self.mantissa.norm() / other.mantissa.norm();
        if gap > 720.0 {
            f64::INFINITY
        } else if gap < -720.0 {
            0.0
        } else {
            q * gap.exp()
        }
    }
}

// Brings a finite complex into a range where its modulus is safely representable.
enum Bias {
    Up,
    Down,
    None,
}

// 2^600 and 2^-600 in normalized form.
const TWO_600: ScaledComplex = ScaledComplex {
    mantissa: Complex64::new(2.431013712417981, 0.0),
    exponent: 415.0,
};
const TWO_M600: ScaledComplex = ScaledComplex {
    mantissa: Complex64::new(1.1181680360639909, 0.0),
    exponent: -416.0,
};

// Brings extreme components into range by an exact power of two.
fn prescale(z: Complex64) -> (Complex64, Bias) {
    let big = z.re.abs().max(z.im.abs());
    const P600: f64 = 4.149515568880993e180;
    if big > 1e300 {
        (z / P600, Bias::Up)
    } else if big < 1e-300 {
        (z * P600, Bias::Down)
    } else {
        (z, Bias::None)
    }
}

impl Mul for ScaledComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        let m = self.mantissa * rhs.mantissa;
        let k = self.exponent + rhs.exponent;
        let a = m.norm();
        if a >= E * E {
            Self::normalize(m / E, k + 1.0)
        } else if a >= 1.0 && a < E {
            Self {
                mantissa: m,
                exponent: k,
            }
        } else {
            Self::normalize(m, k)
        }
    }
}

impl Div for ScaledComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Add for ScaledComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = small.exponent - big.exponent;
        if gap < -NEGLIGIBLE_GAP {
            return big;
        }
        Self::new(big.mantissa + small.mantissa * gap.exp(), big.exponent)
    }
}

impl Neg for ScaledComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Sub for ScaledComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl From<Complex64> for ScaledComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

impl From<f64> for ScaledComplex {
    fn from(x: f64) -> Self {
        Self::from_real(x)
    }
}

/// Neumaier-compensated accumulation, in the order terms are added.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Complex counterpart of [`CompensatedSum`].
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}
