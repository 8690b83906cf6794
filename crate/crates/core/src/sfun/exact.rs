//! Exact integer and rational coefficient tables.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::race::OnceBox;

use crate::dd::{scaled_exp, Dd};
use crate::scaled::ScaledComplex;

pub const BERNOULLI_MAX: usize = 130;
pub const BELL_MAX: usize = 256;
pub const SEC6_MAX: usize = 128;

// Leading 106 bits of x as (value, binary exponent).
fn leading_bits(x: &BigUint) -> (Dd, i64) {
    let bits = x.bits() as i64;
    let shift = (bits - 106).max(0);
    let top = (x >> shift as usize).to_u128().unwrap_or(0);
    let hi = top as f64;
    let rest = top as i128 - hi as i128;
    (
        Dd {
            hi,
            lo: rest as f64,
        },
        shift,
    )
}

/// `num / den` as a scaled real with about 30 significant digits of care.
pub fn ratio_to_scaled(num: &BigInt, den: &BigInt) -> ScaledComplex {
    if num.is_zero() {
        return ScaledComplex::ZERO;
    }
    let sign = if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
        -1.0
    } else {
        1.0
    };
    let (a, ea) = leading_bits(num.magnitude());
    let (b, eb) = leading_bits(den.magnitude());
    let ln2 = Dd {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };
    let t = a.ln() - b.ln() + ln2 * ((ea - eb) as f64);
    let v = scaled_exp(t);
    ScaledComplex::new(Complex64::new(sign * v.mantissa().re, 0.0), v.exponent())
}

pub fn rational_to_scaled(q: &BigRational) -> ScaledComplex {
    ratio_to_scaled(q.numer(), q.denom())
}

fn binomial_rows(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    rows.push(vec![BigInt::one()]);
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

static BINOMIALS: OnceBox<Vec<Vec<BigInt>>> = OnceBox::new();

fn binomials() -> &'static Vec<Vec<BigInt>> {
    BINOMIALS.get_or_init(|| Box::new(binomial_rows(BERNOULLI_MAX + 2)))
}

static BERNOULLI: OnceBox<Vec<BigRational>> = OnceBox::new();

/// Bernoulli numbers `B_0..=B_130` with `B_1 = -1/2`.
pub fn bernoulli_numbers() -> &'static [BigRational] {
    BERNOULLI.get_or_init(|| {
        let c = binomials();
        let mut b: Vec<BigRational> = Vec::with_capacity(BERNOULLI_MAX + 1);
        b.push(BigRational::one());
        for n in 1..=BERNOULLI_MAX {
            if n > 1 && n % 2 == 1 {
                b.push(BigRational::zero());
                continue;
            }
            // sum_{k=0}^{n} C(n+1, k) B_k = 0
            let mut acc = BigRational::zero();
            for (k, bk) in b.iter().enumerate() {
                if !bk.is_zero() {
                    acc += bk * BigRational::from_integer(c[n + 1][k].clone());
                }
            }
            b.push(-acc / BigRational::from_integer(c[n + 1][n].clone()));
        }
        Box::new(b)
    })
}

static BELL: OnceBox<Vec<BigUint>> = OnceBox::new();

/// Bell numbers `B_0..=B_256` from the Bell triangle.
pub fn bell_numbers() -> &'static [BigUint] {
    BELL.get_or_init(|| {
        let mut out = Vec::with_capacity(BELL_MAX + 1);
        out.push(BigUint::one());
        let mut row = vec![BigUint::one()];
        for _ in 1..=BELL_MAX {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(row.last().cloned().unwrap_or_default());
            for x in &row {
                let v = next.last().cloned().unwrap_or_default() + x;
                next.push(v);
            }
            out.push(next[0].clone());
            row = next;
        }
        Box::new(out)
    })
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = Vec::with_capacity(n + 1);
    f.push(BigInt::one());
    for k in 1..=n {
        let v = &f[k - 1] * BigInt::from(k);
        f.push(v);
    }
    f
}

static SEC6: OnceBox<Vec<BigInt>> = OnceBox::new();

/// `sec^6` coefficients as `n! a_n` (integers), `n <= 128`.
pub fn sec6_egf() -> &'static [BigInt] {
    SEC6.get_or_init(|| {
        let c = binomial_rows(SEC6_MAX);
        // Secant numbers from cos * sec = 1.
        let mut sec = vec![BigInt::zero(); SEC6_MAX + 1];
        sec[0] = BigInt::one();
        for k in 1..=SEC6_MAX / 2 {
            let mut acc = BigInt::zero();
            for j in 0..k {
                let term = &c[2 * k][2 * j] * &sec[2 * j];
                if (k - j) % 2 == 1 {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            sec[2 * k] = -acc;
        }
        let egf_mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
            (0..=SEC6_MAX)
                .map(|n| {
                    let mut s = BigInt::zero();
                    for k in 0..=n {
                        if !a[k].is_zero() && !b[n - k].is_zero() {
                            s += &c[n][k] * &a[k] * &b[n - k];
                        }
                    }
                    s
                })
                .collect()
        };
        let sec2 = egf_mul(&sec, &sec);
        let sec4 = egf_mul(&sec2, &sec2);
        Box::new(egf_mul(&sec4, &sec2))
    })
}

static FACTORIALS: OnceBox<Vec<BigInt>> = OnceBox::new();

pub fn factorial_table() -> &'static [BigInt] {
    FACTORIALS.get_or_init(|| Box::new(factorials(BELL_MAX)))
}

/// `B_n / n!`.
pub fn bernoulli_coefficient(n: u64) -> Option<ScaledComplex> {
    let b = bernoulli_numbers().get(n as usize)?;
    let f = &factorial_table()[n as usize];
    Some(ratio_to_scaled(b.numer(), &(b.denom() * f)))
}

/// `Bell_n / n!`.
pub fn bell_coefficient(n: u64) -> Option<ScaledComplex> {
    let b = bell_numbers().get(n as usize)?;
    let f = &factorial_table()[n as usize];
    Some(ratio_to_scaled(&BigInt::from(b.clone()), f))
}

/// Taylor coefficient of `sec^6`.
pub fn sec6_coefficient(n: u64) -> Option<ScaledComplex> {
    let s = sec6_egf().get(n as usize)?;
    Some(ratio_to_scaled(s, &factorial_table()[n as usize]))
}

/// Taylor coefficient of `(1+z)^10 log(1+z)` as an exact rational.
pub fn fornberg_log_rational(n: u64) -> BigRational {
    let c = binomials();
    let mut acc = BigRational::zero();
    if n == 0 {
        return acc;
    }
    for j in 0..=10u64.min(n - 1) {
        let k = n - j;
        let mut term = BigRational::new(c[10][j as usize].clone(), BigInt::from(k));
        if k % 2 == 0 {
            term = -term;
        }
        acc += term;
    }
    acc
}
