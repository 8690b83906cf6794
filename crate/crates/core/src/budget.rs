//! Closed-form estimates of the node count `m_eps` at which the trapezoidal
//! sum reaches relative accuracy `eps`.
//!
//! Tolerances are carried as `ln(1/eps)` so that targets such as `1e-1000`
//! remain expressible.

use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::sfun::lambert_w0;

/// A relative tolerance `eps` in `(0, 1]`, stored as `ln(1/eps)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Tolerance {
    log_inv: f64,
}

impl Tolerance {
    pub fn from_eps(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::Domain("tolerance must lie in (0, 1]"));
        }
        Ok(Self { log_inv: -eps.ln() })
    }

    /// `eps = 10^-digits`.
    pub fn from_digits(digits: f64) -> Result<Self> {
        if !(digits >= 0.0 && digits.is_finite()) {
            return Err(Error::Domain("tolerance must lie in (0, 1]"));
        }
        Ok(Self {
            log_inv: digits * core::f64::consts::LN_10,
        })
    }

    /// `ln(1/eps)`.
    pub fn log_inv(&self) -> f64 {
        self.log_inv
    }

    /// `eps` as a hardware double (zero when it underflows).
    pub fn eps(&self) -> f64 {
        (-self.log_inv).exp()
    }
}

impl FromStr for Tolerance {
    type Err = Error;

    /// Accepts decimal and scientific notation, including exponents beyond
    /// the hardware range such as `1e-1000`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain("tolerance must be a number in (0, 1]");
        let (mant, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let m: f64 = mant.parse().map_err(|_| bad())?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(bad());
        }
        let log_inv = -(m.ln() + exp as f64 * core::f64::consts::LN_10);
        if !(log_inv >= 0.0 && log_inv.is_finite()) {
            return Err(bad());
        }
        Ok(Self { log_inv })
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut digits = self.log_inv / core::f64::consts::LN_10;
        if (digits - digits.round()).abs() < 1e-9 * digits.max(1.0) {
            digits = digits.round();
        }
        let k = digits.ceil();
        let m = 10f64.powf(k - digits);
        write!(f, "{m}e-{k}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    FiniteR,
    EntireOrderType,
    PrgQuasioptimal,
    DarbouxSuboptimal,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::FiniteR => "finite_R",
            Regime::EntireOrderType => "entire_order_type",
            Regime::PrgQuasioptimal => "prg_quasioptimal",
            Regime::DarbouxSuboptimal => "darboux_suboptimal",
        }
    }
}

/// An asymptotic node-count estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeBudget {
    /// Un-ceiled estimate.
    pub m_estimate: f64,
    pub regime: Regime,
    /// `n + 1`, the smallest admissible node count.
    pub sampling_floor: u64,
}

impl NodeBudget {
    /// `max(ceil(m_estimate), n + 1)`.
    pub fn recommendation(&self) -> u64 {
        let m = self.m_estimate.ceil();
        if m >= u64::MAX as f64 {
            u64::MAX
        } else {
            (m as u64).max(self.sampling_floor)
        }
    }
}

fn positive(x: f64, what: &'static str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(what))
    }
}

/// `log(1/eps) / log(R/r)` for a disk of analyticity of radius `R`.
pub fn nodes_finite_r(eps: Tolerance, r: f64, big_r: f64) -> Result<NodeBudget> {
    positive(r, "radius must be positive")?;
    positive(big_r, "R must be positive and finite")?;
    if r >= big_r {
        return Err(Error::RadiusOutsideDisk { r, big_r });
    }
    Ok(NodeBudget {
        m_estimate: eps.log_inv() / (big_r / r).ln(),
        regime: Regime::FiniteR,
        sampling_floor: 1,
    })
}

/// `rho L / W(L / (e tau r^rho))` with `L = log(1/eps)` for entire functions
/// of order `rho` and type `tau`.
pub fn nodes_entire(eps: Tolerance, r: f64, rho: f64, tau: f64) -> Result<NodeBudget> {
    positive(r, "radius must be positive")?;
    positive(rho, "order must be positive")?;
    positive(tau, "type must be positive")?;
    let l = eps.log_inv();
    let arg = l / (core::f64::consts::E * tau * r.powf(rho));
    let w = lambert_w0(arg)?;
    let m = if w == 0.0 { 0.0 } else { rho * l / w };
    Ok(NodeBudget {
        m_estimate: m,
        regime: Regime::EntireOrderType,
        sampling_floor: 1,
    })
}

/// `e n + rho log(1/eps)` at the quasi-optimal radius of a function of
/// perfectly regular growth.
pub fn nodes_prg_quasioptimal(eps: Tolerance, n: u64, rho: f64) -> Result<NodeBudget> {
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::Domain("order must be nonnegative"));
    }
    Ok(NodeBudget {
        m_estimate: core::f64::consts::E * n as f64 + rho * eps.log_inv(),
        regime: Regime::PrgQuasioptimal,
        sampling_floor: n + 1,
    })
}

/// Node counts at the Darboux radii, in units of `R`.
///
/// `beta = -1`: `(n/alpha) L` at radius `1 - alpha/n`, or `n log n L` at
/// `1 - 1/(n log n)`. `beta < -1`: `n L / (-beta - 1)`. `beta > -1`: the
/// finite-`R` estimate at `r = 1 - 1e-6`.
pub fn nodes_darboux(eps: Tolerance, n: u64, beta: f64, alpha: Option<f64>) -> Result<NodeBudget> {
    if n < 2 {
        return Err(Error::Domain("Darboux estimates need n >= 2"));
    }
    if !beta.is_finite() {
        return Err(Error::Domain("beta must be finite"));
    }
    let nf = n as f64;
    let l = eps.log_inv();
    let (m, regime) = if beta == -1.0 {
        match alpha {
            Some(a) => {
                positive(a, "alpha must be positive")?;
                (nf / a * l, Regime::DarbouxSuboptimal)
            }
            None => (nf * nf.ln() * l, Regime::DarbouxSuboptimal),
        }
    } else if beta < -1.0 {
        (nf / (-beta - 1.0) * l, Regime::DarbouxSuboptimal)
    } else {
        let b = nodes_finite_r(eps, 1.0 - 1e-6, 1.0)?;
        (b.m_estimate, Regime::FiniteR)
    };
    Ok(NodeBudget {
        m_estimate: m,
        regime,
        sampling_floor: n + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn tol(s: &str) -> Tolerance {
        s.parse().unwrap()
    }

    #[test]
    fn tolerance_parsing() {
        assert!((tol("1e-12").log_inv() - 12.0 * core::f64::consts::LN_10).abs() < 1e-12);
        assert!((tol("1e-1000").log_inv() - 1000.0 * core::f64::consts::LN_10).abs() < 1e-9);
        assert!((tol("2.5E-3").eps() - 2.5e-3).abs() < 1e-17);
        assert_eq!(tol("1").log_inv(), 0.0);
        assert!("0".parse::<Tolerance>().is_err());
        assert!("2".parse::<Tolerance>().is_err());
        assert!("abc".parse::<Tolerance>().is_err());
        assert!(Tolerance::from_eps(0.0).is_err());
    }

    #[test]
    fn finite_r_examples() {
        let b = nodes_finite_r(tol("1e-12"), 6.22, core::f64::consts::TAU).unwrap();
        assert!((b.m_estimate - 2733.80).abs() < 0.01, "{}", b.m_estimate);
        let big_r = 3.0;
        let b = nodes_finite_r(tol("1e-15"), big_r / core::f64::consts::E, big_r).unwrap();
        assert!((b.m_estimate - 15.0 * core::f64::consts::LN_10).abs() < 1e-12);
        let b = nodes_finite_r(tol("1"), 1.0, 2.0).unwrap();
        assert_eq!(b.m_estimate, 0.0);
        assert_eq!(b.recommendation(), 1);
        assert!(nodes_finite_r(tol("1e-3"), 2.0, 2.0).is_err());
    }

    #[test]
    fn entire_examples() {
        let cases = [("1e-12", 48.21, 0.05), ("1e-100", 140.30, 0.05), ("1e-1000", 706.73, 0.5)];
        for (eps, want, within) in cases {
            let b = nodes_entire(tol(eps), 10.0, 1.0, 1.0).unwrap();
            assert!((b.m_estimate - want).abs() < within, "{eps}: {}", b.m_estimate);
        }
    }

    #[test]
    fn prg_examples() {
        let b = nodes_prg_quasioptimal(tol("1e-15"), 100, 1.0).unwrap();
        assert!((b.m_estimate - 306.37).abs() < 0.1, "{}", b.m_estimate);
        let b = nodes_prg_quasioptimal(tol("1e-15"), 0, 2.0).unwrap();
        assert!((b.m_estimate - 2.0 * 15.0 * core::f64::consts::LN_10).abs() < 1e-12);
        let b = nodes_prg_quasioptimal(tol("1e-12"), 10, 1.0).unwrap();
        assert!((b.m_estimate - 54.81).abs() < 0.05);
        assert_eq!(b.recommendation(), 55);
    }

    #[test]
    fn darboux_examples() {
        let b = nodes_darboux(tol("1e-14"), 100, -1.0, Some(4.0)).unwrap();
        assert!((b.m_estimate - 806.0).abs() < 1.0, "{}", b.m_estimate);
        let b = nodes_darboux(tol("1e-15"), 100, -6.0, None).unwrap();
        assert!((b.m_estimate - 690.8).abs() < 0.1);
        let b = nodes_darboux(tol("1e-15"), 100, -1.0, None).unwrap();
        assert!((b.m_estimate / 15909.0 - 1.0).abs() < 1e-3, "{}", b.m_estimate);
        let b = nodes_darboux(tol("1e-15"), 100, 5.5, None).unwrap();
        assert_eq!(b.regime, Regime::FiniteR);
        assert!(b.m_estimate > 1e7);
        assert!(nodes_darboux(tol("1e-15"), 1, -2.0, None).is_err());
    }

    #[test]
    fn display_round_trip() {
        let t = tol("1e-1000");
        let back: Tolerance = t.to_string().parse().unwrap();
        assert!((back.log_inv() - t.log_inv()).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn estimates_grow_as_eps_shrinks(d1 in 0.5f64..300.0, dd in 0.1f64..50.0, r in 0.1f64..50.0, n in 2u64..500) {
            let a = Tolerance::from_digits(d1).unwrap();
            let b = Tolerance::from_digits(d1 + dd).unwrap();
            let pairs = [
                (nodes_finite_r(a, r, r * 1.7).unwrap(), nodes_finite_r(b, r, r * 1.7).unwrap()),
                (nodes_entire(a, r, 1.0, 1.0).unwrap(), nodes_entire(b, r, 1.0, 1.0).unwrap()),
                (nodes_prg_quasioptimal(a, n, 1.5).unwrap(), nodes_prg_quasioptimal(b, n, 1.5).unwrap()),
                (nodes_darboux(a, n, -3.0, None).unwrap(), nodes_darboux(b, n, -3.0, None).unwrap()),
            ];
            for (x, y) in pairs {
                prop_assert!(x.m_estimate > 0.0);
                prop_assert!(y.m_estimate > x.m_estimate);
                prop_assert!(x.recommendation() >= x.sampling_floor);
            }
        }

        #[test]
        fn entire_matches_prg_at_quasi_optimal_radius(n in 10u64..=200, digits in 6.0f64..=15.0) {
            let eps = Tolerance::from_digits(digits).unwrap();
            let a = nodes_entire(eps, n as f64, 1.0, 1.0).unwrap().m_estimate;
            let b = nodes_prg_quasioptimal(eps, n, 1.0).unwrap().m_estimate;
            let ratio = a / b;
            prop_assert!((1.0 / 1.5..=1.5).contains(&ratio), "{}", ratio);
        }

        #[test]
        fn recommendation_respects_sampling(n in 0u64..10_000, digits in 0.0f64..20.0) {
            let b = nodes_prg_quasioptimal(Tolerance::from_digits(digits).unwrap(), n, 0.0).unwrap();
            prop_assert!(b.recommendation() > n);
        }
    }
}
