//! Trapezoidal sums of Cauchy integrals on circles.
//!
//! Samples are stored as [`ScaledComplex`] values. Every sum over a ring is
//! taken on mantissas aligned to the ring's largest exponent, in index order,
//! with compensated accumulation, so results do not depend on how the samples
//! were produced.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::scaled::{CompensatedComplexSum, CompensatedSum, ScaledComplex};

pub type ComplexMap = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Algebraic singularity `(1 - z/z0)^beta` on the circle of convergence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Darboux {
    pub beta: f64,
    pub singularity: Complex64,
}

/// An analytic function together with growth metadata.
#[derive(Clone)]
pub struct AnalyticFunction {
    evaluate: ComplexMap,
    log_evaluate: Option<ComplexMap>,
    derivative: Option<ComplexMap>,
    log_derivative: Option<ComplexMap>,
    radius_of_convergence: f64,
    order: Option<f64>,
    type_: Option<f64>,
    nonnegative_coefficients: bool,
    saddle_rays: Vec<f64>,
    saddle_seed: Option<fn(u64) -> Complex64>,
    darboux: Option<Darboux>,
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("log_evaluate", &self.log_evaluate.is_some())
            .field("derivative", &self.derivative.is_some())
            .field("log_derivative", &self.log_derivative.is_some())
            .field("radius_of_convergence", &self.radius_of_convergence)
            .field("order", &self.order)
            .field("type_", &self.type_)
            .field("nonnegative_coefficients", &self.nonnegative_coefficients)
            .field("saddle_rays", &self.saddle_rays)
            .field("darboux", &self.darboux)
            .finish()
    }
}

impl AnalyticFunction {
    /// An entire function with no metadata.
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            evaluate: Arc::new(f),
            log_evaluate: None,
            derivative: None,
            log_derivative: None,
            radius_of_convergence: f64::INFINITY,
            order: None,
            type_: None,
            nonnegative_coefficients: false,
            saddle_rays: Vec::new(),
            saddle_seed: None,
            darboux: None,
        }
    }

    /// A function known only through a continuous branch of its logarithm.
    pub fn from_log<G>(g: G) -> Self
    where
        G: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        let g: ComplexMap = Arc::new(g);
        let g2 = g.clone();
        let mut f = Self::new(move |z| g2(z).exp());
        f.log_evaluate = Some(g);
        f
    }

    pub fn with_log<G>(mut self, g: G) -> Self
    where
        G: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.log_evaluate = Some(Arc::new(g));
        self
    }

    pub fn with_derivative<G>(mut self, g: G) -> Self
    where
        G: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(g));
        self
    }

    /// Supplies `f'/f` directly.
    pub fn with_log_derivative<G>(mut self, g: G) -> Self
    where
        G: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.log_derivative = Some(Arc::new(g));
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius_of_convergence = r;
        self
    }

    pub fn with_order(mut self, rho: f64) -> Self {
        self.order = Some(rho);
        self
    }

    pub fn with_growth(mut self, rho: f64, tau: f64) -> Self {
        self.order = Some(rho);
        self.type_ = Some(tau);
        self
    }

    pub fn with_nonnegative_coefficients(mut self) -> Self {
        self.nonnegative_coefficients = true;
        self
    }

    pub fn with_saddle_rays(mut self, rays: Vec<f64>) -> Self {
        self.saddle_rays = rays;
        self
    }

    /// Initial saddle guess as a function of `n`.
    pub fn with_saddle_seed(mut self, seed: fn(u64) -> Complex64) -> Self {
        self.saddle_seed = Some(seed);
        self
    }

    pub fn with_darboux(mut self, beta: f64, singularity: Complex64) -> Self {
        self.darboux = Some(Darboux { beta, singularity });
        self
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        (self.evaluate)(z)
    }

    pub fn has_log(&self) -> bool {
        self.log_evaluate.is_some()
    }

    /// `log f(z)`: the supplied branch, else the principal log of `f(z)`.
    pub fn log_evaluate(&self, z: Complex64) -> Complex64 {
        match &self.log_evaluate {
            Some(g) => g(z),
            None => self.evaluate(z).ln(),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Option<Complex64> {
        self.derivative.as_ref().map(|d| d(z))
    }

    pub fn radius_of_convergence(&self) -> f64 {
        self.radius_of_convergence
    }

    pub fn is_entire(&self) -> bool {
        self.radius_of_convergence.is_infinite()
    }

    pub fn order(&self) -> Option<f64> {
        self.order
    }

    pub fn type_(&self) -> Option<f64> {
        self.type_
    }

    pub fn nonnegative_coefficients(&self) -> bool {
        self.nonnegative_coefficients
    }

    pub fn saddle_rays(&self) -> &[f64] {
        &self.saddle_rays
    }

    pub fn saddle_seed(&self) -> Option<fn(u64) -> Complex64> {
        self.saddle_seed
    }

    pub fn darboux(&self) -> Option<Darboux> {
        self.darboux
    }

    /// `f(z)` as a scaled value, via the log path when available.
    pub fn evaluate_scaled(&self, z: Complex64) -> Option<ScaledComplex> {
        match &self.log_evaluate {
            Some(g) => {
                let l = g(z);
                if l.re == f64::NEG_INFINITY {
                    Some(ScaledComplex::ZERO)
                } else if l.is_finite() {
                    Some(ScaledComplex::from_log(l))
                } else {
                    None
                }
            }
            None => {
                let v = self.evaluate(z);
                if v.is_finite() {
                    Some(ScaledComplex::from_complex(v))
                } else {
                    None
                }
            }
        }
    }

    /// `L'(z) = f'(z)/f(z)`.
    ///
    /// Uses the supplied log-derivative, else `f'/f`, else central differences
    /// of `log f` with one Richardson step.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        if let Some(g) = &self.log_derivative {
            return g(z);
        }
        if let Some(d) = &self.derivative {
            if self.log_evaluate.is_none() {
                return d(z) / self.evaluate(z);
            }
        }
        let h = fd_step(z);
        let d1 = self.log_difference(z, h);
        let d2 = self.log_difference(z, h * 0.5);
        (d2 * 4.0 - d1) / 3.0
    }

    fn log_difference(&self, z: Complex64, h: f64) -> Complex64 {
        let hp = Complex64::new(h, 0.0);
        let mut d = self.log_evaluate(z + hp) - self.log_evaluate(z - hp);
        d.im -= TAU * (d.im / TAU).round();
        d / (2.0 * h)
    }
}

/// Finite-difference step `max(1e-6, 1e-6 |z|)`.
pub fn fd_step(z: Complex64) -> f64 {
    1e-6f64.max(1e-6 * z.norm())
}

/// `e^{2 pi i k/m}` with exact values at multiples of a quarter turn.
pub fn unit_root(k: u64, m: u64) -> Complex64 {
    let k = k % m;
    let four_k = 4 * k as u128;
    let q = (four_k / m as u128) as u64;
    let rem = (four_k % m as u128) as u64;
    let (c, s) = if 2 * rem <= m {
        let t = FRAC_PI_2 * (rem as f64 / m as f64);
        (t.cos(), t.sin())
    } else {
        let t = FRAC_PI_2 * ((m - rem) as f64 / m as f64);
        (t.sin(), t.cos())
    };
    match q {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

/// Strategy for evaluating the nodes of a ring. Results are consumed in
/// index order, so parallel implementations stay deterministic.
pub trait Executor: Sync {
    fn run(
        &self,
        count: usize,
        task: &(dyn Fn(usize) -> Option<ScaledComplex> + Sync),
    ) -> Vec<Option<ScaledComplex>>;
}

/// Evaluates nodes one after another.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run(
        &self,
        count: usize,
        task: &(dyn Fn(usize) -> Option<ScaledComplex> + Sync),
    ) -> Vec<Option<ScaledComplex>> {
        (0..count).map(task).collect()
    }
}

/// Samples of `f` at `m` equispaced points of a circle.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRing {
    radius: f64,
    samples: Vec<ScaledComplex>,
    common_scale: f64,
    aligned: Vec<Complex64>,
}

impl SampleRing {
    /// Builds a ring from precomputed samples at `r e^{2 pi i j/m}`.
    pub fn from_samples(radius: f64, samples: Vec<ScaledComplex>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain("ring needs at least one sample"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain("radius must be positive"));
        }
        let common_scale = samples
            .iter()
            .filter(|s| !s.is_zero())
            .map(|s| s.exponent())
            .fold(f64::NEG_INFINITY, f64::max);
        let common_scale = if common_scale.is_finite() {
            common_scale
        } else {
            0.0
        };
        let aligned = samples
            .iter()
            .map(|s| {
                if s.is_zero() {
                    Complex64::new(0.0, 0.0)
                } else {
                    s.mantissa() * (s.exponent() - common_scale).exp()
                }
            })
            .collect();
        Ok(Self {
            radius,
            samples,
            common_scale,
            aligned,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[ScaledComplex] {
        &self.samples
    }

    /// Largest sample exponent; aligned mantissas are relative to `e^common_scale`.
    pub fn common_scale(&self) -> f64 {
        self.common_scale
    }

    /// Samples divided by `e^common_scale`.
    pub fn aligned(&self) -> &[Complex64] {
        &self.aligned
    }

    /// The ring with `2m` nodes; existing samples become the even nodes.
    pub fn refine(&self, f: &AnalyticFunction, exec: &dyn Executor) -> Result<Self> {
        let m = self.count() as u64;
        let m2 = 2 * m;
        let r = self.radius;
        let task = |i: usize| {
            let j = 2 * i as u64 + 1;
            f.evaluate_scaled(unit_root(j, m2) * r)
        };
        let fresh = exec.run(m as usize, &task);
        let mut samples = Vec::with_capacity(m2 as usize);
        for (i, (old, new)) in self.samples.iter().zip(fresh).enumerate() {
            samples.push(*old);
            let j = 2 * i + 1;
            samples.push(new.ok_or_else(|| node_error(j, m2 as usize))?);
        }
        Self::from_samples(r, samples)
    }

    /// Compensated sum of `e^{-2 pi i j n/m} * aligned[j]`.
    pub fn twiddled_sum(&self, n: u64) -> Complex64 {
        let m = self.count() as u64;
        let step = n % m;
        let mut acc = CompensatedComplexSum::new();
        for (j, s) in self.aligned.iter().enumerate() {
            let k = ((j as u128 * step as u128) % m as u128) as u64;
            acc.add(unit_root(k, m).conj() * s);
        }
        acc.value()
    }

    /// Compensated sum of `|aligned[j]|`.
    pub fn modulus_sum(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for s in &self.aligned {
            acc.add(s.norm());
        }
        acc.value()
    }
}

fn node_error(j: usize, m: usize) -> Error {
    Error::Evaluation {
        index: j,
        angle: TAU * j as f64 / m as f64,
    }
}

/// Samples `f` on the circle of radius `r` at `m` nodes.
///
/// Points on the boundary circle `r = R` are accepted; the evaluator must
/// then be finite at every node.
pub fn sample_ring(f: &AnalyticFunction, r: f64, m: usize) -> Result<SampleRing> {
    sample_ring_with(f, r, m, &Sequential)
}

pub fn sample_ring_with(
    f: &AnalyticFunction,
    r: f64,
    m: usize,
    exec: &dyn Executor,
) -> Result<SampleRing> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain("radius must be positive"));
    }
    if m == 0 {
        return Err(Error::Domain("node count must be positive"));
    }
    let big_r = f.radius_of_convergence();
    if r > big_r {
        return Err(Error::RadiusOutsideDisk { r, big_r });
    }
    let task = |j: usize| f.evaluate_scaled(unit_root(j as u64, m as u64) * r);
    let values = exec.run(m, &task);
    let mut samples = Vec::with_capacity(m);
    for (j, v) in values.into_iter().enumerate() {
        samples.push(v.ok_or_else(|| node_error(j, m))?);
    }
    SampleRing::from_samples(r, samples)
}

/// `r^{-n}` as a scaled real.
pub fn radius_power(r: f64, n: u64) -> ScaledComplex {
    crate::dd::radius_power(r, n)
}

/// The trapezoidal approximation `a_n(r, m)`.
pub fn trapezoidal_coefficient(ring: &SampleRing, n: u64) -> ScaledComplex {
    let s = ring.twiddled_sum(n) / ring.count() as f64;
    ScaledComplex::new(s, ring.common_scale()) * radius_power(ring.radius(), n)
}

/// `kappa_m(n, r)`: sum of moduli over modulus of the sum; `+inf` on total cancelation.
pub fn discrete_condition_number(ring: &SampleRing, n: u64) -> f64 {
    kappa_from_sums(ring.modulus_sum(), ring.twiddled_sum(n))
}

pub(crate) fn kappa_from_sums(modulus_sum: f64, twiddled: Complex64) -> f64 {
    let d = twiddled.norm();
    if d == 0.0 {
        f64::INFINITY
    } else {
        modulus_sum / d
    }
}

/// Trapezoidal approximation of the circle mean `M_1(r)`.
pub fn mean_modulus(ring: &SampleRing) -> ScaledComplex {
    let s = ring.modulus_sum() / ring.count() as f64;
    ScaledComplex::new(Complex64::new(s, 0.0), ring.common_scale())
}

/// How a quadrature run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxNodesReached,
    DegenerateDenominator,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxNodesReached => "max_nodes_reached",
            Status::DegenerateDenominator => "degenerate_denominator",
        }
    }
}

/// Result of an adaptive trapezoidal computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOutcome {
    /// `a_n(r, m)` or `n! a_n(r, m)`.
    pub value: ScaledComplex,
    pub m_used: usize,
    pub kappa_m: f64,
    /// `None` when no finite estimate was available.
    pub rel_error_estimate: Option<f64>,
    pub status: Status,
    pub radius: f64,
}

/// `kappa(n, r) = M_1(r) / (|a_n| r^n)` with `M_1` from an `m`-node ring.
pub fn reference_condition_number(
    f: &AnalyticFunction,
    exact_an: ScaledComplex,
    n: u64,
    r: f64,
    m: usize,
) -> Result<f64> {
    if exact_an.is_zero() {
        return Err(Error::ConditionUndefined);
    }
    let ring = sample_ring(f, r, m)?;
    Ok(kappa_from_mean(mean_modulus(&ring), exact_an, n, r))
}

/// As [`reference_condition_number`], doubling `m` from `max(n+1, 64)` until
/// `M_1` settles to `1e-12` relative on two successive doublings (at most
/// `2^22` nodes).
///
/// One agreement is not enough: for odd `m` and even `|f|` the doubled ring
/// is the old one rotated by `pi` and repeats its mean exactly.
pub fn reference_condition_number_adaptive(
    f: &AnalyticFunction,
    exact_an: ScaledComplex,
    n: u64,
    r: f64,
) -> Result<f64> {
    if exact_an.is_zero() {
        return Err(Error::ConditionUndefined);
    }
    let m0 = ((n + 1) as usize).max(64);
    let mut ring = sample_ring(f, r, m0)?;
    let mut mean = mean_modulus(&ring);
    let mut settled = 0;
    while ring.count() < (1 << 22) {
        ring = ring.refine(f, &Sequential)?;
        let next = mean_modulus(&ring);
        let change = (next - mean).abs_ratio(&next);
        mean = next;
        settled = if change <= 1e-12 { settled + 1 } else { 0 };
        if settled == 2 {
            break;
        }
    }
    Ok(kappa_from_mean(mean, exact_an, n, r))
}

fn kappa_from_mean(mean: ScaledComplex, exact_an: ScaledComplex, n: u64, r: f64) -> f64 {
    let denom = exact_an.abs() * radius_power(r, n).recip();
    mean.abs_ratio(&denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exp_fn() -> AnalyticFunction {
        AnalyticFunction::new(|z: Complex64| z.exp()).with_log(|z| z)
    }

    fn poly(k: i32) -> AnalyticFunction {
        AnalyticFunction::new(move |z: Complex64| z.powi(k))
    }

    fn factorial(n: u64) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_roots_exact_at_quarters() {
        assert_eq!(unit_root(1, 4), c(0.0, 1.0));
        assert_eq!(unit_root(2, 4), c(-1.0, 0.0));
        assert_eq!(unit_root(3, 4), c(0.0, -1.0));
        assert_eq!(unit_root(8, 8), c(1.0, 0.0));
        for k in 0..97u64 {
            let t = TAU * k as f64 / 97.0;
            assert!((unit_root(k, 97) - c(t.cos(), t.sin())).norm() < 1e-15);
        }
    }

    #[test]
    fn ring_samples() {
        let one = AnalyticFunction::new(|_| c(1.0, 0.0));
        let ring = sample_ring(&one, 1.0, 4).unwrap();
        assert!(ring.samples().iter().all(|s| s.to_complex() == c(1.0, 0.0)));

        let id = AnalyticFunction::new(|z| z);
        let ring = sample_ring(&id, 2.0, 4).unwrap();
        let want = [c(2.0, 0.0), c(0.0, 2.0), c(-2.0, 0.0), c(0.0, -2.0)];
        for (s, w) in ring.samples().iter().zip(want) {
            assert!((s.to_complex() - w).norm() < 1e-15);
        }

        let ring = sample_ring(&exp_fn(), 1.0, 2).unwrap();
        let e = core::f64::consts::E;
        assert!((ring.samples()[0].to_complex() - c(e, 0.0)).norm() < 1e-15);
        assert!((ring.samples()[1].to_complex() - c(1.0 / e, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluation_failure_reports_node() {
        let f = AnalyticFunction::new(|z: Complex64| c(1.0, 0.0) / (z - c(-1.0, 0.0)));
        match sample_ring(&f, 1.0, 4) {
            Err(Error::Evaluation { index, angle }) => {
                assert_eq!(index, 2);
                assert!((angle - core::f64::consts::PI).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        let g = AnalyticFunction::new(|z| z).with_radius(1.0);
        assert!(matches!(
            sample_ring(&g, 1.5, 4),
            Err(Error::RadiusOutsideDisk { .. })
        ));
    }

    #[test]
    fn coefficient_examples() {
        let ring = sample_ring(&poly(2), 3.7, 8).unwrap();
        let a2 = trapezoidal_coefficient(&ring, 2).to_complex();
        assert!((a2 - c(1.0, 0.0)).norm() < 1e-14);

        let ring = sample_ring(&exp_fn(), 10.0, 32).unwrap();
        let a10 = trapezoidal_coefficient(&ring, 10).to_f64();
        let exact = 1.0 / factorial(10);
        assert!((a10 - exact).abs() / exact <= 1e-12);

        let ring = sample_ring(&exp_fn(), 1.0, 6).unwrap();
        let a1 = trapezoidal_coefficient(&ring, 1).to_complex();
        let a7 = trapezoidal_coefficient(&ring, 7).to_complex();
        assert!((a1 - a7).norm() <= 1e-12 * a1.norm());
    }

    #[test]
    fn condition_number_examples() {
        let two = AnalyticFunction::new(|_| c(2.0, 0.0));
        let ring = sample_ring(&two, 1.0, 16).unwrap();
        assert_eq!(discrete_condition_number(&ring, 0), 1.0);

        let ring = sample_ring(&exp_fn(), 100.0, 256).unwrap();
        let k = discrete_condition_number(&ring, 100);
        assert!((k - 1.002).abs() < 1e-3, "{k}");

        // At kappa ~ 1e13 the sum resolves node rounding, so the samples
        // of exp come from double-double nodes.
        let ring = exp_ring_dd(200.0, 512);
        let k = discrete_condition_number(&ring, 100);
        assert!((k / 1.502e13 - 1.0).abs() < 0.01, "{k}");
    }

    fn exp_ring_dd(r: f64, m: usize) -> SampleRing {
        use crate::dd::PI;
        let samples = (0..m)
            .map(|j| {
                let theta = PI * (2.0 * j as f64) / (m as f64);
                let (s, co) = theta.sin_cos();
                let (ys, yc) = (s * r).sin_cos();
                let e = (co * r).exp();
                ScaledComplex::from_complex(c((e * yc).to_f64(), (e * ys).to_f64()))
            })
            .collect();
        SampleRing::from_samples(r, samples).unwrap()
    }

    // I_0(r) = sum (r/2)^{2k} / (k!)^2.
    fn bessel_i0(r: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            term *= (r / 2.0) * (r / 2.0) / (k as f64 * k as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn mean_modulus_examples() {
        let ring = sample_ring(&AnalyticFunction::new(|_| c(0.0, -3.0)), 5.0, 7).unwrap();
        assert!((mean_modulus(&ring).to_f64() - 3.0).abs() < 1e-15);

        let ring = sample_ring(&exp_fn(), 1e-8, 8).unwrap();
        assert!((mean_modulus(&ring).to_f64() - 1.0).abs() < 1e-7);

        let ring = sample_ring(&exp_fn(), 1.0, 64).unwrap();
        assert!((mean_modulus(&ring).to_f64() - bessel_i0(1.0)).abs() < 1e-12);
    }

    #[test]
    fn reference_condition_examples() {
        let a100 = ScaledComplex::from_log(c(-crate::sfun::ln_factorial(100), 0.0));
        let k = reference_condition_number(&exp_fn(), a100, 100, 1.0, 64).unwrap();
        assert!((k / 1.182e158 - 1.0).abs() < 1e-3, "{k}");

        let k = reference_condition_number(&exp_fn(), ScaledComplex::ONE, 0, 1.0, 64).unwrap();
        assert!((k - bessel_i0(1.0)).abs() < 1e-12);

        let k = reference_condition_number(&poly(5), ScaledComplex::ONE, 5, 2.5, 16).unwrap();
        assert!((k - 1.0).abs() < 1e-15);

        assert_eq!(
            reference_condition_number(&exp_fn(), ScaledComplex::ZERO, 3, 1.0, 8),
            Err(Error::ConditionUndefined)
        );
    }

    #[test]
    fn adaptive_reference_survives_symmetric_alias() {
        // m0 = 101 is odd and |sec^6| is even.
        let e = crate::sfun::lookup("sec6").unwrap();
        let a = e.coefficient(100).unwrap();
        let r = core::f64::consts::FRAC_PI_2 * 0.95;
        let k = reference_condition_number_adaptive(e.function(), a, 100, r).unwrap();
        let fixed = reference_condition_number(e.function(), a, 100, r, 1616).unwrap();
        assert!((k - fixed).abs() <= 1e-12 * fixed, "{k} vs {fixed}");
        assert!((k - 1.0767).abs() < 1e-4);
    }

    #[test]
    fn refine_reuses_even_nodes() {
        let f = exp_fn();
        let ring = sample_ring(&f, 3.0, 12).unwrap();
        let fine = ring.refine(&f, &Sequential).unwrap();
        for (j, s) in ring.samples().iter().enumerate() {
            assert_eq!(fine.samples()[2 * j], *s);
        }
        let direct = sample_ring(&f, 3.0, 24).unwrap();
        assert_eq!(direct.samples(), fine.samples());
    }

    fn arb_ring() -> impl Strategy<Value = (Vec<(f64, f64, f64)>, f64)> {
        (
            prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -30.0..30.0f64), 1..64),
            0.1..10.0f64,
        )
    }

    fn build(parts: &[(f64, f64, f64)], r: f64) -> SampleRing {
        let samples = parts
            .iter()
            .map(|&(a, b, e)| ScaledComplex::new(c(a, b), e.round()))
            .collect();
        SampleRing::from_samples(r, samples).unwrap()
    }

    proptest! {
        #[test]
        fn kappa_at_least_one((parts, r) in arb_ring(), n in 0u64..200) {
            let ring = build(&parts, r);
            prop_assert!(discrete_condition_number(&ring, n) >= 1.0 - 1e-12);
        }

        #[test]
        fn aliasing((parts, r) in arb_ring(), n in 0u64..100) {
            let ring = build(&parts, r);
            let m = ring.count() as u64;
            let a = trapezoidal_coefficient(&ring, n) / radius_power(r, n);
            let b = trapezoidal_coefficient(&ring, n + m) / radius_power(r, n + m);
            let scale = mean_modulus(&ring);
            prop_assert!((a - b).abs_ratio(&scale) <= 1e-12 || (a - b).abs_ratio(&a) <= 1e-12);
        }

        #[test]
        fn polynomial_exactness(k in 0i32..40, extra in 1usize..40, r in 0.2..5.0f64) {
            let m = k as usize + extra;
            let ring = sample_ring(&poly(k), r, m).unwrap();
            for n in 0..m as u64 {
                let a = trapezoidal_coefficient(&ring, n).to_complex();
                if n == k as u64 {
                    prop_assert!((a - c(1.0, 0.0)).norm() <= 1e-14);
                } else {
                    prop_assert!(a.norm() * r.powi(n as i32 - k) <= 1e-14);
                }
            }
        }

        #[test]
        fn absolute_error_stability(
            (parts, r) in arb_ring(),
            n in 0u64..100,
            noise in prop::collection::vec((0.0..1.0f64, 0.0..6.3f64), 64),
            eps in 1e-6..1e-2f64,
        ) {
            let base: Vec<Complex64> = parts.iter().map(|&(a, b, _)| c(a, b)).collect();
            let plain = SampleRing::from_samples(
                r, base.iter().map(|&z| ScaledComplex::from(z)).collect()).unwrap();
            let perturbed = SampleRing::from_samples(
                r,
                base.iter().zip(&noise)
                    .map(|(&z, &(a, t))| ScaledComplex::from(z + Complex64::from_polar(eps * a, t)))
                    .collect(),
            ).unwrap();
            let x = trapezoidal_coefficient(&plain, n) / radius_power(r, n);
            let y = trapezoidal_coefficient(&perturbed, n) / radius_power(r, n);
            let d = (x - y).abs().to_f64();
            prop_assert!(d <= eps * (1.0 + 1e-12) + 4.0 * f64::EPSILON, "{} > {}", d, eps);
        }

        #[test]
        fn scale_invariance((parts, r) in arb_ring(), n in 0u64..100, shift in -500i32..500) {
            let ring = build(&parts, r);
            let shifted = SampleRing::from_samples(
                r, ring.samples().iter().map(|s| s.shift(shift as f64)).collect()).unwrap();
            prop_assert_eq!(
                discrete_condition_number(&ring, n).to_bits(),
                discrete_condition_number(&shifted, n).to_bits()
            );
        }
    }
}
