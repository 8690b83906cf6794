//! Taylor coefficients and high-order derivatives of analytic functions from
//! trapezoidal sums of Cauchy integrals on circles.
//!
//! The radius of the circle is chosen to keep round-off amplification small,
//! and every result carries the condition number of the sum it came from.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod budget;
pub(crate) mod dd;
pub mod driver;
pub mod error;
pub mod expr;
pub mod quad;
pub mod radius;
pub mod saddle;
pub mod scaled;
pub mod sfun;

pub use error::{Error, Result};
pub use quad::{AnalyticFunction, SampleRing};
pub use scaled::ScaledComplex;
