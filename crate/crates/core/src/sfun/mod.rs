//! Special functions and the catalog of test functions.

pub mod catalog;
pub mod exact;
pub mod gamma;
pub mod lambert;
pub mod series;

pub use catalog::{catalog, lookup, CatalogEntry, Metadata};
pub use gamma::{digamma, factorial_scaled, ln_factorial, log_gamma_complex};
pub use lambert::{lambert_w0, lambert_w0_complex};
