//! Command-line front end for `cauchy-deriv`: derivatives, condition scans,
//! radius selection, node budgets and table regeneration.

pub mod commands;
pub mod exec;
pub mod output;
pub mod tables;
pub mod target;

pub use commands::{run, Cli};
pub use exec::Threaded;
