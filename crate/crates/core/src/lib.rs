pub mod ambient;
pub mod check;
pub mod config;
pub mod delta;
pub mod error;
pub mod integral;
pub mod invariants;
pub mod oracle;
pub mod property;
pub mod quadrature;
pub mod registry;
pub mod runner;
pub mod surface;
pub mod symmetric;

pub use error::{Error, Result};
