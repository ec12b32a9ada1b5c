//! Nonclassicality of stabilized squeezed coherent states from a seeded
//! non-degenerate optical parametric oscillator below threshold.
//!
//! Rates are in units of the total cavity decay rate. The main entry points
//! are [`params::OperatingPoint`], the closed-form moments in [`som`], the
//! measures in [`measures`] and the independent checks in [`oracle`].

// `!(x < y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod exec;
pub mod gaussian;
pub mod measures;
pub mod oracle;
pub mod params;
pub mod som;

pub use error::{Error, Result};
pub use exec::Exec;
pub use params::{normalize, OperatingPoint, SystemConfig};
