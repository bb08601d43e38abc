//! Numerical tools for coefficient bounds of zero-free bounded analytic
//! functions on the unit disk.
//!
//! The central object is a truncated power series `f` with `0 < |f| < 1`
//! on the disk. Such functions factor through the universal cover
//! `κ₀(z) = exp((z - 1)/(z + 1))` of the punctured disk, and the
//! extremal candidates for `|c_n|` are `κ₀(e^{iθ} z^n)` with
//! `|c_n| = 2/e`.

// Negated float comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diskgeom;
pub mod error;
pub mod herglotz;
pub mod nonvan;
pub mod optimize;
pub mod sampling;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use herglotz::HerglotzMeasure;
pub use nonvan::NonvanishingFunction;
pub use series::PowerSeries;

pub use num_complex::Complex64;

/// `1/e`.
pub const INV_E: f64 = 0.367_879_441_171_442_33;
/// `2/e`, the conjectured sharp bound on `|c_n|` for `n >= 1`.
pub const TWO_OVER_E: f64 = 0.735_758_882_342_884_6;
