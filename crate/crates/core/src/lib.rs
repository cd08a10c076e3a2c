//! Labeled graph classes built from prime decorations.

pub mod asymptotics;
pub mod classes;
pub mod decomposition;
pub mod egf;
pub mod error;
pub mod graph;
pub mod occurrence;
pub mod pattern;
pub mod random;
pub mod sampler;
pub mod series;
pub mod tree;

pub use error::{Error, Result};

use num_rational::BigRational;

/// Power series with exact rational coefficients.
pub type ExactSeries = series::PowerSeries<BigRational>;
/// Power series with double precision coefficients.
pub type FloatSeries = series::PowerSeries<f64>;
