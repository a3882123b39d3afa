//! Numerical laboratory for one-dimensional Hardy, Hardy–Rellich and Rellich
//! inequalities in integral form, on step functions over `(0, ∞)`.
//!
//! Integrals of running averages are computed from exact piecewise
//! polynomial antiderivatives; only the final weighted `p`-th power
//! integrals use Gauss–Legendre quadrature.

pub mod cli;
pub mod error;
pub mod grid;
pub mod inequalities;
pub mod operators;
pub mod random;
pub mod rearrange;
pub mod sharpness;

pub use error::{HardyError, Result};
pub use grid::{p_norm, Exponent, Grid, PiecewisePoly, StepFunction};
pub use inequalities::{sharp_constant, Evaluator, Kind, RatioReport};
pub use sharpness::{CutoffSpec, SweepResult};
