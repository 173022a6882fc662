//! Rational functions of the complex variable `z`.
//!
//! Coefficients are always ordered highest power first. Nothing in this
//! module cancels common factors: a loop's hidden integrator must remain
//! visible to the stability checks downstream.

mod poly;
mod rational;

use num_complex::Complex64;
use thiserror::Error;

pub use poly::{PolyZ, ROOT_RESIDUAL};
pub use rational::{
    wrap_angle, RationalZ, Stability, NEAR_CANCELLATION, POLE_ON_GRID, STABILITY_BAND,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DtfError {
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("cannot take roots of the zero polynomial")]
    ZeroPolynomial,
    #[error("pole on the evaluation grid at theta = {theta}")]
    PoleOnGrid { theta: f64 },
    #[error("root {root} has residual {residual:e} above tolerance {tolerance:e}")]
    RootResidual {
        root: Complex64,
        residual: f64,
        tolerance: f64,
    },
}
