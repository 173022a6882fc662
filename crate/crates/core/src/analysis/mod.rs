//! Robustness analysis of the observer loops.

mod bode;
mod constraints;
mod locus;
mod peak;

use num_complex::Complex64;
use thiserror::Error;

use crate::dtf::DtfError;
use crate::models::ModelError;

pub use bode::{bode_integral, bode_integral_with, BodeReport, MIN_INTERVALS};
pub use constraints::{
    classify_k, constraint_max_k, max_bandwidth, BandwidthLimits, ConstraintSpec, KClass,
};
pub use locus::{root_locus, root_locus_with, sort_roots, spectral_radius, LocusPoint};
pub use peak::{peak_gain, PeakGain, PEAK_GRID};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("sensitivity has a pole on or outside the unit circle")]
    UnstableSensitivity,
    #[error("pole {pole} lies on the unit circle")]
    PoleOnCircle { pole: Complex64 },
    #[error("invalid parameter {name} = {value}")]
    InvalidParam { name: &'static str, value: f64 },
    #[error("open loop is improper; its value at infinity is unbounded")]
    ImproperLoop,
    #[error(transparent)]
    Dtf(#[from] DtfError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
