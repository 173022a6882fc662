//! Discrete-time disturbance-observer toolkit.
//!
//! * [`dtf`]: rational functions of `z` and their roots.
//! * [`models`]: plant, Q-filter and the two observer loop architectures.
//! * [`analysis`]: Bode integral, peak gains, design constraints, root loci.
//! * [`sim`]: fixed-step simulation of position and force control.

pub mod dtf;
pub mod models;
pub mod analysis;
pub mod sim;
