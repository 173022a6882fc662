//! Disturbance-observer loops as rational functions of `z`.
//!
//! Conventions shared with the simulator:
//!
//! * velocity integrates the held current exactly: `q̇ = T_s/(z-1) · (K_τ I - τ_d)/J_m`;
//! * the Q-filter is the backward-Euler low pass `g T_s z / ((1 + g T_s) z - 1)`;
//! * a velocity-measuring observer differentiates with `(z-1)/(T_s z)`;
//! * an acceleration-measuring observer sees the acceleration produced by
//!   the current it is about to apply (no transport delay).
//!
//! `docs/loop-algebra.md` has the block-diagram reductions behind every
//! closed form in this file.

use std::fmt;

use thiserror::Error;

use crate::dtf::{DtfError, PolyZ, RationalZ};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter {name} = {value}")]
    InvalidParam { name: &'static str, value: f64 },
    #[error(transparent)]
    Dtf(#[from] DtfError),
}

fn positive(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ModelError::InvalidParam { name, value })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ModelError::InvalidParam { name, value })
    }
}

/// Rigid-body servo: true and nominal inertia / thrust coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlantParams {
    /// Inertia, kg·m².
    pub j_m: f64,
    /// Thrust coefficient, N·m/A.
    pub k_tau: f64,
    /// Nominal inertia used by the controller, kg·m².
    pub j_mn: f64,
    /// Nominal thrust coefficient used by the controller, N·m/A.
    pub k_taun: f64,
    /// Sampling time, s.
    pub t_s: f64,
}

impl PlantParams {
    pub fn new(j_m: f64, k_tau: f64, j_mn: f64, k_taun: f64, t_s: f64) -> Result<Self, ModelError> {
        let p = Self {
            j_m,
            k_tau,
            j_mn,
            k_taun,
            t_s,
        };
        p.validate()?;
        Ok(p)
    }

    /// Exact nominal model (`α = 1`).
    pub fn nominal(j_m: f64, k_tau: f64, t_s: f64) -> Result<Self, ModelError> {
        Self::new(j_m, k_tau, j_m, k_tau, t_s)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        positive("J_m", self.j_m)?;
        positive("K_tau", self.k_tau)?;
        positive("J_mn", self.j_mn)?;
        positive("K_taun", self.k_taun)?;
        positive("T_s", self.t_s)?;
        Ok(())
    }

    /// Model-mismatch ratio `α = (J_mn K_τ) / (J_m K_τn)`.
    pub fn alpha(&self) -> f64 {
        (self.j_mn * self.k_tau) / (self.j_m * self.k_taun)
    }

    /// Same plant with `J_mn` rescaled so that `alpha()` equals `alpha`.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self, ModelError> {
        positive("alpha", alpha)?;
        let mut p = *self;
        p.j_mn = alpha * self.j_m * self.k_taun / self.k_tau;
        Ok(p)
    }

    /// Dimensionless loop gain `α g T_s`.
    pub fn loop_gain(&self, g: f64) -> f64 {
        self.alpha() * g * self.t_s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObserverKind {
    /// Velocity measured, acceleration reconstructed by backward difference.
    Velocity,
    /// Acceleration measured directly.
    Acceleration,
}

impl fmt::Display for ObserverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObserverKind::Velocity => write!(f, "velocity"),
            ObserverKind::Acceleration => write!(f, "acceleration"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObserverConfig {
    pub kind: ObserverKind,
    /// Inner observer bandwidth, rad/s.
    pub g_dob: f64,
    /// Outer (reaction force) observer bandwidth, rad/s. Force control only.
    pub g_rtob: Option<f64>,
}

impl ObserverConfig {
    pub fn new(kind: ObserverKind, g_dob: f64) -> Self {
        Self {
            kind,
            g_dob,
            g_rtob: None,
        }
    }

    pub fn with_rtob(mut self, g_rtob: f64) -> Self {
        self.g_rtob = Some(g_rtob);
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        positive("g_dob", self.g_dob)?;
        if let Some(g) = self.g_rtob {
            positive("g_rtob", g)?;
        }
        Ok(())
    }
}

/// The transfer-function bundle of one observer loop.
#[derive(Clone, Debug)]
pub struct LoopSet {
    pub kind: ObserverKind,
    /// Open loop.
    pub l: RationalZ,
    /// Sensitivity, `1/(1+L)`.
    pub s: RationalZ,
    /// Complementary sensitivity, `L/(1+L)`.
    pub t: RationalZ,
    /// Observer measurement noise to plant acceleration (per-sample
    /// acceleration `(z-1)/T_s · q̇`). Input units are rad/s for the
    /// velocity kind and rad/s² for the acceleration kind.
    pub n: RationalZ,
    /// `α g T_s`.
    pub k: f64,
}

/// Backward-Euler Q-filter `g T_s z / ((1 + g T_s) z - 1)`.
pub fn build_qfilter(g: f64, t_s: f64) -> Result<RationalZ, ModelError> {
    positive("g", g)?;
    positive("T_s", t_s)?;
    let gt = g * t_s;
    Ok(RationalZ::from_coeffs(&[gt, 0.0], &[1.0 + gt, -1.0])?)
}

/// Velocity-measurement loop: `L = k/(z-1)`, `S = (z-1)/(z-(1-k))`,
/// `T = k/(z-(1-k))`, `N = -((z-1)/T_s)·T`.
pub fn build_velocity_loop(p: &PlantParams, g: f64) -> Result<LoopSet, ModelError> {
    p.validate()?;
    positive("g", g)?;
    let k = p.loop_gain(g);
    let l = RationalZ::from_coeffs(&[k], &[1.0, -1.0])?;
    let (s, t) = l.feedback()?;
    let diff = RationalZ::from_coeffs(&[1.0 / p.t_s, -1.0 / p.t_s], &[1.0])?;
    let n = diff.mul(&t).scale(-1.0);
    Ok(LoopSet {
        kind: ObserverKind::Velocity,
        l,
        s,
        t,
        n,
        k,
    })
}

/// Acceleration-measurement loop: `L = k z/(z-1)`, `S = (z-1)/((1+k) z - 1)`,
/// `T = k z/((1+k) z - 1)`, `N = -T`.
pub fn build_acceleration_loop(p: &PlantParams, g: f64) -> Result<LoopSet, ModelError> {
    p.validate()?;
    positive("g", g)?;
    let k = p.loop_gain(g);
    let l = RationalZ::from_coeffs(&[k, 0.0], &[1.0, -1.0])?;
    let (s, t) = l.feedback()?;
    let n = t.scale(-1.0);
    Ok(LoopSet {
        kind: ObserverKind::Acceleration,
        l,
        s,
        t,
        n,
        k,
    })
}

pub fn build_loop(p: &PlantParams, kind: ObserverKind, g: f64) -> Result<LoopSet, ModelError> {
    match kind {
        ObserverKind::Velocity => build_velocity_loop(p, g),
        ObserverKind::Acceleration => build_acceleration_loop(p, g),
    }
}

/// Plant from torque to velocity, `T_s / (J_m (z - 1))`.
pub fn plant_velocity_tf(p: &PlantParams) -> Result<RationalZ, ModelError> {
    Ok(RationalZ::from_coeffs(&[p.t_s / p.j_m], &[1.0, -1.0])?)
}

/// External torque to velocity with the observer loop closed and no outer
/// controller: `-T_s/(J_m (z-1)) · S`.
pub fn disturbance_to_velocity(p: &PlantParams, kind: ObserverKind, g: f64) -> Result<RationalZ, ModelError> {
    let set = build_loop(p, kind, g)?;
    Ok(plant_velocity_tf(p)?.mul(&set.s).scale(-1.0))
}

/// Command path `q̇ / q̈_des` of the observer-compensated plant.
///
/// Velocity kind: `α T_s ((1+gT_s) z - 1) / ((z-1)(z-(1-k)))`.
/// Acceleration kind: `α T_s ((1+gT_s) z - 1) / ((z-1)((1+k) z - 1))`.
pub fn command_path(p: &PlantParams, kind: ObserverKind, g: f64) -> Result<RationalZ, ModelError> {
    p.validate()?;
    positive("g", g)?;
    let alpha = p.alpha();
    let gt = g * p.t_s;
    let k = alpha * gt;
    let num = PolyZ::new(vec![1.0 + gt, -1.0]).scale(alpha * p.t_s);
    let inner = match kind {
        ObserverKind::Velocity => PolyZ::new(vec![1.0, -(1.0 - k)]),
        ObserverKind::Acceleration => PolyZ::new(vec![1.0 + k, -1.0]),
    };
    let den = PolyZ::linear(1.0).mul(&inner);
    Ok(RationalZ::new(num, den)?)
}

/// Transfer functions from the external torque `τ_d` to the observer's
/// estimate and to the sampled lumped disturbance
/// `τ_dis = K_τn I - J_mn q̈_n`, with the observer loop closed.
///
/// Built by plain block algebra so that `estimate / lumped = Q` is a
/// genuine check on the loop wiring.
#[derive(Clone, Debug)]
pub struct EstimationPaths {
    pub estimate: RationalZ,
    pub lumped: RationalZ,
}

pub fn estimation_paths(p: &PlantParams, kind: ObserverKind, g: f64) -> Result<EstimationPaths, ModelError> {
    let plant = plant_velocity_tf(p)?;
    let kt_ratio = p.k_tau / p.k_taun;
    match kind {
        ObserverKind::Velocity => {
            // Two-path realization: τ̂ = Q (K_τn I + J_mn g q̇) - J_mn g q̇ with
            // I = τ̂ / K_τn gives τ̂ (1 - Q) = -(1 - Q) J_mn g q̇, so τ̂ = -J_mn g q̇.
            // Then q̇ = P (K_τ/K_τn τ̂ - τ_d) closes through L = P K_τ J_mn g / K_τn.
            let gain = RationalZ::constant(p.j_mn * g);
            let l = plant.mul(&gain).scale(kt_ratio);
            let (s, _) = l.feedback()?;
            let qdot = plant.mul(&s).scale(-1.0);
            let estimate = gain.mul(&qdot).scale(-1.0);
            // Lumped disturbance sampled with the backward difference.
            let d = RationalZ::from_coeffs(&[1.0 / p.t_s, -1.0 / p.t_s], &[1.0, 0.0])?;
            let lumped = estimate.sub(&d.mul(&qdot).scale(p.j_mn));
            Ok(EstimationPaths { estimate, lumped })
        }
        ObserverKind::Acceleration => {
            // q̈ = (K_τ I - τ_d)/J_m, τ̂ = Q (K_τn I - J_mn q̈), I = τ̂/K_τn
            // ⇒ τ̂ (1 - Q + α Q) = Q (J_mn/J_m) τ_d
            let q = build_qfilter(g, p.t_s)?;
            let alpha = p.alpha();
            let den = RationalZ::one().sub(&q).add(&q.scale(alpha));
            let estimate = q.scale(p.j_mn / p.j_m).mul(&invert(&den)?);
            let qddot = estimate
                .scale(kt_ratio / p.j_m)
                .sub(&RationalZ::constant(1.0 / p.j_m));
            let lumped = estimate.sub(&qddot.scale(p.j_mn));
            Ok(EstimationPaths { estimate, lumped })
        }
    }
}

fn invert(r: &RationalZ) -> Result<RationalZ, ModelError> {
    Ok(RationalZ::new(r.den().clone(), r.num().clone())?)
}

/// Velocity-to-position map used when closing the position loop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PositionIntegrator {
    /// `T_s z / (z - 1)`, the backward-Euler inverse of the differentiator.
    #[default]
    BackwardRectangle,
    /// `T_s (z + 1) / (2 (z - 1))`: exact for the piecewise-linear velocity
    /// of a double integrator under zero-order hold, i.e. what the
    /// simulator produces.
    ExactHold,
}

impl PositionIntegrator {
    pub fn tf(&self, t_s: f64) -> RationalZ {
        let (num, den): (&[f64], &[f64]) = match self {
            PositionIntegrator::BackwardRectangle => (&[t_s, 0.0], &[1.0, -1.0]),
            PositionIntegrator::ExactHold => (&[0.5 * t_s, 0.5 * t_s], &[1.0, -1.0]),
        };
        RationalZ::from_coeffs(num, den).expect("monic denominator")
    }
}

/// PD outer law on velocity: `q̈_des = -(K_p H + K_D) q̇` with zero reference.
fn pd_on_velocity(t_s: f64, k_p: f64, k_d: f64, integrator: PositionIntegrator) -> RationalZ {
    integrator
        .tf(t_s)
        .scale(k_p)
        .add(&RationalZ::constant(k_d))
}

/// Characteristic polynomial (monic) of the PD position loop around the
/// observer-compensated plant, using the backward-rectangle position map.
pub fn build_position_charpoly(p: &PlantParams, obs: &ObserverConfig, k_p: f64, k_d: f64) -> Result<PolyZ, ModelError> {
    build_position_charpoly_with(p, obs, k_p, k_d, PositionIntegrator::default())
}

pub fn build_position_charpoly_with(
    p: &PlantParams,
    obs: &ObserverConfig,
    k_p: f64,
    k_d: f64,
    integrator: PositionIntegrator,
) -> Result<PolyZ, ModelError> {
    obs.validate()?;
    non_negative("K_p", k_p)?;
    non_negative("K_D", k_d)?;
    let g = command_path(p, obs.kind, obs.g_dob)?;
    let c = pd_on_velocity(p.t_s, k_p, k_d, integrator);
    let poly = g.den().mul(c.den()).add(&g.num().mul(c.num()));
    let lead = poly.leading();
    Ok(poly.scale(1.0 / lead))
}

/// Closed PD position loop: external torque to velocity,
/// `q̇/τ_d = -P S / (1 + G C)`.
pub fn position_disturbance_to_velocity(
    p: &PlantParams,
    obs: &ObserverConfig,
    k_p: f64,
    k_d: f64,
    integrator: PositionIntegrator,
) -> Result<RationalZ, ModelError> {
    let open = disturbance_to_velocity(p, obs.kind, obs.g_dob)?;
    let gc = command_path(p, obs.kind, obs.g_dob)?.mul(&pd_on_velocity(p.t_s, k_p, k_d, integrator));
    let (s_outer, _) = gc.feedback()?;
    Ok(open.mul(&s_outer))
}
