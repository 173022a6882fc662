//! Fixed-step simulation of the observer-based position and force loops.
//!
//! Each sample: read the sensors, evaluate the outer law and the
//! observers, apply the current, then integrate the rigid body over the
//! sample with the current held. The current is solved simultaneously with
//! every quantity that depends on it (an accelerometer reads the motion the
//! new current produces), so no loop carries an artificial delay.

mod fit;
mod noise;
mod observer;
mod plant;
mod signal;
mod trace;

use thiserror::Error;

use crate::models::{ModelError, ObserverConfig, ObserverKind, PlantParams};

pub use fit::fit_tone;
pub use noise::{AccelNoise, AccelSensor, NoiseModel, VelocityNoise, VelocitySensor};
pub use observer::{Affine, DisturbanceObserver};
pub use plant::Environment;
pub use signal::Signal;
pub use trace::{rms, SimStatus, SimTrace, CSV_HEADER};

use plant::RigidBody;
use trace::Row;

/// Any state magnitude above this counts as divergence.
pub const DIVERGENCE_BOUND: f64 = 1e12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid configuration: {field} = {value}")]
    InvalidConfig { field: &'static str, value: f64 },
    #[error("configuration requires {0}")]
    Missing(&'static str),
    #[error("operation needs {expected:?} mode")]
    WrongMode { expected: Mode },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Position,
    Force,
}

/// Feedforward of identified internal torque into the reaction observer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InternalFeedforward {
    /// Everything except the environment: external disturbance signal plus
    /// the parameter-mismatch torques.
    #[default]
    Exact,
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub plant: PlantParams,
    pub observer: ObserverConfig,
    pub mode: Mode,
    /// 1/s²
    pub k_p: f64,
    /// 1/s
    pub k_d: f64,
    /// Force-loop gain. Force mode only.
    pub c_f: Option<f64>,
    /// Position reference (rad) or force reference (N·m).
    pub reference: Signal,
    /// Add the reference acceleration to the PD output.
    pub reference_feedforward: bool,
    /// External torque `τ_d`, N·m.
    pub disturbance: Signal,
    /// Sample `τ_d` once per period and hold it.
    pub disturbance_hold: bool,
    pub env: Option<Environment>,
    /// Measurement used by the reaction observer; defaults to the inner kind.
    pub rtob_kind: Option<ObserverKind>,
    pub internal_ff: InternalFeedforward,
    pub noise: NoiseModel,
    /// s
    pub duration: f64,
    pub substeps: usize,
    pub seed: u64,
}

impl SimConfig {
    /// Unit step reference at 0.1 s, no disturbance, no noise, 1 s.
    pub fn position(plant: PlantParams, observer: ObserverConfig, k_p: f64, k_d: f64) -> Self {
        Self {
            plant,
            observer,
            mode: Mode::Position,
            k_p,
            k_d,
            c_f: None,
            reference: Signal::Step {
                amplitude: 1.0,
                start: 0.1,
            },
            reference_feedforward: true,
            disturbance: Signal::Zero,
            disturbance_hold: false,
            env: None,
            rtob_kind: None,
            internal_ff: InternalFeedforward::Exact,
            noise: NoiseModel::default(),
            duration: 1.0,
            substeps: 10,
            seed: 0,
        }
    }

    /// Unit torque step at 0.1 s against `env`.
    pub fn force(plant: PlantParams, observer: ObserverConfig, c_f: f64, env: Environment) -> Self {
        Self {
            mode: Mode::Force,
            c_f: Some(c_f),
            env: Some(env),
            ..Self::position(plant, observer, 0.0, 0.0)
        }
    }

    pub fn steps(&self) -> usize {
        (self.duration / self.plant.t_s).round() as usize
    }

    pub fn rtob_kind(&self) -> ObserverKind {
        self.rtob_kind.unwrap_or(self.observer.kind)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.plant.validate()?;
        self.observer.validate()?;
        let bad = |field, value| Err(SimError::InvalidConfig { field, value });
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return bad("duration", self.duration);
        }
        if self.steps() == 0 {
            return bad("duration", self.duration);
        }
        if self.substeps == 0 {
            return bad("substeps", 0.0);
        }
        for (field, v) in [("K_p", self.k_p), ("K_D", self.k_d)] {
            if !v.is_finite() {
                return bad(field, v);
            }
        }
        if !self.reference.is_finite() {
            return bad("reference", f64::NAN);
        }
        if !self.disturbance.is_finite() {
            return bad("disturbance", f64::NAN);
        }
        if let Err((field, value)) = self.noise.validate() {
            return bad(field, value);
        }
        if let Some(env) = self.env {
            if !(env.k_env.is_finite() && env.k_env >= 0.0) {
                return bad("K_env", env.k_env);
            }
            if !(env.d_env.is_finite() && env.d_env >= 0.0) {
                return bad("D_env", env.d_env);
            }
            if !env.contact_pos.is_finite() {
                return bad("contact_pos", env.contact_pos);
            }
        }
        if self.mode == Mode::Force {
            let c_f = self.c_f.ok_or(SimError::Missing("C_f"))?;
            if !c_f.is_finite() {
                return bad("C_f", c_f);
            }
            if self.env.is_none() {
                return Err(SimError::Missing("environment"));
            }
            if self.observer.g_rtob.is_none() {
                return Err(SimError::Missing("g_rtob"));
            }
        }
        Ok(())
    }
}

pub fn simulate_position(cfg: &SimConfig) -> Result<SimTrace, SimError> {
    if cfg.mode != Mode::Position {
        return Err(SimError::WrongMode {
            expected: Mode::Position,
        });
    }
    simulate(cfg)
}

pub fn simulate_force(cfg: &SimConfig) -> Result<SimTrace, SimError> {
    if cfg.mode != Mode::Force {
        return Err(SimError::WrongMode { expected: Mode::Force });
    }
    simulate(cfg)
}

/// Runs either mode. Divergence is reported through [`SimTrace::status`].
pub fn simulate(cfg: &SimConfig) -> Result<SimTrace, SimError> {
    cfg.validate()?;
    let p = cfg.plant;
    let t_s = p.t_s;
    let n = cfg.steps();
    let force = cfg.mode == Mode::Force;
    let env = if force { cfg.env } else { None };

    let mut dob = DisturbanceObserver::new(cfg.observer.kind, cfg.observer.g_dob, t_s, p.j_mn, p.k_taun);
    let rtob_kind = cfg.rtob_kind();
    let mut rtob = cfg
        .observer
        .g_rtob
        .filter(|_| force)
        .map(|g| DisturbanceObserver::new(rtob_kind, g, t_s, p.j_mn, p.k_taun));
    let uses_accel = cfg.observer.kind == ObserverKind::Acceleration
        || (rtob.is_some() && rtob_kind == ObserverKind::Acceleration);

    let mut vel_sensor = VelocitySensor::new(cfg.noise.velocity, t_s, cfg.seed);
    let mut acc_sensor = AccelSensor::new(cfg.noise.accel, cfg.seed);
    let body = RigidBody {
        j_m: p.j_m,
        k_tau: p.k_tau,
        disturbance: &cfg.disturbance,
        hold: cfg.disturbance_hold,
        env,
    };

    let mut trace = SimTrace::with_capacity(n);
    let (mut q, mut qdot) = (0.0f64, 0.0f64);
    let mut prev_meas_vel = 0.0;
    for k in 0..n {
        let t = k as f64 * t_s;
        let diverged = |trace: &mut SimTrace| {
            trace.status = Some(SimStatus::Diverged { index: k, time: t });
        };
        if !(q.is_finite() && qdot.is_finite())
            || q.abs() > DIVERGENCE_BOUND
            || qdot.abs() > DIVERGENCE_BOUND
        {
            diverged(&mut trace);
            return Ok(trace);
        }

        let (q_m, qdot_m) = vel_sensor.measure(q, qdot, t);
        let tau_env = env.map_or(0.0, |e| e.torque(q, qdot));
        let tau_ext = cfg.disturbance.value(t);
        let tau_d = tau_ext + tau_env;
        let acc_true = Affine {
            c: -tau_d / p.j_m,
            s: p.k_tau / p.j_m,
        };
        let acc_meas = if uses_accel {
            acc_true + Affine::constant(acc_sensor.offset(t))
        } else {
            Affine::constant((qdot_m - prev_meas_vel) / t_s)
        };
        let meas_for = |kind: ObserverKind| match kind {
            ObserverKind::Velocity => Affine::constant(qdot_m),
            ObserverKind::Acceleration => acc_meas,
        };

        // Outer law.
        let tau_id = match cfg.internal_ff {
            InternalFeedforward::Exact => {
                Affine::constant(tau_ext)
                    + Affine::CURRENT * (p.k_taun - p.k_tau)
                    + acc_true * (p.j_m - p.j_mn)
            }
            InternalFeedforward::Zero => Affine::ZERO,
        };
        let (qddot_des, tau_ext_hat) = match (&rtob, cfg.mode) {
            (Some(r), Mode::Force) => {
                let est = r.predict(Affine::CURRENT, meas_for(rtob_kind), tau_id);
                let c_f = cfg.c_f.unwrap_or(0.0);
                (
                    (Affine::constant(cfg.reference.value(t)) - est) * c_f,
                    est,
                )
            }
            _ => {
                let mut cmd = cfg.k_p * (cfg.reference.value(t) - q_m)
                    + cfg.k_d * (cfg.reference.rate(t) - qdot_m);
                if cfg.reference_feedforward {
                    cmd += cfg.reference.accel(t);
                }
                (Affine::constant(cmd), Affine::ZERO)
            }
        };

        // Inner observer and the simultaneous current solve.
        let current_des = qddot_des * (p.j_mn / p.k_taun);
        let tau_dis_hat = dob.predict(Affine::CURRENT, meas_for(cfg.observer.kind), Affine::ZERO);
        let Some(current) = (current_des + tau_dis_hat * (1.0 / p.k_taun)).fixed_point() else {
            diverged(&mut trace);
            return Ok(trace);
        };

        let tau_dis_hat = dob.step(current, meas_for(cfg.observer.kind).at(current), 0.0);
        let tau_ext_hat = match rtob.as_mut() {
            Some(r) => r.step(current, meas_for(rtob_kind).at(current), tau_id.at(current)),
            None => tau_ext_hat.at(current),
        };
        let row = Row {
            t,
            q,
            qdot,
            qddot: acc_true.at(current),
            current,
            current_des: current_des.at(current),
            current_dis: tau_dis_hat / p.k_taun,
            tau_dis_hat,
            tau_ext_hat,
            tau_env,
            meas_vel: qdot_m,
            meas_acc: acc_meas.at(current),
            qddot_des: qddot_des.at(current),
        };
        if !row.is_finite() || current.abs() > DIVERGENCE_BOUND {
            diverged(&mut trace);
            return Ok(trace);
        }
        trace.push(row);
        prev_meas_vel = qdot_m;

        (q, qdot) = body.advance(q, qdot, current, t, t_s, cfg.substeps);
    }
    trace.status = Some(SimStatus::Completed);
    Ok(trace)
}

/// Steady-state view of a finished run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimSummary {
    pub status: SimStatus,
    /// Max |error| over the last tenth of the run is within 5 % of the
    /// final reference magnitude.
    pub settled: bool,
    /// Mean error over the last tenth: `q - q_ref` or `τ_env - τ_des`.
    pub steady_state_error: f64,
    pub max_tail_error: f64,
    pub rms_current: f64,
}

pub const SETTLE_FRACTION: f64 = 0.05;

pub fn summarize(cfg: &SimConfig, trace: &SimTrace) -> SimSummary {
    let status = trace.status();
    let n = trace.len();
    let tail = (n / 10).max(1).min(n);
    let error = |k: usize| match cfg.mode {
        Mode::Position => trace.q[k] - cfg.reference.value(trace.t[k]),
        Mode::Force => trace.tau_env[k] - cfg.reference.value(trace.t[k]),
    };
    let (mut sum, mut max) = (0.0, 0.0f64);
    for k in n - tail..n {
        let e = error(k);
        sum += e;
        max = max.max(e.abs());
    }
    let steady_state_error = if tail > 0 { sum / tail as f64 } else { f64::NAN };
    let reference = if n > 0 {
        cfg.reference.value(trace.t[n - 1]).abs()
    } else {
        0.0
    };
    let bound = if reference > 0.0 {
        SETTLE_FRACTION * reference
    } else {
        SETTLE_FRACTION
    };
    SimSummary {
        status,
        settled: status == SimStatus::Completed && n > 0 && max <= bound,
        steady_state_error,
        max_tail_error: max,
        rms_current: trace.rms_current(),
    }
}

/// Longest run of consecutive sign changes in `xs`; samples with
/// `|x| <= floor` are skipped.
pub fn longest_alternation(xs: &[f64], floor: f64) -> usize {
    let mut best = 0;
    let mut run = 0;
    let mut prev: Option<f64> = None;
    for &x in xs {
        if x.abs() <= floor {
            continue;
        }
        match prev {
            Some(p) if p.signum() != x.signum() => {
                run += 1;
                best = best.max(run + 1);
            }
            _ => run = 0,
        }
        prev = Some(x);
    }
    best
}
