use std::ops::{Add, Mul, Sub};

use crate::models::ObserverKind;

/// `c + s·I`: a controller quantity as a function of the current about to
/// be applied. Used to solve the per-sample loop through the acceleration
/// measurement without an artificial delay.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Affine {
    pub c: f64,
    pub s: f64,
}

impl Affine {
    pub const ZERO: Affine = Affine { c: 0.0, s: 0.0 };
    /// The current itself.
    pub const CURRENT: Affine = Affine { c: 0.0, s: 1.0 };

    pub const fn constant(c: f64) -> Self {
        Self { c, s: 0.0 }
    }

    pub fn at(&self, current: f64) -> f64 {
        self.c + self.s * current
    }

    /// Fixed point of `I = self(I)`, or `None` if the loop is singular.
    pub fn fixed_point(&self) -> Option<f64> {
        let den = 1.0 - self.s;
        if den.abs() < 1e-12 {
            None
        } else {
            Some(self.c / den)
        }
    }
}

impl Add for Affine {
    type Output = Affine;
    fn add(self, o: Affine) -> Affine {
        Affine {
            c: self.c + o.c,
            s: self.s + o.s,
        }
    }
}

impl Sub for Affine {
    type Output = Affine;
    fn sub(self, o: Affine) -> Affine {
        Affine {
            c: self.c - o.c,
            s: self.s - o.s,
        }
    }
}

impl Mul<f64> for Affine {
    type Output = Affine;
    fn mul(self, k: f64) -> Affine {
        Affine {
            c: self.c * k,
            s: self.s * k,
        }
    }
}

/// Backward-Euler disturbance observer.
///
/// Velocity kind: `τ̂ = Q (K_τn I + J_mn g q̇ - τ_ff) - J_mn g q̇`.
/// Acceleration kind: `τ̂ = Q (K_τn I - J_mn q̈ - τ_ff)`.
/// `τ_ff` is a feedforward of identified torque, zero for the inner observer.
/// The state is the Q-filter output of the previous sample (zero at start).
#[derive(Clone, Debug)]
pub struct DisturbanceObserver {
    kind: ObserverKind,
    j_mn: f64,
    k_taun: f64,
    g: f64,
    rho: f64,
    c: f64,
    state: f64,
}

impl DisturbanceObserver {
    pub fn new(kind: ObserverKind, g: f64, t_s: f64, j_mn: f64, k_taun: f64) -> Self {
        let gt = g * t_s;
        Self {
            kind,
            j_mn,
            k_taun,
            g,
            rho: 1.0 / (1.0 + gt),
            c: gt / (1.0 + gt),
            state: 0.0,
        }
    }

    pub fn kind(&self) -> ObserverKind {
        self.kind
    }

    pub fn state(&self) -> f64 {
        self.state
    }

    fn filter_input(&self, current: Affine, meas: Affine, ff: Affine) -> Affine {
        match self.kind {
            ObserverKind::Velocity => current * self.k_taun + meas * (self.j_mn * self.g) - ff,
            ObserverKind::Acceleration => current * self.k_taun - meas * self.j_mn - ff,
        }
    }

    fn feedthrough(&self, meas: Affine) -> Affine {
        match self.kind {
            ObserverKind::Velocity => meas * (self.j_mn * self.g),
            ObserverKind::Acceleration => Affine::ZERO,
        }
    }

    /// Estimate this sample would produce, as a function of the current.
    /// Does not advance the state.
    pub fn predict(&self, current: Affine, meas: Affine, ff: Affine) -> Affine {
        let u = self.filter_input(current, meas, ff);
        Affine::constant(self.rho * self.state) + u * self.c - self.feedthrough(meas)
    }

    /// One filter update with the applied current; returns the estimate.
    pub fn step(&mut self, current: f64, meas: f64, ff: f64) -> f64 {
        let u = self
            .filter_input(Affine::constant(current), Affine::constant(meas), Affine::constant(ff))
            .c;
        self.state = self.rho * self.state + self.c * u;
        self.state - self.feedthrough(Affine::constant(meas)).c
    }
}
