use super::Signal;

/// Unilateral spring-damper, active only for `q > contact_pos`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Environment {
    /// N·m/rad
    pub k_env: f64,
    /// N·m·s/rad
    pub d_env: f64,
    /// rad
    pub contact_pos: f64,
}

impl Environment {
    pub fn new(k_env: f64, d_env: f64) -> Self {
        Self {
            k_env,
            d_env,
            contact_pos: 0.0,
        }
    }

    pub fn torque(&self, q: f64, qdot: f64) -> f64 {
        if q > self.contact_pos {
            self.k_env * (q - self.contact_pos) + self.d_env * qdot
        } else {
            0.0
        }
    }
}

/// Rigid body `J_m q̈ = K_τ I - τ_d(t) - τ_env(q, q̇)` over one sample with
/// `I` held, classical RK4 on `substeps` equal slices. Exact when the
/// right-hand side is constant over the sample.
pub(crate) struct RigidBody<'a> {
    pub j_m: f64,
    pub k_tau: f64,
    pub disturbance: &'a Signal,
    /// Use the disturbance sampled at the start of the interval throughout.
    pub hold: bool,
    pub env: Option<Environment>,
}

impl RigidBody<'_> {
    fn accel(&self, current: f64, tau: f64, q: f64, qdot: f64) -> f64 {
        let env = self.env.map_or(0.0, |e| e.torque(q, qdot));
        (self.k_tau * current - tau - env) / self.j_m
    }

    pub fn advance(&self, q: f64, qdot: f64, current: f64, t0: f64, t_s: f64, substeps: usize) -> (f64, f64) {
        let h = t_s / substeps as f64;
        let held = self.disturbance.value(t0);
        // Stage times inside a slice use the right limit at its start and
        // the left limit at its end, so a step on a slice edge is exact.
        let tau = |t: f64, end: bool| {
            if self.hold {
                held
            } else if end {
                self.disturbance.value_left(t)
            } else {
                self.disturbance.value(t)
            }
        };
        let (mut x, mut v) = (q, qdot);
        for j in 0..substeps {
            let ts = t0 + j as f64 * h;
            let tm = ts + 0.5 * h;
            let te = ts + h;
            let a1 = self.accel(current, tau(ts, false), x, v);
            let (x2, v2) = (x + 0.5 * h * v, v + 0.5 * h * a1);
            let a2 = self.accel(current, tau(tm, false), x2, v2);
            let (x3, v3) = (x + 0.5 * h * v2, v + 0.5 * h * a2);
            let a3 = self.accel(current, tau(tm, false), x3, v3);
            let (x4, v4) = (x + h * v3, v + h * a3);
            let a4 = self.accel(current, tau(te, true), x4, v4);
            x += h / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
            v += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        }
        (x, v)
    }
}
