use std::io::{self, Write};

pub const CSV_HEADER: &str =
    "t,q,qdot,qddot,I,I_des,I_dis,tau_dis_hat,tau_ext_hat,tau_env,meas_vel,meas_acc";

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SimStatus {
    Completed,
    /// First sample whose state was non-finite or above the divergence bound.
    Diverged { index: usize, time: f64 },
}

/// Sampled time series, one entry per `t_k = k T_s`.
///
/// `qddot` is the acceleration just after sample `k`, with the new current
/// applied.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimTrace {
    pub t: Vec<f64>,
    pub q: Vec<f64>,
    pub qdot: Vec<f64>,
    pub qddot: Vec<f64>,
    pub current: Vec<f64>,
    pub current_des: Vec<f64>,
    pub current_dis: Vec<f64>,
    pub tau_dis_hat: Vec<f64>,
    pub tau_ext_hat: Vec<f64>,
    pub tau_env: Vec<f64>,
    pub meas_vel: Vec<f64>,
    pub meas_acc: Vec<f64>,
    /// Outer-loop acceleration command. Not part of the CSV.
    pub qddot_des: Vec<f64>,
    pub status: Option<SimStatus>,
}

/// One row, in CSV column order (without `qddot_des`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Row {
    pub t: f64,
    pub q: f64,
    pub qdot: f64,
    pub qddot: f64,
    pub current: f64,
    pub current_des: f64,
    pub current_dis: f64,
    pub tau_dis_hat: f64,
    pub tau_ext_hat: f64,
    pub tau_env: f64,
    pub meas_vel: f64,
    pub meas_acc: f64,
    pub qddot_des: f64,
}

impl Row {
    pub fn is_finite(&self) -> bool {
        [
            self.t,
            self.q,
            self.qdot,
            self.qddot,
            self.current,
            self.current_des,
            self.current_dis,
            self.tau_dis_hat,
            self.tau_ext_hat,
            self.tau_env,
            self.meas_vel,
            self.meas_acc,
            self.qddot_des,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

impl SimTrace {
    pub(crate) fn with_capacity(n: usize) -> Self {
        let v = || Vec::with_capacity(n);
        Self {
            t: v(),
            q: v(),
            qdot: v(),
            qddot: v(),
            current: v(),
            current_des: v(),
            current_dis: v(),
            tau_dis_hat: v(),
            tau_ext_hat: v(),
            tau_env: v(),
            meas_vel: v(),
            meas_acc: v(),
            qddot_des: v(),
            status: None,
        }
    }

    pub(crate) fn push(&mut self, r: Row) {
        self.t.push(r.t);
        self.q.push(r.q);
        self.qdot.push(r.qdot);
        self.qddot.push(r.qddot);
        self.current.push(r.current);
        self.current_des.push(r.current_des);
        self.current_dis.push(r.current_dis);
        self.tau_dis_hat.push(r.tau_dis_hat);
        self.tau_ext_hat.push(r.tau_ext_hat);
        self.tau_env.push(r.tau_env);
        self.meas_vel.push(r.meas_vel);
        self.meas_acc.push(r.meas_acc);
        self.qddot_des.push(r.qddot_des);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn status(&self) -> SimStatus {
        self.status.unwrap_or(SimStatus::Completed)
    }

    pub fn diverged(&self) -> bool {
        matches!(self.status(), SimStatus::Diverged { .. })
    }

    /// Floats use the shortest representation that round-trips.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for k in 0..self.len() {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                self.t[k],
                self.q[k],
                self.qdot[k],
                self.qddot[k],
                self.current[k],
                self.current_des[k],
                self.current_dis[k],
                self.tau_dis_hat[k],
                self.tau_ext_hat[k],
                self.tau_env[k],
                self.meas_vel[k],
                self.meas_acc[k],
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    /// Root mean square of the applied current.
    pub fn rms_current(&self) -> f64 {
        rms(&self.current)
    }
}

pub fn rms(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    (xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64).sqrt()
}
