use std::f64::consts::PI;
use std::fmt::Write as _;

use dob_core::analysis::{
    bode_integral, classify_k, max_bandwidth, peak_gain, root_locus_with, ConstraintSpec, KClass,
};
use dob_core::dtf::Stability;
use dob_core::models::build_loop;
use dob_core::sim::{simulate, summarize, SimStatus, SimSummary, SimTrace};

use crate::{exit, CliError, Scenario};

pub const DEFAULT_FREQ_POINTS: usize = 1024;

/// Text or CSV product plus the exit code it maps to.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

/// `n` log-spaced angles over `[1e-4 π, π (1 - 1e-9)]`; `n = 1` gives the
/// lower end.
pub fn theta_grid(n: usize) -> Vec<f64> {
    let lo = 1e-4 * PI;
    let hi = PI * (1.0 - 1e-9);
    if n == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln();
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo * (ratio * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `steps` geometrically spaced values from `from` to `to`.
pub fn alpha_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(from.is_finite() && to.is_finite() && from > 0.0 && from <= to) {
        return Err(CliError::Config(format!(
            "alpha range must satisfy 0 < alpha-from <= alpha-to, got {from}..{to}"
        )));
    }
    if steps == 0 {
        return Err(CliError::Config("steps must be at least 1".into()));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let ratio = (to / from).ln();
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                to
            } else {
                from * (ratio * i as f64 / (steps - 1) as f64).exp()
            }
        })
        .collect())
}

pub fn cmd_freq(s: &Scenario, points: usize) -> Result<Outcome, CliError> {
    if points == 0 {
        return Err(CliError::Config("points must be at least 1".into()));
    }
    let p = s.plant_params()?;
    let obs = s.observer_config()?;
    let set = build_loop(&p, obs.kind, obs.g_dob)?;
    let thetas = theta_grid(points);
    let sv = set.s.freqresp(&thetas)?;
    let tv = set.t.freqresp(&thetas)?;
    let nv = set.n.freqresp(&thetas)?;
    let mut out = String::from("theta_rad,omega_rad_s,mag_S,phase_S_rad,mag_T,phase_T_rad,mag_N\n");
    for (i, &theta) in thetas.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            theta,
            theta / p.t_s,
            sv[i].norm(),
            sv[i].arg(),
            tv[i].norm(),
            tv[i].arg(),
            nv[i].norm()
        )
        .unwrap();
    }
    Ok(Outcome {
        output: out,
        code: exit::OK,
    })
}

fn class_name(c: KClass) -> &'static str {
    match c {
        KClass::Monotone => "monotone",
        KClass::Oscillatory => "oscillatory",
        KClass::Marginal => "marginal",
        KClass::Unstable => "unstable",
    }
}

pub fn cmd_constraints(
    s: &Scenario,
    gamma_s: Option<f64>,
    gamma_t: Option<f64>,
) -> Result<Outcome, CliError> {
    let spec = ConstraintSpec::new(gamma_s, gamma_t).map_err(|e| CliError::Config(e.to_string()))?;
    let p = s.plant_params()?;
    let obs = s.observer_config()?;
    let limits = max_bandwidth(&p, &spec)?;
    let set = build_loop(&p, obs.kind, obs.g_dob)?;
    let class = classify_k(obs.kind, set.k)?;
    let stable = set.s.stability()? == Stability::Stable;

    let mut out = String::new();
    writeln!(out, "kind         {}", obs.kind).unwrap();
    writeln!(out, "alpha        {}", p.alpha()).unwrap();
    writeln!(out, "k            {}", set.k).unwrap();
    writeln!(out, "k_max        {}", limits.k_max).unwrap();
    writeln!(out, "g_max        {} rad/s", limits.g_max).unwrap();
    writeln!(out, "g_osc        {} rad/s", limits.g_osc).unwrap();
    writeln!(out, "g_unstable   {} rad/s", limits.g_unstable).unwrap();
    writeln!(out, "class        {}", class_name(class)).unwrap();

    let mut pass = true;
    for (label, gamma, tf) in [("S", gamma_s, &set.s), ("T", gamma_t, &set.t)] {
        let Some(gamma) = gamma else { continue };
        let bound = 1.0 / gamma;
        let ok = stable && peak_gain(tf)?.magnitude <= bound * (1.0 + 1e-12);
        pass &= ok;
        let peak = if stable {
            peak_gain(tf)?.magnitude.to_string()
        } else {
            "unbounded".to_string()
        };
        writeln!(
            out,
            "|{label}|max       {peak} (bound {bound}) {}",
            if ok { "PASS" } else { "FAIL" }
        )
        .unwrap();
    }
    if class != KClass::Monotone {
        writeln!(
            out,
            "note: k = {} > 1, the velocity loop is {}",
            set.k,
            class_name(class)
        )
        .unwrap();
    }
    Ok(Outcome {
        output: out,
        code: if pass { exit::OK } else { exit::FAIL },
    })
}

/// Tolerance for the numeric-versus-analytic comparison.
pub const BODE_TOLERANCE: f64 = 1e-2;

pub fn cmd_bode_integral(s: &Scenario) -> Result<Outcome, CliError> {
    let p = s.plant_params()?;
    let obs = s.observer_config()?;
    let set = build_loop(&p, obs.kind, obs.g_dob)?;
    let r = bode_integral(&set.s, &set.l)?;
    let mut out = String::new();
    writeln!(out, "numeric      {}", r.numeric_integral).unwrap();
    writeln!(out, "analytic     {}", r.analytic_rhs).unwrap();
    writeln!(out, "abs_error    {}", r.abs_error).unwrap();
    writeln!(out, "grid_points  {}", r.grid_points).unwrap();
    Ok(Outcome {
        output: out,
        code: if r.abs_error <= BODE_TOLERANCE {
            exit::OK
        } else {
            exit::FAIL
        },
    })
}

pub fn cmd_rootlocus(s: &Scenario, from: f64, to: f64, steps: usize) -> Result<Outcome, CliError> {
    let alphas = alpha_grid(from, to, steps)?;
    let p = s.plant_params()?;
    let obs = s.observer_config()?;
    let (k_p, k_d, integ) = s.gains()?;
    let points = root_locus_with(&p, &obs, k_p, k_d, &alphas, integ)?;
    let mut out = String::from("alpha,root_index,re,im,magnitude,spectral_radius\n");
    for pt in &points {
        for (i, r) in pt.roots.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                pt.alpha,
                i,
                r.re,
                r.im,
                r.norm(),
                pt.spectral_radius
            )
            .unwrap();
        }
    }
    Ok(Outcome {
        output: out,
        code: exit::OK,
    })
}

/// Simulation product: the trace, its CSV, a one-line summary and the exit
/// code (0 settled, 1 not settled, 4 diverged).
pub struct SimOutcome {
    pub trace: SimTrace,
    pub summary: SimSummary,
    pub csv: String,
    pub report: String,
    pub code: i32,
}

pub fn cmd_sim(s: &Scenario) -> Result<SimOutcome, CliError> {
    let cfg = s.sim_config()?;
    let trace = simulate(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
    let summary = summarize(&cfg, &trace);
    let (status, code) = match summary.status {
        SimStatus::Diverged { time, .. } => (format!("diverged at t={time}"), exit::DIVERGED),
        SimStatus::Completed if summary.settled => ("settled".to_string(), exit::OK),
        SimStatus::Completed => ("not settled".to_string(), exit::FAIL),
    };
    let report = format!(
        "status={status} steady_state_error={} max_tail_error={} rms_I={}\n",
        summary.steady_state_error, summary.max_tail_error, summary.rms_current
    );
    Ok(SimOutcome {
        csv: trace.to_csv_string(),
        trace,
        summary,
        report,
        code,
    })
}
