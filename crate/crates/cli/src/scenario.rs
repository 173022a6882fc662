//! Scenario files: TOML with `[plant]`, `[observer]`, `[controller]`,
//! `[environment]`, `[noise]` and `[run]` sections. Unknown keys are errors.

use serde::{Deserialize, Serialize};

use dob_core::models::{ObserverConfig, ObserverKind, PlantParams, PositionIntegrator};
use dob_core::sim::{
    AccelNoise, Environment, InternalFeedforward, Mode, NoiseModel, SimConfig, Signal,
    VelocityNoise,
};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub plant: PlantSection,
    pub observer: ObserverSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controller: Option<ControllerSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub environment: Option<EnvironmentSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantSection {
    /// kg·m²
    #[serde(rename = "J_m")]
    pub j_m: f64,
    /// N·m/A
    #[serde(rename = "K_tau")]
    pub k_tau: f64,
    #[serde(rename = "J_mn")]
    pub j_mn: f64,
    #[serde(rename = "K_taun")]
    pub k_taun: f64,
    /// s
    #[serde(rename = "T_s")]
    pub t_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindName {
    Velocity,
    Acceleration,
}

impl From<KindName> for ObserverKind {
    fn from(k: KindName) -> Self {
        match k {
            KindName::Velocity => ObserverKind::Velocity,
            KindName::Acceleration => ObserverKind::Acceleration,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverSection {
    pub kind: KindName,
    /// rad/s
    pub g_dob: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_rtob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rtob_kind: Option<KindName>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    #[default]
    Position,
    Force,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedforwardName {
    #[default]
    Exact,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorName {
    #[default]
    BackwardRectangle,
    ExactHold,
}

fn default_true() -> bool {
    true
}

fn default_reference() -> SignalSpec {
    SignalSpec::Step {
        amplitude: 1.0,
        start: DEFAULT_START,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSection {
    #[serde(default)]
    pub mode: ModeName,
    /// 1/s²
    #[serde(rename = "K_p", default)]
    pub k_p: f64,
    /// 1/s
    #[serde(rename = "K_D", default)]
    pub k_d: f64,
    #[serde(rename = "C_f", default, skip_serializing_if = "Option::is_none")]
    pub c_f: Option<f64>,
    #[serde(default = "default_true")]
    pub reference_feedforward: bool,
    #[serde(default)]
    pub internal_feedforward: FeedforwardName,
    /// Velocity-to-position map used by `rootlocus`.
    #[serde(default)]
    pub position_integrator: IntegratorName,
    /// Position (rad) or force (N·m) reference.
    #[serde(default = "default_reference")]
    pub reference: SignalSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSection {
    #[serde(rename = "K_env")]
    pub k_env: f64,
    #[serde(rename = "D_env")]
    pub d_env: f64,
    #[serde(default)]
    pub contact_pos: f64,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    #[serde(default)]
    pub velocity: VelocityNoiseSpec,
    #[serde(default)]
    pub accel: AccelNoiseSpec,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VelocityNoiseSpec {
    #[default]
    None,
    WhiteGaussian { sigma: f64 },
    EncoderQuantization { delta: f64 },
    Tone { amplitude: f64, omega: f64 },
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AccelNoiseSpec {
    #[default]
    None,
    WhiteGaussian { sigma: f64 },
    GaussianWithBias { sigma: f64, bias: f64 },
    Tone { amplitude: f64, omega: f64 },
}

/// Signals start at 0.1 s unless told otherwise.
pub const DEFAULT_START: f64 = 0.1;

fn default_start() -> f64 {
    DEFAULT_START
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalSpec {
    #[default]
    Zero,
    Step {
        amplitude: f64,
        #[serde(default = "default_start")]
        start: f64,
    },
    Ramp {
        slope: f64,
        #[serde(default = "default_start")]
        start: f64,
    },
    Sine {
        amplitude: f64,
        omega: f64,
        #[serde(default = "default_start")]
        start: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl From<&SignalSpec> for Signal {
    fn from(s: &SignalSpec) -> Self {
        match *s {
            SignalSpec::Zero => Signal::Zero,
            SignalSpec::Step { amplitude, start } => Signal::Step { amplitude, start },
            SignalSpec::Ramp { slope, start } => Signal::Ramp { slope, start },
            SignalSpec::Sine {
                amplitude,
                omega,
                start,
                phase,
            } => Signal::Sine {
                amplitude,
                omega,
                start,
                phase,
            },
        }
    }
}

fn default_substeps() -> usize {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// s
    pub duration: f64,
    #[serde(default = "default_substeps")]
    pub substeps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub disturbance_hold: bool,
    /// External torque, N·m.
    #[serde(default)]
    pub disturbance: SignalSpec,
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn require_positive(key: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(config(format!("{key} must be positive and finite, got {v}")))
    }
}

fn require_non_negative(key: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(config(format!("{key} must be non-negative and finite, got {v}")))
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn plant_params(&self) -> Result<PlantParams, CliError> {
        let p = &self.plant;
        for (key, v) in [
            ("plant.J_m", p.j_m),
            ("plant.K_tau", p.k_tau),
            ("plant.J_mn", p.j_mn),
            ("plant.K_taun", p.k_taun),
            ("plant.T_s", p.t_s),
        ] {
            require_positive(key, v)?;
        }
        Ok(PlantParams {
            j_m: p.j_m,
            k_tau: p.k_tau,
            j_mn: p.j_mn,
            k_taun: p.k_taun,
            t_s: p.t_s,
        })
    }

    pub fn observer_config(&self) -> Result<ObserverConfig, CliError> {
        let o = &self.observer;
        require_positive("observer.g_dob", o.g_dob)?;
        if let Some(g) = o.g_rtob {
            require_positive("observer.g_rtob", g)?;
        }
        Ok(ObserverConfig {
            kind: o.kind.into(),
            g_dob: o.g_dob,
            g_rtob: o.g_rtob,
        })
    }

    pub fn controller(&self) -> Result<&ControllerSection, CliError> {
        self.controller
            .as_ref()
            .ok_or_else(|| config("missing [controller] section"))
    }

    pub fn gains(&self) -> Result<(f64, f64, PositionIntegrator), CliError> {
        let c = self.controller()?;
        require_non_negative("controller.K_p", c.k_p)?;
        require_non_negative("controller.K_D", c.k_d)?;
        let integ = match c.position_integrator {
            IntegratorName::BackwardRectangle => PositionIntegrator::BackwardRectangle,
            IntegratorName::ExactHold => PositionIntegrator::ExactHold,
        };
        Ok((c.k_p, c.k_d, integ))
    }

    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        let plant = self.plant_params()?;
        let observer = self.observer_config()?;
        let c = self.controller()?;
        let (k_p, k_d, _) = self.gains()?;
        let run = self
            .run
            .as_ref()
            .ok_or_else(|| config("missing [run] section"))?;
        require_positive("run.duration", run.duration)?;
        if run.substeps == 0 {
            return Err(config("run.substeps must be at least 1"));
        }
        let mode = match c.mode {
            ModeName::Position => Mode::Position,
            ModeName::Force => Mode::Force,
        };
        let env = match &self.environment {
            Some(e) => {
                require_non_negative("environment.K_env", e.k_env)?;
                require_non_negative("environment.D_env", e.d_env)?;
                Some(Environment {
                    k_env: e.k_env,
                    d_env: e.d_env,
                    contact_pos: e.contact_pos,
                })
            }
            None => None,
        };
        if mode == Mode::Force {
            let c_f = c.c_f.ok_or_else(|| config("controller.C_f is required in force mode"))?;
            if !c_f.is_finite() {
                return Err(config(format!("controller.C_f must be finite, got {c_f}")));
            }
            if env.is_none() {
                return Err(config("[environment] is required in force mode"));
            }
            if observer.g_rtob.is_none() {
                return Err(config("observer.g_rtob is required in force mode"));
            }
        }
        let noise = self.noise.clone().unwrap_or_default();
        let noise = NoiseModel {
            velocity: match noise.velocity {
                VelocityNoiseSpec::None => VelocityNoise::None,
                VelocityNoiseSpec::WhiteGaussian { sigma } => VelocityNoise::WhiteGaussian { sigma },
                VelocityNoiseSpec::EncoderQuantization { delta } => {
                    VelocityNoise::EncoderQuantization { delta }
                }
                VelocityNoiseSpec::Tone { amplitude, omega } => VelocityNoise::Tone { amplitude, omega },
            },
            accel: match noise.accel {
                AccelNoiseSpec::None => AccelNoise::None,
                AccelNoiseSpec::WhiteGaussian { sigma } => AccelNoise::WhiteGaussian { sigma },
                AccelNoiseSpec::GaussianWithBias { sigma, bias } => {
                    AccelNoise::GaussianWithBias { sigma, bias }
                }
                AccelNoiseSpec::Tone { amplitude, omega } => AccelNoise::Tone { amplitude, omega },
            },
        };
        if let Err((field, value)) = noise.validate() {
            return Err(config(format!("noise.{field} is invalid: {value}")));
        }
        let cfg = SimConfig {
            plant,
            observer,
            mode,
            k_p,
            k_d,
            c_f: c.c_f,
            reference: (&c.reference).into(),
            reference_feedforward: c.reference_feedforward,
            disturbance: (&run.disturbance).into(),
            disturbance_hold: run.disturbance_hold,
            env,
            rtob_kind: self.observer.rtob_kind.map(Into::into),
            internal_ff: match c.internal_feedforward {
                FeedforwardName::Exact => InternalFeedforward::Exact,
                FeedforwardName::Zero => InternalFeedforward::Zero,
            },
            noise,
            duration: run.duration,
            substeps: run.substeps,
            seed: run.seed,
        };
        cfg.validate().map_err(|e| config(e.to_string()))?;
        Ok(cfg)
    }
}
