use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Noise on the velocity channel (and, for the encoder, on position).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum VelocityNoise {
    #[default]
    None,
    /// rad/s
    WhiteGaussian { sigma: f64 },
    /// Position floored to multiples of `delta` rad; velocity is its
    /// backward difference.
    EncoderQuantization { delta: f64 },
    /// Deterministic `amplitude · sin(omega · t_k)`, rad/s.
    Tone { amplitude: f64, omega: f64 },
}

/// Noise on the accelerometer channel, rad/s².
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum AccelNoise {
    #[default]
    None,
    WhiteGaussian { sigma: f64 },
    GaussianWithBias { sigma: f64, bias: f64 },
    Tone { amplitude: f64, omega: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct NoiseModel {
    pub velocity: VelocityNoise,
    pub accel: AccelNoise,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<(), (&'static str, f64)> {
        let check = |name, v: f64| if v.is_finite() && v >= 0.0 { Ok(()) } else { Err((name, v)) };
        match self.velocity {
            VelocityNoise::None => {}
            VelocityNoise::WhiteGaussian { sigma } => check("velocity_noise.sigma", sigma)?,
            VelocityNoise::EncoderQuantization { delta } => check("velocity_noise.delta", delta)?,
            VelocityNoise::Tone { amplitude, omega } => {
                check("velocity_noise.amplitude", amplitude)?;
                check("velocity_noise.omega", omega)?;
            }
        }
        match self.accel {
            AccelNoise::None => {}
            AccelNoise::WhiteGaussian { sigma } => check("accel_noise.sigma", sigma)?,
            AccelNoise::GaussianWithBias { sigma, bias } => {
                check("accel_noise.sigma", sigma)?;
                if !bias.is_finite() {
                    return Err(("accel_noise.bias", bias));
                }
            }
            AccelNoise::Tone { amplitude, omega } => {
                check("accel_noise.amplitude", amplitude)?;
                check("accel_noise.omega", omega)?;
            }
        }
        Ok(())
    }
}

const VELOCITY_STREAM: u64 = 1;
const ACCEL_STREAM: u64 = 2;

fn channel_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Position/velocity sensor. Stateful because the encoder differentiates.
#[derive(Clone, Debug)]
pub struct VelocitySensor {
    noise: VelocityNoise,
    t_s: f64,
    prev_position: Option<f64>,
    rng: ChaCha8Rng,
}

impl VelocitySensor {
    pub fn new(noise: VelocityNoise, t_s: f64, seed: u64) -> Self {
        Self {
            noise,
            t_s,
            prev_position: None,
            rng: channel_rng(seed, VELOCITY_STREAM),
        }
    }

    /// Returns measured `(q, q̇)` at `t`.
    pub fn measure(&mut self, q: f64, qdot: f64, t: f64) -> (f64, f64) {
        match self.noise {
            VelocityNoise::None => (q, qdot),
            VelocityNoise::WhiteGaussian { sigma } => {
                let n: f64 = StandardNormal.sample(&mut self.rng);
                (q, qdot + sigma * n)
            }
            VelocityNoise::EncoderQuantization { delta } => {
                let qm = if delta > 0.0 { (q / delta).floor() * delta } else { q };
                let prev = self.prev_position.unwrap_or(qm);
                self.prev_position = Some(qm);
                (qm, (qm - prev) / self.t_s)
            }
            VelocityNoise::Tone { amplitude, omega } => (q, qdot + amplitude * (omega * t).sin()),
        }
    }
}

/// Additive accelerometer error.
#[derive(Clone, Debug)]
pub struct AccelSensor {
    noise: AccelNoise,
    rng: ChaCha8Rng,
}

impl AccelSensor {
    pub fn new(noise: AccelNoise, seed: u64) -> Self {
        Self {
            noise,
            rng: channel_rng(seed, ACCEL_STREAM),
        }
    }

    /// Error to add to the true acceleration at `t`.
    pub fn offset(&mut self, t: f64) -> f64 {
        match self.noise {
            AccelNoise::None => 0.0,
            AccelNoise::WhiteGaussian { sigma } => {
                let n: f64 = StandardNormal.sample(&mut self.rng);
                sigma * n
            }
            AccelNoise::GaussianWithBias { sigma, bias } => {
                let n: f64 = StandardNormal.sample(&mut self.rng);
                bias + sigma * n
            }
            AccelNoise::Tone { amplitude, omega } => amplitude * (omega * t).sin(),
        }
    }

    pub fn measure(&mut self, truth: f64, t: f64) -> f64 {
        truth + self.offset(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_sigma_is_truth() {
        let mut v = VelocitySensor::new(VelocityNoise::WhiteGaussian { sigma: 0.0 }, 1e-3, 7);
        assert_eq!(v.measure(0.3, 1.25, 0.0), (0.3, 1.25));
        let mut a = AccelSensor::new(AccelNoise::WhiteGaussian { sigma: 0.0 }, 7);
        assert_eq!(a.measure(-4.5, 0.0), -4.5);
    }

    #[test]
    fn encoder_mean_velocity() {
        let delta = 2.0 * PI / 4096.0;
        let t_s = 1e-3;
        let mut v = VelocitySensor::new(VelocityNoise::EncoderQuantization { delta }, t_s, 0);
        let n = 20_000;
        let mut readings = Vec::with_capacity(n);
        for k in 0..n {
            let t = k as f64 * t_s;
            readings.push(v.measure(t, 1.0, t).1);
        }
        // drop the first reading, which has no predecessor
        let body = &readings[1..];
        let mean = body.iter().sum::<f64>() / body.len() as f64;
        assert!((mean - 1.0).abs() < 1e-3, "mean = {mean}");
        for r in body {
            assert!((r - 1.0).abs() <= delta / t_s + 1e-9);
        }
    }

    #[test]
    fn gaussian_sample_sigma() {
        let mut a = AccelSensor::new(AccelNoise::WhiteGaussian { sigma: 0.1 }, 42);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| a.offset(0.0)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var.sqrt() - 0.1).abs() < 0.002);
    }

    #[test]
    fn bias_shifts_mean() {
        let mut a = AccelSensor::new(AccelNoise::GaussianWithBias { sigma: 0.05, bias: 0.5 }, 3);
        let n = 50_000;
        let mean = (0..n).map(|_| a.offset(0.0)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 2e-3);
    }

    #[test]
    fn seeded_streams_repeat() {
        let mut a = VelocitySensor::new(VelocityNoise::WhiteGaussian { sigma: 1.0 }, 1e-3, 9);
        let mut b = VelocitySensor::new(VelocityNoise::WhiteGaussian { sigma: 1.0 }, 1e-3, 9);
        for _ in 0..100 {
            assert_eq!(a.measure(0.0, 0.0, 0.0), b.measure(0.0, 0.0, 0.0));
        }
    }
}
