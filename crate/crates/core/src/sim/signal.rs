/// Time profile for references and disturbances. Zero before `start`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Signal {
    #[default]
    Zero,
    Step { amplitude: f64, start: f64 },
    Ramp { slope: f64, start: f64 },
    Sine {
        amplitude: f64,
        /// rad/s
        omega: f64,
        start: f64,
        /// rad
        phase: f64,
    },
}

impl Signal {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Signal::Zero => 0.0,
            Signal::Step { amplitude, start } => {
                if t >= start {
                    amplitude
                } else {
                    0.0
                }
            }
            Signal::Ramp { slope, start } => {
                if t >= start {
                    slope * (t - start)
                } else {
                    0.0
                }
            }
            Signal::Sine {
                amplitude,
                omega,
                start,
                phase,
            } => {
                if t >= start {
                    amplitude * (omega * (t - start) + phase).sin()
                } else {
                    0.0
                }
            }
        }
    }

    /// Limit from the left; differs from `value` only at a step edge.
    pub fn value_left(&self, t: f64) -> f64 {
        match *self {
            Signal::Step { amplitude, start } => {
                if t > start {
                    amplitude
                } else {
                    0.0
                }
            }
            Signal::Sine {
                amplitude,
                omega,
                start,
                phase,
            } => {
                if t > start {
                    amplitude * (omega * (t - start) + phase).sin()
                } else {
                    0.0
                }
            }
            _ => self.value(t),
        }
    }

    /// First derivative, impulses at step edges omitted.
    pub fn rate(&self, t: f64) -> f64 {
        match *self {
            Signal::Zero | Signal::Step { .. } => 0.0,
            Signal::Ramp { slope, start } => {
                if t >= start {
                    slope
                } else {
                    0.0
                }
            }
            Signal::Sine {
                amplitude,
                omega,
                start,
                phase,
            } => {
                if t >= start {
                    amplitude * omega * (omega * (t - start) + phase).cos()
                } else {
                    0.0
                }
            }
        }
    }

    /// Second derivative, impulses omitted.
    pub fn accel(&self, t: f64) -> f64 {
        match *self {
            Signal::Sine {
                amplitude,
                omega,
                start,
                phase,
            } => {
                if t >= start {
                    -amplitude * omega * omega * (omega * (t - start) + phase).sin()
                } else {
                    0.0
                }
            }
            _ => 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            Signal::Zero => true,
            Signal::Step { amplitude, start } => amplitude.is_finite() && start.is_finite(),
            Signal::Ramp { slope, start } => slope.is_finite() && start.is_finite(),
            Signal::Sine {
                amplitude,
                omega,
                start,
                phase,
            } => amplitude.is_finite() && omega.is_finite() && start.is_finite() && phase.is_finite(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_edges() {
        let s = Signal::Step {
            amplitude: 2.0,
            start: 0.1,
        };
        assert_eq!(s.value(0.1), 2.0);
        assert_eq!(s.value_left(0.1), 0.0);
        assert_eq!(s.value(0.0999), 0.0);
        assert_eq!(s.rate(0.2), 0.0);
    }

    #[test]
    fn ramp_and_sine_derivatives() {
        let r = Signal::Ramp {
            slope: 3.0,
            start: 1.0,
        };
        assert_eq!(r.value(2.0), 3.0);
        assert_eq!(r.rate(2.0), 3.0);
        assert_eq!(r.rate(0.5), 0.0);
        let s = Signal::Sine {
            amplitude: 2.0,
            omega: 5.0,
            start: 0.0,
            phase: 0.3,
        };
        let t = 0.7;
        let h = 1e-5;
        let fd = (s.value(t + h) - s.value(t - h)) / (2.0 * h);
        assert!((fd - s.rate(t)).abs() < 1e-6);
        let fd2 = (s.rate(t + h) - s.rate(t - h)) / (2.0 * h);
        assert!((fd2 - s.accel(t)).abs() < 1e-5);
    }
}
