use std::f64::consts::PI;

use crate::dtf::{RationalZ, STABILITY_BAND};

use super::AnalysisError;

/// Uniform grid intervals on `[0, π]` before local refinement.
pub const PEAK_GRID: usize = 4096;

const GOLDEN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeakGain {
    pub theta: f64,
    pub magnitude: f64,
}

/// Global maximum of `|r(e^{jθ})|` over `θ ∈ [0, π]`.
///
/// Dense grid, then golden-section refinement inside the bracket of every
/// interior grid maximum.
pub fn peak_gain(r: &RationalZ) -> Result<PeakGain, AnalysisError> {
    if r.den().degree() > 0 {
        for pole in r.poles()? {
            if (pole.norm() - 1.0).abs() < STABILITY_BAND {
                return Err(AnalysisError::PoleOnCircle { pole });
            }
        }
    }
    let mag = |theta: f64| -> Result<f64, AnalysisError> { Ok(r.freqresp(&[theta])?[0].norm()) };

    let thetas: Vec<f64> = (0..=PEAK_GRID)
        .map(|i| if i == PEAK_GRID { PI } else { PI * i as f64 / PEAK_GRID as f64 })
        .collect();
    let values = thetas.iter().map(|&t| mag(t)).collect::<Result<Vec<_>, _>>()?;

    let mut best = PeakGain {
        theta: thetas[0],
        magnitude: values[0],
    };
    if values[PEAK_GRID] > best.magnitude {
        best = PeakGain {
            theta: PI,
            magnitude: values[PEAK_GRID],
        };
    }
    for i in 1..PEAK_GRID {
        if values[i] >= values[i - 1] && values[i] >= values[i + 1] {
            let (theta, magnitude) = golden_max(&mag, thetas[i - 1], thetas[i + 1])?;
            let candidate = if magnitude >= values[i] {
                PeakGain { theta, magnitude }
            } else {
                PeakGain {
                    theta: thetas[i],
                    magnitude: values[i],
                }
            };
            if candidate.magnitude > best.magnitude {
                best = candidate;
            }
        }
    }
    Ok(best)
}

fn golden_max<F>(f: &F, mut a: f64, mut b: f64) -> Result<(f64, f64), AnalysisError>
where
    F: Fn(f64) -> Result<f64, AnalysisError>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > GOLDEN_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}
