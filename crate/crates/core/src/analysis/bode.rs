use std::f64::consts::PI;

use crate::dtf::{RationalZ, Stability};

use super::AnalysisError;

/// Minimum number of uniform quadrature intervals on `[0, π]`.
pub const MIN_INTERVALS: usize = 1 << 14;

/// Zeros of `S` closer than this to the unit circle get a graded grid.
const ZERO_ON_CIRCLE: f64 = 1e-6;

/// Geometric levels added next to each singular abscissa.
const GRADING_LEVELS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BodeReport {
    /// `∫_{-π}^{π} ln|S(e^{jθ})| dθ`.
    pub numeric_integral: f64,
    /// `-2π ln|1 + L(∞)|`.
    pub analytic_rhs: f64,
    pub abs_error: f64,
    /// Quadrature cells used on the half range `[0, π]`.
    pub grid_points: usize,
}

pub fn bode_integral(s: &RationalZ, l: &RationalZ) -> Result<BodeReport, AnalysisError> {
    bode_integral_with(s, l, MIN_INTERVALS)
}

/// Composite midpoint rule on `[0, π]`, doubled by conjugate symmetry.
///
/// `intervals` uniform cells (at least [`MIN_INTERVALS`]) plus a breakpoint at
/// every unit-circle zero of `S`; cells touching such a zero are split
/// geometrically toward it.
pub fn bode_integral_with(
    s: &RationalZ,
    l: &RationalZ,
    intervals: usize,
) -> Result<BodeReport, AnalysisError> {
    if s.stability()? != Stability::Stable {
        return Err(AnalysisError::UnstableSensitivity);
    }
    let l_inf = l.value_at_infinity().ok_or(AnalysisError::ImproperLoop)?;
    // Strictly proper loops give exactly zero (not -0).
    let analytic_rhs = if l_inf == 0.0 {
        0.0
    } else {
        -2.0 * PI * (1.0 + l_inf).abs().ln()
    };

    let n = intervals.max(MIN_INTERVALS);
    let singular = singular_angles(s)?;
    let mut edges: Vec<f64> = (0..=n).map(|i| PI * i as f64 / n as f64).collect();
    edges.extend(singular.iter().copied());
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|x, y| (*x - *y).abs() <= 1e-15);
    let log_mag = |theta: f64| s.freqresp(&[theta]).map(|v| v[0].norm().ln());

    let mut sum = 0.0;
    let mut cells = 0usize;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut pieces = vec![(a, b)];
        if singular.iter().any(|&t| (t - a).abs() <= 1e-15) {
            pieces = grade(pieces, true);
        }
        if singular.iter().any(|&t| (t - b).abs() <= 1e-15) {
            pieces = grade(pieces, false);
        }
        for (lo, hi) in pieces {
            sum += (hi - lo) * log_mag(0.5 * (lo + hi))?;
            cells += 1;
        }
    }
    let numeric_integral = 2.0 * sum;
    Ok(BodeReport {
        numeric_integral,
        analytic_rhs,
        abs_error: (numeric_integral - analytic_rhs).abs(),
        grid_points: cells,
    })
}

// Angles in [0, π] of the zeros of S lying on the unit circle.
fn singular_angles(s: &RationalZ) -> Result<Vec<f64>, AnalysisError> {
    if s.num().degree() == 0 {
        return Ok(Vec::new());
    }
    Ok(s.zeros()?
        .into_iter()
        .filter(|z| (z.norm() - 1.0).abs() < ZERO_ON_CIRCLE)
        .map(|z| {
            let t = z.arg().abs();
            if t < 1e-9 {
                0.0
            } else if PI - t < 1e-9 {
                PI
            } else {
                t
            }
        })
        .collect())
}

// Splits the first (toward_left) or last piece geometrically so that the
// cell adjacent to the singular edge shrinks by half per level.
fn grade(mut pieces: Vec<(f64, f64)>, toward_left: bool) -> Vec<(f64, f64)> {
    let idx = if toward_left { 0 } else { pieces.len() - 1 };
    let (a, b) = pieces.remove(idx);
    let mut graded = Vec::with_capacity(GRADING_LEVELS + 1);
    let width = b - a;
    if toward_left {
        let mut edge = b;
        for level in 1..=GRADING_LEVELS {
            let next = a + width * 0.5f64.powi(level as i32);
            graded.push((next, edge));
            edge = next;
        }
        graded.push((a, edge));
        graded.reverse();
    } else {
        let mut edge = a;
        for level in 1..=GRADING_LEVELS {
            let next = b - width * 0.5f64.powi(level as i32);
            graded.push((edge, next));
            edge = next;
        }
        graded.push((edge, b));
    }
    pieces.splice(idx..idx, graded);
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_acceleration_loop, build_velocity_loop, PlantParams};

    fn plant() -> PlantParams {
        PlantParams::nominal(0.01, 0.25, 1e-3).unwrap()
    }

    #[test]
    fn velocity_integral_vanishes() {
        for &k in &[0.25, 0.75, 1.5] {
            let set = build_velocity_loop(&plant(), k / 1e-3).unwrap();
            let r = bode_integral(&set.s, &set.l).unwrap();
            assert_eq!(r.analytic_rhs, 0.0);
            assert!(r.abs_error < 1e-2, "k = {k}: {r:?}");
        }
    }

    #[test]
    fn acceleration_integral_matches_log_term() {
        let set = build_acceleration_loop(&plant(), 750.0).unwrap();
        let r = bode_integral(&set.s, &set.l).unwrap();
        assert!((r.analytic_rhs - (-2.0 * PI * 1.75f64.ln())).abs() < 1e-12);
        assert!((r.analytic_rhs + 3.5160).abs() < 1e-3);
        assert!(r.abs_error < 1e-2, "{r:?}");
    }

    #[test]
    fn trivial_loop() {
        let r = bode_integral(&RationalZ::one(), &RationalZ::zero()).unwrap();
        assert_eq!(r.numeric_integral, 0.0);
        assert_eq!(r.analytic_rhs, 0.0);
        assert_eq!(r.abs_error, 0.0);
    }

    #[test]
    fn refinement_reduces_error() {
        let set = build_velocity_loop(&plant(), 750.0).unwrap();
        let coarse = bode_integral_with(&set.s, &set.l, MIN_INTERVALS).unwrap();
        let fine = bode_integral_with(&set.s, &set.l, 4 * MIN_INTERVALS).unwrap();
        assert!(fine.abs_error < coarse.abs_error);
        assert!(fine.grid_points > coarse.grid_points);
    }

    #[test]
    fn unstable_sensitivity_rejected() {
        let set = build_velocity_loop(&plant(), 2500.0).unwrap();
        assert_eq!(
            bode_integral(&set.s, &set.l).unwrap_err(),
            AnalysisError::UnstableSensitivity
        );
        let set = build_velocity_loop(&plant(), 2000.0).unwrap();
        assert!(bode_integral(&set.s, &set.l).is_err());
    }
}
