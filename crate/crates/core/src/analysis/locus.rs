use num_complex::Complex64;

use crate::models::{build_position_charpoly_with, ObserverConfig, PlantParams, PositionIntegrator};

use super::AnalysisError;

#[derive(Clone, Debug, PartialEq)]
pub struct LocusPoint {
    pub alpha: f64,
    /// Descending magnitude, ties broken by ascending angle.
    pub roots: Vec<Complex64>,
    pub spectral_radius: f64,
}

pub fn spectral_radius(roots: &[Complex64]) -> f64 {
    roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
}

/// Magnitudes are compared on a 1e-12 lattice so conjugate pairs tie.
pub fn sort_roots(roots: &mut [Complex64]) {
    let key = |z: &Complex64| (z.norm() * 1e12).round();
    roots.sort_by(|a, b| {
        key(b)
            .total_cmp(&key(a))
            .then_with(|| a.arg().total_cmp(&b.arg()))
    });
}

pub fn root_locus(
    p: &PlantParams,
    obs: &ObserverConfig,
    k_p: f64,
    k_d: f64,
    alphas: &[f64],
) -> Result<Vec<LocusPoint>, AnalysisError> {
    root_locus_with(p, obs, k_p, k_d, alphas, PositionIntegrator::default())
}

/// Roots of the position-loop characteristic polynomial as `α` varies.
///
/// `α` is imposed by rescaling `J_mn`; `alphas` must be positive and
/// non-decreasing.
pub fn root_locus_with(
    p: &PlantParams,
    obs: &ObserverConfig,
    k_p: f64,
    k_d: f64,
    alphas: &[f64],
    integrator: PositionIntegrator,
) -> Result<Vec<LocusPoint>, AnalysisError> {
    for (i, &a) in alphas.iter().enumerate() {
        if !(a.is_finite() && a > 0.0) {
            return Err(AnalysisError::InvalidParam { name: "alpha", value: a });
        }
        if i > 0 && a < alphas[i - 1] {
            return Err(AnalysisError::InvalidParam { name: "alpha", value: a });
        }
    }
    alphas
        .iter()
        .map(|&alpha| {
            let pa = p.with_alpha(alpha)?;
            let poly = build_position_charpoly_with(&pa, obs, k_p, k_d, integrator)?;
            let mut roots = poly.roots()?;
            sort_roots(&mut roots);
            Ok(LocusPoint {
                alpha,
                spectral_radius: spectral_radius(&roots),
                roots,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ObserverKind;

    fn plant() -> PlantParams {
        PlantParams::nominal(0.01, 0.25, 1e-3).unwrap()
    }

    #[test]
    fn ordering_is_magnitude_then_angle() {
        let mut r = vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -0.9),
            Complex64::new(0.0, 0.9),
            Complex64::new(-0.95, 0.0),
        ];
        sort_roots(&mut r);
        assert_eq!(r[0], Complex64::new(-0.95, 0.0));
        assert_eq!(r[1], Complex64::new(0.0, -0.9));
        assert_eq!(r[2], Complex64::new(0.0, 0.9));
        assert_eq!(r[3], Complex64::new(0.5, 0.0));
    }

    #[test]
    fn single_alpha() {
        let obs = ObserverConfig::new(ObserverKind::Velocity, 750.0);
        let out = root_locus(&plant(), &obs, 2500.0, 125.0, &[1.0]).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].roots.len(), 3);
    }

    #[test]
    fn open_outer_loop_crosses_unit_circle_at_k_two() {
        // K_p = K_D = 0: roots {1, 1, 1 - α g T_s}; with g = 1000 the inner
        // root leaves the disk exactly where α crosses 2.
        let obs = ObserverConfig::new(ObserverKind::Velocity, 1000.0);
        let alphas = [1.0, 1.5, 1.9, 2.1, 2.5];
        let out = root_locus(&plant(), &obs, 0.0, 0.0, &alphas).unwrap();
        for pt in &out {
            let inner = (1.0 - pt.alpha).abs();
            let expected = inner.max(1.0);
            assert!((pt.spectral_radius - expected).abs() < 1e-6, "{pt:?}");
        }
        assert!(out[2].roots.iter().all(|r| r.norm() < 1.0 + 1e-6));
        assert!(out[3].roots.iter().any(|r| r.norm() > 1.05));
    }

    #[test]
    fn unsorted_alphas_rejected() {
        let obs = ObserverConfig::new(ObserverKind::Velocity, 750.0);
        assert!(root_locus(&plant(), &obs, 0.0, 0.0, &[2.0, 1.0]).is_err());
        assert!(root_locus(&plant(), &obs, 0.0, 0.0, &[0.0]).is_err());
    }
}
