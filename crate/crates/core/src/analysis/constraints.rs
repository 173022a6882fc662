use crate::models::{ObserverKind, PlantParams};

use super::AnalysisError;

/// Required peak bounds `max|S_v| ≤ 1/Γ_S` and `max|T_v| ≤ 1/Γ_T`.
///
/// `None` stands for the `0⁺` limit, i.e. an absent constraint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintSpec {
    pub gamma_s: Option<f64>,
    pub gamma_t: Option<f64>,
}

impl ConstraintSpec {
    pub fn new(gamma_s: Option<f64>, gamma_t: Option<f64>) -> Result<Self, AnalysisError> {
        for (name, g) in [("gamma_s", gamma_s), ("gamma_t", gamma_t)] {
            if let Some(v) = g {
                if !(v > 0.0 && v < 1.0) {
                    return Err(AnalysisError::InvalidParam { name, value: v });
                }
            }
        }
        Ok(Self { gamma_s, gamma_t })
    }
}

/// Largest `k = α g T_s` meeting both peak bounds for the velocity loop.
pub fn constraint_max_k(c: &ConstraintSpec) -> f64 {
    let from_s = 2.0 * (1.0 - c.gamma_s.unwrap_or(0.0));
    let from_t = 2.0 / (1.0 + c.gamma_t.unwrap_or(0.0));
    from_s.min(from_t)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandwidthLimits {
    pub k_max: f64,
    /// Largest observer bandwidth meeting the constraints, rad/s.
    pub g_max: f64,
    /// Above this bandwidth the velocity loop rings, rad/s.
    pub g_osc: f64,
    /// Above this bandwidth the velocity loop is unstable, rad/s.
    pub g_unstable: f64,
}

pub fn max_bandwidth(p: &PlantParams, c: &ConstraintSpec) -> Result<BandwidthLimits, AnalysisError> {
    p.validate()?;
    let scale = p.alpha() * p.t_s;
    let k_max = constraint_max_k(c);
    Ok(BandwidthLimits {
        k_max,
        g_max: k_max / scale,
        g_osc: 1.0 / scale,
        g_unstable: 2.0 / scale,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KClass {
    Monotone,
    Oscillatory,
    Marginal,
    Unstable,
}

/// Transient class of the inner loop at loop gain `k`.
///
/// The acceleration loop has its pole at `1/(1+k)` and is always monotone.
pub fn classify_k(kind: ObserverKind, k: f64) -> Result<KClass, AnalysisError> {
    if !(k.is_finite() && k > 0.0) {
        return Err(AnalysisError::InvalidParam { name: "k", value: k });
    }
    if kind == ObserverKind::Acceleration {
        return Ok(KClass::Monotone);
    }
    Ok(if (k - 2.0).abs() <= 1e-12 {
        KClass::Marginal
    } else if k <= 1.0 {
        KClass::Monotone
    } else if k < 2.0 {
        KClass::Oscillatory
    } else {
        KClass::Unstable
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_constraint_bounds() {
        let only_s = ConstraintSpec::new(Some(0.5), None).unwrap();
        assert_eq!(constraint_max_k(&only_s), 1.0);
        let only_t = ConstraintSpec::new(None, Some(0.5)).unwrap();
        assert!((constraint_max_k(&only_t) - 4.0 / 3.0).abs() < 1e-15);
        let both = ConstraintSpec::new(Some(0.5), Some(0.5)).unwrap();
        assert_eq!(constraint_max_k(&both), 1.0);
    }

    #[test]
    fn gamma_range_enforced() {
        assert!(ConstraintSpec::new(Some(1.0), None).is_err());
        assert!(ConstraintSpec::new(None, Some(0.0)).is_err());
        assert!(ConstraintSpec::new(Some(f64::NAN), None).is_err());
    }

    #[test]
    fn bandwidth_limits() {
        let p = PlantParams::nominal(0.01, 0.25, 1e-3).unwrap();
        let c = ConstraintSpec::new(Some(0.5), Some(1e-9)).unwrap();
        let b = max_bandwidth(&p, &c).unwrap();
        assert!((b.g_max - 1000.0).abs() < 1e-9);

        let p2 = p.with_alpha(2.0).unwrap();
        let b2 = max_bandwidth(&p2, &c).unwrap();
        assert!((b2.g_osc - 500.0).abs() < 1e-9);
        assert!((b2.g_unstable - 1000.0).abs() < 1e-9);

        let half = PlantParams { t_s: 5e-4, ..p };
        let bh = max_bandwidth(&half, &c).unwrap();
        assert!((bh.g_max - 2.0 * b.g_max).abs() < 1e-9);
        assert!((bh.g_osc - 2.0 * b.g_osc).abs() < 1e-9);
        assert!((bh.g_unstable - 2.0 * b.g_unstable).abs() < 1e-9);
    }

    #[test]
    fn classification() {
        use ObserverKind::*;
        assert_eq!(classify_k(Velocity, 0.75).unwrap(), KClass::Monotone);
        assert_eq!(classify_k(Velocity, 1.0).unwrap(), KClass::Monotone);
        assert_eq!(classify_k(Velocity, 1.5).unwrap(), KClass::Oscillatory);
        assert_eq!(classify_k(Velocity, 2.0).unwrap(), KClass::Marginal);
        assert_eq!(classify_k(Velocity, 2.5).unwrap(), KClass::Unstable);
        assert_eq!(classify_k(Acceleration, 250.0).unwrap(), KClass::Monotone);
        assert!(classify_k(Velocity, 0.0).is_err());
        assert!(classify_k(Acceleration, -1.0).is_err());
    }
}
