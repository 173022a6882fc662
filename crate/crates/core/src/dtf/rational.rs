use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use super::{DtfError, PolyZ};

/// Half-width of the band around the unit circle classified as marginal.
pub const STABILITY_BAND: f64 = 1e-9;

/// `|den(e^{jθ})|` below this is treated as a pole on the evaluation grid.
pub const POLE_ON_GRID: f64 = 1e-14;

/// Pole/zero pairs closer than this are reported by
/// [`RationalZ::near_cancellations`].
pub const NEAR_CANCELLATION: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Marginal,
    Unstable,
}

/// Rational function `num(z) / den(z)` with a monic denominator.
///
/// Common factors are never cancelled. Arithmetic is exact cross
/// multiplication, so a marginal integrator that happens to sit under a
/// matching zero stays visible in [`RationalZ::poles`].
#[derive(Clone, Debug, PartialEq)]
pub struct RationalZ {
    num: PolyZ,
    den: PolyZ,
}

impl RationalZ {
    /// Builds the canonical form, folding the denominator's leading
    /// coefficient into the numerator.
    pub fn new(num: PolyZ, den: PolyZ) -> Result<Self, DtfError> {
        if den.is_zero() {
            return Err(DtfError::ZeroDenominator);
        }
        let lead = den.leading();
        Ok(Self {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
        })
    }

    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self, DtfError> {
        Self::new(PolyZ::new(num.to_vec()), PolyZ::new(den.to_vec()))
    }

    pub fn constant(c: f64) -> Self {
        Self {
            num: PolyZ::constant(c),
            den: PolyZ::constant(1.0),
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn num(&self) -> &PolyZ {
        &self.num
    }

    pub fn den(&self) -> &PolyZ {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        // Product of monic polynomials is monic and nonzero.
        Self { num, den }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Unity negative feedback around `self` as open loop: returns
    /// `(S, T) = (1/(1+L), L/(1+L))`.
    pub fn feedback(&self) -> Result<(Self, Self), DtfError> {
        let closed = self.den.add(&self.num);
        if closed.is_zero() {
            return Err(DtfError::ZeroDenominator);
        }
        let s = Self::new(self.den.clone(), closed.clone())?;
        let t = Self::new(self.num.clone(), closed)?;
        Ok((s, t))
    }

    /// `lim_{z→∞}`; `None` for improper functions.
    pub fn value_at_infinity(&self) -> Option<f64> {
        if self.num.is_zero() {
            return Some(0.0);
        }
        match self.num.degree().cmp(&self.den.degree()) {
            std::cmp::Ordering::Less => Some(0.0),
            std::cmp::Ordering::Equal => Some(self.num.leading() / self.den.leading()),
            std::cmp::Ordering::Greater => None,
        }
    }

    pub fn poles(&self) -> Result<Vec<Complex64>, DtfError> {
        self.den.roots()
    }

    pub fn zeros(&self) -> Result<Vec<Complex64>, DtfError> {
        if self.num.is_zero() {
            return Ok(Vec::new());
        }
        self.num.roots()
    }

    pub fn stability(&self) -> Result<Stability, DtfError> {
        let radius = self
            .poles()?
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()));
        Ok(classify_radius(radius))
    }

    /// Evaluates at `e^{jθ}` for every θ.
    pub fn freqresp(&self, thetas: &[f64]) -> Result<Vec<Complex64>, DtfError> {
        thetas
            .iter()
            .map(|&theta| {
                let z = Complex64::from_polar(1.0, theta);
                let d = self.den.eval(z);
                if d.norm() < POLE_ON_GRID {
                    return Err(DtfError::PoleOnGrid { theta });
                }
                Ok(self.num.eval(z) / d)
            })
            .collect()
    }

    /// Pole/zero pairs closer than [`NEAR_CANCELLATION`]; reported, not removed.
    pub fn near_cancellations(&self) -> Result<Vec<(Complex64, Complex64)>, DtfError> {
        let poles = self.poles()?;
        let zeros = self.zeros()?;
        let mut pairs = Vec::new();
        for p in &poles {
            for z in &zeros {
                if (p - z).norm() < NEAR_CANCELLATION {
                    pairs.push((*p, *z));
                }
            }
        }
        Ok(pairs)
    }
}

pub(crate) fn classify_radius(radius: f64) -> Stability {
    if radius < 1.0 - STABILITY_BAND {
        Stability::Stable
    } else if radius <= 1.0 + STABILITY_BAND {
        Stability::Marginal
    } else {
        Stability::Unstable
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

impl fmt::Display for RationalZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Small deterministic point cloud inside the unit disk, away from z = 1.
    fn sample_points(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|i| {
                let r = 0.05 + 0.9 * ((i * 37 % 101) as f64 / 101.0);
                let a = 2.0 * PI * ((i * 53 % 97) as f64 / 97.0);
                Complex64::from_polar(r, a)
            })
            .collect()
    }

    #[test]
    fn identity_function() {
        let r = RationalZ::from_coeffs(&[1.0], &[1.0]).unwrap();
        assert_eq!(r.eval(c(0.3, 0.7)), c(1.0, 0.0));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            RationalZ::from_coeffs(&[1.0], &[0.0, 0.0]),
            Err(DtfError::ZeroDenominator)
        ));
    }

    #[test]
    fn canonical_den_is_monic() {
        let r = RationalZ::from_coeffs(&[2.0, 0.0], &[1.0, -1.0]).unwrap();
        assert_eq!(r.den().coeffs(), &[1.0, -1.0]);
        assert_eq!(r.num().coeffs(), &[2.0, 0.0]);

        let r = RationalZ::from_coeffs(&[1.0], &[4.0, -2.0]).unwrap();
        assert_eq!(r.den().coeffs(), &[1.0, -0.5]);
        assert_eq!(r.num().coeffs(), &[0.25]);
    }

    #[test]
    fn construction_matches_pointwise_ratio() {
        let n = PolyZ::new(vec![1.0, -1.0]);
        let d = PolyZ::new(vec![1.0, -0.25]);
        let r = RationalZ::new(n.clone(), d.clone()).unwrap();
        for z in sample_points(10) {
            let direct = n.eval(z) / d.eval(z);
            assert_abs_diff_eq!((r.eval(z) - direct).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn feedback_of_integrator_loop() {
        // L = 0.75 / (z - 1)
        let l = RationalZ::from_coeffs(&[0.75], &[1.0, -1.0]).unwrap();
        let (s, t) = l.feedback().unwrap();
        assert_eq!(s.num().coeffs(), &[1.0, -1.0]);
        assert_eq!(s.den().coeffs(), &[1.0, -0.25]);
        assert_eq!(t.num().coeffs(), &[0.75]);
        assert_eq!(t.den().coeffs(), &[1.0, -0.25]);
        for z in sample_points(100) {
            assert_abs_diff_eq!((s.eval(z) + t.eval(z) - 1.0).norm(), 0.0, epsilon = 1e-10);
            // brute-force closed loop
            let lz = l.eval(z);
            assert_abs_diff_eq!((s.eval(z) - 1.0 / (1.0 + lz)).norm(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn feedback_of_zero_loop() {
        let (s, t) = RationalZ::zero().feedback().unwrap();
        assert_eq!(s.eval(c(0.2, 0.1)), c(1.0, 0.0));
        assert!(t.is_zero());
    }

    #[test]
    fn feedback_singular() {
        assert!(matches!(
            RationalZ::constant(-1.0).feedback(),
            Err(DtfError::ZeroDenominator)
        ));
    }

    #[test]
    fn feedback_relative_degree_zero_loop() {
        // L = 0.75 z / (z - 1); by hand: S = (z - 1) / (1.75 z - 1),
        // T = 0.75 z / (1.75 z - 1).
        let l = RationalZ::from_coeffs(&[0.75, 0.0], &[1.0, -1.0]).unwrap();
        let (s, t) = l.feedback().unwrap();
        let poles = s.poles().unwrap();
        assert_abs_diff_eq!(poles[0].re, 1.0 / 1.75, epsilon = 1e-15);
        for z in sample_points(16) {
            let hand_s = (z - 1.0) / (1.75 * z - 1.0);
            let hand_t = 0.75 * z / (1.75 * z - 1.0);
            assert_abs_diff_eq!((s.eval(z) - hand_s).norm(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!((t.eval(z) - hand_t).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn add_and_mul_pointwise() {
        let a = RationalZ::from_coeffs(&[1.0, 0.5], &[1.0, -0.3]).unwrap();
        let b = RationalZ::from_coeffs(&[2.0], &[1.0, 0.1, 0.2]).unwrap();
        for z in sample_points(20) {
            let sum = a.add(&b).eval(z);
            let prod = a.mul(&b).eval(z);
            assert_abs_diff_eq!((sum - (a.eval(z) + b.eval(z))).norm(), 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!((prod - a.eval(z) * b.eval(z)).norm(), 0.0, epsilon = 1e-10);
        }
        // no cancellation: (z-1)/(z-1) keeps its pole
        let r = RationalZ::from_coeffs(&[1.0, -1.0], &[1.0, -1.0]).unwrap();
        assert_eq!(r.poles().unwrap().len(), 1);
        assert_eq!(r.near_cancellations().unwrap().len(), 1);
    }

    #[test]
    fn stability_verdicts() {
        let stable = RationalZ::from_coeffs(&[1.0], &[1.0, -0.25]).unwrap();
        let unstable = RationalZ::from_coeffs(&[1.0], &[1.0, 1.5]).unwrap();
        let marginal = RationalZ::from_coeffs(&[1.0], &[1.0, -1.0]).unwrap();
        let boundary = RationalZ::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(stable.stability().unwrap(), Stability::Stable);
        assert_eq!(unstable.stability().unwrap(), Stability::Unstable);
        assert_eq!(marginal.stability().unwrap(), Stability::Marginal);
        assert_eq!(boundary.stability().unwrap(), Stability::Marginal);
        assert_eq!(RationalZ::one().stability().unwrap(), Stability::Stable);
    }

    #[test]
    fn freqresp_dc_and_nyquist() {
        let s = RationalZ::from_coeffs(&[1.0, -1.0], &[1.0, -0.25]).unwrap();
        let t = RationalZ::from_coeffs(&[0.75], &[1.0, -0.25]).unwrap();
        let v = s.freqresp(&[PI]).unwrap();
        assert_abs_diff_eq!(v[0].norm(), 1.6, epsilon = 1e-12);
        let v = t.freqresp(&[0.0]).unwrap();
        assert_eq!(v[0], c(1.0, 0.0));
        let q = RationalZ::from_coeffs(&[2.0, 1.0], &[1.0, 0.5]).unwrap();
        assert_abs_diff_eq!(q.freqresp(&[0.0]).unwrap()[0].re, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn freqresp_rejects_pole_on_grid() {
        let integ = RationalZ::from_coeffs(&[1.0], &[1.0, -1.0]).unwrap();
        assert!(matches!(
            integ.freqresp(&[0.5, 0.0]),
            Err(DtfError::PoleOnGrid { .. })
        ));
    }

    #[test]
    fn value_at_infinity() {
        let strictly = RationalZ::from_coeffs(&[0.75], &[1.0, -1.0]).unwrap();
        let biproper = RationalZ::from_coeffs(&[0.75, 0.0], &[1.0, -1.0]).unwrap();
        let improper = RationalZ::from_coeffs(&[1.0, 0.0, 0.0], &[1.0, -1.0]).unwrap();
        assert_eq!(strictly.value_at_infinity(), Some(0.0));
        assert_eq!(biproper.value_at_infinity(), Some(0.75));
        assert_eq!(improper.value_at_infinity(), None);
    }

    #[test]
    fn wrap() {
        assert_abs_diff_eq!(wrap_angle(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_angle(PI), PI, epsilon = 1e-15);
    }
}
