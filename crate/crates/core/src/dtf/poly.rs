use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DtfError;

/// Relative residual a root must meet: `|p(z*)| <= ROOT_RESIDUAL * max|coeff|`.
pub const ROOT_RESIDUAL: f64 = 1e-8;

/// Real polynomial in `z`, coefficients stored highest power first.
///
/// Leading zeros are stripped on construction, so the first coefficient is
/// nonzero unless the polynomial is identically zero (empty coefficient list).
#[derive(Clone, Debug, PartialEq)]
pub struct PolyZ {
    coeffs: Vec<f64>,
}

impl PolyZ {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        let lead = coeffs.iter().position(|&c| c != 0.0).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `z - root`
    pub fn linear(root: f64) -> Self {
        Self::new(vec![1.0, -root])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.first().copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (dst, c) in out[n - self.coeffs.len()..].iter_mut().zip(&self.coeffs) {
            *dst += c;
        }
        for (dst, c) in out[n - other.coeffs.len()..].iter_mut().zip(&other.coeffs) {
            *dst += c;
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Expands `prod (z - r_i)` over real roots.
    pub fn from_real_roots(roots: &[f64]) -> Self {
        roots
            .iter()
            .fold(Self::constant(1.0), |acc, &r| acc.mul(&Self::linear(r)))
    }

    /// All complex roots with multiplicity.
    ///
    /// Eigenvalues of the companion matrix, each refined by a guarded Newton
    /// step and then checked against [`ROOT_RESIDUAL`].
    pub fn roots(&self) -> Result<Vec<Complex64>, DtfError> {
        if self.is_zero() {
            return Err(DtfError::ZeroPolynomial);
        }
        let n = self.degree();
        if n == 0 {
            return Ok(Vec::new());
        }
        let lead = self.leading();
        let monic: Vec<f64> = self.coeffs.iter().map(|c| c / lead).collect();

        let roots: Vec<Complex64> = if n == 1 {
            vec![Complex64::new(-monic[1], 0.0)]
        } else {
            let mut companion = DMatrix::<f64>::zeros(n, n);
            for j in 0..n {
                companion[(0, j)] = -monic[j + 1];
            }
            for i in 1..n {
                companion[(i, i - 1)] = 1.0;
            }
            companion
                .complex_eigenvalues()
                .iter()
                .map(|&z| self.polish(z))
                .collect()
        };

        let tol = ROOT_RESIDUAL * self.max_abs_coeff();
        for z in &roots {
            let residual = self.eval(*z).norm();
            if residual > tol {
                return Err(DtfError::RootResidual {
                    root: *z,
                    residual,
                    tolerance: tol,
                });
            }
        }
        Ok(roots)
    }

    fn derivative(&self) -> Self {
        let n = self.degree();
        Self::new(
            self.coeffs
                .iter()
                .take(n)
                .enumerate()
                .map(|(i, c)| c * (n - i) as f64)
                .collect::<Vec<_>>(),
        )
    }

    // Newton steps are kept only while they shrink the residual; near
    // multiple roots the derivative vanishes and the eigenvalue is already
    // as good as it gets.
    fn polish(&self, mut z: Complex64) -> Complex64 {
        let d = self.derivative();
        let mut residual = self.eval(z).norm();
        for _ in 0..3 {
            let dp = d.eval(z);
            if dp.norm() == 0.0 {
                break;
            }
            let candidate = z - self.eval(z) / dp;
            let r = self.eval(candidate).norm();
            if !(r < residual) {
                break;
            }
            z = candidate;
            residual = r;
        }
        if z.im.abs() <= 1e-14 * z.norm().max(1.0) {
            z.im = 0.0;
        }
        z
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let power = n - i;
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match power {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}z")?,
                _ => write!(f, "{mag}z^{power}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn strips_leading_zeros() {
        let p = PolyZ::new(vec![0.0, 0.0, 2.0, 1.0]);
        assert_eq!(p.coeffs(), &[2.0, 1.0]);
        assert_eq!(p.degree(), 1);
        assert!(PolyZ::new(vec![0.0, 0.0]).is_zero());
    }

    #[test]
    fn horner_matches_power_sum() {
        let p = PolyZ::new(vec![2.0, -3.0, 0.5, 4.0]);
        let z = Complex64::new(0.3, -1.2);
        let direct = 2.0 * z.powi(3) - 3.0 * z.powi(2) + 0.5 * z + 4.0;
        assert_abs_diff_eq!((p.eval(z) - direct).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn linear_root() {
        let r = PolyZ::new(vec![1.0, -0.25]).roots().unwrap();
        assert_eq!(r.len(), 1);
        assert_abs_diff_eq!(r[0].re, 0.25, epsilon = 1e-15);
        assert_eq!(r[0].im, 0.0);
    }

    #[test]
    fn double_root_at_origin() {
        let r = PolyZ::new(vec![1.0, 0.0, 0.0]).roots().unwrap();
        assert_eq!(r.len(), 2);
        for z in r {
            assert!(z.norm() < 1e-12);
        }
    }

    #[test]
    fn double_root_from_expansion() {
        // (z - 0.95)^2 expanded independently.
        let p = PolyZ::from_real_roots(&[0.95, 0.95]);
        assert_abs_diff_eq!(p.coeffs()[1], -1.9, epsilon = 1e-15);
        assert_abs_diff_eq!(p.coeffs()[2], 0.9025, epsilon = 1e-15);
        let r = PolyZ::new(vec![1.0, -1.9, 0.9025]).roots().unwrap();
        for z in r {
            assert!((z - Complex64::new(0.95, 0.0)).norm() < 1e-6, "{z}");
        }
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(PolyZ::constant(3.0).roots().unwrap().is_empty());
        assert!(matches!(PolyZ::zero().roots(), Err(DtfError::ZeroPolynomial)));
    }

    #[test]
    fn complex_pair() {
        // z^2 + 1
        let mut r = PolyZ::new(vec![1.0, 0.0, 1.0]).roots().unwrap();
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert_abs_diff_eq!(r[0].im, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[1].im, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn display() {
        assert_eq!(PolyZ::new(vec![1.0, -0.25]).to_string(), "1z - 0.25");
        assert_eq!(PolyZ::zero().to_string(), "0");
    }
}
