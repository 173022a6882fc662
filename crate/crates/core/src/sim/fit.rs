use nalgebra::{Matrix3, Vector3};

/// Amplitude and phase of the component of `xs` at `theta` rad/sample.
///
/// Least-squares fit of `a sin(θk) + b cos(θk) + c` with `k` counted from
/// `k0`; the constant absorbs any offset left by transients.
pub fn fit_tone(xs: &[f64], theta: f64, k0: usize) -> (f64, f64) {
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    for (j, &x) in xs.iter().enumerate() {
        let arg = theta * (k0 + j) as f64;
        let row = Vector3::new(arg.sin(), arg.cos(), 1.0);
        ata += row * row.transpose();
        atb += row * x;
    }
    let coef = ata
        .lu()
        .solve(&atb)
        .unwrap_or_else(Vector3::zeros);
    let (a, b) = (coef[0], coef[1]);
    ((a * a + b * b).sqrt(), b.atan2(a))
}
