//! Central-difference partial derivatives used as fallbacks and as the
//! reference in consistency checks.

/// Step `1e-6 * max(1, |x|)`.
pub fn step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// Gradient of `f` at `x` by central differences.
pub fn gradient(f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|j| {
            let h = step(x[j]);
            xp[j] = x[j] + h;
            let fp = f(&xp);
            xp[j] = x[j] - h;
            let fm = f(&xp);
            xp[j] = x[j];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// Jacobian `rows x x.len()` of a vector function, row-major.
pub fn jacobian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], rows: usize) -> Vec<f64> {
    let cols = x.len();
    let mut out = vec![0.0; rows * cols];
    let mut xp = x.to_vec();
    for j in 0..cols {
        let h = step(x[j]);
        xp[j] = x[j] + h;
        let fp = f(&xp);
        xp[j] = x[j] - h;
        let fm = f(&xp);
        xp[j] = x[j];
        for i in 0..rows {
            out[i * cols + j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    out
}

/// `|a - b| / max(1, |b|)`.
pub fn rel_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
