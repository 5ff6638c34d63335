//! Damped Newton iteration with a forward-difference Jacobian and dense LU.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Sup-norm tolerance on the residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Halve the step until the residual norm decreases.
    pub damping: bool,
    /// Relative Jacobian step, scaled by `max(1, |x_j|)`.
    pub fd_step: f64,
    /// Smallest step fraction tried by the line search.
    pub min_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            damping: true,
            fd_step: 1e-7,
            min_step: 1.0 / (1u32 << 20) as f64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NewtonFailure {
    /// Zero pivot for the given unknown.
    Singular { unknown: usize },
    NonFinite,
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

/// Forward-difference Jacobian, one column per unknown, columns in parallel.
pub fn fd_jacobian<F>(residual: &F, x: &[f64], f0: &[f64], rel_step: f64) -> DMatrix<f64>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let m = f0.len();
    let cols: Vec<Vec<f64>> = (0..x.len())
        .into_par_iter()
        .map(|j| {
            let mut xp = x.to_vec();
            let step = rel_step * x[j].abs().max(1.0);
            xp[j] += step;
            let dx = xp[j] - x[j];
            let mut fp = vec![0.0; m];
            residual(&xp, &mut fp);
            fp.iter().zip(f0).map(|(a, b)| (a - b) / dx).collect()
        })
        .collect();
    DMatrix::from_fn(m, x.len(), |i, j| cols[j][i])
}

fn solve_dense(jac: DMatrix<f64>, rhs: &[f64]) -> Result<Vec<f64>, NewtonFailure> {
    let scale = jac.amax().max(f64::MIN_POSITIVE);
    let lu = jac.lu();
    let u = lu.u();
    for i in 0..u.nrows().min(u.ncols()) {
        let pivot = u[(i, i)];
        if !pivot.is_finite() {
            return Err(NewtonFailure::NonFinite);
        }
        if pivot.abs() <= 1e-14 * scale {
            return Err(NewtonFailure::Singular { unknown: i });
        }
    }
    let b = DVector::from_column_slice(rhs);
    lu.solve(&b)
        .map(|s| s.as_slice().to_vec())
        .ok_or(NewtonFailure::Singular { unknown: 0 })
}

/// Solves `F(x) = 0` for a square system. `residual` writes `F(x)` into
/// its second argument.
pub fn solve<F>(residual: F, x0: Vec<f64>, opts: &NewtonOptions) -> Result<NewtonOutcome, NewtonFailure>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let n = x0.len();
    let mut x = x0;
    let mut f = vec![0.0; n];
    residual(&x, &mut f);
    let mut norm = sup(&f);
    if !norm.is_finite() {
        return Err(NewtonFailure::NonFinite);
    }
    let mut iterations = 0;
    while norm > opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let jac = fd_jacobian(&residual, &x, &f, opts.fd_step);
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let delta = solve_dense(jac, &rhs)?;

        let mut step = 1.0;
        let mut trial = vec![0.0; n];
        let mut f_trial = vec![0.0; n];
        loop {
            for i in 0..n {
                trial[i] = x[i] + step * delta[i];
            }
            residual(&trial, &mut f_trial);
            let trial_norm = sup(&f_trial);
            if !opts.damping || trial_norm < norm {
                std::mem::swap(&mut x, &mut trial);
                std::mem::swap(&mut f, &mut f_trial);
                norm = trial_norm;
                break;
            }
            step *= 0.5;
            if step < opts.min_step {
                // Line search stalled; report what we have.
                return Ok(NewtonOutcome {
                    x,
                    residual_norm: norm,
                    iterations,
                    converged: false,
                });
            }
        }
        if !norm.is_finite() {
            return Err(NewtonFailure::NonFinite);
        }
    }
    Ok(NewtonOutcome {
        x,
        residual_norm: norm,
        iterations,
        converged: norm <= opts.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root() {
        let out = solve(|x, f| f[0] = x[0].powi(3) - 3.0, vec![1.0], &NewtonOptions::default()).unwrap();
        assert!(out.converged);
        assert!((out.x[0] - 3f64.powf(1.0 / 3.0)).abs() < 1e-9);
    }

    #[test]
    fn two_by_two_nonlinear() {
        let out = solve(
            |x, f| {
                f[0] = x[0] * x[0] + x[1] * x[1] - 4.0;
                f[1] = x[0] - x[1];
            },
            vec![1.0, 0.5],
            &NewtonOptions::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert!((out.x[0] - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn linear_system_one_step() {
        let out = solve(
            |x, f| {
                f[0] = 2.0 * x[0] + x[1] - 1.0;
                f[1] = x[0] - 3.0 * x[1] + 2.0;
            },
            vec![0.0, 0.0],
            &NewtonOptions::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert!(out.iterations <= 2);
    }

    #[test]
    fn singular_reports_unknown() {
        let err = solve(
            |x, f| {
                f[0] = x[0] - 1.0;
                f[1] = x[0] + 1.0;
            },
            vec![0.0, 0.0],
            &NewtonOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err, NewtonFailure::Singular { unknown: 1 });
    }

    #[test]
    fn max_iter_is_not_silent() {
        let opts = NewtonOptions {
            max_iter: 1,
            ..NewtonOptions::default()
        };
        let out = solve(|x, f| f[0] = x[0].exp() - 10.0, vec![0.0], &opts).unwrap();
        assert!(!out.converged);
        assert_eq!(out.iterations, 1);
    }
}
