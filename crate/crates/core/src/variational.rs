//! Fractional calculus of variations: Euler-Lagrange residuals, the
//! conservation-law test and the Noether charge of an invariant functional
//! `I[q] = ∫ L(t, q, _aD_t^alpha q) dt`.

use std::sync::Arc;

use crate::charge::{
    check_charge, constant, field, invariance_report, ConservationReport, FactoredQuantity,
    Generator, InvarianceReport, Point, ScalarField, Trajectory, VectorGenerator,
};
use crate::error::{Error, Result};
use crate::finite_diff;
use crate::grid::{FracOrder, Grid, GridFn, Window};
use crate::newton::{self, NewtonFailure, NewtonOptions};
use crate::numerics::{left_rl_deriv, right_rl_deriv};

/// Lagrangian `L(t, q, d)` with `q, d` in `R^n`.
///
/// Partials default to central finite differences.
pub trait CvLagrangian: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, t: f64, q: &[f64], d: &[f64]) -> f64;

    /// `∂₂L`
    fn dl_dq(&self, t: f64, q: &[f64], d: &[f64]) -> Vec<f64> {
        finite_diff::gradient(|x| self.value(t, x, d), q)
    }

    /// `∂₃L`
    fn dl_dd(&self, t: f64, q: &[f64], d: &[f64]) -> Vec<f64> {
        finite_diff::gradient(|x| self.value(t, q, x), d)
    }

    /// Whether `dl_dq`/`dl_dd` are hand-written rather than the defaults.
    fn analytic_partials(&self) -> bool {
        false
    }
}

/// Generators `(tau(t, q), xi(t, q))` of `t -> t + eps tau`, `q -> q + eps xi`.
#[derive(Debug, Clone)]
pub struct CvSymmetry {
    pub tau: Generator,
    pub xi: VectorGenerator,
}

impl CvSymmetry {
    /// `tau = 1`, `xi = 0`.
    pub fn time_translation(dim: usize) -> Self {
        Self {
            tau: Generator::Constant(1.0),
            xi: VectorGenerator::zero(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            tau: Generator::Constant(0.0),
            xi: VectorGenerator::zero(dim),
        }
    }
}

fn check_dim(l: &dyn CvLagrangian, q: &GridFn) -> Result<()> {
    if l.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            got: q.dim(),
        });
    }
    Ok(())
}

/// `∂₂L(t, q, D q) + _tD_b^alpha ∂₃L(t, q, D q)` at every node.
pub fn el_residual(l: &dyn CvLagrangian, q: &GridFn, alpha: FracOrder) -> Result<GridFn> {
    check_dim(l, q)?;
    let grid = *q.grid();
    let n = q.dim();
    let d = left_rl_deriv(q, alpha)?;
    let mut dq = Vec::with_capacity(grid.len() * n);
    let mut dd = Vec::with_capacity(grid.len() * n);
    for k in 0..grid.len() {
        let t = grid.node(k);
        dq.extend(l.dl_dq(t, q.row(k), d.row(k)));
        dd.extend(l.dl_dd(t, q.row(k), d.row(k)));
    }
    let dq = GridFn::new(grid, n, dq)?;
    let dd = GridFn::new(grid, n, dd)?;
    dq.add(&right_rl_deriv(&dd, alpha)?)
}

/// Tests `D{C} = 0` along `q` on the interior window.
pub fn is_conservation_law(
    charge: &FactoredQuantity,
    q: &GridFn,
    alpha: FracOrder,
    tol: f64,
) -> Result<ConservationReport> {
    let traj = Trajectory::from_state(q.clone(), alpha)?;
    check_charge(charge, &traj, alpha, tol, q.grid().interior())
}

/// Noether charge `[L - alpha ∂₃L·D q] tau + ∂₃L·xi` as a sum of products.
///
/// The Lagrangian-derived factors come first in each pair.
pub fn noether_charge_cv(
    l: Arc<dyn CvLagrangian>,
    sym: &CvSymmetry,
    q: &GridFn,
    alpha: FracOrder,
) -> Result<FactoredQuantity> {
    check_dim(l.as_ref(), q)?;
    let a = alpha.value();
    let lag = l.clone();
    let bracket = field(move |pt: &Point| {
        let p3 = lag.dl_dd(pt.t, pt.q, pt.d);
        let dot: f64 = p3.iter().zip(pt.d).map(|(x, y)| x * y).sum();
        lag.value(pt.t, pt.q, pt.d) - a * dot
    });
    let mut pairs = vec![(bracket, sym.tau.to_field())];
    for j in 0..l.dim() {
        let lag = l.clone();
        let momentum: ScalarField = Arc::new(move |pt: &Point| lag.dl_dd(pt.t, pt.q, pt.d)[j]);
        pairs.push((momentum, sym.xi.component(j)));
    }
    FactoredQuantity::new(pairs)
}

/// Classical energy `-L + ∂₃L·d`, paired with the constant 1.
pub fn energy_charge(l: Arc<dyn CvLagrangian>) -> FactoredQuantity {
    let energy = field(move |pt: &Point| {
        let p3 = l.dl_dd(pt.t, pt.q, pt.d);
        let dot: f64 = p3.iter().zip(pt.d).map(|(x, y)| x * y).sum();
        dot - l.value(pt.t, pt.q, pt.d)
    });
    FactoredQuantity::new(vec![(energy, constant(1.0))]).expect("one pair")
}

/// Numeric invariance test of the functional under a time translation.
///
/// For each `eps` the state is moved to `q + eps xi` on the grid shifted by
/// `eps tau`, and `r(eps)` is the quadrature of `|L̄ - L|` over the interior
/// window. Only constant `tau` is supported.
pub fn invariance_check_cv(
    l: &dyn CvLagrangian,
    sym: &CvSymmetry,
    q: &GridFn,
    alpha: FracOrder,
    epsilons: &[f64],
) -> Result<InvarianceReport> {
    check_dim(l, q)?;
    let tau = sym.tau.as_constant().ok_or_else(|| {
        Error::UnsupportedTransformation("invariance check needs a constant tau".into())
    })?;
    let grid = *q.grid();
    let window = grid.interior();
    let traj = Trajectory::from_state(q.clone(), alpha)?;
    let base: Vec<f64> = (0..grid.len())
        .map(|k| {
            let pt = traj.point(k);
            l.value(pt.t, pt.q, pt.d)
        })
        .collect();
    let scale = window_quadrature(&grid, window, |k| base[k].abs());

    let n = q.dim();
    let xi: Vec<Vec<f64>> = (0..grid.len()).map(|k| sym.xi.eval(&traj.point(k))).collect();
    let mut residuals = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        if eps == 0.0 {
            residuals.push(0.0);
            continue;
        }
        let shifted = grid.shifted(eps * tau)?;
        let mut moved = Vec::with_capacity(grid.len() * n);
        for (k, g_k) in xi.iter().enumerate().take(grid.len()) {
            moved.extend(q.row(k).iter().zip(g_k).map(|(x, g)| x + eps * g));
        }
        let q_bar = GridFn::new(shifted, n, moved)?;
        let d_bar = left_rl_deriv(&q_bar, alpha)?;
        let r = window_quadrature(&grid, window, |k| {
            let transformed = l.value(shifted.node(k), q_bar.row(k), d_bar.row(k));
            (transformed - base[k]).abs()
        });
        residuals.push(r);
    }
    Ok(invariance_report(epsilons, residuals, scale))
}

/// Trapezoidal rule of `f(k)` over the nodes of `window`.
pub(crate) fn window_quadrature(grid: &Grid, window: Window, f: impl Fn(usize) -> f64) -> f64 {
    if window.hi == window.lo {
        return 0.0;
    }
    let inner: f64 = (window.lo + 1..window.hi).map(&f).sum();
    grid.h() * (0.5 * (f(window.lo) + f(window.hi)) + inner)
}

/// Result of a direct Euler-Lagrange solve.
#[derive(Debug, Clone)]
pub struct ElSolution {
    pub q: GridFn,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Solves the discrete fractional Euler-Lagrange equations at nodes
/// `1..N-1` with `q(a) = q_a`, `q(b) = q_b`, by Newton on `q_1..q_{N-1}`.
pub fn solve_euler_lagrange(
    l: &dyn CvLagrangian,
    grid: Grid,
    alpha: FracOrder,
    q_a: &[f64],
    q_b: &[f64],
    opts: &NewtonOptions,
) -> Result<ElSolution> {
    let n = l.dim();
    for bc in [q_a, q_b] {
        if bc.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bc.len(),
            });
        }
    }
    let big_n = grid.intervals();
    let assemble = |x: &[f64]| -> Vec<f64> {
        let mut v = Vec::with_capacity(grid.len() * n);
        v.extend_from_slice(q_a);
        v.extend_from_slice(x);
        v.extend_from_slice(q_b);
        v
    };
    let residual = |x: &[f64], out: &mut [f64]| {
        let q = GridFn::new(grid, n, assemble(x));
        match q.and_then(|q| el_residual(l, &q, alpha)) {
            Ok(r) => out.copy_from_slice(&r.values()[n..big_n * n]),
            Err(_) => out.fill(f64::NAN),
        }
    };
    let x0: Vec<f64> = (1..big_n)
        .flat_map(|k| {
            let s = k as f64 / big_n as f64;
            (0..n).map(move |j| (1.0 - s) * q_a[j] + s * q_b[j])
        })
        .collect();
    let out = newton::solve(residual, x0, opts).map_err(|e| match e {
        NewtonFailure::Singular { unknown } => Error::SingularJacobian {
            node: unknown / n + 1,
            unknown,
        },
        NewtonFailure::NonFinite => Error::NonFinite { node: 0 },
    })?;
    Ok(ElSolution {
        q: GridFn::new(grid, n, assemble(&out.x))?,
        residual_norm: out.residual_norm,
        iterations: out.iterations,
        converged: out.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Kinetic;
    impl CvLagrangian for Kinetic {
        fn dim(&self) -> usize {
            1
        }
        fn value(&self, _t: f64, _q: &[f64], d: &[f64]) -> f64 {
            0.5 * d[0] * d[0]
        }
        fn dl_dq(&self, _t: f64, _q: &[f64], _d: &[f64]) -> Vec<f64> {
            vec![0.0]
        }
        fn dl_dd(&self, _t: f64, _q: &[f64], d: &[f64]) -> Vec<f64> {
            vec![d[0]]
        }
        fn analytic_partials(&self) -> bool {
            true
        }
    }

    /// `L = c d`: residual is `_tD_b^alpha c`.
    struct LinearInVelocity(f64);
    impl CvLagrangian for LinearInVelocity {
        fn dim(&self) -> usize {
            1
        }
        fn value(&self, _t: f64, _q: &[f64], d: &[f64]) -> f64 {
            self.0 * d[0]
        }
    }

    struct TimeWeighted;
    impl CvLagrangian for TimeWeighted {
        fn dim(&self) -> usize {
            1
        }
        fn value(&self, t: f64, _q: &[f64], d: &[f64]) -> f64 {
            t * d[0] * d[0]
        }
    }

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn straight_line_is_classical_extremal() {
        let g = Grid::unit(128).unwrap();
        let q = GridFn::from_fn(g, |t| 0.5 + 2.0 * t).unwrap();
        let r = el_residual(&Kinetic, &q, FracOrder::one()).unwrap();
        assert!(r.sup_norm(g.interior()) <= 1e-9);
    }

    #[test]
    fn parabola_residual_is_minus_two() {
        let g = Grid::unit(200).unwrap();
        let q = GridFn::from_fn(g, |t| t * t).unwrap();
        let r = el_residual(&Kinetic, &q, FracOrder::one()).unwrap();
        for k in g.interior().range() {
            assert!((r.get(k, 0) + 2.0).abs() <= 10.0 * g.h());
        }
    }

    #[test]
    fn linear_in_velocity_matches_right_power_rule() {
        let g = Grid::unit(2048).unwrap();
        let c = 1.7;
        let q = GridFn::from_fn(g, |t| t.cos()).unwrap();
        let r = el_residual(&LinearInVelocity(c), &q, order(0.5)).unwrap();
        for k in g.interior().range() {
            let t = g.node(k);
            let exact = c * crate::numerics::power_rule_analytic_right(0.0, 0.5, 1.0, t).unwrap();
            assert!((r.get(k, 0) - exact).abs() <= 2e-2 * exact.abs(), "k={k}");
        }
    }

    #[test]
    fn dimension_mismatch() {
        let g = Grid::unit(8).unwrap();
        let q = GridFn::zeros(g, 2);
        assert!(matches!(
            el_residual(&Kinetic, &q, order(0.5)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn constant_factor_is_conserved_at_integer_order() {
        let g = Grid::unit(64).unwrap();
        let q = GridFn::from_fn(g, |t| t.sin()).unwrap();
        let c = FactoredQuantity::new(vec![(constant(1.0), constant(2.5))]).unwrap();
        let rep = is_conservation_law(&c, &q, FracOrder::one(), 1e-12).unwrap();
        assert!(rep.max_residual <= 1e-12 && rep.pass);
    }

    #[test]
    fn kinetic_charge_bracket() {
        // L - 0.5 ∂₃L d = d²/2 - d²/2 = 0 at alpha = 0.5, so the bracket vanishes.
        let g = Grid::unit(32).unwrap();
        let q = GridFn::from_fn(g, |t| t * t).unwrap();
        let alpha = order(0.5);
        let c = noether_charge_cv(Arc::new(Kinetic), &CvSymmetry::time_translation(1), &q, alpha).unwrap();
        let traj = Trajectory::from_state(q, alpha).unwrap();
        let (f, g_) = &c.evaluate(&traj).unwrap()[0];
        assert!(f.values().iter().all(|v| v.abs() < 1e-14));
        assert!(g_.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn zero_symmetry_zero_residual() {
        let g = Grid::unit(32).unwrap();
        let q = GridFn::from_fn(g, |t| t.exp()).unwrap();
        let c = noether_charge_cv(Arc::new(TimeWeighted), &CvSymmetry::zero(1), &q, order(0.7)).unwrap();
        let rep = is_conservation_law(&c, &q, order(0.7), 1e-14).unwrap();
        assert_eq!(rep.max_residual, 0.0);
    }

    #[test]
    fn autonomous_translation_is_exactly_invariant() {
        let g = Grid::unit(64).unwrap();
        let q = GridFn::from_fn(g, |t| t.sin() + 0.2).unwrap();
        let rep = invariance_check_cv(&Kinetic, &CvSymmetry::time_translation(1), &q, order(0.5), &[0.0, 1e-2, 5e-3, 2.5e-3])
            .unwrap();
        assert!(rep.exact && rep.invariant);
        assert_eq!(rep.residuals[0], 0.0);
    }

    #[test]
    fn time_weighted_is_not_invariant() {
        let g = Grid::unit(64).unwrap();
        let q = GridFn::from_fn(g, |t| t.sin() + 0.2).unwrap();
        let rep = invariance_check_cv(&TimeWeighted, &CvSymmetry::time_translation(1), &q, order(0.5), &[1e-2, 5e-3, 2.5e-3])
            .unwrap();
        assert!(!rep.invariant);
        assert!((rep.slope.unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn varying_tau_is_unsupported() {
        let g = Grid::unit(16).unwrap();
        let q = GridFn::zeros(g, 1);
        let sym = CvSymmetry {
            tau: Generator::Field(field(|pt| pt.t)),
            xi: VectorGenerator::zero(1),
        };
        assert!(matches!(
            invariance_check_cv(&Kinetic, &sym, &q, order(0.5), &[1e-2]),
            Err(Error::UnsupportedTransformation(_))
        ));
    }

    #[test]
    fn el_solve_straight_line() {
        let g = Grid::unit(32).unwrap();
        let sol = solve_euler_lagrange(&Kinetic, g, FracOrder::one(), &[0.0], &[1.0], &NewtonOptions::default()).unwrap();
        assert!(sol.converged);
        for k in 0..=32 {
            assert!((sol.q.get(k, 0) - g.node(k)).abs() < 1e-9);
        }
    }
}
