//! Fractional optimal control: Hamiltonian, Pontryagin residuals, a fully
//! coupled Newton solver for extremals, and the Noether charge
//! `[H - (1 - alpha) p·D q] tau - p·xi` with its conservation check.
//!
//! Problem: minimize `∫ L(t, q, u) dt` subject to `_aD_t^alpha q = phi(t, q, u)`,
//! `q(a) = q_a`, optionally `q(b) = q_b`. Controls are unconstrained.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::charge::{
    check_charge, field, invariance_report, ConservationReport, FactoredQuantity, Generator,
    InvarianceReport, Point, ScalarField, Trajectory, VectorGenerator,
};
use crate::error::{Error, Result};
use crate::finite_diff;
use crate::grid::{FracOrder, Grid, GridFn};
use crate::newton::{self, NewtonFailure, NewtonOptions};
use crate::numerics::{left_rl_deriv, right_rl_deriv};
use crate::variational::window_quadrature;

/// An optimal control problem with state dimension `n` and control
/// dimension `m`. Partials default to central finite differences.
pub trait OcProblem: Send + Sync {
    fn state_dim(&self) -> usize;
    fn control_dim(&self) -> usize;

    fn lagrangian(&self, t: f64, q: &[f64], u: &[f64]) -> f64;

    /// Fractional velocity `phi(t, q, u)`, an `n`-vector.
    fn dynamics(&self, t: f64, q: &[f64], u: &[f64]) -> Vec<f64>;

    fn dl_dq(&self, t: f64, q: &[f64], u: &[f64]) -> Vec<f64> {
        finite_diff::gradient(|x| self.lagrangian(t, x, u), q)
    }

    fn dl_du(&self, t: f64, q: &[f64], u: &[f64]) -> Vec<f64> {
        finite_diff::gradient(|x| self.lagrangian(t, q, x), u)
    }

    /// `n x n`
    fn dphi_dq(&self, t: f64, q: &[f64], u: &[f64]) -> DMatrix<f64> {
        let n = self.state_dim();
        let j = finite_diff::jacobian(|x| self.dynamics(t, x, u), q, n);
        DMatrix::from_row_slice(n, n, &j)
    }

    /// `n x m`
    fn dphi_du(&self, t: f64, q: &[f64], u: &[f64]) -> DMatrix<f64> {
        let (n, m) = (self.state_dim(), self.control_dim());
        let j = finite_diff::jacobian(|x| self.dynamics(t, q, x), u, n);
        DMatrix::from_row_slice(n, m, &j)
    }

    fn initial_state(&self) -> Vec<f64>;

    /// Fixed terminal state, or `None` for a free endpoint (`p(b) = 0`).
    fn terminal_state(&self) -> Option<Vec<f64>> {
        None
    }

    /// Optional starting iterate `(q, u, p)` for the solver.
    fn warm_start(&self, _grid: &Grid) -> Option<(GridFn, GridFn, GridFn)> {
        None
    }
}

/// `H(t, q, u, p) = L(t, q, u) + p·phi(t, q, u)` and its partials.
pub struct Hamiltonian<'a> {
    problem: &'a dyn OcProblem,
}

impl<'a> Hamiltonian<'a> {
    pub fn new(problem: &'a dyn OcProblem) -> Self {
        Self { problem }
    }

    fn check(&self, q: &[f64], u: &[f64], p: &[f64]) -> Result<()> {
        let (n, m) = (self.problem.state_dim(), self.problem.control_dim());
        for (len, want) in [(q.len(), n), (u.len(), m), (p.len(), n)] {
            if len != want {
                return Err(Error::DimensionMismatch {
                    expected: want,
                    got: len,
                });
            }
        }
        Ok(())
    }

    pub fn value(&self, t: f64, q: &[f64], u: &[f64], p: &[f64]) -> Result<f64> {
        self.check(q, u, p)?;
        Ok(self.value_unchecked(t, q, u, p))
    }

    fn value_unchecked(&self, t: f64, q: &[f64], u: &[f64], p: &[f64]) -> f64 {
        let phi = self.problem.dynamics(t, q, u);
        self.problem.lagrangian(t, q, u) + dot(p, &phi)
    }

    /// `∂₂H = ∂₂L + pᵀ ∂₂phi`
    pub fn dq(&self, t: f64, q: &[f64], u: &[f64], p: &[f64]) -> Result<Vec<f64>> {
        self.check(q, u, p)?;
        Ok(self.dq_unchecked(t, q, u, p))
    }

    fn dq_unchecked(&self, t: f64, q: &[f64], u: &[f64], p: &[f64]) -> Vec<f64> {
        let mut g = self.problem.dl_dq(t, q, u);
        let j = self.problem.dphi_dq(t, q, u);
        for (c, gc) in g.iter_mut().enumerate() {
            *gc += (0..p.len()).map(|r| p[r] * j[(r, c)]).sum::<f64>();
        }
        g
    }

    /// `∂₃H = ∂₃L + pᵀ ∂₃phi`
    pub fn du(&self, t: f64, q: &[f64], u: &[f64], p: &[f64]) -> Result<Vec<f64>> {
        self.check(q, u, p)?;
        Ok(self.du_unchecked(t, q, u, p))
    }

    fn du_unchecked(&self, t: f64, q: &[f64], u: &[f64], p: &[f64]) -> Vec<f64> {
        let mut g = self.problem.dl_du(t, q, u);
        let j = self.problem.dphi_du(t, q, u);
        for (c, gc) in g.iter_mut().enumerate() {
            *gc += (0..p.len()).map(|r| p[r] * j[(r, c)]).sum::<f64>();
        }
        g
    }

    /// `∂₄H = phi`
    pub fn dp(&self, t: f64, q: &[f64], u: &[f64], p: &[f64]) -> Result<Vec<f64>> {
        self.check(q, u, p)?;
        Ok(self.problem.dynamics(t, q, u))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `H = L + p·phi` at one point.
pub fn hamiltonian(problem: &dyn OcProblem, t: f64, q: &[f64], u: &[f64], p: &[f64]) -> Result<f64> {
    Hamiltonian::new(problem).value(t, q, u, p)
}

/// Nodewise residuals of the fractional Hamiltonian system and the
/// stationarity condition.
#[derive(Debug, Clone)]
pub struct PontryaginResiduals {
    /// `_aD_t^alpha q - ∂₄H`
    pub dynamics: GridFn,
    /// `_tD_b^alpha p - ∂₂H`
    pub adjoint: GridFn,
    /// `∂₃H`
    pub stationarity: GridFn,
}

pub fn pontryagin_residual(
    problem: &dyn OcProblem,
    q: &GridFn,
    u: &GridFn,
    p: &GridFn,
    alpha: FracOrder,
) -> Result<PontryaginResiduals> {
    let (n, m) = (problem.state_dim(), problem.control_dim());
    let grid = *q.grid();
    if *u.grid() != grid || *p.grid() != grid {
        return Err(Error::GridMismatch);
    }
    for (got, want) in [(q.dim(), n), (u.dim(), m), (p.dim(), n)] {
        if got != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                got,
            });
        }
    }
    let ham = Hamiltonian::new(problem);
    let dq = left_rl_deriv(q, alpha)?;
    let dp = right_rl_deriv(p, alpha)?;
    let mut r_dyn = Vec::with_capacity(grid.len() * n);
    let mut r_adj = Vec::with_capacity(grid.len() * n);
    let mut r_stat = Vec::with_capacity(grid.len() * m);
    for k in 0..grid.len() {
        let (t, qk, uk, pk) = (grid.node(k), q.row(k), u.row(k), p.row(k));
        let phi = problem.dynamics(t, qk, uk);
        r_dyn.extend(dq.row(k).iter().zip(&phi).map(|(a, b)| a - b));
        let hq = ham.dq_unchecked(t, qk, uk, pk);
        r_adj.extend(dp.row(k).iter().zip(&hq).map(|(a, b)| a - b));
        r_stat.extend(ham.du_unchecked(t, qk, uk, pk));
    }
    Ok(PontryaginResiduals {
        dynamics: GridFn::new(grid, n, r_dyn)?,
        adjoint: GridFn::new(grid, n, r_adj)?,
        stationarity: GridFn::new(grid, m, r_stat)?,
    })
}

/// Interior-window sup-norms of the three residual families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualNorms {
    pub dynamics: f64,
    pub adjoint: f64,
    pub stationarity: f64,
}

/// A discrete fractional Pontryagin extremal.
#[derive(Debug, Clone)]
pub struct Extremal {
    pub q: GridFn,
    pub u: GridFn,
    pub p: GridFn,
    pub residuals: ResidualNorms,
    /// Sup-norm of the full stacked system at exit.
    pub system_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl Extremal {
    pub fn grid(&self) -> &Grid {
        self.q.grid()
    }

    pub fn trajectory(&self, alpha: FracOrder) -> Result<Trajectory> {
        Trajectory::new(self.q.clone(), self.u.clone(), self.p.clone(), alpha)
    }

    pub fn require_converged(&self) -> Result<()> {
        if self.converged {
            Ok(())
        } else {
            Err(Error::NotConverged {
                iterations: self.iterations,
                residual: self.system_residual,
            })
        }
    }

    /// Rows `t, q..., u..., p...` with a one-line header.
    pub fn to_csv(&self) -> String {
        let mut header = vec!["t".to_string()];
        header.extend((0..self.q.dim()).map(|j| format!("q{j}")));
        header.extend((0..self.u.dim()).map(|j| format!("u{j}")));
        header.extend((0..self.p.dim()).map(|j| format!("p{j}")));
        let stacked = GridFn::stack(&[self.q.clone(), self.u.clone(), self.p.clone()])
            .expect("extremal components share a grid");
        let body = stacked.to_csv();
        let mut out = header.join(",");
        out.push('\n');
        out.push_str(body.split_once('\n').map_or("", |(_, rest)| rest));
        out
    }
}

/// Layout of the stacked unknown vector
/// `[q_1..q_N (or q_{N-1}), u_0..u_N, p_0..p_{N-1} (or p_N)]`.
struct Layout {
    n: usize,
    m: usize,
    intervals: usize,
    q_a: Vec<f64>,
    q_b: Option<Vec<f64>>,
}

impl Layout {
    fn q_free(&self) -> usize {
        match self.q_b {
            Some(_) => self.intervals - 1,
            None => self.intervals,
        }
    }

    fn p_free(&self) -> usize {
        match self.q_b {
            Some(_) => self.intervals + 1,
            None => self.intervals,
        }
    }

    fn len(&self) -> usize {
        (self.q_free() + self.p_free()) * self.n + (self.intervals + 1) * self.m
    }

    fn u_offset(&self) -> usize {
        self.q_free() * self.n
    }

    fn p_offset(&self) -> usize {
        self.u_offset() + (self.intervals + 1) * self.m
    }

    fn unpack(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let (n, nodes) = (self.n, self.intervals + 1);
        let mut q = Vec::with_capacity(nodes * n);
        q.extend_from_slice(&self.q_a);
        q.extend_from_slice(&x[..self.u_offset()]);
        if let Some(qb) = &self.q_b {
            q.extend_from_slice(qb);
        }
        let u = x[self.u_offset()..self.p_offset()].to_vec();
        let mut p = x[self.p_offset()..].to_vec();
        if self.q_b.is_none() {
            p.extend(std::iter::repeat_n(0.0, n));
        }
        (q, u, p)
    }

    fn pack(&self, q: &GridFn, u: &GridFn, p: &GridFn) -> Vec<f64> {
        let n = self.n;
        let mut x = Vec::with_capacity(self.len());
        x.extend_from_slice(&q.values()[n..(1 + self.q_free()) * n]);
        x.extend_from_slice(u.values());
        x.extend_from_slice(&p.values()[..self.p_free() * n]);
        x
    }

    /// Grid node an unknown belongs to.
    fn node_of(&self, unknown: usize) -> usize {
        if unknown < self.u_offset() {
            unknown / self.n + 1
        } else if unknown < self.p_offset() {
            (unknown - self.u_offset()) / self.m
        } else {
            (unknown - self.p_offset()) / self.n
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            damping: true,
        }
    }
}

/// Solves the discrete Pontryagin system by damped Newton on all unknowns.
///
/// Equations: dynamics at nodes `1..=N` (with `q_0 = q_a`), adjoint at
/// nodes `0..N`, stationarity at every node. A free endpoint closes the
/// adjoint with `p_N = 0`; a fixed one pins `q_N = q_b` and leaves `p_N`
/// unknown. Non-convergence is reported through `Extremal::converged`.
pub fn solve_extremal(
    problem: &dyn OcProblem,
    alpha: FracOrder,
    grid: Grid,
    opts: &SolveOptions,
) -> Result<Extremal> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {}", opts.tol)));
    }
    let (n, m) = (problem.state_dim(), problem.control_dim());
    let q_a = problem.initial_state();
    if q_a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: q_a.len(),
        });
    }
    let q_b = problem.terminal_state();
    if let Some(qb) = &q_b {
        if qb.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: qb.len(),
            });
        }
    }
    let layout = Layout {
        n,
        m,
        intervals: grid.intervals(),
        q_a: q_a.clone(),
        q_b,
    };
    let big_n = grid.intervals();

    let residual = |x: &[f64], out: &mut [f64]| {
        let (q, u, p) = layout.unpack(x);
        let fns = GridFn::new(grid, n, q).and_then(|q| {
            let u = GridFn::new(grid, m, u)?;
            let p = GridFn::new(grid, n, p)?;
            pontryagin_residual(problem, &q, &u, &p, alpha)
        });
        match fns {
            Ok(r) => {
                let dyn_part = &r.dynamics.values()[n..];
                let adj_part = &r.adjoint.values()[..big_n * n];
                let stat_part = r.stationarity.values();
                let mut i = 0;
                for part in [dyn_part, adj_part, stat_part] {
                    out[i..i + part.len()].copy_from_slice(part);
                    i += part.len();
                }
            }
            Err(_) => out.fill(f64::NAN),
        }
    };

    let x0 = match problem.warm_start(&grid) {
        Some((q, u, p)) => layout.pack(&q, &u, &p),
        None => {
            let q = GridFn::from_vec_fn(grid, n, |_, row| row.copy_from_slice(&q_a))?;
            let q = match &layout.q_b {
                Some(qb) => {
                    let mut v = q.into_values();
                    let len = v.len();
                    v[len - n..].copy_from_slice(qb);
                    GridFn::new(grid, n, v)?
                }
                None => q,
            };
            layout.pack(&q, &GridFn::zeros(grid, m), &GridFn::zeros(grid, n))
        }
    };
    debug_assert_eq!(x0.len(), layout.len());

    let newton_opts = NewtonOptions {
        tol: opts.tol,
        max_iter: opts.max_iter,
        damping: opts.damping,
        ..NewtonOptions::default()
    };
    let out = newton::solve(residual, x0, &newton_opts).map_err(|e| match e {
        NewtonFailure::Singular { unknown } => Error::SingularJacobian {
            node: layout.node_of(unknown),
            unknown,
        },
        NewtonFailure::NonFinite => Error::NonFinite { node: 0 },
    })?;

    let (q, u, p) = layout.unpack(&out.x);
    let q = GridFn::new(grid, n, q)?;
    let u = GridFn::new(grid, m, u)?;
    let p = GridFn::new(grid, n, p)?;
    let r = pontryagin_residual(problem, &q, &u, &p, alpha)?;
    let window = grid.interior();
    Ok(Extremal {
        residuals: ResidualNorms {
            dynamics: r.dynamics.sup_norm(window),
            adjoint: r.adjoint.sup_norm(window),
            stationarity: r.stationarity.sup_norm(window),
        },
        q,
        u,
        p,
        system_residual: out.residual_norm,
        iterations: out.iterations,
        converged: out.converged,
    })
}

/// Generators of `(t, q, u, p) -> (t + eps tau, q + eps xi, u + eps sigma,
/// p + eps zeta)`. Only `tau` and `xi` enter the charge.
#[derive(Debug, Clone)]
pub struct OcSymmetry {
    pub tau: Generator,
    pub xi: VectorGenerator,
    pub sigma: VectorGenerator,
    pub zeta: VectorGenerator,
}

impl OcSymmetry {
    /// `tau = 1`, everything else zero.
    pub fn time_translation(n: usize, m: usize) -> Self {
        Self {
            tau: Generator::Constant(1.0),
            xi: VectorGenerator::zero(n),
            sigma: VectorGenerator::zero(m),
            zeta: VectorGenerator::zero(n),
        }
    }

    pub fn zero(n: usize, m: usize) -> Self {
        Self {
            tau: Generator::Constant(0.0),
            ..Self::time_translation(n, m)
        }
    }
}

/// `[H - (1 - alpha) p·D q] tau - p·xi`, as `n + 1` scalar pairs.
pub fn noether_charge_oc(
    problem: Arc<dyn OcProblem>,
    sym: &OcSymmetry,
    extremal: &Extremal,
    alpha: FracOrder,
) -> Result<FactoredQuantity> {
    let n = problem.state_dim();
    if extremal.q.dim() != n || extremal.p.dim() != n || extremal.u.dim() != problem.control_dim() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: extremal.q.dim(),
        });
    }
    let weight = 1.0 - alpha.value();
    let bracket = field(move |pt: &Point| {
        let h = Hamiltonian::new(problem.as_ref()).value_unchecked(pt.t, pt.q, pt.u, pt.p);
        h - weight * dot(pt.p, pt.d)
    });
    let mut pairs = vec![(bracket, sym.tau.to_field())];
    for j in 0..n {
        let minus_p: ScalarField = Arc::new(move |pt: &Point| -pt.p[j]);
        pairs.push((minus_p, sym.xi.component(j)));
    }
    FactoredQuantity::new(pairs)
}

/// Conservation check of a charge along a converged extremal.
///
/// At `alpha = 1` the charge spread must also be within `tol`.
pub fn conservation_check_oc(
    charge: &FactoredQuantity,
    extremal: &Extremal,
    alpha: FracOrder,
    tol: f64,
) -> Result<ConservationReport> {
    if !extremal.converged {
        return Err(Error::Unconverged);
    }
    let traj = extremal.trajectory(alpha)?;
    let mut report = check_charge(charge, &traj, alpha, tol, extremal.grid().interior())?;
    if alpha.is_integer() {
        report.pass = report.pass && report.charge_spread <= tol;
    }
    Ok(report)
}

/// Numeric invariance test of the augmented integrand `H - p·D q` under a
/// time translation with constant `tau`.
///
/// `r(eps)` is the interior-window quadrature of the pointwise difference
/// of the integrand before and after transforming `(t, q, u, p)`.
pub fn invariance_check_oc(
    problem: &dyn OcProblem,
    sym: &OcSymmetry,
    extremal: &Extremal,
    alpha: FracOrder,
    epsilons: &[f64],
) -> Result<InvarianceReport> {
    let tau = sym.tau.as_constant().ok_or_else(|| {
        Error::UnsupportedTransformation("invariance check needs a constant tau".into())
    })?;
    let grid = *extremal.grid();
    let window = grid.interior();
    let traj = extremal.trajectory(alpha)?;
    let ham = Hamiltonian::new(problem);
    let integrand = |t: f64, q: &[f64], u: &[f64], p: &[f64], d: &[f64]| {
        ham.value_unchecked(t, q, u, p) - dot(p, d)
    };
    let base: Vec<f64> = (0..grid.len())
        .map(|k| {
            let pt = traj.point(k);
            integrand(pt.t, pt.q, pt.u, pt.p, pt.d)
        })
        .collect();
    let scale = window_quadrature(&grid, window, |k| base[k].abs());

    let gens: Vec<[Vec<f64>; 3]> = (0..grid.len())
        .map(|k| {
            let pt = traj.point(k);
            [sym.xi.eval(&pt), sym.sigma.eval(&pt), sym.zeta.eval(&pt)]
        })
        .collect();
    let moved = |f: &GridFn, which: usize, eps: f64| -> Vec<f64> {
        (0..grid.len())
            .flat_map(|k| {
                f.row(k)
                    .iter()
                    .zip(&gens[k][which])
                    .map(|(x, g)| x + eps * g)
                    .collect::<Vec<_>>()
            })
            .collect()
    };

    let mut residuals = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        if eps == 0.0 {
            residuals.push(0.0);
            continue;
        }
        let shifted = grid.shifted(eps * tau)?;
        let q_bar = GridFn::new(shifted, extremal.q.dim(), moved(&extremal.q, 0, eps))?;
        let u_bar = GridFn::new(shifted, extremal.u.dim(), moved(&extremal.u, 1, eps))?;
        let p_bar = GridFn::new(shifted, extremal.p.dim(), moved(&extremal.p, 2, eps))?;
        let d_bar = left_rl_deriv(&q_bar, alpha)?;
        let r = window_quadrature(&grid, window, |k| {
            let transformed = integrand(shifted.node(k), q_bar.row(k), u_bar.row(k), p_bar.row(k), d_bar.row(k));
            (transformed - base[k]).abs()
        });
        residuals.push(r);
    }
    Ok(invariance_report(epsilons, residuals, scale))
}
