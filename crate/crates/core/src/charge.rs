//! Sums of products of trajectory functions and the `D`-operator test for
//! fractional conservation laws.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{FracOrder, Grid, GridFn, Window};
use crate::numerics::{d_operator, left_rl_deriv};

/// One node of a trajectory: time, state, control, adjoint and the left
/// fractional derivative of the state. Calculus-of-variations trajectories
/// leave `u` and `p` empty.
#[derive(Debug, Clone, Copy)]
pub struct Point<'a> {
    pub t: f64,
    pub q: &'a [f64],
    pub u: &'a [f64],
    pub p: &'a [f64],
    pub d: &'a [f64],
}

pub type ScalarField = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn(&Point) -> Vec<f64> + Send + Sync>;

/// Wraps a closure as a [`ScalarField`].
pub fn field(f: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> ScalarField {
    Arc::new(f)
}

pub fn constant(c: f64) -> ScalarField {
    Arc::new(move |_| c)
}

/// Scalar generator of a transformation group (`tau`).
#[derive(Clone)]
pub enum Generator {
    Constant(f64),
    Field(ScalarField),
}

impl Generator {
    pub fn eval(&self, pt: &Point) -> f64 {
        match self {
            Generator::Constant(c) => *c,
            Generator::Field(f) => f(pt),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Generator::Constant(c) => Some(*c),
            Generator::Field(_) => None,
        }
    }

    pub fn to_field(&self) -> ScalarField {
        match self {
            Generator::Constant(c) => constant(*c),
            Generator::Field(f) => f.clone(),
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Constant(c) => write!(f, "Constant({c})"),
            Generator::Field(_) => f.write_str("Field(..)"),
        }
    }
}

/// Vector generator (`xi`, `sigma`, `zeta`).
#[derive(Clone)]
pub enum VectorGenerator {
    Constant(Vec<f64>),
    Field(VectorField),
}

impl VectorGenerator {
    pub fn zero(dim: usize) -> Self {
        VectorGenerator::Constant(vec![0.0; dim])
    }

    pub fn eval(&self, pt: &Point) -> Vec<f64> {
        match self {
            VectorGenerator::Constant(c) => c.clone(),
            VectorGenerator::Field(f) => f(pt),
        }
    }

    /// Component `j` as a scalar field.
    pub fn component(&self, j: usize) -> ScalarField {
        match self {
            VectorGenerator::Constant(c) => constant(c[j]),
            VectorGenerator::Field(f) => {
                let f = f.clone();
                Arc::new(move |pt| f(pt)[j])
            }
        }
    }
}

impl fmt::Debug for VectorGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorGenerator::Constant(c) => write!(f, "Constant({c:?})"),
            VectorGenerator::Field(_) => f.write_str("Field(..)"),
        }
    }
}

/// Samples of a trajectory on one grid, with `d` = left derivative of `q`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    q: GridFn,
    u: Option<GridFn>,
    p: Option<GridFn>,
    d: GridFn,
}

impl Trajectory {
    /// State-only trajectory (calculus of variations).
    pub fn from_state(q: GridFn, alpha: FracOrder) -> Result<Self> {
        let d = left_rl_deriv(&q, alpha)?;
        Ok(Self { q, u: None, p: None, d })
    }

    /// Full `(q, u, p)` trajectory (optimal control).
    pub fn new(q: GridFn, u: GridFn, p: GridFn, alpha: FracOrder) -> Result<Self> {
        if u.grid() != q.grid() || p.grid() != q.grid() {
            return Err(Error::GridMismatch);
        }
        if p.dim() != q.dim() {
            return Err(Error::DimensionMismatch {
                expected: q.dim(),
                got: p.dim(),
            });
        }
        let d = left_rl_deriv(&q, alpha)?;
        Ok(Self {
            q,
            u: Some(u),
            p: Some(p),
            d,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.q.grid()
    }

    pub fn q(&self) -> &GridFn {
        &self.q
    }

    pub fn d(&self) -> &GridFn {
        &self.d
    }

    pub fn point(&self, k: usize) -> Point<'_> {
        Point {
            t: self.grid().node(k),
            q: self.q.row(k),
            u: self.u.as_ref().map_or(&[][..], |u| u.row(k)),
            p: self.p.as_ref().map_or(&[][..], |p| p.row(k)),
            d: self.d.row(k),
        }
    }

    /// Samples a scalar field at every node.
    pub fn sample(&self, f: &ScalarField) -> Result<GridFn> {
        let values = (0..self.grid().len()).map(|k| f(&self.point(k))).collect();
        GridFn::new(*self.grid(), 1, values)
    }
}

/// `C = sum_i C_i^1 * C_i^2`. The first factor of each pair receives the
/// right derivative under the `D` operator.
#[derive(Clone)]
pub struct FactoredQuantity {
    pairs: Vec<(ScalarField, ScalarField)>,
}

impl FactoredQuantity {
    pub fn new(pairs: Vec<(ScalarField, ScalarField)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyFactors);
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(ScalarField, ScalarField)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Concatenation `self ∪ other`, keeping pair order.
    pub fn union(&self, other: &FactoredQuantity) -> FactoredQuantity {
        let mut pairs = self.pairs.clone();
        pairs.extend(other.pairs.iter().cloned());
        FactoredQuantity { pairs }
    }

    /// Negates the first factor of every pair.
    pub fn negated(&self) -> FactoredQuantity {
        let pairs = self
            .pairs
            .iter()
            .map(|(f, g)| {
                let f = f.clone();
                let neg: ScalarField = Arc::new(move |pt| -f(pt));
                (neg, g.clone())
            })
            .collect();
        FactoredQuantity { pairs }
    }

    pub fn evaluate(&self, traj: &Trajectory) -> Result<Vec<(GridFn, GridFn)>> {
        self.pairs
            .iter()
            .map(|(f, g)| Ok((traj.sample(f)?, traj.sample(g)?)))
            .collect()
    }

    /// Nodewise value `sum_i f_i g_i`.
    pub fn value(&self, traj: &Trajectory) -> Result<GridFn> {
        let values = (0..traj.grid().len())
            .map(|k| {
                let pt = traj.point(k);
                self.pairs.iter().map(|(f, g)| f(&pt) * g(&pt)).sum()
            })
            .collect();
        GridFn::new(*traj.grid(), 1, values)
    }

    /// `D{C}` at every node.
    pub fn d_residual(&self, traj: &Trajectory, alpha: FracOrder) -> Result<GridFn> {
        d_operator(&self.evaluate(traj)?, alpha)
    }
}

impl fmt::Debug for FactoredQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactoredQuantity({} pairs)", self.pairs.len())
    }
}

/// Outcome of a conservation-law check on the interior window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservationReport {
    pub max_residual: f64,
    /// `max - min` of the scalar charge value over the interior window.
    pub charge_spread: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Evaluates `D{C}` along a trajectory and compares its interior sup-norm
/// against `tol`.
pub fn check_charge(
    charge: &FactoredQuantity,
    traj: &Trajectory,
    alpha: FracOrder,
    tol: f64,
    window: Window,
) -> Result<ConservationReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let residual = charge.d_residual(traj, alpha)?;
    let value = charge.value(traj)?;
    let max_residual = residual.sup_norm(window);
    Ok(ConservationReport {
        max_residual,
        charge_spread: value.spread(0, window),
        tol,
        pass: max_residual <= tol,
    })
}

/// Outcome of a numeric invariance test under a time translation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub epsilons: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Least-squares slope of `log r` against `log eps` over positive residuals.
    pub slope: Option<f64>,
    /// Every residual at roundoff level.
    pub exact: bool,
    pub invariant: bool,
}

/// Slope at or above which the first-order term is considered absent.
pub const INVARIANCE_SLOPE: f64 = 1.8;

pub(crate) fn invariance_report(epsilons: &[f64], residuals: Vec<f64>, scale: f64) -> InvarianceReport {
    let roundoff = 1e-12 * scale.max(1.0);
    let exact = residuals.iter().all(|&r| r <= roundoff);
    let pts: Vec<(f64, f64)> = epsilons
        .iter()
        .zip(&residuals)
        .filter(|(&e, &r)| e != 0.0 && r > roundoff)
        .map(|(&e, &r)| (e.abs().ln(), r.ln()))
        .collect();
    let slope = fit_slope(&pts);
    let invariant = exact || slope.is_some_and(|s| s >= INVARIANCE_SLOPE);
    InvarianceReport {
        epsilons: epsilons.to_vec(),
        residuals,
        slope,
        exact,
        invariant,
    }
}

/// Least-squares slope of `y` against `x`; `None` with fewer than two
/// distinct abscissae.
pub fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
