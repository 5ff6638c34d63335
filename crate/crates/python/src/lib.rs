//! Python bindings: discrete fractional operators, the problem registry,
//! the Pontryagin solver and conservation checks.

use std::collections::BTreeMap;

use fracnoether_core::numerics::{self, power_rule_analytic};
use fracnoether_core::optimal_control::{
    conservation_check_oc, invariance_check_oc, noether_charge_oc, solve_extremal,
};
use fracnoether_core::problems::ProblemSpec;
use fracnoether_core::{lookup, registry, Error, Extremal, FracOrder, Grid, GridFn, SolveOptions};
use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

const INVARIANCE_EPS: [f64; 4] = [1e-2, 5e-3, 2.5e-3, 1.25e-3];

fn to_py(e: Error) -> PyErr {
    match e {
        Error::UnknownProblem(_) | Error::UnknownParameter { .. } => PyKeyError::new_err(e.to_string()),
        Error::InvalidOrder(..)
        | Error::InvalidGrid(_)
        | Error::InvalidArgument(_)
        | Error::DimensionMismatch { .. }
        | Error::UnsupportedTransformation(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn samples(values: Vec<f64>, a: f64, b: f64) -> PyResult<GridFn> {
    if values.len() < 3 {
        return Err(PyValueError::new_err("need at least 3 samples"));
    }
    let grid = Grid::new(a, b, values.len() - 1).map_err(to_py)?;
    GridFn::new(grid, 1, values).map_err(to_py)
}

fn spec_with(problem: &str, params: Option<BTreeMap<String, f64>>) -> PyResult<ProblemSpec> {
    let spec = lookup(problem).map_err(to_py)?;
    match params {
        Some(p) if !p.is_empty() => spec.with_overrides(&p.into_iter().collect::<Vec<_>>()).map_err(to_py),
        _ => Ok(spec),
    }
}

/// Grünwald-Letnikov weights `w_0..=w_count` for an order in (-1, 1].
#[pyfunction]
fn gl_weights(alpha: f64, count: usize) -> PyResult<Vec<f64>> {
    Ok(numerics::gl_weights(alpha, count).map_err(to_py)?.as_slice().to_vec())
}

/// Left Riemann-Liouville derivative of uniform samples on [a, b].
#[pyfunction]
#[pyo3(signature = (values, alpha, a=0.0, b=1.0))]
fn left_rl_deriv(values: Vec<f64>, alpha: f64, a: f64, b: f64) -> PyResult<Vec<f64>> {
    let f = samples(values, a, b)?;
    let order = FracOrder::new(alpha).map_err(to_py)?;
    Ok(numerics::left_rl_deriv(&f, order).map_err(to_py)?.into_values())
}

/// Right Riemann-Liouville derivative of uniform samples on [a, b].
#[pyfunction]
#[pyo3(signature = (values, alpha, a=0.0, b=1.0))]
fn right_rl_deriv(values: Vec<f64>, alpha: f64, a: f64, b: f64) -> PyResult<Vec<f64>> {
    let f = samples(values, a, b)?;
    let order = FracOrder::new(alpha).map_err(to_py)?;
    Ok(numerics::right_rl_deriv(&f, order).map_err(to_py)?.into_values())
}

/// Left fractional integral of order p in (0, 1).
#[pyfunction]
#[pyo3(signature = (values, p, a=0.0, b=1.0))]
fn frac_integral(values: Vec<f64>, p: f64, a: f64, b: f64) -> PyResult<Vec<f64>> {
    let f = samples(values, a, b)?;
    Ok(numerics::frac_integral(&f, p).map_err(to_py)?.into_values())
}

/// Exact order-p derivative of (t - a)^upsilon at t.
#[pyfunction]
#[pyo3(signature = (upsilon, p, t, a=0.0))]
fn power_rule(upsilon: f64, p: f64, t: f64, a: f64) -> PyResult<f64> {
    power_rule_analytic(upsilon, p, a, t).map_err(to_py)
}

#[pyfunction]
fn list_problems() -> Vec<&'static str> {
    registry().iter().map(|s| s.name).collect()
}

/// A solved extremal; arrays are per node, components interleaved.
#[pyclass(name = "Extremal", frozen)]
struct PyExtremal {
    #[pyo3(get)]
    t: Vec<f64>,
    #[pyo3(get)]
    q: Vec<f64>,
    #[pyo3(get)]
    u: Vec<f64>,
    #[pyo3(get)]
    p: Vec<f64>,
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    residual: f64,
    csv: String,
}

#[pymethods]
impl PyExtremal {
    fn to_csv(&self) -> String {
        self.csv.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Extremal(nodes={}, converged={}, iterations={})",
            self.t.len(),
            if self.converged { "True" } else { "False" },
            self.iterations
        )
    }
}

impl From<&Extremal> for PyExtremal {
    fn from(e: &Extremal) -> Self {
        Self {
            t: e.grid().nodes(),
            q: e.q.values().to_vec(),
            u: e.u.values().to_vec(),
            p: e.p.values().to_vec(),
            converged: e.converged,
            iterations: e.iterations,
            residual: e.system_residual,
            csv: e.to_csv(),
        }
    }
}

fn order_for(spec: &ProblemSpec, alpha: f64) -> PyResult<FracOrder> {
    FracOrder::new(spec.fixed_alpha.unwrap_or(alpha)).map_err(to_py)
}

/// Solves the fractional Pontryagin system of a registered problem.
#[pyfunction]
#[pyo3(signature = (problem, alpha=0.5, n=256, a=0.0, b=1.0, params=None))]
fn solve(
    py: Python<'_>,
    problem: &str,
    alpha: f64,
    n: usize,
    a: f64,
    b: f64,
    params: Option<BTreeMap<String, f64>>,
) -> PyResult<PyExtremal> {
    let spec = spec_with(problem, params)?;
    let order = order_for(&spec, alpha)?;
    let grid = Grid::new(a, b, n).map_err(to_py)?;
    let oc = spec.as_oc();
    let ext = py
        .detach(|| solve_extremal(oc.as_ref(), order, grid, &SolveOptions::default()))
        .map_err(to_py)?;
    Ok(PyExtremal::from(&ext))
}

/// Solves, then checks the charge of every declared symmetry. Returns a
/// dict with one entry per symmetry label.
#[pyfunction]
#[pyo3(signature = (problem, alpha=0.5, n=256, a=0.0, b=1.0, tol=1e-2, params=None))]
#[allow(clippy::too_many_arguments)]
fn check_conservation<'py>(
    py: Python<'py>,
    problem: &str,
    alpha: f64,
    n: usize,
    a: f64,
    b: f64,
    tol: f64,
    params: Option<BTreeMap<String, f64>>,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = spec_with(problem, params)?;
    let order = order_for(&spec, alpha)?;
    let grid = Grid::new(a, b, n).map_err(to_py)?;
    let oc = spec.as_oc();
    let ext = py
        .detach(|| solve_extremal(oc.as_ref(), order, grid, &SolveOptions::default()))
        .map_err(to_py)?;
    ext.require_converged().map_err(to_py)?;
    let out = PyDict::new(py);
    for s in &spec.symmetries {
        let sym = s.symmetry.to_oc(oc.as_ref());
        let inv = invariance_check_oc(oc.as_ref(), &sym, &ext, order, &INVARIANCE_EPS).map_err(to_py)?;
        let charge = noether_charge_oc(oc.clone(), &sym, &ext, order).map_err(to_py)?;
        let report = conservation_check_oc(&charge, &ext, order, tol).map_err(to_py)?;
        let entry = PyDict::new(py);
        entry.set_item("invariant", inv.invariant)?;
        entry.set_item("invariance_slope", inv.slope)?;
        entry.set_item("charge_residual", report.max_residual)?;
        entry.set_item("charge_spread", report.charge_spread)?;
        entry.set_item("pass", inv.invariant && report.pass)?;
        out.set_item(&s.label, entry)?;
    }
    Ok(out)
}

#[pymodule]
fn fracnoether(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(gl_weights, m)?)?;
    m.add_function(wrap_pyfunction!(left_rl_deriv, m)?)?;
    m.add_function(wrap_pyfunction!(right_rl_deriv, m)?)?;
    m.add_function(wrap_pyfunction!(frac_integral, m)?)?;
    m.add_function(wrap_pyfunction!(power_rule, m)?)?;
    m.add_function(wrap_pyfunction!(list_problems, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(check_conservation, m)?)?;
    m.add_class::<PyExtremal>()?;
    Ok(())
}
