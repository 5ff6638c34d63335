//! The six subcommands.

use std::collections::BTreeMap;
use std::sync::Arc;

use fracnoether_core::charge::fit_slope;
use fracnoether_core::numerics::{left_rl_deriv, power_rule_analytic, right_rl_deriv, sin_rl_analytic};
use fracnoether_core::optimal_control::{
    conservation_check_oc, hamiltonian, invariance_check_oc, noether_charge_oc, solve_extremal,
};
use fracnoether_core::problems::{validate, ProblemKind};
use fracnoether_core::{
    lookup, registry, Error as CoreError, Extremal, FracOrder, Grid, GridFn, OcProblem, OcSymmetry,
    ProblemSpec, SolveOptions, VectorGenerator,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{self, Cell};
use crate::{CliError, ConvergenceArgs, ConvergenceCheck, FracDerivArgs, Outcome, RunConfig, Side, SweepArgs};

/// Perturbation sizes for the invariance check.
pub const INVARIANCE_EPS: [f64; 4] = [1e-2, 5e-3, 2.5e-3, 1.25e-3];

/// Errors below this are treated as roundoff by `convergence`.
pub const EXACT_FLOOR: f64 = 1e-10;

fn load_spec(cfg: &RunConfig) -> Result<ProblemSpec, CliError> {
    let name = cfg
        .problem
        .as_deref()
        .ok_or_else(|| CliError::config("--problem is required for this command"))?;
    let spec = lookup(name)?;
    if cfg.overrides.is_empty() {
        Ok(spec)
    } else {
        Ok(spec.with_overrides(&cfg.overrides)?)
    }
}

/// The order actually used: problems pinned to one order override `--alpha`.
fn effective_alpha(spec: &ProblemSpec, requested: FracOrder, notes: &mut Vec<String>) -> Result<FracOrder, CliError> {
    match spec.fixed_alpha {
        Some(fixed) if fixed != requested.value() => {
            notes.push(format!("alpha forced to {fixed} for {}", spec.name));
            Ok(FracOrder::new(fixed)?)
        }
        _ => Ok(requested),
    }
}

fn kind_str(kind: ProblemKind) -> &'static str {
    match kind {
        ProblemKind::Cv => "CV",
        ProblemKind::Oc => "OC",
    }
}

fn solve(problem: &dyn OcProblem, alpha: FracOrder, grid: Grid) -> Result<Extremal, CliError> {
    solve_extremal(problem, alpha, grid, &SolveOptions::default()).map_err(|e| match e {
        CoreError::SingularJacobian { node, unknown } => {
            CliError::numeric(format!("singular Jacobian at node {node} (unknown {unknown})"))
        }
        other => other.into(),
    })
}

/// Plain Hamiltonian `L + p·phi` at every node.
pub fn hamiltonian_values(problem: &dyn OcProblem, ext: &Extremal) -> Result<Vec<f64>, CliError> {
    let grid = *ext.grid();
    (0..grid.len())
        .map(|k| {
            hamiltonian(problem, grid.node(k), ext.q.row(k), ext.u.row(k), ext.p.row(k)).map_err(CliError::from)
        })
        .collect()
}

fn spread(values: &[f64], grid: &Grid) -> f64 {
    let w = grid.interior();
    let slice = &values[w.lo..=w.hi];
    let max = slice.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = slice.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub label: String,
    pub invariant: bool,
    pub exact_invariance: bool,
    pub invariance_slope: Option<f64>,
    pub charge_residual: f64,
    pub charge_spread: f64,
    pub pass: bool,
    pub note: String,
}

fn is_time_translation(sym: &OcSymmetry) -> bool {
    let tau_const = matches!(sym.tau.as_constant(), Some(c) if c != 0.0);
    let xi_zero = matches!(&sym.xi, VectorGenerator::Constant(v) if v.iter().all(|x| *x == 0.0));
    tau_const && xi_zero
}

/// Invariance test plus charge check for one symmetry on a converged extremal.
pub fn analyse_symmetry(
    problem: Arc<dyn OcProblem>,
    label: &str,
    sym: &OcSymmetry,
    ext: &Extremal,
    alpha: FracOrder,
    tol: f64,
) -> Result<SymmetryReport, CliError> {
    let (invariant, exact, slope) = match invariance_check_oc(problem.as_ref(), sym, ext, alpha, &INVARIANCE_EPS) {
        Ok(r) => (r.invariant, r.exact, r.slope),
        // Non-constant generators: the charge is taken as declared.
        Err(CoreError::UnsupportedTransformation(_)) => (true, false, None),
        Err(e) => return Err(e.into()),
    };
    let charge = noether_charge_oc(problem, sym, ext, alpha)?;
    let report = conservation_check_oc(&charge, ext, alpha, tol)?;
    let (pass, note) = if !invariant {
        (false, "no invariant symmetry: conservation not asserted".to_string())
    } else if report.pass {
        let note = if alpha.is_integer() && is_time_translation(sym) {
            "Hamiltonian preserved".to_string()
        } else if is_time_translation(sym) {
            "H - (1 - alpha) p D^alpha q is a fractional conservation law".to_string()
        } else {
            "fractional conservation law".to_string()
        };
        (true, note)
    } else {
        (false, format!("charge residual {:.3e} exceeds tol {:.3e}", report.max_residual, tol))
    };
    Ok(SymmetryReport {
        label: label.to_string(),
        invariant,
        exact_invariance: exact,
        invariance_slope: slope,
        charge_residual: report.max_residual,
        charge_spread: report.charge_spread,
        pass,
        note,
    })
}

// --- solve ----------------------------------------------------------------

#[derive(Debug, Serialize)]
struct SolveReport {
    problem: String,
    kind: &'static str,
    alpha: f64,
    #[serde(rename = "N")]
    n: usize,
    a: f64,
    b: f64,
    parameters: BTreeMap<String, f64>,
    converged: bool,
    iterations: usize,
    system_residual: f64,
    r_dyn: f64,
    r_adj: f64,
    r_stat: f64,
    notes: Vec<String>,
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = load_spec(cfg)?;
    let mut notes = Vec::new();
    let alpha = effective_alpha(&spec, cfg.alpha, &mut notes)?;
    let problem = spec.as_oc();
    let ext = solve(problem.as_ref(), alpha, cfg.grid)?;
    let report = SolveReport {
        problem: spec.name.to_string(),
        kind: kind_str(spec.kind),
        alpha: alpha.value(),
        n: cfg.grid.intervals(),
        a: cfg.grid.a(),
        b: cfg.grid.b(),
        parameters: spec.parameters.clone(),
        converged: ext.converged,
        iterations: ext.iterations,
        system_residual: ext.system_residual,
        r_dyn: ext.residuals.dynamics,
        r_adj: ext.residuals.adjoint,
        r_stat: ext.residuals.stationarity,
        notes,
    };
    let files = vec![
        output::write(cfg.out_dir(), "extremal.csv", &ext.to_csv())?,
        output::write(cfg.out_dir(), "report.json", &output::json(&report))?,
    ];
    if ext.converged {
        Ok(Outcome::ok(
            format!("{}: converged in {} iterations, residual {:.3e}", spec.name, ext.iterations, ext.system_residual),
            files,
        ))
    } else {
        Ok(Outcome {
            code: 3,
            message: format!(
                "{}: Newton did not converge after {} iterations (residual {:.3e})",
                spec.name, ext.iterations, ext.system_residual
            ),
            files,
        })
    }
}

// --- check-conservation ---------------------------------------------------

#[derive(Debug, Serialize)]
pub struct ConservationRun {
    pub problem: String,
    pub kind: &'static str,
    pub alpha: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub tol: f64,
    pub parameters: BTreeMap<String, f64>,
    pub converged: bool,
    pub r_dyn: f64,
    pub r_adj: f64,
    pub r_stat: f64,
    /// Interior spread of the plain Hamiltonian `L + p·phi`.
    pub h_spread: f64,
    /// Worst charge residual over invariant symmetries.
    pub charge_residual: Option<f64>,
    pub charge_spread: Option<f64>,
    pub pass: bool,
    pub message: String,
    pub symmetries: Vec<SymmetryReport>,
    pub notes: Vec<String>,
}

/// The computation behind `check-conservation`, without file output.
pub fn conservation_run(spec: &ProblemSpec, cfg: &RunConfig) -> Result<ConservationRun, CliError> {
    let mut notes = Vec::new();
    let alpha = effective_alpha(spec, cfg.alpha, &mut notes)?;
    let problem = spec.as_oc();
    let ext = solve(problem.as_ref(), alpha, cfg.grid)?;
    ext.require_converged()?;
    let h = hamiltonian_values(problem.as_ref(), &ext)?;
    let mut symmetries = Vec::new();
    for s in &spec.symmetries {
        let sym = s.symmetry.to_oc(problem.as_ref());
        symmetries.push(analyse_symmetry(problem.clone(), &s.label, &sym, &ext, alpha, cfg.tol)?);
    }
    let invariant: Vec<&SymmetryReport> = symmetries.iter().filter(|s| s.invariant).collect();
    let charge_residual = invariant.iter().map(|s| s.charge_residual).reduce(f64::max);
    let charge_spread = invariant.iter().map(|s| s.charge_spread).reduce(f64::max);
    let pass = !invariant.is_empty() && invariant.iter().all(|s| s.pass);
    let message = if invariant.is_empty() {
        "no invariant symmetry".to_string()
    } else {
        invariant.iter().map(|s| format!("{}: {}", s.label, s.note)).collect::<Vec<_>>().join("; ")
    };
    Ok(ConservationRun {
        problem: spec.name.to_string(),
        kind: kind_str(spec.kind),
        alpha: alpha.value(),
        n: cfg.grid.intervals(),
        a: cfg.grid.a(),
        b: cfg.grid.b(),
        tol: cfg.tol,
        parameters: spec.parameters.clone(),
        converged: ext.converged,
        r_dyn: ext.residuals.dynamics,
        r_adj: ext.residuals.adjoint,
        r_stat: ext.residuals.stationarity,
        h_spread: spread(&h, &cfg.grid),
        charge_residual,
        charge_spread,
        pass,
        message,
        symmetries,
        notes,
    })
}

pub fn cmd_check_conservation(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = load_spec(cfg)?;
    let run = conservation_run(&spec, cfg)?;
    let files = vec![output::write(cfg.out_dir(), "report.json", &output::json(&run))?];
    // Exit 3 only when a charge that should be conserved is not.
    let failed = run.symmetries.iter().any(|s| s.invariant && !s.pass);
    Ok(Outcome {
        code: if failed { 3 } else { 0 },
        message: format!("{}: {}", run.problem, run.message),
        files,
    })
}

// --- frac-deriv -----------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    Power(f64),
    Const,
    Sin,
}

impl TestFunction {
    pub fn parse(name: &str, upsilon: f64) -> Result<Self, CliError> {
        match name {
            "power" => {
                if !(upsilon >= 0.0 && upsilon.is_finite()) {
                    return Err(CliError::config(format!("--upsilon must be >= 0, got {upsilon}")));
                }
                Ok(TestFunction::Power(upsilon))
            }
            "const" => Ok(TestFunction::Const),
            "sin" => Ok(TestFunction::Sin),
            other => Err(CliError::not_found(format!("unknown function `{other}` (expected power, const or sin)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Power(_) => "power",
            TestFunction::Const => "const",
            TestFunction::Sin => "sin",
        }
    }

    /// The function of the distance `s` from the base point.
    fn value(self, s: f64) -> f64 {
        match self {
            TestFunction::Power(u) => s.powf(u),
            TestFunction::Const => 1.0,
            TestFunction::Sin => s.sin(),
        }
    }

    /// Order-`alpha` derivative in `s`, for `s > 0`.
    fn derivative(self, alpha: f64, s: f64) -> f64 {
        let r = match self {
            TestFunction::Power(u) => power_rule_analytic(u, alpha, 0.0, s),
            TestFunction::Const => power_rule_analytic(0.0, alpha, 0.0, s),
            TestFunction::Sin => sin_rl_analytic(alpha, 0.0, s),
        };
        r.expect("s > 0 and upsilon >= 0")
    }
}

/// Rows `(t, numeric, analytic, error)` at every node off the singular
/// endpoint, and the maximum error over the interior window.
pub struct DerivTable {
    pub rows: Vec<[f64; 4]>,
    pub max_interior_error: f64,
}

pub fn deriv_table(f: TestFunction, side: Side, alpha: FracOrder, grid: Grid) -> Result<DerivTable, CliError> {
    let (a, b) = (grid.a(), grid.b());
    let dist = |t: f64| match side {
        Side::Left => t - a,
        Side::Right => b - t,
    };
    let samples = GridFn::from_fn(grid, |t| f.value(dist(t).max(0.0)))?;
    let numeric = match side {
        Side::Left => left_rl_deriv(&samples, alpha)?,
        Side::Right => right_rl_deriv(&samples, alpha)?,
    };
    let nodes = match side {
        Side::Left => 1..=grid.intervals(),
        Side::Right => 0..=grid.intervals() - 1,
    };
    let window = grid.interior();
    let mut rows = Vec::with_capacity(grid.intervals());
    let mut max_err = 0.0f64;
    for k in nodes {
        let t = grid.node(k);
        let exact = f.derivative(alpha.value(), dist(t));
        let num = numeric.get(k, 0);
        let err = (num - exact).abs();
        if window.contains(k) {
            max_err = max_err.max(err);
        }
        rows.push([t, num, exact, err]);
    }
    Ok(DerivTable { rows, max_interior_error: max_err })
}

#[derive(Debug, Serialize)]
struct FracDerivReport {
    function: &'static str,
    upsilon: Option<f64>,
    side: &'static str,
    alpha: f64,
    #[serde(rename = "N")]
    n: usize,
    a: f64,
    b: f64,
    h: f64,
    max_interior_error: f64,
}

pub fn cmd_frac_deriv(cfg: &RunConfig, args: &FracDerivArgs) -> Result<Outcome, CliError> {
    let f = TestFunction::parse(&args.function, args.upsilon)?;
    let table = deriv_table(f, args.side, cfg.alpha, cfg.grid)?;
    let rows: Vec<Vec<Cell>> = table.rows.iter().map(|r| r.iter().map(|&x| Cell::Float(x)).collect()).collect();
    let report = FracDerivReport {
        function: f.name(),
        upsilon: match f {
            TestFunction::Power(u) => Some(u),
            _ => None,
        },
        side: args.side.as_str(),
        alpha: cfg.alpha.value(),
        n: cfg.grid.intervals(),
        a: cfg.grid.a(),
        b: cfg.grid.b(),
        h: cfg.grid.h(),
        max_interior_error: table.max_interior_error,
    };
    let files = vec![
        output::write(cfg.out_dir(), "table.csv", &output::csv(&["t", "numeric", "analytic", "error"], &rows))?,
        output::write(cfg.out_dir(), "report.json", &output::json(&report))?,
    ];
    Ok(Outcome::ok(format!("max interior error {:.3e}", table.max_interior_error), files))
}

// --- convergence ----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Order {
    Fitted(f64),
    Label(&'static str),
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub check: &'static str,
    pub problem: Option<String>,
    pub function: Option<&'static str>,
    pub alpha: f64,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    pub errors: Vec<f64>,
    pub order: Order,
}

/// `exact` when every error is at roundoff, else the least-squares slope of
/// `log error` against `log h`.
pub fn fitted_order(hs: &[f64], errors: &[f64]) -> Order {
    if errors.iter().all(|&e| e <= EXACT_FLOOR) {
        return Order::Label("exact");
    }
    let pts: Vec<(f64, f64)> = hs
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e > 0.0)
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    match fit_slope(&pts) {
        Some(s) => Order::Fitted(s),
        None => Order::Label("undetermined"),
    }
}

pub fn convergence_study(cfg: &RunConfig, args: &ConvergenceArgs) -> Result<ConvergenceReport, CliError> {
    if args.levels < 3 {
        return Err(CliError::config(format!("--levels must be at least 3, got {}", args.levels)));
    }
    let n0 = cfg.grid.intervals();
    let ns: Vec<usize> = (0..args.levels).map(|i| n0 << i).collect();
    let grids = ns
        .iter()
        .map(|&n| Grid::new(cfg.grid.a(), cfg.grid.b(), n))
        .collect::<Result<Vec<_>, _>>()?;
    let (errors, problem, function, alpha) = match args.check {
        ConvergenceCheck::FracDeriv => {
            let f = TestFunction::parse(&args.deriv.function, args.deriv.upsilon)?;
            let errs = grids
                .iter()
                .map(|g| deriv_table(f, args.deriv.side, cfg.alpha, *g).map(|t| t.max_interior_error))
                .collect::<Result<Vec<_>, _>>()?;
            (errs, None, Some(f.name()), cfg.alpha)
        }
        ConvergenceCheck::Conservation => {
            let spec = load_spec(cfg)?;
            let mut notes = Vec::new();
            let alpha = effective_alpha(&spec, cfg.alpha, &mut notes)?;
            let problem = spec.as_oc();
            let label = spec
                .symmetries
                .first()
                .ok_or_else(|| CliError::config(format!("{} declares no symmetry", spec.name)))?;
            let sym = label.symmetry.to_oc(problem.as_ref());
            let mut errs = Vec::new();
            for g in &grids {
                let ext = solve(problem.as_ref(), alpha, *g)?;
                ext.require_converged()?;
                let charge = noether_charge_oc(problem.clone(), &sym, &ext, alpha)?;
                errs.push(conservation_check_oc(&charge, &ext, alpha, cfg.tol)?.max_residual);
            }
            (errs, Some(spec.name.to_string()), None, alpha)
        }
    };
    let hs: Vec<f64> = grids.iter().map(|g| g.h()).collect();
    Ok(ConvergenceReport {
        check: match args.check {
            ConvergenceCheck::FracDeriv => "frac-deriv",
            ConvergenceCheck::Conservation => "conservation",
        },
        problem,
        function,
        alpha: alpha.value(),
        order: fitted_order(&hs, &errors),
        n: ns,
        errors,
    })
}

pub fn cmd_convergence(cfg: &RunConfig, args: &ConvergenceArgs) -> Result<Outcome, CliError> {
    let report = convergence_study(cfg, args)?;
    let rows: Vec<Vec<Cell>> = report
        .n
        .iter()
        .zip(&report.errors)
        .map(|(&n, &e)| vec![Cell::Int(n), Cell::Float((cfg.grid.b() - cfg.grid.a()) / n as f64), Cell::Float(e)])
        .collect();
    let files = vec![
        output::write(cfg.out_dir(), "table.csv", &output::csv(&["N", "h", "error"], &rows))?,
        output::write(cfg.out_dir(), "report.json", &output::json(&report))?,
    ];
    let order = match &report.order {
        Order::Fitted(s) => format!("{s:.3}"),
        Order::Label(l) => l.to_string(),
    };
    Ok(Outcome::ok(format!("fitted order {order}"), files))
}

// --- sweep-alpha ----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub charge_residual: f64,
    pub charge_spread: f64,
    pub h_spread: f64,
    pub h_start: f64,
    pub h_end: f64,
    pub expectation: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub problem: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub tol: f64,
    pub rows: Vec<SweepRow>,
    pub pass: bool,
}

pub fn parse_alphas(list: &str) -> Result<Vec<f64>, CliError> {
    let alphas = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let a: f64 = s.parse().map_err(|_| CliError::config(format!("`{s}` is not a number")))?;
            if a > 0.0 && a <= 1.0 {
                Ok(a)
            } else {
                Err(CliError::config(format!("alpha must lie in (0, 1], got {a}")))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if alphas.is_empty() {
        return Err(CliError::config("--alphas is empty"));
    }
    Ok(alphas)
}

fn sweep_row(spec: &ProblemSpec, alpha: f64, cfg: &RunConfig) -> Result<SweepRow, CliError> {
    let order = FracOrder::new(alpha)?;
    let problem = spec.as_oc();
    let ext = solve(problem.as_ref(), order, cfg.grid)?;
    ext.require_converged()?;
    let label = spec
        .symmetries
        .iter()
        .find(|s| is_time_translation(&s.symmetry.to_oc(problem.as_ref())))
        .ok_or_else(|| CliError::config(format!("{} declares no time translation", spec.name)))?;
    let sym = label.symmetry.to_oc(problem.as_ref());
    let charge = noether_charge_oc(problem.clone(), &sym, &ext, order)?;
    let report = conservation_check_oc(&charge, &ext, order, cfg.tol)?;
    let h = hamiltonian_values(problem.as_ref(), &ext)?;
    let h_spread = spread(&h, &cfg.grid);
    let (expectation, pass) = if order.is_integer() {
        ("h_spread <= tol", h_spread <= cfg.tol)
    } else {
        ("h_spread > charge_residual", h_spread > report.max_residual)
    };
    Ok(SweepRow {
        alpha,
        charge_residual: report.max_residual,
        charge_spread: report.charge_spread,
        h_spread,
        h_start: h[0],
        h_end: h[h.len() - 1],
        expectation,
        pass,
    })
}

/// Runs every order in parallel; rows come back in input order.
pub fn sweep(cfg: &RunConfig, alphas: &[f64]) -> Result<SweepReport, CliError> {
    let spec = load_spec(cfg)?;
    if let Some(fixed) = spec.fixed_alpha {
        if alphas.iter().any(|&a| a != fixed) {
            return Err(CliError::config(format!("{} is pinned to alpha = {fixed}", spec.name)));
        }
    }
    let rows = alphas
        .par_iter()
        .map(|&a| sweep_row(&spec, a, cfg))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let pass = rows.iter().all(|r| r.pass);
    Ok(SweepReport {
        problem: spec.name.to_string(),
        n: cfg.grid.intervals(),
        a: cfg.grid.a(),
        b: cfg.grid.b(),
        tol: cfg.tol,
        rows,
        pass,
    })
}

pub fn cmd_sweep_alpha(cfg: &RunConfig, args: &SweepArgs) -> Result<Outcome, CliError> {
    let alphas = parse_alphas(&args.alphas)?;
    let report = sweep(cfg, &alphas)?;
    let rows: Vec<Vec<Cell>> = report
        .rows
        .iter()
        .map(|r| {
            [r.alpha, r.charge_residual, r.charge_spread, r.h_spread, r.h_start, r.h_end]
                .into_iter()
                .map(Cell::Float)
                .collect()
        })
        .collect();
    let header = ["alpha", "charge_residual", "charge_spread", "h_spread", "h_start", "h_end"];
    let files = vec![
        output::write(cfg.out_dir(), "table.csv", &output::csv(&header, &rows))?,
        output::write(cfg.out_dir(), "report.json", &output::json(&report))?,
    ];
    let failed: Vec<String> = report.rows.iter().filter(|r| !r.pass).map(|r| format!("{}", r.alpha)).collect();
    let message = if failed.is_empty() {
        format!("{}: {} orders, all expectations met", report.problem, report.rows.len())
    } else {
        format!("{}: expectation not met at alpha = {}", report.problem, failed.join(", "))
    };
    Ok(Outcome::ok(message, files))
}

// --- list -----------------------------------------------------------------

#[derive(Debug, Serialize)]
struct ListEntry {
    name: &'static str,
    kind: &'static str,
    autonomous: bool,
    fixed_alpha: Option<f64>,
    parameters: BTreeMap<String, f64>,
    symmetries: Vec<String>,
    doc: &'static str,
    validation: fracnoether_core::problems::ValidationReport,
}

pub fn cmd_list(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let entries: Vec<ListEntry> = registry()
        .iter()
        .map(|spec| ListEntry {
            name: spec.name,
            kind: kind_str(spec.kind),
            autonomous: spec.autonomous,
            fixed_alpha: spec.fixed_alpha,
            parameters: spec.parameters.clone(),
            symmetries: spec.symmetries.iter().map(|s| s.label.clone()).collect(),
            doc: spec.doc,
            validation: validate(spec, cfg.seed),
        })
        .collect();
    let text = output::json(&entries);
    Ok(Outcome::ok(text.trim_end().to_string(), Vec::new()))
}
