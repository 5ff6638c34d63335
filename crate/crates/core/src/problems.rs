//! Built-in benchmark problems with analytic partials and declared
//! symmetries, keyed by name, with numeric parameter overrides.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::charge::{FactoredQuantity, Point, VectorGenerator};
use crate::error::{Error, Result};
use crate::finite_diff::{self, rel_error};
use crate::optimal_control::{OcProblem, OcSymmetry};
use crate::variational::{CvLagrangian, CvSymmetry};

pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProblemKind {
    #[serde(rename = "CV")]
    Cv,
    #[serde(rename = "OC")]
    Oc,
}

/// Calculus-of-variations problem with boundary data.
#[derive(Clone)]
pub struct CvProblem {
    pub lagrangian: Arc<dyn CvLagrangian>,
    pub q_a: Vec<f64>,
    pub q_b: Vec<f64>,
}

#[derive(Clone)]
pub enum Problem {
    Cv(CvProblem),
    Oc(Arc<dyn OcProblem>),
}

#[derive(Debug, Clone)]
pub enum Symmetry {
    Cv(CvSymmetry),
    Oc(OcSymmetry),
}

impl Symmetry {
    /// The symmetry acting on `(t, q, u, p)`. CV generators move `(t, q)`
    /// only, so `u` and `p` get zero generators.
    pub fn to_oc(&self, problem: &dyn OcProblem) -> OcSymmetry {
        match self {
            Symmetry::Oc(o) => o.clone(),
            Symmetry::Cv(c) => OcSymmetry {
                tau: c.tau.clone(),
                xi: c.xi.clone(),
                sigma: VectorGenerator::zero(problem.control_dim()),
                zeta: VectorGenerator::zero(problem.state_dim()),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct LabeledSymmetry {
    pub label: String,
    pub symmetry: Symmetry,
}

/// Regression ceiling on the charge residual, for one `(alpha, N)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualBound {
    pub alpha: f64,
    pub intervals: usize,
    pub max_residual: f64,
}

type Builder = fn(&Params) -> Result<(Problem, Vec<LabeledSymmetry>)>;

#[derive(Clone)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub kind: ProblemKind,
    pub problem: Problem,
    pub symmetries: Vec<LabeledSymmetry>,
    pub parameters: Params,
    pub doc: &'static str,
    /// Neither `L` nor `phi` depends on `t`.
    pub autonomous: bool,
    /// Order the problem is pinned to, if any.
    pub fixed_alpha: Option<f64>,
    pub residual_bound: Option<ResidualBound>,
    build: Builder,
}

impl std::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("parameters", &self.parameters)
            .field("symmetries", &self.symmetries.iter().map(|s| &s.label).collect::<Vec<_>>())
            .finish()
    }
}

impl ProblemSpec {
    fn from_builder(
        name: &'static str,
        kind: ProblemKind,
        doc: &'static str,
        autonomous: bool,
        defaults: &[(&str, f64)],
        build: Builder,
    ) -> Self {
        let parameters: Params = defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let (problem, symmetries) = build(&parameters).expect("default parameters are valid");
        Self {
            name,
            kind,
            problem,
            symmetries,
            parameters,
            doc,
            autonomous,
            fixed_alpha: None,
            residual_bound: None,
            build,
        }
    }

    /// Rebuilds the problem with some parameters replaced.
    pub fn with_overrides(&self, overrides: &[(String, f64)]) -> Result<ProblemSpec> {
        let mut params = self.parameters.clone();
        for (k, v) in overrides {
            match params.get_mut(k) {
                Some(slot) => *slot = *v,
                None => {
                    return Err(Error::UnknownParameter {
                        problem: self.name.to_string(),
                        key: k.clone(),
                    })
                }
            }
        }
        let (problem, symmetries) = (self.build)(&params)?;
        Ok(ProblemSpec {
            problem,
            symmetries,
            parameters: params,
            ..self.clone()
        })
    }

    /// The problem in optimal-control form; CV problems become `phi = u`.
    pub fn as_oc(&self) -> Arc<dyn OcProblem> {
        match &self.problem {
            Problem::Oc(p) => p.clone(),
            Problem::Cv(cv) => Arc::new(CvAsOc(cv.clone())),
        }
    }
}

/// Parses `key=value`.
pub fn parse_override(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got `{s}`")))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("`{v}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!("`{s}` is not finite")));
    }
    Ok((k.trim().to_string(), v))
}

/// A CV problem seen as optimal control with `phi = u`, `H = L + p·u`.
pub struct CvAsOc(pub CvProblem);

impl OcProblem for CvAsOc {
    fn state_dim(&self) -> usize {
        self.0.lagrangian.dim()
    }
    fn control_dim(&self) -> usize {
        self.0.lagrangian.dim()
    }
    fn lagrangian(&self, t: f64, q: &[f64], u: &[f64]) -> f64 {
        self.0.lagrangian.value(t, q, u)
    }
    fn dynamics(&self, _t: f64, _q: &[f64], u: &[f64]) -> Vec<f64> {
        u.to_vec()
    }
    fn dl_dq(&self, t: f64, q: &[f64], u: &[f64]) -> Vec<f64> {
        self.0.lagrangian.dl_dq(t, q, u)
    }
    fn dl_du(&self, t: f64, q: &[f64], u: &[f64]) -> Vec<f64> {
        self.0.lagrangian.dl_dd(t, q, u)
    }
    fn dphi_dq(&self, _t: f64, q: &[f64], _u: &[f64]) -> DMatrix<f64> {
        DMatrix::zeros(q.len(), q.len())
    }
    fn dphi_du(&self, _t: f64, q: &[f64], _u: &[f64]) -> DMatrix<f64> {
        DMatrix::identity(q.len(), q.len())
    }
    fn initial_state(&self) -> Vec<f64> {
        self.0.q_a.clone()
    }
    fn terminal_state(&self) -> Option<Vec<f64>> {
        Some(self.0.q_b.clone())
    }
}

fn param(p: &Params, key: &str) -> f64 {
    p[key]
}

// --- autonomous_lq -------------------------------------------------------

/// `L = (wq q² + wu u²)/2`, `phi = -k q + u`.
pub struct AutonomousLq {
    pub q_weight: f64,
    pub u_weight: f64,
    pub decay: f64,
    pub q_a: f64,
}

impl OcProblem for AutonomousLq {
    fn state_dim(&self) -> usize {
        1
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn lagrangian(&self, _t: f64, q: &[f64], u: &[f64]) -> f64 {
        0.5 * (self.q_weight * q[0] * q[0] + self.u_weight * u[0] * u[0])
    }
    fn dynamics(&self, _t: f64, q: &[f64], u: &[f64]) -> Vec<f64> {
        vec![-self.decay * q[0] + u[0]]
    }
    fn dl_dq(&self, _t: f64, q: &[f64], _u: &[f64]) -> Vec<f64> {
        vec![self.q_weight * q[0]]
    }
    fn dl_du(&self, _t: f64, _q: &[f64], u: &[f64]) -> Vec<f64> {
        vec![self.u_weight * u[0]]
    }
    fn dphi_dq(&self, _t: f64, _q: &[f64], _u: &[f64]) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, -self.decay)
    }
    fn dphi_du(&self, _t: f64, _q: &[f64], _u: &[f64]) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, 1.0)
    }
    fn initial_state(&self) -> Vec<f64> {
        vec![self.q_a]
    }
}

fn build_autonomous_lq(p: &Params) -> Result<(Problem, Vec<LabeledSymmetry>)> {
    let u_weight = param(p, "u_weight");
    if u_weight <= 0.0 {
        return Err(Error::InvalidArgument("u_weight must be positive".into()));
    }
    let problem = AutonomousLq {
        q_weight: param(p, "q_weight"),
        u_weight,
        decay: param(p, "decay"),
        q_a: param(p, "q_a"),
    };
    Ok((
        Problem::Oc(Arc::new(problem)),
        vec![LabeledSymmetry {
            label: "time-translation".into(),
            symmetry: Symmetry::Oc(OcSymmetry::time_translation(1, 1)),
        }],
    ))
}

// --- cv_kinetic ----------------------------------------------------------

/// `L = mass d²/2`.
pub struct Kinetic {
    pub mass: f64,
}

impl CvLagrangian for Kinetic {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, _t: f64, _q: &[f64], d: &[f64]) -> f64 {
        0.5 * self.mass * d[0] * d[0]
    }
    fn dl_dq(&self, _t: f64, _q: &[f64], _d: &[f64]) -> Vec<f64> {
        vec![0.0]
    }
    fn dl_dd(&self, _t: f64, _q: &[f64], d: &[f64]) -> Vec<f64> {
        vec![self.mass * d[0]]
    }
    fn analytic_partials(&self) -> bool {
        true
    }
}

fn build_cv_kinetic(p: &Params) -> Result<(Problem, Vec<LabeledSymmetry>)> {
    let mass = param(p, "mass");
    if mass <= 0.0 {
        return Err(Error::InvalidArgument("mass must be positive".into()));
    }
    Ok((
        Problem::Cv(CvProblem {
            lagrangian: Arc::new(Kinetic { mass }),
            q_a: vec![param(p, "q_a")],
            q_b: vec![param(p, "q_b")],
        }),
        vec![LabeledSymmetry {
            label: "time-translation".into(),
            symmetry: Symmetry::Cv(CvSymmetry::time_translation(1)),
        }],
    ))
}

// --- classical_energy ----------------------------------------------------

/// Harmonic oscillator `L = mass d²/2 - stiffness q²/2`.
pub struct Oscillator {
    pub mass: f64,
    pub stiffness: f64,
}

impl CvLagrangian for Oscillator {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, _t: f64, q: &[f64], d: &[f64]) -> f64 {
        0.5 * self.mass * d[0] * d[0] - 0.5 * self.stiffness * q[0] * q[0]
    }
    fn dl_dq(&self, _t: f64, q: &[f64], _d: &[f64]) -> Vec<f64> {
        vec![-self.stiffness * q[0]]
    }
    fn dl_dd(&self, _t: f64, _q: &[f64], d: &[f64]) -> Vec<f64> {
        vec![self.mass * d[0]]
    }
    fn analytic_partials(&self) -> bool {
        true
    }
}

fn build_classical_energy(p: &Params) -> Result<(Problem, Vec<LabeledSymmetry>)> {
    let mass = param(p, "mass");
    if mass <= 0.0 {
        return Err(Error::InvalidArgument("mass must be positive".into()));
    }
    Ok((
        Problem::Cv(CvProblem {
            lagrangian: Arc::new(Oscillator {
                mass,
                stiffness: param(p, "stiffness"),
            }),
            q_a: vec![param(p, "q_a")],
            q_b: vec![param(p, "q_b")],
        }),
        vec![LabeledSymmetry {
            label: "time-translation".into(),
            symmetry: Symmetry::Cv(CvSymmetry::time_translation(1)),
        }],
    ))
}

// --- noninvariant_t ------------------------------------------------------

/// `L = (t + shift) u²`, `phi = u`. Explicitly time dependent.
///
/// With `shift = 0` the stationarity condition `2 t u + p = 0` does not
/// involve `u` at `t = 0`, which makes the discrete system singular on
/// grids starting at zero.
pub struct TimeWeighted {
    pub shift: f64,
    pub q_a: f64,
    pub q_b: f64,
}

impl OcProblem for TimeWeighted {
    fn state_dim(&self) -> usize {
        1
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn lagrangian(&self, t: f64, _q: &[f64], u: &[f64]) -> f64 {
        (t + self.shift) * u[0] * u[0]
    }
    fn dynamics(&self, _t: f64, _q: &[f64], u: &[f64]) -> Vec<f64> {
        vec![u[0]]
    }
    fn dl_dq(&self, _t: f64, _q: &[f64], _u: &[f64]) -> Vec<f64> {
        vec![0.0]
    }
    fn dl_du(&self, t: f64, _q: &[f64], u: &[f64]) -> Vec<f64> {
        vec![2.0 * (t + self.shift) * u[0]]
    }
    fn dphi_dq(&self, _t: f64, _q: &[f64], _u: &[f64]) -> DMatrix<f64> {
        DMatrix::zeros(1, 1)
    }
    fn dphi_du(&self, _t: f64, _q: &[f64], _u: &[f64]) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, 1.0)
    }
    fn initial_state(&self) -> Vec<f64> {
        vec![self.q_a]
    }
    fn terminal_state(&self) -> Option<Vec<f64>> {
        Some(vec![self.q_b])
    }
}

fn build_noninvariant_t(p: &Params) -> Result<(Problem, Vec<LabeledSymmetry>)> {
    Ok((
        Problem::Oc(Arc::new(TimeWeighted {
            shift: param(p, "shift"),
            q_a: param(p, "q_a"),
            q_b: param(p, "q_b"),
        })),
        vec![LabeledSymmetry {
            label: "time-translation".into(),
            symmetry: Symmetry::Oc(OcSymmetry::time_translation(1, 1)),
        }],
    ))
}

/// All built-in problems, in a fixed order.
pub fn registry() -> Vec<ProblemSpec> {
    let mut lq = ProblemSpec::from_builder(
        "autonomous_lq",
        ProblemKind::Oc,
        "Autonomous linear-quadratic problem: L = (q_weight q^2 + u_weight u^2)/2, \
         phi = -decay q + u, q(a) = q_a, free endpoint. Neither L nor phi depends on t, \
         so the problem is invariant under time translations and the corrected \
         Hamiltonian H - (1 - alpha) p D^alpha q is the associated charge.",
        true,
        &[("q_weight", 1.0), ("u_weight", 1.0), ("decay", 1.0), ("q_a", 1.0)],
        build_autonomous_lq,
    );
    lq.residual_bound = Some(ResidualBound {
        alpha: 0.5,
        intervals: 512,
        max_residual: 1.2e-3,
    });

    let kinetic = ProblemSpec::from_builder(
        "cv_kinetic",
        ProblemKind::Cv,
        "Fractional kinetic action L = mass d^2/2 with fixed endpoints q(a) = q_a, \
         q(b) = q_b. Solved as optimal control with phi = u, where stationarity gives \
         p = -dL/dd and the adjoint equation becomes the fractional Euler-Lagrange equation.",
        true,
        &[("mass", 1.0), ("q_a", 0.0), ("q_b", 1.0)],
        build_cv_kinetic,
    );

    let mut energy = ProblemSpec::from_builder(
        "classical_energy",
        ProblemKind::Cv,
        "Harmonic oscillator L = mass d^2/2 - stiffness q^2/2 at integer order, \
         fixed endpoints. The total energy -L + d dL/dd is constant along extremals.",
        true,
        &[("mass", 1.0), ("stiffness", 1.0), ("q_a", 1.0), ("q_b", 0.0)],
        build_classical_energy,
    );
    energy.fixed_alpha = Some(1.0);

    let noninvariant = ProblemSpec::from_builder(
        "noninvariant_t",
        ProblemKind::Oc,
        "Negative control: L = (t + shift) u^2, phi = u, fixed endpoints. The explicit \
         time dependence breaks time-translation invariance, so the declared \
         time-translation generator must fail the invariance check.",
        false,
        &[("shift", 1.0), ("q_a", 0.0), ("q_b", 1.0)],
        build_noninvariant_t,
    );

    vec![lq, kinetic, energy, noninvariant]
}

pub fn lookup(name: &str) -> Result<ProblemSpec> {
    registry()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}

/// The declared charge of a CV problem: the energy law for
/// `classical_energy`, the Noether charge otherwise.
pub fn declared_energy(spec: &ProblemSpec) -> Option<FactoredQuantity> {
    match &spec.problem {
        Problem::Cv(cv) if spec.name == "classical_energy" => {
            Some(crate::variational::energy_charge(cv.lagrangian.clone()))
        }
        _ => None,
    }
}

// --- validation ----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub max_rel_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub problem: String,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

/// Relative tolerance for analytic-vs-finite-difference partials.
pub const PARTIAL_TOL: f64 = 1e-6;

const SAMPLES: usize = 16;

/// Checks partials against central differences and symmetry generators
/// for finiteness at seeded random points of a sample tube.
pub fn validate(spec: &ProblemSpec, seed: u64) -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    match &spec.problem {
        Problem::Cv(cv) => validate_cv(cv.lagrangian.as_ref(), &mut rng, &mut checks),
        Problem::Oc(p) => validate_oc(p.as_ref(), &mut rng, &mut checks),
    }
    let (n, m) = match &spec.problem {
        Problem::Cv(cv) => (cv.lagrangian.dim(), 0),
        Problem::Oc(p) => (p.state_dim(), p.control_dim()),
    };
    for s in &spec.symmetries {
        let mut finite = true;
        for _ in 0..SAMPLES {
            let t: f64 = rng.gen_range(0.0..1.0);
            let q = sample_vec(&mut rng, n);
            let u = sample_vec(&mut rng, m);
            let p = sample_vec(&mut rng, if m == 0 { 0 } else { n });
            let d = sample_vec(&mut rng, n);
            let pt = Point { t, q: &q, u: &u, p: &p, d: &d };
            let values: Vec<f64> = match &s.symmetry {
                Symmetry::Cv(c) => std::iter::once(c.tau.eval(&pt)).chain(c.xi.eval(&pt)).collect(),
                Symmetry::Oc(o) => std::iter::once(o.tau.eval(&pt))
                    .chain(o.xi.eval(&pt))
                    .chain(o.sigma.eval(&pt))
                    .chain(o.zeta.eval(&pt))
                    .collect(),
            };
            finite &= values.iter().all(|v| v.is_finite());
        }
        checks.push(CheckResult {
            name: format!("symmetry `{}` finite", s.label),
            max_rel_error: 0.0,
            pass: finite,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    ValidationReport {
        problem: spec.name.to_string(),
        checks,
        pass,
    }
}

fn sample_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-2.0..2.0)).collect()
}

fn record(checks: &mut Vec<CheckResult>, name: &str, err: f64) {
    checks.push(CheckResult {
        name: name.to_string(),
        max_rel_error: err,
        pass: err <= PARTIAL_TOL,
    });
}

fn max_vec_error(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| rel_error(*x, *y)).fold(0.0, f64::max)
}

fn validate_cv(l: &dyn CvLagrangian, rng: &mut ChaCha8Rng, checks: &mut Vec<CheckResult>) {
    let n = l.dim();
    let (mut e_q, mut e_d) = (0.0f64, 0.0f64);
    for _ in 0..SAMPLES {
        let t: f64 = rng.gen_range(0.0..1.0);
        let q = sample_vec(rng, n);
        let d = sample_vec(rng, n);
        let fd_q = finite_diff::gradient(|x| l.value(t, x, &d), &q);
        let fd_d = finite_diff::gradient(|x| l.value(t, &q, x), &d);
        e_q = e_q.max(max_vec_error(&l.dl_dq(t, &q, &d), &fd_q));
        e_d = e_d.max(max_vec_error(&l.dl_dd(t, &q, &d), &fd_d));
    }
    record(checks, "dL/dq", e_q);
    record(checks, "dL/dd", e_d);
}

fn validate_oc(p: &dyn OcProblem, rng: &mut ChaCha8Rng, checks: &mut Vec<CheckResult>) {
    let (n, m) = (p.state_dim(), p.control_dim());
    let mut errs = [0.0f64; 4];
    for _ in 0..SAMPLES {
        let t: f64 = rng.gen_range(0.0..1.0);
        let q = sample_vec(rng, n);
        let u = sample_vec(rng, m);
        let fd_q = finite_diff::gradient(|x| p.lagrangian(t, x, &u), &q);
        let fd_u = finite_diff::gradient(|x| p.lagrangian(t, &q, x), &u);
        let fd_jq = finite_diff::jacobian(|x| p.dynamics(t, x, &u), &q, n);
        let fd_ju = finite_diff::jacobian(|x| p.dynamics(t, &q, x), &u, n);
        let jq = p.dphi_dq(t, &q, &u);
        let ju = p.dphi_du(t, &q, &u);
        let jq: Vec<f64> = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|rc| jq[rc]).collect();
        let ju: Vec<f64> = (0..n).flat_map(|r| (0..m).map(move |c| (r, c))).map(|rc| ju[rc]).collect();
        errs[0] = errs[0].max(max_vec_error(&p.dl_dq(t, &q, &u), &fd_q));
        errs[1] = errs[1].max(max_vec_error(&p.dl_du(t, &q, &u), &fd_u));
        errs[2] = errs[2].max(max_vec_error(&jq, &fd_jq));
        errs[3] = errs[3].max(max_vec_error(&ju, &fd_ju));
    }
    for (name, e) in ["dL/dq", "dL/du", "dphi/dq", "dphi/du"].iter().zip(errs) {
        record(checks, name, e);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let names: Vec<_> = registry().iter().map(|s| s.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert_eq!(names, ["autonomous_lq", "cv_kinetic", "classical_energy", "noninvariant_t"]);
    }

    #[test]
    fn lookup_autonomous_lq() {
        let s = lookup("autonomous_lq").unwrap();
        assert_eq!(s.kind, ProblemKind::Oc);
        assert!(s.autonomous);
        match &s.symmetries[0].symmetry {
            Symmetry::Oc(o) => assert_eq!(o.tau.as_constant(), Some(1.0)),
            Symmetry::Cv(_) => panic!("expected OC symmetry"),
        }
    }

    #[test]
    fn lookup_missing() {
        assert_eq!(lookup("nonexistent").unwrap_err(), Error::UnknownProblem("nonexistent".into()));
    }

    #[test]
    fn autonomous_specs_declare_time_translation() {
        for spec in registry().iter().filter(|s| s.autonomous) {
            let has = spec.symmetries.iter().any(|s| match &s.symmetry {
                Symmetry::Cv(c) => c.tau.as_constant() == Some(1.0),
                Symmetry::Oc(o) => o.tau.as_constant() == Some(1.0),
            });
            assert!(has, "{}", spec.name);
        }
    }

    #[test]
    fn every_spec_validates() {
        for spec in registry() {
            let rep = validate(&spec, 7);
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn overrides() {
        let s = lookup("autonomous_lq").unwrap();
        let t = s.with_overrides(&[("decay".into(), 2.0)]).unwrap();
        assert_eq!(t.parameters["decay"], 2.0);
        let p = t.as_oc();
        assert_eq!(p.dynamics(0.0, &[1.0], &[0.0]), vec![-2.0]);
        assert!(matches!(
            s.with_overrides(&[("nope".into(), 1.0)]),
            Err(Error::UnknownParameter { .. })
        ));
        assert_eq!(parse_override("q_a = 0.5").unwrap(), ("q_a".into(), 0.5));
        assert!(parse_override("q_a").is_err());
        assert!(parse_override("q_a=x").is_err());
    }

    struct WrongPartial;
    impl OcProblem for WrongPartial {
        fn state_dim(&self) -> usize {
            1
        }
        fn control_dim(&self) -> usize {
            1
        }
        fn lagrangian(&self, _t: f64, q: &[f64], u: &[f64]) -> f64 {
            0.5 * (q[0] * q[0] + u[0] * u[0])
        }
        fn dynamics(&self, _t: f64, q: &[f64], u: &[f64]) -> Vec<f64> {
            vec![-q[0] + u[0]]
        }
        fn dl_dq(&self, _t: f64, q: &[f64], _u: &[f64]) -> Vec<f64> {
            vec![1.1 * q[0]]
        }
        fn initial_state(&self) -> Vec<f64> {
            vec![1.0]
        }
    }

    fn wrong_builder(_: &Params) -> Result<(Problem, Vec<LabeledSymmetry>)> {
        Ok((Problem::Oc(Arc::new(WrongPartial)), vec![]))
    }

    #[test]
    fn wrong_partial_is_flagged() {
        let spec = ProblemSpec::from_builder("wrong", ProblemKind::Oc, "", false, &[], wrong_builder);
        let rep = validate(&spec, 3);
        assert!(!rep.pass);
        let dq = rep.checks.iter().find(|c| c.name == "dL/dq").unwrap();
        assert!(!dq.pass && dq.max_rel_error >= 0.05, "{dq:?}");
        // No symmetries on a non-autonomous problem is fine otherwise.
        assert!(rep.checks.iter().filter(|c| c.name != "dL/dq").all(|c| c.pass));
    }
}
