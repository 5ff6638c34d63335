//! Numerical toolkit for fractional variational calculus and fractional
//! optimal control.
//!
//! * [`numerics`]: Grünwald-Letnikov left/right Riemann-Liouville operators,
//!   fractional integrals, power-rule oracles and the bilinear `D` operator.
//! * [`variational`]: fractional Euler-Lagrange residuals, conservation-law
//!   tests and Noether charges for `∫ L(t, q, D^alpha q) dt`.
//! * [`optimal_control`]: Hamiltonian, Pontryagin residuals, a coupled Newton
//!   solver for extremals, and the charge `[H - (1 - alpha) p·D^alpha q] tau - p·xi`.
//! * [`problems`]: built-in benchmark problems.

pub mod charge;
pub mod error;
pub mod finite_diff;
pub mod gamma;
pub mod grid;
pub mod newton;
pub mod numerics;
pub mod optimal_control;
pub mod problems;
pub mod variational;

pub use charge::{
    ConservationReport, FactoredQuantity, Generator, InvarianceReport, Point, Trajectory,
    VectorGenerator,
};
pub use error::{Error, Result};
pub use grid::{FracOrder, Grid, GridFn, Window};
pub use optimal_control::{Extremal, OcProblem, OcSymmetry, SolveOptions};
pub use problems::{lookup, registry, ProblemSpec};
pub use variational::{CvLagrangian, CvSymmetry};
