//! Uniform time meshes, fractional orders and sampled functions.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform mesh `t_k = a + k h`, `k = 0..=N`, on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    a: f64,
    b: f64,
    intervals: usize,
    h: f64,
}

impl Grid {
    pub fn new(a: f64, b: f64, intervals: usize) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || b <= a {
            return Err(Error::InvalidGrid(format!("need a < b, got a={a}, b={b}")));
        }
        if intervals < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 intervals, got {intervals}"
            )));
        }
        let h = (b - a) / intervals as f64;
        Ok(Self { a, b, intervals, h })
    }

    /// Unit interval `[0, 1]`.
    pub fn unit(intervals: usize) -> Result<Self> {
        Self::new(0.0, 1.0, intervals)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of intervals `N`; the grid has `N + 1` nodes.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node `t_k`. The last node is `b` exactly.
    pub fn node(&self, k: usize) -> f64 {
        if k == self.intervals {
            self.b
        } else {
            self.a + k as f64 * self.h
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.node(k)).collect()
    }

    /// Same spacing and node count, shifted by `delta`.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        Self::new(self.a + delta, self.b + delta, self.intervals)
    }

    /// Default interior window, `N/8 <= k <= 7N/8`.
    pub fn interior(&self) -> Window {
        Window::with_margin(self, 0.125)
    }
}

/// Inclusive node range used for every convergence and conservation metric.
///
/// Riemann-Liouville derivatives of functions with `f(a) != 0` behave like
/// `(t - a)^(-alpha)`, so nodes near both ends are excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: usize,
    pub hi: usize,
}

impl Window {
    /// Keeps `margin * N <= k <= (1 - margin) * N`.
    pub fn with_margin(grid: &Grid, margin: f64) -> Self {
        let n = grid.intervals() as f64;
        let margin = margin.clamp(0.0, 0.5);
        let lo = (margin * n - 1e-9).ceil().max(0.0) as usize;
        let hi = ((1.0 - margin) * n + 1e-9).floor() as usize;
        Self { lo, hi: hi.max(lo) }
    }

    pub fn full(grid: &Grid) -> Self {
        Self {
            lo: 0,
            hi: grid.intervals(),
        }
    }

    pub fn range(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }

    pub fn contains(&self, k: usize) -> bool {
        self.lo <= k && k <= self.hi
    }
}

/// Derivative order `alpha` in `(0, 1]`, with integer ceiling `n = 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder(alpha, "(0, 1]"))
        }
    }

    pub fn one() -> Self {
        Self(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn ceiling(self) -> u32 {
        1
    }

    /// True for the classical case, which is dispatched to exact stencils.
    pub fn is_integer(self) -> bool {
        self.0 == 1.0
    }
}

/// A `dim`-vector sampled at every node of a grid, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: Grid,
    dim: usize,
    values: Vec<f64>,
}

impl GridFn {
    /// Wraps row-major samples (`(N + 1) * dim` entries). Entries must be finite.
    pub fn new(grid: Grid, dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dim must be at least 1".into()));
        }
        if values.len() != grid.len() * dim {
            return Err(Error::DimensionMismatch {
                expected: grid.len() * dim,
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { node: i / dim });
        }
        Ok(Self { grid, dim, values })
    }

    pub fn zeros(grid: Grid, dim: usize) -> Self {
        Self {
            grid,
            dim: dim.max(1),
            values: vec![0.0; grid.len() * dim.max(1)],
        }
    }

    /// Scalar function `f(t)` sampled on the grid.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, 1, grid.nodes().into_iter().map(f).collect())
    }

    /// Vector function sampled on the grid; `f` writes `dim` components.
    pub fn from_vec_fn(grid: Grid, dim: usize, f: impl Fn(f64, &mut [f64])) -> Result<Self> {
        let mut values = vec![0.0; grid.len() * dim];
        for (k, row) in values.chunks_mut(dim.max(1)).enumerate() {
            f(grid.node(k), row);
        }
        Self::new(grid, dim, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k * self.dim..(k + 1) * self.dim]
    }

    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.values[k * self.dim + j]
    }

    /// Component `j` as a scalar grid function.
    pub fn component(&self, j: usize) -> GridFn {
        let values = (0..self.grid.len()).map(|k| self.get(k, j)).collect();
        GridFn {
            grid: self.grid,
            dim: 1,
            values,
        }
    }

    /// Stacks scalar grid functions as the components of one vector function.
    pub fn stack(parts: &[GridFn]) -> Result<GridFn> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("nothing to stack".into()))?;
        let grid = first.grid;
        let dim: usize = parts.iter().map(|p| p.dim).sum();
        let mut values = Vec::with_capacity(grid.len() * dim);
        for p in parts {
            if p.grid != grid {
                return Err(Error::GridMismatch);
            }
        }
        for k in 0..grid.len() {
            for p in parts {
                values.extend_from_slice(p.row(k));
            }
        }
        Ok(GridFn { grid, dim, values })
    }

    /// `f(a + b - t)`, i.e. the samples in reverse node order.
    pub fn reflect(&self) -> GridFn {
        let mut values = Vec::with_capacity(self.values.len());
        for k in (0..self.grid.len()).rev() {
            values.extend_from_slice(self.row(k));
        }
        GridFn {
            grid: self.grid,
            dim: self.dim,
            values,
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFn {
        GridFn {
            grid: self.grid,
            dim: self.dim,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &GridFn, f: impl Fn(f64, f64) -> f64) -> Result<GridFn> {
        self.check_compatible(other)?;
        Ok(GridFn {
            grid: self.grid,
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        })
    }

    pub fn add(&self, other: &GridFn) -> Result<GridFn> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &GridFn) -> Result<GridFn> {
        self.zip_with(other, |x, y| x - y)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFn) -> Result<GridFn> {
        self.zip_with(other, |x, y| x * y)
    }

    pub fn check_compatible(&self, other: &GridFn) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    /// Sup-norm over the nodes of `window`, all components.
    pub fn sup_norm(&self, window: Window) -> f64 {
        window
            .range()
            .flat_map(|k| self.row(k).iter().copied())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max - min` of component `j` over `window`.
    pub fn spread(&self, j: usize, window: Window) -> f64 {
        let (lo, hi) = window
            .range()
            .map(|k| self.get(k, j))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        hi - lo
    }

    /// CSV with header `t,v0,...,v{dim-1}`.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain((0..self.dim).map(|j| format!("v{j}")))
            .collect();
        let mut out = header.join(",");
        out.push('\n');
        for k in 0..self.grid.len() {
            out.push_str(&fmt_sci(self.grid.node(k)));
            for &v in self.row(k) {
                out.push(',');
                out.push_str(&fmt_sci(v));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the output of [`GridFn::to_csv`]. Nodes must form a uniform grid.
    pub fn from_csv(text: &str) -> Result<GridFn> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty CSV".into()))?;
        let dim = header.split(',').count().saturating_sub(1);
        let mut ts = Vec::new();
        let mut values = Vec::new();
        for (i, line) in lines.enumerate() {
            let mut fields = line.split(',').map(|s| s.trim().parse::<f64>());
            let t = fields
                .next()
                .and_then(|r| r.ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad time on row {i}")))?;
            ts.push(t);
            let row: std::result::Result<Vec<f64>, _> = fields.collect();
            let row = row.map_err(|e| Error::InvalidArgument(format!("row {i}: {e}")))?;
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            values.extend(row);
        }
        if ts.len() < 3 {
            return Err(Error::InvalidGrid("need at least 3 rows".into()));
        }
        let grid = Grid::new(ts[0], ts[ts.len() - 1], ts.len() - 1)?;
        GridFn::new(grid, dim, values)
    }
}

/// Formats like C's `%.12e`: twelve fractional digits, signed two-digit exponent.
pub fn fmt_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let mut out = String::with_capacity(s.len() + 2);
    let sign = if exp < 0 { '-' } else { '+' };
    let _ = write!(out, "{mantissa}e{sign}{:02}", exp.abs());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_invariants() {
        let g = Grid::new(0.0, 1.0, 10).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(10), 1.0);
        let nodes = g.nodes();
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));

        let g = Grid::new(0.1, 0.7, 3).unwrap();
        assert_eq!(g.node(3), 0.7);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(Grid::new(1.0, 1.0, 4).is_err());
        assert!(Grid::new(1.0, 0.0, 4).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        assert!(Grid::new(f64::NAN, 1.0, 4).is_err());
    }

    #[test]
    fn frac_order_range() {
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(1.5).is_err());
        assert!(FracOrder::new(-0.2).is_err());
        assert!(FracOrder::new(1.0).unwrap().is_integer());
        assert!(!FracOrder::new(0.5).unwrap().is_integer());
        assert_eq!(FracOrder::new(0.5).unwrap().ceiling(), 1);
    }

    #[test]
    fn interior_window_default() {
        let g = Grid::unit(256).unwrap();
        let w = g.interior();
        assert_eq!((w.lo, w.hi), (32, 224));
        let g = Grid::unit(100).unwrap();
        let w = g.interior();
        assert_eq!((w.lo, w.hi), (13, 87));
    }

    #[test]
    fn gridfn_rejects_non_finite_and_bad_shape() {
        let g = Grid::unit(4).unwrap();
        assert!(matches!(
            GridFn::new(g, 1, vec![0.0; 4]),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut v = vec![0.0; 10];
        v[7] = f64::INFINITY;
        assert_eq!(GridFn::new(g, 2, v), Err(Error::NonFinite { node: 3 }));
    }

    #[test]
    fn stack_and_component() {
        let g = Grid::unit(4).unwrap();
        let f = GridFn::from_fn(g, |t| t).unwrap();
        let h = GridFn::from_fn(g, |t| 2.0 * t).unwrap();
        let s = GridFn::stack(&[f.clone(), h.clone()]).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.row(2), &[0.5, 1.0]);
        assert_eq!(s.component(1), h);
    }

    #[test]
    fn sci_format_matches_c() {
        assert_eq!(fmt_sci(1.0), "1.000000000000e+00");
        assert_eq!(fmt_sci(-0.00123), "-1.230000000000e-03");
        assert_eq!(fmt_sci(0.0), "0.000000000000e+00");
        assert_eq!(fmt_sci(6.02e23), "6.020000000000e+23");
        assert_eq!(fmt_sci(1e-120), "1.000000000000e-120");
    }

    #[test]
    fn csv_roundtrip() {
        let g = Grid::new(0.0, 2.0, 8).unwrap();
        let f = GridFn::from_vec_fn(g, 2, |t, out| {
            out[0] = t.sin();
            out[1] = -t;
        })
        .unwrap();
        let text = f.to_csv();
        assert!(text.starts_with("t,v0,v1\n"));
        let back = GridFn::from_csv(&text).unwrap();
        assert_eq!(back.grid().intervals(), 8);
        for (x, y) in back.values().iter().zip(f.values()) {
            assert!((x - y).abs() <= 1e-11 * y.abs().max(1.0));
        }
    }
}
