//! Grünwald-Letnikov discretizations of the left and right Riemann-Liouville
//! operators on uniform grids, analytic power-rule oracles, trapezoidal
//! quadrature and the bilinear `D` operator.
//!
//! All operators act componentwise on vector-valued grid functions. For
//! `alpha = 1` the derivatives are dispatched to exact difference stencils:
//! backward difference on the left, negated forward difference on the right.

use crate::error::{Error, Result};
use crate::gamma::{gamma, recip_gamma};
use crate::grid::{FracOrder, Grid, GridFn};

/// Grünwald-Letnikov weights `w_0..=w_K` for order `alpha`.
///
/// Negative orders give fractional-integral weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GlWeights {
    alpha: f64,
    w: Vec<f64>,
}

impl GlWeights {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// `w_0 = 1`, `w_k = w_{k-1} (k - 1 - alpha) / k`, for `alpha` in `(-1, 1]`.
pub fn gl_weights(alpha: f64, count: usize) -> Result<GlWeights> {
    if !(alpha.is_finite() && alpha > -1.0 && alpha <= 1.0) {
        return Err(Error::InvalidOrder(alpha, "(-1, 1]"));
    }
    let mut w = vec![0.0; count + 1];
    w[0] = 1.0;
    if alpha == 1.0 {
        if count >= 1 {
            w[1] = -1.0;
        }
    } else {
        for k in 1..=count {
            let kf = k as f64;
            w[k] = w[k - 1] * ((kf - 1.0 - alpha) / kf);
        }
    }
    Ok(GlWeights { alpha, w })
}

fn check_finite(f: &GridFn) -> Result<()> {
    match f.values().iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite { node: i / f.dim() }),
        None => Ok(()),
    }
}

/// `out_k = scale * sum_{j=0..=k} w_j f_{k-j}` for one component.
fn convolve_left(w: &[f64], f: &[f64], stride: usize, offset: usize, out: &mut [f64], scale: Scale) {
    let len = f.len() / stride;
    for k in 0..len {
        let mut acc = w[0] * f[k * stride + offset];
        for j in 1..=k {
            acc += w[j] * f[(k - j) * stride + offset];
        }
        out[k * stride + offset] = scale.apply(acc);
    }
}

/// `out_k = scale * sum_{j=0..=N-k} w_j f_{k+j}` for one component.
fn convolve_right(w: &[f64], f: &[f64], stride: usize, offset: usize, out: &mut [f64], scale: Scale) {
    let len = f.len() / stride;
    for k in 0..len {
        let mut acc = w[0] * f[k * stride + offset];
        for j in 1..len - k {
            acc += w[j] * f[(k + j) * stride + offset];
        }
        out[k * stride + offset] = scale.apply(acc);
    }
}

#[derive(Clone, Copy)]
enum Scale {
    Divide(f64),
    Multiply(f64),
}

impl Scale {
    #[inline]
    fn apply(self, x: f64) -> f64 {
        match self {
            Scale::Divide(d) => x / d,
            Scale::Multiply(m) => x * m,
        }
    }
}

/// Plain GL convolution for the left operator with the given weights.
///
/// Exposed so the exact `alpha = 1` stencil can be compared against it.
pub fn gl_left(f: &GridFn, weights: &GlWeights) -> Result<GridFn> {
    check_finite(f)?;
    if weights.len() < f.grid().len() {
        return Err(Error::InvalidArgument(format!(
            "need {} weights, got {}",
            f.grid().len(),
            weights.len()
        )));
    }
    let h = f.grid().h();
    let scale = if weights.alpha() >= 0.0 {
        Scale::Divide(h.powf(weights.alpha()))
    } else {
        Scale::Multiply(h.powf(-weights.alpha()))
    };
    let mut out = GridFn::zeros(*f.grid(), f.dim());
    for j in 0..f.dim() {
        convolve_left(weights.as_slice(), f.values(), f.dim(), j, out.values_mut(), scale);
    }
    Ok(out)
}

fn gl_right(f: &GridFn, weights: &GlWeights) -> Result<GridFn> {
    check_finite(f)?;
    let h = f.grid().h();
    let mut out = GridFn::zeros(*f.grid(), f.dim());
    let scale = Scale::Divide(h.powf(weights.alpha()));
    for j in 0..f.dim() {
        convolve_right(weights.as_slice(), f.values(), f.dim(), j, out.values_mut(), scale);
    }
    Ok(out)
}

/// Left Riemann-Liouville derivative `_aD_t^alpha f` at every node.
///
/// Node `t_0` is an endpoint sample (`h^-alpha f(a)`); exclude it from error
/// metrics.
pub fn left_rl_deriv(f: &GridFn, alpha: FracOrder) -> Result<GridFn> {
    if alpha.is_integer() {
        check_finite(f)?;
        let h = f.grid().h();
        let dim = f.dim();
        let v = f.values();
        let mut out = GridFn::zeros(*f.grid(), dim);
        let o = out.values_mut();
        for j in 0..dim {
            o[j] = v[j] / h;
        }
        for i in dim..v.len() {
            o[i] = (v[i] - v[i - dim]) / h;
        }
        return Ok(out);
    }
    let w = gl_weights(alpha.value(), f.grid().intervals())?;
    gl_left(f, &w)
}

/// Right Riemann-Liouville derivative `_tD_b^alpha f` at every node.
///
/// For `alpha = 1` this is `-f'` by forward differences; node `t_N` is the
/// endpoint sample.
pub fn right_rl_deriv(f: &GridFn, alpha: FracOrder) -> Result<GridFn> {
    if alpha.is_integer() {
        check_finite(f)?;
        let h = f.grid().h();
        let dim = f.dim();
        let v = f.values();
        let n = v.len();
        let mut out = GridFn::zeros(*f.grid(), dim);
        let o = out.values_mut();
        for i in 0..n - dim {
            o[i] = (v[i] - v[i + dim]) / h;
        }
        for i in n - dim..n {
            o[i] = v[i] / h;
        }
        return Ok(out);
    }
    let w = gl_weights(alpha.value(), f.grid().intervals())?;
    gl_right(f, &w)
}

/// Left fractional integral `_aD_t^{-p} f` for `p` in `(0, 1)`.
pub fn frac_integral(f: &GridFn, p: f64) -> Result<GridFn> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidOrder(p, "(0, 1)"));
    }
    let w = gl_weights(-p, f.grid().intervals())?;
    gl_left(f, &w)
}

/// Discrete left operator of any order in `(-1, 1]`; negative orders
/// integrate, zero is the identity.
pub fn left_rl_operator(f: &GridFn, order: f64) -> Result<GridFn> {
    if order > 0.0 {
        left_rl_deriv(f, FracOrder::new(order)?)
    } else if order == 0.0 {
        Ok(f.clone())
    } else {
        frac_integral(f, -order)
    }
}

/// `_aD_t^p (t - a)^upsilon = Γ(υ+1)/Γ(υ-p+1) (t - a)^(υ-p)`.
///
/// Zero when `υ - p + 1` is a pole of Γ. Negative `p` gives the fractional
/// integral.
pub fn power_rule_analytic(upsilon: f64, p: f64, a: f64, t: f64) -> Result<f64> {
    if t <= a {
        return Err(Error::InvalidArgument(format!("need t > a, got t={t}, a={a}")));
    }
    if upsilon <= -1.0 {
        return Err(Error::InvalidArgument(format!(
            "need upsilon > -1, got {upsilon}"
        )));
    }
    let coeff = gamma(upsilon + 1.0) * recip_gamma(upsilon - p + 1.0);
    if coeff == 0.0 {
        return Ok(0.0);
    }
    Ok(coeff * (t - a).powf(upsilon - p))
}

/// Right-sided power rule: `_tD_b^p (b - t)^upsilon`.
pub fn power_rule_analytic_right(upsilon: f64, p: f64, b: f64, t: f64) -> Result<f64> {
    if t >= b {
        return Err(Error::InvalidArgument(format!("need t < b, got t={t}, b={b}")));
    }
    power_rule_analytic(upsilon, p, 0.0, b - t)
}

/// Left operator of order `p` (negative: integral) applied to `sin(t - a)`,
/// by the term-wise power rule on its Taylor series.
pub fn sin_rl_analytic(p: f64, a: f64, t: f64) -> Result<f64> {
    if t <= a {
        return Err(Error::InvalidArgument(format!("need t > a, got t={t}, a={a}")));
    }
    let s = t - a;
    let mut sum = 0.0;
    for k in 0..60 {
        let e = 2.0 * k as f64 + 1.0;
        let term = s.powf(e - p) * recip_gamma(e + 1.0 - p);
        sum += if k % 2 == 0 { term } else { -term };
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    Ok(sum)
}

/// Trapezoidal rule over the whole grid for a scalar grid function.
pub fn trapezoid(f: &GridFn) -> Result<f64> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: f.dim(),
        });
    }
    let v = f.values();
    let n = v.len();
    let inner: f64 = v[1..n - 1].iter().sum();
    Ok(f.grid().h() * (0.5 * (v[0] + v[n - 1]) + inner))
}

/// `sum_i [ -g_i * _tD_b^alpha f_i + f_i * _aD_t^alpha g_i ]`.
///
/// The first factor of each pair is the right-derivative operand. Pairs are
/// accumulated in order, so splitting a list and adding the parts reproduces
/// the whole bit for bit.
pub fn d_operator(pairs: &[(GridFn, GridFn)], alpha: FracOrder) -> Result<GridFn> {
    let (f0, _) = pairs.first().ok_or(Error::EmptyFactors)?;
    let grid = *f0.grid();
    let mut acc = GridFn::zeros(grid, 1);
    for (f, g) in pairs {
        for x in [f, g] {
            if *x.grid() != grid {
                return Err(Error::GridMismatch);
            }
            if x.dim() != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    got: x.dim(),
                });
            }
        }
        let term = d_operator_pair(f, g, alpha)?;
        for (a, t) in acc.values_mut().iter_mut().zip(term.values()) {
            *a += t;
        }
    }
    Ok(acc)
}

fn d_operator_pair(f: &GridFn, g: &GridFn, alpha: FracOrder) -> Result<GridFn> {
    let rf = right_rl_deriv(f, alpha)?;
    let lg = left_rl_deriv(g, alpha)?;
    let values = (0..grid_len(f))
        .map(|k| -g.get(k, 0) * rf.get(k, 0) + f.get(k, 0) * lg.get(k, 0))
        .collect();
    GridFn::new(*f.grid(), 1, values)
}

fn grid_len(f: &GridFn) -> usize {
    f.grid().len()
}

/// `|Q(_aD_t^p f * g) - Q(f * _tD_b^p g)|` with trapezoidal `Q`.
pub fn integration_by_parts_residual(f: &GridFn, g: &GridFn, p: FracOrder) -> Result<f64> {
    let (lhs, rhs) = integration_by_parts_sides(f, g, p)?;
    Ok((lhs - rhs).abs())
}

/// The two quadratures compared by [`integration_by_parts_residual`].
pub fn integration_by_parts_sides(f: &GridFn, g: &GridFn, p: FracOrder) -> Result<(f64, f64)> {
    f.check_compatible(g)?;
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: f.dim(),
        });
    }
    let lhs = trapezoid(&left_rl_deriv(f, p)?.mul(g)?)?;
    let rhs = trapezoid(&f.mul(&right_rl_deriv(g, p)?)?)?;
    Ok((lhs, rhs))
}

/// Max absolute error of `numeric` against `exact(t)` over the interior window.
pub fn interior_error(numeric: &GridFn, exact: impl Fn(f64) -> f64) -> f64 {
    let grid: &Grid = numeric.grid();
    grid.interior()
        .range()
        .map(|k| (numeric.get(k, 0) - exact(grid.node(k))).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn weights_integer_order() {
        assert_eq!(gl_weights(1.0, 3).unwrap().as_slice(), &[1.0, -1.0, 0.0, 0.0]);
    }

    #[test]
    fn weights_half_order() {
        let w = gl_weights(0.5, 3).unwrap();
        assert_eq!(w.as_slice(), &[1.0, -0.5, -0.125, -0.0625]);
    }

    #[test]
    fn weights_integral_order() {
        let w = gl_weights(-0.5, 2).unwrap();
        assert_eq!(w.as_slice(), &[1.0, 0.5, 0.375]);
    }

    #[test]
    fn weights_reject_out_of_range() {
        assert!(gl_weights(1.01, 3).is_err());
        assert!(gl_weights(-1.0, 3).is_err());
        assert!(gl_weights(f64::NAN, 3).is_err());
        assert_eq!(gl_weights(0.3, 0).unwrap().as_slice(), &[1.0]);
    }

    #[test]
    fn left_derivative_of_t_at_one() {
        let g = Grid::unit(4096).unwrap();
        let f = GridFn::from_fn(g, |t| t).unwrap();
        let d = left_rl_deriv(&f, order(0.5)).unwrap();
        let exact = 2.0 / PI.sqrt();
        assert!((d.get(4096, 0) - exact).abs() < 1e-3);
    }

    #[test]
    fn left_derivative_of_constant_is_nonzero() {
        let g = Grid::unit(4096).unwrap();
        let c = 3.0;
        let f = GridFn::from_fn(g, |_| c).unwrap();
        let d = left_rl_deriv(&f, order(0.5)).unwrap();
        let exact = c / PI.sqrt();
        assert_relative_eq!(d.get(4096, 0), exact, max_relative = 1e-3);
    }

    #[test]
    fn integer_order_is_classical() {
        let g = Grid::unit(1000).unwrap();
        let f = GridFn::from_fn(g, |t| t * t).unwrap();
        let l = left_rl_deriv(&f, FracOrder::one()).unwrap();
        let r = right_rl_deriv(&f, FracOrder::one()).unwrap();
        let h = g.h();
        for k in 1..1000 {
            let t = g.node(k);
            assert!((l.get(k, 0) - 2.0 * t).abs() <= 1.01 * h);
            assert!((r.get(k, 0) + 2.0 * t).abs() <= 1.01 * h);
        }
    }

    #[test]
    fn right_derivative_of_b_minus_t() {
        let g = Grid::unit(4096).unwrap();
        let f = GridFn::from_fn(g, |t| 1.0 - t).unwrap();
        let d = right_rl_deriv(&f, order(0.5)).unwrap();
        assert!((d.get(0, 0) - 2.0 / PI.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn reflection_duality_is_exact() {
        let g = Grid::new(-0.3, 1.7, 64).unwrap();
        let f = GridFn::from_fn(g, |t| (3.0 * t).sin() + t * t).unwrap();
        for alpha in [0.3, 0.5, 1.0] {
            let r = right_rl_deriv(&f, order(alpha)).unwrap();
            let l = left_rl_deriv(&f.reflect(), order(alpha)).unwrap();
            for k in 0..=64 {
                assert_eq!(r.get(k, 0).to_bits(), l.get(64 - k, 0).to_bits());
            }
        }
    }

    #[test]
    fn integer_stencil_matches_gl_bitwise() {
        let g = Grid::new(0.0, 2.0, 37).unwrap();
        let f = GridFn::from_fn(g, |t| (t * 1.3).exp() - 0.7 * t).unwrap();
        let exact = left_rl_deriv(&f, FracOrder::one()).unwrap();
        let gl = gl_left(&f, &gl_weights(1.0, 37).unwrap()).unwrap();
        for (x, y) in exact.values().iter().zip(gl.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn frac_integral_of_one() {
        let g = Grid::unit(4096).unwrap();
        let f = GridFn::from_fn(g, |_| 1.0).unwrap();
        let i = frac_integral(&f, 0.5).unwrap();
        assert!((i.get(4096, 0) - 2.0 / PI.sqrt()).abs() < 2e-3);
        assert!(frac_integral(&f, 1.0).is_err());
        assert!(frac_integral(&f, 0.0).is_err());
    }

    #[test]
    fn frac_integral_of_zero_is_zero() {
        let g = Grid::unit(32).unwrap();
        let z = GridFn::zeros(g, 2);
        assert!(frac_integral(&z, 0.4).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn power_rule_values() {
        assert_relative_eq!(
            power_rule_analytic(1.0, 0.5, 0.0, 1.0).unwrap(),
            std::f64::consts::FRAC_2_SQRT_PI,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            power_rule_analytic(0.0, 0.5, 0.0, 4.0).unwrap(),
            0.282_094_791_773_878_14,
            max_relative = 1e-12
        );
        for t in [0.3, 1.0, 2.5] {
            assert_relative_eq!(power_rule_analytic(2.0, 1.0, 0.0, t).unwrap(), 2.0 * t, max_relative = 1e-12);
        }
        // Γ(υ - p + 1) has a pole: derivative of order 2 of (t - a)^1.
        assert_eq!(power_rule_analytic(1.0, 2.0, 0.0, 0.5).unwrap(), 0.0);
        assert_eq!(power_rule_analytic(0.0, 1.0, 0.0, 0.5).unwrap(), 0.0);
        assert!(power_rule_analytic(1.0, 0.5, 1.0, 1.0).is_err());
        assert!(power_rule_analytic(-1.0, 0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn d_operator_integer_order_is_product_rule() {
        let g = Grid::unit(200).unwrap();
        let t = GridFn::from_fn(g, |t| t).unwrap();
        let d = d_operator(&[(t.clone(), t.clone())], FracOrder::one()).unwrap();
        for k in 1..200 {
            assert!((d.get(k, 0) - 2.0 * g.node(k)).abs() <= 10.0 * g.h());
        }
    }

    #[test]
    fn d_operator_with_zero_factor() {
        let g = Grid::unit(50).unwrap();
        let f = GridFn::from_fn(g, |t| t.cos()).unwrap();
        let z = GridFn::zeros(g, 1);
        for alpha in [0.4, 1.0] {
            let a = d_operator(&[(f.clone(), z.clone())], order(alpha)).unwrap();
            let b = d_operator(&[(z.clone(), f.clone())], order(alpha)).unwrap();
            assert!(a.values().iter().chain(b.values()).all(|&v| v == 0.0));
        }
    }

    #[test]
    fn d_operator_rejects_mismatch() {
        let f = GridFn::from_fn(Grid::unit(10).unwrap(), |t| t).unwrap();
        let g = GridFn::from_fn(Grid::unit(12).unwrap(), |t| t).unwrap();
        assert_eq!(d_operator(&[(f, g)], order(0.5)), Err(Error::GridMismatch));
        assert_eq!(d_operator(&[], order(0.5)), Err(Error::EmptyFactors));
    }

    #[test]
    fn ibp_zero_input() {
        let g = Grid::unit(64).unwrap();
        let z = GridFn::zeros(g, 1);
        let f = GridFn::from_fn(g, |t| t.exp()).unwrap();
        assert_eq!(integration_by_parts_residual(&z, &f, order(0.5)).unwrap(), 0.0);
    }

    #[test]
    fn ibp_classical_boundary_term_vanishes() {
        let g = Grid::unit(2048).unwrap();
        let f = GridFn::from_fn(g, |t| (PI * t).sin()).unwrap();
        let r = integration_by_parts_residual(&f, &f, FracOrder::one()).unwrap();
        assert!(r < 1e-3, "{r}");
    }

    #[test]
    fn sin_series_orders() {
        for t in [0.2, 1.0, 2.5] {
            assert_relative_eq!(sin_rl_analytic(0.0, 0.0, t).unwrap(), t.sin(), max_relative = 1e-13);
            assert_relative_eq!(sin_rl_analytic(1.0, 0.0, t).unwrap(), t.cos(), max_relative = 1e-12);
            assert_relative_eq!(sin_rl_analytic(-1.0, 0.0, t).unwrap(), 1.0 - t.cos(), max_relative = 1e-12);
        }
    }

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let g = Grid::new(1.0, 3.0, 7).unwrap();
        let f = GridFn::from_fn(g, |t| 2.0 * t + 1.0).unwrap();
        assert_relative_eq!(trapezoid(&f).unwrap(), 10.0, max_relative = 1e-14);
    }
}
