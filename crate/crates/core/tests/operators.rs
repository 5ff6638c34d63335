use fracnoether_core::gamma::gamma;
use fracnoether_core::numerics::{
    d_operator, frac_integral, gl_weights, integration_by_parts_sides, interior_error, left_rl_deriv,
    left_rl_operator, power_rule_analytic, right_rl_deriv, sin_rl_analytic,
};
use fracnoether_core::{FracOrder, Grid, GridFn};
use proptest::prelude::*;

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn power_error(upsilon: f64, alpha: f64, n: usize) -> f64 {
    let g = Grid::unit(n).unwrap();
    let f = GridFn::from_fn(g, |t| t.powf(upsilon)).unwrap();
    let d = left_rl_deriv(&f, order(alpha)).unwrap();
    interior_error(&d, |t| power_rule_analytic(upsilon, alpha, 0.0, t).unwrap())
}

#[test]
fn power_rule_convergence_is_first_order() {
    for upsilon in [1.0, 2.0] {
        for alpha in [0.25, 0.5, 0.75] {
            let errs: Vec<f64> = [128, 256, 512].iter().map(|&n| power_error(upsilon, alpha, n)).collect();
            for w in errs.windows(2) {
                let ratio = w[0] / w[1];
                assert!((1.7..=2.3).contains(&ratio), "υ={upsilon} α={alpha} ratio={ratio}");
            }
        }
    }
}

#[test]
fn right_power_rule_by_reflection() {
    // _tD_b^α (b - t)^υ equals the left rule in s = b - t.
    let g = Grid::unit(1024).unwrap();
    let f = GridFn::from_fn(g, |t| (1.0 - t) * (1.0 - t)).unwrap();
    let d = right_rl_deriv(&f, order(0.5)).unwrap();
    let err = interior_error(&d, |t| power_rule_analytic(2.0, 0.5, 0.0, 1.0 - t).unwrap());
    assert!(err < 5e-3, "{err}");
}

#[test]
fn fractional_integral_power_rule() {
    // _aD_t^{-p} t = Γ(2)/Γ(2 + p) t^{1 + p}
    let g = Grid::unit(1024).unwrap();
    let f = GridFn::from_fn(g, |t| t).unwrap();
    let i = frac_integral(&f, 0.3).unwrap();
    let err = interior_error(&i, |t| power_rule_analytic(1.0, -0.3, 0.0, t).unwrap());
    assert!(err < 2e-3, "{err}");
}

#[test]
fn discrete_composition_is_exact() {
    // GL weight sequences form a semigroup under convolution, so
    // D^p D^{-q} reproduces D^{p-q} up to roundoff on every grid.
    for (p, q) in [(0.7, 0.3), (0.5, 0.5), (0.9, 0.2)] {
        for n in [128, 1024] {
            let g = Grid::unit(n).unwrap();
            let f = GridFn::from_fn(g, |t| t.exp()).unwrap();
            let lhs = left_rl_deriv(&frac_integral(&f, q).unwrap(), order(p)).unwrap();
            let rhs = left_rl_operator(&f, p - q).unwrap();
            let err = lhs.sub(&rhs).unwrap().sup_norm(g.interior());
            assert!(err <= 1e-11, "p={p} q={q} n={n} err={err}");
        }
    }
}

fn composition_error(p: f64, q: f64, n: usize) -> f64 {
    // Discrete D^p applied to the exact fractional integral of sin, against
    // the exact order-(p - q) derivative.
    let g = Grid::unit(n).unwrap();
    let integral = GridFn::new(
        g,
        1,
        g.nodes().iter().map(|&t| if t == 0.0 { 0.0 } else { sin_rl_analytic(-q, 0.0, t).unwrap() }).collect(),
    )
    .unwrap();
    let lhs = left_rl_deriv(&integral, order(p)).unwrap();
    interior_error(&lhs, |t| sin_rl_analytic(p - q, 0.0, t).unwrap())
}

#[test]
fn composition_converges() {
    for (p, q) in [(0.7, 0.3), (0.5, 0.5)] {
        let errs: Vec<f64> = [128, 256, 512, 1024].iter().map(|&n| composition_error(p, q, n)).collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((1.5..=2.5).contains(&ratio), "p={p} q={q} {errs:?}");
        }
        assert!(errs[3] <= 1e-2, "{errs:?}");
    }
}

#[test]
fn integration_by_parts_against_beta_integral() {
    // Both sides equal Γ(3)/Γ(2.5) B(2.5, 3) = 4/Γ(5.5) for f = t², g = (1 - t)², p = 1/2.
    let exact = 4.0 / gamma(5.5);
    let g = Grid::unit(1024).unwrap();
    let f = GridFn::from_fn(g, |t| t * t).unwrap();
    let h = GridFn::from_fn(g, |t| (1.0 - t) * (1.0 - t)).unwrap();
    let (lhs, rhs) = integration_by_parts_sides(&f, &h, order(0.5)).unwrap();
    assert!((lhs - exact).abs() < 2e-2 * exact);
    assert!((rhs - exact).abs() < 2e-2 * exact);
    assert!((lhs - rhs).abs() <= 0.02 * lhs.abs().max(rhs.abs()));
}

#[test]
fn d_operator_splits_exactly() {
    let g = Grid::unit(64).unwrap();
    let a = GridFn::from_fn(g, |t| t.cos()).unwrap();
    let b = GridFn::from_fn(g, |t| t * t + 1.0).unwrap();
    let c = GridFn::from_fn(g, |t| (2.0 * t).sin()).unwrap();
    let alpha = order(0.35);
    let p = vec![(a.clone(), b.clone())];
    let q = vec![(c.clone(), a.clone())];
    let both: Vec<_> = p.iter().chain(&q).cloned().collect();
    let sum = d_operator(&p, alpha).unwrap().add(&d_operator(&q, alpha).unwrap()).unwrap();
    assert_eq!(d_operator(&both, alpha).unwrap(), sum);
}

fn grid_fn_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (8usize..64).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0f64..10.0, n + 1),
            prop::collection::vec(-10.0f64..10.0, n + 1),
        )
    })
}

proptest! {
    #[test]
    fn left_derivative_is_linear((f, g) in grid_fn_strategy(), alpha in 0.05f64..=1.0) {
        let grid = Grid::unit(f.len() - 1).unwrap();
        let f = GridFn::new(grid, 1, f).unwrap();
        let g = GridFn::new(grid, 1, g).unwrap();
        let alpha = order(alpha);
        let lhs = left_rl_deriv(&f.add(&g).unwrap(), alpha).unwrap();
        let rhs = left_rl_deriv(&f, alpha).unwrap().add(&left_rl_deriv(&g, alpha).unwrap()).unwrap();
        // Roundoff bound: h^-α Σ_j |w_j| (|f| + |g|)_{k-j}.
        let w = gl_weights(alpha.value(), grid.intervals()).unwrap();
        let h = grid.h().powf(alpha.value());
        for k in 0..grid.len() {
            let bound: f64 = (0..=k)
                .map(|j| w.as_slice()[j].abs() * (f.get(k - j, 0).abs() + g.get(k - j, 0).abs()))
                .sum::<f64>() / h;
            prop_assert!((lhs.get(k, 0) - rhs.get(k, 0)).abs() <= 1e-12 * bound);
        }
    }

    #[test]
    fn reflection_duality((f, _g) in grid_fn_strategy(), alpha in 0.05f64..=1.0) {
        let n = f.len() - 1;
        let grid = Grid::new(-1.0, 2.0, n).unwrap();
        let f = GridFn::new(grid, 1, f).unwrap();
        let r = right_rl_deriv(&f, order(alpha)).unwrap();
        let l = left_rl_deriv(&f.reflect(), order(alpha)).unwrap();
        for k in 0..=n {
            prop_assert_eq!(r.get(k, 0).to_bits(), l.get(n - k, 0).to_bits());
        }
    }
}
