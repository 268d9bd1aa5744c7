use mlvc::tfpde::{dispersive_check, solve, symbol, TfpdeParams, TfpdeSolver};
use mlvc::{ml_eval, ComplexValue, EvalPolicy, FunctionSpec, MlOrder};
use proptest::prelude::*;

fn small(alpha: f64, ell: f64, mu: f64) -> TfpdeParams {
    let mut p = TfpdeParams::new(alpha, ell, mu);
    p.x_grid = (0..41).map(|i| -5.0 + 0.25 * i as f64).collect();
    p
}

#[test]
fn initial_datum_is_recovered() {
    let p = small(0.6, 2.0, 1.0);
    let u = solve(&p, 0.0).unwrap();
    for (x, v) in p.x_grid.iter().zip(&u) {
        assert!((v - ComplexValue::new((-0.5 * x * x).exp(), 0.0)).norm() < 1e-8, "x={x}: {v}");
    }
    let mut q = small(0.6, 2.0, 1.0);
    // compactly supported data have slowly decaying transforms
    q.init = FunctionSpec::bump(0.0, 3.0);
    q.xi_max = 100.0;
    let u = solve(&q, 0.0).unwrap();
    for (x, v) in q.x_grid.iter().zip(&u) {
        assert!((v.re - q.init.value(*x)).abs() < 1e-8 && v.im.abs() < 1e-8, "x={x}");
    }
}

#[test]
fn even_data_give_even_solutions() {
    let p = small(0.7, 2.0, 1.0);
    let solver = TfpdeSolver::new(&p, &EvalPolicy::default()).unwrap();
    for t in [0.5, 7.0, 300.0] {
        let u = solver.solve(t).unwrap();
        let n = u.len();
        for i in 0..n / 2 {
            assert!((u[i] - u[n - 1 - i]).norm() < 1e-8, "t={t} i={i}");
        }
    }
}

#[test]
fn flat_symbol_gives_scalar_evolution() {
    // ell = mu = 1 makes the symbol identically 1: u = E_{alpha,1}(i t^alpha) psi
    for alpha in [0.5, 0.999] {
        let p = small(alpha, 1.0, 1.0);
        let solver = TfpdeSolver::new(&p, &EvalPolicy::default()).unwrap();
        let o = MlOrder::new(alpha, 1.0).unwrap();
        for t in [1.0f64, 10.0, 100.0] {
            let e = ml_eval(o, ComplexValue::new(0.0, t.powf(alpha)), &EvalPolicy::default()).unwrap();
            let sup = solver.sup_norm(t).unwrap();
            assert!((sup - e.norm()).abs() < 1e-8, "alpha={alpha} t={t}: {sup} vs {}", e.norm());
        }
    }
}

#[test]
fn dispersive_decay_example() {
    let p = TfpdeParams::new(0.8, 2.0, 1.0);
    let r = dispersive_check(&p).unwrap();
    let f = r.fit.unwrap();
    assert!(f.slope <= -0.65, "{}", f.slope);
    assert!(r.pass);
}

#[test]
fn invalid_parameters() {
    assert!(solve(&TfpdeParams::new(1.0, 1.0, 1.0), 1.0).is_err());
    assert!(solve(&TfpdeParams::new(0.5, 0.0, 1.0), 1.0).is_err());
    assert!(solve(&TfpdeParams::new(0.5, 1.0, 1.0), -1.0).is_err());
    let mut p = TfpdeParams::new(0.5, 1.0, 1.0);
    p.init = FunctionSpec::affine(0.0, 1.0);
    assert!(solve(&p, 1.0).is_err());
}

proptest! {
    #[test]
    fn symbol_stays_in_range(ell in 0.01..10.0f64, mu in 0.01..10.0f64, xi in -1e4..1e4f64) {
        let p = TfpdeParams::new(0.5, ell, mu);
        let (lo, hi) = p.symbol_range();
        let s = symbol(&p, xi);
        prop_assert!(s >= lo * (1.0 - 1e-12) && s <= hi * (1.0 + 1e-12), "{s} not in [{lo}, {hi}]");
        prop_assert_eq!(s, symbol(&p, -xi));
    }
}
