use mlvc::frac::{
    caputo_deriv, caputo_power_rule, eigen_residual, frac_integral, int_by_parts_parts, int_by_parts_residual, rl_deriv,
    semigroup_parts, semigroup_residual, FracOperator, FracSpec, MeshPolicy, Side,
};
use mlvc::gamma::{gamma, recip_gamma};
use mlvc::{Error, FunctionSpec, Interval};
use proptest::prelude::*;

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

fn left(alpha: f64, phi: FunctionSpec, a: f64, b: f64) -> FracSpec {
    FracSpec { alpha, phi, iv: iv(a, b), side: Side::Left }
}

fn id() -> FunctionSpec {
    FunctionSpec::affine(0.0, 1.0)
}

fn one() -> FunctionSpec {
    FunctionSpec::constant(1.0)
}

/// `(s - a)^p` as a shifted power.
fn pow(p: f64, a: f64) -> FunctionSpec {
    FunctionSpec::shifted_power(1.0, p, a)
}

#[test]
fn integral_examples() {
    for alpha in [0.2, 0.5, 0.9] {
        let s = left(alpha, id(), -1.0, 2.0);
        for x in [-0.5, 0.3, 2.0] {
            let want = (x + 1.0f64).powf(alpha) * recip_gamma(alpha + 1.0);
            let got = frac_integral(&s, &one(), x).unwrap();
            assert!((got - want).abs() < 1e-10 * want.max(1.0), "alpha={alpha} x={x}: {got} vs {want}");
        }
        assert_eq!(frac_integral(&s, &one(), -1.0).unwrap(), 0.0);
    }
    // plain integral of 1 + s from 0 to 1.5
    let got = frac_integral(&left(1.0, id(), 0.0, 2.0), &FunctionSpec::affine(1.0, 1.0), 1.5).unwrap();
    assert!((got - 2.625).abs() < 1e-12);
    // with respect to phi = s + s^2
    let phi = FunctionSpec::polynomial(vec![0.0, 1.0, 1.0]);
    let got = frac_integral(&left(0.4, phi, 0.0, 1.0), &one(), 0.5).unwrap();
    assert!((got - 0.75f64.powf(0.4) / gamma(1.4)).abs() < 1e-10);
    // right-sided
    let s = FracSpec { side: Side::Right, ..left(0.3, id(), 0.0, 1.0) };
    let got = frac_integral(&s, &one(), 0.25).unwrap();
    assert!((got - 0.75f64.powf(0.3) / gamma(1.3)).abs() < 1e-10);
    // second-order power rule for the integral
    let got = frac_integral(&left(0.6, id(), 0.0, 1.0), &pow(2.0, 0.0), 0.8).unwrap();
    assert!((got - 2.0 * 0.8f64.powf(2.6) / gamma(3.6)).abs() < 1e-10);
    assert!(frac_integral(&left(0.0, id(), 0.0, 1.0), &one(), 0.5).is_err());
    assert!(frac_integral(&left(0.5, id(), 0.0, 1.0), &one(), 1.5).is_err());
}

#[test]
fn caputo_examples() {
    let s = left(0.5, id(), 0.0, 2.0);
    assert!(caputo_deriv(&s, &FunctionSpec::constant(3.0), 1.3).unwrap().abs() < 1e-14);
    for alpha in [0.1, 0.5, 0.8] {
        let s = left(alpha, id(), 0.5, 2.0);
        let x = 1.7;
        let got = caputo_deriv(&s, &FunctionSpec::affine(-0.5, 1.0), x).unwrap();
        let want = (x - 0.5f64).powf(1.0 - alpha) / gamma(2.0 - alpha);
        assert!((got - want).abs() < 1e-9, "alpha={alpha}");
        for p in [1.0, 2.0, 3.0] {
            let got = caputo_deriv(&s, &pow(p, 0.5), x).unwrap();
            let want = caputo_power_rule(alpha, p, 0.5, x);
            assert!((got - want).abs() < 1e-6 * want.abs().max(1.0), "alpha={alpha} p={p}: {got} vs {want}");
        }
    }
    // close to the first derivative, but Gamma(2.001) keeps it 8.5e-4 away from 2
    let got = caputo_deriv(&left(0.999, id(), 0.0, 2.0), &pow(2.0, 0.0), 1.0).unwrap();
    assert!((got - 2.0 / gamma(2.001)).abs() < 1e-6);
    assert!((got - 2.0).abs() > 5e-4);
    let got = caputo_deriv(&left(1.0, id(), 0.0, 2.0), &pow(2.0, 0.0), 1.0).unwrap();
    assert!((got - 2.0).abs() < 1e-12);
}

#[test]
fn riemann_liouville_examples() {
    let s = left(0.4, id(), 0.0, 1.0);
    let f = pow(2.0, 0.0);
    let (r, c) = (rl_deriv(&s, &f, 0.6).unwrap(), caputo_deriv(&s, &f, 0.6).unwrap());
    assert_eq!(r, c);
    let got = rl_deriv(&s, &one(), 0.6).unwrap();
    let want = 0.6f64.powf(-0.4) * recip_gamma(0.6);
    assert!((got - want).abs() < 1e-10);
    assert!(matches!(rl_deriv(&s, &one(), 0.0), Err(Error::DegenerateInput(_))));
    assert!(matches!(rl_deriv(&left(1.0, id(), 0.0, 1.0), &one(), 0.5), Err(Error::Regime(_))));
}

#[test]
fn eigenfunction_examples() {
    assert_eq!(eigen_residual(0.5, &id(), &iv(0.0, 1.0), 0.0, 0.5).unwrap(), 0.0);
    assert!(eigen_residual(1.0, &id(), &iv(0.0, 1.0), 2.0, 0.7).unwrap() < 1e-6);
    let phi = FunctionSpec::polynomial(vec![0.0, 1.0, 1.0]);
    assert!(eigen_residual(0.7, &phi, &iv(0.0, 1.0), 1.0, 0.5).unwrap() < 1e-5);
    let phis = [id(), phi, FunctionSpec::affine(1.0, 2.0)];
    for alpha in [0.3, 0.6, 0.9] {
        for p in &phis {
            for lam in [1.0, 5.0, 20.0] {
                let r = eigen_residual(alpha, p, &iv(0.0, 1.0), lam, 0.8).unwrap();
                assert!(r <= 1e-5 * (1.0 + lam), "alpha={alpha} phi={p} lambda={lam}: {r}");
            }
        }
    }
}

#[test]
fn semigroup_examples() {
    let i = iv(0.0, 1.0);
    assert!(semigroup_residual(0.6, 0.6, &id(), &FunctionSpec::constant(2.0), &i, 0.5).unwrap() < 1e-14);
    let (lhs, rhs) = semigroup_parts(0.6, 0.6, &id(), &pow(2.0, 0.0), &i, 0.5).unwrap();
    assert!((rhs - 1.233_324_426_286_790_1).abs() < 1e-8, "{rhs}");
    assert!((lhs - rhs).abs() < 1e-5, "{lhs} vs {rhs}");
    let phi = FunctionSpec::polynomial(vec![0.0, 1.0, 0.5]);
    assert!(semigroup_residual(0.7, 0.5, &phi, &FunctionSpec::polynomial(vec![0.0, 0.0, 1.0, 1.0]), &i, 0.8).unwrap() < 1e-5);
    assert!(semigroup_residual(0.5, 0.5, &id(), &pow(2.0, 0.0), &i, 0.5).is_err());
    assert!(semigroup_residual(0.3, 0.4, &id(), &pow(2.0, 0.0), &i, 0.5).is_err());
}

#[test]
fn integration_by_parts_examples() {
    let i = iv(0.0, 1.0);
    let p = int_by_parts_parts(0.5, &id(), &FunctionSpec::affine(1.0, 1.0), &one(), &i).unwrap();
    assert!(p.lhs.abs() < 1e-14);
    assert!(p.residual() < 1e-10);
    let r = int_by_parts_residual(0.5, &id(), &FunctionSpec::bump(0.5, 0.4), &pow(2.0, 0.0), &i).unwrap();
    assert!(r < 1e-4, "{r}");
    let phi = FunctionSpec::polynomial(vec![0.0, 1.0, 1.0]);
    let r = int_by_parts_residual(0.3, &phi, &FunctionSpec::affine(1.0, -0.5), &FunctionSpec::affine(0.0, 2.0), &i).unwrap();
    assert!(r < 1e-4, "{r}");
}

#[test]
fn coarse_mesh_still_converges() {
    let spec = left(0.5, id(), 0.0, 1.0);
    let mesh = MeshPolicy { panels: 2, nodes: 8, ..MeshPolicy::default() };
    let op = FracOperator::new(&spec).unwrap().with_mesh(mesh);
    let got = op.caputo(&pow(2.0, 0.0), 0.9).unwrap();
    assert!((got - caputo_power_rule(0.5, 2.0, 0.0, 0.9)).abs() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn caputo_inverts_integral_on_powers(alpha in 0.05..0.95f64, p in 1.0..3.0f64, x in 0.1..1.0f64) {
        // D^alpha (s^p) is the power rule; I^alpha of it is s^p again
        let s = left(alpha, id(), 0.0, 1.0);
        let d = caputo_deriv(&s, &pow(p, 0.0), x).unwrap();
        prop_assert!((d - caputo_power_rule(alpha, p, 0.0, x)).abs() < 1e-6 * (1.0 + d.abs()));
        let q = p - alpha;
        let c = gamma(p + 1.0) / gamma(q + 1.0);
        let back = c * frac_integral(&s, &pow(q, 0.0), x).unwrap();
        prop_assert!((back - x.powf(p)).abs() < 1e-8);
    }
}
