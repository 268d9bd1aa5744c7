use mlvc::hypotheses::check_hypotheses_str;
use mlvc::problem::{compute_stats, rescale, SignPattern};
use mlvc::{check_hypotheses, FunctionSpec, HypothesisOptions, Interval, MlOrder, TheoremId};
use proptest::prelude::*;

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

fn one() -> FunctionSpec {
    FunctionSpec::constant(1.0)
}

#[test]
fn eval_examples() {
    assert_eq!(FunctionSpec::monomial(1.0, 3).eval(1.0, 1).unwrap(), 3.0);
    assert_eq!(FunctionSpec::monomial(1.0, 3).eval(2.0, 2).unwrap(), 12.0);
    assert_eq!(FunctionSpec::affine(2.0, 1.0).eval(5.0, 2).unwrap(), 0.0);
    let b = FunctionSpec::bump(0.5, 0.4);
    for n in 0..4 {
        assert_eq!(b.eval(0.1, n).unwrap(), 0.0, "n={n}");
    }
    assert!(b.value(0.5) > 0.0);
    let g = FunctionSpec::gaussian(0.0, 1.0);
    assert!((g.eval(1.0, 1).unwrap() + (-0.5f64).exp()).abs() < 1e-15);
    assert!(Interval::new(1.0, 1.0).is_err());
    assert!(Interval::new(2.0, 1.0).is_err());
}

#[test]
fn stats_examples() {
    let s = compute_stats(&FunctionSpec::affine(2.0, 1.0), &one(), &iv(0.0, 1.0), 256).unwrap();
    assert_eq!(s.inf_abs_phase, 2.0);
    assert_eq!(s.sup_abs_phase, 3.0);
    assert!(s.zeros_of_phase.is_empty());
    assert_eq!(s.phase_deriv_sign, SignPattern::Positive);
    assert_eq!(s.inf_abs_phase_deriv, 1.0);

    let s = compute_stats(&FunctionSpec::affine(0.0, 1.0), &one(), &iv(-1.0, 1.0), 256).unwrap();
    assert!(s.inf_abs_phase < 1e-12);
    assert_eq!(s.zeros_of_phase.len(), 1);
    assert!(s.zeros_of_phase[0].abs() < 1e-12);

    let s = compute_stats(&FunctionSpec::monomial(1.0, 2), &one(), &iv(-1.0, 2.0), 256).unwrap();
    assert!((s.min_abs_kth_deriv(2).unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(s.phase_deriv_sign, SignPattern::Mixed);
    assert!(s.phase_deriv_monotonic);

    let s = compute_stats(&FunctionSpec::affine(0.0, 1.0), &FunctionSpec::bump(0.5, 0.5), &iv(0.0, 1.0), 256).unwrap();
    assert_eq!(s.amp_at_a, 0.0);
    assert_eq!(s.amp_at_b, 0.0);
    assert!(s.sup_abs_amp > 0.0 && s.inf_abs_amp == 0.0);
}

#[test]
fn hypothesis_examples() {
    let o = MlOrder::new(0.5, 0.7).unwrap();
    let r = check_hypotheses_str("th1", &FunctionSpec::affine(2.0, 1.0), &one(), &iv(0.0, 1.0), o).unwrap();
    assert!(r.passed(), "{}", r.failures());
    // zero of the phase inside the interval
    let r = check_hypotheses_str("th1", &FunctionSpec::affine(0.0, 1.0), &one(), &iv(-1.0, 1.0), o).unwrap();
    assert!(!r.passed());

    let o6 = MlOrder::new(0.6, 2.0).unwrap();
    let r = check_hypotheses(TheoremId::Th4_1, &FunctionSpec::affine(0.0, 1.0), &one(), &iv(0.0, 1.0), o6, &HypothesisOptions::default()).unwrap();
    assert!(!r.passed());
    assert!(r.failures().contains("alpha"));

    let o = MlOrder::new(0.7, 1.0).unwrap();
    let r = check_hypotheses(
        TheoremId::NonStat,
        &FunctionSpec::affine(0.0, 1.0),
        &FunctionSpec::gaussian(0.5, 0.2),
        &iv(0.0, 1.0),
        o,
        &HypothesisOptions::default(),
    )
    .unwrap();
    assert!(!r.passed());

    let o = MlOrder::new(0.5, 0.5).unwrap();
    let r = check_hypotheses(TheoremId::Thm2_3, &FunctionSpec::monomial(1.0, 2), &one(), &iv(-1.0, 1.0), o, &HypothesisOptions::default())
        .unwrap();
    assert!(r.passed(), "{}", r.failures());
    assert_eq!(r.vdc_k, Some(2));

    assert!(check_hypotheses_str("th9", &one(), &one(), &iv(0.0, 1.0), o).is_err());
    for id in TheoremId::ALL {
        assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
    }
}

fn affine() -> impl Strategy<Value = (f64, f64)> {
    (-5.0..5.0f64, prop_oneof![-4.0..-0.1f64, 0.1..4.0f64])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn affine_stats_are_exact((c0, c1) in affine(), a in -2.0..1.0f64, w in 0.1..3.0f64) {
        let b = a + w;
        let s = compute_stats(&FunctionSpec::affine(c0, c1), &one(), &iv(a, b), 128).unwrap();
        let (fa, fb) = (c0 + c1 * a, c0 + c1 * b);
        prop_assert!((s.sup_abs_phase - fa.abs().max(fb.abs())).abs() < 1e-12);
        prop_assert!((s.inf_abs_phase_deriv - c1.abs()).abs() < 1e-12);
        let inf = if fa * fb <= 0.0 { 0.0 } else { fa.abs().min(fb.abs()) };
        prop_assert!((s.inf_abs_phase - inf).abs() < 1e-9);
    }

    #[test]
    fn stats_stable_under_grid_doubling(c in prop::collection::vec(-2.0..2.0f64, 2..5), w in 0.5..2.0f64) {
        let phase = FunctionSpec::polynomial(c);
        let amp = FunctionSpec::gaussian(0.3, 0.7);
        let s1 = compute_stats(&phase, &amp, &iv(0.0, w), 256).unwrap();
        let s2 = compute_stats(&phase, &amp, &iv(0.0, w), 512).unwrap();
        for (x, y) in [
            (s1.inf_abs_phase, s2.inf_abs_phase),
            (s1.sup_abs_phase, s2.sup_abs_phase),
            (s1.inf_abs_phase_deriv, s2.inf_abs_phase_deriv),
            (s1.sup_abs_amp, s2.sup_abs_amp),
            (s1.amp_l1, s2.amp_l1),
        ] {
            prop_assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn rescale_identity((c0, c1) in affine(), lam in 0.0..1e4f64, c in 0.01..100.0f64, x in -3.0..3.0f64) {
        let phi = FunctionSpec::affine(c0, c1);
        let (psi, mu) = rescale(&phi, lam, c).unwrap();
        prop_assert!((mu - c * lam).abs() <= 1e-12 * mu.abs());
        prop_assert!((mu * psi.value(x) - lam * phi.value(x)).abs() <= 1e-9 * (1.0 + (lam * phi.value(x)).abs()));
    }

    #[test]
    fn function_spec_text_round_trip(c0 in -1e3..1e3f64, c1 in -1e3..1e3f64, w in 1e-3..10.0f64, k in 0u32..6) {
        for f in [
            FunctionSpec::affine(c0, c1),
            FunctionSpec::monomial(c0, k),
            FunctionSpec::polynomial(vec![c0, c1, w]),
            FunctionSpec::shifted_power(c0, w, c1),
            FunctionSpec::bump(c0, w),
            FunctionSpec::gaussian(c1, w),
        ] {
            prop_assert_eq!(f.to_string().parse::<FunctionSpec>().unwrap(), f);
        }
    }
}
