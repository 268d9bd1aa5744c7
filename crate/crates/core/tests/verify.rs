use mlvc::fit::fit_power_law;
use mlvc::gamma::gamma;
use mlvc::problem::compute_stats;
use mlvc::quad::{log_grid, QuadPolicy};
use mlvc::verify::{
    case, envelope, explicit_lower, explicit_upper, large_beta_constants, registry, riemann_lebesgue_check, run_cases,
    zero_phase_lower_case, EnvelopeParams,
};
use mlvc::{run_case, CheckMode, Error, FunctionSpec, Interval, MlOrder, TheoremId};
use proptest::prelude::*;

fn ord(a: f64, b: f64) -> MlOrder {
    MlOrder::new(a, b).unwrap()
}

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

#[test]
fn envelope_examples() {
    let st = compute_stats(&FunctionSpec::affine(2.0, 1.0), &FunctionSpec::constant(1.0), &unit(), 256).unwrap();
    let p = EnvelopeParams::new(ord(0.5, 0.7), Some(&st), 10.0);
    assert!((envelope(TheoremId::Th1, &p).unwrap() - 1.0 / 21.0).abs() < 1e-12);

    let (k_big, k_small) = large_beta_constants(0.4, 0.9);
    assert!((k_big - 1.0 / gamma(1.3)).abs() < 1e-15);
    assert!((k_small - gamma(1.3) / gamma(2.1)).abs() < 1e-15);

    let st = compute_stats(&FunctionSpec::affine(1.0, 1.0), &FunctionSpec::constant(1.0), &unit(), 256).unwrap();
    for id in [TheoremId::Th4_1, TheoremId::Th4_2] {
        let o = if id == TheoremId::Th4_1 { ord(0.4, 0.9) } else { ord(0.3, 0.6) };
        for lam in [0.0, 1.0, 1e3] {
            let p = EnvelopeParams::new(o, Some(&st), lam);
            let (lo, hi) = (explicit_lower(id, &p).unwrap(), explicit_upper(id, &p).unwrap());
            assert!(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo <= hi, "{id} lambda={lam}");
        }
    }
    let p = EnvelopeParams::new(ord(0.5, 0.7), None, 1.0);
    assert!(matches!(envelope(TheoremId::Th1, &p), Err(Error::MissingStat(_))));
    assert!(explicit_upper(TheoremId::Th1, &EnvelopeParams::new(ord(0.5, 0.7), Some(&st), 1.0)).is_err());
}

#[test]
fn fit_examples() {
    let pts: Vec<(f64, f64)> = log_grid(1.0, 1e4, 17).into_iter().map(|x| (x, 3.0 / x)).collect();
    let f = fit_power_law(&pts, (10.0, 1e4), false).unwrap();
    assert!((f.slope + 1.0).abs() < 1e-12);
    assert!((f.r2 - 1.0).abs() < 1e-12);
    assert_eq!(f.points, 13);

    let pts: Vec<(f64, f64)> = log_grid(1.0, 1e4, 17)
        .into_iter()
        .map(|x| (x, (2.0 + x).ln() / (x * x)))
        .collect();
    let f = fit_power_law(&pts, (10.0, 1e4), true).unwrap();
    assert!((f.slope + 2.0).abs() < 1e-3, "{}", f.slope);

    assert!(matches!(fit_power_law(&pts, (1e5, 1e6), false), Err(Error::InsufficientData { .. })));
    let bad = vec![(1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 1.0), (5.0, 1.0)];
    assert!(matches!(fit_power_law(&bad, (0.0, 10.0), false), Err(Error::NonPositiveValue { .. })));
}

#[test]
fn run_case_examples() {
    let pol = QuadPolicy::default();
    let r = run_case(&case(TheoremId::Th1), &pol).unwrap();
    assert!(r.pass, "{}", r.summary_line());
    let f = r.fit.unwrap();
    assert!((f.slope + 1.0).abs() < 0.05);
    assert_eq!(r.rows.len(), 17);
    assert!(r.to_csv().starts_with("lambda,"));

    let r = run_case(&case(TheoremId::Th4_1), &pol).unwrap();
    assert_eq!(r.mode, CheckMode::Explicit);
    assert!(r.pass && r.fit.is_none());
    assert!(r.max_ratio.unwrap() <= 1.0 + 1e-9);

    let lower = zero_phase_lower_case(TheoremId::Th4_2).unwrap();
    assert!(run_case(&lower, &pol).unwrap().pass);
    assert!(zero_phase_lower_case(TheoremId::Th1).is_err());

    let mut bad = case(TheoremId::Th1);
    if let mlvc::verify::CaseProblem::Integral(s) = &mut bad.problem {
        s.iv = Interval::new(-3.0, 1.0).unwrap();
    }
    assert!(matches!(run_case(&bad, &pol), Err(Error::HypothesisFailure { .. })));
}

#[test]
fn registry_is_complete_and_ordered() {
    let reg = registry();
    assert_eq!(reg.len(), TheoremId::ALL.len());
    for (c, id) in reg.iter().zip(TheoremId::ALL) {
        assert_eq!(c.id, id);
    }
    let some = [case(TheoremId::Th1_2), case(TheoremId::Th2_1)];
    let out = run_cases(&some, &QuadPolicy::default());
    assert_eq!(out.len(), 2);
    assert_eq!(out[0].as_ref().unwrap().id, TheoremId::Th1_2);
    assert_eq!(out[1].as_ref().unwrap().id, TheoremId::Th2_1);
}

#[test]
fn riemann_lebesgue_examples() {
    let k = log_grid(1.0, 1e4, 17);
    let f = FunctionSpec::affine(1.0, 1.0);
    let r = riemann_lebesgue_check(ord(0.5, 0.7), &f, &unit(), &k).unwrap();
    assert_eq!(r.expected_slope, -1.0);
    assert!(r.pass, "{}", r.summary_line());
    let iv = Interval::new(1.0, 2.0).unwrap();
    let r = riemann_lebesgue_check(ord(0.5, 0.5), &f, &iv, &k).unwrap();
    assert_eq!(r.expected_slope, -2.0);
    assert!(r.pass, "{}", r.summary_line());
    assert!(matches!(riemann_lebesgue_check(ord(1.0, 1.0), &f, &iv, &k), Err(Error::Regime(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn explicit_envelopes_are_ordered(a in 0.05..0.5f64, db in 0.01..2.0f64, lam in 0.0..1e4f64, c0 in 0.0..3.0f64) {
        let st = compute_stats(&FunctionSpec::affine(c0, 1.0), &FunctionSpec::constant(1.0), &unit(), 64).unwrap();
        let p = EnvelopeParams::new(ord(a, 2.0 * a + db), Some(&st), lam);
        let lo = explicit_lower(TheoremId::Th4_1, &p).unwrap();
        let hi = explicit_upper(TheoremId::Th4_1, &p).unwrap();
        prop_assert!(lo.is_finite() && hi.is_finite());
        prop_assert!(lo >= 0.0 && hi > 0.0);
    }

    #[test]
    fn fit_recovers_synthetic_slopes(s in -3.0..-0.1f64, c in 0.1..10.0f64) {
        let pts: Vec<(f64, f64)> = log_grid(1.0, 1e4, 17).into_iter().map(|x| (x, c * x.powf(s))).collect();
        let f = fit_power_law(&pts, (1.0, 1e4), false).unwrap();
        prop_assert!((f.slope - s).abs() < 1e-10);
        prop_assert!((f.intercept - c.ln()).abs() < 1e-9);
    }
}
