//! Oscillatory integrals `int_a^b E_{alpha,beta}(i lambda theta(x)) psi(x) dx`.
//!
//! `theta = phi` for the direct variant and `theta = (phi - phi(a))^alpha` for the
//! shifted-power variant.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gauss::GaussLegendre;
use crate::mlf::{EvalPolicy, ImagAxisEvaluator, MlOrder};
use crate::problem::{compute_stats, SignPattern};
use crate::{FunctionSpec, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Direct,
    ShiftedPower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSpec {
    pub order: MlOrder,
    pub iv: Interval,
    pub phase: FunctionSpec,
    pub amp: FunctionSpec,
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPolicy {
    pub nodes_per_panel: usize,
    pub panels_per_unit_phase: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub eval: EvalPolicy,
}

impl Default for QuadPolicy {
    fn default() -> Self {
        QuadPolicy {
            nodes_per_panel: 16,
            panels_per_unit_phase: 4.0,
            abs_tol: 1e-9,
            max_panels: 200_000,
            eval: EvalPolicy::default(),
        }
    }
}

impl QuadPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_panel < 8 {
            return Err(Error::InvalidParameter("nodes_per_panel must be at least 8".into()));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter("abs_tol must be positive".into()));
        }
        if !(self.panels_per_unit_phase > 0.0) {
            return Err(Error::InvalidParameter("panels_per_unit_phase must be positive".into()));
        }
        if self.max_panels < 8 {
            return Err(Error::InvalidParameter("max_panels must be at least 8".into()));
        }
        self.eval.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub err_est: f64,
    pub panels_used: usize,
}

/// Geometric grading of the first panel for the shifted-power variant.
const GRADE_RATIO: f64 = 0.2;
const GRADE_LEVELS: i32 = 18;
/// Panels per parallel work item.
const CHUNK: usize = 64;

/// An integral prepared for repeated evaluation at different `lambda`.
pub struct Integrator {
    spec: IntegralSpec,
    policy: QuadPolicy,
    rule: GaussLegendre<f64>,
    ml: ImagAxisEvaluator,
    range: f64,
    phi_a: f64,
}

impl Integrator {
    pub fn new(spec: &IntegralSpec, policy: &QuadPolicy) -> Result<Self> {
        policy.validate()?;
        if !spec.iv.is_finite() {
            return Err(Error::InvalidParameter("quadrature needs a finite interval".into()));
        }
        let stats = compute_stats(&spec.phase, &spec.amp, &spec.iv, 256)?;
        let phi_a = spec.phase.eval(spec.iv.a, 0)?;
        let range = match spec.variant {
            Variant::Direct => stats.phase_max - stats.phase_min,
            Variant::ShiftedPower => {
                if stats.phase_deriv_sign != SignPattern::Positive {
                    return Err(Error::InvalidParameter(
                        "shifted-power variant needs an increasing phase".into(),
                    ));
                }
                (spec.phase.eval(spec.iv.b, 0)? - phi_a).powf(spec.order.alpha)
            }
        };
        Ok(Integrator {
            spec: spec.clone(),
            policy: *policy,
            rule: GaussLegendre::new(policy.nodes_per_panel),
            ml: ImagAxisEvaluator::tabulated(spec.order, &policy.eval)?,
            range,
            phi_a,
        })
    }

    pub fn spec(&self) -> &IntegralSpec {
        &self.spec
    }

    fn theta(&self, x: f64) -> Result<f64> {
        let p = self.spec.phase.eval(x, 0)?;
        Ok(match self.spec.variant {
            Variant::Direct => p,
            Variant::ShiftedPower => (p - self.phi_a).max(0.0).powf(self.spec.order.alpha),
        })
    }

    fn integrand(&self, lambda: f64, x: f64) -> Result<Complex64> {
        let psi = self.spec.amp.eval(x, 0)?;
        if psi == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(self.ml.eval(lambda * self.theta(x)?)? * psi)
    }

    fn panel(&self, lambda: f64, lo: f64, hi: f64) -> Result<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for (x, w) in self.rule.mapped(lo, hi) {
            s += self.integrand(lambda, x)? * w;
        }
        Ok(s)
    }

    fn first_panel_graded(&self, lambda: f64, lo: f64, hi: f64) -> Result<Complex64> {
        let h = hi - lo;
        let mut s = Complex64::new(0.0, 0.0);
        let mut right = hi;
        for j in 1..=GRADE_LEVELS {
            let left = lo + h * GRADE_RATIO.powi(j);
            s += self.panel(lambda, left, right)?;
            right = left;
        }
        s += self.panel(lambda, lo, right)?;
        Ok(s)
    }

    /// Composite rule with `n` equal panels.
    fn rule_sum(&self, lambda: f64, n: usize) -> Result<Complex64> {
        let (a, b) = (self.spec.iv.a, self.spec.iv.b);
        let h = (b - a) / n as f64;
        let graded = self.spec.variant == Variant::ShiftedPower;
        let chunks: Vec<Result<Complex64>> = (0..n.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut s = Complex64::new(0.0, 0.0);
                for p in c * CHUNK..((c + 1) * CHUNK).min(n) {
                    let lo = a + h * p as f64;
                    let hi = if p + 1 == n { b } else { a + h * (p + 1) as f64 };
                    s += if graded && p == 0 {
                        self.first_panel_graded(lambda, lo, hi)?
                    } else {
                        self.panel(lambda, lo, hi)?
                    };
                }
                Ok(s)
            })
            .collect();
        let mut s = Complex64::new(0.0, 0.0);
        for c in chunks {
            s += c?;
        }
        Ok(s)
    }

    /// Panel count used at `lambda` before the refinement step.
    pub fn panels_for(&self, lambda: f64) -> usize {
        let want = (self.policy.panels_per_unit_phase * lambda * self.range).ceil();
        let want = if want.is_finite() { want as usize } else { usize::MAX };
        want.max(4).min(self.policy.max_panels / 2)
    }

    pub fn compute(&self, lambda: f64) -> Result<QuadResult> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        let n = self.panels_for(lambda);
        let coarse = self.rule_sum(lambda, n)?;
        let fine = self.rule_sum(lambda, 2 * n)?;
        let err_est = (fine - coarse).norm();
        let res = QuadResult {
            value: fine,
            err_est,
            panels_used: 2 * n,
        };
        if !(res.value.re.is_finite() && res.value.im.is_finite()) {
            return Err(Error::NonFinite("quadrature"));
        }
        if err_est > self.policy.abs_tol {
            return Err(Error::ToleranceNotMet {
                value_re: fine.re,
                value_im: fine.im,
                err_est,
                abs_tol: self.policy.abs_tol,
                panels_used: 2 * n,
            });
        }
        Ok(res)
    }

    /// Composite trapezoid with one Richardson step.
    pub fn oracle(&self, lambda: f64) -> Result<Complex64> {
        let (a, b) = (self.spec.iv.a, self.spec.iv.b);
        let n = (16.0 * lambda * (b - a) + 4096.0).ceil() as usize;
        let trap = |m: usize| -> Result<Complex64> {
            let h = (b - a) / m as f64;
            let mut s = (self.integrand(lambda, a)? + self.integrand(lambda, b)?) * 0.5;
            for i in 1..m {
                s += self.integrand(lambda, a + h * i as f64)?;
            }
            Ok(s * h)
        };
        let t1 = trap(n)?;
        let t2 = trap(2 * n)?;
        Ok((t2 * 4.0 - t1) / 3.0)
    }
}

pub fn compute_integral(spec: &IntegralSpec, lambda: f64, policy: &QuadPolicy) -> Result<QuadResult> {
    Integrator::new(spec, policy)?.compute(lambda)
}

/// Independent reference value (trapezoid plus Richardson).
pub fn oracle_integral(spec: &IntegralSpec, lambda: f64) -> Result<Complex64> {
    Integrator::new(spec, &QuadPolicy::default())?.oracle(lambda)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    ToleranceNotMet,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub value: Complex64,
    pub err_est: f64,
    pub status: RowStatus,
}

impl SweepRow {
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    pub fn is_ok(&self) -> bool {
        self.status == RowStatus::Ok
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub const CSV_HEADER: &'static str = "lambda,re,im,abs,err_est";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:?},{:?},{:?},{:?},{:?}",
                r.lambda,
                r.value.re,
                r.value.im,
                r.abs(),
                r.err_est
            );
        }
        s
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.is_ok())
    }
}

/// Checks that a grid is sorted ascending with finite nonnegative entries.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
        return Err(Error::InvalidParameter("grid values must be finite and nonnegative".into()));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("grid must be sorted ascending".into()));
    }
    Ok(())
}

/// Evaluates the integral on a grid; row failures are recorded, not raised.
pub fn sweep(spec: &IntegralSpec, grid: &[f64], policy: &QuadPolicy) -> Result<SweepTable> {
    validate_grid(grid)?;
    if grid.is_empty() {
        return Ok(SweepTable::default());
    }
    let integ = Integrator::new(spec, policy)?;
    let rows = grid
        .par_iter()
        .map(|&l| match integ.compute(l) {
            Ok(r) => SweepRow {
                lambda: l,
                value: r.value,
                err_est: r.err_est,
                status: RowStatus::Ok,
            },
            Err(Error::ToleranceNotMet {
                value_re,
                value_im,
                err_est,
                ..
            }) => SweepRow {
                lambda: l,
                value: Complex64::new(value_re, value_im),
                err_est,
                status: RowStatus::ToleranceNotMet,
            },
            Err(e) => SweepRow {
                lambda: l,
                value: Complex64::new(f64::NAN, f64::NAN),
                err_est: f64::NAN,
                status: RowStatus::Failed(e.to_string()),
            },
        })
        .collect();
    Ok(SweepTable { rows })
}

/// `n` log-spaced points from `start` to `stop` inclusive.
pub fn log_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let (l0, l1) = (start.log10(), stop.log10());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        start
                    } else if i == n - 1 {
                        stop
                    } else {
                        10f64.powf(l0 + (l1 - l0) * i as f64 / (n - 1) as f64)
                    }
                })
                .collect()
        }
    }
}
