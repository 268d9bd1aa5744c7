//! Mittag-Leffler function `E_{alpha,beta}(z) = sum z^k / Gamma(alpha k + beta)`.
//!
//! Evaluation is specialised to the imaginary axis (through the doubled-index
//! decomposition) and the negative real axis (series or large-argument tail).

mod asymptotic;
mod bounds;
mod closed_form;
mod series;
mod table;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gamma::recip_gamma;
pub use bounds::{ml_derivative_identity_residual, ml_real_bounds, sector_bound_ratio, BoundRegime};

use asymptotic::AsymTable;
use table::ChebTable;

/// Index pair `(alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlOrder {
    pub alpha: f64,
    pub beta: f64,
}

impl MlOrder {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("beta must be finite, got {beta}")));
        }
        Ok(MlOrder { alpha, beta })
    }

    /// `0 < alpha <= 1`.
    pub fn is_corput_regime(&self) -> bool {
        self.alpha > 0.0 && self.alpha <= 1.0
    }

    /// `0 < alpha <= 1/2`.
    pub fn is_optimal_bound_regime(&self) -> bool {
        self.alpha > 0.0 && self.alpha <= 0.5
    }

    fn validate(&self) -> Result<()> {
        MlOrder::new(self.alpha, self.beta).map(|_| ())
    }
}

/// Evaluation controls.
///
/// `switch_radius` is measured on the scaled argument `|z|^{1/alpha}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    pub series_tol: f64,
    pub max_terms: usize,
    pub switch_radius: f64,
    pub asym_terms: usize,
    pub accum_precision: u32,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        EvalPolicy {
            series_tol: 1e-12,
            max_terms: 20_000,
            switch_radius: 60.0,
            asym_terms: 10,
            accum_precision: 60,
        }
    }
}

impl EvalPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_tol > 0.0) {
            return Err(Error::InvalidParameter("series_tol must be positive".into()));
        }
        if self.max_terms < 8 {
            return Err(Error::InvalidParameter("max_terms must be at least 8".into()));
        }
        if !(self.switch_radius > 0.0 && self.switch_radius.is_finite()) {
            return Err(Error::InvalidParameter("switch_radius must be positive".into()));
        }
        if self.asym_terms < 1 {
            return Err(Error::InvalidParameter("asym_terms must be at least 1".into()));
        }
        Ok(())
    }

    fn rel_tol(&self) -> f64 {
        (self.series_tol * 1e-4).max(1e-40)
    }

    fn key(&self) -> (u64, usize, u64, usize, u32) {
        (
            self.series_tol.to_bits(),
            self.max_terms,
            self.switch_radius.to_bits(),
            self.asym_terms,
            self.accum_precision,
        )
    }
}

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    ClosedForm,
    Series,
    Asymptotic,
    Euler,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::ClosedForm => "closed-form",
            Backend::Series => "series",
            Backend::Asymptotic => "asymptotic",
            Backend::Euler => "euler",
        })
    }
}

/// A value together with the path used and an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlValue {
    pub value: Complex64,
    pub backend: Backend,
    pub err_est: f64,
}

fn finite(v: Complex64, what: &'static str) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

fn scaled_radius(alpha: f64, z_abs: f64) -> f64 {
    z_abs.powf(1.0 / alpha)
}

/// Power series summed in MPFR.
pub fn ml_series(order: MlOrder, z: Complex64, policy: &EvalPolicy) -> Result<Complex64> {
    ml_series_detailed(order, z, policy).map(|v| v.value)
}

fn ml_series_detailed(order: MlOrder, z: Complex64, policy: &EvalPolicy) -> Result<MlValue> {
    order.validate()?;
    policy.validate()?;
    let r = scaled_radius(order.alpha, z.norm());
    if !(r <= policy.switch_radius) {
        return Err(Error::UnsupportedRegion(format!(
            "|z|^(1/alpha) = {r} exceeds switch_radius {}",
            policy.switch_radius
        )));
    }
    let prec = series::bits_for(policy.accum_precision, r);
    let terms = series::terms_for_radius(order.alpha, order.beta, r.max(1.0), policy.max_terms);
    let t = series::table(order.alpha, order.beta, prec, terms);
    let s = if z.im == 0.0 {
        series::sum_real(&t, z.re, policy.rel_tol(), policy.max_terms)?
    } else {
        series::sum_complex(&t, z, policy.rel_tol(), policy.max_terms)?
    };
    Ok(MlValue {
        value: finite(s.value, "ml_series")?,
        backend: Backend::Series,
        err_est: s.err_est,
    })
}

/// Elementary closed form, if the index pair admits one.
pub fn ml_closed_form(order: MlOrder, z: Complex64) -> Option<Complex64> {
    closed_form::ml_closed_form(order.alpha, order.beta, z)
}

/// Evaluator for `x -> E_{alpha,beta}(-x)` on `x >= 0`, reusable across calls.
pub struct NegRealEvaluator {
    order: MlOrder,
    policy: EvalPolicy,
    /// `(radius, table)`, each table built on first use
    tiers: Vec<(f64, OnceLock<Arc<series::SeriesTable>>)>,
    asym: AsymTable,
    cheb: OnceLock<Option<ChebTable>>,
    /// end of the series region in `x`
    series_end: f64,
}

impl fmt::Debug for NegRealEvaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NegRealEvaluator")
            .field("order", &self.order)
            .field("policy", &self.policy)
            .finish()
    }
}

impl NegRealEvaluator {
    pub fn new(order: MlOrder, policy: EvalPolicy) -> Result<Self> {
        order.validate()?;
        policy.validate()?;
        if order.alpha > 2.0 {
            return Err(Error::Regime(format!(
                "negative real axis evaluation needs alpha <= 2, got {}",
                order.alpha
            )));
        }
        let (a, b) = (order.alpha, order.beta);
        // precision tiers: cheaper tables for small radii
        let top = policy.switch_radius;
        let mut radii: Vec<f64> = [2.0, 5.0, 10.0, 20.0, 30.0, 40.0]
            .into_iter()
            .filter(|r| *r < top)
            .collect();
        radii.push(top);
        let tiers = radii.into_iter().map(|r| (r, OnceLock::new())).collect();
        let max_k = ((2.0 * top / a).ceil() as usize + 16).max(policy.asym_terms);
        Ok(NegRealEvaluator {
            order,
            policy,
            tiers,
            asym: AsymTable::new(a, b, max_k),
            cheb: OnceLock::new(),
            series_end: top.powf(a),
        })
    }

    pub fn order(&self) -> MlOrder {
        self.order
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.eval_detailed(x).map(|v| v.0)
    }

    /// `(value, backend, err_est)`.
    pub fn eval_detailed(&self, x: f64) -> Result<(f64, Backend, f64)> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::InvalidParameter(format!("x must be finite and >= 0, got {x}")));
        }
        if x == 0.0 {
            return Ok((recip_gamma(self.order.beta), Backend::Series, 0.0));
        }
        let r = scaled_radius(self.order.alpha, x);
        if r <= self.policy.switch_radius {
            self.eval_series(x).map(|(v, e)| (v, Backend::Series, e))
        } else {
            let (v, e) = self.eval_asymptotic(x);
            Ok((v, Backend::Asymptotic, e))
        }
    }

    /// Series backend regardless of the switch rule (up to the switch radius).
    pub fn eval_series(&self, x: f64) -> Result<(f64, f64)> {
        let r = scaled_radius(self.order.alpha, x);
        let (rr, cell) = self
            .tiers
            .iter()
            .find(|(rr, _)| r <= *rr)
            .ok_or_else(|| Error::UnsupportedRegion(format!("series radius {r} too large")))?;
        let t = cell.get_or_init(|| {
            let (a, b) = (self.order.alpha, self.order.beta);
            let prec = series::bits_for(self.policy.accum_precision, *rr);
            series::table(a, b, prec, series::terms_for_radius(a, b, *rr, self.policy.max_terms))
        });
        let s = series::sum_real(t, -x, self.policy.rel_tol(), self.policy.max_terms)?;
        if !s.value.re.is_finite() {
            return Err(Error::NonFinite("series"));
        }
        Ok((s.value.re, s.err_est))
    }

    /// Like [`eval`](Self::eval), but the series region is read from a piecewise Chebyshev
    /// interpolant of the series values (built on first use, about 1e-14 relative to the
    /// local scale).
    pub fn eval_tabulated(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::InvalidParameter(format!("x must be finite and >= 0, got {x}")));
        }
        let hi = self.series_end;
        if x > hi {
            return Ok(self.eval_asymptotic(x).0);
        }
        let table = self.cheb.get_or_init(|| {
            let f = |x: f64| -> Result<f64> {
                if x == 0.0 {
                    Ok(recip_gamma(self.order.beta))
                } else {
                    self.eval_series(x).map(|v| v.0)
                }
            };
            ChebTable::build(&f, hi).ok()
        });
        match table.as_ref().and_then(|t| t.eval(x)) {
            Some(v) => Ok(v),
            None => self.eval(x),
        }
    }

    /// Large-argument backend regardless of the switch rule.
    pub fn eval_asymptotic(&self, x: f64) -> (f64, f64) {
        self.asym.eval(x)
    }
}

type EvalKey = (u64, u64, (u64, usize, u64, usize, u32));

fn evaluator_cache() -> &'static Mutex<HashMap<EvalKey, Arc<NegRealEvaluator>>> {
    static C: OnceLock<Mutex<HashMap<EvalKey, Arc<NegRealEvaluator>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared evaluator for `(order, policy)`.
pub fn neg_real_evaluator(order: MlOrder, policy: &EvalPolicy) -> Result<Arc<NegRealEvaluator>> {
    let key = (order.alpha.to_bits(), order.beta.to_bits(), policy.key());
    if let Some(e) = evaluator_cache().lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let e = Arc::new(NegRealEvaluator::new(order, *policy)?);
    let mut map = evaluator_cache().lock().unwrap();
    Ok(map.entry(key).or_insert(e).clone())
}

/// `E_{alpha,beta}(-x)` for `x >= 0` and `0 < alpha <= 2`.
pub fn ml_neg_real(order: MlOrder, x: f64, policy: &EvalPolicy) -> Result<f64> {
    neg_real_evaluator(order, policy)?.eval(x)
}

/// `E_{alpha,beta}(i t)` through `E_{2 alpha,beta}(-t^2) + i t E_{2 alpha,alpha+beta}(-t^2)`.
#[derive(Debug, Clone)]
pub struct ImagAxisEvaluator {
    order: MlOrder,
    even: Arc<NegRealEvaluator>,
    odd: Arc<NegRealEvaluator>,
    tabulated: bool,
}

impl ImagAxisEvaluator {
    pub fn new(order: MlOrder, policy: &EvalPolicy) -> Result<Self> {
        order.validate()?;
        if order.alpha > 1.0 {
            return Err(Error::Regime(format!(
                "imaginary axis decomposition needs alpha <= 1, got {}",
                order.alpha
            )));
        }
        let even = neg_real_evaluator(MlOrder::new(2.0 * order.alpha, order.beta)?, policy)?;
        let odd = neg_real_evaluator(
            MlOrder::new(2.0 * order.alpha, order.alpha + order.beta)?,
            policy,
        )?;
        Ok(ImagAxisEvaluator {
            order,
            even,
            odd,
            tabulated: false,
        })
    }

    /// Evaluator reading both components through [`NegRealEvaluator::eval_tabulated`].
    pub fn tabulated(order: MlOrder, policy: &EvalPolicy) -> Result<Self> {
        Ok(ImagAxisEvaluator {
            tabulated: true,
            ..Self::new(order, policy)?
        })
    }

    pub fn order(&self) -> MlOrder {
        self.order
    }

    pub fn eval(&self, t: f64) -> Result<Complex64> {
        if !self.tabulated {
            return self.eval_detailed(t).map(|v| v.0);
        }
        if !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t must be finite, got {t}")));
        }
        let x = t * t;
        Ok(Complex64::new(self.even.eval_tabulated(x)?, t * self.odd.eval_tabulated(x)?))
    }

    /// Exact (untabulated) value with its error estimate.
    pub fn eval_detailed(&self, t: f64) -> Result<(Complex64, f64)> {
        if !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t must be finite, got {t}")));
        }
        let x = t * t;
        let (re, _, e1) = self.even.eval_detailed(x)?;
        let (im, _, e2) = self.odd.eval_detailed(x)?;
        Ok((Complex64::new(re, t * im), e1 + t.abs() * e2))
    }
}

/// `E_{alpha,beta}(i t)` for `0 < alpha <= 1`, default policy.
pub fn euler_decompose(order: MlOrder, t: f64) -> Result<Complex64> {
    euler_decompose_with(order, t, &EvalPolicy::default())
}

pub fn euler_decompose_with(order: MlOrder, t: f64, policy: &EvalPolicy) -> Result<Complex64> {
    ImagAxisEvaluator::new(order, policy)?.eval(t)
}

/// Dispatching evaluator.
pub fn ml_eval(order: MlOrder, z: Complex64, policy: &EvalPolicy) -> Result<Complex64> {
    ml_eval_detailed(order, z, policy).map(|v| v.value)
}

pub fn ml_eval_detailed(order: MlOrder, z: Complex64, policy: &EvalPolicy) -> Result<MlValue> {
    order.validate()?;
    policy.validate()?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter("z must be finite".into()));
    }
    if let Some(v) = ml_closed_form(order, z) {
        return Ok(MlValue {
            value: v,
            backend: Backend::ClosedForm,
            err_est: 4.0 * f64::EPSILON * v.norm(),
        });
    }
    if z.norm() == 0.0 {
        return Ok(MlValue {
            value: Complex64::new(recip_gamma(order.beta), 0.0),
            backend: Backend::Series,
            err_est: 0.0,
        });
    }
    if z.re == 0.0 && order.alpha <= 1.0 {
        let (v, e) = ImagAxisEvaluator::new(order, policy)?.eval_detailed(z.im)?;
        return Ok(MlValue {
            value: v,
            backend: Backend::Euler,
            err_est: e,
        });
    }
    if z.im == 0.0 && z.re < 0.0 && order.alpha <= 2.0 {
        let (v, b, e) = neg_real_evaluator(order, policy)?.eval_detailed(-z.re)?;
        return Ok(MlValue {
            value: Complex64::new(v, 0.0),
            backend: b,
            err_est: e,
        });
    }
    ml_series_detailed(order, z, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(a: f64, b: f64) -> MlOrder {
        MlOrder::new(a, b).unwrap()
    }

    #[test]
    fn series_trivial() {
        let p = EvalPolicy::default();
        let v = ml_series(ord(1.0, 1.0), Complex64::new(0.0, std::f64::consts::PI), &p).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        let v = ml_series(ord(1.0, 1.0), Complex64::new(0.0, 0.0), &p).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn neg_real_exp() {
        let p = EvalPolicy::default();
        let v = ml_neg_real(ord(1.0, 1.0), 5.0, &p).unwrap();
        assert!((v - (-5f64).exp()).abs() < 1e-16);
        let v = ml_neg_real(ord(1.0, 1.0), 400.0, &p).unwrap();
        assert!((v / (-400f64).exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_above_two_rejected() {
        let p = EvalPolicy::default();
        assert!(matches!(ml_neg_real(ord(2.5, 1.0), 1.0, &p), Err(Error::Regime(_))));
    }

    #[test]
    fn general_complex_far_is_unsupported() {
        let p = EvalPolicy {
            switch_radius: 1.0,
            ..EvalPolicy::default()
        };
        let r = ml_eval(ord(0.3, 0.7), Complex64::new(1.0, 1.0), &p);
        assert!(matches!(r, Err(Error::UnsupportedRegion(_))));
    }
}
