//! Real-axis two-sided bounds, the sector ratio and the derivative identity.

use num_complex::Complex64;

use super::{ml_eval, EvalPolicy, ImagAxisEvaluator, MlOrder};
use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::problem::FunctionSpec;

/// Which two-sided real-axis bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRegime {
    /// `(alpha, 1)`, `0 < alpha < 1`
    UnitBeta,
    /// `(alpha, alpha)`, `0 < alpha < 1`
    EqualIndices,
    /// `(alpha, beta)`, `0 < alpha <= 1`, `beta > alpha`
    LargeBeta,
}

impl BoundRegime {
    pub fn of(order: MlOrder) -> Option<Self> {
        let (a, b) = (order.alpha, order.beta);
        if a > 0.0 && a < 1.0 && b == 1.0 {
            Some(BoundRegime::UnitBeta)
        } else if a > 0.0 && a < 1.0 && b == a {
            Some(BoundRegime::EqualIndices)
        } else if a > 0.0 && a <= 1.0 && b > a {
            Some(BoundRegime::LargeBeta)
        } else {
            None
        }
    }
}

/// `(lower, upper)` with `lower <= E_{alpha,beta}(-x) <= upper`.
pub fn ml_real_bounds(order: MlOrder, x: f64) -> Result<(f64, f64)> {
    if !(x >= 0.0) {
        return Err(Error::InvalidParameter(format!("x must be >= 0, got {x}")));
    }
    let (a, b) = (order.alpha, order.beta);
    match BoundRegime::of(order) {
        Some(BoundRegime::UnitBeta) => Ok((
            1.0 / (1.0 + gamma(1.0 - a) * x),
            1.0 / (1.0 + x / gamma(1.0 + a)),
        )),
        Some(BoundRegime::EqualIndices) => {
            let g = gamma(a);
            let lo = 1.0 + (gamma(1.0 - a) / gamma(1.0 + a)).sqrt() * x;
            let hi = 1.0 + (gamma(1.0 + a) / gamma(1.0 + 2.0 * a)).sqrt() * x;
            Ok((1.0 / (g * lo * lo), 1.0 / (g * hi * hi)))
        }
        Some(BoundRegime::LargeBeta) => {
            let g = gamma(b);
            Ok((
                1.0 / (g * (1.0 + gamma(b - a) / g * x)),
                1.0 / (g * (1.0 + g / gamma(b + a) * x)),
            ))
        }
        None => Err(Error::Regime(format!(
            "no real-axis bound for (alpha, beta) = ({a}, {b})"
        ))),
    }
}

/// `|E_{alpha,beta}(z)| (1 + |z|)` on the imaginary or negative real axis.
pub fn sector_bound_ratio(order: MlOrder, z: Complex64, policy: &EvalPolicy) -> Result<f64> {
    let a = order.alpha;
    if !(a > 0.0 && a < 2.0) {
        return Err(Error::Regime(format!("sector bound needs 0 < alpha < 2, got {a}")));
    }
    let on_imag = z.re == 0.0 && z.im != 0.0;
    let on_neg = z.im == 0.0 && z.re <= 0.0;
    if !(on_imag || on_neg) {
        return Err(Error::UnsupportedRegion(
            "sector ratio is evaluated on the imaginary or negative real axis".into(),
        ));
    }
    if on_imag && a >= 1.0 {
        return Err(Error::Regime(format!(
            "imaginary axis lies outside the decay sector for alpha = {a}"
        )));
    }
    Ok(ml_eval(order, z, policy)?.norm() * (1.0 + z.norm()))
}

/// `|E_{alpha,alpha}(i lambda phi(x)) - alpha/(i lambda phi'(x)) D_h E_{alpha,1}(i lambda phi)(x)|`
/// with `D_h` the central difference of step `h`.
pub fn ml_derivative_identity_residual(
    order: MlOrder,
    phase: &FunctionSpec,
    x: f64,
    lambda: f64,
    h: f64,
    policy: &EvalPolicy,
) -> Result<f64> {
    let a = order.alpha;
    if order.beta != a {
        return Err(Error::InvalidParameter("identity needs beta = alpha".into()));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Regime(format!("identity check needs 0 < alpha <= 1, got {a}")));
    }
    if lambda == 0.0 {
        return Err(Error::DegenerateInput("lambda = 0".into()));
    }
    let d = phase.eval(x, 1)?;
    if d == 0.0 {
        return Err(Error::DegenerateInput(format!("phi'({x}) = 0")));
    }
    let e_aa = ImagAxisEvaluator::new(order, policy)?;
    let e_a1 = ImagAxisEvaluator::new(MlOrder::new(a, 1.0)?, policy)?;
    let g = |s: f64| -> Result<Complex64> { e_a1.eval(lambda * phase.eval(s, 0)?) };
    let dh = (g(x + h)? - g(x - h)?) / (2.0 * h);
    let lhs = e_aa.eval(lambda * phase.eval(x, 0)?)?;
    let rhs = Complex64::new(a, 0.0) / Complex64::new(0.0, lambda * d) * dh;
    Ok((lhs - rhs).norm())
}
