//! Log-log least-squares decay fits.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Fitted power law `y ~ exp(intercept) x^slope`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit<T = f64> {
    pub slope: T,
    pub intercept: T,
    pub r2: T,
    pub window: (T, T),
    pub points: usize,
}

/// Minimum number of rows inside the fit window.
pub const MIN_FIT_POINTS: usize = 5;

/// Least squares on `(ln x, ln y)` (or `ln(y / ln(2 + x))` with `log_factor`)
/// over the points with `x` in `window`.
pub fn fit_power_law<T: Real>(points: &[(T, T)], window: (T, T), log_factor: bool) -> Result<DecayFit<T>> {
    let sel: Vec<(T, T)> = points
        .iter()
        .copied()
        .filter(|(x, _)| *x >= window.0 && *x <= window.1)
        .collect();
    if sel.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            have: sel.len(),
            need: MIN_FIT_POINTS,
        });
    }
    let mut xs = Vec::with_capacity(sel.len());
    let mut ys = Vec::with_capacity(sel.len());
    for (x, y) in sel {
        if !(y > T::zero()) || !(x > T::zero()) {
            return Err(Error::NonPositiveValue {
                lambda: x.as_f64(),
                value: y.as_f64(),
            });
        }
        let mut v = y;
        if log_factor {
            v = v / (T::lit(2.0) + x).ln();
        }
        xs.push(x.ln());
        ys.push(v.ln());
    }
    let n = T::from_usize(xs.len()).unwrap();
    let mx = xs.iter().fold(T::zero(), |a, b| a + *b) / n;
    let my = ys.iter().fold(T::zero(), |a, b| a + *b) / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    let mut syy = T::zero();
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (*x - mx, *y - my);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == T::zero() {
        T::one()
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok(DecayFit {
        slope,
        intercept,
        r2,
        window,
        points: xs.len(),
    })
}
