//! Gamma function helpers on the real line.

use std::f64::consts::PI;

/// `sin(pi x)` with exact zeros at integers.
pub fn sinpi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]
    if r == r.trunc() {
        return 0.0;
    }
    if r.abs() <= 0.25 {
        (PI * r).sin()
    } else if r > 0.75 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.75 {
        -(PI * (1.0 + r)).sin()
    } else if r > 0.0 {
        (PI * (0.5 - r)).cos()
    } else {
        -(PI * (0.5 + r)).cos()
    }
}

/// True when `x` is a pole of Gamma.
#[inline]
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.trunc()
}

/// `1/Gamma(x)`; exactly zero at the poles of Gamma.
///
/// Entire in `x`. For `x < -170` the magnitude can exceed the `f64` range
/// and the result saturates to a signed infinity.
pub fn recip_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_gamma_pole(x) {
        return 0.0;
    }
    if x >= 0.5 {
        if x > 171.0 {
            return (-ln_gamma(x)).exp();
        }
        return 1.0 / libm::tgamma(x);
    }
    // reflection: 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    let s = sinpi(x);
    let y = 1.0 - x;
    if y > 171.0 {
        let l = ln_gamma(y) + s.abs().ln() - PI.ln();
        return s.signum() * l.exp();
    }
    s * libm::tgamma(y) / PI
}

/// `Gamma(x)`; infinite at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_gamma_pole(x) {
        return f64::INFINITY;
    }
    libm::tgamma(x)
}

/// `ln|Gamma(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// `ln|1/Gamma(x)|` together with the sign of `1/Gamma(x)`.
/// Returns `(-inf, 0)` at poles.
pub fn ln_abs_recip_gamma(x: f64) -> (f64, f64) {
    if is_gamma_pole(x) {
        return (f64::NEG_INFINITY, 0.0);
    }
    let (l, s) = libm::lgamma_r(x);
    (-l, if s < 0 { -1.0 } else { 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poles_are_exact_zeros() {
        for n in 0..60 {
            assert_eq!(recip_gamma(-(n as f64)), 0.0);
        }
    }

    #[test]
    fn half_integer() {
        let v = recip_gamma(0.5);
        assert!((v - 0.5641895835477563).abs() < 1e-15);
        assert!((recip_gamma(-0.5) + 0.28209479177387814).abs() < 1e-15);
        assert!((recip_gamma(-1.5) - 0.42314218766081724).abs() < 1e-15);
    }

    #[test]
    fn near_pole_is_small_and_signed() {
        let v = recip_gamma(-3.0 + 1e-10);
        assert!(v.abs() < 1e-8);
        assert!(v < 0.0);
    }

    #[test]
    fn sinpi_exact() {
        assert_eq!(sinpi(3.0), 0.0);
        assert_eq!(sinpi(-7.0), 0.0);
        assert!((sinpi(0.5) - 1.0).abs() < 1e-16);
        assert!((sinpi(-2.5) + 1.0).abs() < 1e-16);
        assert!((sinpi(1.0 / 6.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn large_argument() {
        // just past the switch to the logarithmic branch, still a normal float
        let v = recip_gamma(171.2);
        let l = -ln_gamma(171.2);
        assert!((v.ln() - l).abs() < 1e-12);
        let w = recip_gamma(-180.5);
        assert!(w.is_finite() || w.is_infinite());
    }
}
