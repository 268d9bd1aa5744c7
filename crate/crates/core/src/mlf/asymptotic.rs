//! Large-argument expansion of `E_{alpha,beta}(-x)` for `0 < alpha <= 2`.

use std::f64::consts::PI;

use crate::gamma::{ln_gamma, sinpi};

/// Precomputed algebraic tail coefficients `-(-1)^k / Gamma(beta - alpha k)`.
pub(crate) struct AsymTable {
    alpha: f64,
    beta: f64,
    /// `(ln|a_k|, sign a_k)` for k = 1, 2, ...
    coef: Vec<(f64, f64)>,
    /// `ln Gamma(1 - beta + alpha k) - ln pi`, magnitude envelope
    env: Vec<f64>,
    /// `a_k` and `exp(env_k)` in linear scale (infinite when out of range)
    lin: Vec<(f64, f64)>,
}

fn ln_recip_gamma_signed(y: f64) -> (f64, f64) {
    if y >= 0.5 {
        let (l, s) = libm::lgamma_r(y);
        return (-l, if s < 0 { -1.0 } else { 1.0 });
    }
    let s = sinpi(y);
    if s == 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    (s.abs().ln() + ln_gamma(1.0 - y) - PI.ln(), s.signum())
}

impl AsymTable {
    pub fn new(alpha: f64, beta: f64, max_k: usize) -> Self {
        let mut coef = Vec::with_capacity(max_k);
        let mut env = Vec::with_capacity(max_k);
        for k in 1..=max_k {
            let y = beta - alpha * k as f64;
            let (l, s) = ln_recip_gamma_signed(y);
            let alt = if k % 2 == 0 { -1.0 } else { 1.0 };
            coef.push((l, s * alt));
            let g = 1.0 - y;
            env.push(if g > 0.0 { ln_gamma(g) - PI.ln() } else { f64::NEG_INFINITY });
        }
        let mut lin: Vec<(f64, f64)> = coef.iter().zip(&env).map(|(&(l, sg), &e)| (sg * l.exp(), e.exp())).collect();
        // integer indices: every coefficient past a pole run vanishes
        while lin.last().is_some_and(|c| c.0 == 0.0) {
            lin.pop();
        }
        AsymTable {
            alpha,
            beta,
            coef,
            env,
            lin,
        }
    }

    /// Exponentially small contribution from the saddle points.
    fn exponential(&self, x: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        if a < 1.0 {
            return 0.0;
        }
        if a == 1.0 {
            // on the Stokes line the pair collapses to half weight
            return (-x + (1.0 - b) * x.ln()).exp() * (PI * (1.0 - b)).cos();
        }
        if a == 2.0 {
            return x.powf((1.0 - b) / 2.0) * (x.sqrt() + PI * (1.0 - b) / 2.0).cos();
        }
        let r = x.powf(1.0 / a);
        let amp = (2.0 / a) * ((1.0 - b) / a * x.ln() + r * (PI / a).cos()).exp();
        amp * (r * (PI / a).sin() + PI * (1.0 - b) / a).cos()
    }

    /// Returns the value and an estimate of the truncation error.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let expo = self.exponential(x);
        let xinv = 1.0 / x;
        let mut p = 1.0;
        let mut s = 0.0;
        let mut prev = f64::INFINITY;
        let mut err = 0.0;
        for (i, &(c, e)) in self.lin.iter().enumerate() {
            p *= xinv;
            if !(c.is_finite() && e.is_finite()) || p < 1e-290 {
                return self.eval_log(x, expo);
            }
            let past = self.alpha * (i + 1) as f64 > self.beta + 1.0;
            let m = e * p;
            if past && m > prev {
                break;
            }
            s += c * p;
            if past {
                prev = m;
                err = m;
                if err < 1e-18 * (s.abs() + expo.abs()) {
                    break;
                }
            }
        }
        (s + expo, err)
    }

    fn eval_log(&self, x: f64, expo: f64) -> (f64, f64) {
        let lnx = x.ln();
        let mut s = 0.0;
        let mut prev = f64::INFINITY;
        let mut err = 0.0;
        for (i, (&(l, sg), &e)) in self.coef.iter().zip(&self.env).take(self.lin.len()).enumerate() {
            let k = (i + 1) as f64;
            let past = self.alpha * k > self.beta + 1.0;
            let m = e - k * lnx;
            if past && m > prev {
                break;
            }
            if sg != 0.0 {
                s += sg * (l - k * lnx).exp();
            }
            if past {
                prev = m;
                err = m.exp();
                if err < 1e-18 * (s.abs() + expo.abs()) {
                    break;
                }
            }
        }
        (s + expo, err)
    }
}
