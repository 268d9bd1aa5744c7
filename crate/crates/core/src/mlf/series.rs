//! Power series backend, accumulated in MPFR.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rug::{Assign, Float};

use crate::error::{Error, Result};

/// Coefficients `1/Gamma(alpha k + beta)` at a fixed binary precision.
pub(crate) struct SeriesTable {
    pub prec: u32,
    pub coeffs: Vec<Float>,
    /// `-ln Gamma(alpha k + beta)` ignoring poles, used for tail estimates.
    pub ln_env: Vec<f64>,
}

fn env(alpha: f64, beta: f64, k: usize) -> f64 {
    let y = alpha * k as f64 + beta;
    if y > 0.0 {
        -libm::lgamma_r(y).0
    } else {
        f64::INFINITY
    }
}

impl SeriesTable {
    fn build(alpha: f64, beta: f64, prec: u32, terms: usize) -> Self {
        let mut coeffs = Vec::with_capacity(terms);
        let mut ln_env = Vec::with_capacity(terms);
        let a = Float::with_val(prec, alpha);
        for k in 0..terms {
            let y = Float::with_val(prec, &a * (k as u32)) + beta;
            let c = if y.is_integer() && y <= 0 {
                Float::with_val(prec, 0)
            } else {
                y.gamma().recip()
            };
            ln_env.push(env(alpha, beta, k));
            coeffs.push(c);
        }
        SeriesTable {
            prec,
            coeffs,
            ln_env,
        }
    }
}

/// Number of terms needed so that the tail at scaled radius `r` is negligible.
pub(crate) fn terms_for_radius(alpha: f64, beta: f64, r: f64, max_terms: usize) -> usize {
    let lnx = if r > 0.0 { alpha * r.ln() } else { f64::NEG_INFINITY };
    // stop once past the peak and the term is e^{-(r + 60)} below the peak
    let mut k = 1usize;
    while k < max_terms {
        let y = alpha * k as f64 + beta;
        if y > r + 2.0 && y > 1.0 {
            let lt = env(alpha, beta, k) + k as f64 * lnx;
            if lt < -2.0 * r - 80.0 || lnx == f64::NEG_INFINITY {
                return (k + 8).min(max_terms);
            }
        }
        k += 1;
    }
    max_terms
}

/// Working precision in bits for digits `digits` at scaled radius `r`.
pub(crate) fn bits_for(digits: u32, r: f64) -> u32 {
    let base = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32;
    let guard = (2.0 * r / std::f64::consts::LN_2).ceil() as u32 + 32;
    (base + guard).div_ceil(64) * 64
}

type Key = (u64, u64, u32);

fn cache() -> &'static Mutex<HashMap<Key, Arc<SeriesTable>>> {
    static C: OnceLock<Mutex<HashMap<Key, Arc<SeriesTable>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared coefficient table with at least `prec` bits and `terms` entries.
pub(crate) fn table(alpha: f64, beta: f64, prec: u32, terms: usize) -> Arc<SeriesTable> {
    let key = (alpha.to_bits(), beta.to_bits(), prec);
    {
        let map = cache().lock().unwrap();
        if let Some(t) = map.get(&key) {
            if t.coeffs.len() >= terms {
                return t.clone();
            }
        }
    }
    let t = Arc::new(SeriesTable::build(alpha, beta, prec, terms));
    let mut map = cache().lock().unwrap();
    let entry = map.entry(key).or_insert_with(|| t.clone());
    if entry.coeffs.len() < terms {
        *entry = t.clone();
    }
    entry.clone()
}

/// Result of a series summation.
pub(crate) struct SeriesSum {
    pub value: Complex64,
    pub err_est: f64,
}

/// Sums `sum c_k z^k` for complex `z`; `rel_tol` is the relative tail target.
pub(crate) fn sum_complex(
    t: &SeriesTable,
    z: Complex64,
    rel_tol: f64,
    max_terms: usize,
) -> Result<SeriesSum> {
    let p = t.prec;
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(SeriesSum {
            value: Complex64::new(t.coeffs[0].to_f64(), 0.0),
            err_est: 0.0,
        });
    }
    let zr = Float::with_val(p, z.re);
    let zi = Float::with_val(p, z.im);
    let mut pr = Float::with_val(p, 1);
    let mut pi = Float::with_val(p, 0);
    let mut sr = Float::with_val(p, 0);
    let mut si = Float::with_val(p, 0);
    let mut tmp = Float::new(p);
    let mut tmp2 = Float::new(p);
    let lnz = z.norm().ln();
    let n = t.coeffs.len().min(max_terms);
    for k in 0..n {
        let c = &t.coeffs[k];
        tmp.assign(c * &pr);
        sr += &tmp;
        tmp.assign(c * &pi);
        si += &tmp;
        // p <- p z
        tmp.assign(&pr * &zr);
        tmp2.assign(&pi * &zi);
        tmp -= &tmp2;
        tmp2.assign(&pr * &zi);
        pi *= &zr;
        pi += &tmp2;
        std::mem::swap(&mut pr, &mut tmp);
        if k + 1 < n && k % 4 == 3 {
            if let Some(err) = tail_ok(t, k + 1, lnz, rel_tol, || {
                Complex64::new(sr.to_f64(), si.to_f64()).norm()
            }) {
                return Ok(SeriesSum {
                    value: Complex64::new(sr.to_f64(), si.to_f64()),
                    err_est: err,
                });
            }
        }
    }
    if n == t.coeffs.len() && n < max_terms {
        // table sized so that its last terms are negligible at this radius
        return Ok(SeriesSum {
            value: Complex64::new(sr.to_f64(), si.to_f64()),
            err_est: (t.ln_env[n - 1] + (n - 1) as f64 * lnz).exp(),
        });
    }
    Err(Error::NoConvergence { terms: n })
}

/// Sums the series at the real point `y`.
pub(crate) fn sum_real(t: &SeriesTable, y: f64, rel_tol: f64, max_terms: usize) -> Result<SeriesSum> {
    let p = t.prec;
    if y == 0.0 {
        return Ok(SeriesSum {
            value: Complex64::new(t.coeffs[0].to_f64(), 0.0),
            err_est: 0.0,
        });
    }
    let yf = Float::with_val(p, y);
    let mut pw = Float::with_val(p, 1);
    let mut s = Float::with_val(p, 0);
    let mut tmp = Float::new(p);
    let lny = y.abs().ln();
    let n = t.coeffs.len().min(max_terms);
    for k in 0..n {
        tmp.assign(&t.coeffs[k] * &pw);
        s += &tmp;
        pw *= &yf;
        if k + 1 < n && k % 4 == 3 {
            if let Some(err) = tail_ok(t, k + 1, lny, rel_tol, || s.to_f64().abs()) {
                return Ok(SeriesSum {
                    value: Complex64::new(s.to_f64(), 0.0),
                    err_est: err,
                });
            }
        }
    }
    if n == t.coeffs.len() && n < max_terms {
        return Ok(SeriesSum {
            value: Complex64::new(s.to_f64(), 0.0),
            err_est: (t.ln_env[n - 1] + (n - 1) as f64 * lny).exp(),
        });
    }
    Err(Error::NoConvergence { terms: n })
}

/// Tail bound check for the terms from index `k` on.
fn tail_ok<F: FnOnce() -> f64>(t: &SeriesTable, k: usize, lnz: f64, rel_tol: f64, sum: F) -> Option<f64> {
    if k + 1 >= t.ln_env.len() {
        return None;
    }
    let l0 = t.ln_env[k] + k as f64 * lnz;
    let l1 = t.ln_env[k + 1] + (k + 1) as f64 * lnz;
    if !l0.is_finite() || !l1.is_finite() {
        return None;
    }
    let ratio = (l1 - l0).exp();
    if ratio >= 0.5 {
        return None;
    }
    let s = sum();
    let tail = 2.0 * l0.exp();
    if tail <= rel_tol * s || (s == 0.0 && tail == 0.0) {
        Some(tail)
    } else {
        None
    }
}
