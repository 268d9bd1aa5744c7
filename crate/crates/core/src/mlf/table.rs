//! Piecewise Chebyshev interpolant of a smooth function on `[0, hi]`.

use crate::error::Result;

const N: usize = 32;
const TAIL_TOL: f64 = 1e-14;
const MAX_DEPTH: u32 = 24;

#[derive(Debug, Clone)]
pub(crate) struct ChebTable {
    breaks: Vec<f64>,
    /// `None` marks a panel where the fit did not settle
    coeffs: Vec<Option<[f64; N]>>,
    hi: f64,
}

fn fit(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<[f64; N]> {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut vals = [0.0; N];
    for (j, v) in vals.iter_mut().enumerate() {
        let t = (std::f64::consts::PI * (j as f64 + 0.5) / N as f64).cos();
        *v = f(m + h * t)?;
    }
    let mut c = [0.0; N];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut s = 0.0;
        for (j, v) in vals.iter().enumerate() {
            s += v * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / N as f64).cos();
        }
        *ck = 2.0 * s / N as f64;
    }
    c[0] *= 0.5;
    Ok(c)
}

fn settled(c: &[f64; N]) -> bool {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    c[N - 3..].iter().all(|v| v.abs() <= TAIL_TOL * scale + 1e-300)
}

impl ChebTable {
    pub(crate) fn build(f: &dyn Fn(f64) -> Result<f64>, hi: f64) -> Result<Self> {
        let mut t = ChebTable {
            breaks: vec![0.0],
            coeffs: Vec::new(),
            hi,
        };
        let mut a = 0.0;
        let mut b = hi.min(1.0);
        while a < hi {
            t.split(f, a, b, 0)?;
            a = b;
            b = (2.0 * b).min(hi);
        }
        Ok(t)
    }

    fn split(&mut self, f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, depth: u32) -> Result<()> {
        let c = fit(f, a, b)?;
        if settled(&c) {
            self.coeffs.push(Some(c));
        } else if depth >= MAX_DEPTH {
            self.coeffs.push(None);
        } else {
            let m = 0.5 * (a + b);
            self.split(f, a, m, depth + 1)?;
            return self.split(f, m, b, depth + 1);
        }
        self.breaks.push(b);
        Ok(())
    }

    /// `None` outside `[0, hi]` or on an unsettled panel.
    pub(crate) fn eval(&self, x: f64) -> Option<f64> {
        if !(x >= 0.0 && x <= self.hi) {
            return None;
        }
        let i = self.breaks.partition_point(|b| *b <= x).clamp(1, self.coeffs.len()) - 1;
        let c = self.coeffs[i].as_ref()?;
        let (a, b) = (self.breaks[i], self.breaks[i + 1]);
        let t = (2.0 * x - a - b) / (b - a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for ck in c[1..].iter().rev() {
            let b0 = 2.0 * t * b1 - b2 + ck;
            b2 = b1;
            b1 = b0;
        }
        Some(t * b1 - b2 + c[0])
    }

    #[cfg(test)]
    pub(crate) fn panels(&self) -> usize {
        self.coeffs.len()
    }
}
