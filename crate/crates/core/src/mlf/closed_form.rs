//! Elementary closed forms of `E_{alpha,beta}` for special index pairs.

use num_complex::Complex64;

use crate::special::exp_sq_erfc_neg;

type C = Complex64;

fn is_int(x: f64) -> bool {
    x.is_finite() && x == x.trunc()
}

/// Principal square root with argument in (-pi, pi].
fn csqrt(z: C) -> C {
    if z.im == 0.0 && z.re < 0.0 {
        C::new(0.0, (-z.re).sqrt())
    } else {
        z.sqrt()
    }
}

/// `sum_{k >= n} z^k / k!`, tail of the exponential series.
fn exp_tail(z: C, n: usize) -> C {
    if z.norm() > n as f64 + 1.0 {
        let mut head = C::new(0.0, 0.0);
        let mut t = C::new(1.0, 0.0);
        for k in 0..n {
            head += t;
            t = t * z / (k as f64 + 1.0);
        }
        return z.exp() - head;
    }
    // direct summation, no cancellation for small |z|
    let mut t = C::new(1.0, 0.0);
    for k in 0..n {
        t = t * z / (k as f64 + 1.0);
    }
    let mut s = C::new(0.0, 0.0);
    let mut k = n;
    loop {
        s += t;
        k += 1;
        t = t * z / k as f64;
        if t.norm() <= 1e-18 * s.norm() || k > n + 400 {
            return s;
        }
    }
}

/// `sum_{k >= n} z^k / (2k + p)!` for `p` in {0, 1}, via `w = sqrt z`.
fn hyp_tail(z: C, n: usize, p: usize) -> C {
    let w = csqrt(z);
    if w.norm() > 2.0 * n as f64 + 2.0 {
        let full = if p == 0 {
            w.cosh()
        } else if w.norm() == 0.0 {
            C::new(1.0, 0.0)
        } else {
            w.sinh() / w
        };
        let mut head = C::new(0.0, 0.0);
        let mut t = C::new(1.0, 0.0) / fact(p);
        for k in 0..n {
            head += t;
            let j = 2 * k + p;
            t = t * z / ((j + 1) * (j + 2)) as f64;
        }
        return full - head;
    }
    let mut t = C::new(1.0, 0.0) / fact(p);
    for k in 0..n {
        let j = 2 * k + p;
        t = t * z / ((j + 1) * (j + 2)) as f64;
    }
    let mut s = C::new(0.0, 0.0);
    let mut k = n;
    loop {
        s += t;
        let j = 2 * k + p;
        t = t * z / ((j + 1) * (j + 2)) as f64;
        k += 1;
        if t.norm() <= 1e-18 * s.norm() || k > n + 400 {
            return s;
        }
    }
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn zpow(z: C, m: i64) -> C {
    z.powi(m as i32)
}

/// Closed form of `E_{alpha,beta}(z)` when the index pair admits one.
pub fn ml_closed_form(alpha: f64, beta: f64, z: C) -> Option<C> {
    if !is_int(beta) && !(alpha == 0.5 && beta == 1.0) {
        return None;
    }
    let v = if alpha == 1.0 {
        if beta >= 1.0 {
            // E_{1,m}(z) = z^{1-m} (e^z - sum_{k<m-1} z^k/k!)
            let m = beta as usize;
            if m == 1 {
                z.exp()
            } else if z.norm() == 0.0 {
                C::new(1.0 / fact(m - 1), 0.0)
            } else {
                exp_tail(z, m - 1) * zpow(z, 1 - m as i64)
            }
        } else {
            // E_{1,-m}(z) = z^{m+1} e^z
            let m = (-beta) as i64;
            zpow(z, m + 1) * z.exp()
        }
    } else if alpha == 0.5 && beta == 1.0 {
        exp_sq_erfc_neg(z)
    } else if alpha == 2.0 {
        let b = beta as i64;
        if b >= 1 && b % 2 == 1 {
            // E_{2,2m+1}(z) = z^{-m} (cosh sqrt z - sum_{k<m} z^k/(2k)!)
            let m = (b - 1) / 2;
            if m == 0 {
                csqrt(z).cosh()
            } else if z.norm() == 0.0 {
                C::new(1.0 / fact(2 * m as usize), 0.0)
            } else {
                hyp_tail(z, m as usize, 0) * zpow(z, -m)
            }
        } else if b >= 2 {
            // E_{2,2m}(z) = z^{1-m} (sinh sqrt z / sqrt z - sum_{k<m-1} z^k/(2k+1)!)
            let m = b / 2;
            if z.norm() == 0.0 {
                C::new(1.0 / fact(2 * m as usize - 1), 0.0)
            } else {
                hyp_tail(z, (m - 1) as usize, 1) * zpow(z, 1 - m)
            }
        } else if b <= 0 && b % 2 == 0 {
            // E_{2,-2m}(z) = z^m sqrt z sinh sqrt z
            let m = -b / 2;
            let w = csqrt(z);
            zpow(z, m) * w * w.sinh()
        } else {
            // E_{2,-2m+1}(z) = z^m cosh sqrt z
            let m = (1 - b) / 2;
            zpow(z, m) * csqrt(z).cosh()
        }
    } else {
        return None;
    };
    (v.re.is_finite() && v.im.is_finite()).then_some(v)
}
