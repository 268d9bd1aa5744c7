//! Faddeeva function `w(z) = exp(-z^2) erfc(-iz)`.
//!
//! Weideman's rational expansion in the upper half plane, reflection below it.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

const N: usize = 40;

struct Weideman {
    l: f64,
    coeffs: Vec<f64>,
}

fn table() -> &'static Weideman {
    static T: OnceLock<Weideman> = OnceLock::new();
    T.get_or_init(|| {
        let m = 2 * N;
        let m2 = 2 * m;
        let l = (N as f64 / 2f64.sqrt()).sqrt();
        let mut f = vec![0.0; m2];
        for (j, fj) in f.iter_mut().enumerate().skip(1) {
            let k = j as f64 - m as f64;
            let theta = k * PI / m as f64;
            let t = l * (theta / 2.0).tan();
            *fj = (-t * t).exp() * (l * l + t * t);
        }
        // fftshift, then the real part of a length-m2 DFT
        let g: Vec<f64> = (0..m2).map(|i| f[(i + m) % m2]).collect();
        let coeffs = (1..=N)
            .map(|q| {
                let mut s = 0.0;
                for (i, gi) in g.iter().enumerate() {
                    let ang = -2.0 * PI * ((q * i) % m2) as f64 / m2 as f64;
                    s += gi * ang.cos();
                }
                s / m2 as f64
            })
            .collect();
        Weideman { l, coeffs }
    })
}

fn w_upper(z: Complex64) -> Complex64 {
    let t = table();
    let i = Complex64::i();
    let lmiz = Complex64::new(t.l, 0.0) - i * z;
    let zz = (Complex64::new(t.l, 0.0) + i * z) / lmiz;
    let mut p = Complex64::new(0.0, 0.0);
    for c in t.coeffs.iter().rev() {
        p = p * zz + c;
    }
    2.0 * p / (lmiz * lmiz) + (1.0 / PI.sqrt()) / lmiz
}

/// Faddeeva function on the whole complex plane.
pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        w_upper(z)
    } else {
        2.0 * (-z * z).exp() - w_upper(-z)
    }
}

/// `exp(z^2) erfc(-z)`.
pub fn exp_sq_erfc_neg(z: Complex64) -> Complex64 {
    faddeeva(Complex64::new(z.im, -z.re))
}
