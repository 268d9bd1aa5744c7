//! Intervals, phases and amplitudes, their statistics, and hypothesis checks.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gauss::GaussLegendre;
use crate::scalar::Real;

/// Highest derivative order exposed for the bump family.
pub const BUMP_MAX_DERIV: usize = 12;
/// Highest derivative order exposed for the gaussian family.
pub const GAUSSIAN_MAX_DERIV: usize = 24;
/// Absolute tolerance for declaring a phase value a zero.
pub const ZERO_TOL: f64 = 1e-10;
/// Largest k for which `min |phi^(k)|` is tabulated.
pub const MAX_STAT_DERIV: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T = f64> {
    pub a: T,
    pub b: T,
}

impl<T: Real> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidParameter(format!(
                "interval needs a < b, got [{a:?}, {b:?}]"
            )));
        }
        Ok(Interval { a, b })
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    pub fn len(&self) -> T {
        self.b - self.a
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.a && x <= self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Phase,
    Amplitude,
}

/// Closed-form function families.
#[derive(Debug, Clone, PartialEq)]
pub enum Family<T = f64> {
    /// `c0 + c1 x`
    Affine { c0: T, c1: T },
    /// `c x^k`
    Monomial { c: T, k: u32 },
    /// `sum c_i x^i`
    Polynomial(Vec<T>),
    /// `c (x - shift)^exponent`, defined for `x >= shift` unless the exponent is an integer
    ShiftedPower { c: T, exponent: T, shift: T },
    /// `exp(-1/(1-u^2))` for `|u| < 1`, `u = (x - center)/width`
    Bump { center: T, width: T },
    /// `exp(-u^2/2)`, `u = (x - center)/width`
    Gaussian { center: T, width: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec<T = f64> {
    pub family: Family<T>,
    pub role: Role,
}

fn falling(p: f64, n: usize) -> f64 {
    (0..n).map(|i| p - i as f64).product()
}

fn poly_eval<T: Real>(c: &[T], x: T) -> T {
    c.iter().rev().fold(T::zero(), |acc, ci| acc * x + *ci)
}

fn poly_deriv(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, ci)| ci * i as f64)
        .collect()
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

/// Polynomials `P_n` with `d^n/du^n exp(-1/(1-u^2)) = P_n(u) (1-u^2)^{-2n} exp(-1/(1-u^2))`.
fn bump_polys() -> &'static [Vec<f64>] {
    use std::sync::OnceLock;
    static P: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    P.get_or_init(|| {
        let one_m_u2_sq = [1.0, 0.0, -2.0, 0.0, 1.0];
        let mut out = vec![vec![1.0]];
        for n in 0..BUMP_MAX_DERIV {
            let p = &out[n];
            let a = poly_mul(&one_m_u2_sq, &poly_deriv(p));
            // 4 n u (1 - u^2) - 2 u
            let nf = n as f64;
            let b = poly_mul(&[0.0, 4.0 * nf - 2.0, 0.0, -4.0 * nf], p);
            out.push(poly_add(&a, &b));
        }
        out
    })
}

impl<T: Real> FunctionSpec<T> {
    pub fn new(family: Family<T>) -> Self {
        FunctionSpec {
            family,
            role: Role::Amplitude,
        }
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn constant(c: T) -> Self {
        Self::new(Family::Polynomial(vec![c]))
    }

    pub fn affine(c0: T, c1: T) -> Self {
        Self::new(Family::Affine { c0, c1 })
    }

    pub fn monomial(c: T, k: u32) -> Self {
        Self::new(Family::Monomial { c, k })
    }

    pub fn polynomial(coeffs: Vec<T>) -> Self {
        Self::new(Family::Polynomial(coeffs))
    }

    pub fn shifted_power(c: T, exponent: T, shift: T) -> Self {
        Self::new(Family::ShiftedPower { c, exponent, shift })
    }

    pub fn bump(center: T, width: T) -> Self {
        Self::new(Family::Bump { center, width })
    }

    pub fn gaussian(center: T, width: T) -> Self {
        Self::new(Family::Gaussian { center, width })
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Affine { .. } => "affine",
            Family::Monomial { .. } => "monomial",
            Family::Polynomial(_) => "polynomial",
            Family::ShiftedPower { .. } => "shifted_power",
            Family::Bump { .. } => "bump",
            Family::Gaussian { .. } => "gaussian",
        }
    }

    /// Highest derivative order available (`usize::MAX` for polynomials).
    pub fn max_deriv(&self) -> usize {
        match self.family {
            Family::Bump { .. } => BUMP_MAX_DERIV,
            Family::Gaussian { .. } => GAUSSIAN_MAX_DERIV,
            _ => usize::MAX,
        }
    }

    /// True for families that are polynomials in `x`.
    pub fn is_polynomial(&self) -> bool {
        match &self.family {
            Family::Affine { .. } | Family::Monomial { .. } | Family::Polynomial(_) => true,
            Family::ShiftedPower { exponent, .. } => {
                *exponent >= T::zero() && exponent.fract() == T::zero()
            }
            _ => false,
        }
    }

    /// Support of the function, if compact.
    pub fn support(&self) -> Option<(T, T)> {
        match self.family {
            Family::Bump { center, width } => Some((center - width, center + width)),
            _ => None,
        }
    }

    /// Value of the `n`-th derivative at `x`.
    pub fn eval(&self, x: T, n: usize) -> Result<T> {
        if !x.is_finite() {
            return Err(Error::InvalidParameter("evaluation point must be finite".into()));
        }
        if n > self.max_deriv() {
            return Err(Error::UnsupportedDerivative {
                family: self.family_name(),
                order: n,
            });
        }
        let xf = x.as_f64();
        let v = match &self.family {
            Family::Affine { c0, c1 } => match n {
                0 => return Ok(*c0 + *c1 * x),
                1 => return Ok(*c1),
                _ => return Ok(T::zero()),
            },
            Family::Monomial { c, k } => {
                let k = *k as usize;
                if n > k {
                    return Ok(T::zero());
                }
                let f = T::lit(falling(k as f64, n));
                return Ok(*c * f * x.powi((k - n) as i32));
            }
            Family::Polynomial(cs) => {
                if n >= cs.len() {
                    return Ok(T::zero());
                }
                let d: Vec<T> = cs
                    .iter()
                    .enumerate()
                    .skip(n)
                    .map(|(i, ci)| *ci * T::lit(falling(i as f64, n)))
                    .collect();
                return Ok(poly_eval(&d, x));
            }
            Family::ShiftedPower { c, exponent, shift } => {
                let p = exponent.as_f64();
                let f = falling(p, n);
                if f == 0.0 {
                    return Ok(T::zero());
                }
                let e = p - n as f64;
                let d = x - *shift;
                let int_exp = p.fract() == 0.0;
                if d < T::zero() && !int_exp {
                    return Err(Error::InvalidParameter(format!(
                        "shifted power with exponent {p} is undefined left of its shift"
                    )));
                }
                if d == T::zero() {
                    if e < 0.0 {
                        return Err(Error::UnsupportedDerivative {
                            family: "shifted_power",
                            order: n,
                        });
                    }
                    return Ok(if e == 0.0 { *c * T::lit(f) } else { T::zero() });
                }
                let pw = if int_exp {
                    d.powi(e as i32)
                } else {
                    d.powf(T::lit(e))
                };
                return Ok(*c * T::lit(f) * pw);
            }
            Family::Bump { center, width } => {
                let w = width.as_f64();
                let u = (xf - center.as_f64()) / w;
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    let q = 1.0 - u * u;
                    let p = poly_eval(&bump_polys()[n], u);
                    if p == 0.0 {
                        0.0
                    } else {
                        let l = -1.0 / q - 2.0 * n as f64 * q.ln() - n as f64 * w.ln();
                        p * l.exp()
                    }
                }
            }
            Family::Gaussian { center, width } => {
                let w = width.as_f64();
                let u = (xf - center.as_f64()) / w;
                // probabilists' Hermite recursion
                let (mut h0, mut h1) = (1.0, u);
                let he = if n == 0 {
                    1.0
                } else {
                    for k in 1..n {
                        let h2 = u * h1 - k as f64 * h0;
                        h0 = h1;
                        h1 = h2;
                    }
                    h1
                };
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sign * he * (-0.5 * u * u).exp() / w.powi(n as i32)
            }
        };
        Ok(T::lit(v))
    }

    /// Value at `x`, panicking on derivative-order errors (order 0 never fails for finite `x`
    /// inside the domain).
    pub fn value(&self, x: T) -> T {
        self.eval(x, 0).unwrap_or_else(|_| T::nan())
    }

    /// The function divided by `c` (used to enter a normalized regime: `I[phi, lambda] = I[phi/c, c lambda]`).
    pub fn scaled_down(&self, c: T) -> Result<Self> {
        if !(c > T::zero()) {
            return Err(Error::InvalidParameter("rescaling factor must be positive".into()));
        }
        let family = match &self.family {
            Family::Affine { c0, c1 } => Family::Affine {
                c0: *c0 / c,
                c1: *c1 / c,
            },
            Family::Monomial { c: m, k } => Family::Monomial { c: *m / c, k: *k },
            Family::Polynomial(cs) => Family::Polynomial(cs.iter().map(|v| *v / c).collect()),
            Family::ShiftedPower {
                c: m,
                exponent,
                shift,
            } => Family::ShiftedPower {
                c: *m / c,
                exponent: *exponent,
                shift: *shift,
            },
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "{} cannot be rescaled",
                    self.family_name()
                )))
            }
        };
        Ok(FunctionSpec {
            family,
            role: self.role,
        })
    }
}

/// Rescales `(phi, lambda)` to `(phi/c, c lambda)`.
pub fn rescale<T: Real>(phase: &FunctionSpec<T>, lambda: T, c: T) -> Result<(FunctionSpec<T>, T)> {
    Ok((phase.scaled_down(c)?, lambda * c))
}

impl fmt::Display for FunctionSpec<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<f64> = match &self.family {
            Family::Affine { c0, c1 } => vec![*c0, *c1],
            Family::Monomial { c, k } => vec![*c, *k as f64],
            Family::Polynomial(cs) => cs.clone(),
            Family::ShiftedPower { c, exponent, shift } => vec![*c, *exponent, *shift],
            Family::Bump { center, width } => vec![*center, *width],
            Family::Gaussian { center, width } => vec![*center, *width],
        };
        f.write_str(self.family_name())?;
        for c in coeffs {
            write!(f, " {c:?}")?;
        }
        Ok(())
    }
}

impl FromStr for FunctionSpec<f64> {
    type Err = Error;

    /// `family c1 c2 ...`, e.g. `affine 2 1` or `bump 0.5 0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split_whitespace();
        let name = it
            .next()
            .ok_or_else(|| Error::InvalidParameter("empty function spec".into()))?;
        let cs: Vec<f64> = it
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad coefficient `{t}`")))
            })
            .collect::<Result<_>>()?;
        if cs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be finite".into()));
        }
        let need = |n: usize| -> Result<()> {
            if cs.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} takes {n} coefficients, got {}",
                    cs.len()
                )))
            }
        };
        let fam = match name {
            "affine" => {
                need(2)?;
                Family::Affine { c0: cs[0], c1: cs[1] }
            }
            "monomial" => {
                need(2)?;
                if cs[1] < 0.0 || cs[1].fract() != 0.0 {
                    return Err(Error::InvalidParameter("monomial power must be a nonnegative integer".into()));
                }
                Family::Monomial {
                    c: cs[0],
                    k: cs[1] as u32,
                }
            }
            "polynomial" | "constant" => {
                if cs.is_empty() {
                    return Err(Error::InvalidParameter("polynomial needs coefficients".into()));
                }
                Family::Polynomial(cs)
            }
            "shifted_power" => {
                need(3)?;
                Family::ShiftedPower {
                    c: cs[0],
                    exponent: cs[1],
                    shift: cs[2],
                }
            }
            "bump" | "gaussian" => {
                need(2)?;
                if !(cs[1] > 0.0) {
                    return Err(Error::InvalidParameter("width must be positive".into()));
                }
                if name == "bump" {
                    Family::Bump {
                        center: cs[0],
                        width: cs[1],
                    }
                } else {
                    Family::Gaussian {
                        center: cs[0],
                        width: cs[1],
                    }
                }
            }
            other => return Err(Error::InvalidParameter(format!("unknown family `{other}`"))),
        };
        Ok(FunctionSpec::new(fam))
    }
}

/// Sign pattern of a sampled function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPattern {
    Positive,
    Negative,
    Mixed,
}

/// Statistics of a phase/amplitude pair over an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainStats<T = f64> {
    /// `inf |phi|` (m, m1)
    pub inf_abs_phase: T,
    /// `sup |phi|`
    pub sup_abs_phase: T,
    pub phase_min: T,
    pub phase_max: T,
    pub inf_abs_phase_deriv: T,
    pub phase_deriv_sign: SignPattern,
    /// `inf |psi|` (m2)
    pub inf_abs_amp: T,
    pub sup_abs_amp: T,
    pub amp_l1: T,
    /// `int |psi'|`
    pub amp_deriv_l1: T,
    pub amp_at_a: T,
    pub amp_at_b: T,
    /// `sup |(psi/phi')'|` (infinite when phi' vanishes)
    pub sup_abs_ratio_deriv: T,
    /// `|psi/phi'|` at a and b
    pub ratio_at_a: T,
    pub ratio_at_b: T,
    pub zeros_of_phase: Vec<T>,
    pub phase_deriv_monotonic: bool,
    /// `min |phi^(k)|` for k = 0..=MAX_STAT_DERIV
    pub min_abs_kth_deriv: Vec<T>,
    /// Largest bracket width left by the golden-section refinements.
    pub refinement_residual: T,
}

impl<T: Real> DomainStats<T> {
    pub fn min_abs_kth_deriv(&self, k: usize) -> Option<T> {
        self.min_abs_kth_deriv.get(k).copied()
    }
}

fn golden_min<T: Real, F: Fn(T) -> T>(g: &F, mut lo: T, mut hi: T) -> (T, T, T) {
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let tol = T::epsilon().sqrt() * T::lit(1e-2) * (T::one() + lo.abs().max(hi.abs()));
    let mut c = hi - (hi - lo) * inv_phi;
    let mut d = lo + (hi - lo) * inv_phi;
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        if gc < gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - (hi - lo) * inv_phi;
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + (hi - lo) * inv_phi;
            gd = g(d);
        }
    }
    let x = (lo + hi) / T::lit(2.0);
    let mut best = (x, g(x));
    for (xx, gg) in [(c, gc), (d, gd)] {
        if gg < best.1 {
            best = (xx, gg);
        }
    }
    (best.0, best.1, hi - lo)
}

fn sample<T: Real>(iv: &Interval<T>, n: usize) -> Vec<T> {
    let nf = T::from_usize(n).unwrap();
    (0..=n)
        .map(|i| iv.a + iv.len() * T::from_usize(i).unwrap() / nf)
        .collect()
}

/// Global minimum of `g` on the grid, refined by golden section. Returns (argmin, min, residual).
fn refined_min<T: Real, F: Fn(T) -> T>(g: F, xs: &[T]) -> (T, T, T) {
    let vals: Vec<T> = xs.iter().map(|x| g(*x)).collect();
    let mut i = 0;
    for (j, v) in vals.iter().enumerate() {
        if *v < vals[i] {
            i = j;
        }
    }
    let lo = xs[i.saturating_sub(1)];
    let hi = xs[(i + 1).min(xs.len() - 1)];
    let (x, v, res) = golden_min(&g, lo, hi);
    if vals[i] <= v {
        (xs[i], vals[i], res)
    } else {
        (x, v, res)
    }
}

/// Bisection for a root of `g` in `[lo, hi]` with a sign change.
pub fn bisect<T: Real, F: Fn(T) -> T>(g: F, mut lo: T, mut hi: T, iters: usize) -> T {
    let mut glo = g(lo);
    for _ in 0..iters {
        let mid = (lo + hi) / T::lit(2.0);
        let gm = g(mid);
        if gm == T::zero() {
            return mid;
        }
        if (gm < T::zero()) == (glo < T::zero()) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Zeros of `g` on the grid: sign changes bisected, exact grid zeros, and tangential
/// minima of `|g|` below `zero_tol`.
fn find_zeros<T: Real, F: Fn(T) -> T>(g: F, xs: &[T], zero_tol: T) -> Vec<T> {
    let vals: Vec<T> = xs.iter().map(|x| g(*x)).collect();
    let mut zs: Vec<T> = Vec::new();
    for i in 0..xs.len() {
        if vals[i] == T::zero() {
            zs.push(xs[i]);
            continue;
        }
        if i + 1 < xs.len() && vals[i + 1] != T::zero() && (vals[i] < T::zero()) != (vals[i + 1] < T::zero()) {
            zs.push(bisect(&g, xs[i], xs[i + 1], 60));
        }
    }
    // tangential zeros
    let absg = |x: T| g(x).abs();
    for i in 1..xs.len().saturating_sub(1) {
        let (l, m, r) = (vals[i - 1].abs(), vals[i].abs(), vals[i + 1].abs());
        if m <= l && m <= r && m > T::zero() && (vals[i - 1] > T::zero()) == (vals[i + 1] > T::zero()) {
            let (x, v, _) = golden_min(&absg, xs[i - 1], xs[i + 1]);
            if v <= zero_tol {
                zs.push(x);
            }
        }
    }
    zs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let spacing = (xs[1] - xs[0]) / T::lit(4.0);
    zs.dedup_by(|a, b| (*a - *b).abs() < spacing);
    zs
}

/// `int_a^b |g|`, split at the zeros of `g`.
fn abs_integral<T: Real, F: Fn(T) -> T>(g: F, iv: &Interval<T>, xs: &[T], extra_breaks: &[T]) -> T {
    let mut breaks = vec![iv.a];
    breaks.extend(find_zeros(&g, xs, T::zero()));
    breaks.extend(extra_breaks.iter().copied().filter(|x| *x > iv.a && *x < iv.b));
    breaks.push(iv.b);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let gl = GaussLegendre::<T>::new(16);
    let panels = (xs.len() / 8).max(4);
    let mut s = T::zero();
    for w in breaks.windows(2) {
        let v = gl.composite(w[0], w[1], panels, |x| g(x));
        s = s + v.abs();
    }
    s
}

/// Statistics of `(phase, amp)` on `iv` from a grid of `grid_n` cells.
pub fn compute_stats<T: Real>(
    phase: &FunctionSpec<T>,
    amp: &FunctionSpec<T>,
    iv: &Interval<T>,
    grid_n: usize,
) -> Result<DomainStats<T>> {
    if !iv.is_finite() {
        return Err(Error::InvalidParameter("statistics need a finite interval".into()));
    }
    let grid_n = grid_n.max(64);
    let xs = sample(iv, grid_n);
    let f = |k: usize| move |x: T| phase.eval(x, k).unwrap_or_else(|_| T::nan());
    let p = |k: usize| move |x: T| amp.eval(x, k).unwrap_or_else(|_| T::nan());
    let mut residual = T::zero();

    let zeros = find_zeros(f(0), &xs, T::lit(ZERO_TOL));
    let mut min_k = Vec::with_capacity(MAX_STAT_DERIV + 1);
    for k in 0..=MAX_STAT_DERIV {
        let g = f(k);
        let (_, v, r) = refined_min(|x| g(x).abs(), &xs);
        residual = residual.max(r);
        min_k.push(v);
    }
    let inf_abs_phase = if zeros.is_empty() { min_k[0] } else { T::zero() };
    let (_, neg_sup, r) = refined_min(|x| -f(0)(x).abs(), &xs);
    residual = residual.max(r);
    let (_, phase_min, r) = refined_min(f(0), &xs);
    residual = residual.max(r);
    let (_, neg_max, r) = refined_min(|x| -f(0)(x), &xs);
    residual = residual.max(r);

    let d1: Vec<T> = xs.iter().map(|x| f(1)(*x)).collect();
    let phase_deriv_sign = if d1.iter().all(|v| *v > T::zero()) {
        SignPattern::Positive
    } else if d1.iter().all(|v| *v < T::zero()) {
        SignPattern::Negative
    } else {
        SignPattern::Mixed
    };
    let inf_abs_phase_deriv = if phase_deriv_sign == SignPattern::Mixed {
        T::zero()
    } else {
        min_k[1]
    };
    let d2: Vec<T> = xs.iter().map(|x| f(2)(*x)).collect();
    let tol = T::lit(1e-12);
    let phase_deriv_monotonic = d2.iter().all(|v| *v >= -tol) || d2.iter().all(|v| *v <= tol);

    let amp_zeros = find_zeros(p(0), &xs, T::lit(ZERO_TOL));
    let (_, inf_amp, r) = refined_min(|x| p(0)(x).abs(), &xs);
    residual = residual.max(r);
    let inf_abs_amp = if amp_zeros.is_empty() { inf_amp } else { T::zero() };
    let (_, neg_sup_amp, r) = refined_min(|x| -p(0)(x).abs(), &xs);
    residual = residual.max(r);
    let support: Vec<T> = amp.support().map(|(l, h)| vec![l, h]).unwrap_or_default();
    let amp_l1 = abs_integral(p(0), iv, &xs, &support);
    let amp_deriv_l1 = abs_integral(p(1), iv, &xs, &support);

    let ratio_deriv = |x: T| {
        let d = f(1)(x);
        (p(1)(x) * d - p(0)(x) * f(2)(x)) / (d * d)
    };
    let sup_abs_ratio_deriv = if inf_abs_phase_deriv > T::zero() {
        let (_, v, r) = refined_min(|x| -ratio_deriv(x).abs(), &xs);
        residual = residual.max(r);
        -v
    } else {
        T::infinity()
    };
    let ratio_at = |x: T| (p(0)(x) / f(1)(x)).abs();

    Ok(DomainStats {
        inf_abs_phase,
        sup_abs_phase: -neg_sup,
        phase_min,
        phase_max: -neg_max,
        inf_abs_phase_deriv,
        phase_deriv_sign,
        inf_abs_amp,
        sup_abs_amp: -neg_sup_amp,
        amp_l1,
        amp_deriv_l1,
        amp_at_a: p(0)(iv.a),
        amp_at_b: p(0)(iv.b),
        sup_abs_ratio_deriv,
        ratio_at_a: ratio_at(iv.a),
        ratio_at_b: ratio_at(iv.b),
        zeros_of_phase: zeros,
        phase_deriv_monotonic,
        min_abs_kth_deriv: min_k,
        refinement_residual: residual,
    })
}

/// Inverse of a strictly monotone function on `[lo, hi]` by safeguarded Newton.
pub fn solve_monotone(f: &FunctionSpec, y: f64, lo: f64, hi: f64) -> Result<f64> {
    let flo = f.eval(lo, 0)? - y;
    let fhi = f.eval(hi, 0)? - y;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if (flo < 0.0) == (fhi < 0.0) {
        return Err(Error::InvalidParameter(format!("value {y} not bracketed on [{lo}, {hi}]")));
    }
    let inc = flo < 0.0;
    let (mut a, mut b) = (lo, hi);
    let mut x = a + (b - a) * (-flo / (fhi - flo));
    for _ in 0..200 {
        let fx = f.eval(x, 0)? - y;
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == inc {
            a = x;
        } else {
            b = x;
        }
        let d = f.eval(x, 1)?;
        let mut nx = if d != 0.0 { x - fx / d } else { f64::NAN };
        if !(nx > a && nx < b) {
            nx = 0.5 * (a + b);
        }
        if (nx - x).abs() <= 1e-16 * (1.0 + x.abs()) || b - a <= 1e-16 * (1.0 + a.abs()) {
            return Ok(nx);
        }
        x = nx;
    }
    Ok(x)
}
