//! Fractional integrals and derivatives with respect to an increasing function `phi`.
//!
//! Every operator is evaluated after the substitution `u = phi(s)`, where the kernels
//! become powers of `u` differences. Endpoint singularities are handled by a graded
//! mesh plus a power substitution on the innermost panel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gamma::{gamma, recip_gamma};
use crate::gauss::GaussLegendre;
use crate::mlf::{EvalPolicy, ImagAxisEvaluator, MlOrder};
use crate::problem::{compute_stats, solve_monotone, Family, SignPattern};
use crate::{FunctionSpec, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FracSpec {
    pub alpha: f64,
    pub phi: FunctionSpec,
    pub iv: Interval,
    pub side: Side,
}

/// Mesh controls for the singular quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshPolicy {
    /// panels per half interval at the first level
    pub panels: usize,
    pub nodes: usize,
    pub rel_tol: f64,
    pub max_doublings: usize,
}

impl Default for MeshPolicy {
    fn default() -> Self {
        MeshPolicy {
            panels: 16,
            nodes: 16,
            rel_tol: 1e-10,
            max_doublings: 3,
        }
    }
}

/// `u = phi(s)` and its inverse on an interval.
#[derive(Debug, Clone)]
pub(crate) struct PhiMap {
    phi: FunctionSpec,
    iv: Interval,
    pub ua: f64,
    pub ub: f64,
}

impl PhiMap {
    pub fn new(phi: &FunctionSpec, iv: &Interval) -> Result<Self> {
        if !iv.is_finite() {
            return Err(Error::InvalidParameter("fractional operators need a finite interval".into()));
        }
        let st = compute_stats(phi, &FunctionSpec::constant(1.0), iv, 128)?;
        if st.phase_deriv_sign != SignPattern::Positive {
            return Err(Error::InvalidParameter("phi must be increasing with phi' > 0".into()));
        }
        Ok(PhiMap {
            phi: phi.clone(),
            iv: *iv,
            ua: phi.eval(iv.a, 0)?,
            ub: phi.eval(iv.b, 0)?,
        })
    }

    pub fn u(&self, s: f64) -> Result<f64> {
        self.phi.eval(s, 0)
    }

    pub fn s(&self, u: f64) -> Result<f64> {
        if let Family::Affine { c0, c1 } = self.phi.family {
            return Ok(((u - c0) / c1).clamp(self.iv.a, self.iv.b));
        }
        if u <= self.ua {
            return Ok(self.iv.a);
        }
        if u >= self.ub {
            return Ok(self.iv.b);
        }
        solve_monotone(&self.phi, u, self.iv.a, self.iv.b)
    }

    pub fn d(&self, s: f64, k: usize) -> Result<f64> {
        self.phi.eval(s, k)
    }
}

/// Integrand `h(t, t - lo, hi - t)`; the distances are exact even when `t` rounds to an end.
type Fc<'a> = dyn Fn(f64, f64, f64) -> Result<Complex64> + Sync + 'a;

/// `int_lo^hi (t - lo)^p (hi - t)^q h(t) dt` for `p, q > -1`.
pub(crate) fn weighted_singular(
    lo: f64,
    hi: f64,
    p: f64,
    q: f64,
    h: &Fc<'_>,
    mesh: &MeshPolicy,
) -> Result<Complex64> {
    if !(p > -1.0 && q > -1.0) {
        return Err(Error::InvalidParameter(format!("weights need exponents > -1, got {p}, {q}")));
    }
    if hi <= lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rule = GaussLegendre::<f64>::new(mesh.nodes);
    let mut n = mesh.panels.max(2);
    let mut prev = weighted_pass(lo, hi, p, q, h, n, &rule)?;
    let mut change = f64::INFINITY;
    for _ in 0..=mesh.max_doublings {
        n *= 2;
        let cur = weighted_pass(lo, hi, p, q, h, n, &rule)?;
        change = (cur - prev).norm();
        if change <= mesh.rel_tol * cur.norm().max(1e-300) || change <= 1e-15 {
            return Ok(cur);
        }
        prev = cur;
    }
    if change <= 1e-8 * prev.norm().max(1e-12) {
        return Ok(prev);
    }
    Err(Error::SingularityFailure { change })
}

fn call(h: &Fc<'_>, end: f64, dir: f64, d: f64, len: f64) -> Result<Complex64> {
    if dir > 0.0 {
        h(end + d, d, len - d)
    } else {
        h(end - d, len - d, d)
    }
}

/// Geometric refinement of the panel touching a singular end.
const GEOM_RATIO: f64 = 0.2;
const GEOM_LEVELS: i32 = 24;

fn weighted_pass(
    lo: f64,
    hi: f64,
    p: f64,
    q: f64,
    h: &Fc<'_>,
    n: usize,
    rule: &GaussLegendre<f64>,
) -> Result<Complex64> {
    let len = hi - lo;
    let half = 0.5 * len;
    let hw = half / n as f64;
    let pw = |d: f64, e: f64| if e == 0.0 { 1.0 } else { d.powf(e) };
    let mut total = Complex64::new(0.0, 0.0);
    // d is the exact distance from the end the half is attached to
    for (end, e, other, dir) in [(lo, p, q, 1.0), (hi, q, p, -1.0)] {
        let seg = |d0: f64, d1: f64| -> Result<Complex64> {
            let mut s = Complex64::new(0.0, 0.0);
            for (d, wt) in rule.mapped(d0, d1) {
                s += call(h, end, dir, d, len)? * (pw(d, e) * pw(len - d, other) * wt);
            }
            Ok(s)
        };
        for j in 1..n {
            total += seg(hw * j as f64, hw * (j + 1) as f64)?;
        }
        let mut right = hw;
        for _ in 0..GEOM_LEVELS {
            let left = right * GEOM_RATIO;
            total += seg(left, right)?;
            right = left;
        }
        // innermost piece: d = delta v^{1/(1+e)}
        let delta = right;
        let inv = 1.0 / (1.0 + e);
        let mut s0 = Complex64::new(0.0, 0.0);
        for (v, wt) in rule.mapped(0.0, 1.0) {
            let d = delta * v.powf(inv);
            s0 += call(h, end, dir, d, len)? * (pw(len - d, other) * wt);
        }
        total += s0 * (delta.powf(1.0 + e) * inv);
    }
    Ok(total)
}

fn re(f: impl Fn(f64) -> Result<f64> + Sync) -> impl Fn(f64, f64, f64) -> Result<Complex64> + Sync {
    move |t, _, _| f(t).map(|v| Complex64::new(v, 0.0))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

fn check_point(iv: &Interval, x: f64) -> Result<()> {
    if !iv.contains(x) {
        return Err(Error::InvalidParameter(format!("x = {x} outside [{}, {}]", iv.a, iv.b)));
    }
    Ok(())
}

/// A fractional operator prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub struct FracOperator {
    pub spec: FracSpec,
    pub mesh: MeshPolicy,
    map: PhiMap,
}

impl FracOperator {
    pub fn new(spec: &FracSpec) -> Result<Self> {
        check_alpha(spec.alpha)?;
        Ok(FracOperator {
            spec: spec.clone(),
            mesh: MeshPolicy::default(),
            map: PhiMap::new(&spec.phi, &spec.iv)?,
        })
    }

    pub fn with_mesh(mut self, mesh: MeshPolicy) -> Self {
        self.mesh = mesh;
        self
    }

    /// Fractional integral of a function given in `u` coordinates.
    pub(crate) fn integral_u(&self, fu: &Fc<'_>, x: f64) -> Result<Complex64> {
        check_point(&self.spec.iv, x)?;
        let a = self.spec.alpha;
        let u = self.map.u(x)?;
        let v = match self.spec.side {
            Side::Left => weighted_singular(self.map.ua, u, 0.0, a - 1.0, fu, &self.mesh)?,
            Side::Right => weighted_singular(u, self.map.ub, a - 1.0, 0.0, fu, &self.mesh)?,
        };
        Ok(v * recip_gamma(a))
    }

    /// Caputo derivative given the `phi`-derivative `df/du` in `u` coordinates.
    pub(crate) fn caputo_u(&self, dfu: &Fc<'_>, x: f64) -> Result<Complex64> {
        check_point(&self.spec.iv, x)?;
        let a = self.spec.alpha;
        let u = self.map.u(x)?;
        if a == 1.0 {
            let v = dfu(u, 0.0, 0.0)?;
            return Ok(match self.spec.side {
                Side::Left => v,
                Side::Right => -v,
            });
        }
        let v = match self.spec.side {
            Side::Left => weighted_singular(self.map.ua, u, 0.0, -a, dfu, &self.mesh)?,
            Side::Right => -weighted_singular(u, self.map.ub, -a, 0.0, dfu, &self.mesh)?,
        };
        Ok(v * recip_gamma(1.0 - a))
    }

    fn f_u<'a>(&'a self, f: &'a FunctionSpec) -> impl Fn(f64) -> Result<f64> + Sync + 'a {
        move |u| f.eval(self.map.s(u)?, 0)
    }

    fn df_u<'a>(&'a self, f: &'a FunctionSpec) -> impl Fn(f64) -> Result<f64> + Sync + 'a {
        move |u| {
            let s = self.map.s(u)?;
            Ok(f.eval(s, 1)? / self.map.d(s, 1)?)
        }
    }

    pub fn integral(&self, f: &FunctionSpec, x: f64) -> Result<f64> {
        Ok(self.integral_u(&re(self.f_u(f)), x)?.re)
    }

    pub fn caputo(&self, f: &FunctionSpec, x: f64) -> Result<f64> {
        Ok(self.caputo_u(&re(self.df_u(f)), x)?.re)
    }

    pub fn riemann_liouville(&self, f: &FunctionSpec, x: f64) -> Result<f64> {
        let a = self.spec.alpha;
        if a >= 1.0 {
            return Err(Error::Regime("Riemann-Liouville derivative needs alpha < 1".into()));
        }
        let c = self.caputo(f, x)?;
        let (end, du) = match self.spec.side {
            Side::Left => (self.spec.iv.a, self.map.u(x)? - self.map.ua),
            Side::Right => (self.spec.iv.b, self.map.ub - self.map.u(x)?),
        };
        let fe = f.eval(end, 0)?;
        if fe == 0.0 {
            return Ok(c);
        }
        if du <= 0.0 {
            return Err(Error::DegenerateInput(format!(
                "boundary term diverges at x = {x} with f({end}) = {fe}"
            )));
        }
        Ok(c + fe * du.powf(-a) * recip_gamma(1.0 - a))
    }
}

pub fn frac_integral(spec: &FracSpec, f: &FunctionSpec, x: f64) -> Result<f64> {
    FracOperator::new(spec)?.integral(f, x)
}

pub fn caputo_deriv(spec: &FracSpec, f: &FunctionSpec, x: f64) -> Result<f64> {
    FracOperator::new(spec)?.caputo(f, x)
}

pub fn rl_deriv(spec: &FracSpec, f: &FunctionSpec, x: f64) -> Result<f64> {
    FracOperator::new(spec)?.riemann_liouville(f, x)
}

/// `|D^alpha_{a+} g(x) - i lambda g(x)|` for `g = E_{alpha,1}(i lambda (phi - phi(a))^alpha)`.
pub fn eigen_residual(alpha: f64, phi: &FunctionSpec, iv: &Interval, lambda: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let op = FracOperator::new(&FracSpec {
        alpha,
        phi: phi.clone(),
        iv: *iv,
        side: Side::Left,
    })?;
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let policy = EvalPolicy::default();
    let e_a1 = ImagAxisEvaluator::new(MlOrder::new(alpha, 1.0)?, &policy)?;
    let e_aa = ImagAxisEvaluator::new(MlOrder::new(alpha, alpha)?, &policy)?;
    let ua = op.map.ua;
    let u = op.map.u(x)?;
    let g = e_a1.eval(lambda * (u - ua).powf(alpha))?;
    let i_lambda = Complex64::new(0.0, lambda);
    let lhs = if alpha == 1.0 {
        i_lambda * g
    } else {
        // dG/du = i lambda (u - ua)^{alpha-1} E_{alpha,alpha}(i lambda (u - ua)^alpha)
        let h = |_: f64, d: f64, _: f64| -> Result<Complex64> { Ok(i_lambda * e_aa.eval(lambda * d.powf(alpha))?) };
        weighted_singular(ua, u, alpha - 1.0, -alpha, &h, &op.mesh)? * recip_gamma(1.0 - alpha)
    };
    Ok((lhs - i_lambda * g).norm())
}

/// `|D^alpha (D^beta f)(x) - D^{alpha+beta} f(x)|`, the order in (1, 2) taken as the
/// order `alpha + beta - 1` Caputo derivative of `f'/phi'`.
pub fn semigroup_residual(
    alpha: f64,
    beta: f64,
    phi: &FunctionSpec,
    f: &FunctionSpec,
    iv: &Interval,
    x: f64,
) -> Result<f64> {
    let parts = semigroup_parts(alpha, beta, phi, f, iv, x)?;
    Ok((parts.0 - parts.1).abs())
}

/// `(lhs, rhs)` of the semigroup comparison.
pub fn semigroup_parts(
    alpha: f64,
    beta: f64,
    phi: &FunctionSpec,
    f: &FunctionSpec,
    iv: &Interval,
    x: f64,
) -> Result<(f64, f64)> {
    let in01 = |v: f64| v > 0.0 && v < 1.0;
    if !(in01(alpha) && in01(beta) && alpha + beta > 1.0 && alpha + beta < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "semigroup check needs alpha, beta in (0,1) with 1 < alpha + beta < 2, got {alpha}, {beta}"
        )));
    }
    let map = PhiMap::new(phi, iv)?;
    check_point(iv, x)?;
    let mesh = MeshPolicy::default();
    let inner_mesh = MeshPolicy {
        panels: 4,
        max_doublings: 1,
        rel_tol: 1e-9,
        ..mesh
    };
    let (ua, u) = (map.ua, map.u(x)?);
    if u <= ua {
        return Ok((0.0, 0.0));
    }
    let f1 = |v: f64| -> Result<f64> {
        let s = map.s(v)?;
        Ok(f.eval(s, 1)? / map.d(s, 1)?)
    };
    let f2 = |v: f64| -> Result<f64> {
        let s = map.s(v)?;
        let (d1, d2) = (map.d(s, 1)?, map.d(s, 2)?);
        Ok((f.eval(s, 2)? * d1 - f.eval(s, 1)? * d2) / (d1 * d1 * d1))
    };
    let ga = recip_gamma(1.0 - alpha);
    let gb = recip_gamma(1.0 - beta);
    // boundary part of d/du D^beta f
    let c1 = f1(ua)?;
    let part_a = if c1 == 0.0 {
        0.0
    } else {
        let h = |_: f64, _: f64, _: f64| -> Result<Complex64> { Ok(Complex64::new(c1 * gb * ga, 0.0)) };
        weighted_singular(ua, u, -beta, -alpha, &h, &mesh)?.re
    };
    // J(v) = (1/Gamma(1-beta)) int_ua^v (v-w)^{-beta} f2(w) dw = d^{1-beta} K(v), d = v - ua,
    // K(v) = (1/Gamma(1-beta)) int_0^1 (1-y)^{-beta} f2(ua + d y) dy
    let f2c = re(f2);
    let k = |_: f64, d: f64, _: f64| -> Result<Complex64> {
        let inner = |_: f64, y: f64, _: f64| -> Result<Complex64> { Ok(Complex64::new(f2(ua + d * y)?, 0.0)) };
        Ok(weighted_singular(0.0, 1.0, 0.0, -beta, &inner, &inner_mesh)? * (gb * ga))
    };
    let part_b = weighted_singular(ua, u, 1.0 - beta, -alpha, &k, &mesh)?.re;
    let rhs = weighted_singular(ua, u, 0.0, 1.0 - alpha - beta, &f2c, &mesh)?.re * recip_gamma(2.0 - alpha - beta);
    Ok((part_a + part_b, rhs))
}

/// Pieces of the fractional integration-by-parts identity
/// `int f D^alpha_{a+} g = int g phi' D^alpha_{b-}(f/phi') + [g I^{1-alpha}_{b-}(f/phi')]_a^b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IbpParts {
    pub lhs: f64,
    pub rhs_integral: f64,
    pub boundary: f64,
}

impl IbpParts {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs_integral - self.boundary).abs()
    }
}

pub fn int_by_parts_parts(alpha: f64, phi: &FunctionSpec, f: &FunctionSpec, g: &FunctionSpec, iv: &Interval) -> Result<IbpParts> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let map = PhiMap::new(phi, iv)?;
    let mesh = MeshPolicy::default();
    let inner_mesh = MeshPolicy {
        panels: 8,
        max_doublings: 2,
        rel_tol: 1e-9,
        ..mesh
    };
    let (ua, ub) = (map.ua, map.ub);
    let ga = recip_gamma(1.0 - alpha);
    // F = f/phi', G = g, in u coordinates, with u-derivatives
    let big_f = |v: f64| -> Result<f64> {
        let s = map.s(v)?;
        Ok(f.eval(s, 0)? / map.d(s, 1)?)
    };
    let big_f1 = |v: f64| -> Result<f64> {
        let s = map.s(v)?;
        let (d1, d2) = (map.d(s, 1)?, map.d(s, 2)?);
        Ok((f.eval(s, 1)? * d1 - f.eval(s, 0)? * d2) / (d1 * d1 * d1))
    };
    let big_g = |v: f64| -> Result<f64> { g.eval(map.s(v)?, 0) };
    let big_g1 = |v: f64| -> Result<f64> {
        let s = map.s(v)?;
        Ok(g.eval(s, 1)? / map.d(s, 1)?)
    };
    let fc = re(big_f);

    // lhs: int F(U) C(U) dU with C the left Caputo derivative of g; C = d^{1-alpha} K,
    // K = (1/Gamma(1-alpha)) int_0^1 (1-y)^{-alpha} G1(ua + d y) dy
    let lhs_h = |v: f64, d: f64, _: f64| -> Result<Complex64> {
        let inner = |_: f64, y: f64, _: f64| -> Result<Complex64> { Ok(Complex64::new(big_g1(ua + d * y)?, 0.0)) };
        let k = weighted_singular(0.0, 1.0, 0.0, -alpha, &inner, &inner_mesh)?.re * ga;
        Ok(Complex64::new(big_f(v)? * k, 0.0))
    };
    let lhs = weighted_singular(ua, ub, 1.0 - alpha, 0.0, &lhs_h, &mesh)?.re;

    // rhs integral: int G(u) [Caputo_{b-} F(u) + F(ub)(ub-u)^{-alpha}/Gamma(1-alpha)] du,
    // Caputo_{b-} F(u) = -d^{1-alpha} (1/Gamma(1-alpha)) int_0^1 y^{-alpha} F'(u + d y) dy, d = ub - u
    let rhs_h = |v: f64, _: f64, d: f64| -> Result<Complex64> {
        let inner = |_: f64, y: f64, _: f64| -> Result<Complex64> { Ok(Complex64::new(big_f1(ub - d + d * y)?, 0.0)) };
        let c = -weighted_singular(0.0, 1.0, -alpha, 0.0, &inner, &inner_mesh)?.re * ga;
        Ok(Complex64::new(big_g(v)? * c, 0.0))
    };
    let mut rhs_integral = weighted_singular(ua, ub, 0.0, 1.0 - alpha, &rhs_h, &mesh)?.re;
    let fb = big_f(ub)?;
    if fb != 0.0 {
        let gc = re(big_g);
        rhs_integral += fb * ga * weighted_singular(ua, ub, 0.0, -alpha, &gc, &mesh)?.re;
    }
    // boundary: [G I^{1-alpha}_{b-} F]_a^b = -G(ua) I^{1-alpha}_{b-}F(ua)
    let i_at_a = weighted_singular(ua, ub, -alpha, 0.0, &fc, &mesh)?.re * ga;
    let boundary = -big_g(ua)? * i_at_a;
    Ok(IbpParts {
        lhs,
        rhs_integral,
        boundary,
    })
}

pub fn int_by_parts_residual(alpha: f64, phi: &FunctionSpec, f: &FunctionSpec, g: &FunctionSpec, iv: &Interval) -> Result<f64> {
    Ok(int_by_parts_parts(alpha, phi, f, g, iv)?.residual())
}

/// `Gamma(p+1)/Gamma(p+1-alpha) (x-a)^{p-alpha}`, the Caputo derivative of `(s-a)^p` for `phi = s`.
pub fn caputo_power_rule(alpha: f64, p: f64, a: f64, x: f64) -> f64 {
    gamma(p + 1.0) * recip_gamma(p + 1.0 - alpha) * (x - a).powf(p - alpha)
}
