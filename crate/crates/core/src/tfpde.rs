//! Time-fractional Schrodinger-type equation solved through its Fourier symbol.
//!
//! `u(t, x) = int e^{i x xi} E_{alpha,1}(i s(xi) t^alpha) psi_hat(xi) dxi` with
//! `s(xi) = (xi^2 + mu) / (1 + ell xi^2)` and `psi_hat(xi) = (1/2pi) int e^{-i y xi} psi(y) dy`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::fit_power_law;
use crate::gauss::GaussLegendre;
use crate::hypotheses::TheoremId;
use crate::mlf::{EvalPolicy, ImagAxisEvaluator, MlOrder};
use crate::problem::{Family, FunctionSpec};
use crate::quad::log_grid;
use crate::verify::{CaseReport, CheckMode, EnvelopeRow, SLOPE_TOL};

const NODES: usize = 16;
/// Radians of `x xi` phase per panel.
const PHASE_PER_PANEL: f64 = 2.0;
const TRANSFORM_PANELS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct TfpdeParams {
    pub alpha: f64,
    /// coefficient of the mixed `D^alpha u_xx` term
    pub ell: f64,
    pub mu: f64,
    pub init: FunctionSpec,
    pub xi_max: f64,
    pub x_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
}

impl TfpdeParams {
    pub fn new(alpha: f64, ell: f64, mu: f64) -> Self {
        TfpdeParams {
            alpha,
            ell,
            mu,
            init: FunctionSpec::gaussian(0.0, 1.0),
            xi_max: 12.0,
            x_grid: (0..257).map(|i| -10.0 + 20.0 * i as f64 / 256.0).collect(),
            t_grid: log_grid(1.0, 1e3, 13),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.ell > 0.0 && self.mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ell and mu must be positive, got {}, {}",
                self.ell, self.mu
            )));
        }
        if !(self.xi_max > 0.0 && self.xi_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("xi_max must be positive, got {}", self.xi_max)));
        }
        if self.x_grid.is_empty() || self.x_grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("x grid must be nonempty and finite".into()));
        }
        if self.t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::InvalidParameter("t grid values must be finite and nonnegative".into()));
        }
        Ok(())
    }

    /// `[min{mu, 1/ell}, max{mu, 1/ell}]`
    pub fn symbol_range(&self) -> (f64, f64) {
        let (p, q) = (self.mu, 1.0 / self.ell);
        (p.min(q), p.max(q))
    }
}

pub fn symbol(params: &TfpdeParams, xi: f64) -> f64 {
    let x2 = xi * xi;
    (x2 + params.mu) / (1.0 + params.ell * x2)
}

/// Fourier transform with the `1/(2 pi)` normalization.
fn transform(init: &FunctionSpec, xi: f64) -> Result<Complex64> {
    match init.family {
        Family::Gaussian { center, width } => {
            let m = width / (2.0 * std::f64::consts::PI).sqrt() * (-0.5 * width * width * xi * xi).exp();
            Ok(Complex64::from_polar(m, -center * xi))
        }
        _ => {
            let (lo, hi) = init.support().ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "initial datum '{}' has no closed-form transform and no compact support",
                    init.family_name()
                ))
            })?;
            let rule = GaussLegendre::<f64>::new(NODES);
            let h = (hi - lo) / TRANSFORM_PANELS as f64;
            let mut s = Complex64::new(0.0, 0.0);
            for p in 0..TRANSFORM_PANELS {
                let a = lo + h * p as f64;
                for (y, w) in rule.mapped(a, a + h) {
                    s += Complex64::from_polar(init.eval(y, 0)? * w, -y * xi);
                }
            }
            Ok(s / (2.0 * std::f64::consts::PI))
        }
    }
}

/// Quadrature nodes in `xi` with the transform folded into the weights.
struct Spectral {
    xi: Vec<f64>,
    wt: Vec<Complex64>,
}

impl Spectral {
    fn new(params: &TfpdeParams) -> Result<Self> {
        let xm = params.x_grid.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let panels = ((2.0 * params.xi_max * (xm + 8.0) / PHASE_PER_PANEL).ceil() as usize).max(16);
        let rule = GaussLegendre::<f64>::new(NODES);
        let h = 2.0 * params.xi_max / panels as f64;
        let mut xi = Vec::with_capacity(panels * NODES);
        let mut wt = Vec::with_capacity(panels * NODES);
        for p in 0..panels {
            let a = -params.xi_max + h * p as f64;
            for (x, w) in rule.mapped(a, a + h) {
                xi.push(x);
                wt.push(transform(&params.init, x)? * w);
            }
        }
        Ok(Spectral { xi, wt })
    }

    fn field(&self, factors: &[Complex64], x_grid: &[f64]) -> Vec<Complex64> {
        x_grid
            .iter()
            .map(|&x| {
                self.xi
                    .iter()
                    .zip(&self.wt)
                    .zip(factors)
                    .map(|((&xi, &w), &f)| Complex64::from_polar(1.0, x * xi) * w * f)
                    .sum()
            })
            .collect()
    }
}

/// Solver with the symbol quadrature and the evaluator set up once.
pub struct TfpdeSolver {
    params: TfpdeParams,
    spectral: Spectral,
    eval: ImagAxisEvaluator,
}

impl TfpdeSolver {
    pub fn new(params: &TfpdeParams, policy: &EvalPolicy) -> Result<Self> {
        params.validate()?;
        Ok(TfpdeSolver {
            spectral: Spectral::new(params)?,
            eval: ImagAxisEvaluator::tabulated(MlOrder::new(params.alpha, 1.0)?, policy)?,
            params: params.clone(),
        })
    }

    pub fn params(&self) -> &TfpdeParams {
        &self.params
    }

    /// `u(t, x)` on the x grid.
    pub fn solve(&self, t: f64) -> Result<Vec<Complex64>> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t must be finite and >= 0, got {t}")));
        }
        let ta = t.powf(self.params.alpha);
        let factors = self
            .spectral
            .xi
            .iter()
            .map(|&xi| self.eval.eval(symbol(&self.params, xi) * ta))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.spectral.field(&factors, &self.params.x_grid))
    }

    pub fn sup_norm(&self, t: f64) -> Result<f64> {
        Ok(self.solve(t)?.iter().fold(0.0f64, |m, u| m.max(u.norm())))
    }
}

pub fn solve(params: &TfpdeParams, t: f64) -> Result<Vec<Complex64>> {
    TfpdeSolver::new(params, &EvalPolicy::default())?.solve(t)
}

/// Fit window for the sup-norm decay.
pub const DISPERSIVE_WINDOW: (f64, f64) = (10.0, 1e3);

/// Sup-norm decay against `(1 + t)^{-alpha}` over the t grid.
pub fn dispersive_check(params: &TfpdeParams) -> Result<CaseReport> {
    let (lo, _) = params.symbol_range();
    if !(lo > 0.0) {
        return Err(Error::InvalidParameter("symbol infimum must be positive".into()));
    }
    let solver = TfpdeSolver::new(params, &EvalPolicy::default())?;
    let sups = params
        .t_grid
        .par_iter()
        .map(|&t| solver.sup_norm(t))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<EnvelopeRow> = params
        .t_grid
        .iter()
        .zip(&sups)
        .map(|(&t, &u)| EnvelopeRow::new(t, u, (1.0 + t).powf(-params.alpha)))
        .collect();
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.lambda, r.abs_i)).collect();
    let fit = fit_power_law(&pts, DISPERSIVE_WINDOW, false)?;
    let expected = -params.alpha;
    Ok(CaseReport {
        id: TheoremId::Tfpde,
        mode: CheckMode::Slope,
        expected_slope: expected,
        pass: fit.slope <= expected + SLOPE_TOL,
        observed_m: rows.iter().map(|r| r.ratio).fold(0.0, f64::max),
        max_ratio: None,
        fit: Some(fit),
        rows,
        note: "sup over x grid; transform normalized by 1/(2 pi)".into(),
    })
}
