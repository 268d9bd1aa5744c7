//! Theorem identifiers and mechanical hypothesis checks.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mlf::MlOrder;
use crate::problem::{compute_stats, DomainStats, Family, FunctionSpec, Interval, SignPattern};

/// Identifiers of the checked estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    Th1,
    Th1_2,
    Th1_3i,
    Th1_3ii,
    Th1_3pi,
    Th1_3pii,
    Th1_3piii,
    Th2,
    Th2_1,
    Cor2_1,
    Thm2_3,
    Cor2_2,
    NonStat,
    Th4_1,
    Th4_2,
    RlLemma,
    Tfpde,
}

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        TheoremId::Th1,
        TheoremId::Th1_2,
        TheoremId::Th1_3i,
        TheoremId::Th1_3ii,
        TheoremId::Th1_3pi,
        TheoremId::Th1_3pii,
        TheoremId::Th1_3piii,
        TheoremId::Th2,
        TheoremId::Th2_1,
        TheoremId::Cor2_1,
        TheoremId::Thm2_3,
        TheoremId::Cor2_2,
        TheoremId::NonStat,
        TheoremId::Th4_1,
        TheoremId::Th4_2,
        TheoremId::RlLemma,
        TheoremId::Tfpde,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Th1 => "th1",
            TheoremId::Th1_2 => "th1.2",
            TheoremId::Th1_3i => "th1.3i",
            TheoremId::Th1_3ii => "th1.3ii",
            TheoremId::Th1_3pi => "th1.3+i",
            TheoremId::Th1_3pii => "th1.3+ii",
            TheoremId::Th1_3piii => "th1.3+iii",
            TheoremId::Th2 => "th2",
            TheoremId::Th2_1 => "th2.1",
            TheoremId::Cor2_1 => "cor2.1",
            TheoremId::Thm2_3 => "thm2-3",
            TheoremId::Cor2_2 => "cor2.2",
            TheoremId::NonStat => "nonstat",
            TheoremId::Th4_1 => "th4.1",
            TheoremId::Th4_2 => "th4.2",
            TheoremId::RlLemma => "rl-lemma",
            TheoremId::Tfpde => "tfpde",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

/// Extra parameters some statements need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypothesisOptions {
    /// `k` in `|phi^(k)| >= 1`; searched in 2..=6 when absent
    pub vdc_k: Option<usize>,
    /// `N` of the non-stationary estimate
    pub nonstat_n: usize,
}

impl Default for HypothesisOptions {
    fn default() -> Self {
        HypothesisOptions {
            vdc_k: None,
            nonstat_n: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub measured: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub theorem: TheoremId,
    pub checks: Vec<HypothesisCheck>,
    /// k found for the `|phi^(k)| >= 1` statements
    pub vdc_k: Option<usize>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Failed checks joined for messages.
    pub fn failures(&self) -> String {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.measured))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

struct Checks(Vec<HypothesisCheck>);

impl Checks {
    fn add(&mut self, name: &str, passed: bool, measured: String) {
        self.0.push(HypothesisCheck {
            name: name.to_string(),
            passed,
            measured,
        });
    }
}

const STAT_GRID: usize = 256;
const EDGE_TOL: f64 = 1e-12;

/// Checks the hypotheses of `id` for the given data.
pub fn check_hypotheses(
    id: TheoremId,
    phase: &FunctionSpec,
    amp: &FunctionSpec,
    iv: &Interval,
    order: MlOrder,
    opts: &HypothesisOptions,
) -> Result<HypothesisReport> {
    let mut c = Checks(Vec::new());
    let (a, b) = (order.alpha, order.beta);
    let ab = format!("alpha={a}, beta={b}");
    c.add("finite interval", iv.is_finite(), format!("[{}, {}]", iv.a, iv.b));
    if !iv.is_finite() {
        return Ok(HypothesisReport {
            theorem: id,
            checks: c.0,
            vdc_k: None,
        });
    }
    let s = compute_stats(phase, amp, iv, STAT_GRID)?;
    let frac = a > 0.0 && a < 1.0;
    let m = s.inf_abs_phase;
    let md = s.inf_abs_phase_deriv;
    let mut vdc_k = None;
    let mut need_k = |c: &mut Checks, s: &DomainStats| {
        let k = opts.vdc_k.or_else(|| {
            (2..=crate::problem::MAX_STAT_DERIV).find(|k| s.min_abs_kth_deriv[*k] >= 1.0)
        });
        match k {
            Some(k) if k >= 2 && k <= crate::problem::MAX_STAT_DERIV => {
                let v = s.min_abs_kth_deriv[k];
                c.add("|phi^(k)| >= 1, k >= 2", v >= 1.0, format!("k={k}, min={v}"));
                vdc_k = Some(k);
            }
            _ => c.add("|phi^(k)| >= 1, k >= 2", false, "no k in 2..=6".into()),
        }
        c.add(
            "finitely many zeros of phi",
            s.zeros_of_phase.len() < STAT_GRID / 2,
            format!("{} zeros", s.zeros_of_phase.len()),
        );
    };
    match id {
        TheoremId::Th1 => {
            c.add("0 < alpha < 1, beta > 0", frac && b > 0.0, ab);
            c.add("m = inf|phi| > 0", m > 0.0, format!("m={m}"));
        }
        TheoremId::Th1_2 => {
            c.add("0 < alpha < 1, beta > 0", frac && b > 0.0, ab);
            c.add(
                "phi monotone",
                s.phase_deriv_sign != SignPattern::Mixed,
                format!("{:?}", s.phase_deriv_sign),
            );
            c.add("m = inf|phi'| > 0", md > 0.0, format!("m={md}"));
            c.add(
                "finitely many zeros of phi",
                s.zeros_of_phase.len() < STAT_GRID / 2,
                format!("{} zeros", s.zeros_of_phase.len()),
            );
        }
        TheoremId::Th1_3i | TheoremId::Th1_3ii => {
            c.add("0 < alpha < 1, beta = alpha", frac && b == a, ab);
            c.add("phi' monotone", s.phase_deriv_monotonic, format!("{}", s.phase_deriv_monotonic));
            let min_d = if s.phase_deriv_sign == SignPattern::Positive { md } else { -md };
            c.add("phi' >= 1", min_d >= 1.0, format!("inf phi'={min_d}"));
            if id == TheoremId::Th1_3ii {
                c.add("m = inf|phi| > 0", m > 0.0, format!("m={m}"));
            }
        }
        TheoremId::Th1_3pi | TheoremId::Th1_3pii | TheoremId::Th1_3piii => {
            c.add("0 < alpha < 1, beta = alpha", frac && b == a, ab);
            c.add("phi' != 0", md > 0.0, format!("inf|phi'|={md}"));
            if id == TheoremId::Th1_3pii {
                let ok = s.amp_at_a.abs() <= EDGE_TOL && s.amp_at_b.abs() <= EDGE_TOL;
                c.add(
                    "psi(a) = psi(b) = 0",
                    ok,
                    format!("psi(a)={}, psi(b)={}", s.amp_at_a, s.amp_at_b),
                );
            }
            if id == TheoremId::Th1_3piii {
                c.add("m = inf|phi| > 0", m > 0.0, format!("m={m}"));
            }
        }
        TheoremId::Th2 => {
            c.add("alpha = 1, beta > 1", a == 1.0 && b > 1.0, ab);
            c.add("m = inf|phi| > 0", m > 0.0, format!("m={m}"));
        }
        TheoremId::Th2_1 | TheoremId::Cor2_1 => {
            c.add("0 < alpha < 1, beta > 0", frac && b > 0.0, ab);
            need_k(&mut c, &s);
        }
        TheoremId::Thm2_3 | TheoremId::Cor2_2 => {
            c.add("0 < alpha < 1, beta = alpha", frac && b == a, ab);
            need_k(&mut c, &s);
        }
        TheoremId::NonStat => {
            let n = opts.nonstat_n;
            let nf = n as f64;
            c.add("0 < alpha < 1, beta = 1", frac && b == 1.0, ab.clone());
            c.add(
                "N - 1 < N alpha < N",
                n >= 1 && nf - 1.0 < nf * a && nf * a < nf,
                format!("N={n}, N alpha={}", nf * a),
            );
            c.add(
                "phi increasing",
                s.phase_deriv_sign == SignPattern::Positive,
                format!("{:?}", s.phase_deriv_sign),
            );
            let mut worst: f64 = 0.0;
            for j in 0..n {
                worst = worst.max(amp.eval(iv.a, j)?.abs()).max(amp.eval(iv.b, j)?.abs());
            }
            c.add(
                "psi^(j)(a) = psi^(j)(b) = 0, j < N",
                worst <= EDGE_TOL,
                format!("max endpoint |psi^(j)|={worst:e}"),
            );
            c.add("phi' != 0", md > 0.0, format!("inf|phi'|={md}"));
        }
        TheoremId::Th4_1 => {
            c.add("0 < alpha <= 1/2, beta > 2 alpha", a > 0.0 && a <= 0.5 && b > 2.0 * a, ab);
            c.add("m2 = inf|psi| > 0", s.inf_abs_amp > 0.0, format!("m2={}", s.inf_abs_amp));
            c.add("m1 = inf|phi| >= 0", true, format!("m1={m}"));
        }
        TheoremId::Th4_2 => {
            c.add("0 < alpha < 1/2, beta = 2 alpha", a > 0.0 && a < 0.5 && b == 2.0 * a, ab);
            c.add("m2 = inf|psi| > 0", s.inf_abs_amp > 0.0, format!("m2={}", s.inf_abs_amp));
            c.add("m1 = inf|phi| >= 0", true, format!("m1={m}"));
        }
        TheoremId::RlLemma => {
            let identity = matches!(phase.family, Family::Affine { c0, c1 } if c0 == 0.0 && c1 == 1.0)
                || matches!(phase.family, Family::Monomial { c, k: 1 } if c == 1.0)
                || matches!(&phase.family, Family::Polynomial(cs) if cs.len() == 2 && cs[0] == 0.0 && cs[1] == 1.0);
            c.add("phi(x) = x", identity, phase.family_name().to_string());
            let regime = (frac && b > 0.0 && b != a)
                || (a == 1.0 && b > 1.0 && iv.a > 0.0)
                || (frac && b == a && iv.a > 0.0);
            c.add("regime", regime, format!("{ab}, a={}", iv.a));
        }
        TheoremId::Tfpde => {
            c.add("0 < alpha < 1", frac, ab);
            c.add(
                "initial datum integrable",
                matches!(amp.family, Family::Gaussian { .. } | Family::Bump { .. }),
                amp.family_name().to_string(),
            );
        }
    }
    Ok(HypothesisReport {
        theorem: id,
        checks: c.0,
        vdc_k,
    })
}

/// String-id convenience wrapper.
pub fn check_hypotheses_str(
    id: &str,
    phase: &FunctionSpec,
    amp: &FunctionSpec,
    iv: &Interval,
    order: MlOrder,
) -> Result<HypothesisReport> {
    check_hypotheses(id.parse()?, phase, amp, iv, order, &HypothesisOptions::default())
}
