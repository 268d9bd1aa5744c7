//! Experiment configuration files.
//!
//! Grammar, one item per line:
//!
//! ```text
//! file    := { line }
//! line    := blank | comment | section | entry
//! comment := "#" any
//! section := "[" name "]"
//! entry   := key "=" value
//! ```
//!
//! Sections and their keys:
//!
//! | section     | keys |
//! |-------------|------|
//! | `[order]`   | `alpha`, `beta` |
//! | `[problem]` | `interval = a, b`, `phase = <fn>`, `amp = <fn>`, `variant = direct\|shifted_power`, `theorem = <id>` (optional) |
//! | `[grid]`    | `start`, `stop`, `points` (log-spaced) or `values = v1, v2, ...` |
//! | `[fit]`     | `window = lo, hi`, `log_factor = true\|false` |
//! | `[policy]`  | `nodes_per_panel`, `panels_per_unit_phase`, `abs_tol`, `max_panels`, `series_tol`, `max_terms`, `switch_radius`, `asym_terms`, `accum_precision` |
//! | `[pde]`     | `alpha`, `ell`, `mu`, `init = <fn>`, `xi_max`, `x_grid = start, stop, points` (uniform), `t_grid = start, stop, points` (log-spaced) |
//! | `[output]`  | `dir`, `name`, `svg = true\|false` |
//!
//! A function `<fn>` is a family name followed by its coefficients:
//! `affine c0 c1`, `monomial c k`, `polynomial c0 c1 ...` (alias `constant c`),
//! `shifted_power c exponent shift`, `bump center width`, `gaussian center width`.
//!
//! Unknown sections, unknown keys and repeated keys are errors. Missing
//! `[policy]` keys take their defaults. Numbers are written back in shortest
//! round-trip form, so `parse(render(c)) == c`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use mlvc::hypotheses::{check_hypotheses, HypothesisOptions};
use mlvc::problem::Role;
use mlvc::quad::{log_grid, validate_grid, IntegralSpec, QuadPolicy, Variant};
use mlvc::tfpde::TfpdeParams;
use mlvc::{EvalPolicy, FunctionSpec, Interval, MlOrder, TheoremId};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.msg)
        } else {
            write!(f, "config line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError { line, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Log { start: f64, stop: f64, points: usize },
    Values(Vec<f64>),
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::Log { start, stop, points } => log_grid(*start, *stop, *points),
            Grid::Values(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSection {
    pub interval: (f64, f64),
    pub phase: FunctionSpec,
    pub amp: FunctionSpec,
    pub variant: Variant,
    pub theorem: Option<TheoremId>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSection {
    pub window: (f64, f64),
    pub log_factor: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeSection {
    pub alpha: f64,
    pub ell: f64,
    pub mu: f64,
    pub init: FunctionSpec,
    pub xi_max: f64,
    pub x_grid: (f64, f64, usize),
    pub t_grid: (f64, f64, usize),
}

impl PdeSection {
    pub fn new(alpha: f64, ell: f64, mu: f64) -> Self {
        PdeSection {
            alpha,
            ell,
            mu,
            init: FunctionSpec::gaussian(0.0, 1.0),
            xi_max: 12.0,
            x_grid: (-10.0, 10.0, 257),
            t_grid: (1.0, 1e3, 13),
        }
    }

    pub fn params(&self) -> TfpdeParams {
        let (x0, x1, nx) = self.x_grid;
        let step = if nx > 1 { (x1 - x0) / (nx - 1) as f64 } else { 0.0 };
        TfpdeParams {
            alpha: self.alpha,
            ell: self.ell,
            mu: self.mu,
            init: self.init.clone(),
            xi_max: self.xi_max,
            x_grid: (0..nx).map(|i| x0 + step * i as f64).collect(),
            t_grid: log_grid(self.t_grid.0, self.t_grid.1, self.t_grid.2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSection {
    pub dir: Option<String>,
    pub name: Option<String>,
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentConfig {
    pub order: Option<MlOrder>,
    pub problem: Option<ProblemSection>,
    pub grid: Option<Grid>,
    pub fit: Option<FitSection>,
    pub policy: Option<QuadPolicy>,
    pub pde: Option<PdeSection>,
    pub output: OutputSection,
}

const SECTIONS: [(&str, &[&str]); 7] = [
    ("order", &["alpha", "beta"]),
    ("problem", &["interval", "phase", "amp", "variant", "theorem"]),
    ("grid", &["start", "stop", "points", "values"]),
    ("fit", &["window", "log_factor"]),
    (
        "policy",
        &[
            "nodes_per_panel",
            "panels_per_unit_phase",
            "abs_tol",
            "max_panels",
            "series_tol",
            "max_terms",
            "switch_radius",
            "asym_terms",
            "accum_precision",
        ],
    ),
    ("pde", &["alpha", "ell", "mu", "init", "xi_max", "x_grid", "t_grid"]),
    ("output", &["dir", "name", "svg"]),
];

/// Raw entries of one section: key -> (line, value).
type Entries = BTreeMap<String, (usize, String)>;

struct Section {
    line: usize,
    entries: Entries,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn need(&mut self, name: &str, key: &str) -> Result<(usize, String), ConfigError> {
        self.take(key)
            .ok_or_else(|| ConfigError { line: self.line, msg: format!("[{name}] needs `{key}`") })
    }
}

fn num<T: FromStr>(line: usize, s: &str) -> Result<T, ConfigError> {
    s.trim()
        .parse()
        .or_else(|_| err(line, format!("cannot parse `{}` as a number", s.trim())))
}

fn list(line: usize, s: &str) -> Result<Vec<f64>, ConfigError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|v| num(line, v)).collect()
}

fn pair(line: usize, s: &str) -> Result<(f64, f64), ConfigError> {
    match list(line, s)?[..] {
        [a, b] => Ok((a, b)),
        _ => err(line, "expected two comma-separated numbers"),
    }
}

fn triple(line: usize, s: &str) -> Result<(f64, f64, usize), ConfigError> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts[..] {
        [a, b, n] => Ok((num(line, a)?, num(line, b)?, num(line, n)?)),
        _ => err(line, "expected `start, stop, points`"),
    }
}

fn boolean(line: usize, s: &str) -> Result<bool, ConfigError> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => err(line, format!("expected true or false, got `{s}`")),
    }
}

fn function(line: usize, s: &str, role: Role) -> Result<FunctionSpec, ConfigError> {
    s.parse::<FunctionSpec>()
        .map(|f| f.with_role(role))
        .map_err(|e| ConfigError { line, msg: e.to_string() })
}

fn split_sections(text: &str) -> Result<BTreeMap<String, Section>, ConfigError> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if let Some(name) = l.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let name = name.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return err(line, format!("unknown section [{name}]"));
            }
            if out.contains_key(name) {
                return err(line, format!("section [{name}] appears twice"));
            }
            out.insert(name.to_string(), Section { line, entries: Entries::new() });
            current = Some(name.to_string());
            continue;
        }
        let Some((k, v)) = l.split_once('=') else {
            return err(line, format!("expected `key = value`, got `{l}`"));
        };
        let Some(sec) = current.as_ref() else {
            return err(line, "entry before the first section header");
        };
        let k = k.trim();
        let keys = SECTIONS.iter().find(|(s, _)| s == sec).map(|(_, k)| *k).unwrap_or(&[]);
        if !keys.contains(&k) {
            return err(line, format!("unknown key `{k}` in [{sec}]"));
        }
        let entries = &mut out.get_mut(sec).expect("section inserted").entries;
        if entries.insert(k.to_string(), (line, v.trim().to_string())).is_some() {
            return err(line, format!("key `{k}` repeated in [{sec}]"));
        }
    }
    Ok(out)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut secs = split_sections(text)?;
        let mut cfg = ExperimentConfig::default();

        if let Some(mut s) = secs.remove("order") {
            let (la, a) = s.need("order", "alpha")?;
            let (_, b) = s.need("order", "beta")?;
            cfg.order = Some(
                MlOrder::new(num(la, &a)?, num(la, &b)?).map_err(|e| ConfigError { line: la, msg: e.to_string() })?,
            );
        }

        if let Some(mut s) = secs.remove("problem") {
            let (li, iv) = s.need("problem", "interval")?;
            let (lp, phase) = s.need("problem", "phase")?;
            let (lm, amp) = s.need("problem", "amp")?;
            let variant = match s.take("variant") {
                None => Variant::Direct,
                Some((_, v)) if v == "direct" => Variant::Direct,
                Some((_, v)) if v == "shifted_power" => Variant::ShiftedPower,
                Some((l, v)) => return err(l, format!("unknown variant `{v}`")),
            };
            let theorem = match s.take("theorem") {
                None => None,
                Some((l, v)) => Some(v.parse().map_err(|e: mlvc::Error| ConfigError { line: l, msg: e.to_string() })?),
            };
            cfg.problem = Some(ProblemSection {
                interval: pair(li, &iv)?,
                phase: function(lp, &phase, Role::Phase)?,
                amp: function(lm, &amp, Role::Amplitude)?,
                variant,
                theorem,
            });
        }

        if let Some(mut s) = secs.remove("grid") {
            cfg.grid = Some(match s.take("values") {
                Some((l, v)) => {
                    if let Some((l2, _)) = s.take("start").or(s.take("stop")).or(s.take("points")) {
                        return err(l2.max(l), "[grid] takes either `values` or `start/stop/points`");
                    }
                    Grid::Values(list(l, &v)?)
                }
                None => {
                    let (l0, a) = s.need("grid", "start")?;
                    let (l1, b) = s.need("grid", "stop")?;
                    let (l2, n) = s.need("grid", "points")?;
                    Grid::Log { start: num(l0, &a)?, stop: num(l1, &b)?, points: num(l2, &n)? }
                }
            });
        }

        if let Some(mut s) = secs.remove("fit") {
            let (lw, w) = s.need("fit", "window")?;
            let log_factor = match s.take("log_factor") {
                Some((l, v)) => boolean(l, &v)?,
                None => false,
            };
            cfg.fit = Some(FitSection { window: pair(lw, &w)?, log_factor });
        }

        if let Some(mut s) = secs.remove("policy") {
            let mut p = QuadPolicy::default();
            let mut e = EvalPolicy::default();
            macro_rules! set {
                ($key:literal, $slot:expr) => {
                    if let Some((l, v)) = s.take($key) {
                        $slot = num(l, &v)?;
                    }
                };
            }
            set!("nodes_per_panel", p.nodes_per_panel);
            set!("panels_per_unit_phase", p.panels_per_unit_phase);
            set!("abs_tol", p.abs_tol);
            set!("max_panels", p.max_panels);
            set!("series_tol", e.series_tol);
            set!("max_terms", e.max_terms);
            set!("switch_radius", e.switch_radius);
            set!("asym_terms", e.asym_terms);
            set!("accum_precision", e.accum_precision);
            p.eval = e;
            p.validate().map_err(|e| ConfigError { line: s.line, msg: e.to_string() })?;
            cfg.policy = Some(p);
        }

        if let Some(mut s) = secs.remove("pde") {
            let (la, a) = s.need("pde", "alpha")?;
            let (le, ell) = s.need("pde", "ell")?;
            let (lm, mu) = s.need("pde", "mu")?;
            let mut p = PdeSection::new(num(la, &a)?, num(le, &ell)?, num(lm, &mu)?);
            if let Some((l, v)) = s.take("init") {
                p.init = function(l, &v, Role::Amplitude)?;
            }
            if let Some((l, v)) = s.take("xi_max") {
                p.xi_max = num(l, &v)?;
            }
            if let Some((l, v)) = s.take("x_grid") {
                p.x_grid = triple(l, &v)?;
            }
            if let Some((l, v)) = s.take("t_grid") {
                p.t_grid = triple(l, &v)?;
            }
            cfg.pde = Some(p);
        }

        if let Some(mut s) = secs.remove("output") {
            cfg.output.dir = s.take("dir").map(|(_, v)| v);
            cfg.output.name = s.take("name").map(|(_, v)| v);
            if let Some((l, v)) = s.take("svg") {
                cfg.output.svg = boolean(l, &v)?;
            }
        }
        Ok(cfg)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        if let Some(o) = &self.order {
            let _ = writeln!(s, "[order]\nalpha = {:?}\nbeta = {:?}\n", o.alpha, o.beta);
        }
        if let Some(p) = &self.problem {
            let _ = writeln!(s, "[problem]");
            let _ = writeln!(s, "interval = {:?}, {:?}", p.interval.0, p.interval.1);
            let _ = writeln!(s, "phase = {}", p.phase);
            let _ = writeln!(s, "amp = {}", p.amp);
            let v = match p.variant {
                Variant::Direct => "direct",
                Variant::ShiftedPower => "shifted_power",
            };
            let _ = writeln!(s, "variant = {v}");
            if let Some(t) = p.theorem {
                let _ = writeln!(s, "theorem = {t}");
            }
            s.push('\n');
        }
        match &self.grid {
            Some(Grid::Log { start, stop, points }) => {
                let _ = writeln!(s, "[grid]\nstart = {start:?}\nstop = {stop:?}\npoints = {points}\n");
            }
            Some(Grid::Values(v)) => {
                let vals: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
                let _ = writeln!(s, "[grid]\nvalues = {}\n", vals.join(", "));
            }
            None => {}
        }
        if let Some(f) = &self.fit {
            let _ = writeln!(
                s,
                "[fit]\nwindow = {:?}, {:?}\nlog_factor = {}\n",
                f.window.0, f.window.1, f.log_factor
            );
        }
        if let Some(p) = &self.policy {
            let _ = writeln!(s, "[policy]");
            let _ = writeln!(s, "nodes_per_panel = {}", p.nodes_per_panel);
            let _ = writeln!(s, "panels_per_unit_phase = {:?}", p.panels_per_unit_phase);
            let _ = writeln!(s, "abs_tol = {:?}", p.abs_tol);
            let _ = writeln!(s, "max_panels = {}", p.max_panels);
            let _ = writeln!(s, "series_tol = {:?}", p.eval.series_tol);
            let _ = writeln!(s, "max_terms = {}", p.eval.max_terms);
            let _ = writeln!(s, "switch_radius = {:?}", p.eval.switch_radius);
            let _ = writeln!(s, "asym_terms = {}", p.eval.asym_terms);
            let _ = writeln!(s, "accum_precision = {}\n", p.eval.accum_precision);
        }
        if let Some(p) = &self.pde {
            let _ = writeln!(s, "[pde]");
            let _ = writeln!(s, "alpha = {:?}\nell = {:?}\nmu = {:?}", p.alpha, p.ell, p.mu);
            let _ = writeln!(s, "init = {}", p.init);
            let _ = writeln!(s, "xi_max = {:?}", p.xi_max);
            let _ = writeln!(s, "x_grid = {:?}, {:?}, {}", p.x_grid.0, p.x_grid.1, p.x_grid.2);
            let _ = writeln!(s, "t_grid = {:?}, {:?}, {}\n", p.t_grid.0, p.t_grid.1, p.t_grid.2);
        }
        if self.output != OutputSection::default() {
            let _ = writeln!(s, "[output]");
            if let Some(d) = &self.output.dir {
                let _ = writeln!(s, "dir = {d}");
            }
            if let Some(n) = &self.output.name {
                let _ = writeln!(s, "name = {n}");
            }
            let _ = writeln!(s, "svg = {}", self.output.svg);
        }
        s
    }

    /// Integral described by `[order]` and `[problem]`.
    pub fn integral(&self) -> Result<IntegralSpec, ConfigError> {
        let order = self.order.ok_or(ConfigError { line: 0, msg: "missing [order]".into() })?;
        let p = self.problem.as_ref().ok_or(ConfigError { line: 0, msg: "missing [problem]".into() })?;
        let iv = Interval::new(p.interval.0, p.interval.1).map_err(|e| ConfigError { line: 0, msg: e.to_string() })?;
        if !iv.is_finite() {
            return err(0, "the interval must be finite");
        }
        Ok(IntegralSpec {
            order,
            iv,
            phase: p.phase.clone(),
            amp: p.amp.clone(),
            variant: p.variant,
        })
    }

    /// Everything `sweep` needs, checked before any quadrature runs.
    pub fn validate_sweep(&self) -> Result<(IntegralSpec, Vec<f64>), ConfigError> {
        let spec = self.integral()?;
        let grid = match &self.grid {
            Some(Grid::Log { start, stop, .. }) if !(*start > 0.0 && stop >= start) => {
                return err(0, "log grid needs 0 < start <= stop");
            }
            Some(g) => g.values(),
            None => return err(0, "missing [grid]"),
        };
        validate_grid(&grid).map_err(|e| ConfigError { line: 0, msg: e.to_string() })?;
        if let Some(f) = &self.fit {
            if !(f.window.0 > 0.0 && f.window.1 > f.window.0) {
                return err(0, "fit window needs 0 < lo < hi");
            }
        }
        if let Some(id) = self.problem.as_ref().and_then(|p| p.theorem) {
            let rep = check_hypotheses(id, &spec.phase, &spec.amp, &spec.iv, spec.order, &HypothesisOptions::default())
                .map_err(|e| ConfigError { line: 0, msg: e.to_string() })?;
            if !rep.passed() {
                return err(0, format!("hypotheses of {id} fail: {}", rep.failures()));
            }
        }
        Ok((spec, grid))
    }

    pub fn validate_pde(&self) -> Result<TfpdeParams, ConfigError> {
        let p = self.pde.as_ref().ok_or(ConfigError { line: 0, msg: "missing [pde]".into() })?;
        if !(p.t_grid.0 > 0.0 && p.t_grid.1 >= p.t_grid.0) {
            return err(0, "t_grid needs 0 < start <= stop");
        }
        if p.x_grid.2 == 0 || !(p.x_grid.1 >= p.x_grid.0) {
            return err(0, "x_grid needs start <= stop and at least one point");
        }
        let params = p.params();
        params.validate().map_err(|e| ConfigError { line: 0, msg: e.to_string() })?;
        Ok(params)
    }
}

/// The shipped first-lemma sweep.
pub const TH1_DEFAULT: &str = include_str!("../configs/th1.cfg");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn th1_default_parses() {
        let c = ExperimentConfig::parse(TH1_DEFAULT).unwrap();
        let (spec, grid) = c.validate_sweep().unwrap();
        assert_eq!(grid.len(), 13);
        assert_eq!(spec.order, MlOrder::new(0.5, 0.7).unwrap());
        assert_eq!(ExperimentConfig::parse(&c.render()).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_and_repeated_keys() {
        let e = ExperimentConfig::parse("[order]\nalpha = 1\ngamma = 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = ExperimentConfig::parse("[order]\nalpha = 1\nalpha = 2\n").unwrap_err();
        assert!(e.msg.contains("repeated"));
        assert!(ExperimentConfig::parse("[orders]\n").is_err());
        assert!(ExperimentConfig::parse("alpha = 1\n").is_err());
    }

    #[test]
    fn bad_functions_report_their_line() {
        let e = ExperimentConfig::parse("[pde]\nalpha = 0.5\nell = 1\nmu = 1\ninit = bump 0 -1\n").unwrap_err();
        assert_eq!(e.line, 5);
        let e = ExperimentConfig::parse("[pde]\nalpha = 0.5\nell = 1\nmu = 1\ninit = spline 1 2\n").unwrap_err();
        assert!(e.msg.contains("spline"));
    }

    #[test]
    fn negative_grid_rejected() {
        let text = TH1_DEFAULT.replace("start = 100.0\nstop = 10000.0\npoints = 13", "values = 1.0, -2.0");
        let c = ExperimentConfig::parse(&text).unwrap();
        assert!(c.validate_sweep().is_err());
    }

    #[test]
    fn hypothesis_violation_rejected() {
        // phi = x has a zero on [-1, 1], so the first statement does not apply
        let text = TH1_DEFAULT.replace("interval = 0.0, 1.0", "interval = -3.0, 1.0");
        let c = ExperimentConfig::parse(&text).unwrap();
        let e = c.validate_sweep().unwrap_err();
        assert!(e.msg.contains("hypotheses"), "{e}");
    }
}
