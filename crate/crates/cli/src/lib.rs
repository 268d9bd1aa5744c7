//! Command implementations behind the `mlvc` binary.

pub mod config;
pub mod svg;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use mlvc::fit::fit_power_law;
use mlvc::mlf::ml_eval_detailed;
use mlvc::quad::{sweep, QuadPolicy, RowStatus};
use mlvc::tfpde::{dispersive_check, TfpdeParams};
use mlvc::verify::{case, run_cases, CaseReport};
use mlvc::{Error, EvalPolicy, MlOrder, TheoremId};

use config::{ConfigError, ExperimentConfig, OutputSection};
use svg::Series;

pub const OUT_DIR_ENV: &str = "MLF_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "out";

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// A command that could not complete, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, msg: msg.into() }
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_NUMERICAL, msg: msg.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

/// Exit code for a library error.
pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::Regime(_)
        | Error::UnsupportedRegion(_)
        | Error::DegenerateInput(_)
        | Error::InvalidParameter(_)
        | Error::UnknownTheorem(_)
        | Error::HypothesisFailure { .. }
        | Error::UnsupportedDerivative { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: error_code(&e), msg: e.to_string() }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(format!("i/o: {e}"))
    }
}

/// Exit code on success paths: 0, or 1 for a failed verification.
pub type CmdResult = Result<u8, Failure>;

/// `MLF_OUT_DIR` wins over the configured directory.
pub fn out_dir(configured: Option<&str>) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => PathBuf::from(configured.unwrap_or(DEFAULT_OUT_DIR)),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse `{s}` as a complex number");
    let real = |v: &str| v.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(real(&t)?, 0.0));
    };
    let b = body.as_bytes();
    let split = (1..b.len())
        .rev()
        .find(|&p| (b[p] == b'+' || b[p] == b'-') && !matches!(b[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (real(&body[..p])?, &body[p..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => real(v)?,
    };
    Ok(Complex64::new(re, im))
}

fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:?}{}{:?}i", z.re, sign, z.im.abs())
}

pub fn cmd_ml_eval(alpha: f64, beta: f64, z: &str, out: &mut dyn Write) -> CmdResult {
    let z = parse_complex(z).map_err(Failure::usage)?;
    let order = MlOrder::new(alpha, beta)?;
    let v = ml_eval_detailed(order, z, &EvalPolicy::default())?;
    writeln!(out, "E_{{{alpha},{beta}}}({})", fmt_complex(z))?;
    writeln!(out, "value   = {}", fmt_complex(v.value))?;
    writeln!(out, "re      = {:?}", v.value.re)?;
    writeln!(out, "im      = {:?}", v.value.im)?;
    writeln!(out, "backend = {}", v.backend)?;
    writeln!(out, "err_est = {:e}", v.err_est)?;
    Ok(0)
}

pub fn cmd_sweep(cfg: &ExperimentConfig, out: &mut dyn Write) -> CmdResult {
    let (spec, grid) = cfg.validate_sweep()?;
    let policy = cfg.policy.unwrap_or_default();
    let table = sweep(&spec, &grid, &policy)?;
    let dir = out_dir(cfg.output.dir.as_deref());
    let name = cfg.output.name.as_deref().unwrap_or("sweep");
    let path = write_file(&dir, &format!("{name}.csv"), &table.to_csv())?;
    writeln!(out, "wrote {} ({} rows)", path.display(), table.rows.len())?;

    let failed: Vec<String> = table
        .failures()
        .map(|r| match &r.status {
            RowStatus::Failed(m) => format!("lambda = {:?}: {m}", r.lambda),
            _ => format!("lambda = {:?}: tolerance not met (err_est {:e})", r.lambda, r.err_est),
        })
        .collect();
    if !failed.is_empty() {
        return Err(Failure::numerical(format!(
            "quadrature failed at {} grid point(s):\n  {}",
            failed.len(),
            failed.join("\n  ")
        )));
    }

    let pts: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.lambda, r.abs())).collect();
    let mut fitted = None;
    if let Some(f) = &cfg.fit {
        let fit = fit_power_law(&pts, f.window, f.log_factor)?;
        writeln!(
            out,
            "slope = {:.6} r2 = {:.6} window = [{:e}, {:e}] points = {}",
            fit.slope, fit.r2, f.window.0, f.window.1, fit.points
        )?;
        fitted = Some(fit);
    }
    if cfg.output.svg {
        let mut series = vec![Series { label: "|I(lambda)|", color: "#1f77b4", dashed: false, points: pts.clone() }];
        if let Some(fit) = fitted {
            let (lo, hi) = fit.window;
            let line = pts
                .iter()
                .filter(|p| p.0 >= lo && p.0 <= hi)
                .map(|&(l, _)| (l, (fit.intercept + fit.slope * l.ln()).exp()))
                .collect();
            series.push(Series { label: "fitted power law", color: "#d62728", dashed: true, points: line });
        }
        let plot = svg::log_log(name, "lambda", "|I|", &series);
        let path = write_file(&dir, &format!("{name}.svg"), &plot)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(0)
}

/// `all` expands to the full registry; any unknown id is an error before work starts.
pub fn resolve_ids(ids: &[String]) -> Result<Vec<TheoremId>, Failure> {
    if ids.is_empty() {
        return Err(Failure::usage("no case ids given"));
    }
    let mut out = Vec::new();
    for id in ids {
        if id == "all" {
            out.extend(TheoremId::ALL);
        } else {
            out.push(id.parse::<TheoremId>()?);
        }
    }
    Ok(out)
}

fn case_svg(r: &CaseReport) -> String {
    let data = r.rows.iter().map(|w| (w.lambda, w.abs_i)).collect();
    let env = r.rows.iter().map(|w| (w.lambda, w.envelope)).collect();
    let x = if r.id == TheoremId::Tfpde { "t" } else { "lambda" };
    svg::log_log(
        r.id.as_str(),
        x,
        "magnitude",
        &[
            Series { label: "data", color: "#1f77b4", dashed: false, points: data },
            Series { label: "envelope", color: "#d62728", dashed: true, points: env },
        ],
    )
}

pub struct VerifyOptions {
    pub dir: Option<String>,
    pub svg: bool,
    pub policy: QuadPolicy,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { dir: None, svg: false, policy: QuadPolicy::default() }
    }
}

pub fn cmd_verify(ids: &[String], opts: &VerifyOptions, out: &mut dyn Write) -> CmdResult {
    let ids = resolve_ids(ids)?;
    let cases: Vec<_> = ids.iter().map(|&id| case(id)).collect();
    let results = run_cases(&cases, &opts.policy);
    let dir = out_dir(opts.dir.as_deref());

    let mut summary = String::new();
    let mut code = 0u8;
    let mut passed = 0;
    for (c, res) in cases.iter().zip(&results) {
        match res {
            Ok(r) => {
                write_file(&dir, &format!("{}.csv", r.id), &r.to_csv())?;
                if opts.svg {
                    write_file(&dir, &format!("{}.svg", r.id), &case_svg(r))?;
                }
                if r.pass {
                    passed += 1;
                } else {
                    code = code.max(EXIT_FAIL);
                }
                summary.push_str(&r.summary_line());
            }
            Err(e) => {
                code = code.max(error_code(e));
                summary.push_str(&format!("{:<10} ERROR {e}", c.id.as_str()));
            }
        }
        summary.push('\n');
    }
    summary.push_str(&format!("{passed}/{} passed\n", cases.len()));
    write_file(&dir, "summary.txt", &summary)?;
    out.write_all(summary.as_bytes())?;
    Ok(code)
}

pub fn cmd_pde(params: &TfpdeParams, output: &OutputSection, out: &mut dyn Write) -> CmdResult {
    let r = dispersive_check(params)?;
    let dir = out_dir(output.dir.as_deref());
    let name = output.name.as_deref().unwrap_or("tfpde");
    let mut csv = String::from("t,sup_abs_u\n");
    for w in &r.rows {
        csv.push_str(&format!("{:?},{:?}\n", w.lambda, w.abs_i));
    }
    let path = write_file(&dir, &format!("{name}.csv"), &csv)?;
    writeln!(out, "wrote {} ({} rows)", path.display(), r.rows.len())?;
    if output.svg {
        let path = write_file(&dir, &format!("{name}.svg"), &case_svg(&r))?;
        writeln!(out, "wrote {}", path.display())?;
    }
    writeln!(out, "{}", r.summary_line())?;
    Ok(if r.pass { 0 } else { EXIT_FAIL })
}
