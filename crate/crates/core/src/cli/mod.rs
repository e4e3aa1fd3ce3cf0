//! The `pslab` command line: curve validation, surface reports, congruence
//! certificates, CSV/OBJ sampling and the self-test.

mod json;
mod sample;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::acceptance::{self, AcceptanceConfig, Status, ALPHA0_INTERIOR};
use crate::classifier::{
    classification_report, frame_checks, veronese_congruence_test, veronese_patch,
    ClassificationSummary, Expectations, Extremum, TheoremSurface, CONNECTION_FORM_CURVE_ORDER,
    DEFAULT_S_RANGE, VERONESE_KD,
};
use crate::curve::{validate_with_margin, Expr, NullCurve, Residual, ValidationReport};
use crate::error::{Error, Result};
use crate::surface::{Rect, SurfacePatch};

pub use sample::{write_csv, write_obj, Projection, CSV_HEADER};

pub const SCHEMA: u64 = 1;
pub const VERONESE_SURFACE: &str = "veronese-surface";
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CHECK: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "pslab",
    version,
    about = "Minimal Lorentzian surfaces in S^4_2(1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the null-curve constraints of a curve spec.
    ValidateCurve(Opts),
    /// Build the surface and certify minimality, curvatures and frame identities.
    Report(Opts),
    /// Decide congruence to the Lorentzian Veronese surface.
    Congruence(Opts),
    /// Sample the surface on a grid as CSV, OBJ or JSON.
    Sample(Opts),
    /// Run the acceptance suite on the builtins.
    Selftest(Opts),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Obj,
    Json,
}

#[derive(Args, Debug)]
struct Opts {
    /// Curve spec file.
    #[arg(long, conflicts_with = "builtin")]
    curve: Option<PathBuf>,
    /// veronese-generator, alpha0 or veronese-surface.
    #[arg(long)]
    builtin: Option<String>,
    /// Grid size NSxNT.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    /// s interval A:B.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    s_range: Option<(f64, f64)>,
    /// t interval A:B (constant expressions such as pi/2-0.3 are accepted).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    t_range: Option<(f64, f64)>,
    /// Tolerance for the null-curve constraints (default 1e-9).
    #[arg(long)]
    tol_curve: Option<f64>,
    /// Tolerance for curvature and frame checks (default 1e-8).
    #[arg(long)]
    tol_geom: Option<f64>,
    /// Tolerance on |c| for the congruence verdict (default 1e-8).
    #[arg(long)]
    tol_cong: Option<f64>,
    /// Curve jet order; connection-form checks need at least 6.
    #[arg(long)]
    jet_order: Option<usize>,
    /// Fraction of the curve domain excluded at each end.
    #[arg(long)]
    margin: Option<f64>,
    /// Samples for curve validation.
    #[arg(long)]
    samples: Option<usize>,
    /// Write the output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format of sample (default csv).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Three 1-based coordinate indices i,j,k or fifteen matrix entries
    /// (3x5, row-major).
    #[arg(long, value_parser = Projection::parse)]
    projection: Option<Projection>,
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X', '×'])
        .ok_or_else(|| format!("expected NSxNT, got {s:?}"))?;
    let n = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((n(a)?, n(b)?))
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected A:B, got {s:?}"))?;
    let num = |v: &str| -> std::result::Result<f64, String> {
        let e = Expr::parse(v).map_err(|e| e.to_string())?;
        if e.depends_on_t() {
            return Err(format!("{v:?} must be a constant"));
        }
        e.eval(0.0).map_err(|e| e.to_string())
    };
    let (a, b) = (num(a)?, num(b)?);
    if !(a < b) {
        return Err(format!("empty interval {a}:{b}"));
    }
    Ok((a, b))
}

/// Resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub jet_order: usize,
    pub grid: (usize, usize),
    pub tol_curve: f64,
    pub tol_geom: f64,
    pub tol_cong: f64,
    /// Defaults to the input's own s-interval.
    pub s_range: Option<(f64, f64)>,
    pub t_range: Option<(f64, f64)>,
    pub margin: f64,
    pub samples: usize,
    pub projection: Projection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            jet_order: 6,
            grid: (20, 20),
            tol_curve: crate::curve::DEFAULT_CURVE_TOL,
            tol_geom: 1e-8,
            tol_cong: 1e-8,
            s_range: None,
            t_range: None,
            margin: crate::curve::DEFAULT_MARGIN,
            samples: 101,
            projection: Projection::Coords([3, 4, 5]),
        }
    }
}

impl RunConfig {
    fn from_opts(o: &Opts) -> Result<Self> {
        let d = RunConfig::default();
        let cfg = RunConfig {
            jet_order: o.jet_order.unwrap_or(d.jet_order),
            grid: o.grid.unwrap_or(d.grid),
            tol_curve: o.tol_curve.unwrap_or(d.tol_curve),
            tol_geom: o.tol_geom.unwrap_or(d.tol_geom),
            tol_cong: o.tol_cong.unwrap_or(d.tol_cong),
            s_range: o.s_range,
            t_range: o.t_range,
            margin: o.margin.unwrap_or(d.margin),
            samples: o.samples.unwrap_or(d.samples),
            projection: o.projection.clone().unwrap_or(d.projection),
        };
        for (name, v) in [
            ("tol-curve", cfg.tol_curve),
            ("tol-geom", cfg.tol_geom),
            ("tol-cong", cfg.tol_cong),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("--{name} must be positive")));
            }
        }
        if !(0.0..0.5).contains(&cfg.margin) {
            return Err(Error::InvalidArgument(
                "--margin must lie in [0, 0.5)".into(),
            ));
        }
        Ok(cfg)
    }

    /// Connection-form checks run only with enough curve jet order.
    pub fn connection_checks_enabled(&self) -> bool {
        self.jet_order >= CONNECTION_FORM_CURVE_ORDER
    }

    fn to_json(&self) -> Value {
        json!({
            "jet_order": self.jet_order,
            "grid": [self.grid.0, self.grid.1],
            "tolerances": {"curve": self.tol_curve, "geometry": self.tol_geom, "congruence": self.tol_cong},
            "s_range": self.s_range.map(|(a, b)| vec![a, b]),
            "t_range": self.t_range.map(|(a, b)| vec![a, b]),
            "margin": self.margin,
        })
    }
}

/// What a command runs on.
#[derive(Debug, Clone)]
pub enum Input {
    Curve {
        curve: NullCurve,
        name: String,
        builtin: bool,
        digest: String,
    },
    Veronese {
        digest: String,
    },
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Input {
    fn load(o: &Opts) -> Result<Self> {
        match (&o.curve, &o.builtin) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                let curve = NullCurve::from_spec(&text)?;
                Ok(Input::Curve {
                    curve,
                    name: path.display().to_string(),
                    builtin: false,
                    digest: sha256_hex(text.as_bytes()),
                })
            }
            (None, Some(name)) if name == VERONESE_SURFACE => Ok(Input::Veronese {
                digest: sha256_hex(VERONESE_SURFACE.as_bytes()),
            }),
            (None, Some(name)) => {
                let curve = NullCurve::builtin(name)?;
                let digest = sha256_hex(curve.to_spec().as_bytes());
                Ok(Input::Curve {
                    curve,
                    name: name.clone(),
                    builtin: true,
                    digest,
                })
            }
            (None, None) => Err(Error::InvalidArgument(
                "one of --curve FILE or --builtin NAME is required".into(),
            )),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Input::Curve {
                name,
                builtin,
                digest,
                ..
            } => {
                json!({"kind": if *builtin { "builtin" } else { "file" }, "name": name, "sha256": digest})
            }
            Input::Veronese { digest } => {
                json!({"kind": "builtin", "name": VERONESE_SURFACE, "sha256": digest})
            }
        }
    }

    fn curve(&self) -> Result<&NullCurve> {
        match self {
            Input::Curve { curve, .. } => Ok(curve),
            Input::Veronese { .. } => Err(Error::InvalidArgument(format!(
                "{VERONESE_SURFACE} is a surface, not a curve"
            ))),
        }
    }

    /// Default t-interval for surface grids built from this curve.
    fn t_range(&self, cfg: &RunConfig) -> Result<(f64, f64)> {
        if let Some(r) = cfg.t_range {
            return Ok(r);
        }
        let curve = self.curve()?;
        if matches!(self, Input::Curve { builtin: true, name, .. } if name == "alpha0") {
            return Ok(ALPHA0_INTERIOR);
        }
        let (a, b) = curve.domain();
        let w = b - a;
        Ok((a + cfg.margin * w, b - cfg.margin * w))
    }
}

fn check(name: &str, ok: bool, max: f64, worst: Option<(f64, f64)>, tol: f64) -> Value {
    json!({
        "name": name,
        "status": if ok { "pass" } else { "fail" },
        "max_residual": max,
        "worst_point": worst.map(|(s, t)| vec![s, t]),
        "tolerance": tol,
    })
}

fn skipped(name: &str, reason: &str) -> Value {
    json!({"name": name, "status": "skipped", "reason": reason})
}

fn ext_check(name: &str, e: &Extremum, tol: f64) -> Value {
    check(name, e.max < tol, e.max, e.at, tol)
}

fn residual_check(r: &Residual, tol: f64) -> Value {
    json!({
        "name": r.name,
        "status": if r.max < tol { "pass" } else { "fail" },
        "max_residual": r.max,
        "worst_t": r.worst_t,
        "tolerance": tol,
    })
}

fn all_pass(checks: &[Value]) -> bool {
    checks.iter().all(|c| c["status"] != "fail")
}

fn certificate(command: &str, input: Option<&Input>, cfg: &RunConfig, body: Value) -> Value {
    let mut cert = json!({
        "schema": SCHEMA,
        "tool": "pslab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": cfg.to_json(),
        "input": input.map(Input::to_json),
    });
    if let (Value::Object(m), Value::Object(b)) = (&mut cert, body) {
        m.extend(b);
    }
    cert
}

fn validation_json(rep: &ValidationReport) -> (Vec<Value>, Value) {
    let checks: Vec<Value> = rep
        .constraints
        .iter()
        .map(|r| residual_check(r, rep.tolerance))
        .collect();
    let identities: Vec<Value> = rep
        .identities
        .iter()
        .map(|r| json!({"name": r.name, "max_residual": r.max, "worst_t": r.worst_t}))
        .collect();
    (
        checks,
        json!({"samples": rep.samples, "interval": [rep.interval.0, rep.interval.1], "identities": identities}),
    )
}

/// Result of a command: the text to emit and the exit code.
struct Outcome {
    text: String,
    code: i32,
}

fn validate(input: &Input, cfg: &RunConfig) -> Result<(ValidationReport, Vec<Value>, Value)> {
    let rep = validate_with_margin(input.curve()?, cfg.samples, cfg.tol_curve, cfg.margin)?;
    let (checks, detail) = validation_json(&rep);
    Ok((rep, checks, detail))
}

fn cmd_validate_curve(input: &Input, cfg: &RunConfig) -> Result<Outcome> {
    let (rep, checks, detail) = validate(input, cfg)?;
    let verdict = if rep.passed { "pass" } else { "fail" };
    let cert = certificate(
        "validate-curve",
        Some(input),
        cfg,
        json!({"checks": checks, "validation": detail, "verdict": verdict}),
    );
    Ok(Outcome {
        text: json::to_string(&cert),
        code: if rep.passed { EXIT_OK } else { EXIT_CHECK },
    })
}

fn summary_checks(rep: &ClassificationSummary, signed: bool) -> Vec<Value> {
    let tol = rep.tolerance;
    let mut checks = vec![
        ext_check("minimality", &rep.mean_curvature, tol),
        ext_check("gaussian-curvature", &rep.k_deviation, tol),
        ext_check(
            if signed {
                "normal-curvature-signed"
            } else {
                "normal-curvature-abs"
            },
            &rep.k_normal_deviation,
            tol,
        ),
        ext_check("sphere", &rep.sphere, tol),
        ext_check("gauss-equation", &rep.gauss, tol),
        ext_check("codazzi-equation", &rep.codazzi, tol),
        ext_check("ricci-equation", &rep.ricci, tol),
    ];
    if let Some(m) = &rep.metric_form {
        checks.push(ext_check("metric-normal-form", m, tol));
    }
    checks.push(json!({
        "name": "evaluated-points",
        "status": if rep.points.is_empty() { "fail" } else { "pass" },
        "evaluated": rep.points.len(),
        "singular": rep.singular.len(),
    }));
    checks
}

fn summary_json(rep: &ClassificationSummary) -> Value {
    json!({
        "label": rep.label,
        "grid": [rep.grid.0, rep.grid.1],
        "s_range": [rep.rect.s.0, rep.rect.s.1],
        "t_range": [rep.rect.t.0, rep.rect.t.1],
        "evaluated": rep.points.len(),
        "singular": rep.singular.iter().map(|f| json!({"s": f.s, "t": f.t, "error": f.message})).collect::<Vec<_>>(),
        "k_std": rep.k_std,
        "k_normal_std": rep.k_normal_std,
        "violations": rep.violations.iter().take(20).map(|v| json!({"s": v.s, "t": v.t, "check": v.check, "value": v.value})).collect::<Vec<_>>(),
        "violation_count": rep.violations.len(),
    })
}

fn frame_check_json(ts: &TheoremSurface, rect: Rect, cfg: &RunConfig) -> Result<Vec<Value>> {
    let tol = cfg.tol_geom;
    let tol_conn = 10.0 * tol;
    let mut worst = [(0.0f64, None::<(f64, f64)>); 5];
    for (s, t) in rect.grid(5, 5) {
        let c = frame_checks(ts, s, t)?;
        let vals = [
            c.gram,
            c.h11_is_f3.max(c.h12_is_x),
            c.h11_null,
            c.connection,
            c.normal_connection.max(c.levi_civita),
        ];
        for (w, v) in worst.iter_mut().zip(vals) {
            if w.1.is_none() || v > w.0 || v.is_nan() {
                *w = (v, Some((s, t)));
            }
        }
    }
    let mut out = vec![
        check(
            "canonical-frame-gram",
            worst[0].0 < tol,
            worst[0].0,
            worst[0].1,
            tol,
        ),
        check(
            "second-fundamental-form-pattern",
            worst[1].0 < tol,
            worst[1].0,
            worst[1].1,
            tol,
        ),
        check("h11-null", worst[2].0 < tol, worst[2].0, worst[2].1, tol),
    ];
    if cfg.connection_checks_enabled() {
        out.push(check(
            "connection-forms",
            worst[3].0 < tol_conn,
            worst[3].0,
            worst[3].1,
            tol_conn,
        ));
        out.push(check(
            "connection-pattern",
            worst[4].0 < tol_conn,
            worst[4].0,
            worst[4].1,
            tol_conn,
        ));
    } else {
        let reason = format!(
            "jet order {} < {CONNECTION_FORM_CURVE_ORDER}",
            cfg.jet_order
        );
        out.push(skipped("connection-forms", &reason));
        out.push(skipped("connection-pattern", &reason));
    }
    Ok(out)
}

/// Validates the curve of `input` and builds its surface and grid rectangle;
/// `Err(Outcome)` carries the failed validation certificate.
fn build(
    command: &str,
    input: &Input,
    cfg: &RunConfig,
) -> Result<std::result::Result<(TheoremSurface, Rect), Outcome>> {
    let (rep, checks, detail) = validate(input, cfg)?;
    if !rep.passed {
        let cert = certificate(
            command,
            Some(input),
            cfg,
            json!({"checks": checks, "validation": detail, "verdict": "fail"}),
        );
        return Ok(Err(Outcome {
            text: json::to_string(&cert),
            code: EXIT_CHECK,
        }));
    }
    let s_range = cfg.s_range.unwrap_or(DEFAULT_S_RANGE);
    let ts = TheoremSurface::unchecked(input.curve()?.clone(), s_range)?;
    let rect = Rect::new(s_range, input.t_range(cfg)?);
    Ok(Ok((ts, rect)))
}

fn veronese_rect(cfg: &RunConfig) -> Rect {
    let d = veronese_patch().domain();
    Rect::new(cfg.s_range.unwrap_or(d.s), cfg.t_range.unwrap_or(d.t))
}

fn cmd_report(input: &Input, cfg: &RunConfig) -> Result<Outcome> {
    let (grid, tol) = (cfg.grid, cfg.tol_geom);
    let (mut checks, summary) = match input {
        Input::Veronese { .. } => {
            let p = veronese_patch();
            let rect = veronese_rect(cfg);
            let expect = Expectations {
                k_normal: Some(VERONESE_KD),
                ..Expectations::default()
            };
            let rep = classification_report(&p, rect, grid, tol, expect)?;
            (summary_checks(&rep, true), summary_json(&rep))
        }
        Input::Curve { .. } => {
            let (ts, rect) = match build("report", input, cfg)? {
                Ok(v) => v,
                Err(out) => return Ok(out),
            };
            let rep = classification_report(&ts, rect, grid, tol, Expectations::default())?;
            let mut checks = vec![check("curve-validation", true, 0.0, None, cfg.tol_curve)];
            checks.extend(summary_checks(&rep, false));
            checks.extend(frame_check_json(&ts, rect, cfg)?);
            (checks, summary_json(&rep))
        }
    };
    checks.sort_by(|a, b| a["name"].as_str().cmp(&b["name"].as_str()));
    let ok = all_pass(&checks);
    let cert = certificate(
        "report",
        Some(input),
        cfg,
        json!({"checks": checks, "summary": summary, "verdict": if ok { "pass" } else { "fail" }}),
    );
    Ok(Outcome {
        text: json::to_string(&cert),
        code: if ok { EXIT_OK } else { EXIT_CHECK },
    })
}

fn cmd_congruence(input: &Input, cfg: &RunConfig) -> Result<Outcome> {
    let (ts, rect) = match build("congruence", input, cfg)? {
        Ok(v) => v,
        Err(out) => return Ok(out),
    };
    let c = veronese_congruence_test(&ts, rect, cfg.grid, cfg.tol_cong)?;
    let decisive = c.verdict != crate::classifier::Verdict::Inconclusive;
    let body = json!({
        "congruence": {
            "max_abs_c": c.max_abs_c,
            "worst_point": c.worst_point.map(|(s, t)| vec![s, t]),
            "c4_residual": c.c4_residual,
            "grid": [c.grid.0, c.grid.1],
            "s_range": [c.rect.s.0, c.rect.s.1],
            "t_range": [c.rect.t.0, c.rect.t.1],
            "tolerance": c.tolerance,
            "evaluated": c.evaluated,
            "failures": c.failures.iter().map(|f| json!({"s": f.s, "t": f.t, "error": f.message})).collect::<Vec<_>>(),
        },
        "verdict": c.verdict.as_str(),
    });
    let cert = certificate("congruence", Some(input), cfg, body);
    Ok(Outcome {
        text: json::to_string(&cert),
        code: if decisive { EXIT_OK } else { EXIT_CHECK },
    })
}

fn cmd_sample(input: &Input, cfg: &RunConfig, format: Format) -> Result<Outcome> {
    let veronese;
    let built;
    let (patch, rect): (&dyn SurfacePatch, Rect) = match input {
        Input::Veronese { .. } => {
            veronese = veronese_patch();
            (&veronese, veronese_rect(cfg))
        }
        Input::Curve { .. } => match build("sample", input, cfg)? {
            Ok((ts, rect)) => {
                built = ts;
                (&built, rect)
            }
            Err(out) => return Ok(out),
        },
    };
    let rows = sample::sample(patch, rect, cfg.grid)?;
    let text = match format {
        Format::Csv => write_csv(&rows)?,
        Format::Obj => write_obj(&rows, cfg.grid, &cfg.projection, patch.label())?,
        Format::Json => json::to_string(&sample::rows_json(&rows)),
    };
    Ok(Outcome {
        text,
        code: EXIT_OK,
    })
}

fn cmd_selftest(cfg: &RunConfig, lines: &mut dyn Write) -> Result<Outcome> {
    let acfg = AcceptanceConfig {
        tol_geom: cfg.tol_geom,
        tol_cong: cfg.tol_cong,
        jet_order: cfg.jet_order,
        ..AcceptanceConfig::default()
    };
    let mut checks = Vec::new();
    for id in 1..=acceptance::CRITERIA {
        let r = acceptance::run_criterion(id, &acfg);
        writeln!(lines, "{}", r.line())?;
        checks.push(json!({
            "name": format!("{}-{}", r.id, r.name),
            "status": r.status.as_str(),
            "max_residual": r.max_residual,
            "detail": r.detail,
        }));
    }
    let ok = checks.iter().all(|c| c["status"] != Status::Fail.as_str());
    let cert = certificate(
        "selftest",
        None,
        cfg,
        json!({"checks": checks, "verdict": if ok { "pass" } else { "fail" }}),
    );
    Ok(Outcome {
        text: json::to_string(&cert),
        code: if ok { EXIT_OK } else { EXIT_CHECK },
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var("PSLAB_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // Fails only if the pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => match stdout.write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    configure_threads();
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "pslab: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    let (name, opts) = match &command {
        Command::ValidateCurve(o) => ("validate-curve", o),
        Command::Report(o) => ("report", o),
        Command::Congruence(o) => ("congruence", o),
        Command::Sample(o) => ("sample", o),
        Command::Selftest(o) => ("selftest", o),
    };
    let cfg = RunConfig::from_opts(opts)?;
    if name != "selftest" && name != "sample" {
        if let Some(f) = opts.format {
            if f != Format::Json {
                return Err(Error::InvalidArgument(format!(
                    "{name} writes JSON certificates; --format {f:?} is for sample"
                )));
            }
        }
    }
    let outcome = match command {
        Command::ValidateCurve(_) => cmd_validate_curve(&Input::load(opts)?, &cfg)?,
        Command::Report(_) => cmd_report(&Input::load(opts)?, &cfg)?,
        Command::Congruence(_) => cmd_congruence(&Input::load(opts)?, &cfg)?,
        Command::Sample(_) => {
            let format = opts.format.unwrap_or(Format::Csv);
            let out = cmd_sample(&Input::load(opts)?, &cfg, format)?;
            if out.code != EXIT_OK {
                // Failed validation: report on stdout, write no file.
                stdout.write_all(out.text.as_bytes())?;
                return Ok(out.code);
            }
            out
        }
        Command::Selftest(_) => {
            let out = cmd_selftest(&cfg, stdout)?;
            if let Some(path) = &opts.out {
                emit(&out.text, Some(path), stdout)?;
            }
            return Ok(out.code);
        }
    };
    emit(&outcome.text, opts.out.as_deref(), stdout)?;
    Ok(outcome.code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grid_and_ranges() {
        assert_eq!(parse_grid("20x10").unwrap(), (20, 10));
        assert!(parse_grid("20").is_err());
        assert_eq!(parse_range("-3:3").unwrap(), (-3.0, 3.0));
        let (a, b) = parse_range("0.3:pi/2-0.3").unwrap();
        assert_eq!(a, 0.3);
        assert!((b - (std::f64::consts::FRAC_PI_2 - 0.3)).abs() < 1e-15);
        assert!(parse_range("1:0").is_err());
        assert!(parse_range("0:t").is_err());
    }
}
