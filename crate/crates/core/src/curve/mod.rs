//! Null generating curves `t -> E^5_2`: the expression DSL, curve spec files,
//! the builtin curves, constraint validation and the invariants η, η′, ξ.

mod expr;
mod parse;

use std::fmt;

pub use expr::{BinOp, Constant, Expr};

use crate::algebra::Signature;
use crate::error::{Error, Result};
use crate::jet::{Jet1, JetFunction};

/// `<α'', α''>` required by the construction.
pub const ACCEL_NORM: f64 = 4.0 / 9.0;
pub const DEFAULT_CURVE_TOL: f64 = 1e-9;
pub const DEFAULT_MARGIN: f64 = 0.01;

pub const BUILTIN_CURVES: [&str; 2] = ["veronese-generator", "alpha0"];

const VERONESE_GENERATOR: &str = "\
label: veronese-generator
c1: 2*cos(t)/(3*sqrt3)
c2: 2*sin(t)/(3*sqrt3)
c3: cos(2*t)/(3*sqrt3)
c4: sin(2*t)/(3*sqrt3)
c5: sqrt3/(3*sqrt3)
domain: -pi pi
";

const ALPHA0: &str = "\
label: alpha0
c1: cos(2*t)*cot(t)/(3*sqrt3)
c2: 2*cos(t)^2/(3*sqrt3)
c3: cos(t)*cot(t)*cos(sqrt3*ln(tan(t)+sec(t)))/(3*sqrt3)
c4: cos(t)*cot(t)*sin(sqrt3*ln(tan(t)+sec(t)))/(3*sqrt3)
c5: cos(t)/(3*sqrt3)
domain: 0 pi/2
";

#[derive(Debug, Clone, PartialEq)]
pub struct NullCurve {
    components: [Expr; 5],
    domain: (f64, f64),
    label: String,
}

impl NullCurve {
    pub fn new(
        components: [Expr; 5],
        domain: (f64, f64),
        label: impl Into<String>,
    ) -> Result<Self> {
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidCurve(format!("bad domain ({a}, {b})")));
        }
        Ok(NullCurve {
            components,
            domain,
            label: label.into(),
        })
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "veronese-generator" => NullCurve::from_spec(VERONESE_GENERATOR),
            "alpha0" => NullCurve::from_spec(ALPHA0),
            other => Err(Error::UnknownBuiltin(other.to_string())),
        }
    }

    /// Parses the curve spec format: five `cK: <expr>` lines, one
    /// `domain: <min> <max>` line, an optional `label:` line, `#` comments.
    pub fn from_spec(text: &str) -> Result<Self> {
        let mut comps: [Option<Expr>; 5] = Default::default();
        let mut domain = None;
        let mut label = None;
        let mut last_line = 0;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let spec_err = |message: String| Error::CurveSpec {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| spec_err("expected `key: value`".into()))?;
            let key = key.trim();
            let value_col = key_offset(line);
            match key {
                "c1" | "c2" | "c3" | "c4" | "c5" => {
                    let k = key[1..].parse::<usize>().unwrap() - 1;
                    if comps[k].is_some() {
                        return Err(spec_err(format!("duplicate component {key}")));
                    }
                    let e = Expr::parse(value).map_err(|e| relocate(e, line_no, value_col))?;
                    comps[k] = Some(e);
                }
                "domain" => {
                    if domain.is_some() {
                        return Err(spec_err("duplicate domain".into()));
                    }
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 2 {
                        return Err(spec_err(format!(
                            "domain needs two bounds, found {}",
                            parts.len()
                        )));
                    }
                    let mut bounds = [0.0; 2];
                    for (b, p) in bounds.iter_mut().zip(&parts) {
                        let e = Expr::parse(p).map_err(|e| spec_err(e.to_string()))?;
                        if e.depends_on_t() {
                            return Err(spec_err("domain bounds must be constant".into()));
                        }
                        *b = e.eval(0.0).map_err(|e| spec_err(e.to_string()))?;
                    }
                    domain = Some((bounds[0], bounds[1]));
                }
                "label" => label = Some(value.trim().to_string()),
                other => return Err(spec_err(format!("unknown key `{other}`"))),
            }
        }
        let end_err = |message: String| Error::CurveSpec {
            line: last_line,
            message,
        };
        let mut components = Vec::with_capacity(5);
        for (k, c) in comps.into_iter().enumerate() {
            components.push(c.ok_or_else(|| end_err(format!("missing component c{}", k + 1)))?);
        }
        let components: [Expr; 5] = components.try_into().unwrap();
        let domain = domain.ok_or_else(|| end_err("missing domain".into()))?;
        NullCurve::new(components, domain, label.unwrap_or_else(|| "curve".into()))
            .map_err(|e| end_err(e.to_string()))
    }

    /// Spec-file text that parses back to this curve.
    pub fn to_spec(&self) -> String {
        let mut out = format!("label: {}\n", self.label);
        for (k, c) in self.components.iter().enumerate() {
            out.push_str(&format!("c{}: {}\n", k + 1, c));
        }
        out.push_str(&format!("domain: {} {}\n", self.domain.0, self.domain.1));
        out
    }

    pub fn components(&self) -> &[Expr; 5] {
        &self.components
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The same curve restricted to a sub-interval of its domain.
    pub fn restricted(&self, lo: f64, hi: f64) -> Result<Self> {
        let (a, b) = self.domain;
        if !(a <= lo && lo < hi && hi <= b) {
            return Err(Error::InvalidArgument(format!(
                "({lo}, {hi}) is not a sub-interval of ({a}, {b})"
            )));
        }
        NullCurve::new(self.components.clone(), (lo, hi), self.label.clone())
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        let (min, max) = self.domain;
        if t > min && t < max {
            Ok(())
        } else {
            Err(Error::OutsideDomain { t, min, max })
        }
    }

    /// `α(t)` by plain evaluation.
    pub fn eval(&self, t: f64) -> Result<[f64; 5]> {
        self.check_domain(t)?;
        let mut out = [0.0; 5];
        for (k, c) in self.components.iter().enumerate() {
            out[k] = c.eval(t).map_err(|e| component_err(k, t, e))?;
        }
        Ok(out)
    }

    /// Per-component Taylor expansions at `t0`.
    pub fn jet(&self, t0: f64, order: usize) -> Result<[Jet1; 5]> {
        self.check_domain(t0)?;
        let mut out = Vec::with_capacity(5);
        for (k, c) in self.components.iter().enumerate() {
            out.push(c.jet(t0, order).map_err(|e| component_err(k, t0, e))?);
        }
        Ok(out.try_into().unwrap())
    }

    /// Derivatives `α, α', ..., α^(order)` at `t0` as plain vectors.
    pub fn derivatives(&self, t0: f64, order: usize) -> Result<Vec<[f64; 5]>> {
        let jets = self.jet(t0, order)?;
        (0..=order)
            .map(|k| {
                let mut v = [0.0; 5];
                for (vi, j) in v.iter_mut().zip(&jets) {
                    *vi = j.derivative(k)?;
                }
                Ok(v)
            })
            .collect()
    }

    pub fn component(&self, k: usize) -> CurveComponent<'_> {
        assert!(k < 5);
        CurveComponent { curve: self, k }
    }
}

impl fmt::Display for NullCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_spec())
    }
}

fn component_err(k: usize, t: f64, e: Error) -> Error {
    Error::CurveEval {
        component: k + 1,
        t,
        source: Box::new(e),
    }
}

fn key_offset(line: &str) -> usize {
    line.find(':')
        .map(|i| line[..i].chars().count() + 1)
        .unwrap_or(0)
}

/// Turns an expression parse error into a spec-file error with the column
/// inside the whole line.
fn relocate(e: Error, line: usize, offset: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::CurveSpec {
            line,
            message: format!("column {}: {}", offset + position, message),
        },
        other => Error::CurveSpec {
            line,
            message: other.to_string(),
        },
    }
}

/// One coordinate of a curve, for the finite-difference oracle.
pub struct CurveComponent<'a> {
    curve: &'a NullCurve,
    k: usize,
}

impl JetFunction for CurveComponent<'_> {
    fn value(&self, t: f64) -> Result<f64> {
        self.curve.check_domain(t)?;
        self.curve.components[self.k].eval(t)
    }

    fn jet(&self, t0: f64, order: usize) -> Result<Jet1> {
        self.curve.check_domain(t0)?;
        self.curve.components[self.k].jet(t0, order)
    }
}

/// Maximum residual of one identity over the validation grid. Each inner
/// product `<u, v>` is compared after dividing by `max(1, |u| |v|)` (Euclidean
/// norms), so samples near a pole are judged relative to their magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: &'static str,
    pub max: f64,
    pub worst_t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub label: String,
    pub samples: usize,
    pub interval: (f64, f64),
    pub tolerance: f64,
    /// `|<α,α>|`, `|<α',α'>|`, `|<α'',α''> - 4/9|`.
    pub constraints: [Residual; 3],
    /// Consequences of differentiating the constraints.
    pub identities: Vec<Residual>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn max_constraint(&self) -> f64 {
        self.constraints.iter().map(|r| r.max).fold(0.0, f64::max)
    }

    pub fn max_identity(&self) -> f64 {
        self.identities.iter().map(|r| r.max).fold(0.0, f64::max)
    }

    pub fn failing(&self) -> Vec<&Residual> {
        self.constraints
            .iter()
            .filter(|r| !(r.max < self.tolerance))
            .collect()
    }
}

/// Uniform grid of `n` points over the domain minus `margin` of its length at
/// each end.
pub fn interior_grid(domain: (f64, f64), n: usize, margin: f64) -> Vec<f64> {
    let (a, b) = domain;
    let w = b - a;
    let (lo, hi) = (a + margin * w, b - margin * w);
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Checks `<α,α> = <α',α'> = 0` and `<α'',α''> = 4/9` on a uniform interior
/// grid, and reports the derived identities
/// `<α,α'> = <α,α''> = <α',α''> = <α,α'''> = 0` and
/// `<α'',α''> = -<α',α'''> = <α,α''''>`.
pub fn validate_theorem_curve(
    curve: &NullCurve,
    samples: usize,
    tol: f64,
) -> Result<ValidationReport> {
    validate_with_margin(curve, samples, tol, DEFAULT_MARGIN)
}

pub fn validate_with_margin(
    curve: &NullCurve,
    samples: usize,
    tol: f64,
    margin: f64,
) -> Result<ValidationReport> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "validation needs at least 2 samples, got {samples}"
        )));
    }
    let sig = Signature::E52;
    let names = [
        "light_cone",
        "null_tangent",
        "acceleration_norm",
        "a.a1",
        "a.a2",
        "a1.a2",
        "a.a3",
        "a2.a2+a1.a3",
        "a2.a2-a.a4",
    ];
    let mut res: Vec<Residual> = names
        .iter()
        .map(|&name| Residual {
            name,
            max: 0.0,
            worst_t: f64::NAN,
        })
        .collect();
    let grid = interior_grid(curve.domain, samples, margin);
    for &t in &grid {
        let d = curve.derivatives(t, 4)?;
        let ip = |i: usize, j: usize| sig.inner(&d[i], &d[j]);
        let norm: Vec<f64> = d
            .iter()
            .map(|v| v.iter().map(|c| c * c).sum::<f64>().sqrt())
            .collect();
        let scale = |i: usize, j: usize| (norm[i] * norm[j]).max(1.0);
        let values = [
            ip(0, 0) / scale(0, 0),
            ip(1, 1) / scale(1, 1),
            (ip(2, 2) - ACCEL_NORM) / scale(2, 2),
            ip(0, 1) / scale(0, 1),
            ip(0, 2) / scale(0, 2),
            ip(1, 2) / scale(1, 2),
            ip(0, 3) / scale(0, 3),
            (ip(2, 2) + ip(1, 3)) / scale(2, 2).max(scale(1, 3)),
            (ip(2, 2) - ip(0, 4)) / scale(2, 2).max(scale(0, 4)),
        ];
        for (r, v) in res.iter_mut().zip(values) {
            let v = v.abs();
            if !v.is_finite() {
                return Err(Error::NonFinite { s: f64::NAN, t });
            }
            if v > r.max || r.worst_t.is_nan() {
                r.max = v;
                r.worst_t = t;
            }
        }
    }
    let identities = res.split_off(3);
    let constraints: [Residual; 3] = res.try_into().unwrap();
    let passed = constraints.iter().all(|r| r.max < tol);
    Ok(ValidationReport {
        label: curve.label.clone(),
        samples,
        interval: (grid[0], grid[grid.len() - 1]),
        tolerance: tol,
        constraints,
        identities,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveInvariants {
    pub eta: f64,
    pub eta_prime: f64,
    pub xi: f64,
}

/// `η = <α''',α'''>`, `η' = 2<α'''',α'''>`, `ξ = <α'''',α''''>` at `t0`.
pub fn curve_invariants(curve: &NullCurve, t0: f64) -> Result<CurveInvariants> {
    let d = curve.derivatives(t0, 4)?;
    let sig = Signature::E52;
    Ok(CurveInvariants {
        eta: sig.inner(&d[3], &d[3]),
        eta_prime: 2.0 * sig.inner(&d[4], &d[3]),
        xi: sig.inner(&d[4], &d[4]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn builtins_round_trip_through_the_printer() {
        for name in BUILTIN_CURVES {
            let c = NullCurve::builtin(name).unwrap();
            let back = NullCurve::from_spec(&c.to_spec()).unwrap();
            assert_eq!(back, c);
        }
        assert!(matches!(
            NullCurve::builtin("nope"),
            Err(Error::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn veronese_generator_values() {
        let c = NullCurve::builtin("veronese-generator").unwrap();
        let k = 1.0 / (3.0 * 3f64.sqrt());
        let d = c.derivatives(0.0, 2).unwrap();
        let want0 = [2.0 * k, 0.0, k, 0.0, 3f64.sqrt() * k];
        let want2 = [-2.0 * k, 0.0, -4.0 * k, 0.0, 0.0];
        for i in 0..5 {
            assert_abs_diff_eq!(d[0][i], want0[i], epsilon = 1e-15);
            assert_abs_diff_eq!(d[2][i], want2[i], epsilon = 1e-15);
        }
        assert_abs_diff_eq!(d[2][2], -4.0 / (3.0 * 3f64.sqrt()), epsilon = 1e-15);
    }

    #[test]
    fn alpha0_rejects_domain_end() {
        let c = NullCurve::builtin("alpha0").unwrap();
        assert!(matches!(
            c.jet(std::f64::consts::FRAC_PI_2, 3),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(c.eval(0.0).is_err());
    }

    #[test]
    fn eval_errors_name_the_component() {
        let c =
            NullCurve::from_spec("c1: ln(t)\nc2: 0\nc3: 0\nc4: 0\nc5: 0\ndomain: -1 1\n").unwrap();
        match c.jet(-0.5, 2) {
            Err(Error::CurveEval {
                component: 1, t, ..
            }) => assert_eq!(t, -0.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spec_file_errors() {
        let missing = "c1: t\nc2: t\nc3: t\nc4: t\ndomain: 0 1\n";
        assert!(matches!(
            NullCurve::from_spec(missing),
            Err(Error::CurveSpec { .. })
        ));
        let bad = "c1: cos(t\nc2: 0\nc3: 0\nc4: 0\nc5: 0\ndomain: 0 1\n";
        match NullCurve::from_spec(bad) {
            Err(Error::CurveSpec { line: 1, message }) => {
                assert!(message.contains("column 10"), "{message}")
            }
            other => panic!("{other:?}"),
        }
        let bad_domain = "c1: t\nc2: t\nc3: t\nc4: t\nc5: t\ndomain: 1 t\n";
        assert!(NullCurve::from_spec(bad_domain).is_err());
        let reversed = "c1: t\nc2: t\nc3: t\nc4: t\nc5: t\ndomain: 1 0 # reversed\n";
        assert!(NullCurve::from_spec(reversed).is_err());
    }

    #[test]
    fn validates_veronese_generator() {
        let c = NullCurve::builtin("veronese-generator").unwrap();
        let r = validate_theorem_curve(&c, 101, 1e-10).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.constraints[2].max < 1e-15);
        assert!(r.max_identity() < 1e-9);
    }

    #[test]
    fn validates_alpha0_on_inner_interval() {
        let c = NullCurve::builtin("alpha0").unwrap();
        let inner = c
            .restricted(0.1, std::f64::consts::FRAC_PI_2 - 0.1)
            .unwrap();
        let r = validate_theorem_curve(&inner, 101, 1e-8).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.max_identity() < 1e-7);
    }

    #[test]
    fn non_null_curve_fails() {
        let c = NullCurve::from_spec("c1: t\nc2: 0\nc3: 0\nc4: 0\nc5: 0\ndomain: -1 1\n").unwrap();
        let r = validate_theorem_curve(&c, 11, 1e-9).unwrap();
        assert!(!r.passed);
        assert_abs_diff_eq!(r.constraints[1].max, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn invariants_of_veronese_generator() {
        let c = NullCurve::builtin("veronese-generator").unwrap();
        for t in [-2.0, 0.0, 0.3, 1.7] {
            let inv = curve_invariants(&c, t).unwrap();
            assert_abs_diff_eq!(inv.eta, 20.0 / 9.0, epsilon = 1e-14);
            assert_abs_diff_eq!(inv.eta_prime, 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(inv.xi, 28.0 / 3.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn eta_prime_is_the_derivative_of_eta() {
        let c = NullCurve::builtin("alpha0").unwrap();
        let t0 = 0.7;
        let jets = c.jet(t0, 5).unwrap();
        let third: Vec<Jet1> = jets
            .iter()
            .map(|j| {
                j.differentiate()
                    .unwrap()
                    .differentiate()
                    .unwrap()
                    .differentiate()
                    .unwrap()
            })
            .collect();
        let eta = Signature::E52.inner(&third, &third);
        let inv = curve_invariants(&c, t0).unwrap();
        assert!(
            (eta.derivative(1).unwrap() - inv.eta_prime).abs()
                < 1e-10 * inv.eta_prime.abs().max(1.0)
        );
    }
}
