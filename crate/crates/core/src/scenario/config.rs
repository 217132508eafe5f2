//! Scenario files: TOML with `coefficients`, `grid`, `initial`, `evolve`
//! and `output` sections.
//!
//! Loading never stops at the first problem. Every missing key, type
//! mismatch, unparsable expression and semantic violation is collected
//! and returned together.

use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;
use toml::{Table, Value};

use crate::assembly::Variant;
use crate::coefficients::{Coeff, CoefficientSet};
use crate::evolve::{EvolveParams, DEFAULT_LEAK_THRESHOLD, MAX_3D_POINTS};
use crate::expr::{parse_expr, Expr, ExprError};
use crate::grid::{GaussianState, GridSpec1D};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSection {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub f: String,
    pub g: String,
    pub hbar: f64,
}

impl CoefficientSection {
    fn source(&self, coeff: Coeff) -> &str {
        match coeff {
            Coeff::A => &self.a,
            Coeff::B => &self.b,
            Coeff::C => &self.c,
            Coeff::D => &self.d,
            Coeff::F => &self.f,
            Coeff::G => &self.g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialState {
    /// `exp(A x² + B x + C)`, each parameter as `[re, im]`.
    Gaussian { a: [f64; 2], b: [f64; 2], c: [f64; 2] },
    /// Normalized packet at `x0` with momentum `p0` and spread `sigma`.
    Packet { x0: f64, p0: f64, sigma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolveSection {
    pub dt: f64,
    pub t_start: f64,
    pub t_final: f64,
    pub snapshot_every: usize,
    pub leak_threshold: f64,
    pub write_snapshots: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    pub emit_plotscript: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub label: String,
    pub variant: Variant,
    pub dimension: u8,
    pub seed: u64,
    pub coefficients: CoefficientSection,
    pub grid: GridSpec1D,
    pub initial: InitialState,
    pub evolve: EvolveSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    /// Dotted key path, e.g. `grid.n`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed scenario file: {0}")]
    Syntax(String),
    #[error("{} problem(s) in scenario:\n  {}", .0.len(), join(.0))]
    Invalid(Vec<ConfigIssue>),
}

fn join(v: &[ConfigIssue]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("\n  ")
}

impl ConfigError {
    pub fn issues(&self) -> &[ConfigIssue] {
        match self {
            ConfigError::Invalid(v) => v,
            _ => &[],
        }
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::String(_) => "string",
        Value::Integer(_) => "integer",
        Value::Float(_) => "float",
        Value::Boolean(_) => "boolean",
        Value::Datetime(_) => "datetime",
        Value::Array(_) => "array",
        Value::Table(_) => "table",
    }
}

/// Collects issues while reading typed values out of TOML tables.
#[derive(Default)]
struct Reader {
    issues: Vec<ConfigIssue>,
}

impl Reader {
    fn issue(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.issues.push(ConfigIssue {
            path: path.into(),
            message: message.into(),
        });
    }

    fn path(section: &str, key: &str) -> String {
        if section.is_empty() {
            key.to_string()
        } else {
            format!("{section}.{key}")
        }
    }

    fn unknown_keys(&mut self, table: &Table, section: &str, known: &[&str]) {
        for key in table.keys() {
            if !known.contains(&key.as_str()) {
                self.issue(
                    Self::path(section, key),
                    format!("unknown key (expected one of: {})", known.join(", ")),
                );
            }
        }
    }

    fn section<'t>(&mut self, root: &'t Table, name: &str, required: bool) -> Option<&'t Table> {
        match root.get(name) {
            Some(Value::Table(t)) => Some(t),
            Some(other) => {
                self.issue(name, format!("expected a table, found {}", type_name(other)));
                None
            }
            None => {
                if required {
                    self.issue(name, "missing section");
                }
                None
            }
        }
    }

    fn get<'t>(&mut self, t: Option<&'t Table>, section: &str, key: &str, required: bool) -> Option<&'t Value> {
        let v = t.and_then(|t| t.get(key));
        if v.is_none() && required && t.is_some() {
            self.issue(Self::path(section, key), "missing key");
        }
        v
    }

    fn float(&mut self, t: Option<&Table>, section: &str, key: &str, default: Option<f64>) -> f64 {
        match self.get(t, section, key, default.is_none()) {
            Some(Value::Float(x)) => *x,
            Some(Value::Integer(i)) => *i as f64,
            Some(other) => {
                self.issue(Self::path(section, key), format!("expected a number, found {}", type_name(other)));
                f64::NAN
            }
            None => default.unwrap_or(f64::NAN),
        }
    }

    fn uint(&mut self, t: Option<&Table>, section: &str, key: &str, default: Option<u64>) -> u64 {
        match self.get(t, section, key, default.is_none()) {
            Some(Value::Integer(i)) if *i >= 0 => *i as u64,
            Some(Value::Integer(i)) => {
                self.issue(Self::path(section, key), format!("must be non-negative, got {i}"));
                0
            }
            Some(other) => {
                self.issue(
                    Self::path(section, key),
                    format!("expected an integer, found {}", type_name(other)),
                );
                0
            }
            None => default.unwrap_or(0),
        }
    }

    fn boolean(&mut self, t: Option<&Table>, section: &str, key: &str, default: bool) -> bool {
        match self.get(t, section, key, false) {
            Some(Value::Boolean(b)) => *b,
            Some(other) => {
                self.issue(Self::path(section, key), format!("expected a boolean, found {}", type_name(other)));
                default
            }
            None => default,
        }
    }

    fn string(&mut self, t: Option<&Table>, section: &str, key: &str, default: Option<&str>) -> Option<String> {
        match self.get(t, section, key, default.is_none()) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(other) => {
                self.issue(Self::path(section, key), format!("expected a string, found {}", type_name(other)));
                None
            }
            None => default.map(str::to_string),
        }
    }

    fn complex(&mut self, t: Option<&Table>, section: &str, key: &str) -> [f64; 2] {
        let path = Self::path(section, key);
        match self.get(t, section, key, true) {
            Some(Value::Array(items)) if items.len() == 2 => {
                let mut out = [f64::NAN; 2];
                for (slot, item) in out.iter_mut().zip(items) {
                    match item {
                        Value::Float(x) => *slot = *x,
                        Value::Integer(i) => *slot = *i as f64,
                        other => self.issue(
                            path.clone(),
                            format!("expected [re, im] numbers, found {}", type_name(other)),
                        ),
                    }
                }
                out
            }
            Some(other) => {
                self.issue(path, format!("expected [re, im], found {}", type_name(other)));
                [f64::NAN; 2]
            }
            None => [f64::NAN; 2],
        }
    }
}

const ROOT_KEYS: &[&str] = &[
    "label", "variant", "dimension", "seed", "coefficients", "grid", "initial", "evolve", "output",
];
const COEFF_KEYS: &[&str] = &["a", "b", "c", "d", "f", "g", "hbar"];
const GRID_KEYS: &[&str] = &["x_min", "x_max", "n"];
const GAUSSIAN_KEYS: &[&str] = &["kind", "a", "b", "c"];
const PACKET_KEYS: &[&str] = &["kind", "x0", "p0", "sigma"];
const EVOLVE_KEYS: &[&str] = &[
    "dt", "t_start", "t_final", "snapshot_every", "leak_threshold", "write_snapshots",
];
const OUTPUT_KEYS: &[&str] = &["dir", "emit_plotscript"];

impl ScenarioConfig {
    /// Validates an already parsed TOML table.
    pub fn from_table(root: &Table) -> Result<Self, ConfigError> {
        let mut r = Reader::default();
        r.unknown_keys(root, "", ROOT_KEYS);

        let label = r.string(Some(root), "", "label", Some("scenario")).unwrap_or_default();
        if label.is_empty() || label.contains(['/', '\\']) {
            r.issue("label", "must be a non-empty name without path separators");
        }
        let variant = match r.string(Some(root), "", "variant", Some("rederived")) {
            Some(s) => s.parse::<Variant>().unwrap_or_else(|e| {
                r.issue("variant", e.to_string());
                Variant::default()
            }),
            None => Variant::default(),
        };
        let dimension = match r.uint(Some(root), "", "dimension", Some(1)) {
            d @ (1 | 3) => d as u8,
            other => {
                r.issue("dimension", format!("must be 1 or 3, got {other}"));
                1
            }
        };
        let seed = r.uint(Some(root), "", "seed", Some(0));

        // coefficients
        let ct = r.section(root, "coefficients", true);
        if let Some(t) = ct {
            r.unknown_keys(t, "coefficients", COEFF_KEYS);
        }
        let mut sources = Vec::with_capacity(6);
        for coeff in Coeff::ALL {
            let default = if coeff == Coeff::A { None } else { Some("0") };
            sources.push(r.string(ct, "coefficients", coeff.name(), default).unwrap_or_default());
        }
        let hbar = r.float(ct, "coefficients", "hbar", Some(1.0));
        if !(hbar > 0.0 && hbar.is_finite()) {
            r.issue("coefficients.hbar", format!("must be positive, got {hbar}"));
        }
        let coefficients = CoefficientSection {
            a: sources[0].clone(),
            b: sources[1].clone(),
            c: sources[2].clone(),
            d: sources[3].clone(),
            f: sources[4].clone(),
            g: sources[5].clone(),
            hbar,
        };
        let mut exprs: Vec<Option<Expr>> = Vec::with_capacity(6);
        for coeff in Coeff::ALL {
            let src = coefficients.source(coeff);
            let parsed = if ct.is_none() || (coeff == Coeff::A && src.is_empty()) {
                None
            } else {
                match parse_expr(src) {
                    Ok(e) => Some(e),
                    Err(e) => {
                        r.issue(format!("coefficients.{}", coeff.name()), expr_message(src, &e));
                        None
                    }
                }
            };
            exprs.push(parsed);
        }

        // grid
        let gt = r.section(root, "grid", true);
        if let Some(t) = gt {
            r.unknown_keys(t, "grid", GRID_KEYS);
        }
        let x_min = r.float(gt, "grid", "x_min", None);
        let x_max = r.float(gt, "grid", "x_max", None);
        let n = r.uint(gt, "grid", "n", None) as usize;
        let grid = if gt.is_some() {
            match GridSpec1D::new(x_min, x_max, n) {
                Ok(g) => Some(g),
                Err(e) => {
                    if x_min.is_finite() && x_max.is_finite() && n > 0 {
                        r.issue("grid", e.to_string());
                    }
                    None
                }
            }
        } else {
            None
        };
        if dimension == 3 && n > MAX_3D_POINTS {
            r.issue("grid.n", format!("3D runs allow at most {MAX_3D_POINTS} points per axis, got {n}"));
        }

        // initial
        let it = r.section(root, "initial", true);
        let kind = r.string(it, "initial", "kind", Some("packet"));
        let initial = match kind.as_deref() {
            Some("gaussian") => {
                if let Some(t) = it {
                    r.unknown_keys(t, "initial", GAUSSIAN_KEYS);
                }
                InitialState::Gaussian {
                    a: r.complex(it, "initial", "a"),
                    b: r.complex(it, "initial", "b"),
                    c: r.complex(it, "initial", "c"),
                }
            }
            Some("packet") => {
                if let Some(t) = it {
                    r.unknown_keys(t, "initial", PACKET_KEYS);
                }
                InitialState::Packet {
                    x0: r.float(it, "initial", "x0", Some(0.0)),
                    p0: r.float(it, "initial", "p0", Some(0.0)),
                    sigma: r.float(it, "initial", "sigma", None),
                }
            }
            Some(other) => {
                r.issue("initial.kind", format!("unknown kind `{other}`; expected gaussian or packet"));
                InitialState::Packet { x0: 0.0, p0: 0.0, sigma: f64::NAN }
            }
            None => InitialState::Packet { x0: 0.0, p0: 0.0, sigma: f64::NAN },
        };

        // evolve
        let et = r.section(root, "evolve", true);
        if let Some(t) = et {
            r.unknown_keys(t, "evolve", EVOLVE_KEYS);
        }
        let evolve = EvolveSection {
            dt: r.float(et, "evolve", "dt", None),
            t_start: r.float(et, "evolve", "t_start", Some(0.0)),
            t_final: r.float(et, "evolve", "t_final", None),
            snapshot_every: r.uint(et, "evolve", "snapshot_every", Some(1)) as usize,
            leak_threshold: r.float(et, "evolve", "leak_threshold", Some(DEFAULT_LEAK_THRESHOLD)),
            write_snapshots: r.boolean(et, "evolve", "write_snapshots", false),
        };
        if et.is_some() {
            if !(evolve.dt > 0.0) && !evolve.dt.is_nan() {
                r.issue("evolve.dt", format!("must be positive, got {}", evolve.dt));
            }
            if evolve.t_final < evolve.t_start {
                r.issue(
                    "evolve.t_final",
                    format!("must not precede t_start ({} < {})", evolve.t_final, evolve.t_start),
                );
            }
            if evolve.snapshot_every == 0 {
                r.issue("evolve.snapshot_every", "must be at least 1");
            }
            if !(evolve.leak_threshold > 0.0) {
                r.issue("evolve.leak_threshold", "must be positive");
            }
            if evolve.write_snapshots && dimension == 3 {
                r.issue("evolve.write_snapshots", "wavefunction snapshots are only written for 1D runs");
            }
        }

        // output
        let ot = r.section(root, "output", false);
        if let Some(t) = ot {
            r.unknown_keys(t, "output", OUTPUT_KEYS);
        }
        let output = OutputSection {
            dir: if ot.is_some_and(|t| t.contains_key("dir")) {
                r.string(ot, "output", "dir", None)
            } else {
                None
            },
            emit_plotscript: r.boolean(ot, "output", "emit_plotscript", false),
        };

        // semantic checks that need several sections
        // unparsable coefficients get a harmless stand-in so the rest are
        // still checked; their own issue is already recorded
        let parsed: Vec<bool> = exprs.iter().map(Option::is_some).collect();
        if hbar > 0.0 {
            let e: Vec<Expr> = exprs
                .into_iter()
                .map(|x| x.unwrap_or_else(|| Expr::constant(1.0)))
                .collect();
            let set = CoefficientSet {
                a: e[0].clone(),
                b: e[1].clone(),
                c: e[2].clone(),
                d: e[3].clone(),
                f: e[4].clone(),
                g: e[5].clone(),
                hbar,
                label: label.clone(),
            };
            let ok = |c: Coeff| parsed[Coeff::ALL.iter().position(|&k| k == c).unwrap()];
            if dimension == 3 {
                for coeff in [Coeff::D, Coeff::F] {
                    if ok(coeff) && !set.get(coeff).is_literal_zero() {
                        r.issue(
                            format!("coefficients.{}", coeff.name()),
                            "must be 0 for dimension = 3 (the isotropic Lagrangian has no such term)",
                        );
                    }
                }
            }
            if evolve.t_start.is_finite() && evolve.t_final >= evolve.t_start {
                for v in set.validate(evolve.t_start, evolve.t_final).into_iter().filter(|v| ok(v.coeff)) {
                    r.issue(format!("coefficients.{}", v.coeff.name()), v.to_string());
                }
            }
            if let (Some(grid), true) = (grid, parsed.iter().all(|&p| p)) {
                match initial_gaussian(&initial, hbar) {
                    Ok(g) => {
                        if let Err(e) = g.sample(&grid, evolve.t_start) {
                            r.issue("initial", e.to_string());
                        }
                    }
                    Err(msg) => r.issue("initial", msg),
                }
            }
        }

        if !r.issues.is_empty() {
            return Err(ConfigError::Invalid(r.issues));
        }
        Ok(ScenarioConfig {
            label,
            variant,
            dimension,
            seed,
            coefficients,
            grid: grid.expect("grid validated"),
            initial,
            evolve,
            output,
        })
    }

    /// Re-loads a config echoed as JSON (e.g. from `report.json`).
    pub fn from_json(value: &serde_json::Value) -> Result<Self, ConfigError> {
        let table: Table =
            serde_json::from_value(value.clone()).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        Self::from_table(&table)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes to TOML")
    }

    pub fn coefficient_set(&self) -> CoefficientSet {
        let p = |s: &str| parse_expr(s).expect("expressions validated at load time");
        let c = &self.coefficients;
        CoefficientSet {
            a: p(&c.a),
            b: p(&c.b),
            c: p(&c.c),
            d: p(&c.d),
            f: p(&c.f),
            g: p(&c.g),
            hbar: c.hbar,
            label: self.label.clone(),
        }
    }

    pub fn initial_gaussian(&self) -> GaussianState {
        initial_gaussian(&self.initial, self.coefficients.hbar).expect("initial state validated at load time")
    }

    pub fn evolve_params(&self) -> EvolveParams {
        let e = &self.evolve;
        let mut p = EvolveParams::new(e.dt, e.t_final, self.variant)
            .with_snapshot_every(e.snapshot_every)
            .with_leak_threshold(e.leak_threshold);
        if e.write_snapshots {
            p = p.keeping_snapshots();
        }
        p
    }
}

fn initial_gaussian(init: &InitialState, hbar: f64) -> Result<GaussianState, String> {
    let c = |p: [f64; 2]| num_complex::Complex64::new(p[0], p[1]);
    match *init {
        InitialState::Gaussian { a, b, c: cc } => {
            GaussianState::new(c(a), c(b), c(cc)).map_err(|e| e.to_string())
        }
        InitialState::Packet { x0, p0, sigma } => {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(format!("sigma must be positive, got {sigma}"));
            }
            GaussianState::packet(x0, p0, sigma, hbar).map_err(|e| e.to_string())
        }
    }
}

fn expr_message(src: &str, e: &ExprError) -> String {
    format!("cannot parse `{src}`: {e}")
}

pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let table: Table = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    ScenarioConfig::from_table(&table)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_scenario(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FREE: &str = r#"
[coefficients]
a = "0.5"

[grid]
x_min = -20.0
x_max = 20.0
n = 512

[initial]
sigma = 1.0

[evolve]
dt = 0.01
t_final = 1.0
"#;

    #[test]
    fn minimal_file_fills_defaults() {
        let cfg = parse_scenario(FREE).unwrap();
        assert_eq!(cfg.variant, Variant::Rederived);
        assert_eq!(cfg.dimension, 1);
        assert_eq!(cfg.coefficients.g, "0");
        assert_eq!(cfg.coefficients.hbar, 1.0);
        assert_eq!(cfg.evolve.snapshot_every, 1);
        assert_eq!(cfg.evolve.leak_threshold, DEFAULT_LEAK_THRESHOLD);
        assert_eq!(cfg.initial, InitialState::Packet { x0: 0.0, p0: 0.0, sigma: 1.0 });
    }

    #[test]
    fn vanishing_kinetic_coefficient_reports_range() {
        let text = FREE.replace("a = \"0.5\"", "a = \"t - 0.5\"");
        let err = parse_scenario(&text).unwrap_err();
        let issues = err.issues();
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].path, "coefficients.a");
        assert!(issues[0].message.contains("[0, 0.5]"), "{}", issues[0].message);
    }

    #[test]
    fn bogus_variant_names_both_options() {
        let text = format!("variant = \"bogus\"\n{FREE}");
        let err = parse_scenario(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("paper_literal") && msg.contains("rederived"), "{msg}");
    }

    #[test]
    fn all_problems_are_reported_together() {
        let text = r#"
dimension = 2
colour = "red"
[coefficients]
a = "0.5 +"
b = 3
[grid]
x_min = "left"
x_max = 1.0
[initial]
kind = "packet"
sigma = 1.0
[evolve]
dt = -1.0
t_final = 1.0
"#;
        let err = parse_scenario(text).unwrap_err();
        let paths: Vec<&str> = err.issues().iter().map(|i| i.path.as_str()).collect();
        for p in [
            "colour",
            "dimension",
            "coefficients.b",
            "coefficients.a",
            "grid.x_min",
            "grid.n",
            "evolve.dt",
        ] {
            assert!(paths.contains(&p), "{p} missing from {paths:?}");
        }
        let a = err.issues().iter().find(|i| i.path == "coefficients.a").unwrap();
        assert!(a.message.contains("byte 5"), "{}", a.message);
    }

    #[test]
    fn three_d_forbids_linear_terms() {
        let text = format!("dimension = 3\n{}", FREE.replace("n = 512", "n = 64"))
            .replace("a = \"0.5\"", "a = \"0.5\"\nf = \"1\"");
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.issues()[0].path, "coefficients.f");
    }

    #[test]
    fn narrow_domain_is_rejected() {
        let text = FREE.replace("x_min = -20.0", "x_min = -3.0");
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.issues()[0].path, "initial");
    }

    #[test]
    fn echo_round_trips_through_json_and_toml() {
        let cfg = parse_scenario(FREE).unwrap();
        let json = serde_json::to_value(&cfg).unwrap();
        assert_eq!(ScenarioConfig::from_json(&json).unwrap(), cfg);
        assert_eq!(parse_scenario(&cfg.to_toml()).unwrap(), cfg);
    }
}
