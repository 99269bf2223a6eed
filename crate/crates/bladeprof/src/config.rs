//! Flat `key = value` run specifications.
//!
//! One setting per line, `#` starts a comment, blank lines are ignored.
//! Every key is validated against the problem it is used with, and every
//! diagnostic carries the line it refers to when there is one.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use bladeprof_core::{
    BladeProfile, Direction, FrameSpec, IntegratorConfig, Interval, InverseMethod, Method, SpeedLaw,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
    pub detail: Option<String>,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line: Some(line), message: message.into(), detail: None }
    }

    fn missing(key: &str) -> Self {
        Self { line: None, message: format!("missing required key: {key}"), detail: None }
    }

    fn with(mut self, detail: impl fmt::Display) -> Self {
        self.detail = Some(detail.to_string());
        self
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(detail) = &self.detail {
            write!(f, ": {detail}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Forward,
    Inverse,
    Geometry,
    Render,
    Check,
}

impl Problem {
    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Forward => "forward",
            Problem::Inverse => "inverse",
            Problem::Geometry => "geometry",
            Problem::Render => "render",
            Problem::Check => "check",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "forward" => Problem::Forward,
            "inverse" => Problem::Inverse,
            "geometry" => Problem::Geometry,
            "render" => Problem::Render,
            "check" => Problem::Check,
            _ => return None,
        })
    }

    /// Key groups a problem accepts.
    fn accepts(self, key: &str) -> bool {
        let group = key.split('.').next().unwrap_or("");
        match (self, group) {
            (_, "problem") => true,
            (Problem::Check, _) => false,
            (_, "output") => true,
            (Problem::Forward, "profile" | "frame") => true,
            (Problem::Forward, "solver") => !matches!(key, "solver.y_end"),
            (Problem::Inverse, "law" | "frame") => true,
            (Problem::Inverse, "solver") => matches!(key, "solver.method" | "solver.y_end"),
            (Problem::Geometry, "profile" | "frame") => true,
            (Problem::Render, "profile" | "law" | "frame" | "render") => true,
            (Problem::Render, "solver") => matches!(key, "solver.method" | "solver.y_end"),
            _ => false,
        }
    }
}

pub const KEYS: &[&str] = &[
    "problem",
    "profile.kind",
    "profile.coeffs",
    "profile.samples",
    "profile.domain",
    "law.kind",
    "law.params",
    "law.domain",
    "frame.b",
    "frame.m0",
    "frame.sigma",
    "solver.method",
    "solver.dt",
    "solver.rel_tol",
    "solver.abs_tol",
    "solver.t_end",
    "solver.w0",
    "solver.y_end",
    "solver.max_steps",
    "render.blades",
    "output.path",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub integrator: IntegratorConfig,
    pub inverse_method: InverseMethod,
    pub w0: Option<f64>,
    /// Lower blade end for inverse solves; defaults to `b / 2`.
    pub y_end: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub problem: Problem,
    pub profile: Option<BladeProfile>,
    pub law: Option<SpeedLaw>,
    pub frame: Option<FrameSpec>,
    pub solver: SolverSettings,
    pub blades: usize,
    pub output: Option<PathBuf>,
}

impl RunSpec {
    /// `y_end` with its default applied.
    pub fn y_end(&self) -> Option<f64> {
        self.solver.y_end.or_else(|| self.frame.map(|f| 0.5 * f.b()))
    }
}

struct Entry<'a> {
    value: &'a str,
    line: usize,
}

struct Entries<'a>(BTreeMap<&'a str, Entry<'a>>);

impl<'a> Entries<'a> {
    fn get(&self, key: &str) -> Option<&Entry<'a>> {
        self.0.get(key)
    }

    fn require(&self, key: &str) -> Result<&Entry<'a>, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::missing(key))
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key).map(|e| parse_number(key, e)).transpose()
    }
}

fn malformed(key: &str, e: &Entry<'_>) -> ConfigError {
    ConfigError::at(e.line, format!("malformed value for `{key}`")).with(format!("`{}`", e.value))
}

fn invalid(key: &str, e: &Entry<'_>, err: bladeprof_core::Error) -> ConfigError {
    ConfigError::at(e.line, format!("invalid value for `{key}`")).with(err)
}

fn parse_number(key: &str, e: &Entry<'_>) -> Result<f64, ConfigError> {
    match e.value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(malformed(key, e)),
    }
}

fn parse_list(key: &str, e: &Entry<'_>) -> Result<Vec<f64>, ConfigError> {
    if e.value.is_empty() {
        return Ok(Vec::new());
    }
    e.value
        .split(',')
        .map(|s| match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(malformed(key, e)),
        })
        .collect()
}

fn parse_pairs(key: &str, e: &Entry<'_>, separator: char) -> Result<Vec<(f64, f64)>, ConfigError> {
    e.value
        .split(separator)
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (a, b) = pair.split_once(':').ok_or_else(|| malformed(key, e))?;
            match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
                (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => Ok((a, b)),
                _ => Err(malformed(key, e)),
            }
        })
        .collect()
}

fn parse_domain(key: &str, e: &Entry<'_>) -> Result<Interval, ConfigError> {
    match parse_list(key, e)?.as_slice() {
        &[lo, hi] => Interval::new(lo, hi).map_err(|err| invalid(key, e, err)),
        _ => Err(malformed(key, e)),
    }
}

fn parse_count(key: &str, e: &Entry<'_>) -> Result<usize, ConfigError> {
    if let Ok(n) = e.value.parse::<usize>() {
        return Ok(n);
    }
    match e.value.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= 1e15 => Ok(v as usize),
        _ => Err(malformed(key, e)),
    }
}

/// Parses and validates a run specification.
pub fn parse_run_spec(text: &str) -> Result<RunSpec, ConfigError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(ConfigError::at(line, "unknown key").with(format!("`{key}`")));
        }
        if map.insert(key, Entry { value, line }).is_some() {
            return Err(ConfigError::at(line, "duplicate key").with(format!("`{key}`")));
        }
    }
    let entries = Entries(map);

    let p = entries.require("problem")?;
    let problem = Problem::parse(p.value)
        .ok_or_else(|| ConfigError::at(p.line, "unknown problem").with(format!("`{}`", p.value)))?;
    for (key, e) in &entries.0 {
        if !problem.accepts(key) {
            return Err(ConfigError::at(e.line, format!("key not used by problem `{}`", problem.as_str()))
                .with(format!("`{key}`")));
        }
    }

    let blades = match entries.get("render.blades") {
        Some(e) => match parse_count("render.blades", e)? {
            0 => return Err(ConfigError::at(e.line, "render.blades must be at least 1")),
            n => n,
        },
        None => 1,
    };
    let output = entries.get("output.path").map(|e| PathBuf::from(e.value));
    if let Some(e) = entries.get("output.path") {
        if e.value.is_empty() {
            return Err(malformed("output.path", e));
        }
    }

    let frame = parse_frame(&entries)?;
    let solver = parse_solver(&entries, problem)?;
    let profile = match entries.get("profile.kind") {
        Some(_) => Some(parse_profile(&entries, frame.map(|f| f.b()))?),
        None => None,
    };
    let law = match entries.get("law.kind") {
        Some(_) => {
            let y_end = solver.y_end.or_else(|| frame.map(|f| 0.5 * f.b()));
            Some(parse_law(&entries, frame.map(|f| f.b()), y_end)?)
        }
        None => None,
    };
    for orphan in ["profile.coeffs", "profile.samples", "profile.domain"] {
        if profile.is_none() && entries.get(orphan).is_some() {
            return Err(ConfigError::missing("profile.kind"));
        }
    }
    for orphan in ["law.params", "law.domain"] {
        if law.is_none() && entries.get(orphan).is_some() {
            return Err(ConfigError::missing("law.kind"));
        }
    }

    match problem {
        Problem::Forward => {
            profile.as_ref().ok_or_else(|| ConfigError::missing("profile.kind"))?;
            frame.ok_or_else(|| ConfigError::missing("frame.b"))?;
            if solver.w0.is_none() {
                return Err(ConfigError::missing("solver.w0"));
            }
        }
        Problem::Inverse => {
            law.as_ref().ok_or_else(|| ConfigError::missing("law.kind"))?;
            frame.ok_or_else(|| ConfigError::missing("frame.b"))?;
        }
        Problem::Geometry => {
            profile.as_ref().ok_or_else(|| ConfigError::missing("profile.kind"))?;
        }
        Problem::Render => match (&profile, &law) {
            (None, None) => return Err(ConfigError::missing("profile.kind")),
            (Some(_), Some(_)) => {
                let e = entries.require("law.kind")?;
                return Err(ConfigError::at(e.line, "render takes either a profile or a law, not both"));
            }
            (None, Some(_)) if frame.is_none() => return Err(ConfigError::missing("frame.b")),
            _ => {}
        },
        Problem::Check => {}
    }

    Ok(RunSpec { problem, profile, law, frame, solver, blades, output })
}

fn parse_frame(entries: &Entries<'_>) -> Result<Option<FrameSpec>, ConfigError> {
    let b = entries.number("frame.b")?;
    let m0 = entries.number("frame.m0")?;
    let sigma = match entries.get("frame.sigma") {
        Some(e) => {
            let s = parse_number("frame.sigma", e)?;
            Direction::from_sign(s).map_err(|err| invalid("frame.sigma", e, err))?
        }
        None => Direction::default(),
    };
    match (b, m0) {
        (None, None) => {
            if entries.get("frame.sigma").is_some() {
                return Err(ConfigError::missing("frame.b"));
            }
            Ok(None)
        }
        (None, Some(_)) => Err(ConfigError::missing("frame.b")),
        (Some(_), None) => Err(ConfigError::missing("frame.m0")),
        (Some(b), Some(m0)) => FrameSpec::new(b, m0, sigma).map(Some).map_err(|err| {
            let key = if b <= 0.0 || !b.is_finite() { "frame.b" } else { "frame.m0" };
            invalid(key, entries.get(key).expect("present"), err)
        }),
    }
}

fn parse_solver(entries: &Entries<'_>, problem: Problem) -> Result<SolverSettings, ConfigError> {
    let mut integrator = IntegratorConfig::default();
    let mut inverse_method = InverseMethod::default();
    if let Some(e) = entries.get("solver.method") {
        match (problem, e.value) {
            (Problem::Forward, "rk4") => integrator.method = Method::Rk4,
            (Problem::Forward, "rkf45") => integrator.method = Method::Rkf45,
            (Problem::Inverse | Problem::Render, "reduction") => {
                inverse_method = InverseMethod::Reduction
            }
            (Problem::Inverse | Problem::Render, "ode") => inverse_method = InverseMethod::Ode,
            _ => return Err(ConfigError::at(e.line, "unknown solver method").with(format!("`{}`", e.value))),
        }
    }
    let positive = |key: &str| -> Result<Option<f64>, ConfigError> {
        match entries.number(key)? {
            Some(v) if v <= 0.0 => {
                Err(ConfigError::at(entries.get(key).expect("present").line, format!("`{key}` must be positive")))
            }
            other => Ok(other),
        }
    };
    if let Some(v) = positive("solver.dt")? {
        integrator.dt = v;
    }
    if let Some(v) = positive("solver.rel_tol")? {
        integrator.rel_tol = v;
    }
    if let Some(v) = positive("solver.abs_tol")? {
        integrator.abs_tol = v;
    }
    if let Some(v) = positive("solver.t_end")? {
        integrator.t_end = v;
    }
    if let Some(e) = entries.get("solver.max_steps") {
        integrator.max_steps = match parse_count("solver.max_steps", e)? {
            0 => return Err(ConfigError::at(e.line, "`solver.max_steps` must be at least 1")),
            n => n,
        };
    }
    let w0 = entries.number("solver.w0")?;
    if let (Some(0.0), Some(e)) = (w0, entries.get("solver.w0")) {
        return Err(ConfigError::at(e.line, "`solver.w0` must be nonzero"));
    }
    let y_end = entries.number("solver.y_end")?;
    Ok(SolverSettings { integrator, inverse_method, w0, y_end })
}

/// Polynomial and linear profiles default to `[0, b]` when a frame is given:
/// the inlet sits at the top of the blade.
fn parse_profile(entries: &Entries<'_>, b: Option<f64>) -> Result<BladeProfile, ConfigError> {
    let kind = entries.require("profile.kind")?;
    let domain = entries.get("profile.domain").map(|e| parse_domain("profile.domain", e)).transpose()?;
    let need_domain = || match (domain, b) {
        (Some(d), _) => Ok(d),
        (None, Some(b)) => Interval::new(0.0, b)
            .map_err(|_| ConfigError::missing("profile.domain").with("default [0, b] needs b > 0")),
        (None, None) => Err(ConfigError::missing("profile.domain")),
    };
    let forbid = |key: &str| match entries.get(key) {
        Some(e) => Err(ConfigError::at(e.line, format!("`{key}` does not apply to profile kind `{}`", kind.value))),
        None => Ok(()),
    };
    match kind.value {
        "polynomial" | "linear" => {
            forbid("profile.samples")?;
            let e = entries.require("profile.coeffs")?;
            let coeffs = parse_list("profile.coeffs", e)?;
            let domain = need_domain()?;
            if kind.value == "linear" {
                match coeffs.as_slice() {
                    &[intercept, slope] => BladeProfile::linear(intercept, slope, domain),
                    _ => {
                        return Err(ConfigError::at(e.line, "linear profile needs exactly two coefficients")
                            .with("intercept,slope"))
                    }
                }
            } else {
                BladeProfile::polynomial(&coeffs, domain)
            }
            .map_err(|err| invalid("profile.coeffs", e, err))
        }
        "spline" | "cubic-spline" => {
            forbid("profile.coeffs")?;
            let e = entries.require("profile.samples")?;
            let samples = parse_pairs("profile.samples", e, ';')?;
            let domain = match domain {
                Some(d) => d,
                None => {
                    let lo = samples.first().map(|p| p.0).unwrap_or(0.0);
                    let hi = samples.last().map(|p| p.0).unwrap_or(0.0);
                    Interval::new(lo, hi).map_err(|err| invalid("profile.samples", e, err))?
                }
            };
            BladeProfile::spline(&samples, domain).map_err(|err| invalid("profile.samples", e, err))
        }
        _ => Err(ConfigError::at(kind.line, "unknown profile kind").with(format!("`{}`", kind.value))),
    }
}

fn parse_law(
    entries: &Entries<'_>,
    b: Option<f64>,
    y_end: Option<f64>,
) -> Result<SpeedLaw, ConfigError> {
    let kind = entries.require("law.kind")?;
    let e = entries.require("law.params")?;
    let explicit = entries.get("law.domain").map(|d| parse_domain("law.domain", d)).transpose()?;
    let default_domain = || -> Result<Interval, ConfigError> {
        match (b, y_end) {
            (Some(b), Some(y)) => Interval::new(y.min(b), b).map_err(|err| invalid("law.params", e, err)),
            _ => Err(ConfigError::missing("law.domain")),
        }
    };
    let params = |n: usize| -> Result<Vec<f64>, ConfigError> {
        let v = parse_list("law.params", e)?;
        if v.len() == n {
            Ok(v)
        } else {
            Err(ConfigError::at(e.line, format!("law kind `{}` takes {n} parameter(s)", kind.value))
                .with(format!("got {}", v.len())))
        }
    };
    let law = match kind.value {
        "constant" => {
            let p = params(1)?;
            SpeedLaw::constant(p[0], explicit.map_or_else(default_domain, Ok)?)
        }
        "affine" => {
            let p = params(2)?;
            SpeedLaw::affine(p[0], p[1], explicit.map_or_else(default_domain, Ok)?)
        }
        "power" => {
            let p = params(2)?;
            SpeedLaw::power(p[0], p[1], explicit.map_or_else(default_domain, Ok)?)
        }
        "exponential" => {
            let p = params(2)?;
            SpeedLaw::exponential(p[0], p[1], explicit.map_or_else(default_domain, Ok)?)
        }
        "tabulated" => {
            let samples = parse_pairs("law.params", e, ',')?;
            let domain = match explicit {
                Some(d) => d,
                None => {
                    let lo = samples.first().map(|p| p.0).unwrap_or(0.0);
                    let hi = samples.last().map(|p| p.0).unwrap_or(0.0);
                    Interval::new(lo, hi).map_err(|err| invalid("law.params", e, err))?
                }
            };
            SpeedLaw::tabulated(&samples, domain)
        }
        _ => return Err(ConfigError::at(kind.line, "unknown law kind").with(format!("`{}`", kind.value))),
    };
    law.map_err(|err| invalid("law.params", e, err))
}
