//! CSV tables for trajectories, inverse solutions and geometry sweeps.
//!
//! Every file starts with the `# bladeprof v1` marker line followed by a
//! header. Floats use the shortest decimal form that parses back to the same
//! `f64` (never more than 17 significant digits), so reading a file back is
//! exact.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use bladeprof_core::{
    arc_length, geometry_sample, BladeProfile, Curvature, ProfileSample, ProfileSolution,
    Trajectory,
};

pub const MARKER: &str = "# bladeprof v1";
pub const TRAJECTORY_HEADER: &str = "t,Y,Ydot,X,Xdot,v";
pub const PROFILE_HEADER: &str = "Y,F,F_Y,F_YY";
pub const GEOMETRY_HEADER: &str = "Y,F,F_Y,F_YY,r_c,alpha,arc_length";

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error("nothing to write: empty data")]
    Empty,
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Solver(#[from] bladeprof_core::Error),
}

/// One row of a geometry sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryRow {
    pub y: f64,
    pub f: f64,
    pub f_y: f64,
    pub f_yy: f64,
    pub curvature: Curvature,
    pub alpha: f64,
    /// Arc length from the top of the domain down to `y`.
    pub arc_length: f64,
}

/// Samples `n ≥ 2` evenly spaced ordinates from the top of the domain down.
pub fn geometry_table(profile: &BladeProfile, n: usize, tol: f64) -> Result<Vec<GeometryRow>, CsvError> {
    let d = profile.domain();
    let n = n.max(2);
    let step = (d.hi() - d.lo()) / (n - 1) as f64;
    let mut rows = Vec::with_capacity(n);
    let mut s = 0.0;
    let mut prev = d.hi();
    for i in 0..n {
        let y = if i == n - 1 { d.lo() } else { d.hi() - step * i as f64 };
        let e = profile.eval(y)?;
        let g = geometry_sample(e.f_y, e.f_yy)?;
        s += arc_length(profile, y, prev, tol / n as f64)?;
        prev = y;
        rows.push(GeometryRow {
            y,
            f: e.f,
            f_y: e.f_y,
            f_yy: e.f_yy,
            curvature: g.curvature,
            alpha: g.alpha,
            arc_length: s,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy)]
pub enum CsvData<'a> {
    Trajectory(&'a Trajectory),
    Profile(&'a ProfileSolution),
    Geometry(&'a [GeometryRow]),
}

fn push_row(out: &mut String, values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{v}").expect("writing to a String cannot fail");
    }
    out.push('\n');
}

impl CsvData<'_> {
    pub fn header(&self) -> &'static str {
        match self {
            CsvData::Trajectory(_) => TRAJECTORY_HEADER,
            CsvData::Profile(_) => PROFILE_HEADER,
            CsvData::Geometry(_) => GEOMETRY_HEADER,
        }
    }

    pub fn render(&self) -> Result<String, CsvError> {
        let mut out = format!("{MARKER}\n{}\n", self.header());
        match self {
            CsvData::Trajectory(tr) => {
                if tr.samples.is_empty() {
                    return Err(CsvError::Empty);
                }
                for s in &tr.samples {
                    push_row(&mut out, &[s.t, s.y, s.y_dot, s.x, s.x_dot, s.v]);
                }
            }
            CsvData::Profile(sol) => {
                if sol.samples.is_empty() {
                    return Err(CsvError::Empty);
                }
                for s in &sol.samples {
                    push_row(&mut out, &[s.y, s.f, s.f_y, s.f_yy]);
                }
            }
            CsvData::Geometry(rows) => {
                if rows.is_empty() {
                    return Err(CsvError::Empty);
                }
                for r in rows.iter() {
                    let radius = r.curvature.radius().unwrap_or(f64::INFINITY);
                    push_row(&mut out, &[r.y, r.f, r.f_y, r.f_yy, radius, r.alpha, r.arc_length]);
                }
            }
        }
        Ok(out)
    }
}

/// Renders `data` completely before touching `path`.
pub fn write_csv(data: CsvData<'_>, path: &Path) -> Result<(), CsvError> {
    let text = data.render()?;
    std::fs::write(path, text).map_err(|source| CsvError::Io { path: path.to_path_buf(), source })
}

/// Reads a profile table written by [`write_csv`].
pub fn parse_profile_csv(text: &str) -> Result<Vec<ProfileSample>, CsvError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.starts_with('#'));
    match lines.next() {
        Some((_, h)) if h == PROFILE_HEADER => {}
        Some((i, _)) => return Err(CsvError::Parse { line: i + 1, message: format!("expected header `{PROFILE_HEADER}`") }),
        None => return Err(CsvError::Empty),
    }
    let mut samples = Vec::new();
    for (i, line) in lines {
        let fields: Vec<f64> = line
            .split(',')
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| CsvError::Parse { line: i + 1, message: format!("{e}") })?;
        match fields.as_slice() {
            &[y, f, f_y, f_yy] => samples.push(ProfileSample { y, f, f_y, f_yy }),
            _ => return Err(CsvError::Parse { line: i + 1, message: "expected 4 fields".into() }),
        }
    }
    if samples.is_empty() {
        return Err(CsvError::Empty);
    }
    Ok(samples)
}

/// Natural-spline profile through the `(Y, F)` columns of a profile table.
pub fn profile_from_csv(text: &str) -> Result<BladeProfile, CsvError> {
    let mut points: Vec<(f64, f64)> = parse_profile_csv(text)?.iter().map(|s| (s.y, s.f)).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let lo = points[0].0;
    let hi = points[points.len() - 1].0;
    let domain = bladeprof_core::Interval::new(lo, hi)?;
    Ok(BladeProfile::spline(&points, domain)?)
}
