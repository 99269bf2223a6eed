//! Static SVG drawings of a blade or a whole impeller.
//!
//! Points are drawn in the blade's local frame scaled by `size`; a
//! `scale(1,-1)` group keeps `Y` pointing up. An impeller repeats the blade
//! `N` times, rotated by `2πk/N` about the local origin, so the inlet points
//! `(0, b)` all sit on the circle of radius `b`.

use std::fmt::Write as _;

use bladeprof_core::{BladeProfile, ProfileSolution};

const PROFILE_POINTS: usize = 201;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub blades: usize,
    /// Stroke width in user units.
    pub stroke: f64,
    /// User units per unit of local length.
    pub size: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self { blades: 1, stroke: 1.0, size: 100.0 }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RenderError {
    #[error("at least one blade is required")]
    NoBlades,
    #[error("no samples to draw")]
    EmptySamples,
    #[error("size and stroke must be positive")]
    BadScale,
    #[error(transparent)]
    Solver(#[from] bladeprof_core::Error),
}

#[derive(Debug, Clone, Copy)]
pub enum BladeShape<'a> {
    Profile(&'a BladeProfile),
    Solution(&'a ProfileSolution),
}

impl BladeShape<'_> {
    /// `(X, Y)` points along the blade, top of the blade first.
    pub fn points(&self) -> Result<Vec<(f64, f64)>, RenderError> {
        match self {
            BladeShape::Profile(p) => {
                let d = p.domain();
                let step = (d.hi() - d.lo()) / (PROFILE_POINTS - 1) as f64;
                (0..PROFILE_POINTS)
                    .map(|i| {
                        let y = if i == PROFILE_POINTS - 1 { d.lo() } else { d.hi() - step * i as f64 };
                        Ok((p.eval(y)?.f, y))
                    })
                    .collect()
            }
            BladeShape::Solution(s) => Ok(s.samples.iter().map(|s| (s.f, s.y)).collect()),
        }
    }
}

/// Fixed-precision number with trailing zeros trimmed.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

pub fn render_svg(shape: BladeShape<'_>, options: &RenderOptions) -> Result<String, RenderError> {
    if options.blades < 1 {
        return Err(RenderError::NoBlades);
    }
    if options.size.is_nan() || options.stroke.is_nan() || options.size <= 0.0 || options.stroke <= 0.0 {
        return Err(RenderError::BadScale);
    }
    let points = shape.points()?;
    if points.is_empty() {
        return Err(RenderError::EmptySamples);
    }

    let copies: Vec<Vec<(f64, f64)>> = (0..options.blades)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / options.blades as f64;
            let (sin, cos) = theta.sin_cos();
            points
                .iter()
                .map(|&(x, y)| {
                    let (x, y) = if k == 0 { (x, y) } else { (x * cos - y * sin, x * sin + y * cos) };
                    (x * options.size, y * options.size)
                })
                .collect()
        })
        .collect();

    let single = options.blades == 1;
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &(x, y) in copies.iter().flatten() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let margin = 0.05 * (x1 - x0).max(y1 - y0).max(options.size * 0.1);
    let (vx, vy) = (x0 - margin, -(y1 + margin));
    let (w, h) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(w),
        num(h),
        num(vx),
        num(vy),
        num(w),
        num(h)
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)">"#);
    if single {
        let _ = writeln!(
            out,
            r##"<g stroke="#888888" stroke-width="{}" stroke-dasharray="4 4">"##,
            num(0.5 * options.stroke)
        );
        let _ = writeln!(out, r#"<line x1="{}" y1="0" x2="{}" y2="0"/>"#, num(x0 - margin), num(x1 + margin));
        let _ = writeln!(out, r#"<line x1="0" y1="{}" x2="0" y2="{}"/>"#, num(y0 - margin), num(y1 + margin));
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(
        out,
        r##"<g fill="none" stroke="#1f4e79" stroke-width="{}" stroke-linejoin="round">"##,
        num(options.stroke)
    );
    for copy in &copies {
        let coords: Vec<String> = copy.iter().map(|&(x, y)| format!("{},{}", num(x), num(y))).collect();
        let _ = writeln!(out, r#"<polyline points="{}"/>"#, coords.join(" "));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bladeprof_core::Interval;

    fn line() -> BladeProfile {
        BladeProfile::polynomial(&[1.0, -1.0], Interval::new(0.5, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn number_format() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(12.3456789), "12.345679");
        assert_eq!(num(-1e-9), "0");
    }

    #[test]
    fn rejects_bad_options() {
        let p = line();
        let opts = RenderOptions { blades: 0, ..Default::default() };
        assert_eq!(render_svg(BladeShape::Profile(&p), &opts), Err(RenderError::NoBlades));
        let opts = RenderOptions { size: 0.0, ..Default::default() };
        assert_eq!(render_svg(BladeShape::Profile(&p), &opts), Err(RenderError::BadScale));
    }

    #[test]
    fn impeller_polyline_count() {
        let p = line();
        let opts = RenderOptions { blades: 12, ..Default::default() };
        let svg = render_svg(BladeShape::Profile(&p), &opts).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 12);
        assert!(!svg.contains("<line"));
    }
}
