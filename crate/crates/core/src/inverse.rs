//! Inverse problem: the profile that realises a prescribed speed law.
//!
//! With `Ẏ = g(Y)` (so `Ÿ = g g_Y`) the blade equation becomes
//!
//! ```text
//! g_Y g (1 + F_Y²) + g² F_Y F_YY = 0,   F(b) = 0,   F_Y(b) = m₀
//! ```
//!
//! whose left side is `½ d/dY [(1 + F_Y²) g²]`. Hence `C = (1 + F_Y²) g²` is
//! constant (it is the squared local speed) and equals `(1 + m₀²) g(b)²`.
//! Two independent routes solve the problem:
//!
//! * [`InverseMethod::Reduction`] takes `F_Y = sign(m₀) √(C/g² − 1)` from the
//!   first integral and integrates it by adaptive quadrature;
//! * [`InverseMethod::Ode`] integrates the second-order equation directly.
//!
//! `g` only enters through `g²` and `g g_Y`, so the traversal direction has
//! no influence on the shape; only `γ = |g|` is used.

use alloc::vec::Vec;

use crate::dynamics::{integrate_forward, IntegratorConfig, Method, Termination, SLOPE_EPS};
use crate::error::{Error, Result};
use crate::frame::FrameSpec;
use crate::ode::{State, Stepper};
use crate::profile::{BladeProfile, Interval};
use crate::quadrature::adaptive_simpson;
use crate::speed::SpeedLaw;

/// Relative margin under which `C − γ²` counts as zero.
const VANISH_EPS: f64 = 1e-14;
/// Threshold for "identically zero" in the linear-blade checks.
const THEOREM_TOL: f64 = 1e-9;
const ROUND_TRIP_SAMPLES: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InverseMethod {
    #[default]
    Reduction,
    Ode,
}

impl InverseMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            InverseMethod::Reduction => "reduction",
            InverseMethod::Ode => "ode",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseSpec {
    pub law: SpeedLaw,
    pub frame: FrameSpec,
    /// Lower end of the blade; the solution runs from `b` down to here.
    pub y_end: f64,
    pub method: InverseMethod,
    /// Quadrature tolerance for the reduction route, split over the panels.
    pub tol: f64,
    /// Number of output samples, `b` and `y_end` included.
    pub samples: usize,
}

impl InverseSpec {
    pub fn new(law: SpeedLaw, frame: FrameSpec, y_end: f64, method: InverseMethod) -> Self {
        Self { law, frame, y_end, method, tol: 1e-12, samples: 201 }
    }

    pub fn validate(&self) -> Result<()> {
        let b = self.frame.b();
        if !self.y_end.is_finite() || self.y_end >= b {
            return Err(Error::InvalidParameter("y_end must be below the inlet ordinate b"));
        }
        let span = Interval::new(self.y_end, b)?;
        if !self.law.domain().contains_interval(&span) {
            return Err(Error::OutsideDomain {
                y: if self.law.domain().contains(b) { self.y_end } else { b },
                lo: self.law.domain().lo(),
                hi: self.law.domain().hi(),
            });
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter("tol must be positive"));
        }
        if self.samples < 2 {
            return Err(Error::InvalidParameter("at least two samples are needed"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub y: f64,
    pub f: f64,
    pub f_y: f64,
    pub f_yy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolutionStatus {
    Complete,
    /// `F_Y` reaches zero at `at`; the samples stop before it.
    SlopeVanished { at: f64 },
}

impl SolutionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolutionStatus::Complete => "complete",
            SolutionStatus::SlopeVanished { .. } => "slope_vanished",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSolution {
    /// From `b` downward.
    pub samples: Vec<ProfileSample>,
    /// Conserved squared speed `(1 + F_Y²) γ²`.
    pub c: f64,
    pub status: SolutionStatus,
    /// Largest `|g_Y g (1 + F_Y²) + g² F_Y F_YY|` over the samples.
    pub max_residual: f64,
}

/// `C = (1 + m₀²) γ(b)²`.
pub fn first_integral_constant(law: &SpeedLaw, frame: &FrameSpec) -> Result<f64> {
    let g = law.eval(frame.b())?.gamma;
    Ok((1.0 + frame.m0() * frame.m0()) * g * g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeAt {
    pub f_y: f64,
    /// `C = γ²` to within round-off: the slope is zero here.
    pub vanished: bool,
}

/// Profile slope implied by the first integral at `y`.
pub fn slope_from_first_integral(
    law: &SpeedLaw,
    frame: &FrameSpec,
    c: f64,
    y: f64,
) -> Result<SlopeAt> {
    let g = law.eval(y)?.gamma;
    if y == frame.b() {
        return Ok(SlopeAt { f_y: frame.m0(), vanished: false });
    }
    let g2 = g * g;
    let gap = c - g2;
    if gap.abs() <= VANISH_EPS * c {
        return Ok(SlopeAt { f_y: 0.0, vanished: true });
    }
    if gap < 0.0 {
        return Err(Error::LawExceedsSpeed { y });
    }
    let f_y = libm::copysign(libm::sqrt(c / g2 - 1.0), frame.m0());
    Ok(SlopeAt { f_y, vanished: false })
}

fn residual(gamma: f64, gamma_y: f64, f_y: f64, f_yy: f64) -> f64 {
    gamma_y * gamma * (1.0 + f_y * f_y) + gamma * gamma * f_y * f_yy
}

/// Uniform grid from `b` down to `y_end`, both ends exact.
fn grid(b: f64, y_end: f64, n: usize) -> Vec<f64> {
    let step = (b - y_end) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { y_end } else { b - step * i as f64 })
        .collect()
}

pub fn solve_inverse(spec: &InverseSpec) -> Result<ProfileSolution> {
    spec.validate()?;
    let (law, frame) = (&spec.law, &spec.frame);
    let c = first_integral_constant(law, frame)?;
    let mut ys = grid(frame.b(), spec.y_end, spec.samples);

    // the whole blade must be feasible before anything is produced
    let mut vanished_at = None;
    for &y in &ys {
        let s = slope_from_first_integral(law, frame, c, y)?;
        if s.vanished && vanished_at.is_none() {
            vanished_at = Some(y);
        }
    }
    let mut status = SolutionStatus::Complete;
    if let Some(at) = vanished_at {
        ys.retain(|&y| y > at);
        status = SolutionStatus::SlopeVanished { at };
    }

    let (samples, ode_vanished) = match spec.method {
        InverseMethod::Reduction => (reduction(spec, c, &ys)?, None),
        InverseMethod::Ode => ode(spec, &ys)?,
    };
    if let (SolutionStatus::Complete, Some(at)) = (status, ode_vanished) {
        status = SolutionStatus::SlopeVanished { at };
    }

    let mut max_residual: f64 = 0.0;
    for s in &samples {
        let g = law.eval(s.y)?;
        max_residual = max_residual.max(residual(g.gamma, g.gamma_y, s.f_y, s.f_yy).abs());
    }
    Ok(ProfileSolution { samples, c, status, max_residual })
}

fn reduction(spec: &InverseSpec, c: f64, ys: &[f64]) -> Result<Vec<ProfileSample>> {
    let (law, frame) = (&spec.law, &spec.frame);
    let panel_tol = spec.tol / (ys.len().max(2) - 1) as f64;
    let slope = |y: f64| slope_from_first_integral(law, frame, c, y).map(|s| s.f_y);
    let mut samples = Vec::with_capacity(ys.len());
    let mut f = 0.0;
    let mut prev = frame.b();
    for &y in ys {
        f += adaptive_simpson(slope, prev, y, panel_tol)?;
        prev = y;
        let g = law.eval(y)?;
        let f_y = slope(y)?;
        // F_YY = d/dY [sign(m₀) √(C/γ² − 1)], in closed form
        let root = f_y.abs();
        let f_yy = -libm::copysign(1.0, frame.m0()) * c * g.gamma_y
            / (g.gamma * g.gamma * g.gamma * root);
        samples.push(ProfileSample { y, f, f_y, f_yy });
    }
    Ok(samples)
}

fn ode(spec: &InverseSpec, ys: &[f64]) -> Result<(Vec<ProfileSample>, Option<f64>)> {
    let law = &spec.law;
    let cfg = IntegratorConfig::default();
    let mut stepper = Stepper::new(Method::Rkf45, cfg.dt, cfg.rel_tol, cfg.abs_tol)?;
    let second = |y: f64, f_y: f64| -> Result<f64> {
        let g = law.eval(y)?;
        Ok(-g.gamma_y * (1.0 + f_y * f_y) / (g.gamma * f_y))
    };
    let mut rhs = |y: f64, s: &State| -> Result<State> { Ok([s[1], second(y, s[1])?]) };

    let mut samples = Vec::with_capacity(ys.len());
    let mut x = spec.frame.b();
    let mut state = [0.0, spec.frame.m0()];
    for &target in ys {
        while x != target {
            (x, state) = stepper.advance(&mut rhs, x, &state, target)?;
            if state[1].abs() < SLOPE_EPS || state[1].signum() != spec.frame.m0().signum() {
                return Ok((samples, Some(x)));
            }
        }
        samples.push(ProfileSample { y: x, f: state[0], f_y: state[1], f_yy: second(x, state[1])? });
    }
    Ok((samples, None))
}

/// Error metrics of inverse → profile → forward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTripReport {
    /// `max ||Ẏ| − γ(Y)| / γ(Y)` over the forward samples.
    pub max_rel_error: f64,
    pub drift: f64,
    pub compared: usize,
    pub termination: Termination,
}

/// Solves the inverse problem, interpolates the result as a spline profile,
/// runs the forward problem on it with `w0 = σ γ(b)` and compares the
/// recovered `|Ẏ(Y)|` with `γ(Y)`.
pub fn round_trip_check(
    law: &SpeedLaw,
    frame: &FrameSpec,
    y_end: f64,
    config: &IntegratorConfig,
) -> Result<RoundTripReport> {
    let spec = InverseSpec {
        samples: ROUND_TRIP_SAMPLES,
        ..InverseSpec::new(law.clone(), *frame, y_end, InverseMethod::Reduction)
    };
    let solution = solve_inverse(&spec)?;
    let profile = solution_profile(&solution)?;
    let w0 = frame.sigma().sign() * law.eval(frame.b())?.gamma;
    let trajectory = integrate_forward(&profile, frame, w0, config)?;

    let mut max_rel_error: f64 = 0.0;
    for s in &trajectory.samples {
        let g = law.eval(s.y)?.gamma;
        max_rel_error = max_rel_error.max((s.y_dot.abs() - g).abs() / g);
    }
    Ok(RoundTripReport {
        max_rel_error,
        drift: trajectory.drift,
        compared: trajectory.samples.len(),
        termination: trajectory.termination,
    })
}

/// Cubic spline through the solution's `(Y, F)` samples, clamped to the
/// solved slopes at both ends.
pub fn solution_profile(solution: &ProfileSolution) -> Result<BladeProfile> {
    let mut points: Vec<(f64, f64)> = solution.samples.iter().map(|s| (s.y, s.f)).collect();
    points.reverse();
    let (first, last) = match (solution.samples.last(), solution.samples.first()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::TooFewSamples { needed: 4, got: 0 }),
    };
    let domain = Interval::new(first.y, last.y)?;
    BladeProfile::spline_clamped(&points, domain, first.f_y, last.f_y)
}

#[derive(Debug, Clone, Copy)]
pub enum TheoremInput<'a> {
    /// Forward direction: run the profile from the inlet with rate `w0`.
    Profile { profile: &'a BladeProfile, w0: f64 },
    /// Inverse direction: solve for the profile down to `y_end`.
    Law { law: &'a SpeedLaw, y_end: f64 },
}

/// Observed sides of "constant speed along the blade ⟺ zero curvature".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremVerdict {
    /// Profile input: `Ẏ` constant along the run. Law input: `γ_Y ≡ 0`.
    pub constant_speed: bool,
    /// `F_YY ≡ 0` along the samples.
    pub zero_curvature: bool,
    /// Profile input: `max |Ẏ − w0| / |w0|`. Law input: `max |γ_Y|`.
    pub rate_variation: f64,
    pub max_curvature: f64,
    /// Profile input only: whether `X(t)` is affine in `t`.
    pub x_affine: Option<bool>,
    /// The biconditional holds on this input.
    pub holds: bool,
}

pub fn check_linear_theorem(
    input: TheoremInput<'_>,
    frame: &FrameSpec,
    config: &IntegratorConfig,
) -> Result<TheoremVerdict> {
    match input {
        TheoremInput::Profile { profile, w0 } => {
            let tr = integrate_forward(profile, frame, w0, config)?;
            let mut rate_variation: f64 = 0.0;
            let mut max_curvature: f64 = 0.0;
            for s in &tr.samples {
                rate_variation = rate_variation.max((s.y_dot - w0).abs() / w0.abs());
                max_curvature = max_curvature.max(profile.eval(s.y)?.f_yy.abs());
            }
            let constant_speed = rate_variation <= THEOREM_TOL;
            let zero_curvature = max_curvature <= THEOREM_TOL;
            let points: Vec<(f64, f64)> = tr.samples.iter().map(|s| (s.t, s.x)).collect();
            let scale = points.iter().fold(1.0f64, |m, p| m.max(p.1.abs()));
            let x_affine = affine_fit_residual(&points) <= 1e-12 * scale;
            Ok(TheoremVerdict {
                constant_speed,
                zero_curvature,
                rate_variation,
                max_curvature,
                x_affine: Some(x_affine),
                holds: constant_speed == zero_curvature && (!constant_speed || x_affine),
            })
        }
        TheoremInput::Law { law, y_end } => {
            let solution = solve_inverse(&InverseSpec::new(
                law.clone(),
                *frame,
                y_end,
                InverseMethod::Reduction,
            ))?;
            let mut rate_variation: f64 = 0.0;
            let mut max_curvature: f64 = 0.0;
            for s in &solution.samples {
                rate_variation = rate_variation.max(law.eval(s.y)?.gamma_y.abs());
                max_curvature = max_curvature.max(s.f_yy.abs());
            }
            let constant_speed = rate_variation <= THEOREM_TOL;
            let zero_curvature = max_curvature <= THEOREM_TOL;
            Ok(TheoremVerdict {
                constant_speed,
                zero_curvature,
                rate_variation,
                max_curvature,
                x_affine: None,
                holds: constant_speed == zero_curvature,
            })
        }
    }
}

/// Largest absolute residual of the least-squares line through `points`.
fn affine_fit_residual(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mx = points.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = points.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    let stx: f64 = points.iter().map(|p| (p.0 - mt) * (p.1 - mx)).sum();
    let slope = if stt > 0.0 { stx / stt } else { 0.0 };
    points
        .iter()
        .map(|p| (p.1 - (mx + slope * (p.0 - mt))).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Direction;

    fn dom(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn frame(b: f64, m0: f64) -> FrameSpec {
        FrameSpec::new(b, m0, Direction::Decreasing).unwrap()
    }

    #[test]
    fn constants() {
        let id = SpeedLaw::power(1.0, 1.0, dom(0.1, 3.0)).unwrap();
        assert_eq!(first_integral_constant(&id, &frame(1.0, -1.0)).unwrap(), 2.0);
        let half = SpeedLaw::constant(0.5, dom(0.1, 3.0)).unwrap();
        assert_eq!(first_integral_constant(&half, &frame(1.0, 1.0)).unwrap(), 0.5);
        let sq = SpeedLaw::power(1.0, 2.0, dom(0.1, 3.0)).unwrap();
        assert_eq!(first_integral_constant(&sq, &frame(2.0, -2.0)).unwrap(), 80.0);
        assert!(first_integral_constant(&sq, &frame(5.0, -2.0)).is_err());
    }

    #[test]
    fn slopes() {
        let law = SpeedLaw::power(1.0, 1.0, dom(0.1, 2.0)).unwrap();
        let fr = frame(1.0, -1.0);
        assert_eq!(slope_from_first_integral(&law, &fr, 2.0, 1.0).unwrap().f_y, -1.0);
        let s = slope_from_first_integral(&law, &fr, 2.0, 0.5).unwrap();
        assert!((s.f_y + libm::sqrt(7.0)).abs() < 1e-14);
        assert_eq!(
            slope_from_first_integral(&law, &fr, 2.0, 1.5),
            Err(Error::LawExceedsSpeed { y: 1.5 })
        );
        let at_speed = slope_from_first_integral(&law, &fr, 2.0, libm::sqrt(2.0)).unwrap();
        assert!(at_speed.vanished);
    }

    #[test]
    fn constant_law_gives_line() {
        let law = SpeedLaw::constant(0.5, dom(0.0, 2.0)).unwrap();
        for method in [InverseMethod::Reduction, InverseMethod::Ode] {
            let sol = solve_inverse(&InverseSpec::new(law.clone(), frame(1.0, -1.0), 0.5, method)).unwrap();
            assert_eq!(sol.status, SolutionStatus::Complete);
            assert_eq!(sol.samples[0], ProfileSample { y: 1.0, f: 0.0, f_y: -1.0, f_yy: 0.0 });
            for s in &sol.samples {
                assert!((s.f_y + 1.0).abs() <= 1e-10);
                assert!(s.f_yy.abs() <= 1e-10);
                assert!((s.f + (s.y - 1.0)).abs() <= 1e-10);
            }
            assert_eq!(sol.samples.last().unwrap().y, 0.5);
        }
    }

    #[test]
    fn identity_law_methods_agree() {
        let law = SpeedLaw::power(1.0, 1.0, dom(0.25, 1.0)).unwrap();
        let red = solve_inverse(&InverseSpec::new(law.clone(), frame(1.0, -1.0), 0.5, InverseMethod::Reduction))
            .unwrap();
        let ode = solve_inverse(&InverseSpec::new(law, frame(1.0, -1.0), 0.5, InverseMethod::Ode)).unwrap();
        assert_eq!(red.samples.len(), ode.samples.len());
        for (a, b) in red.samples.iter().zip(&ode.samples) {
            assert_eq!(a.y, b.y);
            assert!((a.f - b.f).abs() <= 1e-8);
            assert!((a.f_y - b.f_y).abs() <= 1e-8);
        }
        assert!(red.max_residual <= 1e-8 && ode.max_residual <= 1e-8);
        // F(b) − F(0.5) = ∫_{0.5}^{1} F_Y dY ≈ −0.835
        assert!((red.samples.last().unwrap().f - 0.835).abs() <= 1e-3);
    }

    #[test]
    fn law_exceeding_speed_is_an_error() {
        // γ grows toward small Y faster than the conserved speed allows
        let law = SpeedLaw::power(1.0, -2.0, dom(0.1, 1.0)).unwrap();
        let r = solve_inverse(&InverseSpec::new(law, frame(1.0, -1.0), 0.5, InverseMethod::Reduction));
        assert!(matches!(r, Err(Error::LawExceedsSpeed { .. })));
    }

    #[test]
    fn vanishing_slope_truncates() {
        // C = 2 at b = 1; the affine law reaches γ = √2 = √C exactly at Y = 0.5
        let s2 = libm::sqrt(2.0);
        let a1 = (1.0 - s2) / 0.5;
        let law = SpeedLaw::affine(1.0 - a1, a1, dom(0.5, 1.0)).unwrap();
        let mut spec = InverseSpec::new(law, frame(1.0, -1.0), 0.5, InverseMethod::Reduction);
        spec.samples = 11;
        let sol = solve_inverse(&spec).unwrap();
        assert_eq!(sol.status, SolutionStatus::SlopeVanished { at: 0.5 });
        assert_eq!(sol.samples.len(), 10);
        assert!(sol.samples.iter().all(|s| s.y > 0.5 && s.f_y < 0.0));
    }

    #[test]
    fn spec_validation() {
        let law = SpeedLaw::constant(1.0, dom(0.6, 2.0)).unwrap();
        let mut spec = InverseSpec::new(law, frame(1.0, -1.0), 0.5, InverseMethod::Reduction);
        assert!(solve_inverse(&spec).is_err());
        spec.y_end = 1.5;
        assert!(solve_inverse(&spec).is_err());
        spec.y_end = 0.7;
        spec.tol = 0.0;
        assert!(solve_inverse(&spec).is_err());
    }

    #[test]
    fn affine_fit() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 2.0 - 0.5 * i as f64)).collect();
        assert!(affine_fit_residual(&pts) < 1e-14);
        let curved: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, (i * i) as f64)).collect();
        assert!(affine_fit_residual(&curved) > 1.0);
    }
}
