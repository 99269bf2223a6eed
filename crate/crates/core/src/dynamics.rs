//! Forward problem: the motion `Y(t)` along a given profile.
//!
//! Solving the blade equation for the acceleration gives
//! `Ÿ = −F_Y F_YY Ẏ² / (1 + F_Y²)`, integrated here as a first-order system
//! in `(Y, Ẏ)`. Along exact solutions `v² = (1 + F_Y²) Ẏ²` is constant, which
//! the trajectory reports as its conservation drift.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::FrameSpec;
pub use crate::ode::Method;
use crate::ode::{State, Stepper};
use crate::profile::BladeProfile;

/// Slopes below this magnitude stop the run: the blade equation is only
/// derived where `F_Y ≠ 0`.
pub const SLOPE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionState {
    pub t: f64,
    pub y: f64,
    pub y_dot: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    /// fixed step for [`Method::Rk4`]
    pub dt: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_end: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rkf45,
            dt: 1e-3,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            t_end: 1e3,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn rk4(dt: f64, t_end: f64) -> Self {
        Self { method: Method::Rk4, dt, t_end, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter("dt must be positive"));
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive"));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::InvalidParameter("t_end must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be at least 1"));
        }
        Ok(())
    }

    pub(crate) fn stepper(&self) -> Result<Stepper> {
        Stepper::new(self.method, self.dt, self.rel_tol, self.abs_tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ReachedTEnd,
    ExitedDomain,
    StepLimit,
    SlopeVanished,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::ReachedTEnd => "reached_t_end",
            Termination::ExitedDomain => "exited_domain",
            Termination::StepLimit => "step_limit",
            Termination::SlopeVanished => "slope_vanished",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub y: f64,
    pub y_dot: f64,
    pub x: f64,
    pub x_dot: f64,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub termination: Termination,
    /// `max |v − v₀| / v₀` over the samples.
    pub drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftReport {
    pub max_drift: f64,
    /// Index of the sample where the maximum occurs.
    pub index: usize,
}

/// `Ÿ` from the blade equation at `state`.
pub fn forward_rhs(profile: &BladeProfile, state: &MotionState) -> Result<f64> {
    let e = profile.eval(state.y)?;
    Ok(acceleration(e.f_y, e.f_yy, state.y_dot))
}

#[inline]
fn acceleration(f_y: f64, f_yy: f64, y_dot: f64) -> f64 {
    -f_y * f_yy * y_dot * y_dot / (1.0 + f_y * f_y)
}

fn sample(profile: &BladeProfile, t: f64, y: f64, y_dot: f64) -> Result<TrajectorySample> {
    let e = profile.eval(y)?;
    let x_dot = e.f_y * y_dot;
    let v = libm::sqrt(x_dot * x_dot + y_dot * y_dot);
    Ok(TrajectorySample { t, y, y_dot, x: e.f, x_dot, v })
}

/// Integrates from `(0, b, w0)` until `t_end`, leaving the profile domain,
/// the step cap, or a vanishing slope.
pub fn integrate_forward(
    profile: &BladeProfile,
    frame: &FrameSpec,
    w0: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    config.validate()?;
    if !w0.is_finite() {
        return Err(Error::NonFinite("w0"));
    }
    if w0 == 0.0 {
        return Err(Error::ZeroInitialRate);
    }
    if w0.signum() != frame.sigma().sign() {
        return Err(Error::DirectionMismatch);
    }
    let domain = profile.domain();
    let b = frame.b();
    domain.check(b)?;

    let mut rhs = |_t: f64, s: &State| -> Result<State> {
        let e = profile.eval_extended(s[0]);
        Ok([s[1], acceleration(e.f_y, e.f_yy, s[1])])
    };
    let mut stepper = config.stepper()?;

    let mut samples = alloc::vec![sample(profile, 0.0, b, w0)?];
    let (mut t, mut state) = (0.0, [b, w0]);
    let mut steps = 0usize;

    let termination = loop {
        if profile.eval(state[0])?.f_y.abs() < SLOPE_EPS {
            break Termination::SlopeVanished;
        }
        let on_edge = (state[0] == domain.lo() && state[1] < 0.0)
            || (state[0] == domain.hi() && state[1] > 0.0);
        if on_edge {
            break Termination::ExitedDomain;
        }
        if t >= config.t_end {
            break Termination::ReachedTEnd;
        }
        if steps >= config.max_steps {
            break Termination::StepLimit;
        }
        let (t1, s1) = stepper.advance(&mut rhs, t, &state, config.t_end)?;
        steps += 1;
        if !s1[0].is_finite() || !s1[1].is_finite() {
            return Err(Error::NonFinite("integrated state"));
        }
        let slope_now = profile.eval_extended(state[0]).f_y;
        let inside = domain.contains(s1[0]);
        let landing = if inside { s1[0] } else { s1[0].clamp(domain.lo(), domain.hi()) };
        if profile.eval_extended(landing).f_y.signum() != slope_now.signum() {
            // F_Y changes sign within the step: stop on the zero
            let event = |y: f64| profile.eval_extended(y).f_y;
            if let Some((te, se)) = locate_event(&stepper, &mut rhs, t, &state, t1 - t, event)? {
                if domain.contains(se[0]) {
                    samples.push(sample(profile, te, se[0], se[1])?);
                }
            }
            break Termination::SlopeVanished;
        }
        if inside {
            t = t1;
            state = s1;
            samples.push(sample(profile, t, state[0], state[1])?);
            continue;
        }
        let edge = if s1[0] < domain.lo() { domain.lo() } else { domain.hi() };
        if let Some((te, se)) = locate_event(&stepper, &mut rhs, t, &state, t1 - t, |y| y - edge)? {
            samples.push(sample(profile, te, edge, se[1])?);
        }
        break Termination::ExitedDomain;
    };

    let drift = max_drift(&samples).map(|d| d.max_drift).unwrap_or(0.0);
    Ok(Trajectory { samples, termination, drift })
}

/// Finds the step `τ ∈ (0, h]` whose end point is a zero of `event(Y)`.
///
/// The first guess interpolates linearly between the last state and the end
/// of the full step; it is then refined by Illinois false position on
/// re-taken steps, so the final sample is a genuine step of the integrator
/// rather than an interpolant.
fn locate_event<F, G>(
    stepper: &Stepper,
    rhs: &mut F,
    t: f64,
    state: &State,
    h: f64,
    event: G,
) -> Result<Option<(f64, State)>>
where
    F: FnMut(f64, &State) -> Result<State>,
    G: Fn(f64) -> f64,
{
    let mut phi = |tau: f64| -> Result<(f64, State)> {
        let s = stepper.single(rhs, t, state, tau)?;
        Ok((event(s[0]), s))
    };
    let (mut a, mut fa) = (0.0, event(state[0]));
    let (mut c, (mut fc, _)) = (h, phi(h)?);
    let tol = 1e-15 * fa.abs().max(fc.abs()).max(1.0);
    let mut best = None;
    for _ in 0..100 {
        let tau = if fc == fa { 0.5 * (a + c) } else { c - fc * (c - a) / (fc - fa) };
        let (ft, s) = phi(tau)?;
        best = Some((tau, s));
        if ft.abs() <= tol || (c - a).abs() <= 1e-15 * h.abs() {
            break;
        }
        if ft.signum() == fc.signum() {
            c = tau;
            fc = ft;
            fa *= 0.5;
        } else {
            a = tau;
            fa = ft;
            fc *= 0.5;
        }
    }
    Ok(best.and_then(|(tau, s)| {
        // an event within round-off of the last sample adds nothing new
        if tau.abs() <= 1e-14 * h.abs() {
            None
        } else {
            Some((t + tau, s))
        }
    }))
}

fn max_drift(samples: &[TrajectorySample]) -> Option<DriftReport> {
    let v0 = samples.first()?.v;
    let mut report = DriftReport { max_drift: 0.0, index: 0 };
    for (i, s) in samples.iter().enumerate() {
        let d = (s.v - v0).abs() / v0;
        if d > report.max_drift {
            report = DriftReport { max_drift: d, index: i };
        }
    }
    Some(report)
}

/// Maximum relative drift of the local speed from its initial value.
pub fn conservation_report(trajectory: &Trajectory) -> Result<DriftReport> {
    max_drift(&trajectory.samples).ok_or(Error::EmptyTrajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Direction;
    use crate::geometry::kinematics_sample;
    use crate::profile::Interval;

    fn line() -> BladeProfile {
        BladeProfile::polynomial(&[1.0, -1.0], Interval::new(0.0, 1.0).unwrap()).unwrap()
    }

    fn parabola(lo: f64) -> BladeProfile {
        BladeProfile::polynomial(&[-0.5, 0.0, 0.5], Interval::new(lo, 1.0).unwrap()).unwrap()
    }

    fn frame(m0: f64) -> FrameSpec {
        FrameSpec::new(1.0, m0, Direction::Decreasing).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let st = |y, y_dot| MotionState { t: 0.0, y, y_dot };
        assert_eq!(forward_rhs(&line(), &st(0.4, -3.0)).unwrap(), 0.0);
        assert_eq!(forward_rhs(&parabola(0.0), &st(1.0, -0.5)).unwrap(), -0.125);
        assert_eq!(forward_rhs(&parabola(0.0), &st(0.3, 0.0)).unwrap(), 0.0);
        assert!(forward_rhs(&parabola(0.5), &st(0.2, 1.0)).is_err());
    }

    #[test]
    fn linear_blade_moves_uniformly() {
        let tr = integrate_forward(&line(), &frame(-1.0), -0.2, &IntegratorConfig::rk4(1e-3, 2.0))
            .unwrap();
        assert_eq!(tr.termination, Termination::ReachedTEnd);
        let last = tr.samples.last().unwrap();
        assert_eq!(last.t, 2.0);
        assert!((last.y - 0.6).abs() < 1e-12);
        assert!(tr.samples.iter().all(|s| s.y_dot == -0.2));
        assert!(tr.drift <= 1e-13);
        assert!(tr.samples.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn parabola_conserves_speed() {
        let tr = integrate_forward(&parabola(0.5), &frame(1.0), -0.5, &IntegratorConfig::default())
            .unwrap();
        assert_eq!(tr.termination, Termination::ExitedDomain);
        let last = tr.samples.last().unwrap();
        assert_eq!(last.y, 0.5);
        assert!((last.y_dot.abs() - libm::sqrt(0.5 / 1.25)).abs() < 1e-6);
        assert!(tr.drift <= 1e-8);
        for s in &tr.samples {
            assert!((s.x - parabola(0.5).eval(s.y).unwrap().f).abs() <= 1e-10);
            let ydd = forward_rhs(&parabola(0.5), &MotionState { t: s.t, y: s.y, y_dot: s.y_dot })
                .unwrap();
            let k = kinematics_sample(&parabola(0.5), s.y, s.y_dot, ydd).unwrap();
            assert!(k.blade_residual.abs() <= 1e-9);
        }
    }

    #[test]
    fn exit_with_fixed_step() {
        let w0 = -0.5;
        let dt = 1e-3;
        let tr = integrate_forward(&parabola(0.5), &frame(1.0), w0, &IntegratorConfig::rk4(dt, 10.0))
            .unwrap();
        assert_eq!(tr.termination, Termination::ExitedDomain);
        let last = tr.samples.last().unwrap();
        assert!((last.y - 0.5).abs() <= dt * w0.abs());
        assert!(tr.drift <= 1e-8);
    }

    #[test]
    fn slope_vanishes_at_vertex() {
        // F_Y = Y vanishes at Y = 0; the run must stop there, not pass through
        let p = BladeProfile::polynomial(&[-0.5, 0.0, 0.5], Interval::new(-1.0, 1.0).unwrap()).unwrap();
        let cfg = IntegratorConfig { t_end: 100.0, ..IntegratorConfig::default() };
        let tr = integrate_forward(&p, &frame(1.0), -0.5, &cfg).unwrap();
        assert_eq!(tr.termination, Termination::SlopeVanished);
        let last = tr.samples.last().unwrap();
        assert!(last.y.abs() < 1e-12, "stopped at {}", last.y);
        assert!(tr.samples.iter().all(|s| s.y >= -1e-12));
    }

    #[test]
    fn slope_vanished_at_start() {
        let p = BladeProfile::polynomial(&[2.0], Interval::new(0.0, 1.0).unwrap()).unwrap();
        let tr = integrate_forward(&p, &frame(1.0), -0.5, &IntegratorConfig::default()).unwrap();
        assert_eq!(tr.termination, Termination::SlopeVanished);
        assert_eq!(tr.samples.len(), 1);
    }

    #[test]
    fn step_limit() {
        let cfg = IntegratorConfig { max_steps: 5, ..IntegratorConfig::rk4(1e-3, 2.0) };
        let tr = integrate_forward(&line(), &frame(-1.0), -0.2, &cfg).unwrap();
        assert_eq!(tr.termination, Termination::StepLimit);
        assert_eq!(tr.samples.len(), 6);
    }

    #[test]
    fn input_errors() {
        let cfg = IntegratorConfig::default();
        assert_eq!(integrate_forward(&line(), &frame(-1.0), 0.0, &cfg), Err(Error::ZeroInitialRate));
        assert_eq!(integrate_forward(&line(), &frame(-1.0), 0.2, &cfg), Err(Error::DirectionMismatch));
        let far = FrameSpec::new(3.0, -1.0, Direction::Decreasing).unwrap();
        assert!(matches!(integrate_forward(&line(), &far, -0.2, &cfg), Err(Error::OutsideDomain { .. })));
        let bad = IntegratorConfig { max_steps: 0, ..cfg };
        assert!(integrate_forward(&line(), &frame(-1.0), -0.2, &bad).is_err());
    }

    #[test]
    fn drift_reports() {
        let tr = integrate_forward(&line(), &frame(-1.0), -0.2, &IntegratorConfig::rk4(1e-3, 2.0))
            .unwrap();
        assert!(conservation_report(&tr).unwrap().max_drift <= 1e-13);

        let tr = integrate_forward(&parabola(0.5), &frame(1.0), -0.5, &IntegratorConfig::rk4(1e-3, 10.0))
            .unwrap();
        assert!(conservation_report(&tr).unwrap().max_drift <= 1e-8);

        let one = Trajectory { samples: tr.samples[..1].to_vec(), termination: tr.termination, drift: 0.0 };
        assert_eq!(conservation_report(&one).unwrap(), DriftReport { max_drift: 0.0, index: 0 });
        let empty = Trajectory { samples: Vec::new(), termination: tr.termination, drift: 0.0 };
        assert_eq!(conservation_report(&empty), Err(Error::EmptyTrajectory));
    }
}
