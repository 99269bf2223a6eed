//! One-step integrators for two-component first-order systems.
//!
//! Both the forward motion `(Y, Ẏ)(t)` and the inverse shape `(F, F_Y)(Y)`
//! are second-order scalar equations written as `y' = f(x, y)` with
//! `y ∈ ℝ²`. Steps may go in either direction of `x`.

use crate::error::{Error, Result};

pub type State = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Classical fourth-order Runge–Kutta with a fixed step.
    Rk4,
    /// Runge–Kutta–Fehlberg 4(5) with embedded error control; the
    /// fifth-order solution is propagated.
    #[default]
    Rkf45,
}

#[inline]
fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

pub fn rk4_step<F>(f: &mut F, x: f64, y: &State, h: f64) -> Result<State>
where
    F: FnMut(f64, &State) -> Result<State>,
{
    let k1 = f(x, y)?;
    let k2 = f(x + 0.5 * h, &axpy(y, h, &[(0.5, &k1)]))?;
    let k3 = f(x + 0.5 * h, &axpy(y, h, &[(0.5, &k2)]))?;
    let k4 = f(x + h, &axpy(y, h, &[(1.0, &k3)]))?;
    Ok(axpy(y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]))
}

/// One Fehlberg step: the fifth-order solution and the difference between
/// the fifth- and fourth-order solutions.
pub fn rkf45_step<F>(f: &mut F, x: f64, y: &State, h: f64) -> Result<(State, State)>
where
    F: FnMut(f64, &State) -> Result<State>,
{
    let k1 = f(x, y)?;
    let k2 = f(x + h / 4.0, &axpy(y, h, &[(1.0 / 4.0, &k1)]))?;
    let k3 = f(x + 3.0 * h / 8.0, &axpy(y, h, &[(3.0 / 32.0, &k1), (9.0 / 32.0, &k2)]))?;
    let k4 = f(
        x + 12.0 * h / 13.0,
        &axpy(y, h, &[(1932.0 / 2197.0, &k1), (-7200.0 / 2197.0, &k2), (7296.0 / 2197.0, &k3)]),
    )?;
    let k5 = f(
        x + h,
        &axpy(
            y,
            h,
            &[(439.0 / 216.0, &k1), (-8.0, &k2), (3680.0 / 513.0, &k3), (-845.0 / 4104.0, &k4)],
        ),
    )?;
    let k6 = f(
        x + h / 2.0,
        &axpy(
            y,
            h,
            &[
                (-8.0 / 27.0, &k1),
                (2.0, &k2),
                (-3544.0 / 2565.0, &k3),
                (1859.0 / 4104.0, &k4),
                (-11.0 / 40.0, &k5),
            ],
        ),
    )?;
    let high = axpy(
        y,
        h,
        &[
            (16.0 / 135.0, &k1),
            (6656.0 / 12825.0, &k3),
            (28561.0 / 56430.0, &k4),
            (-9.0 / 50.0, &k5),
            (2.0 / 55.0, &k6),
        ],
    );
    let err = axpy(
        &[0.0, 0.0],
        h,
        &[
            (1.0 / 360.0, &k1),
            (-128.0 / 4275.0, &k3),
            (-2197.0 / 75240.0, &k4),
            (1.0 / 50.0, &k5),
            (2.0 / 55.0, &k6),
        ],
    );
    Ok((high, err))
}

const SAFETY: f64 = 0.9;
const MIN_SHRINK: f64 = 0.2;
const MAX_GROW: f64 = 5.0;
const MAX_REJECTS: u32 = 200;

/// Step-size state carried between accepted steps.
#[derive(Debug, Clone)]
pub struct Stepper {
    method: Method,
    dt: f64,
    rel_tol: f64,
    abs_tol: f64,
    /// Magnitude of the next adaptive step; zero until the first step.
    h_next: f64,
    rejected: u64,
}

impl Stepper {
    pub fn new(method: Method, dt: f64, rel_tol: f64, abs_tol: f64) -> Result<Self> {
        match method {
            Method::Rk4 if !(dt > 0.0 && dt.is_finite()) => {
                return Err(Error::InvalidParameter("dt must be positive"))
            }
            Method::Rkf45 if !(rel_tol > 0.0 && abs_tol > 0.0) => {
                return Err(Error::InvalidParameter("tolerances must be positive"))
            }
            _ => {}
        }
        Ok(Self { method, dt, rel_tol, abs_tol, h_next: 0.0, rejected: 0 })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn rejected_steps(&self) -> u64 {
        self.rejected
    }

    /// Takes one accepted step from `x` toward `x_limit`, never passing it.
    pub fn advance<F>(&mut self, f: &mut F, x: f64, y: &State, x_limit: f64) -> Result<(f64, State)>
    where
        F: FnMut(f64, &State) -> Result<State>,
    {
        let span = x_limit - x;
        if span == 0.0 {
            return Ok((x, *y));
        }
        let dir = span.signum();
        match self.method {
            Method::Rk4 => {
                // absorb a remainder within round-off of dt into this step
                let h = if span.abs() <= self.dt * (1.0 + 1e-9) { span } else { dir * self.dt };
                let y1 = rk4_step(f, x, y, h)?;
                let x1 = if h == span { x_limit } else { x + h };
                Ok((x1, y1))
            }
            Method::Rkf45 => self.advance_adaptive(f, x, y, x_limit, span, dir),
        }
    }

    fn advance_adaptive<F>(
        &mut self,
        f: &mut F,
        x: f64,
        y: &State,
        x_limit: f64,
        span: f64,
        dir: f64,
    ) -> Result<(f64, State)>
    where
        F: FnMut(f64, &State) -> Result<State>,
    {
        if self.h_next == 0.0 {
            self.h_next = self.initial_step(f, x, y)?;
        }
        let h_min = 1e-14 * x.abs().max(span.abs()).max(1e-300);
        for _ in 0..MAX_REJECTS {
            let clipped = self.h_next >= span.abs();
            let h = if clipped { span } else { dir * self.h_next };
            let (y1, err) = rkf45_step(f, x, y, h)?;
            let ratio = self.error_ratio(y, &y1, &err);
            if ratio <= 1.0 {
                let grow = if ratio == 0.0 {
                    MAX_GROW
                } else {
                    (SAFETY * libm::pow(ratio, -0.2)).clamp(MIN_SHRINK, MAX_GROW)
                };
                // a step shortened to land on x_limit says little about the next size
                self.h_next = if clipped { self.h_next.max(h.abs() * grow) } else { h.abs() * grow };
                let x1 = if clipped { x_limit } else { x + h };
                return Ok((x1, y1));
            }
            self.rejected += 1;
            let shrink = if ratio.is_finite() {
                (SAFETY * libm::pow(ratio, -0.25)).clamp(MIN_SHRINK, 1.0)
            } else {
                MIN_SHRINK
            };
            self.h_next = h.abs() * shrink;
            if self.h_next < h_min {
                return Err(Error::StepSizeUnderflow { at: x });
            }
        }
        Err(Error::StepSizeUnderflow { at: x })
    }

    /// A single raw step of exactly `h`, without error control.
    pub fn single<F>(&self, f: &mut F, x: f64, y: &State, h: f64) -> Result<State>
    where
        F: FnMut(f64, &State) -> Result<State>,
    {
        match self.method {
            Method::Rk4 => rk4_step(f, x, y, h),
            Method::Rkf45 => rkf45_step(f, x, y, h).map(|(y1, _)| y1),
        }
    }

    fn error_ratio(&self, y0: &State, y1: &State, err: &State) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            let scale = self.abs_tol + self.rel_tol * y0[i].abs().max(y1[i].abs());
            let r = err[i].abs() / scale;
            if !r.is_finite() {
                return f64::INFINITY;
            }
            worst = worst.max(r);
        }
        worst
    }

    fn initial_step<F>(&self, f: &mut F, x: f64, y: &State) -> Result<f64>
    where
        F: FnMut(f64, &State) -> Result<State>,
    {
        let dy = f(x, y)?;
        let mut d0: f64 = 0.0;
        let mut d1: f64 = 0.0;
        for i in 0..2 {
            let scale = self.abs_tol + self.rel_tol * y[i].abs();
            d0 = d0.max(y[i].abs() / scale);
            d1 = d1.max(dy[i].abs() / scale);
        }
        Ok(if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // y'' = -y, y(0) = 0, y'(0) = 1 → y = sin x
    fn oscillator(_x: f64, y: &State) -> Result<State> {
        Ok([y[1], -y[0]])
    }

    fn run(mut stepper: Stepper, x_end: f64) -> (State, usize) {
        let (mut x, mut y, mut n) = (0.0, [0.0, 1.0], 0);
        while x != x_end {
            let (x1, y1) = stepper.advance(&mut oscillator, x, &y, x_end).unwrap();
            assert!((x1 - x) * (x_end - x) > 0.0);
            x = x1;
            y = y1;
            n += 1;
        }
        (y, n)
    }

    #[test]
    fn rk4_lands_on_limit() {
        let (y, n) = run(Stepper::new(Method::Rk4, 0.01, 0.0, 0.0).unwrap(), 1.0);
        assert_eq!(n, 100);
        assert!((y[0] - libm::sin(1.0)).abs() < 1e-9);
    }

    #[test]
    fn rkf45_meets_tolerance() {
        let (y, _) = run(Stepper::new(Method::Rkf45, 0.0, 1e-10, 1e-12).unwrap(), 10.0);
        assert!((y[0] - libm::sin(10.0)).abs() < 1e-8);
        assert!((y[1] - libm::cos(10.0)).abs() < 1e-8);
    }

    #[test]
    fn backward_steps() {
        let mut s = Stepper::new(Method::Rkf45, 0.0, 1e-10, 1e-12).unwrap();
        let (mut x, mut y) = (0.0, [0.0, 1.0]);
        while x != -2.0 {
            (x, y) = s.advance(&mut oscillator, x, &y, -2.0).unwrap();
        }
        assert!((y[0] - libm::sin(-2.0)).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(Stepper::new(Method::Rk4, 0.0, 1e-9, 1e-9).is_err());
        assert!(Stepper::new(Method::Rkf45, 1.0, 0.0, 1e-9).is_err());
    }
}
