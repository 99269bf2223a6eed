//! Blade profiles `X = F(Y)` and their evaluators.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::spline::{CubicSpline, EndCondition};

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidDomain { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, y: f64) -> bool {
        self.lo <= y && y <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.contains(other.lo) && self.contains(other.hi)
    }

    pub(crate) fn check(&self, y: f64) -> Result<()> {
        if self.contains(y) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { y, lo: self.lo, hi: self.hi })
        }
    }
}

/// `F`, `F_Y` and `F_YY` at one ordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileEval {
    pub f: f64,
    pub f_y: f64,
    pub f_yy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// `F(Y) = Σ cₖ Yᵏ`, constant term first.
    Polynomial { coeffs: Vec<f64> },
    /// Cubic spline through `(Y, F)` samples.
    CubicSpline(CubicSpline),
    /// `F(Y) = intercept + slope·Y`.
    Linear { intercept: f64, slope: f64 },
}

/// A twice-differentiable blade profile on a closed ordinate interval.
#[derive(Debug, Clone, PartialEq)]
pub struct BladeProfile {
    kind: ProfileKind,
    domain: Interval,
}

impl BladeProfile {
    pub fn polynomial(coeffs: &[f64], domain: Interval) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficient"));
        }
        Ok(Self { kind: ProfileKind::Polynomial { coeffs: coeffs.to_vec() }, domain })
    }

    pub fn linear(intercept: f64, slope: f64, domain: Interval) -> Result<Self> {
        if !intercept.is_finite() || !slope.is_finite() {
            return Err(Error::NonFinite("linear profile parameter"));
        }
        Ok(Self { kind: ProfileKind::Linear { intercept, slope }, domain })
    }

    /// Natural cubic spline through `(Y, F)` samples, which must lie inside
    /// `domain` with strictly increasing `Y`.
    pub fn spline(samples: &[(f64, f64)], domain: Interval) -> Result<Self> {
        Self::spline_with_ends(samples, domain, EndCondition::Natural)
    }

    /// Cubic spline with prescribed end slopes `F_Y` at the first and last sample.
    pub fn spline_clamped(
        samples: &[(f64, f64)],
        domain: Interval,
        start_slope: f64,
        end_slope: f64,
    ) -> Result<Self> {
        let ends = EndCondition::Clamped { start: start_slope, end: end_slope };
        Self::spline_with_ends(samples, domain, ends)
    }

    fn spline_with_ends(samples: &[(f64, f64)], domain: Interval, ends: EndCondition) -> Result<Self> {
        if let Some(&(y, _)) = samples.iter().find(|(y, _)| !domain.contains(*y)) {
            return Err(Error::SampleOutsideDomain { y });
        }
        let (ys, fs): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
        let spline = CubicSpline::new(&ys, &fs, ends)?;
        Ok(Self { kind: ProfileKind::CubicSpline(spline), domain })
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn eval(&self, y: f64) -> Result<ProfileEval> {
        self.domain.check(y)?;
        Ok(self.eval_extended(y))
    }

    /// Evaluates without the domain check; polynomials extend naturally and
    /// splines continue their end cubic. Used for integrator stages that may
    /// probe slightly past a boundary before an exit is localized.
    pub(crate) fn eval_extended(&self, y: f64) -> ProfileEval {
        match &self.kind {
            ProfileKind::Polynomial { coeffs } => horner(coeffs, y),
            ProfileKind::Linear { intercept, slope } => {
                ProfileEval { f: intercept + slope * y, f_y: *slope, f_yy: 0.0 }
            }
            ProfileKind::CubicSpline(s) => {
                let (f, f_y, f_yy) = s.eval(y);
                ProfileEval { f, f_y, f_yy }
            }
        }
    }
}

/// Value and first two derivatives of a polynomial in one pass.
fn horner(coeffs: &[f64], y: f64) -> ProfileEval {
    let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
    for &c in coeffs.iter().rev() {
        ddp = ddp * y + 2.0 * dp;
        dp = dp * y + p;
        p = p * y + c;
    }
    ProfileEval { f: p, f_y: dp, f_yy: ddp }
}
