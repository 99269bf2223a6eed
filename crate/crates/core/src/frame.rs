//! The local blade frame and inlet anchoring checks.

use crate::error::{Error, Result};
use crate::profile::BladeProfile;

/// Direction the flow traverses the ordinate axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// `Ẏ > 0`
    Increasing,
    /// `Ẏ < 0`: from the inlet toward smaller `Y`
    #[default]
    Decreasing,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        }
    }

    pub fn from_sign(sign: f64) -> Result<Self> {
        if sign == 1.0 {
            Ok(Direction::Increasing)
        } else if sign == -1.0 {
            Ok(Direction::Decreasing)
        } else {
            Err(Error::InvalidParameter("sigma must be +1 or -1"))
        }
    }
}

/// Inlet ordinate `b`, inlet slope `m0` and traversal direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSpec {
    b: f64,
    m0: f64,
    sigma: Direction,
}

impl FrameSpec {
    pub fn new(b: f64, m0: f64, sigma: Direction) -> Result<Self> {
        if !b.is_finite() || !m0.is_finite() {
            return Err(Error::NonFinite("frame parameter"));
        }
        if b <= 0.0 {
            return Err(Error::InvalidParameter("inlet ordinate b must be positive"));
        }
        // the inverse equation divides by F_Y, so a flat inlet is singular
        if m0 == 0.0 {
            return Err(Error::InvalidParameter("inlet slope m0 must be nonzero"));
        }
        Ok(Self { b, m0, sigma })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn sigma(&self) -> Direction {
        self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchorReport {
    /// `F(b)`
    pub value_residual: f64,
    /// `F_Y(b) - m0`
    pub slope_residual: f64,
    pub passed: bool,
}

/// Checks the inlet conditions `F(b) = 0` and `F_Y(b) = m0`.
pub fn anchor_check(profile: &BladeProfile, frame: &FrameSpec, tol: f64) -> Result<AnchorReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    let e = profile.eval(frame.b)?;
    let value_residual = e.f;
    let slope_residual = e.f_y - frame.m0;
    let passed = value_residual.abs() <= tol && slope_residual.abs() <= tol;
    Ok(AnchorReport { value_residual, slope_residual, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Interval;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn frame_invariants() {
        assert!(FrameSpec::new(1.0, -1.0, Direction::default()).is_ok());
        assert!(FrameSpec::new(0.0, -1.0, Direction::Decreasing).is_err());
        assert!(FrameSpec::new(1.0, 0.0, Direction::Decreasing).is_err());
        assert!(FrameSpec::new(f64::NAN, 1.0, Direction::Decreasing).is_err());
        assert_eq!(Direction::default().sign(), -1.0);
        assert!(Direction::from_sign(0.5).is_err());
    }

    #[test]
    fn anchored_line() {
        let p = BladeProfile::polynomial(&[1.0, -1.0], unit()).unwrap();
        let f = FrameSpec::new(1.0, -1.0, Direction::Decreasing).unwrap();
        let r = anchor_check(&p, &f, 1e-9).unwrap();
        assert!(r.passed);
        assert_eq!((r.value_residual, r.slope_residual), (0.0, 0.0));
    }

    #[test]
    fn unanchored_line() {
        let p = BladeProfile::polynomial(&[0.0, 1.0], unit()).unwrap();
        let f = FrameSpec::new(1.0, 1.0, Direction::Decreasing).unwrap();
        let r = anchor_check(&p, &f, 1e-9).unwrap();
        assert!(!r.passed);
        assert_eq!(r.value_residual, 1.0);
    }

    #[test]
    fn anchored_parabola() {
        let p = BladeProfile::polynomial(&[-0.5, 0.0, 0.5], unit()).unwrap();
        let f = FrameSpec::new(1.0, 1.0, Direction::Decreasing).unwrap();
        assert!(anchor_check(&p, &f, 1e-9).unwrap().passed);
    }

    #[test]
    fn inlet_outside_profile() {
        let p = BladeProfile::polynomial(&[1.0], unit()).unwrap();
        let f = FrameSpec::new(2.0, 1.0, Direction::Decreasing).unwrap();
        assert!(matches!(anchor_check(&p, &f, 1e-9), Err(Error::OutsideDomain { .. })));
    }
}
