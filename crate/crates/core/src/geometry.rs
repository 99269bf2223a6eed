//! Pointwise differential geometry and kinematics of a blade.
//!
//! With `tan α = −F_Y` the tangential and centripetal accelerations are
//! `a_t = v̇ (sin α, cos α)` and `a_c = v²/r_c (cos α, sin α)`, exactly as
//! written in the blade-equation derivation. Note that `(sin α, cos α)` is not
//! the velocity direction `(Ẋ, Ẏ)/v` in general; the components are kept
//! verbatim so the `X`-balance `Ẍ = a_t.x + a_c.x` can be checked directly.

use crate::error::{Error, Result};
use crate::profile::BladeProfile;
use crate::quadrature::adaptive_simpson;

/// Radius of curvature; a zero second derivative has no finite radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curvature {
    Radius(f64),
    Straight,
}

impl Curvature {
    pub fn radius(self) -> Option<f64> {
        match self {
            Curvature::Radius(r) => Some(r),
            Curvature::Straight => None,
        }
    }

    /// `1 / r_c`, zero for a straight point.
    pub fn inverse_radius(self) -> f64 {
        match self {
            Curvature::Radius(r) => 1.0 / r,
            Curvature::Straight => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySample {
    pub curvature: Curvature,
    /// Tangent angle, `tan α = −F_Y`, so `α ≥ 0` exactly when `F_Y ≤ 0`.
    pub alpha: f64,
    pub sin_alpha: f64,
    pub cos_alpha: f64,
}

pub fn geometry_sample(f_y: f64, f_yy: f64) -> Result<GeometrySample> {
    if !f_y.is_finite() || !f_yy.is_finite() {
        return Err(Error::NonFinite("slope or second derivative"));
    }
    let q = 1.0 + f_y * f_y;
    let root = libm::sqrt(q);
    let curvature = if f_yy == 0.0 {
        Curvature::Straight
    } else {
        Curvature::Radius(q * root / f_yy.abs())
    };
    Ok(GeometrySample {
        curvature,
        alpha: libm::atan(-f_y),
        sin_alpha: -f_y / root,
        cos_alpha: 1.0 / root,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicsSample {
    pub x_dot: f64,
    pub x_ddot: f64,
    /// Local speed, `v² = Ẋ² + Ẏ²`.
    pub v: f64,
    /// Rate of change of speed; zero when `at_rest`.
    pub v_dot: f64,
    pub a_t: [f64; 2],
    pub a_c: [f64; 2],
    /// `F_Y (1+F_Y²) Ÿ + F_Y² F_YY Ẏ²`
    pub x_residual: f64,
    /// `(1+F_Y²) Ÿ + F_Y F_YY Ẏ²`
    pub blade_residual: f64,
    /// `v = 0`: no tangential direction, `v̇` is reported as zero.
    pub at_rest: bool,
    pub geometry: GeometrySample,
}

pub fn kinematics_sample(
    profile: &BladeProfile,
    y: f64,
    y_dot: f64,
    y_ddot: f64,
) -> Result<KinematicsSample> {
    if !y_dot.is_finite() || !y_ddot.is_finite() {
        return Err(Error::NonFinite("ordinate rate or acceleration"));
    }
    let e = profile.eval(y)?;
    let geometry = geometry_sample(e.f_y, e.f_yy)?;
    let (f_y, f_yy) = (e.f_y, e.f_yy);
    let q = 1.0 + f_y * f_y;

    let x_dot = f_y * y_dot;
    let x_ddot = f_yy * y_dot * y_dot + f_y * y_ddot;
    let v = libm::sqrt(x_dot * x_dot + y_dot * y_dot);
    let at_rest = v == 0.0;
    let v_dot = if at_rest {
        0.0
    } else {
        (f_y * f_yy * y_dot * y_dot * y_dot + q * y_dot * y_ddot) / v
    };
    let a_t = [v_dot * geometry.sin_alpha, v_dot * geometry.cos_alpha];
    let centripetal = v * v * geometry.curvature.inverse_radius();
    let a_c = [centripetal * geometry.cos_alpha, centripetal * geometry.sin_alpha];

    let blade_residual = q * y_ddot + f_y * f_yy * y_dot * y_dot;
    let x_residual = f_y * blade_residual;

    Ok(KinematicsSample { x_dot, x_ddot, v, v_dot, a_t, a_c, x_residual, blade_residual, at_rest, geometry })
}

/// Signed arc length `∫ √(1+F_Y²) dY` from `y1` to `y2`.
pub fn arc_length(profile: &BladeProfile, y1: f64, y2: f64, tol: f64) -> Result<f64> {
    let domain = profile.domain();
    domain.check(y1)?;
    domain.check(y2)?;
    adaptive_simpson(
        |y| {
            let s = profile.eval_extended(y).f_y;
            Ok::<_, Error>(libm::sqrt(1.0 + s * s))
        },
        y1,
        y2,
        tol,
    )
}
