//! Solvers for the centrifugal-fan blade equation
//!
//! A blade is the graph `X = F(Y)` in a frame local to the blade, with the
//! inlet at `(0, b)`. Fluid moving tangentially along the concave side obeys
//!
//! ```text
//! (1 + F_Y²) Ÿ + F_Y F_YY Ẏ² = 0
//! ```
//!
//! which is used in two directions:
//!
//! * [`dynamics`]: the profile is given and the motion `Y(t)` is integrated;
//! * [`inverse`]: a speed law `Ẏ = g(Y)` is prescribed and the profile
//!   satisfying `F(b) = 0`, `F_Y(b) = m₀` is recovered.
//!
//! [`geometry`] carries the pointwise curvature/kinematics identities the
//! equation is built from. The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![deny(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod error;
pub mod frame;
pub mod geometry;
pub mod inverse;
pub mod ode;
pub mod profile;
pub mod quadrature;
pub mod speed;
pub mod spline;

pub use dynamics::{
    conservation_report, forward_rhs, integrate_forward, DriftReport, IntegratorConfig, Method,
    MotionState, Termination, Trajectory, TrajectorySample,
};
pub use error::{Error, Result};
pub use frame::{anchor_check, AnchorReport, Direction, FrameSpec};
pub use geometry::{
    arc_length, geometry_sample, kinematics_sample, Curvature, GeometrySample, KinematicsSample,
};
pub use inverse::{
    check_linear_theorem, first_integral_constant, round_trip_check, slope_from_first_integral,
    solve_inverse, InverseMethod, InverseSpec, ProfileSample, ProfileSolution, RoundTripReport,
    SlopeAt, SolutionStatus, TheoremInput, TheoremVerdict,
};
pub use profile::{BladeProfile, Interval, ProfileEval, ProfileKind};
pub use speed::{SpeedEval, SpeedLaw, SpeedLawKind};
