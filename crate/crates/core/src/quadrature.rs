//! Adaptive Simpson quadrature.

use crate::error::Error;

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` (signed: `b < a` flips the sign) by recursive
/// interval bisection until each panel's Simpson error estimate is below its
/// share of `tol`.
pub fn adaptive_simpson<F, E>(mut f: F, a: f64, b: f64, tol: f64) -> core::result::Result<f64, E>
where
    F: FnMut(f64) -> core::result::Result<f64, E>,
    E: From<Error>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("quadrature tolerance must be positive").into());
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = simpson(a, b, fa, fm, fb);
    refine(&mut f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F, E>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> core::result::Result<f64, E>
where
    F: FnMut(f64) -> core::result::Result<f64, E>,
    E: From<Error>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 || !delta.is_finite() {
        return Err(Error::QuadratureNotConverged { a, b }.into());
    }
    let l = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}
