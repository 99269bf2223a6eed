//! The invariant suite behind `bladeprof check`.

use bladeprof_core::*;

use crate::csv::{profile_from_csv, CsvData};
use crate::svg::{render_svg, BladeShape, RenderOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<String, String>;

const CHECKS: &[(&str, Check)] = &[
    ("anchor conditions", anchors),
    ("curvature and tangent-angle identities", trig_identities),
    ("speed first integral along the parabola", speed_first_integral),
    ("linear blades move uniformly", linear_blade),
    ("inverse methods agree", inverse_equivalence),
    ("inverse residual on parametric laws", inverse_residuals),
    ("inverse/forward round trip", round_trip),
    ("rk4 fourth-order convergence", rk4_order),
    ("deterministic CSV and SVG output", determinism),
];

pub fn run_checks() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| match check() {
            Ok(detail) => CheckOutcome { name, passed: true, detail },
            Err(detail) => CheckOutcome { name, passed: false, detail },
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dom(lo: f64, hi: f64) -> Result<Interval, String> {
    Interval::new(lo, hi).map_err(|e| e.to_string())
}

fn frame(b: f64, m0: f64) -> Result<FrameSpec, String> {
    FrameSpec::new(b, m0, Direction::Decreasing).map_err(|e| e.to_string())
}

fn anchors() -> Result<String, String> {
    let err = |e: Error| e.to_string();
    let line = BladeProfile::polynomial(&[1.0, -1.0], dom(0.0, 1.0)?).map_err(err)?;
    let parabola = BladeProfile::polynomial(&[-0.5, 0.0, 0.5], dom(0.0, 1.0)?).map_err(err)?;
    let ident = BladeProfile::polynomial(&[0.0, 1.0], dom(0.0, 1.0)?).map_err(err)?;
    let a = anchor_check(&line, &frame(1.0, -1.0)?, 1e-9).map_err(err)?;
    let b = anchor_check(&parabola, &frame(1.0, 1.0)?, 1e-9).map_err(err)?;
    let c = anchor_check(&ident, &frame(1.0, 1.0)?, 1e-9).map_err(err)?;
    ensure(a.passed && b.passed && !c.passed && c.value_residual == 1.0, || format!("{a:?} {b:?} {c:?}"))?;
    Ok("3 frames".into())
}

fn trig_identities() -> Result<String, String> {
    for k in 0..1000 {
        let f_y = (-1.55 + 3.1 * k as f64 / 999.0).tan();
        let g = geometry_sample(f_y, 1.0).map_err(|e| e.to_string())?;
        let unit = (g.sin_alpha * g.sin_alpha + g.cos_alpha * g.cos_alpha - 1.0).abs();
        let tan = (g.alpha.tan() + f_y).abs() / f_y.abs().max(1.0);
        ensure(unit <= 1e-12 && tan <= 1e-10 && (g.alpha >= 0.0) == (f_y <= 0.0), || {
            format!("slope {f_y}: |sin²+cos²−1| = {unit:e}, tan error {tan:e}")
        })?;
    }
    let radius = 2.0f64;
    for k in 0..=30 {
        let y = -1.5 + 0.1 * k as f64;
        let s = (radius * radius - y * y).sqrt();
        let g = geometry_sample(y / s, radius * radius / (s * s * s)).map_err(|e| e.to_string())?;
        let r = g.curvature.radius().unwrap_or(f64::INFINITY);
        ensure(((r - radius) / radius).abs() <= 1e-8, || format!("circle radius {r} at Y={y}"))?;
    }
    Ok("1000 slopes, 31 circle points".into())
}

fn speed_first_integral() -> Result<String, String> {
    let p = BladeProfile::polynomial(&[-0.5, 0.0, 0.5], dom(0.5, 1.0)?).map_err(|e| e.to_string())?;
    let tr = integrate_forward(&p, &frame(1.0, 1.0)?, -0.5, &IntegratorConfig::default())
        .map_err(|e| e.to_string())?;
    let end = tr.samples.last().map(|s| s.y_dot.abs()).unwrap_or(0.0);
    ensure(tr.drift <= 1e-8, || format!("drift {:e}", tr.drift))?;
    ensure((end - 0.4f64.sqrt()).abs() <= 1e-6, || format!("end |Ydot| {end}"))?;
    Ok(format!("drift {:e}, end |Ydot| {end:.9}", tr.drift))
}

fn linear_blade() -> Result<String, String> {
    let err = |e: Error| e.to_string();
    let line = BladeProfile::polynomial(&[1.0, -1.0], dom(0.0, 1.0)?).map_err(err)?;
    let v = check_linear_theorem(
        TheoremInput::Profile { profile: &line, w0: -0.2 },
        &frame(1.0, -1.0)?,
        &IntegratorConfig::rk4(1e-3, 2.0),
    )
    .map_err(err)?;
    ensure(v.holds && v.constant_speed && v.x_affine == Some(true), || format!("{v:?}"))?;
    let law = SpeedLaw::constant(0.5, dom(0.5, 1.0)?).map_err(err)?;
    let v = check_linear_theorem(TheoremInput::Law { law: &law, y_end: 0.5 }, &frame(1.0, -1.0)?, &IntegratorConfig::default())
        .map_err(err)?;
    ensure(v.holds && v.zero_curvature, || format!("{v:?}"))?;
    Ok("profile and law directions".into())
}

fn identity_solutions() -> Result<(ProfileSolution, ProfileSolution), String> {
    let err = |e: Error| e.to_string();
    let law = SpeedLaw::power(1.0, 1.0, dom(0.5, 1.0)?).map_err(err)?;
    let spec = |m| InverseSpec::new(law.clone(), frame(1.0, -1.0).expect("valid frame"), 0.5, m);
    Ok((
        solve_inverse(&spec(InverseMethod::Reduction)).map_err(err)?,
        solve_inverse(&spec(InverseMethod::Ode)).map_err(err)?,
    ))
}

fn inverse_equivalence() -> Result<String, String> {
    let (red, ode) = identity_solutions()?;
    let mut df: f64 = 0.0;
    let mut ds: f64 = 0.0;
    for (a, b) in red.samples.iter().zip(&ode.samples) {
        df = df.max((a.f - b.f).abs());
        ds = ds.max((a.f_y - b.f_y).abs());
    }
    ensure(red.samples.len() == ode.samples.len() && df <= 1e-8 && ds <= 1e-8, || {
        format!("max |dF| {df:e}, max |dF_Y| {ds:e}")
    })?;
    Ok(format!("max |dF| {df:e}, max |dF_Y| {ds:e}"))
}

fn inverse_residuals() -> Result<String, String> {
    let err = |e: Error| e.to_string();
    let d = dom(0.5, 1.0)?;
    let laws = [
        SpeedLaw::constant(0.5, d).map_err(err)?,
        SpeedLaw::affine(0.1, 0.2, d).map_err(err)?,
        SpeedLaw::power(1.0, 1.0, d).map_err(err)?,
    ];
    let mut worst: f64 = 0.0;
    for law in &laws {
        for m in [InverseMethod::Reduction, InverseMethod::Ode] {
            let sol = solve_inverse(&InverseSpec::new(law.clone(), frame(1.0, -1.0)?, 0.5, m)).map_err(err)?;
            worst = worst.max(sol.max_residual);
        }
    }
    ensure(worst <= 1e-8, || format!("residual {worst:e}"))?;
    Ok(format!("max residual {worst:e}"))
}

fn round_trip() -> Result<String, String> {
    let err = |e: Error| e.to_string();
    let law = SpeedLaw::power(1.0, 1.0, dom(0.5, 1.0)?).map_err(err)?;
    let r = round_trip_check(&law, &frame(1.0, -1.0)?, 0.5, &IntegratorConfig::default()).map_err(err)?;
    ensure(r.max_rel_error <= 1e-6, || format!("{r:?}"))?;
    Ok(format!("max relative error {:e}", r.max_rel_error))
}

fn rk4_order() -> Result<String, String> {
    let err = |e: Error| e.to_string();
    let p = BladeProfile::polynomial(&[-0.5, 0.0, 0.5], dom(0.3, 1.0)?).map_err(err)?;
    let fr = frame(1.0, 1.0)?;
    let end = |cfg: IntegratorConfig| -> Result<f64, String> {
        let tr = integrate_forward(&p, &fr, -0.5, &cfg).map_err(err)?;
        tr.samples.last().map(|s| s.y).ok_or_else(|| "empty trajectory".to_string())
    };
    let reference = end(IntegratorConfig { t_end: 1.0, rel_tol: 1e-13, abs_tol: 1e-15, ..Default::default() })?;
    let coarse = (end(IntegratorConfig::rk4(0.1, 1.0))? - reference).abs();
    let fine = (end(IntegratorConfig::rk4(0.05, 1.0))? - reference).abs();
    let ratio = coarse / fine;
    ensure((12.0..=20.0).contains(&ratio), || format!("ratio {ratio}"))?;
    Ok(format!("error ratio {ratio:.3}"))
}

fn determinism() -> Result<String, String> {
    let (red, _) = identity_solutions()?;
    let a = CsvData::Profile(&red).render().map_err(|e| e.to_string())?;
    let b = CsvData::Profile(&red).render().map_err(|e| e.to_string())?;
    let opts = RenderOptions { blades: 12, ..Default::default() };
    let s1 = render_svg(BladeShape::Solution(&red), &opts).map_err(|e| e.to_string())?;
    let s2 = render_svg(BladeShape::Solution(&red), &opts).map_err(|e| e.to_string())?;
    ensure(a == b && s1 == s2, || "outputs differ between identical runs".into())?;
    let p = profile_from_csv(&a).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for s in &red.samples {
        worst = worst.max((p.eval(s.y).map_err(|e| e.to_string())?.f - s.f).abs());
    }
    ensure(worst <= 1e-12, || format!("CSV round trip error {worst:e}"))?;
    Ok(format!("CSV round trip error {worst:e}"))
}
