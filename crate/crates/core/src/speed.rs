//! Prescribed speed laws `|Ẏ| = γ(Y)`.
//!
//! Only the magnitude is stored; the direction of travel lives in
//! [`FrameSpec`](crate::FrameSpec).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::profile::Interval;
use crate::spline::CubicSpline;

#[derive(Debug, Clone, PartialEq)]
pub enum SpeedLawKind {
    /// `γ = value`
    Constant { value: f64 },
    /// `γ = a0 + a1·Y`
    Affine { a0: f64, a1: f64 },
    /// `γ = coeff·Y^exponent`, domain strictly positive
    Power { coeff: f64, exponent: f64 },
    /// `γ = coeff·exp(rate·Y)`
    Exponential { coeff: f64, rate: f64 },
    /// natural cubic spline through `(Y, γ)` samples
    Tabulated(CubicSpline),
}

/// `γ` and `γ_Y` at one ordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedEval {
    pub gamma: f64,
    pub gamma_y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedLaw {
    kind: SpeedLawKind,
    domain: Interval,
}

fn finite(values: &[f64], what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

impl SpeedLaw {
    pub fn constant(value: f64, domain: Interval) -> Result<Self> {
        finite(&[value], "speed law parameter")?;
        if value <= 0.0 {
            return Err(Error::NonPositiveSpeed { y: domain.lo(), value });
        }
        Ok(Self { kind: SpeedLawKind::Constant { value }, domain })
    }

    pub fn affine(a0: f64, a1: f64, domain: Interval) -> Result<Self> {
        finite(&[a0, a1], "speed law parameter")?;
        // affine: the minimum sits at an endpoint
        for y in [domain.lo(), domain.hi()] {
            let value = a0 + a1 * y;
            if value <= 0.0 {
                return Err(Error::NonPositiveSpeed { y, value });
            }
        }
        Ok(Self { kind: SpeedLawKind::Affine { a0, a1 }, domain })
    }

    pub fn power(coeff: f64, exponent: f64, domain: Interval) -> Result<Self> {
        finite(&[coeff, exponent], "speed law parameter")?;
        if coeff <= 0.0 {
            return Err(Error::NonPositiveSpeed { y: domain.lo(), value: coeff });
        }
        if domain.lo() <= 0.0 {
            return Err(Error::InvalidParameter("power law needs a strictly positive domain"));
        }
        Ok(Self { kind: SpeedLawKind::Power { coeff, exponent }, domain })
    }

    pub fn exponential(coeff: f64, rate: f64, domain: Interval) -> Result<Self> {
        finite(&[coeff, rate], "speed law parameter")?;
        if coeff <= 0.0 {
            return Err(Error::NonPositiveSpeed { y: domain.lo(), value: coeff });
        }
        Ok(Self { kind: SpeedLawKind::Exponential { coeff, rate }, domain })
    }

    /// Natural cubic spline through `(Y, γ)`; every sample must be positive.
    /// Dips of the interpolant below zero are caught at evaluation time.
    pub fn tabulated(samples: &[(f64, f64)], domain: Interval) -> Result<Self> {
        if let Some(&(y, _)) = samples.iter().find(|(y, _)| !domain.contains(*y)) {
            return Err(Error::SampleOutsideDomain { y });
        }
        if let Some(&(y, value)) = samples.iter().find(|(_, g)| !(*g > 0.0)) {
            return Err(Error::NonPositiveSpeed { y, value });
        }
        let (ys, gs): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
        let spline = CubicSpline::natural(&ys, &gs)?;
        Ok(Self { kind: SpeedLawKind::Tabulated(spline), domain })
    }

    pub fn kind(&self) -> &SpeedLawKind {
        &self.kind
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// The same law multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidParameter("scale factor must be positive"));
        }
        let d = self.domain;
        match &self.kind {
            SpeedLawKind::Constant { value } => Self::constant(k * value, d),
            SpeedLawKind::Affine { a0, a1 } => Self::affine(k * a0, k * a1, d),
            SpeedLawKind::Power { coeff, exponent } => Self::power(k * coeff, *exponent, d),
            SpeedLawKind::Exponential { coeff, rate } => Self::exponential(k * coeff, *rate, d),
            SpeedLawKind::Tabulated(s) => {
                let samples: Vec<(f64, f64)> =
                    s.knots().iter().zip(s.values()).map(|(&y, &g)| (y, k * g)).collect();
                Self::tabulated(&samples, d)
            }
        }
    }

    pub fn eval(&self, y: f64) -> Result<SpeedEval> {
        self.domain.check(y)?;
        let (gamma, gamma_y) = match &self.kind {
            SpeedLawKind::Constant { value } => (*value, 0.0),
            SpeedLawKind::Affine { a0, a1 } => (a0 + a1 * y, *a1),
            SpeedLawKind::Power { coeff, exponent } => {
                let g = coeff * libm::pow(y, *exponent);
                (g, exponent * g / y)
            }
            SpeedLawKind::Exponential { coeff, rate } => {
                let g = coeff * libm::exp(rate * y);
                (g, rate * g)
            }
            SpeedLawKind::Tabulated(s) => {
                let (g, dg, _) = s.eval(y);
                if !(g > 0.0) {
                    return Err(Error::NonPositiveSpeed { y, value: g });
                }
                (g, dg)
            }
        };
        Ok(SpeedEval { gamma, gamma_y })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dom(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn parametric_examples() {
        let affine = SpeedLaw::affine(0.1, 0.2, dom(0.0, 2.0)).unwrap();
        let e = affine.eval(1.0).unwrap();
        assert!((e.gamma - 0.3).abs() < 1e-15);
        assert_eq!(e.gamma_y, 0.2);

        let constant = SpeedLaw::constant(0.5, dom(-3.0, 3.0)).unwrap();
        for y in [-3.0, 0.0, 2.5] {
            assert_eq!(constant.eval(y).unwrap(), SpeedEval { gamma: 0.5, gamma_y: 0.0 });
        }

        let power = SpeedLaw::power(1.0, 2.0, dom(0.5, 3.0)).unwrap();
        assert_eq!(power.eval(2.0).unwrap(), SpeedEval { gamma: 4.0, gamma_y: 4.0 });
    }

    #[test]
    fn rejects_non_positive_laws() {
        assert!(matches!(SpeedLaw::constant(0.0, dom(0.0, 1.0)), Err(Error::NonPositiveSpeed { .. })));
        assert!(matches!(SpeedLaw::affine(0.1, -0.2, dom(0.0, 1.0)), Err(Error::NonPositiveSpeed { .. })));
        assert!(matches!(SpeedLaw::power(1.0, 2.0, dom(0.0, 1.0)), Err(Error::InvalidParameter(_))));
        assert!(matches!(SpeedLaw::exponential(-1.0, 2.0, dom(0.0, 1.0)), Err(Error::NonPositiveSpeed { .. })));
        let bad = [(0.0, 1.0), (0.3, 0.0), (0.6, 1.0), (1.0, 1.0)];
        assert!(matches!(SpeedLaw::tabulated(&bad, dom(0.0, 1.0)), Err(Error::NonPositiveSpeed { .. })));
    }

    #[test]
    fn tabulated_dip_is_caught_on_eval() {
        // positive knots, but the interpolant overshoots below zero between them
        let samples = [(0.0, 5.0), (0.1, 0.01), (0.2, 0.01), (0.3, 5.0)];
        let law = SpeedLaw::tabulated(&samples, dom(0.0, 0.3)).unwrap();
        let dipped = (0..=300)
            .map(|k| law.eval(k as f64 * 0.001))
            .any(|r| matches!(r, Err(Error::NonPositiveSpeed { .. })));
        assert!(dipped);
    }

    #[test]
    fn eval_outside_domain() {
        let law = SpeedLaw::constant(1.0, dom(0.0, 1.0)).unwrap();
        assert!(matches!(law.eval(1.5), Err(Error::OutsideDomain { .. })));
    }

    proptest! {
        #[test]
        fn derivative_matches_finite_differences(
            a in 0.1f64..2.0, b in -1.0f64..1.0, y in 0.6f64..1.9,
        ) {
            let d = dom(0.5, 2.0);
            let laws = [
                SpeedLaw::affine(a + 3.0, b, d).unwrap(),
                SpeedLaw::power(a, b * 3.0, d).unwrap(),
                SpeedLaw::exponential(a, b, d).unwrap(),
            ];
            let h = 1e-6;
            for law in &laws {
                let e = law.eval(y).unwrap();
                let fd = (law.eval(y + h).unwrap().gamma - law.eval(y - h).unwrap().gamma) / (2.0 * h);
                prop_assert!((fd - e.gamma_y).abs() <= 1e-6 * e.gamma_y.abs().max(1.0));
            }
        }
    }
}
