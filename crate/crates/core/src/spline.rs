//! Interpolating cubic splines with value, slope and curvature evaluation.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Condition imposed at the two end knots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndCondition {
    /// Zero second derivative at both ends.
    Natural,
    /// Prescribed first derivative at the first and last knot.
    Clamped { start: f64, end: f64 },
}

/// C² piecewise cubic through `(xs[i], ys[i])`, stored as knot values plus
/// second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    m: Vec<f64>,
}

pub const MIN_KNOTS: usize = 4;

impl CubicSpline {
    pub fn natural(xs: &[f64], ys: &[f64]) -> Result<Self> {
        Self::new(xs, ys, EndCondition::Natural)
    }

    pub fn new(xs: &[f64], ys: &[f64], ends: EndCondition) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidParameter("spline abscissae and ordinates differ in length"));
        }
        if xs.len() < MIN_KNOTS {
            return Err(Error::TooFewSamples { needed: MIN_KNOTS, got: xs.len() });
        }
        if xs.iter().chain(ys).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("spline sample"));
        }
        if let Some(i) = xs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonIncreasingAbscissae { index: i + 1 });
        }
        if let EndCondition::Clamped { start, end } = ends {
            if !start.is_finite() || !end.is_finite() {
                return Err(Error::NonFinite("spline end slope"));
            }
        }
        let m = second_derivatives(xs, ys, ends);
        Ok(Self { xs: xs.to_vec(), ys: ys.to_vec(), m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn first(&self) -> f64 {
        self.xs[0]
    }

    pub fn last(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Value, first and second derivative at `x`. Outside the knot range the
    /// end cubic is continued.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&k| k <= x).clamp(1, n - 1) - 1;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let h = x1 - x0;
        let t = x - x0;
        let u = x1 - x;
        let c0 = y0 / h - m0 * h / 6.0;
        let c1 = y1 / h - m1 * h / 6.0;
        let value = if t == 0.0 {
            y0
        } else if u == 0.0 {
            y1
        } else {
            m0 * u * u * u / (6.0 * h) + m1 * t * t * t / (6.0 * h) + c0 * u + c1 * t
        };
        let slope = -m0 * u * u / (2.0 * h) + m1 * t * t / (2.0 * h) - c0 + c1;
        let curvature = (m0 * u + m1 * t) / h;
        (value, slope, curvature)
    }
}

/// Solves the tridiagonal moment system with the Thomas algorithm.
fn second_derivatives(xs: &[f64], ys: &[f64], ends: EndCondition) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let secant: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

    let mut sub = alloc::vec![0.0; n];
    let mut diag = alloc::vec![0.0; n];
    let mut sup = alloc::vec![0.0; n];
    let mut rhs = alloc::vec![0.0; n];

    for i in 1..n - 1 {
        sub[i] = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        sup[i] = h[i];
        rhs[i] = 6.0 * (secant[i] - secant[i - 1]);
    }
    match ends {
        EndCondition::Natural => {
            diag[0] = 1.0;
            diag[n - 1] = 1.0;
        }
        EndCondition::Clamped { start, end } => {
            diag[0] = 2.0 * h[0];
            sup[0] = h[0];
            rhs[0] = 6.0 * (secant[0] - start);
            sub[n - 1] = h[n - 2];
            diag[n - 1] = 2.0 * h[n - 2];
            rhs[n - 1] = 6.0 * (end - secant[n - 2]);
        }
    }

    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = alloc::vec![0.0; n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn reproduces_knots() {
        let xs = [0.0, 0.3, 0.5, 0.9, 1.4];
        let ys = [1.0, -2.0, 0.25, 3.0, 0.0];
        let s = CubicSpline::natural(&xs, &ys).unwrap();
        for (x, y) in xs.iter().zip(ys) {
            assert_eq!(s.eval(*x).0, y);
        }
        assert!(s.eval(0.0).2.abs() < 1e-14);
        assert!(s.eval(1.4).2.abs() < 1e-14);
    }

    #[test]
    fn linear_data_has_zero_curvature() {
        let xs: Vec<f64> = (0..9).map(|i| i as f64 / 8.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x).collect();
        let s = CubicSpline::natural(&xs, &ys).unwrap();
        for k in 0..=100 {
            let (_, d, dd) = s.eval(k as f64 / 100.0);
            assert!((d + 2.0).abs() < 1e-12);
            assert!(dd.abs() < 1e-10);
        }
    }

    #[test]
    fn clamped_reproduces_cubic() {
        // a clamped spline is exact on cubics when given the true end slopes
        let f = |x: f64| x * x * x - 2.0 * x + 1.0;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let xs: Vec<f64> = (0..6).map(|i| i as f64 * 0.4).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let s = CubicSpline::new(&xs, &ys, EndCondition::Clamped { start: df(0.0), end: df(2.0) })
            .unwrap();
        for k in 0..=40 {
            let x = k as f64 * 0.05;
            let (v, d, dd) = s.eval(x);
            assert!((v - f(x)).abs() < 1e-12);
            assert!((d - df(x)).abs() < 1e-11);
            assert!((dd - 6.0 * x).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_knots() {
        assert_eq!(
            CubicSpline::natural(&[0.0, 1.0, 2.0], &[0.0; 3]),
            Err(Error::TooFewSamples { needed: 4, got: 3 })
        );
        assert_eq!(
            CubicSpline::natural(&[0.0, 1.0, 1.0, 2.0], &[0.0; 4]),
            Err(Error::NonIncreasingAbscissae { index: 2 })
        );
    }
}
