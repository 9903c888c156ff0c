//! Cubic interpolation with not-a-knot end conditions.

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    /// Second derivatives at the knots.
    curvature: Vec<f64>,
}

impl CubicSpline {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let n = knots.len();
        if n != values.len() {
            return Err(invalid("table times and values differ in length"));
        }
        if n < 2 {
            return Err(invalid("table needs at least two points"));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("table times must be strictly increasing"));
        }
        if knots.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("table contains non-finite entries"));
        }
        let curvature = match n {
            2 => vec![0.0; 2],
            3 => {
                // not-a-knot on three points is the interpolating parabola
                let (x, y) = (&knots, &values);
                let d01 = (y[1] - y[0]) / (x[1] - x[0]);
                let d12 = (y[2] - y[1]) / (x[2] - x[1]);
                let c = 2.0 * (d12 - d01) / (x[2] - x[0]);
                vec![c; 3]
            }
            _ => not_a_knot_curvature(&knots, &values),
        };
        Ok(Self { knots, values, curvature })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    fn locate(&self, t: f64) -> Result<usize> {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        let i = self.knots.partition_point(|&k| k <= t);
        Ok(i.clamp(1, self.knots.len() - 1) - 1)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let i = self.locate(t)?;
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - t) / h;
        let b = (t - x0) / h;
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        Ok(a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0)
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        let i = self.locate(t)?;
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - t) / h;
        let b = (t - x0) / h;
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        Ok((self.values[i + 1] - self.values[i]) / h
            + (-(3.0 * a * a - 1.0) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Solves for knot second derivatives with third-derivative continuity at the
/// second and penultimate knots. The two end conditions are folded into the
/// first and last interior rows so the system stays tridiagonal.
fn not_a_knot_curvature(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let m = n - 2;
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for r in 0..m {
        let i = r + 1;
        sub[r] = h[i - 1];
        diag[r] = 2.0 * (h[i - 1] + h[i]);
        sup[r] = h[i];
        rhs[r] = 6.0 * (slope[i] - slope[i - 1]);
    }
    // M0 = ((h0 + h1) M1 - h0 M2) / h1
    let (h0, h1) = (h[0], h[1]);
    diag[0] += h0 * (h0 + h1) / h1;
    sup[0] -= h0 * h0 / h1;
    // M_{n-1} = ((ha + hb) M_{n-2} - hb M_{n-3}) / ha with ha = h[n-3], hb = h[n-2]
    let (ha, hb) = (h[n - 3], h[n - 2]);
    diag[m - 1] += hb * (ha + hb) / ha;
    sub[m - 1] -= hb * hb / ha;

    // Thomas algorithm
    for r in 1..m {
        let w = sub[r] / diag[r - 1];
        diag[r] -= w * sup[r - 1];
        rhs[r] -= w * rhs[r - 1];
    }
    let mut inner = vec![0.0; m];
    inner[m - 1] = rhs[m - 1] / diag[m - 1];
    for r in (0..m - 1).rev() {
        inner[r] = (rhs[r] - sup[r] * inner[r + 1]) / diag[r];
    }

    let mut curv = vec![0.0; n];
    curv[1..n - 1].copy_from_slice(&inner);
    curv[0] = ((h0 + h1) * curv[1] - h0 * curv[2]) / h1;
    curv[n - 1] = ((ha + hb) * curv[n - 2] - hb * curv[n - 3]) / ha;
    curv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let f = |t: f64| 0.5 * t * t * t - 2.0 * t * t + t - 3.0;
        let df = |t: f64| 1.5 * t * t - 4.0 * t + 1.0;
        let knots: Vec<f64> = vec![0.0, 0.3, 1.1, 1.7, 2.0, 3.2, 4.0];
        let values = knots.iter().map(|&t| f(t)).collect();
        let s = CubicSpline::new(knots, values).unwrap();
        for i in 0..=100 {
            let t = 4.0 * i as f64 / 100.0;
            assert!((s.eval(t).unwrap() - f(t)).abs() < 1e-11, "t = {t}");
            assert!((s.derivative(t).unwrap() - df(t)).abs() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn three_points_is_parabola() {
        let s = CubicSpline::new(vec![0.0, 1.0, 3.0], vec![0.0, 1.0, 9.0]).unwrap();
        assert!((s.eval(2.0).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(CubicSpline::new(vec![0.0, 0.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(CubicSpline::new(vec![0.0], vec![1.0]).is_err());
        let s = CubicSpline::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(matches!(s.eval(1.5), Err(Error::OutOfRange { .. })));
    }
}
