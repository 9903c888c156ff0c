//! Dormand–Prince 5(4) with the Hairer dense output.

use super::dd::OdeScalar;
use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step together with its interpolation coefficients.
#[derive(Debug, Clone)]
pub struct DenseStep<S> {
    pub t0: f64,
    pub h: f64,
    /// Five coefficients per component.
    pub rcont: Vec<[S; 5]>,
}

impl<S: OdeScalar> DenseStep<S> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn start(&self) -> Vec<S> {
        self.rcont.iter().map(|r| r[0]).collect()
    }

    pub fn end(&self) -> Vec<S> {
        self.rcont.iter().map(|r| r[0] + r[1]).collect()
    }

    /// Interpolated state at `t` (expected inside the step).
    pub fn eval(&self, t: f64) -> Vec<S> {
        let theta = ((t - self.t0) / self.h).clamp(0.0, 1.0);
        let theta1 = 1.0 - theta;
        self.rcont
            .iter()
            .map(|r| r[0] + (r[1] + (r[2] + (r[3] + r[4] * theta1) * theta) * theta1) * theta)
            .collect()
    }
}

/// Accepted steps of one integration, in integration order.
#[derive(Debug, Clone)]
pub struct DenseSolution<S> {
    pub steps: Vec<DenseStep<S>>,
    pub t_start: f64,
    pub y_start: Vec<S>,
}

impl<S: OdeScalar> DenseSolution<S> {
    pub fn new(t_start: f64, y_start: Vec<S>) -> Self {
        Self { steps: Vec::new(), t_start, y_start }
    }

    pub fn t_end(&self) -> f64 {
        self.steps.last().map_or(self.t_start, |s| s.t1())
    }

    pub fn range(&self) -> (f64, f64) {
        let (a, b) = (self.t_start, self.t_end());
        (a.min(b), a.max(b))
    }

    pub fn eval(&self, t: f64) -> Result<Vec<S>> {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        if t == self.t_start || self.steps.is_empty() {
            return Ok(self.y_start.clone());
        }
        let forward = self.t_end() >= self.t_start;
        let i = if forward {
            self.steps.partition_point(|s| s.t1() < t)
        } else {
            self.steps.partition_point(|s| s.t1() > t)
        };
        let step = &self.steps[i.min(self.steps.len() - 1)];
        if t == step.t1() {
            return Ok(step.end());
        }
        Ok(step.eval(t))
    }
}

/// Adaptive stepper. The caller drives it one accepted step at a time so it
/// can watch the state and switch components in or out of error control.
pub struct Dopri5<S, F> {
    rhs: F,
    t: f64,
    y: Vec<S>,
    k1: Vec<S>,
    h: f64,
    dir: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Components that take part in the error norm.
    pub active: Vec<bool>,
    pub max_step: f64,
    pub steps_taken: usize,
}

impl<S, F> Dopri5<S, F>
where
    S: OdeScalar,
    F: FnMut(f64, &[S], &mut [S]) -> Result<()>,
{
    pub fn new(mut rhs: F, t0: f64, y0: Vec<S>, t_end: f64, rtol: f64, atol: f64) -> Result<Self> {
        if !(rtol > 0.0) || !(atol >= 0.0) {
            return Err(Error::InvalidArgument(format!("bad tolerances rtol={rtol}, atol={atol}")));
        }
        let n = y0.len();
        let mut k1 = vec![S::from_f64(0.0); n];
        rhs(t0, &y0, &mut k1)?;
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let mut s = Self {
            rhs,
            t: t0,
            y: y0,
            k1,
            h: 0.0,
            dir,
            rtol,
            atol,
            active: vec![true; n],
            max_step: (t_end - t0).abs().max(f64::MIN_POSITIVE),
            steps_taken: 0,
        };
        s.h = s.initial_step()?;
        Ok(s)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[S] {
        &self.y
    }

    fn scale(&self, a: f64, b: f64) -> f64 {
        self.atol + self.rtol * a.abs().max(b.abs())
    }

    fn norm(&self, v: &[f64], y: &[S]) -> f64 {
        let mut acc = 0.0;
        let mut m = 0;
        for i in 0..v.len() {
            if self.active[i] {
                let sc = self.scale(y[i].to_f64(), y[i].to_f64());
                acc += (v[i] / sc).powi(2);
                m += 1;
            }
        }
        if m == 0 {
            0.0
        } else {
            (acc / m as f64).sqrt()
        }
    }

    fn initial_step(&mut self) -> Result<f64> {
        let n = self.y.len();
        let y0: Vec<f64> = self.y.iter().map(|v| v.to_f64()).collect();
        let f0: Vec<f64> = self.k1.iter().map(|v| v.to_f64()).collect();
        let d0 = self.norm(&y0, &self.y);
        let d1 = self.norm(&f0, &self.y);
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(self.max_step);
        let y1: Vec<S> = (0..n).map(|i| self.y[i] + self.k1[i] * (self.dir * h0)).collect();
        let mut f1 = vec![S::from_f64(0.0); n];
        (self.rhs)(self.t + self.dir * h0, &y1, &mut f1)?;
        let diff: Vec<f64> = (0..n).map(|i| (f1[i] - self.k1[i]).to_f64()).collect();
        let d2 = self.norm(&diff, &self.y) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        Ok((100.0 * h0).min(h1).min(self.max_step))
    }

    /// Takes one accepted step that does not pass `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> Result<DenseStep<S>> {
        let n = self.y.len();
        let zero = S::from_f64(0.0);
        let mut k2 = vec![zero; n];
        let mut k3 = vec![zero; n];
        let mut k4 = vec![zero; n];
        let mut k5 = vec![zero; n];
        let mut k6 = vec![zero; n];
        let mut k7 = vec![zero; n];
        let mut ys = vec![zero; n];
        let mut y1 = vec![zero; n];
        let mut err = vec![0.0; n];
        let remaining = (t_limit - self.t) * self.dir;
        if remaining <= 0.0 {
            return Err(Error::InvalidArgument(format!("step target {t_limit} not ahead of {}", self.t)));
        }
        let mut rejected = false;
        loop {
            let mut hmag = self.h.min(self.max_step);
            let last = hmag >= remaining * (1.0 - 1e-12);
            if last {
                hmag = remaining;
            }
            let h = self.dir * hmag;
            if hmag < 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t: self.t, h: hmag });
            }
            let t = self.t;
            let y = &self.y;
            let k1 = &self.k1;
            for i in 0..n {
                ys[i] = y[i] + k1[i] * (h * A21);
            }
            (self.rhs)(t + C2 * h, &ys, &mut k2)?;
            for i in 0..n {
                ys[i] = y[i] + (k1[i] * A31 + k2[i] * A32) * h;
            }
            (self.rhs)(t + C3 * h, &ys, &mut k3)?;
            for i in 0..n {
                ys[i] = y[i] + (k1[i] * A41 + k2[i] * A42 + k3[i] * A43) * h;
            }
            (self.rhs)(t + C4 * h, &ys, &mut k4)?;
            for i in 0..n {
                ys[i] = y[i] + (k1[i] * A51 + k2[i] * A52 + k3[i] * A53 + k4[i] * A54) * h;
            }
            (self.rhs)(t + C5 * h, &ys, &mut k5)?;
            for i in 0..n {
                ys[i] = y[i] + (k1[i] * A61 + k2[i] * A62 + k3[i] * A63 + k4[i] * A64 + k5[i] * A65) * h;
            }
            let t_new = if last { t_limit } else { t + h };
            (self.rhs)(t + h, &ys, &mut k6)?;
            for i in 0..n {
                y1[i] = y[i] + (k1[i] * A71 + k3[i] * A73 + k4[i] * A74 + k5[i] * A75 + k6[i] * A76) * h;
            }
            (self.rhs)(t_new, &y1, &mut k7)?;
            for i in 0..n {
                err[i] = ((k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h).to_f64();
            }
            let mut acc = 0.0;
            let mut m = 0;
            let mut finite = true;
            for i in 0..n {
                let v = y1[i].to_f64();
                if !v.is_finite() {
                    finite = false;
                }
                if self.active[i] {
                    let sc = self.scale(y[i].to_f64(), v);
                    acc += (err[i] / sc).powi(2);
                    m += 1;
                }
            }
            let e = if m == 0 { 0.0 } else { (acc / m as f64).sqrt() };
            if !finite || !e.is_finite() {
                self.h = hmag * 0.2;
                rejected = true;
                continue;
            }
            if e <= 1.0 {
                let rcont = (0..n)
                    .map(|i| {
                        let r1 = y[i];
                        let r2 = y1[i] - y[i];
                        let r3 = k1[i] * h - r2;
                        let r4 = r2 - k7[i] * h - r3;
                        let r5 = (k1[i] * D1 + k3[i] * D3 + k4[i] * D4 + k5[i] * D5 + k6[i] * D6 + k7[i] * D7) * h;
                        [r1, r2, r3, r4, r5]
                    })
                    .collect();
                let out = DenseStep { t0: t, h: t_new - t, rcont };
                let mut fac = if e == 0.0 { 10.0 } else { 0.9 * e.powf(-0.2) };
                fac = fac.clamp(0.2, 10.0);
                if rejected {
                    fac = fac.min(1.0);
                }
                if !last {
                    self.h = hmag * fac;
                }
                self.t = t_new;
                std::mem::swap(&mut self.y, &mut y1);
                std::mem::swap(&mut self.k1, &mut k7);
                self.steps_taken += 1;
                return Ok(out);
            }
            self.h = hmag * (0.9 * e.powf(-0.2)).clamp(0.2, 1.0);
            rejected = true;
        }
    }

    /// Integrates to `t_end`, keeping every step.
    pub fn run(&mut self, t_end: f64) -> Result<DenseSolution<S>> {
        let mut sol = DenseSolution::new(self.t, self.y.clone());
        while (t_end - self.t) * self.dir > 0.0 {
            sol.steps.push(self.step(t_end)?);
        }
        Ok(sol)
    }
}

/// Integrates `y' = f(t, y)` in f64 from `t0` to `t1`.
pub fn integrate<F>(rhs: F, t0: f64, y0: Vec<f64>, t1: f64, rtol: f64, atol: f64) -> Result<DenseSolution<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if t0 == t1 {
        return Ok(DenseSolution::new(t0, y0));
    }
    Dopri5::new(rhs, t0, y0, t1, rtol, atol)?.run(t1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_and_dense_output() {
        let sol = integrate(
            |_, y, dy| {
                dy[0] = -y[0];
                Ok(())
            },
            0.0,
            vec![1.0],
            5.0,
            1e-10,
            1e-14,
        )
        .unwrap();
        for i in 0..=50 {
            let t = i as f64 * 0.1;
            let v = sol.eval(t).unwrap()[0];
            assert!((v - (-t).exp()).abs() < 1e-9 * (-t).exp() + 1e-13, "t={t}");
        }
        assert!(sol.eval(5.1).is_err());
    }

    #[test]
    fn backward_integration() {
        let sol = integrate(
            |t, _, dy| {
                dy[0] = t.cos();
                Ok(())
            },
            3.0,
            vec![3f64.sin()],
            -1.0,
            1e-11,
            1e-13,
        )
        .unwrap();
        for &t in &[2.5, 0.0, -0.7, -1.0] {
            assert!((sol.eval(t).unwrap()[0] - t.sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn fifth_order_convergence_on_fixed_steps() {
        // the error constant should scale by 2^5 when h halves (accept every step)
        let err = |nsteps: usize| {
            let mut st = Dopri5::new(
                |_, y: &[f64], dy: &mut [f64]| {
                    dy[0] = y[1];
                    dy[1] = -y[0];
                    Ok(())
                },
                0.0,
                vec![0.0, 1.0],
                1.0,
                1e3,
                1e3,
            )
            .unwrap();
            st.max_step = 1.0 / nsteps as f64;
            let sol = st.run(1.0).unwrap();
            (sol.eval(1.0).unwrap()[0] - 1f64.sin()).abs()
        };
        let ratio = err(8) / err(16);
        assert!(ratio > 25.0 && ratio < 40.0, "ratio {ratio}");
    }
}
