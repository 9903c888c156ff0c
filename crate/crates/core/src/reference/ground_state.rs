//! Positive radial solution of `−½ΔQ + Q = Q^{1+4/d}`.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::coeff::ode::Dopri5;
use crate::error::{invalid, Error, Result};
use crate::field::{Grid, WaveField};

/// Radial sample spacing.
const DR: f64 = 1.0 / 256.0;
/// Residual stencil uses every `CHECK_STRIDE`-th sample.
const CHECK_STRIDE: usize = 2;
const R_MAX: f64 = 30.0;
const R_START: f64 = 1e-3;
const RTOL: f64 = 1e-13;
const CACHE_MAGIC: &[u8; 4] = b"QGS1";

#[derive(Debug, Clone)]
pub struct GroundState {
    pub d: usize,
    /// `Q(0)` from the shooting.
    pub q0: f64,
    /// L∞ residual of the radial equation on the certification grid.
    pub residual: f64,
    samples: Vec<f64>,
    slopes: Vec<f64>,
}

/// `3^{1/4} sech^{1/2}(2√2 x)`.
pub fn closed_form_1d(x: f64) -> f64 {
    3f64.powf(0.25) / (2.0 * 2f64.sqrt() * x).cosh().sqrt()
}

fn power(d: usize) -> f64 {
    1.0 + 4.0 / d as f64
}

fn signed_pow(q: f64, p: f64) -> f64 {
    q.signum() * q.abs().powf(p)
}

/// `[Q, Q']` with `Q'' = 2Q − 2Q^p − (d−1)Q'/r`.
fn rhs(d: usize) -> impl FnMut(f64, &[f64], &mut [f64]) -> Result<()> {
    let p = power(d);
    let k = (d - 1) as f64;
    move |r, y, dy| {
        dy[0] = y[1];
        dy[1] = 2.0 * y[0] - 2.0 * signed_pow(y[0], p) - if k > 0.0 { k * y[1] / r } else { 0.0 };
        Ok(())
    }
}

/// Regular start: `Q = a + c₂r² + c₄r⁴`.
fn start(d: usize, a: f64) -> (f64, [f64; 2]) {
    if d == 1 {
        return (0.0, [a, 0.0]);
    }
    let p = power(d);
    let f = 2.0 * a - 2.0 * a.powf(p);
    let fp = 2.0 - 2.0 * p * a.powf(p - 1.0);
    let c2 = f / (2.0 * d as f64);
    let c4 = fp * c2 / (4.0 * (d as f64 + 2.0));
    let r = R_START;
    (r, [a + c2 * r * r + c4 * r.powi(4), 2.0 * c2 * r + 4.0 * c4 * r.powi(3)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shot {
    /// `Q` crosses zero: `Q(0)` too large.
    Over,
    /// `Q` turns back up while positive: `Q(0)` too small.
    Under,
}

/// Shoots from `Q(0) = a`, returning the outcome and the samples taken before it.
fn shoot(d: usize, a: f64) -> Result<(Shot, Vec<(f64, f64, f64)>)> {
    let (r0, y0) = start(d, a);
    let mut st = Dopri5::new(rhs(d), r0, y0.to_vec(), R_MAX, RTOL, 1e-16)?;
    st.max_step = 0.05;
    let mut path = vec![(r0, y0[0], y0[1])];
    while st.t() < R_MAX {
        st.step(R_MAX)?;
        let y = st.y();
        path.push((st.t(), y[0], y[1]));
        if y[0] < 0.0 {
            return Ok((Shot::Over, path));
        }
        if y[1] > 0.0 {
            return Ok((Shot::Under, path));
        }
    }
    let last = path[path.len() - 1];
    Ok((if last.2 > -2f64.sqrt() * last.1 { Shot::Under } else { Shot::Over }, path))
}

fn bisect(d: usize) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (1.0 + 1e-6, 2.0);
    while shoot(d, hi)?.0 != Shot::Over {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::NoConvergence("no upper bracket for Q(0)".into()));
        }
    }
    if shoot(d, lo)?.0 != Shot::Under {
        return Err(Error::NoConvergence("no lower bracket for Q(0)".into()));
    }
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match shoot(d, mid)?.0 {
            Shot::Over => hi = mid,
            Shot::Under => lo = mid,
        }
    }
    Ok((lo, hi))
}

/// Backward solve from the far field with amplitude `amp`, sampled on `grid` (descending).
fn tail(d: usize, amp: f64, r_cut: f64) -> Result<crate::coeff::ode::DenseSolution<f64>> {
    let k = 2f64.sqrt();
    let e = (d as f64 - 1.0) / 2.0;
    let phi = amp * R_MAX.powf(-e) * (-k * R_MAX).exp();
    let dphi = -phi * (k + e / R_MAX);
    let mut st = Dopri5::new(rhs(d), R_MAX, vec![phi, dphi], r_cut, RTOL, 1e-300)?;
    st.max_step = 0.05;
    st.run(r_cut)
}

/// Shooting with bisection on `Q(0)`, a far-field tail matched at the last
/// reliable radius, and a sixth-order finite-difference residual check.
pub fn ground_state(d: usize, tol: f64) -> Result<GroundState> {
    if !(1..=3).contains(&d) {
        return Err(invalid(format!("dimension {d} not in 1..=3")));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol must be positive"));
    }
    let (lo, hi) = bisect(d)?;
    let q0 = 0.5 * (lo + hi);
    let (_, path_lo) = shoot(d, lo)?;
    let (_, path_hi) = shoot(d, hi)?;
    let mut st_lo = Dopri5::new(rhs(d), start(d, lo).0, start(d, lo).1.to_vec(), R_MAX, RTOL, 1e-16)?;
    st_lo.max_step = 0.05;
    let mut st_hi = Dopri5::new(rhs(d), start(d, hi).0, start(d, hi).1.to_vec(), R_MAX, RTOL, 1e-16)?;
    st_hi.max_step = 0.05;
    // trust the shooting while the two bracketing shots agree to 1e-9 relative
    let end = path_lo.last().unwrap().0.min(path_hi.last().unwrap().0);
    let lo_sol = st_lo.run(end)?;
    let hi_sol = st_hi.run(end)?;
    let mut r_cut = DR;
    let mut r = DR;
    while r < end {
        let a = lo_sol.eval(r)?[0];
        let b = hi_sol.eval(r)?[0];
        if (a - b).abs() > 1e-9 * a.abs().min(b.abs()) {
            break;
        }
        r_cut = r;
        r += DR;
    }
    r_cut = (r_cut / DR).floor() * DR;
    let q_cut = 0.5 * (lo_sol.eval(r_cut)?[0] + hi_sol.eval(r_cut)?[0]);

    // far-field amplitude by secant on the matched value
    let mut amps = [1.0, 2.0];
    let mut vals = [tail(d, amps[0], r_cut)?.eval(r_cut)?[0] - q_cut, 0.0];
    vals[1] = tail(d, amps[1], r_cut)?.eval(r_cut)?[0] - q_cut;
    for _ in 0..60 {
        let next = amps[1] - vals[1] * (amps[1] - amps[0]) / (vals[1] - vals[0]);
        let v = tail(d, next, r_cut)?.eval(r_cut)?[0] - q_cut;
        amps = [amps[1], next];
        vals = [vals[1], v];
        if v.abs() <= 1e-15 * q_cut || vals[0] == vals[1] {
            break;
        }
    }
    let far = tail(d, amps[1], r_cut)?;

    let n = (R_MAX / DR).round() as usize;
    let mut samples = Vec::with_capacity(n + 1);
    let mut slopes = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let r = i as f64 * DR;
        let (q, dq) = if i == 0 {
            (q0, 0.0)
        } else if r <= r_cut {
            let a = lo_sol.eval(r.max(start(d, lo).0))?;
            let b = hi_sol.eval(r.max(start(d, hi).0))?;
            (0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]))
        } else {
            let y = far.eval(r)?;
            (y[0], y[1])
        };
        samples.push(q);
        slopes.push(dq);
    }
    let residual = radial_residual(d, &samples, DR, CHECK_STRIDE);
    if residual > tol {
        return Err(Error::NoConvergence(format!("ground state residual {residual:e} above {tol:e}")));
    }
    GroundState::from_samples(d, q0, residual, samples, slopes)
}

/// L∞ residual of `−½(Q'' + (d−1)Q'/r) + Q − Q^{1+4/d}` from sixth-order
/// centered differences on every `stride`-th sample, using evenness at 0.
pub fn radial_residual(d: usize, samples: &[f64], dr: f64, stride: usize) -> f64 {
    const D2: [f64; 7] = [1.0 / 90.0, -3.0 / 20.0, 1.5, -49.0 / 18.0, 1.5, -3.0 / 20.0, 1.0 / 90.0];
    const D1: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -0.75, 0.0, 0.75, -3.0 / 20.0, 1.0 / 60.0];
    let h = dr * stride as f64;
    let p = power(d);
    let at = |i: isize| samples[(i.unsigned_abs()) * stride];
    let m = (samples.len() - 1) / stride;
    let mut worst: f64 = 0.0;
    for i in 0..(m as isize - 3) {
        let mut q2 = 0.0;
        let mut q1 = 0.0;
        for (o, (c2, c1)) in D2.iter().zip(&D1).enumerate() {
            let v = at(i + o as isize - 3);
            q2 += c2 * v;
            q1 += c1 * v;
        }
        q2 /= h * h;
        q1 /= h;
        let q = at(i);
        let lap = if i == 0 { d as f64 * q2 } else { q2 + (d as f64 - 1.0) * q1 / (i as f64 * h) };
        worst = worst.max((-0.5 * lap + q - signed_pow(q, p)).abs());
    }
    worst
}

impl GroundState {
    fn from_samples(d: usize, q0: f64, residual: f64, samples: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 || samples.len() != slopes.len() {
            return Err(Error::Format("ground-state samples and slopes differ in length".into()));
        }
        Ok(Self { d, q0, residual, samples, slopes })
    }

    /// `Q''` from the equation itself, `d·Q''(0) = 2Q − 2Q^p` at the origin.
    fn curvature(&self, i: usize) -> f64 {
        let (q, dq) = (self.samples[i], self.slopes[i]);
        let f = 2.0 * q - 2.0 * signed_pow(q, power(self.d));
        if i == 0 {
            f / self.d as f64
        } else {
            f - (self.d as f64 - 1.0) * dq / (i as f64 * DR)
        }
    }

    pub fn sigma(&self) -> f64 {
        2.0 / self.d as f64
    }

    pub fn radial_spacing(&self) -> f64 {
        DR
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn r_max(&self) -> f64 {
        (self.samples.len() - 1) as f64 * DR
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// `Q(r)` by quintic Hermite interpolation of `(Q, Q', Q'')`; zero beyond the sampled range.
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.r_max() {
            return 0.0;
        }
        let i = ((r / DR) as usize).min(self.samples.len() - 2);
        let u = r / DR - i as f64;
        let (p0, p1) = (self.samples[i], self.samples[i + 1]);
        let (m0, m1) = (self.slopes[i] * DR, self.slopes[i + 1] * DR);
        let (c0, c1) = (self.curvature(i) * DR * DR, self.curvature(i + 1) * DR * DR);
        let (u2, u3) = (u * u, u * u * u);
        let (u4, u5) = (u3 * u, u3 * u * u);
        let h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
        let h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
        let h2 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
        let h3 = 0.5 * (u3 - 2.0 * u4 + u5);
        let h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
        let h5 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
        h0 * p0 + h1 * m0 + h2 * c0 + h3 * c1 + h4 * m1 + h5 * p1
    }

    /// `Q(|x|)` on a grid.
    pub fn field(&self, grid: &Grid) -> Result<WaveField> {
        if grid.dim() != self.d {
            return Err(invalid("grid dimension differs from the ground state's"));
        }
        WaveField::from_fn(grid.clone(), 0.0, |x| Complex64::new(self.eval(x.iter().map(|v| v * v).sum::<f64>().sqrt()), 0.0))
    }

    pub fn write_to(&self, w: &mut impl Write, tol: f64) -> Result<()> {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&(self.d as u32).to_le_bytes())?;
        for v in [tol, self.q0, DR, self.residual] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&(self.samples.len() as u64).to_le_bytes())?;
        for (q, dq) in self.samples.iter().zip(&self.slopes) {
            w.write_all(&q.to_le_bytes())?;
            w.write_all(&dq.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<(Self, f64)> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Format("not a ground-state cache file".into()));
        }
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b4)?;
        let d = u32::from_le_bytes(b4) as usize;
        let mut f = [0.0; 4];
        for v in f.iter_mut() {
            r.read_exact(&mut b8)?;
            *v = f64::from_le_bytes(b8);
        }
        let [tol, q0, dr, residual] = f;
        if dr != DR || !(1..=3).contains(&d) {
            return Err(Error::Format("ground-state cache layout mismatch".into()));
        }
        r.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8) as usize;
        let mut samples = Vec::with_capacity(n);
        let mut slopes = Vec::with_capacity(n);
        for _ in 0..n {
            r.read_exact(&mut b8)?;
            samples.push(f64::from_le_bytes(b8));
            r.read_exact(&mut b8)?;
            slopes.push(f64::from_le_bytes(b8));
        }
        Ok((Self::from_samples(d, q0, residual, samples, slopes)?, tol))
    }
}

fn cache_path(dir: &Path, d: usize, tol: f64) -> PathBuf {
    dir.join(format!("ground_state_d{d}_tol{tol:e}.bin"))
}

/// [`ground_state`] backed by a cache file in `dir` keyed by `(d, tol)`.
pub fn ground_state_cached(d: usize, tol: f64, dir: &Path) -> Result<GroundState> {
    let path = cache_path(dir, d, tol);
    if let Ok(mut f) = fs::File::open(&path) {
        match GroundState::read_from(&mut f) {
            Ok((gs, t)) if gs.d == d && t == tol => return Ok(gs),
            Ok(_) => log::warn!("cache {} does not match (d, tol); recomputing", path.display()),
            Err(e) => log::warn!("ignoring unreadable cache {}: {e}", path.display()),
        }
    }
    let gs = ground_state(d, tol)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    gs.write_to(&mut f, tol)?;
    drop(f);
    fs::rename(&tmp, &path)?;
    Ok(gs)
}
