use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft;
use super::grid::Grid;
use crate::coeff::FundamentalPair;
use crate::error::{invalid, Error, Result};

/// Complex field on a [`Grid`] with a time tag.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: Grid,
    values: Vec<Complex64>,
    t: f64,
}

impl WaveField {
    pub fn new(grid: Grid, values: Vec<Complex64>, t: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid(format!("{} values for a grid of {} points", values.len(), grid.len())));
        }
        let u = Self { grid, values, t };
        u.check_finite()?;
        Ok(u)
    }

    pub fn zeros(grid: Grid, t: f64) -> Self {
        let n = grid.len();
        Self { grid, values: vec![Complex64::default(); n], t }
    }

    /// Samples `f(x)` at every grid point.
    pub fn from_fn(grid: Grid, t: f64, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let d = grid.dim();
        let values = grid.points().iter().map(|x| f(&x[..d])).collect();
        Self::new(grid, values, t)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.t = t;
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite { t: self.t })
        }
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// Pointwise map `u ↦ f(x, u)`.
    pub fn map(&self, f: impl Fn(&[f64], Complex64) -> Complex64) -> Result<Self> {
        let d = self.dim();
        let values = self.grid.points().iter().zip(&self.values).map(|(x, &v)| f(&x[..d], v)).collect();
        Self::new(self.grid.clone(), values, self.t)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| v * c).collect(), t: self.t }
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(invalid("fields live on different grids"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid.clone(), values, t: self.t })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { grid: self.grid.clone(), values, t: self.t })
    }

    /// `∫ conj(u) v dx`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_grid(other)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.grid.cell_volume())
    }

    /// `‖u‖²_{L²}`.
    pub fn mass(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    /// L² distance to another field on the same grid.
    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.grid.cell_volume()).sqrt())
    }

    /// Unnormalized forward FFT of the values.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut s = self.values.clone();
        fft::forward(&mut s, &self.grid.shape());
        s
    }

    /// `F⁻¹[m(k) F u]`.
    pub fn apply_multiplier(&self, m: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let mut s = self.spectrum();
        let d = self.dim();
        for (v, k) in s.iter_mut().zip(self.grid.kpoints()) {
            *v *= m(&k[..d]);
        }
        fft::inverse(&mut s, &self.grid.shape());
        Self::new(self.grid.clone(), s, self.t)
    }

    /// Spectral `∂_j u`.
    pub fn derivative(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim() {
            return Err(invalid(format!("axis {axis} out of range")));
        }
        self.apply_multiplier(|k| Complex64::new(0.0, k[axis]))
    }

    pub fn laplacian(&self) -> Result<Self> {
        self.apply_multiplier(|k| Complex64::new(-k.iter().map(|v| v * v).sum::<f64>(), 0.0))
    }

    /// `x_j u`.
    pub fn mul_coord(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim() {
            return Err(invalid(format!("axis {axis} out of range")));
        }
        self.map(|x, v| v * x[axis])
    }
}

/// Weighted spectral or physical sums `Σ w |·|² dV` share this helper.
fn weighted_mass(values: &[Complex64], weights: impl Iterator<Item = f64>, volume: f64) -> f64 {
    values.iter().zip(weights).map(|(v, w)| w * v.norm_sqr()).sum::<f64>() * volume
}

/// `(Σ|u|^q dV)^{1/q}`; `q = ∞` gives `max |u|`.
pub fn lq_norm(u: &WaveField, q: f64) -> f64 {
    assert!(q >= 1.0, "lq_norm needs q ≥ 1, got {q}");
    if q.is_infinite() {
        return u.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let s: f64 = if q == 2.0 {
        u.values.iter().map(|v| v.norm_sqr()).sum()
    } else {
        u.values.iter().map(|v| v.norm().powf(q)).sum()
    };
    (s * u.grid.cell_volume()).powf(1.0 / q)
}

/// L² norm computed from the spectrum (Parseval).
pub fn l2_norm_fourier(u: &WaveField) -> f64 {
    let s = u.spectrum();
    let vol = u.grid.cell_volume() / u.grid.len() as f64;
    (s.iter().map(|v| v.norm_sqr()).sum::<f64>() * vol).sqrt()
}

/// `Σ_{|β|≤k} Π a_j^{β_j}` for up to three variables.
fn multi_index_weight(a: &[f64], k: u32) -> f64 {
    let pow = |x: f64, p: u32| x.powi(p as i32);
    match a.len() {
        1 => (0..=k).map(|m| pow(a[0], m)).sum(),
        2 => (0..=k).flat_map(|i| (0..=k - i).map(move |j| (i, j))).map(|(i, j)| pow(a[0], i) * pow(a[1], j)).sum(),
        3 => {
            let mut s = 0.0;
            for i in 0..=k {
                for j in 0..=k - i {
                    for l in 0..=k - i - j {
                        s += pow(a[0], i) * pow(a[1], j) * pow(a[2], l);
                    }
                }
            }
            s
        }
        _ => unreachable!("grids have 1..=3 axes"),
    }
}

pub const MAX_SOBOLEV_ORDER: u32 = 8;

/// `(Σ_{|β|≤k} ‖∂^β u‖²)^{1/2}` from the spectrum.
pub fn sobolev_norm(u: &WaveField, k: u32) -> f64 {
    assert!(k <= MAX_SOBOLEV_ORDER, "sobolev order {k} above {MAX_SOBOLEV_ORDER}");
    let d = u.dim();
    let s = u.spectrum();
    let kp = u.grid.kpoints();
    let vol = u.grid.cell_volume() / u.grid.len() as f64;
    let weights: Vec<f64> = kp
        .iter()
        .map(|kv| {
            let a: Vec<f64> = kv[..d].iter().map(|v| v * v).collect();
            multi_index_weight(&a, k)
        })
        .collect();
    let total = weighted_mass(&s, weights.iter().copied(), vol);
    if k > 0 && total > 0.0 {
        let tail = weighted_mass(
            &s,
            kp.iter().zip(&weights).map(|(kv, w)| {
                let outer = (0..d).any(|j| kv[j].abs() > 0.75 * u.grid.k_max(j));
                if outer {
                    *w
                } else {
                    0.0
                }
            }),
            vol,
        );
        if tail > 0.01 * total {
            log::warn!("H^{k} norm: {:.1}% of the weight sits in the top spectral band", 100.0 * tail / total);
        }
    }
    total.sqrt()
}

/// `(Σ_{|α|≤k} ‖x^α u‖²)^{1/2}`.
pub fn momentum_norm(u: &WaveField, k: u32) -> f64 {
    assert!(k <= MAX_SOBOLEV_ORDER, "momentum order {k} above {MAX_SOBOLEV_ORDER}");
    let d = u.dim();
    let w = u.grid.points().into_iter().map(|x| {
        let a: Vec<f64> = x[..d].iter().map(|v| v * v).collect();
        multi_index_weight(&a, k)
    });
    weighted_mass(&u.values, w, u.grid.cell_volume()).sqrt()
}

/// `‖∇u‖_{L²}`.
pub fn gradient_norm(u: &WaveField) -> f64 {
    let s = u.spectrum();
    let vol = u.grid.cell_volume() / u.grid.len() as f64;
    weighted_mass(&s, u.grid.k_squared().into_iter(), vol).sqrt()
}

/// `‖ |x| u ‖_{L²}`.
pub fn position_norm(u: &WaveField) -> f64 {
    weighted_mass(&u.values, u.grid.x_squared().into_iter(), u.grid.cell_volume()).sqrt()
}

/// Fraction of the mass in the outer 10% shell of the box.
pub fn boundary_mass_fraction(u: &WaveField) -> f64 {
    let total = u.mass();
    if total == 0.0 {
        return 0.0;
    }
    let d = u.dim();
    let hw: Vec<f64> = (0..d).map(|j| u.grid.half_width(j)).collect();
    let w = u.grid.points().into_iter().map(|x| {
        let outer = (0..d).any(|j| x[j].abs() >= 0.9 * hw[j]);
        if outer {
            1.0
        } else {
            0.0
        }
    });
    weighted_mass(&u.values, w, u.grid.cell_volume()) / total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VectorField {
    /// `μ̇ x_j + i μ ∂_j`
    A,
    /// `ν̇ x_j + i ν ∂_j`
    B,
}

pub(crate) fn time_matches(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

/// `(η̇ x_j + i η ∂_j) u` with `η = μ` for A and `η = ν` for B.
pub fn apply_vector_field(u: &WaveField, pair: &FundamentalPair, which: VectorField, axis: usize, t: f64) -> Result<WaveField> {
    if !time_matches(u.t, t) {
        return Err(Error::TimeTagMismatch { field: u.t, requested: t });
    }
    let st = pair.eval(t)?;
    let (eta, eta_dot) = match which {
        VectorField::A => (st.mu, st.mu_dot),
        VectorField::B => (st.nu, st.nu_dot),
    };
    let du = u.derivative(axis)?;
    let xu = u.mul_coord(axis)?;
    let values = xu.values.iter().zip(&du.values).map(|(x, d)| x * eta_dot + Complex64::new(0.0, eta) * d).collect();
    WaveField::new(u.grid.clone(), values, u.t)
}
