use std::fmt;
use std::sync::Arc;

use crate::coeff::TimeCoefficient;
use crate::error::{invalid, Result};
use crate::field::Grid;

pub type Sampler = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;

/// External potential `V(t, x)`.
#[derive(Clone)]
pub enum Potential {
    /// `½ Σ Ω_j(t) x_j² + Σ E_j(t) x_j`; an empty `field` means no linear part.
    Quadratic { omega: Vec<TimeCoefficient>, field: Vec<TimeCoefficient> },
    /// Arbitrary real sampler.
    Custom(Sampler),
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Quadratic { omega, field } => {
                f.debug_struct("Quadratic").field("omega", omega).field("field", field).finish()
            }
            Potential::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Potential {
    pub fn harmonic(omega: Vec<TimeCoefficient>) -> Self {
        Potential::Quadratic { omega, field: Vec::new() }
    }

    pub fn isotropic(omega: TimeCoefficient, d: usize) -> Self {
        Self::harmonic(vec![omega; d])
    }

    pub fn free(d: usize) -> Self {
        Self::isotropic(TimeCoefficient::constant(0.0), d)
    }

    pub fn with_field(self, field: Vec<TimeCoefficient>) -> Result<Self> {
        match self {
            Potential::Quadratic { omega, .. } => {
                if !field.is_empty() && field.len() != omega.len() {
                    return Err(invalid("electric field needs one component per axis"));
                }
                Ok(Potential::Quadratic { omega, field })
            }
            Potential::Custom(_) => Err(invalid("cannot add a linear field to a custom potential")),
        }
    }

    pub fn omega(&self) -> Option<&[TimeCoefficient]> {
        match self {
            Potential::Quadratic { omega, .. } => Some(omega),
            Potential::Custom(_) => None,
        }
    }

    pub fn has_linear_part(&self) -> bool {
        matches!(self, Potential::Quadratic { field, .. } if !field.is_empty())
    }

    pub fn check_dim(&self, d: usize) -> Result<()> {
        if let Potential::Quadratic { omega, field } = self {
            if omega.len() != d {
                return Err(invalid(format!("{} trap coefficients for a {d}-dimensional grid", omega.len())));
            }
            if !field.is_empty() && field.len() != d {
                return Err(invalid(format!("{} field components for a {d}-dimensional grid", field.len())));
            }
        }
        Ok(())
    }

    /// Value at one point.
    pub fn value(&self, t: f64, x: &[f64]) -> Result<f64> {
        match self {
            Potential::Quadratic { omega, field } => {
                let mut v = 0.0;
                for (j, w) in omega.iter().enumerate() {
                    v += 0.5 * w.eval(t)? * x[j] * x[j];
                }
                for (j, e) in field.iter().enumerate() {
                    v += e.eval(t)? * x[j];
                }
                Ok(v)
            }
            Potential::Custom(f) => Ok(f(t, x)),
        }
    }

    /// `x · ∇V` at one point.
    pub fn virial_weight(&self, t: f64, x: &[f64]) -> Result<f64> {
        match self {
            Potential::Quadratic { omega, field } => {
                let mut v = 0.0;
                for (j, w) in omega.iter().enumerate() {
                    v += w.eval(t)? * x[j] * x[j];
                }
                for (j, e) in field.iter().enumerate() {
                    v += e.eval(t)? * x[j];
                }
                Ok(v)
            }
            Potential::Custom(f) => {
                let r: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let eps = 1e-6 * (1.0 + r);
                let up: Vec<f64> = x.iter().map(|v| v * (1.0 + eps)).collect();
                let dn: Vec<f64> = x.iter().map(|v| v * (1.0 - eps)).collect();
                Ok((f(t, &up) - f(t, &dn)) / (2.0 * eps))
            }
        }
    }

    /// `∂_t V` at one point.
    pub fn time_derivative(&self, t: f64, x: &[f64]) -> Result<f64> {
        match self {
            Potential::Quadratic { omega, field } => {
                let mut v = 0.0;
                for (j, w) in omega.iter().enumerate() {
                    v += 0.5 * w.derivative(t)? * x[j] * x[j];
                }
                for (j, e) in field.iter().enumerate() {
                    v += e.derivative(t)? * x[j];
                }
                Ok(v)
            }
            Potential::Custom(f) => {
                let h = 1e-5 * (1.0 + t.abs());
                Ok((f(t + h, x) - f(t - h, x)) / (2.0 * h))
            }
        }
    }

    /// Fills `out` with `V(t, ·)` on the grid.
    pub fn fill(&self, grid: &Grid, t: f64, out: &mut Vec<f64>) -> Result<()> {
        self.fill_with(grid, out, |x| self.value(t, x), t)
    }

    fn fill_with(&self, grid: &Grid, out: &mut Vec<f64>, f: impl Fn(&[f64]) -> Result<f64>, t: f64) -> Result<()> {
        let d = grid.dim();
        out.clear();
        match self {
            Potential::Quadratic { omega, field } => {
                let w: Vec<f64> = omega.iter().map(|o| o.eval(t)).collect::<Result<_>>()?;
                let e: Vec<f64> = field.iter().map(|o| o.eval(t)).collect::<Result<_>>()?;
                let per_axis: Vec<Vec<f64>> = (0..d)
                    .map(|j| {
                        grid.coords(j)
                            .iter()
                            .map(|&x| 0.5 * w[j] * x * x + e.get(j).map_or(0.0, |ej| ej * x))
                            .collect()
                    })
                    .collect();
                out.reserve(grid.len());
                for flat in 0..grid.len() {
                    let idx = grid.unravel(flat);
                    out.push((0..d).map(|j| per_axis[j][idx[j]]).sum());
                }
            }
            Potential::Custom(_) => {
                for x in grid.points() {
                    out.push(f(&x[..d])?);
                }
            }
        }
        Ok(())
    }

    /// Largest `|V|` on the grid over sampled times in `[a, b]`.
    pub fn max_abs_on_grid(&self, grid: &Grid, a: f64, b: f64) -> Result<f64> {
        let mut buf = Vec::new();
        let mut m: f64 = 0.0;
        for i in 0..=16 {
            let t = a + (b - a) * i as f64 / 16.0;
            self.fill(grid, t, &mut buf)?;
            m = buf.iter().fold(m, |acc, v| acc.max(v.abs()));
        }
        Ok(m)
    }
}
