use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const MAX_DIM: usize = 3;

/// One axis of a periodic box `[−L, L)` with `N` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub n: usize,
    pub half_width: f64,
}

/// Uniform periodic grid in up to three dimensions, row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Axis>", into = "Vec<Axis>")]
pub struct Grid {
    axes: Vec<Axis>,
}

impl TryFrom<Vec<Axis>> for Grid {
    type Error = crate::error::Error;

    fn try_from(axes: Vec<Axis>) -> Result<Self> {
        Grid::new(axes)
    }
}

impl From<Grid> for Vec<Axis> {
    fn from(g: Grid) -> Self {
        g.axes
    }
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > MAX_DIM {
            return Err(invalid(format!("grid dimension must be 1..=3, got {}", axes.len())));
        }
        for (j, a) in axes.iter().enumerate() {
            if a.n < 8 || !a.n.is_power_of_two() {
                return Err(invalid(format!("axis {j}: N = {} must be a power of two ≥ 8", a.n)));
            }
            if !(a.half_width > 0.0) || !a.half_width.is_finite() {
                return Err(invalid(format!("axis {j}: L = {} must be positive", a.half_width)));
            }
        }
        Ok(Self { axes })
    }

    /// Same `N` and `L` on every axis.
    pub fn cube(dim: usize, n: usize, half_width: f64) -> Result<Self> {
        Self::new(vec![Axis { n, half_width }; dim])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn n(&self, j: usize) -> usize {
        self.axes[j].n
    }

    pub fn half_width(&self, j: usize) -> f64 {
        self.axes[j].half_width
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, j: usize) -> f64 {
        2.0 * self.axes[j].half_width / self.axes[j].n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|j| self.spacing(j)).product()
    }

    pub fn coord(&self, j: usize, i: usize) -> f64 {
        -self.axes[j].half_width + i as f64 * self.spacing(j)
    }

    pub fn coords(&self, j: usize) -> Vec<f64> {
        (0..self.n(j)).map(|i| self.coord(j, i)).collect()
    }

    /// Wavenumber of FFT bin `i` on axis `j` (standard FFT ordering).
    pub fn wavenumber(&self, j: usize, i: usize) -> f64 {
        let n = self.n(j) as isize;
        let m = if (i as isize) < n / 2 { i as isize } else { i as isize - n };
        std::f64::consts::PI / self.axes[j].half_width * m as f64
    }

    pub fn wavenumbers(&self, j: usize) -> Vec<f64> {
        (0..self.n(j)).map(|i| self.wavenumber(j, i)).collect()
    }

    pub fn k_max(&self, j: usize) -> f64 {
        std::f64::consts::PI / self.spacing(j)
    }

    /// Splits a flat index into per-axis indices.
    pub fn unravel(&self, mut flat: usize) -> [usize; MAX_DIM] {
        let mut idx = [0; MAX_DIM];
        for j in (0..self.dim()).rev() {
            idx[j] = flat % self.axes[j].n;
            flat /= self.axes[j].n;
        }
        idx
    }

    /// Per-point coordinate tuples in storage order (unused axes are 0).
    pub fn points(&self) -> Vec<[f64; MAX_DIM]> {
        let cs: Vec<Vec<f64>> = (0..self.dim()).map(|j| self.coords(j)).collect();
        self.map_indices(|idx| {
            let mut x = [0.0; MAX_DIM];
            for j in 0..self.dim() {
                x[j] = cs[j][idx[j]];
            }
            x
        })
    }

    /// Per-point wavevectors in storage order.
    pub fn kpoints(&self) -> Vec<[f64; MAX_DIM]> {
        let ks: Vec<Vec<f64>> = (0..self.dim()).map(|j| self.wavenumbers(j)).collect();
        self.map_indices(|idx| {
            let mut k = [0.0; MAX_DIM];
            for j in 0..self.dim() {
                k[j] = ks[j][idx[j]];
            }
            k
        })
    }

    fn map_indices<T>(&self, mut f: impl FnMut([usize; MAX_DIM]) -> T) -> Vec<T> {
        let mut out = Vec::with_capacity(self.len());
        let mut idx = [0usize; MAX_DIM];
        let d = self.dim();
        for _ in 0..self.len() {
            out.push(f(idx));
            for j in (0..d).rev() {
                idx[j] += 1;
                if idx[j] < self.axes[j].n {
                    break;
                }
                idx[j] = 0;
            }
        }
        out
    }

    /// `|k|²` per point, storage order.
    pub fn k_squared(&self) -> Vec<f64> {
        self.kpoints().iter().map(|k| k.iter().map(|v| v * v).sum()).collect()
    }

    /// `|x|²` per point, storage order.
    pub fn x_squared(&self) -> Vec<f64> {
        self.points().iter().map(|x| x.iter().map(|v| v * v).sum()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Grid::cube(1, 6, 1.0).is_err());
        assert!(Grid::cube(1, 12, 1.0).is_err());
        assert!(Grid::cube(4, 8, 1.0).is_err());
        assert!(Grid::cube(2, 8, 0.0).is_err());
        let g = Grid::cube(2, 8, 2.0).unwrap();
        assert_eq!(g.len(), 64);
        assert_eq!(g.spacing(0), 0.5);
        assert_eq!(g.coord(1, 0), -2.0);
        assert_eq!(g.wavenumber(0, 4), -4.0 * std::f64::consts::PI / 2.0);
    }

    #[test]
    fn points_are_row_major() {
        let g = Grid::new(vec![Axis { n: 8, half_width: 1.0 }, Axis { n: 16, half_width: 2.0 }]).unwrap();
        let p = g.points();
        assert_eq!(p[1], [g.coord(0, 0), g.coord(1, 1), 0.0]);
        assert_eq!(p[16], [g.coord(0, 1), g.coord(1, 0), 0.0]);
        assert_eq!(g.unravel(17)[..2], [1, 1]);
    }

    #[test]
    fn serde_roundtrip() {
        let g = Grid::cube(3, 8, 1.5).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<Grid>(&s).unwrap(), g);
        assert!(serde_json::from_str::<Grid>(r#"[{"n": 10, "half_width": 1.0}]"#).is_err());
    }
}
