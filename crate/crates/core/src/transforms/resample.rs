//! Band-limited evaluation of a field at scaled coordinates.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::field::{fft, Grid, WaveField};

pub const MAX_SCALE: f64 = 4.0;

/// `w(x) = v(x / scale)` on `target`, from the Fourier series of `v`.
/// Points that fall outside `v`'s box are set to zero.
pub fn resample_scaled(v: &WaveField, target: &Grid, scale: f64) -> Result<WaveField> {
    let src = v.grid();
    if src.dim() != target.dim() {
        return Err(invalid("source and target grids differ in dimension"));
    }
    if !(1.0 / MAX_SCALE..=MAX_SCALE).contains(&scale) {
        return Err(invalid(format!("scale factor {scale} outside [1/{MAX_SCALE}, {MAX_SCALE}]")));
    }
    let d = src.dim();
    let mut data = v.spectrum();
    let mut shape = src.shape();
    let norm = 1.0 / data.len() as f64;
    for j in 0..d {
        let n_in = src.n(j);
        let n_out = target.n(j);
        let l_src = src.half_width(j);
        let l_dst = target.half_width(j);
        let h_dst = target.spacing(j);
        let theta = PI / l_src * h_dst / scale;
        // coefficient of bin p (signed) multiplies e^{i k_p (y + L_src)}
        let offset = l_src - l_dst / scale;
        let signed = |q: usize| q as isize - (n_in / 2) as isize;
        let pre: Vec<Complex64> =
            (0..n_in).map(|q| Complex64::from_polar(1.0, PI / l_src * signed(q) as f64 * offset)).collect();
        let post: Vec<Complex64> =
            (0..n_out).map(|m| Complex64::from_polar(1.0, -theta * (n_in / 2) as f64 * m as f64)).collect();
        let ys: Vec<f64> = (0..n_out).map(|m| target.coord(j, m) / scale).collect();

        let stride: usize = shape[j + 1..].iter().product();
        let outer: usize = shape[..j].iter().product();
        let mut out = vec![Complex64::default(); outer * n_out * stride];
        let mut line = vec![Complex64::default(); n_in];
        for o in 0..outer {
            for s in 0..stride {
                for q in 0..n_in {
                    // reorder FFT bins to ascending signed index
                    let bin = (q + n_in / 2) % n_in;
                    line[q] = data[o * n_in * stride + bin * stride + s] * pre[q];
                }
                let vals = fft::czt(&line, n_out, theta);
                for m in 0..n_out {
                    let inside = ys[m] >= -l_src && ys[m] < l_src;
                    out[o * n_out * stride + m * stride + s] = if inside { vals[m] * post[m] } else { Complex64::default() };
                }
            }
        }
        data = out;
        shape[j] = n_out;
    }
    for v in data.iter_mut() {
        *v *= norm;
    }
    WaveField::new(target.clone(), data, v.t())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_gaussian() {
        let g = Grid::cube(1, 256, 12.0).unwrap();
        let v = WaveField::from_fn(g.clone(), 0.0, |x| Complex64::from_polar((-x[0] * x[0]).exp(), 0.4 * x[0])).unwrap();
        for &s in &[0.5, 0.9, 1.0, 1.7, 3.0] {
            let w = resample_scaled(&v, &g, s).unwrap();
            let want = WaveField::from_fn(g.clone(), 0.0, |x| {
                let y = x[0] / s;
                Complex64::from_polar((-y * y).exp(), 0.4 * y)
            })
            .unwrap();
            assert!(w.l2_distance(&want).unwrap() < 1e-11, "scale {s}");
        }
        assert!(resample_scaled(&v, &g, 5.0).is_err());
    }

    #[test]
    fn two_d_onto_other_grid() {
        let g = Grid::cube(2, 128, 8.0).unwrap();
        let t = Grid::cube(2, 128, 6.0).unwrap();
        let f = |x: &[f64], s: f64| Complex64::new((-(x[0] * x[0] + 2.0 * x[1] * x[1]) / (s * s)).exp(), 0.0);
        let v = WaveField::from_fn(g, 0.0, |x| f(x, 1.0)).unwrap();
        let w = resample_scaled(&v, &t, 1.3).unwrap();
        let want = WaveField::from_fn(t, 0.0, |x| f(x, 1.3)).unwrap();
        assert!(w.l2_distance(&want).unwrap() < 1e-10);
    }
}
