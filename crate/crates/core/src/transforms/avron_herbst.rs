//! Removal of a time-dependent linear potential `E(t)·x` by a moving frame.

use num_complex::Complex64;
use serde::Serialize;

use super::lens::FieldSampler;
use super::resample::resample_scaled;
use crate::coeff::{ode, TimeCoefficient};
use crate::error::{invalid, Result};
use crate::field::{fft, Grid, WaveField};

/// `P = ∫E`, `X = ∫P`, `θ = ½∫|P|²`, all from 0 to `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameIntegrals {
    pub t: f64,
    pub momentum: Vec<f64>,
    pub shift: Vec<f64>,
    pub phase: f64,
}

pub fn frame_integrals(field: &[TimeCoefficient], t: f64) -> Result<FrameIntegrals> {
    let d = field.len();
    if d == 0 {
        return Err(invalid("empty field"));
    }
    let sol = ode::integrate(
        |tt, y, dy| {
            let mut kin = 0.0;
            for j in 0..d {
                dy[j] = field[j].eval(tt)?;
                dy[d + j] = y[j];
                kin += y[j] * y[j];
            }
            dy[2 * d] = 0.5 * kin;
            Ok(())
        },
        0.0,
        vec![0.0; 2 * d + 1],
        t,
        1e-13,
        1e-15,
    )?;
    let y = sol.eval(t)?;
    Ok(FrameIntegrals { t, momentum: y[..d].to_vec(), shift: y[d..2 * d].to_vec(), phase: y[2 * d] })
}

/// `u(t, x) = v(t, x + X) e^{−i x·P − iθ}`, where `v` solves the same equation without `E·x`.
pub fn avron_herbst(v_at: &FieldSampler, field: &[TimeCoefficient], t: f64, grid: &Grid) -> Result<WaveField> {
    if field.len() != grid.dim() {
        return Err(invalid(format!("field has {} axes, grid has {}", field.len(), grid.dim())));
    }
    let fi = frame_integrals(field, t)?;
    let v = v_at(t)?;
    let mut w = if v.grid() == grid { v } else { resample_scaled(&v, grid, 1.0)? };
    translate(&mut w, &fi.shift);
    w.map(|x, z| {
        let dot: f64 = x.iter().zip(&fi.momentum).map(|(a, b)| a * b).sum();
        z * Complex64::from_polar(1.0, -dot - fi.phase)
    })
    .map(|u| u.with_time(t))
}

/// `w(x) ← w(x + shift)` by a Fourier phase ramp.
fn translate(w: &mut WaveField, shift: &[f64]) {
    if shift.iter().all(|&s| s == 0.0) {
        return;
    }
    let grid = w.grid().clone();
    let shape = grid.shape();
    let ks = grid.kpoints();
    let data = w.values_mut();
    fft::forward(data, &shape);
    for (z, k) in data.iter_mut().zip(&ks) {
        let ph: f64 = k.iter().zip(shift).map(|(a, b)| a * b).sum();
        *z *= Complex64::from_polar(1.0, ph);
    }
    fft::inverse(data, &shape);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_integrals() {
        let e = TimeCoefficient::constant(0.7);
        let fi = frame_integrals(&[e.clone(), TimeCoefficient::constant(0.0)], 2.0).unwrap();
        assert!((fi.momentum[0] - 1.4).abs() < 1e-13);
        assert!((fi.shift[0] - 1.4).abs() < 1e-13);
        assert_eq!(fi.shift[1], 0.0);
        // ½∫(0.7τ)² = 0.49·8/6
        assert!((fi.phase - 0.49 * 8.0 / 6.0).abs() < 1e-13);
    }
}
