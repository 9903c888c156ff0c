//! Discrete space-time norms and the admissibility predicate.

use crate::error::{invalid, Result};
use crate::field::{lq_norm, WaveField};

/// `2/p = d(1/2 − 1/q)` with `2 ≤ q ≤ ∞` (d = 1), `2 ≤ q < ∞` (d = 2),
/// `2 ≤ q < 2d/(d−2)` (d ≥ 3). `p` or `q` may be infinite.
pub fn admissible(p: f64, q: f64, d: usize) -> bool {
    if !(p >= 1.0) || !(q >= 2.0) || d == 0 {
        return false;
    }
    let upper_ok = match d {
        1 => true,
        2 => q.is_finite(),
        _ => q < 2.0 * d as f64 / (d as f64 - 2.0),
    };
    let lhs = if p.is_infinite() { 0.0 } else { 2.0 / p };
    let rhs = d as f64 * (0.5 - if q.is_infinite() { 0.0 } else { 1.0 / q });
    upper_ok && (lhs - rhs).abs() <= 1e-12
}

/// `(∫ ‖u(t)‖_{L^q}^p dt)^{1/p}` by the trapezoid rule over the snapshots;
/// `p = ∞` gives the max over snapshots.
pub fn mixed_norm(snapshots: &[WaveField], p: f64, q: f64) -> Result<f64> {
    if snapshots.is_empty() {
        return Err(invalid("no snapshots"));
    }
    if !(p >= 1.0) {
        return Err(invalid(format!("p = {p} below 1")));
    }
    let norms: Vec<f64> = snapshots.iter().map(|u| lq_norm(u, q)).collect();
    if p.is_infinite() {
        return Ok(norms.iter().cloned().fold(0.0, f64::max));
    }
    if snapshots.len() < 2 {
        return Err(invalid("need at least two snapshots for a time integral"));
    }
    let mut acc = 0.0;
    for i in 1..snapshots.len() {
        let dt = (snapshots[i].t() - snapshots[i - 1].t()).abs();
        acc += 0.5 * dt * (norms[i].powf(p) + norms[i - 1].powf(p));
    }
    Ok(acc.powf(1.0 / p))
}
