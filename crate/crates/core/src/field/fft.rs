//! FFT helpers: n-d transforms over row-major arrays and the chirp-z transform.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, dir: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(n, dir))
}

/// Unnormalized transform along every axis. `inverse` uses `e^{+i…}`.
pub fn fft_nd(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    let dir = if inverse { FftDirection::Inverse } else { FftDirection::Forward };
    let total: usize = shape.iter().product();
    assert_eq!(data.len(), total, "array length does not match shape");
    for (j, &n) in shape.iter().enumerate() {
        let fft = plan(n, dir);
        let stride: usize = shape[j + 1..].iter().product();
        if stride == 1 {
            let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let outer = total / (n * stride);
        let mut line = vec![Complex64::default(); n];
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        for o in 0..outer {
            let base = o * n * stride;
            for s in 0..stride {
                for i in 0..n {
                    line[i] = data[base + i * stride + s];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for i in 0..n {
                    data[base + i * stride + s] = line[i];
                }
            }
        }
    }
}

pub fn forward(data: &mut [Complex64], shape: &[usize]) {
    fft_nd(data, shape, false);
}

/// Normalized inverse of [`forward`].
pub fn inverse(data: &mut [Complex64], shape: &[usize]) {
    fft_nd(data, shape, true);
    let scale = 1.0 / data.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// `X_m = Σ_n x_n e^{iθnm}` for `m = 0..m_out`, by Bluestein's algorithm.
pub fn czt(x: &[Complex64], m_out: usize, theta: f64) -> Vec<Complex64> {
    let n_in = x.len();
    if n_in == 0 || m_out == 0 {
        return vec![Complex64::default(); m_out];
    }
    // nm = (n² + m² − (m − n)²)/2
    let chirp = |k: i64| {
        let k2 = (k * k) as f64;
        Complex64::from_polar(1.0, 0.5 * theta * k2)
    };
    let size = (n_in + m_out - 1).next_power_of_two();
    let mut a = vec![Complex64::default(); size];
    for (n, &v) in x.iter().enumerate() {
        a[n] = v * chirp(n as i64);
    }
    let mut b = vec![Complex64::default(); size];
    for k in 0..m_out {
        b[k] = chirp(k as i64).conj();
    }
    for k in 1..n_in {
        b[size - k] = chirp(k as i64).conj();
    }
    let fwd = plan(size, FftDirection::Forward);
    let inv = plan(size, FftDirection::Inverse);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (p, q) in a.iter_mut().zip(&b) {
        *p *= q;
    }
    inv.process(&mut a);
    let scale = 1.0 / size as f64;
    (0..m_out).map(|m| a[m] * chirp(m as i64) * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(x: &[Complex64], m_out: usize, theta: f64) -> Vec<Complex64> {
        (0..m_out)
            .map(|m| {
                x.iter()
                    .enumerate()
                    .map(|(n, &v)| v * Complex64::from_polar(1.0, theta * (n * m) as f64))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn czt_matches_direct_sum() {
        let x: Vec<Complex64> = (0..37).map(|n| Complex64::new((n as f64 * 0.3).sin(), 0.1 * n as f64)).collect();
        for &theta in &[0.01, -0.7, 2.9] {
            let fast = czt(&x, 53, theta);
            let slow = direct(&x, 53, theta);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()));
            }
        }
    }

    #[test]
    fn nd_roundtrip_and_axis_order() {
        let shape = [8, 16, 8];
        let orig: Vec<Complex64> = (0..1024).map(|i| Complex64::new((i as f64).cos(), (i as f64 * 0.7).sin())).collect();
        let mut d = orig.clone();
        forward(&mut d, &shape);
        inverse(&mut d, &shape);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
        // a plane wave along the middle axis lands in one bin
        let mut w: Vec<Complex64> = (0..1024)
            .map(|i| {
                let j = (i / 8) % 16;
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 3.0 * j as f64 / 16.0)
            })
            .collect();
        forward(&mut w, &shape);
        let peak = w.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap().0;
        assert_eq!(peak, 3 * 8);
    }
}
