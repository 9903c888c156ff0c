use std::f64::consts::PI;

use num_complex::Complex64;
use tdnls::coeff::{solve_fundamental, TimeCoefficient, DEFAULT_TOL};
use tdnls::field::{Grid, WaveField};
use tdnls::propagators::{
    mehler_apply, mehler_compose, strang_propagate, NonlinearitySpec, Potential, StepControls,
};

fn gaussian(grid: &Grid, t: f64, width: f64, kick: f64) -> WaveField {
    WaveField::from_fn(grid.clone(), t, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::from_polar((-r2 / (2.0 * width)).exp(), kick * x[0])
    })
    .unwrap()
}

/// Direct O(N²) quadrature of the one-dimensional Mehler kernel.
fn mehler_direct(u0: &WaveField, mu: f64, alpha: f64, beta: f64, gamma: f64) -> Vec<Complex64> {
    let g = u0.grid();
    let h = g.spacing(0);
    let xs = g.coords(0);
    let pref = Complex64::new(0.0, 2.0 * PI * mu).powf(-0.5);
    xs.iter()
        .map(|&x| {
            let s: Complex64 = xs
                .iter()
                .zip(u0.values())
                .map(|(&y, &v)| v * Complex64::from_polar(1.0, 0.5 * (alpha * x * x + 2.0 * beta * x * y + gamma * y * y)))
                .sum();
            pref * s * h
        })
        .collect()
}

#[test]
fn chirp_z_matches_direct_kernel_sum() {
    let g = Grid::cube(1, 256, 10.0).unwrap();
    let u0 = gaussian(&g, 0.0, 1.0, 0.7);
    let omega = [TimeCoefficient::cosine()];
    let pairs = solve_fundamental(&omega, 0.0, 1.2, DEFAULT_TOL).unwrap();
    let fast = mehler_apply(&u0, &pairs, 0.0, 1.2).unwrap();
    let st = pairs[0].eval(1.2).unwrap();
    let gamma = st.nu / st.mu;
    let slow = mehler_direct(&u0, st.mu, st.mu_dot / st.mu, -1.0 / st.mu, gamma);
    for (a, b) in fast.values().iter().zip(&slow) {
        assert!((a - b).norm() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn pulsed_plateau_is_a_pure_phase() {
    for n in [1u32, 2, 3] {
        let nf = n as f64;
        let g = Grid::cube(1, 256, 8.0).unwrap();
        let tn = 4.0 * nf + 1.0;
        let u0 = WaveField::from_fn(g.clone(), tn, |x| Complex64::new((-nf * x[0] * x[0] / 2.0).exp(), 0.0)).unwrap();
        let omega = [TimeCoefficient::pulsed()];
        let t = tn + 0.6;
        let u = mehler_compose(&u0, &omega, tn, t, DEFAULT_TOL, None).unwrap();
        let want = u0.scale(Complex64::from_polar(1.0, -nf * (t - tn) / 2.0));
        let err = u.l2_distance(&want).unwrap();
        assert!(err < 1e-8, "n={n}: {err:e}");
    }
}

#[test]
fn compose_through_caustic_matches_split_step() {
    let g = Grid::cube(1, 256, 12.0).unwrap();
    let u0 = gaussian(&g, 0.0, 0.5, 1.0);
    let omega = [TimeCoefficient::constant(1.0)];
    let t = 1.5 * PI;
    let m = mehler_compose(&u0, &omega, 0.0, t, DEFAULT_TOL, None).unwrap();
    let pot = Potential::harmonic(omega.to_vec());
    let mut ctl = StepControls::new(1e-4).stride(1_000_000);
    ctl.keep_snapshots = false;
    let tr = strang_propagate(&u0, &pot, &NonlinearitySpec::linear(), 0.0, t, &ctl).unwrap();
    let err = m.l2_distance(tr.final_field.as_ref().unwrap()).unwrap();
    assert!(err < 1e-6, "{err:e}");
}

#[test]
fn single_leg_equals_apply() {
    let g = Grid::cube(1, 256, 12.0).unwrap();
    let u0 = gaussian(&g, 0.0, 1.0, 0.0);
    let omega = [TimeCoefficient::constant(1.0)];
    let pairs = solve_fundamental(&omega, 0.0, 1.0, DEFAULT_TOL).unwrap();
    let a = mehler_apply(&u0, &pairs, 0.0, 1.0).unwrap();
    let b = mehler_compose(&u0, &omega, 0.0, 1.0, DEFAULT_TOL, None).unwrap();
    assert!(a.l2_distance(&b).unwrap() < 1e-12);
}

#[test]
fn round_trip_through_caustics() {
    let g = Grid::cube(2, 128, 10.0).unwrap();
    let u0 = gaussian(&g, 0.0, 1.0, 0.5);
    let wobble = TimeCoefficient::named(
        "cosine",
        &[("offset".to_string(), 1.0), ("amplitude".to_string(), 0.5)].into_iter().collect(),
    )
    .unwrap();
    let omega = [TimeCoefficient::constant(1.0), wobble];
    let there = mehler_compose(&u0, &omega, 0.0, 4.0, DEFAULT_TOL, None).unwrap();
    let back = mehler_compose(&there, &omega, 4.0, 0.0, DEFAULT_TOL, None).unwrap();
    let err = back.l2_distance(&u0).unwrap();
    assert!(err < 1e-8, "{err:e}");
    assert!((there.mass() / u0.mass() - 1.0).abs() < 1e-9);
}

#[test]
fn strang_is_second_order_against_mehler() {
    let g = Grid::cube(1, 256, 12.0).unwrap();
    let u0 = gaussian(&g, 0.0, 1.0, 0.5);
    let omega = [TimeCoefficient::cosine()];
    let exact = mehler_compose(&u0, &omega, 0.0, 2.0, DEFAULT_TOL, None).unwrap();
    let pot = Potential::harmonic(omega.to_vec());
    let errs: Vec<f64> = [4e-2, 2e-2, 1e-2]
        .iter()
        .map(|&dt| {
            let tr = strang_propagate(&u0, &pot, &NonlinearitySpec::linear(), 0.0, 2.0, &StepControls::new(dt).stride(1000)).unwrap();
            tr.final_field.unwrap().l2_distance(&exact).unwrap()
        })
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.9..=2.1).contains(&order), "{errs:?}");
    }
}

#[test]
fn nonlinear_time_reversal() {
    let g = Grid::cube(1, 128, 10.0).unwrap();
    let u0 = gaussian(&g, 0.0, 1.0, 0.3);
    let pot = Potential::isotropic(TimeCoefficient::cosine(), 1);
    let nl = NonlinearitySpec::cubic(1.0);
    let ctl = StepControls::new(1e-3).stride(10_000);
    let there = strang_propagate(&u0, &pot, &nl, 0.0, 0.5, &ctl).unwrap().final_field.unwrap();
    let back = strang_propagate(&there, &pot, &nl, 0.5, 0.0, &ctl).unwrap().final_field.unwrap();
    assert!(back.l2_distance(&u0).unwrap() < 1e-6);
}

#[test]
fn mass_is_exact_for_nonlinear_two_d() {
    let g = Grid::cube(2, 64, 8.0).unwrap();
    let u0 = gaussian(&g, 0.0, 1.0, 0.3);
    let pot = Potential::isotropic(TimeCoefficient::constant(1.0), 2);
    let tr = strang_propagate(&u0, &pot, &NonlinearitySpec::cubic(-1.0), 0.0, 1.0, &StepControls::new(1e-2).stride(10)).unwrap();
    let m0 = u0.mass();
    for m in tr.column("mass").unwrap() {
        assert!((m / m0 - 1.0).abs() < 1e-12);
    }
}
