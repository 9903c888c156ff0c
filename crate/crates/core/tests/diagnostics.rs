use num_complex::Complex64;
use tdnls::coeff::{solve_fundamental, FundamentalPair, TimeCoefficient, DEFAULT_TOL};
use tdnls::diagnostics::{
    ab_law_residuals, admissible, energy, energy_law_residual, energy_parts, growth_fit, inv_check, mixed_norm,
    pseudo_conformal_residual, record, variance, virial_residual, GrowthModel, RecordOptions,
};
use tdnls::field::{momentum_norm, sobolev_norm, Grid, WaveField};
use tdnls::propagators::{mehler_compose, strang_propagate, NonlinearitySpec, Potential, StepControls};

fn gaussian(grid: &Grid, width: f64, kick: f64) -> WaveField {
    WaveField::from_fn(grid.clone(), 0.0, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::from_polar((-r2 / (2.0 * width)).exp(), kick * x[0])
    })
    .unwrap()
}

fn run(u0: &WaveField, pot: &Potential, nl: &NonlinearitySpec, t: f64, dt: f64, stride: usize) -> tdnls::propagators::SolutionTrace {
    strang_propagate(u0, pot, nl, u0.t(), t, &StepControls::new(dt).stride(stride)).unwrap()
}

#[test]
fn free_plane_phase_energy_is_kinetic() {
    let g = Grid::cube(1, 256, 12.0).unwrap();
    let u = gaussian(&g, 1.0, 0.8);
    let e = energy_parts(&u, &Potential::free(1), &NonlinearitySpec::linear(), 0.0).unwrap();
    assert_eq!(e.interaction, 0.0);
    assert_eq!(e.potential, 0.0);
    // ½‖∇u‖² = ½(k² + 1/2)·mass for e^{−x²/2 + ikx}
    assert!((e.total / (0.5 * (0.64 + 0.5) * u.mass()) - 1.0).abs() < 1e-12);
}

#[test]
fn oscillator_ground_state_energy() {
    for d in 1..=2 {
        let g = Grid::cube(d, 64, 8.0).unwrap();
        let u = gaussian(&g, 1.0, 0.0);
        let e = energy(&u, &Potential::isotropic(TimeCoefficient::constant(1.0), d), &NonlinearitySpec::linear(), 0.0).unwrap();
        assert!((e / (0.5 * d as f64 * u.mass()) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn energy_law_converges_at_second_order() {
    let g = Grid::cube(1, 1024, 32.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.0);
    let pot = Potential::isotropic(TimeCoefficient::cosine(), 1);
    let nl = NonlinearitySpec::cubic(1.0);
    let r: Vec<f64> = [1e-3, 5e-4]
        .iter()
        .map(|&dt| energy_law_residual(&run(&u0, &pot, &nl, 3.0, dt, 10), &pot, &nl).unwrap().max_abs())
        .collect();
    assert!(r[0] <= 1e-4, "{r:?}");
    assert!((3.5..=4.5).contains(&(r[0] / r[1])), "{r:?}");
}

#[test]
fn energy_is_flat_without_potential() {
    let g = Grid::cube(1, 512, 24.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.3);
    let pot = Potential::free(1);
    let nl = NonlinearitySpec::cubic(1.0);
    let tr = run(&u0, &pot, &nl, 2.0, 1e-3, 20);
    let e: Vec<f64> = tr.snapshots.iter().map(|u| energy(u, &pot, &nl, u.t()).unwrap()).collect();
    for v in &e {
        assert!((v / e[0] - 1.0).abs() < 1e-5);
    }
}

#[test]
fn virial_converges_at_second_order() {
    let g = Grid::cube(1, 1024, 32.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.0);
    let pot = Potential::isotropic(TimeCoefficient::cosine(), 1);
    let nl = NonlinearitySpec::cubic(1.0);
    let r: Vec<(f64, f64)> = [1e-3, 5e-4]
        .iter()
        .map(|&dt| {
            let v = virial_residual(&run(&u0, &pot, &nl, 3.0, dt, 10), &pot, &nl).unwrap();
            (v.second.max_abs(), v.first.max_abs())
        })
        .collect();
    assert!(r[0].0 <= 1e-3, "{r:?}");
    assert!((3.5..=4.5).contains(&(r[0].0 / r[1].0)), "{r:?}");
    assert!((3.5..=4.5).contains(&(r[0].1 / r[1].1)), "{r:?}");
}

#[test]
fn free_gaussian_variance_is_quadratic() {
    let g = Grid::cube(1, 1024, 40.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.0);
    let tr = run(&u0, &Potential::free(1), &NonlinearitySpec::linear(), 3.0, 1e-2, 5);
    // y(t) = y(0)(1 + t²) for e^{−x²/2}
    let y0 = variance(&u0);
    for u in &tr.snapshots {
        assert!((variance(u) / (y0 * (1.0 + u.t() * u.t())) - 1.0).abs() < 1e-10);
    }
    let v = virial_residual(&tr, &Potential::free(1), &NonlinearitySpec::linear()).unwrap();
    assert!(v.second.max_abs() < 1e-8);
}

#[test]
fn coherent_state_variance_oscillates_at_twice_the_frequency() {
    let g = Grid::cube(1, 256, 12.0).unwrap();
    let u0 = WaveField::from_fn(g, 0.0, |x| Complex64::new((-(x[0] - 2.0).powi(2) / 2.0).exp(), 0.0)).unwrap();
    let pot = Potential::isotropic(TimeCoefficient::constant(1.0), 1);
    let nl = NonlinearitySpec::linear();
    let tr = run(&u0, &pot, &nl, std::f64::consts::PI, 1e-3, 20);
    // centre at 2cos t: y = (½ + 4cos²t)·mass
    let m = u0.mass();
    for u in &tr.snapshots {
        let want = (0.5 + 4.0 * u.t().cos().powi(2)) * m;
        assert!((variance(u) - want).abs() < 1e-5 * m, "t={}", u.t());
    }
    assert!(virial_residual(&tr, &pot, &nl).unwrap().second.max_abs() < 1e-4);
}

#[test]
fn critical_brackets_are_conserved() {
    let g = Grid::cube(1, 1024, 32.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.3);
    let w = TimeCoefficient::cosine();
    let pot = Potential::isotropic(w.clone(), 1);
    let nl = NonlinearitySpec::power(1.0, 2);
    let pair = FundamentalPair::solve(&w, 0, 0.0, 2.0, DEFAULT_TOL).unwrap();
    let ab = ab_law_residuals(&run(&u0, &pot, &nl, 2.0, 1e-3, 10), &pair, &pot, &nl).unwrap();
    assert!(ab.relative_drift() <= 1e-6, "{}", ab.relative_drift());
    assert!(ab.a.rhs.iter().all(|r| *r == 0.0));
}

#[test]
fn linear_vector_field_norms_are_constant() {
    let g = Grid::cube(1, 512, 16.0).unwrap();
    let u0 = gaussian(&g, 0.7, 0.4);
    let omega = [TimeCoefficient::cosine()];
    let pairs = solve_fundamental(&omega, 0.0, 2.0, DEFAULT_TOL).unwrap();
    let pot = Potential::harmonic(omega.to_vec());
    let nl = NonlinearitySpec::linear();
    let opts = RecordOptions::default();
    let r0 = record(&u0, &pot, &nl, Some(&pairs), &opts).unwrap();
    for &t in &[0.5, 1.2, 2.0] {
        let u = mehler_compose(&u0, &omega, 0.0, t, DEFAULT_TOL, None).unwrap();
        let r = record(&u, &pot, &nl, Some(&pairs), &opts).unwrap();
        assert!((r.a_norms[0] / r0.a_norms[0] - 1.0).abs() < 1e-9, "t={t}");
        assert!((r.b_norms[0] / r0.b_norms[0] - 1.0).abs() < 1e-9, "t={t}");
    }
}

#[test]
fn supercritical_repulsive_brackets_decrease() {
    let g = Grid::cube(2, 256, 16.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.0);
    let w = TimeCoefficient::constant(-1.0);
    let pot = Potential::isotropic(w.clone(), 2);
    let nl = NonlinearitySpec::power(1.0, 2);
    let pair = FundamentalPair::solve(&w, 0, 0.0, 1.0, DEFAULT_TOL).unwrap();
    let ab = ab_law_residuals(&run(&u0, &pot, &nl, 1.0, 2e-3, 5), &pair, &pot, &nl).unwrap();
    assert!(ab.max_increase() <= 0.0, "{}", ab.max_increase());
    assert!(ab.a.rhs.iter().all(|r| *r <= 0.0));
}

#[test]
fn ab_laws_reject_anisotropy() {
    let g = Grid::cube(2, 32, 8.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.0);
    let pot = Potential::harmonic(vec![TimeCoefficient::constant(1.0), TimeCoefficient::constant(2.0)]);
    let nl = NonlinearitySpec::linear();
    let tr = run(&u0, &pot, &nl, 0.1, 1e-2, 1);
    let pair = FundamentalPair::solve(&TimeCoefficient::constant(1.0), 0, 0.0, 1.0, DEFAULT_TOL).unwrap();
    assert!(ab_law_residuals(&tr, &pair, &pot, &nl).is_err());
}

#[test]
fn j_law_critical_and_supercritical() {
    let g = Grid::cube(1, 1024, 40.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.0);
    let pot = Potential::free(1);
    let nl = NonlinearitySpec::power(1.0, 2);
    let (vals, series) = pseudo_conformal_residual(&run(&u0, &pot, &nl, 2.0, 1e-3, 10), &pot, &nl).unwrap();
    assert!(vals.iter().all(|v| (v / vals[0] - 1.0).abs() < 1e-6));
    assert!(series.max_abs() < 1e-5);
    assert!(pseudo_conformal_residual(&run(&u0, &Potential::isotropic(TimeCoefficient::constant(1.0), 1), &nl, 0.1, 1e-2, 1), &Potential::isotropic(TimeCoefficient::constant(1.0), 1), &nl).is_err());

    let g2 = Grid::cube(2, 128, 24.0).unwrap();
    let u2 = gaussian(&g2, 1.0, 0.0);
    let free2 = Potential::free(2);
    let (vals, _) = pseudo_conformal_residual(&run(&u2, &free2, &nl, 1.0, 2e-3, 5), &free2, &nl).unwrap();
    assert!(vals.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn inv_identities_hold() {
    let g = Grid::cube(1, 256, 12.0).unwrap();
    let u = gaussian(&g, 1.0, 0.5).with_time(1.3);
    let pair = FundamentalPair::solve(&TimeCoefficient::cosine(), 0, 0.0, 2.0, DEFAULT_TOL).unwrap();
    let c = inv_check(&u, &pair, 0, 1.3).unwrap();
    assert!(c.x_identity_error < 1e-9 && c.grad_identity_error < 1e-9);
    assert!(c.x_norm <= c.x_bound * (1.0 + 1e-12));
    assert!(c.grad_norm <= c.grad_bound * (1.0 + 1e-12));
}

#[test]
fn repulsive_sobolev_growth_rates() {
    let g = Grid::cube(1, 8192, 90.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.0);
    let omega = [TimeCoefficient::constant(-1.0)];
    let times: Vec<f64> = (0..60).map(|i| 0.75 + 2.25 * i as f64 / 59.0).collect();
    let fields: Vec<WaveField> = times.iter().map(|&t| mehler_compose(&u0, &omega, 0.0, t, DEFAULT_TOL, None).unwrap()).collect();
    for k in 1..=3 {
        let v: Vec<f64> = fields.iter().map(|u| sobolev_norm(u, k)).collect();
        let f = growth_fit(&times, &v, k).unwrap();
        assert_eq!(f.preferred, GrowthModel::Exponential, "{f:?}");
        assert!((f.rate() / k as f64 - 1.0).abs() < 0.1, "k={k}: {}", f.rate());
    }
}

#[test]
fn free_momenta_grow_algebraically() {
    let g = Grid::cube(1, 4096, 160.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.0);
    let omega = [TimeCoefficient::constant(0.0)];
    let times: Vec<f64> = (0..60).map(|i| 5.0 + 20.0 * i as f64 / 59.0).collect();
    let fields: Vec<WaveField> = times.iter().map(|&t| mehler_compose(&u0, &omega, 0.0, t, DEFAULT_TOL, None).unwrap()).collect();
    for k in 1..=2 {
        let v: Vec<f64> = fields.iter().map(|u| momentum_norm(u, k)).collect();
        let f = growth_fit(&times, &v, k).unwrap();
        assert_eq!(f.preferred, GrowthModel::Algebraic, "{f:?}");
        assert!((f.exponent() / k as f64 - 1.0).abs() < 0.1, "k={k}: {}", f.exponent());
    }
}

#[test]
fn mixed_norm_sup_in_time_of_mass() {
    let g = Grid::cube(1, 256, 12.0).unwrap();
    let u0 = gaussian(&g, 1.0, 0.2);
    let tr = run(&u0, &Potential::isotropic(TimeCoefficient::constant(1.0), 1), &NonlinearitySpec::cubic(1.0), 1.0, 1e-2, 10);
    let n = mixed_norm(&tr.snapshots, f64::INFINITY, 2.0).unwrap();
    assert!((n / u0.mass().sqrt() - 1.0).abs() < 1e-12);
    assert!(admissible(8.0, 4.0, 1));
    // constant-in-time L² norm integrates to T^{1/p}
    let m = mixed_norm(&tr.snapshots, 4.0, 2.0).unwrap();
    assert!((m / u0.mass().sqrt() - 1.0).abs() < 1e-12);
}
