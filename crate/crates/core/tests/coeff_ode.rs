use std::f64::consts::PI;

use proptest::prelude::*;
use tdnls::coeff::{
    caustic_times, mehler_coefficients, solve_fundamental, structural_checks, wronskian_residual, FundamentalPair,
    TimeCoefficient, DEFAULT_TOL,
};

fn pair(omega: TimeCoefficient, s: f64, t: f64, tol: f64) -> FundamentalPair {
    FundamentalPair::solve(&omega, 0, s, t, tol).unwrap()
}

/// Classical RK4 on the 2x2 system with a fixed step, as an independent oracle.
fn rk4_pair(omega: impl Fn(f64) -> f64, s: f64, t: f64, n: usize) -> [f64; 4] {
    let f = |t: f64, y: [f64; 4]| {
        let w = omega(t);
        [y[1], -w * y[0], y[3], -w * y[2]]
    };
    let h = (t - s) / n as f64;
    let mut y = [0.0, 1.0, 1.0, 0.0];
    for i in 0..n {
        let t0 = s + i as f64 * h;
        let add = |a: [f64; 4], b: [f64; 4], c: f64| [a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2], a[3] + c * b[3]];
        let k1 = f(t0, y);
        let k2 = f(t0 + h / 2.0, add(y, k1, h / 2.0));
        let k3 = f(t0 + h / 2.0, add(y, k2, h / 2.0));
        let k4 = f(t0 + h, add(y, k3, h));
        for j in 0..4 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

#[test]
fn closed_forms_on_zero_to_ten() {
    type Closed = fn(f64) -> (f64, f64);
    let cases: [(f64, Closed); 3] = [
        (0.0, |t| (t, 1.0)),
        (1.0, |t| (t.sin(), t.cos())),
        (-1.0, |t| (t.sinh(), t.cosh())),
    ];
    for (w, closed) in cases {
        let p = pair(TimeCoefficient::constant(w), 0.0, 10.0, DEFAULT_TOL);
        for i in 0..=1000 {
            let t = i as f64 * 0.01;
            let st = p.eval(t).unwrap();
            let (mu, nu) = closed(t);
            assert!((st.mu - mu).abs() <= 1e-8 * mu.abs().max(1.0), "Ω={w} t={t}: μ {} vs {mu}", st.mu);
            assert!((st.nu - nu).abs() <= 1e-8 * nu.abs().max(1.0), "Ω={w} t={t}: ν {} vs {nu}", st.nu);
            let r = wronskian_residual(&p, t).unwrap();
            assert!(r.abs() <= 1e-9, "Ω={w} t={t}: wronskian {r:e}");
        }
    }
}

#[test]
fn wronskian_on_the_oscillator_at_pi() {
    let p = pair(TimeCoefficient::constant(1.0), 0.0, 4.0, DEFAULT_TOL);
    assert!(wronskian_residual(&p, PI).unwrap().abs() <= 100.0 * DEFAULT_TOL);
}

#[test]
fn double_exponential_against_rk4() {
    let tol = 1e-10;
    let omega = TimeCoefficient::double_exponential();
    let p = pair(omega.clone(), 0.0, 3.0, tol);
    let r = wronskian_residual(&p, 3.0).unwrap();
    assert!(r.abs() <= 10.0 * tol, "residual {r:e}");
    // the growing solution is well conditioned; compare it to the oracle
    let oracle = rk4_pair(|t| omega.eval(t).unwrap(), 0.0, 3.0, 200_000);
    let st = p.eval(3.0).unwrap();
    assert!((st.nu / oracle[2] - 1.0).abs() < 1e-8, "{} vs {}", st.nu, oracle[2]);
    assert!((st.nu_dot / oracle[3] - 1.0).abs() < 1e-8);
    // μ is the decaying solution: local errors are amplified along ν
    let mu_exact = (1.0 - 3f64.exp()).exp() - (1.0 - 6f64.exp()).exp();
    assert!((st.mu - mu_exact).abs() < tol * st.nu.abs(), "{} vs {mu_exact}", st.mu);
}

#[test]
fn pulsed_caustics_match_dense_scan() {
    let omega = TimeCoefficient::pulsed();
    let p = pair(omega.clone(), 0.0, 8.0, DEFAULT_TOL);
    let found = caustic_times(std::slice::from_ref(&p), (0.0, 8.0)).unwrap();
    // oracle: fine RK4 grid scan for sign changes of μ
    let n = 80_000;
    let mut y = rk4_pair(|t| omega.eval(t).unwrap(), 0.0, 1e-4, 1);
    let mut zeros = Vec::new();
    let h = 8.0 / n as f64;
    let mut t = 1e-4;
    let mut prev = y[0];
    while t + h <= 8.0 + 1e-12 {
        let step = rk4_step(&omega, t, y, h);
        if step[0].signum() != prev.signum() {
            zeros.push(t + h * prev / (prev - step[0]));
        }
        prev = step[0];
        y = step;
        t += h;
    }
    assert!(!zeros.is_empty());
    assert_eq!(found.len(), zeros.len(), "{found:?} vs {zeros:?}");
    for (f, z) in found.iter().zip(&zeros) {
        assert!((f.t - z).abs() < 1e-6);
    }
}

fn rk4_step(omega: &TimeCoefficient, t0: f64, y: [f64; 4], h: f64) -> [f64; 4] {
    let f = |t: f64, y: [f64; 4]| {
        let w = omega.eval(t).unwrap();
        [y[1], -w * y[0], y[3], -w * y[2]]
    };
    let add = |a: [f64; 4], b: [f64; 4], c: f64| [a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2], a[3] + c * b[3]];
    let k1 = f(t0, y);
    let k2 = f(t0 + h / 2.0, add(y, k1, h / 2.0));
    let k3 = f(t0 + h / 2.0, add(y, k2, h / 2.0));
    let k4 = f(t0 + h, add(y, k3, h));
    let mut out = y;
    for j in 0..4 {
        out[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    out
}

#[test]
fn oscillating_envelope_is_small() {
    let p = pair(TimeCoefficient::cosine(), 0.0, 10.0, DEFAULT_TOL);
    let r = structural_checks(&p, (0.0, 10.0)).unwrap();
    assert!(r.envelope_rate <= 2.0, "{}", r.envelope_rate);
    // Gronwall with sup|Ω| = 1
    assert!(r.envelope_rate <= 1.0 + 1e-9);
    assert!(r.monotone.is_none());
}

#[test]
fn repulsive_monotonicity() {
    let p = pair(TimeCoefficient::constant(-1.0), 0.0, 5.0, DEFAULT_TOL);
    let m = structural_checks(&p, (0.0, 5.0)).unwrap().monotone.unwrap();
    assert!(m.nu_at_least_one && m.mu_at_least_elapsed && m.nu_dot_nonnegative && m.mu_dot_at_least_one);
}

#[test]
fn gamma_equals_nu_over_mu() {
    let omega = TimeCoefficient::cosine();
    let pairs = solve_fundamental(&[omega.clone(), omega], 0.0, 1.2, DEFAULT_TOL).unwrap();
    for &t in &[0.1, 0.4, 0.9, 1.2] {
        let m = mehler_coefficients(&pairs, t).unwrap();
        let st = pairs[0].eval(t).unwrap();
        for a in &m.axes {
            assert!((a.gamma - st.nu / st.mu).abs() < 1e-7 * (1.0 + a.gamma.abs()), "t={t}");
        }
    }
}

#[test]
fn caustic_count_on_unit_oscillator() {
    let p = pair(TimeCoefficient::constant(1.0), 0.0, 30.0, DEFAULT_TOL);
    for &(a, b) in &[(0.5, 29.0), (1.0, 10.0), (3.0, 3.5)] {
        let n = caustic_times(std::slice::from_ref(&p), (a, b)).unwrap().len() as i64;
        let exact = ((b / PI).floor() - (a / PI).floor()) as i64;
        assert_eq!(n, exact, "[{a}, {b}]");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wronskian_holds_for_random_traps(w in -4.0f64..4.0, amp in 0.0f64..2.0, t_end in 0.5f64..6.0) {
        let omega = TimeCoefficient::named("cosine", &[("offset".to_string(), w), ("amplitude".to_string(), amp)].into_iter().collect()).unwrap();
        let p = pair(omega, 0.0, t_end, DEFAULT_TOL);
        for s in p.samples() {
            let r = wronskian_residual(&p, s.t).unwrap();
            prop_assert!(r.abs() <= 100.0 * DEFAULT_TOL, "t={} r={r:e}", s.t);
        }
    }

    #[test]
    fn shift_in_time(c in -2.0f64..2.0, freq in 0.3f64..2.0) {
        let base = |phase: f64| TimeCoefficient::named(
            "cosine",
            &[("frequency".to_string(), freq), ("phase".to_string(), phase)].into_iter().collect(),
        ).unwrap();
        // Ω(· + c) started at 0 against Ω started at c
        let shifted = pair(base(freq * c), 0.0, 4.0, DEFAULT_TOL);
        let direct = pair(base(0.0), c, c + 4.0, DEFAULT_TOL);
        for i in 0..=20 {
            let tau = 0.2 * i as f64;
            let a = shifted.eval(tau).unwrap();
            let b = direct.eval(c + tau).unwrap();
            let scale = 1.0 + a.mu.abs().max(a.nu.abs());
            prop_assert!((a.mu - b.mu).abs() <= 10.0 * DEFAULT_TOL * scale);
            prop_assert!((a.nu - b.nu).abs() <= 10.0 * DEFAULT_TOL * scale);
        }
    }

    #[test]
    fn constant_traps_match_closed_forms(omega in 0.2f64..2.0, attractive in any::<bool>()) {
        let w = if attractive { omega * omega } else { -omega * omega };
        let p = pair(TimeCoefficient::constant(w), 0.0, 10.0, DEFAULT_TOL);
        for i in 0..=50 {
            let t = 0.2 * i as f64;
            let st = p.eval(t).unwrap();
            let (mu, nu) = if attractive {
                ((omega * t).sin() / omega, (omega * t).cos())
            } else {
                ((omega * t).sinh() / omega, (omega * t).cosh())
            };
            let scale = mu.abs().max(nu.abs()).max(1.0);
            prop_assert!((st.mu - mu).abs() <= 10.0 * DEFAULT_TOL * scale, "t={t}: {} vs {mu}", st.mu);
            prop_assert!((st.nu - nu).abs() <= 10.0 * DEFAULT_TOL * scale);
        }
    }
}
