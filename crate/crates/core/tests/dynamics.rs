use std::f64::consts::PI;

use handshake_core::dynamics::timescales::*;
use handshake_core::dynamics::*;
use handshake_core::states::{d12_exact, transition_energy};
use handshake_core::PhysicalConstants;
use proptest::prelude::*;

fn logistic(x: f64) -> f64 {
    1.0 / (x.exp() + 1.0)
}

#[test]
fn half_start_matches_logistic_at_one_tau() {
    let s = TwoAtomScenario {
        t_start: 0.0,
        t_end: 5.0,
        initial_b2_alpha: 0.5,
        samples: 501,
        ..Default::default()
    };
    let tr = integrate_two_atom(&s, 1e-10).unwrap();
    let b = tr.column("b2_alpha").unwrap();
    assert!((b[100] - 0.268_941_421_369_995_1).abs() < 1e-8, "{}", b[100]);
    assert!((tr.power[0] - 0.25).abs() < 1e-15);
    let peak = tr.power.iter().cloned().fold(0.0, f64::max);
    assert_eq!(peak, tr.power[0]);
}

#[test]
fn logistic_oracle_over_twenty_tau() {
    let s = TwoAtomScenario {
        t_start: -10.0,
        t_end: 10.0,
        initial_b2_alpha: logistic(-10.0),
        ..Default::default()
    };
    let tr = integrate_two_atom(&s, 1e-9).unwrap();
    for (t, row) in tr.times.iter().zip(&tr.states) {
        let want = logistic(*t);
        assert!((row[0] - want).abs() < 1e-6, "t={t}");
        assert!((row[2] - (1.0 - want)).abs() < 1e-6);
    }
}

#[test]
fn time_to_half_from_small_seed() {
    // the absorber seed 1e-6 seen from the emitter side
    let s = TwoAtomScenario {
        t_start: 0.0,
        t_end: 30.0,
        initial_b2_alpha: 1.0 - 1e-6,
        samples: 30001,
        ..Default::default()
    };
    let tr = integrate_two_atom(&s, 1e-10).unwrap();
    let b = tr.column("b2_alpha").unwrap();
    let i = b.iter().position(|v| *v <= 0.5).unwrap();
    let (t0, t1) = (tr.times[i - 1], tr.times[i]);
    let t_half = t0 + (t1 - t0) * (b[i - 1] - 0.5) / (b[i - 1] - b[i]);
    let expected = ((1.0 - 1e-6) / 1e-6f64).ln();
    assert!((expected - 13.815_509_557_963_773).abs() < 1e-12);
    assert!((t_half - expected).abs() < 1e-5, "{t_half}");
    assert!((logistic_offset(1.0 - 1e-6, 0.0, 1.0) - expected).abs() < 1e-9);
}

#[test]
fn analytic_examples() {
    let mid = analytic_two_atom(3.0, 2.0, 3.0).unwrap();
    for v in [mid.b2_alpha, mid.a2_alpha, mid.b2_beta, mid.a2_beta] {
        assert_eq!(v, 0.5);
    }
    let late = analytic_two_atom(1e6, 1.0, 0.0).unwrap();
    assert!(late.b2_alpha < 1e-300 && late.b2_beta == 1.0);
    let a = analytic_two_atom(9f64.ln(), 1.0, 0.0).unwrap();
    assert!((a.b2_alpha - 0.1).abs() < 1e-15);
    assert!(analytic_two_atom(0.0, 0.0, 0.0).is_err());
}

#[test]
fn competition_equal_seeds_without_detuning_stay_equal() {
    let s = CompetitionScenario {
        delta_omega: 0.0,
        ..Default::default()
    };
    let tr = integrate_competition(&s, 1e-9).unwrap();
    for row in &tr.states {
        assert!((row[0] - row[1]).abs() < 1e-9);
    }
}

#[test]
fn competition_detuned_winner_takes_all() {
    let s = CompetitionScenario::default();
    assert_eq!(s.delta_omega, 0.3);
    let tr = integrate_competition(&s, 1e-9).unwrap();
    let f = tr.final_state();
    assert!(f[0] > 0.95 && f[1] < 0.05, "{f:?}");
}

#[test]
fn competition_weak_detuning_splits() {
    let s = CompetitionScenario {
        delta_omega: 0.15,
        ..Default::default()
    };
    let tr = integrate_competition(&s, 1e-9).unwrap();
    let f = tr.final_state();
    assert!(f[0] > 0.2 && f[0] < 0.8 && f[1] > 0.2 && f[1] < 0.8, "{f:?}");
    assert!((f[0] + f[1] - 1.0).abs() < 1e-3);
}

#[test]
fn competition_with_one_empty_seed_is_the_two_atom_problem() {
    let c = CompetitionScenario {
        initial_b2: (1e-4, 0.0),
        t_start: 0.0,
        t_end: 20.0,
        samples: 201,
        ..Default::default()
    };
    let comp = integrate_competition(&c, 1e-10).unwrap();
    let two = TwoAtomScenario {
        t_start: 0.0,
        t_end: 20.0,
        initial_b2_alpha: 1.0 - 1e-4,
        samples: 201,
        ..Default::default()
    };
    let tr = integrate_two_atom(&two, 1e-10).unwrap();
    for (a, b) in comp.states.iter().zip(&tr.states) {
        assert!((a[0] - b[2]).abs() < 1e-8);
        assert_eq!(a[1], 0.0);
    }
}

#[test]
fn competition_rejects_bad_seeds() {
    for seeds in [(0.0, 0.0), (-1e-6, 1e-6), (0.6, 0.5)] {
        let s = CompetitionScenario {
            initial_b2: seeds,
            ..Default::default()
        };
        assert!(integrate_competition(&s, 1e-9).is_err());
    }
}

#[test]
fn cascade_upper_envelope_peaks_first() {
    let s = CascadeScenario {
        initial: (1e-4, 1e-4, 1.0 - 2e-4),
        ..Default::default()
    };
    let tr = integrate_cascade(&s, 1e-9).unwrap();
    let up = tr.peak_time("upper_envelope").unwrap();
    let lo = tr.peak_time("lower_envelope").unwrap();
    assert!(up < lo, "{up} {lo}");
}

#[test]
fn cascade_default_settles_in_ground_state() {
    let tr = integrate_cascade(&CascadeScenario::default(), 1e-9).unwrap();
    let f = tr.final_state();
    assert!(f[0] > 0.999 && f[1] < 1e-3 && f[2] < 1e-3, "{f:?}");
    assert!(tr.peak_time("upper_envelope").unwrap() < tr.peak_time("lower_envelope").unwrap());
}

#[test]
fn cascade_fixed_point_is_constant() {
    let s = CascadeScenario {
        initial: (0.0, 0.0, 1.0),
        ..Default::default()
    };
    let tr = integrate_cascade(&s, 1e-9).unwrap();
    assert!(tr.states.iter().all(|r| r == &vec![0.0, 0.0, 1.0]));
}

#[test]
fn cascade_rejects_unnormalized_start() {
    let s = CascadeScenario {
        initial: (0.1, 0.1, 0.9),
        ..Default::default()
    };
    assert!(integrate_cascade(&s, 1e-9).is_err());
}

#[test]
fn tolerance_range_enforced() {
    let s = TwoAtomScenario::default();
    assert!(integrate_two_atom(&s, 1e-2).is_err());
    assert!(integrate_two_atom(&s, 1e-13).is_err());
}

#[test]
fn coupling_power_scaling() {
    let k = PhysicalConstants::codata2018();
    let w = transition_energy(&k).omega0;
    let p1 = coupling_power(1e-29, w, 1.0, &k).unwrap();
    let p2 = coupling_power(1e-29, w, 2.0, &k).unwrap();
    let p3 = coupling_power(2e-29, w, 1.0, &k).unwrap();
    assert!((p1 / p2 - 2.0).abs() < 1e-14);
    assert!((p3 / p1 - 4.0).abs() < 1e-14);
}

#[test]
fn transition_times() {
    let k = PhysicalConstants::codata2018();
    let free = transition_time(1.0, &k, None).unwrap();
    assert!((free - 0.041).abs() < 0.0041, "{free}");
    let optics = transition_time(1.0, &k, Some(1.0)).unwrap();
    assert!((optics - 2e-9).abs() < 0.3e-9, "{optics}");
    let te = transition_energy(&k);
    let chain = transition_chain(1.0, 3.0, te.printed_j, &k).unwrap();
    assert!((chain.tau - 0.04).abs() < 0.004);
    // with the quadrature dipole strength and the Rydberg energy the same
    // chain gives a longer time
    let exact = transition_chain(1.0, d12_exact(), te.rydberg_j, &k).unwrap();
    assert!(exact.tau > chain.tau);
}

#[test]
fn per_cycle_work_examples() {
    assert!(per_cycle_work(1.0, 1.0, 0.0).abs() < 1e-15);
    let gain = per_cycle_work(2.0, 3.0, -PI / 2.0);
    assert!((gain - 3.0).abs() < 1e-12 && gain > 0.0);
    for k in 0..50 {
        let phi = -PI + 2.0 * PI * k as f64 / 50.0;
        let d = per_cycle_work(1.3, 0.7, phi) - per_cycle_work_closed(1.3, 0.7, phi);
        assert!(d.abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn two_atom_conserves_and_is_monotone(b0 in 1e-6f64..0.999_999, tau in 0.1f64..10.0, tol_exp in -11i32..-5) {
        let s = TwoAtomScenario { tau, t_start: 0.0, t_end: 20.0 * tau, initial_b2_alpha: b0, samples: 401, ..Default::default() };
        let tol = 10f64.powi(tol_exp);
        let tr = integrate_two_atom(&s, tol).unwrap();
        prop_assert!(tr.conservation_error() < 10.0 * tol);
        let b = tr.column("b2_alpha").unwrap();
        prop_assert!(b.windows(2).all(|w| w[1] <= w[0]));
        let bb = tr.column("b2_beta").unwrap();
        prop_assert!(bb.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn competition_conserves(dw in 0.0f64..0.6, s1 in 1e-7f64..1e-3, s2 in 1e-7f64..1e-3) {
        let s = CompetitionScenario { delta_omega: dw, initial_b2: (s1, s2), samples: 401, ..Default::default() };
        let tr = integrate_competition(&s, 1e-9).unwrap();
        prop_assert!(tr.conservation_error() < 1e-8);
        prop_assert!(tr.states.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn cascade_conserves(seed in 1e-7f64..1e-3, ratio in 1.0f64..3.0) {
        let s = CascadeScenario { tau_beta: 1.0 / ratio, initial: (seed, seed, 1.0 - 2.0 * seed), samples: 601, ..Default::default() };
        let tr = integrate_cascade(&s, 1e-9).unwrap();
        prop_assert!(tr.conservation_error() < 1e-8);
    }

    #[test]
    fn halving_tolerance_moves_final_state_less_than_tolerance(b0 in 0.01f64..0.99, tol_exp in -10i32..-5) {
        let tol = 10f64.powi(tol_exp);
        let s = TwoAtomScenario { t_start: 0.0, t_end: 10.0, initial_b2_alpha: b0, samples: 11, ..Default::default() };
        let a = integrate_two_atom(&s, tol).unwrap();
        let b = integrate_two_atom(&s, tol / 2.0).unwrap();
        for (x, y) in a.final_state().iter().zip(b.final_state()) {
            prop_assert!((x - y).abs() <= tol);
        }
    }

    #[test]
    fn integrator_tracks_logistic(b0 in 1e-4f64..0.9999, tau in 0.5f64..4.0) {
        let s = TwoAtomScenario { tau, t_start: 0.0, t_end: 10.0 * tau, initial_b2_alpha: b0, samples: 201, ..Default::default() };
        let tr = integrate_two_atom(&s, 1e-9).unwrap();
        for (t, row) in tr.times.iter().zip(&tr.states) {
            prop_assert!((row[0] - s.analytic_b2_alpha(*t)).abs() < 1e-6);
        }
    }
}
