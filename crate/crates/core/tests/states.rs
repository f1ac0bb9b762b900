use std::f64::consts::PI;

use handshake_core::states::*;
use handshake_core::PhysicalConstants;
use proptest::prelude::*;

// Closed-form slice integrals over the x-y plane at height z (a0 units).
fn slice_ground(z: f64) -> f64 {
    let a = z.abs();
    (-2.0 * a).exp() * (2.0 * a + 1.0) / 2.0
}

fn slice_excited(z: f64) -> f64 {
    let a = z.abs();
    z * z / 16.0 * (-a).exp() * (a + 1.0)
}

fn slice_overlap(z: f64) -> f64 {
    let a = z.abs();
    z / (2.0 * 2f64.sqrt()) * (-1.5 * a).exp() * (2.0 * a / 3.0 + 4.0 / 9.0)
}

fn z_grid() -> Vec<f64> {
    (0..=8000).map(|i| -40.0 + i as f64 * 0.01).collect()
}

#[test]
fn ground_state_at_origin() {
    let v = eval_eigenstate(&EigenState::s100(), 0.0, 1.234).unwrap();
    assert!((v - 0.564_189_583_547_756_3).abs() < 1e-15);
}

#[test]
fn excited_state_vanishes_on_node_plane() {
    for r in [0.0, 0.5, 3.0, 17.0] {
        let v = eval_eigenstate(&EigenState::p210(), r, PI / 2.0).unwrap();
        assert!(v.abs() < 1e-16);
    }
}

#[test]
fn excited_state_on_axis() {
    // normalized form 2 e^{-1} / (4 sqrt(2 pi)), evaluated to 20 digits offline
    let v = eval_eigenstate(&EigenState::p210(), 2.0, 0.0).unwrap();
    assert!((v - 0.073_381_331_586_869_95).abs() < 1e-15, "{v}");
}

#[test]
fn negative_radius_is_a_domain_error() {
    assert!(eval_eigenstate(&EigenState::s100(), -1e-9, 0.0).is_err());
}

#[test]
fn orthonormal_pairs() {
    let spec = QuadratureSpec::default();
    let (s, p) = (EigenState::s100(), EigenState::p210());
    let ss = norm_integral(&s, &s, &spec).unwrap();
    let pp = norm_integral(&p, &p, &spec).unwrap();
    let sp = norm_integral(&s, &p, &spec).unwrap();
    assert!((ss.value - 1.0).abs() < 1e-8 && ss.converged);
    assert!((pp.value - 1.0).abs() < 1e-8 && pp.converged);
    assert!(sp.value.abs() < 1e-8 && sp.converged);
}

#[test]
fn printed_prefactor_gives_norm_one_third() {
    let ratio = P210_PREFACTOR_UNNORMALIZED / P210_PREFACTOR;
    assert!((ratio * ratio - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn dipole_strength_matches_closed_form() {
    let k = PhysicalConstants::codata2018();
    let spec = QuadratureSpec::default();
    let (s, p) = (EigenState::s100(), EigenState::p210());
    let d = dipole_strength(&s, &p, &spec, &k).unwrap();
    let exact = 2.0 * 128.0 * 2f64.sqrt() / 243.0;
    assert!((d.q_a0 / exact - 1.0).abs() < 1e-10, "{}", d.q_a0);
    assert!((d.si / (exact * k.electron_charge_q * k.bohr_radius_a0) - 1.0).abs() < 1e-10);
    for (a, b) in [(s, s), (p, p)] {
        assert!(dipole_strength(&a, &b, &spec, &k).unwrap().q_a0.abs() < 1e-10);
    }
}

#[test]
fn quadrature_converges_under_refinement() {
    let spec = QuadratureSpec::default();
    let fine = QuadratureSpec {
        radial_points: 4000,
        angular_points: 400,
        ..spec
    };
    let (s, p) = (EigenState::s100(), EigenState::p210());
    for (a, b) in [(s, s), (p, p), (s, p)] {
        let x = norm_integral(&a, &b, &spec).unwrap().value;
        let y = norm_integral(&a, &b, &fine).unwrap().value;
        assert!((x - y).abs() < 1e-8);
    }
}

#[test]
fn cutoff_tail_below_limit() {
    assert!(QuadratureSpec::default().ground_tail() < 1e-10);
}

#[test]
fn slices_match_closed_forms() {
    let spec = QuadratureSpec::default();
    let st = SuperpositionState::two(0.6, 0.8, 0.0).unwrap();
    let z = [-7.5, -2.0, -0.3, 0.0, 0.01, 1.0, 4.0, 12.0];
    let prof = mixed_density_slice(&st, 0.0, &z, &spec).unwrap();
    for (i, &zi) in z.iter().enumerate() {
        assert!((prof.ground[i] - 0.36 * slice_ground(zi)).abs() < 1e-12, "z={zi}");
        assert!((prof.excited[i] - 0.64 * slice_excited(zi)).abs() < 1e-12, "z={zi}");
        assert!((prof.cross[i] - 0.96 * slice_overlap(zi)).abs() < 1e-12, "z={zi}");
    }
}

#[test]
fn pure_ground_state_has_no_cross_term() {
    let spec = QuadratureSpec::default();
    let st = SuperpositionState::two(1.0, 0.0, 0.3).unwrap();
    let prof = mixed_density_slice(&st, 2.0, &z_grid(), &spec).unwrap();
    assert!(prof.cross.iter().all(|v| *v == 0.0));
    assert!((prof.z_integral() - 1.0).abs() < 1e-6);
}

#[test]
fn equal_mixture_integrates_to_one_and_flips_with_half_period() {
    let spec = QuadratureSpec::default();
    let h = 0.5f64.sqrt();
    let st = SuperpositionState::two(h, h, 0.0).unwrap();
    let z = z_grid();
    let a = mixed_density_slice(&st, 0.0, &z, &spec).unwrap();
    let b = mixed_density_slice(&st, PI, &z, &spec).unwrap();
    assert!((a.z_integral() - 1.0).abs() < 1e-6);
    for (x, y) in a.cross.iter().zip(&b.cross) {
        assert!((x + y).abs() < 1e-15);
    }
}

#[test]
fn unnormalized_state_is_rejected() {
    assert!(SuperpositionState::two(0.5, 0.5, 0.0).is_err());
}

#[test]
fn dipole_moment_examples() {
    let st = SuperpositionState::two(1.0, 0.0, 0.0).unwrap();
    for t in [0.0, 1e-16, 3e-15] {
        assert_eq!(dipole_moment(&st, 1.49, 1.55e16, t).unwrap().moment, 0.0);
    }
    let phi = 0.7;
    let h = 0.5f64.sqrt();
    let st = SuperpositionState::two(h, h, phi).unwrap();
    let w = 1.55e16;
    let m = dipole_moment(&st, 2.0, w, -phi / w).unwrap();
    assert!((m.moment - 1.0).abs() < 1e-12);
}

#[test]
fn dipole_velocity_matches_differentiated_slice_moment() {
    let spec = QuadratureSpec::default();
    let st = SuperpositionState::two(0.6, 0.8, 0.4).unwrap();
    let z = z_grid();
    let d12 = d12_exact();
    // time in units of 1/omega0, so omega0 = 1 here
    let t = 0.9;
    let h = 1e-4;
    let zp = mixed_density_slice(&st, t + h, &z, &spec).unwrap().first_moment();
    let zm = mixed_density_slice(&st, t - h, &z, &spec).unwrap().first_moment();
    let fd = (zp - zm) / (2.0 * h);
    let v = dipole_moment(&st, d12, 1.0, t).unwrap().velocity;
    assert!((fd / v - 1.0).abs() < 1e-6, "{fd} vs {v}");
}

#[test]
fn transition_energy_both_ways() {
    let te = transition_energy(&PhysicalConstants::codata2018());
    assert!((te.rydberg_ev - 10.204).abs() < 1e-3);
    assert!((te.omega0 / 1.55e16 - 1.0).abs() < 1e-2);
    assert!((te.wavelength / 1.22e-7 - 1.0).abs() < 1e-2);
    assert!((te.printed_ev - 7.65).abs() < 1e-2);
    assert!(te.discrepancy);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn charge_is_conserved(b2 in 0.0f64..=1.0, phi in -PI..PI, t in -10.0f64..10.0) {
        let spec = QuadratureSpec { radial_points: 400, ..Default::default() };
        let st = SuperpositionState::from_excited_fraction(b2, phi).unwrap();
        let z: Vec<f64> = (0..=4000).map(|i| -40.0 + i as f64 * 0.02).collect();
        let prof = mixed_density_slice(&st, t, &z, &spec).unwrap();
        prop_assert!((prof.z_integral() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pure_states_are_stationary(excited in any::<bool>(), t in -50.0f64..50.0) {
        let spec = QuadratureSpec { radial_points: 200, ..Default::default() };
        let st = if excited {
            SuperpositionState::two(0.0, 1.0, 0.0).unwrap()
        } else {
            SuperpositionState::two(1.0, 0.0, 0.0).unwrap()
        };
        let z: Vec<f64> = (0..=200).map(|i| -10.0 + i as f64 * 0.1).collect();
        let a = mixed_density_slice(&st, 0.0, &z, &spec).unwrap();
        let b = mixed_density_slice(&st, t, &z, &spec).unwrap();
        for (x, y) in a.total.iter().zip(&b.total) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitudes_are_real_and_finite(r in 0.0f64..60.0, theta in 0.0f64..=PI) {
        for s in [EigenState::s100(), EigenState::p210()] {
            prop_assert!(eval_eigenstate(&s, r, theta).unwrap().is_finite());
        }
    }
}
