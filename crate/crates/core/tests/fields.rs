#![allow(clippy::field_reassign_with_default)]

use std::f64::consts::PI;

use handshake_core::fields::*;
use proptest::prelude::*;

fn small_cfg() -> HandshakeFieldConfig {
    let mut cfg = HandshakeFieldConfig::default();
    cfg.grid = GridSpec {
        x_min: -5.0,
        x_max: 17.0,
        y_min: -10.0,
        y_max: 10.0,
        nx: 221,
        ny: 100,
    };
    cfg
}

fn period_times(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

#[test]
fn retarded_term_alone_matches_closed_form() {
    let mut cfg = HandshakeFieldConfig::default();
    cfg.weight_beta = 0.0;
    for &(x, y, t) in &[(1.0, 0.0, 0.0), (-3.0, 4.0, 1.1), (20.0, -7.0, -2.5)] {
        let r: f64 = x * x + y * y;
        let r = r.sqrt();
        let want = -(t - r).sin() / r;
        assert!((eval_handshake_potential(&cfg, x, y, t).unwrap() - want).abs() < 1e-15);
    }
}

#[test]
fn magnetic_field_of_single_source() {
    let mut cfg = HandshakeFieldConfig::default();
    cfg.weight_beta = 0.0;
    let (x, y, t): (f64, f64, f64) = (2.0, 1.5, 0.4);
    let r = (x * x + y * y).sqrt();
    // dA/dr for A = -sin(t - r)/r
    let da_dr = (t - r).cos() / r + (t - r).sin() / (r * r);
    let b = magnetic_field(&cfg, x, y, t).unwrap();
    assert!((b[0] - da_dr * y / r).abs() < 1e-10);
    assert!((b[1] + da_dr * x / r).abs() < 1e-10);
}

#[test]
fn far_field_decays_as_one_over_r() {
    let mut cfg = HandshakeFieldConfig::default();
    cfg.weight_beta = 0.0;
    let dir = [0.6, 0.8];
    for r in [10.0, 100.0, 1000.0] {
        let peak = period_times(64)
            .iter()
            .map(|&t| eval_handshake_potential(&cfg, r * dir[0], r * dir[1], t).unwrap().abs() * r)
            .fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 1e-3, "{peak}");
    }
    // both terms together still fall off
    let cfg = HandshakeFieldConfig::default();
    let a = cfg.phasor(1e4, 0.0).unwrap().norm();
    assert!(a < 2.1e-4);
}

#[test]
fn light_cone_delay_along_a_ray() {
    let mut cfg = HandshakeFieldConfig::default();
    cfg.weight_beta = 0.0;
    let dir = [0.28, -0.96];
    let (r1, r2) = (3.0, 7.5);
    for t in [0.0, 0.7, 2.0] {
        let a1 = r1 * eval_handshake_potential(&cfg, r1 * dir[0], r1 * dir[1], t).unwrap();
        let a2 = r2 * eval_handshake_potential(&cfg, r2 * dir[0], r2 * dir[1], t + (r2 - r1)).unwrap();
        assert!((a1 - a2).abs() < 1e-12);
    }
}

#[test]
fn swapping_atoms_and_reflecting_time_flips_sign() {
    let cfg = small_cfg();
    let dx = cfg.separation_dx;
    for &x in &[-3.0, 0.5, 4.0, 6.0, 11.0, 15.5] {
        for &y in &[-6.0, -0.2, 0.3, 8.0] {
            for &t in &[0.0, 1.3, 4.0] {
                let a = eval_handshake_potential(&cfg, x, y, t).unwrap();
                let b = eval_handshake_potential(&cfg, dx - x, y, PI / 2.0 - dx - t).unwrap();
                assert!((a + b).abs() < 1e-12, "{x} {y} {t}");
            }
        }
    }
}

#[test]
fn grid_marks_exclusion_discs() {
    let mut cfg = small_cfg();
    cfg.grid = GridSpec { x_min: -1.0, x_max: 13.0, y_min: -1.0, y_max: 1.0, nx: 141, ny: 21 };
    let g = evaluate_grid(&cfg).unwrap();
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let v = g.value(0, i, j);
            assert_eq!(v.is_nan(), cfg.is_excluded(g.x[i], g.y[j]));
        }
    }
    assert!(g.frames[0].iter().any(|v| v.is_nan()));
}

#[test]
fn frames_repeat_each_period_and_flip_each_half_period() {
    let mut cfg = small_cfg();
    cfg.times = vec![0.3, 0.3 + PI, 0.3 + 2.0 * PI];
    let mv = field_movie(&cfg).unwrap();
    let f = &mv.grid.frames;
    for ((a, b), c) in f[0].iter().zip(&f[1]).zip(&f[2]) {
        if a.is_nan() {
            continue;
        }
        assert!((a - c).abs() < 1e-12);
        assert!((a + b).abs() < 1e-12);
    }
}

#[test]
fn axis_maxima_travel_towards_the_absorber() {
    let mut cfg = small_cfg();
    cfg.times = period_times(17);
    let mv = field_movie(&cfg).unwrap();
    assert!(mv.peaks.iter().all(|p| !p.is_empty()));
    let track = track_peaks(&mv.peaks, PI);
    assert!(track.monotone_forward, "{:?}", track.displacements);
}

#[test]
fn standing_pattern_is_not_reported_as_travelling() {
    let peaks = vec![vec![2.0, 5.0], vec![2.0, 5.0], vec![2.0, 5.0]];
    assert!(!track_peaks(&peaks, 1.0).monotone_forward);
    let back = vec![vec![2.0, 5.0], vec![1.9, 4.9]];
    assert!(!track_peaks(&back, 1.0).monotone_forward);
}

#[test]
fn zero_contours_are_mirror_symmetric() {
    let cfg = small_cfg();
    let c = zero_crossing_contours(&cfg, 0.0).unwrap();
    let mut pts: Vec<[f64; 2]> = c.polylines.iter().flat_map(|p| p.points.clone()).collect();
    let mut mirrored: Vec<[f64; 2]> = pts.iter().map(|p| [p[0], -p[1]]).collect();
    let key = |a: &[f64; 2], b: &[f64; 2]| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1]));
    pts.sort_by(key);
    mirrored.sort_by(key);
    pts.dedup();
    mirrored.dedup();
    assert_eq!(pts.len(), mirrored.len());
    for (a, b) in pts.iter().zip(&mirrored) {
        assert!((a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9);
    }
}

#[test]
fn axis_crossings_match_sign_changes() {
    let cfg = HandshakeFieldConfig::default();
    for t in [0.0, 0.9, 2.2] {
        let c = zero_crossing_contours(&cfg, t).unwrap();
        let (lo, hi) = (1.0, cfg.separation_dx - 1.0);
        let n = 20_000;
        let mut changes = 0;
        let mut prev = eval_handshake_potential(&cfg, lo, 0.0, t).unwrap();
        for i in 1..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let v = eval_handshake_potential(&cfg, x, 0.0, t).unwrap();
            if prev * v < 0.0 {
                changes += 1;
            }
            prev = v;
        }
        assert!(changes > 0);
        assert_eq!(c.crossings_of(0.0, lo, hi), changes, "t={t}");
    }
}

#[test]
fn contour_points_lie_on_the_zero_level() {
    let cfg = HandshakeFieldConfig::default();
    let c = zero_crossing_contours(&cfg, 0.0).unwrap();
    assert!(c.point_count() > 100);
    for p in c.polylines.iter().flat_map(|p| &p.points) {
        let far = p[0].hypot(p[1]) > 1.0 && (p[0] - cfg.separation_dx).hypot(p[1]) > 1.0;
        if far {
            let v = eval_handshake_potential(&cfg, p[0], p[1], 0.0).unwrap();
            assert!(v.abs() < 1e-3, "{p:?} {v}");
        }
    }
}

#[test]
fn poynting_vanishes_with_the_electric_field() {
    let cfg = HandshakeFieldConfig::default();
    let (x, y) = (4.0, 2.5);
    // E = Re(-i phasor e^{it}) vanishes when arg(-i phasor) + t = pi/2
    let p = cfg.phasor(x, y).unwrap() * num_complex_i_neg();
    let t = PI / 2.0 - p.arg();
    assert!(electric_field(&cfg, x, y, t).unwrap().abs() < 1e-14);
    let s = poynting(&cfg, x, y, t).unwrap();
    assert!(s[0].hypot(s[1]) < 1e-12);
}

fn num_complex_i_neg() -> num_complex::Complex64 {
    num_complex::Complex64::new(0.0, -1.0)
}

#[test]
fn averaged_streamlines_from_the_axis_reach_the_absorber() {
    let cfg = HandshakeFieldConfig::default();
    let seeds: Vec<[f64; 2]> = (1..12).map(|i| [i as f64, 0.0]).collect();
    let lines = poynting_streamlines(&cfg, StreamlineMode::Averaged, &seeds, &StreamlineOptions::default()).unwrap();
    for l in &lines {
        assert_eq!(l.end, StreamlineEnd::Absorber, "seed {:?}", l.seed);
        assert!(l.points.iter().all(|p| p[1].abs() < 1e-9));
    }
}

#[test]
fn streamline_seed_inside_exclusion_is_refused() {
    let cfg = HandshakeFieldConfig::default();
    let r = poynting_streamlines(&cfg, StreamlineMode::Instant(0.0), &[[0.01, 0.0]], &StreamlineOptions::default());
    assert!(r.is_err());
}

#[test]
fn stagnant_seed_is_flagged() {
    let mut cfg = HandshakeFieldConfig::default();
    cfg.weight_alpha = 0.0;
    cfg.weight_beta = 0.0;
    let lines = poynting_streamlines(&cfg, StreamlineMode::Averaged, &[[3.0, 1.0]], &StreamlineOptions::default()).unwrap();
    assert_eq!(lines[0].end, StreamlineEnd::Stagnation);
}

#[test]
fn flux_closes_through_source_free_boxes() {
    let cfg = HandshakeFieldConfig::default();
    for centre in [[6.0, 3.0, 0.0], [3.0, -2.0, 1.0], [-2.0, 0.0, 0.0]] {
        for fb in flux_balance(&cfg, centre, &[0.5, 1.0, 1.5], 12).unwrap() {
            assert!(fb.ratio < 0.01, "{centre:?} {fb:?}");
        }
    }
    assert!(flux_balance(&cfg, [0.5, 0.0, 0.0], &[1.0], 8).is_err());
}

#[test]
fn high_amplitude_lobes_are_phase_coherent() {
    let cfg = HandshakeFieldConfig::default();
    let lc = lobe_phase_coherence(&cfg, 10.0).unwrap();
    assert!(lc.lobes.len() >= 2);
    assert!(lc.max_deviation_cycles < 0.05, "{}", lc.max_deviation_cycles);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn potential_depends_on_y_squared(x in -5.0f64..17.0, y in 0.1f64..10.0, t in -10.0f64..10.0) {
        let cfg = HandshakeFieldConfig::default();
        let a = eval_handshake_potential(&cfg, x, y, t).unwrap();
        let b = eval_handshake_potential(&cfg, x, -y, t).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn time_averaged_flux_has_no_transverse_axis_component(x in 0.2f64..11.8) {
        let cfg = HandshakeFieldConfig::default();
        let s = mean_poynting(&cfg, x, 0.0).unwrap();
        prop_assert!(s[1].abs() < 1e-12);
        prop_assert!(s[0] > 0.0);
    }
}
