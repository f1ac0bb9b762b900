use std::f64::consts::PI;

use handshake_core::paths::*;
use num_complex::Complex64;
use proptest::prelude::*;

const LAMBDA: f64 = 1e-6;
const APERTURE: f64 = 0.02;

fn ensemble(r: f64) -> PathEnsemble {
    PathEnsemble::symmetric(r, LAMBDA, APERTURE, LAMBDA * r / (64.0 * APERTURE)).unwrap()
}

// Fresnel integrals C(u), S(u) by composite Simpson.
fn fresnel(u: f64) -> Complex64 {
    let n = 20_000;
    let h = u / n as f64;
    let f = |x: f64| Complex64::cis(0.5 * PI * x * x);
    let mut acc = f(0.0) + f(u);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn path_length_forms_agree_for_small_offsets() {
    let p = path_length(2.0, 0.0).unwrap();
    assert_eq!(p.exact, 2.0);
    assert_eq!(p.approx, 2.0);
    let p = path_length(1.0, 1e-3).unwrap();
    // next term of the expansion is -2 y^4 / r^3
    assert!((p.exact - p.approx + 2e-12).abs() < 1e-15);
    assert!(path_length(0.0, 1.0).is_err());
}

#[test]
fn contributing_zone_area_is_linear_in_wavelength() {
    let area = |lam: f64| PI * contributing_zone_half_width(1.0, lam).powi(2);
    assert!((area(2e-7) / area(1e-7) - 2.0).abs() < 1e-12);
    assert!((area(1e-7) - PI * 1e-7 / 8.0).abs() < 1e-20);
}

#[test]
fn single_axis_path_is_one_unit_arrow() {
    let r = 0.123_456_7;
    let e = PathEnsemble::symmetric(r, LAMBDA, 0.0, 1e-6).unwrap();
    let res = phasor_sum(&e).unwrap();
    assert_eq!(res.arrows.len(), 1);
    assert!((res.amplitude - 1.0).abs() < 1e-15);
    let want = (2.0 * PI * r / LAMBDA).rem_euclid(2.0 * PI);
    let got = res.resultant.arg().rem_euclid(2.0 * PI);
    let d = (got - want).abs();
    assert!(d.min(2.0 * PI - d) < 1e-6);
}

#[test]
fn lens_aligns_every_arrow() {
    let e = ensemble(1.0).with_modifier(DelayModifier::EqualDelay);
    let res = phasor_sum(&e).unwrap();
    let n = res.arrows.len() as f64;
    assert!((res.resultant.norm() - n).abs() < 1e-9 * n.max(1.0), "{}", res.resultant.norm() - n);
    assert!((res.amplitude - 1.0).abs() < 1e-12);
}

#[test]
fn no_modifier_in_the_family_beats_the_lens() {
    let e = ensemble(1.0);
    let best = phasor_sum(&e.clone().with_modifier(DelayModifier::EqualDelay)).unwrap().resultant.norm();
    for m in [
        DelayModifier::None,
        DelayModifier::Scaled(0.5),
        DelayModifier::Scaled(0.99),
        DelayModifier::Scaled(1.01),
        DelayModifier::Quadratic(1.0),
        DelayModifier::Quadratic(2.0),
    ] {
        let v = phasor_sum(&e.clone().with_modifier(m)).unwrap().resultant.norm();
        assert!(v <= best * (1.0 + 1e-12), "{m:?}");
    }
}

#[test]
fn coarse_sampling_is_refused() {
    let e = PathEnsemble::symmetric(1.0, LAMBDA, APERTURE, 1e-4).unwrap();
    let err = phasor_sum(&e).unwrap_err().to_string();
    assert!(err.contains("spacing"), "{err}");
}

#[test]
fn asymmetric_offsets_are_refused() {
    let mut e = ensemble(1.0);
    e.offsets.push(1.0);
    assert!(phasor_sum(&e).is_err());
}

#[test]
fn halves_sum_to_the_whole() {
    let res = phasor_sum(&ensemble(1.0)).unwrap();
    let n = res.arrows.len();
    let a: Complex64 = res.arrows[..n / 2].iter().sum();
    let b: Complex64 = res.arrows[n / 2..].iter().sum();
    assert!((a + b - res.resultant).norm() < 1e-9);
    assert_eq!(*res.partial_sums.last().unwrap(), res.resultant);
}

#[test]
fn doubling_path_density_barely_moves_the_resultant() {
    let coarse = ensemble(1.0);
    let dy = coarse.offsets[1] - coarse.offsets[0];
    let fine = PathEnsemble::symmetric(1.0, LAMBDA, APERTURE, dy / 2.0).unwrap();
    let a = phasor_sum(&coarse).unwrap().resultant.norm() * dy;
    let b = phasor_sum(&fine).unwrap().resultant.norm() * dy / 2.0;
    assert!(((a - b) / b).abs() < 1e-3);
}

#[test]
fn outside_zone_share_matches_fresnel_oracle() {
    // continuum: outer/total = |(1 + i) - 2 F(1)| / sqrt 2
    let want = (Complex64::new(1.0, 1.0) - 2.0 * fresnel(1.0)).norm() / 2f64.sqrt();
    assert!((want - 0.4053).abs() < 1e-3);
    for r in [0.1, 1.0, 10.0] {
        let e = ensemble(r);
        let got = outside_zone_ratio(&e, contributing_zone_half_width(r, LAMBDA)).unwrap();
        assert!((got - want).abs() < 0.03, "r={r} {got} {want}");
    }
}

#[test]
fn eighty_percent_half_width_scales_with_zone() {
    // continuum oracle: smallest u with |2 F(u)| >= 0.8 sqrt 2
    let mut u = 0.0;
    while (2.0 * fresnel(u)).norm() < 0.8 * 2f64.sqrt() {
        u += 1e-3;
    }
    let mut ratios = Vec::new();
    for r in [0.1, 1.0, 10.0] {
        let e = ensemble(r);
        let hw = contributing_half_width(&e, 0.8).unwrap();
        ratios.push(hw / contributing_zone_half_width(r, LAMBDA));
    }
    for q in &ratios {
        assert!((q - u).abs() < 0.05 * u, "{ratios:?} oracle {u}");
    }
}

#[test]
fn amplitude_falls_as_one_over_r() {
    let rs: Vec<f64> = (0..=8).map(|i| 0.1 * 10f64.powf(i as f64 / 4.0)).collect();
    let st = amplitude_vs_distance(&ensemble(1.0), &rs).unwrap();
    assert!((st.amplitude_slope + 1.0).abs() < 0.05, "{}", st.amplitude_slope);
    assert!((st.intensity_slope + 2.0).abs() < 0.1, "{}", st.intensity_slope);
    assert!(st.samples.iter().all(|s| s.paths > 1));
}

#[test]
fn distance_study_needs_a_decade() {
    assert!(amplitude_vs_distance(&ensemble(1.0), &[1.0, 5.0]).is_err());
    assert!(amplitude_vs_distance(&ensemble(1.0), &[1.0]).is_err());
}

#[test]
fn loglog_slope_of_power_law() {
    let x = [1.0, 2.0, 5.0, 10.0];
    let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-1.5)).collect();
    assert!((loglog_slope(&x, &y).unwrap() + 1.5).abs() < 1e-12);
    assert!(loglog_slope(&x, &[1.0, 0.0, 1.0, 1.0]).is_err());
}

#[test]
fn enhancement_factor_values() {
    let f = enhancement_factor(1.0, 1.22e-7, 1.0).unwrap();
    assert!((f / 2.1e7 - 1.0).abs() < 0.1, "{f}");
    let f = enhancement_factor(0.05, 5e-7, 1.0).unwrap();
    assert!((2.5e5..1e7).contains(&f), "{f}");
    let bare = PI * 1.22e-7 / 8.0;
    assert!((enhancement_factor(1.0, 1.22e-7, bare).unwrap() - 1.0).abs() < 1e-12);
    assert!(enhancement_factor(1.0, 1.22e-7, 13.0).is_err());
    assert!(enhancement_factor(1.0, 1.22e-7, 0.0).is_err());
}

proptest! {
    #[test]
    fn excess_matches_direct_lengths(r in 0.01f64..10.0, frac in -0.5f64..0.5) {
        let e = PathEnsemble::symmetric(r, LAMBDA, 0.0, 1.0).unwrap();
        let y = frac * r;
        let direct = path_length(r, y).unwrap().exact - r;
        prop_assert!((e.geometric_excess(y) - direct).abs() <= 1e-12 * r);
    }

    #[test]
    fn arrows_are_unit_length(r in 0.1f64..5.0) {
        let res = phasor_sum(&ensemble(r)).unwrap();
        for a in &res.arrows {
            prop_assert!((a.norm() - 1.0).abs() < 1e-12);
        }
        prop_assert!(res.amplitude <= 1.0 + 1e-12);
    }
}
