//! Two-segment phasor path sums between a source and a detector.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest allowed phase step between neighbouring paths.
pub const MAX_PHASE_STEP: f64 = PI / 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLength {
    /// 2 sqrt((r/2)^2 + y^2)
    pub exact: f64,
    /// r + 2 y^2 / r
    pub approx: f64,
}

/// Length of the path that crosses the mid-plane at offset `y`.
pub fn path_length(r: f64, y: f64) -> Result<PathLength> {
    if !(r > 0.0) {
        return Err(Error::param("r", "must be positive"));
    }
    let h = 0.5 * r;
    Ok(PathLength {
        exact: 2.0 * (h * h + y * y).sqrt(),
        approx: r + 2.0 * y * y / r,
    })
}

/// Offset at which the extra path length reaches a quarter wavelength,
/// sqrt(lambda r / 8).
pub fn contributing_zone_half_width(r: f64, wavelength: f64) -> f64 {
    (wavelength * r / 8.0).sqrt()
}

/// Extra optical path added per path, e.g. by glass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DelayModifier {
    None,
    /// Cancels the geometric excess exactly, so every path arrives in phase.
    EqualDelay,
    /// `s` times the equal-delay correction.
    Scaled(f64),
    /// Adds -k y^2.
    Quadratic(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub source: [f64; 2],
    pub detector: [f64; 2],
    /// x position of the plane every path crosses
    pub screen_x: f64,
    /// Crossing offsets in that plane [m]
    pub offsets: Vec<f64>,
    pub wavelength: f64,
    pub modifier: DelayModifier,
}

impl PathEnsemble {
    /// Source at the origin, detector at (r, 0), screen half-way, offsets
    /// k * spacing for |k * spacing| <= half_aperture.
    pub fn symmetric(r: f64, wavelength: f64, half_aperture: f64, spacing: f64) -> Result<Self> {
        if !(r > 0.0 && wavelength > 0.0 && half_aperture >= 0.0 && spacing > 0.0) {
            return Err(Error::param("ensemble", "r, wavelength and spacing must be positive"));
        }
        let m = (half_aperture / spacing).floor() as i64;
        let offsets = (-m..=m).map(|k| k as f64 * spacing).collect();
        Ok(PathEnsemble {
            source: [0.0, 0.0],
            detector: [r, 0.0],
            screen_x: 0.5 * r,
            offsets,
            wavelength,
            modifier: DelayModifier::None,
        })
    }

    pub fn with_modifier(mut self, m: DelayModifier) -> Self {
        self.modifier = m;
        self
    }

    /// Source-detector distance.
    pub fn distance(&self) -> f64 {
        (self.detector[0] - self.source[0]).hypot(self.detector[1] - self.source[1])
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wavelength > 0.0) {
            return Err(Error::param("wavelength", "must be positive"));
        }
        if self.offsets.is_empty() {
            return Err(Error::param("offsets", "need at least one path"));
        }
        if self.offsets.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::param("offsets", "must be strictly ascending"));
        }
        let n = self.offsets.len();
        let scale = self.offsets[n - 1].abs().max(self.offsets[0].abs());
        for i in 0..n / 2 {
            if (self.offsets[i] + self.offsets[n - 1 - i]).abs() > 1e-12 * scale {
                return Err(Error::param("offsets", "must be symmetric about the axis"));
            }
        }
        let between = (self.screen_x - self.source[0]) * (self.detector[0] - self.screen_x);
        if !(between > 0.0) {
            return Err(Error::param("screen_x", "screen must lie between source and detector"));
        }
        Ok(())
    }

    /// Geometric path through the axis point of the screen (y = 0).
    pub fn reference_length(&self) -> f64 {
        let d1 = (self.screen_x - self.source[0]).hypot(self.source[1]);
        let d2 = (self.detector[0] - self.screen_x).hypot(self.detector[1]);
        d1 + d2
    }

    /// Geometric length minus the reference length, without cancellation.
    pub fn geometric_excess(&self, y: f64) -> f64 {
        let seg = |dx: f64, y0: f64| {
            let a = y - y0;
            let d = dx.hypot(a);
            let d_ref = dx.hypot(y0);
            (a * a - y0 * y0) / (d + d_ref)
        };
        seg(self.screen_x - self.source[0], self.source[1])
            + seg(self.detector[0] - self.screen_x, self.detector[1])
    }

    /// Optical excess including the delay modifier.
    pub fn excess(&self, y: f64) -> f64 {
        let g = self.geometric_excess(y);
        match self.modifier {
            DelayModifier::None => g,
            DelayModifier::EqualDelay => 0.0,
            DelayModifier::Scaled(s) => g - s * g,
            DelayModifier::Quadratic(k) => g - k * y * y,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhasorResultant {
    /// Unit arrow per path, in offset order.
    pub arrows: Vec<Complex64>,
    pub resultant: Complex64,
    /// Running sum of the arrows (head-to-tail chain).
    pub partial_sums: Vec<Complex64>,
    /// |resultant| / number of paths
    pub amplitude: f64,
}

/// Sums e^{i 2 pi l / lambda} over the ensemble.
pub fn phasor_sum(e: &PathEnsemble) -> Result<PhasorResultant> {
    e.validate()?;
    let k = 2.0 * PI / e.wavelength;
    let ref_phase = 2.0 * PI * (e.reference_length() / e.wavelength).fract();
    let excess: Vec<f64> = e.offsets.iter().map(|&y| e.excess(y)).collect();
    for (i, w) in excess.windows(2).enumerate() {
        let step = k * (w[1] - w[0]).abs();
        if !(step < MAX_PHASE_STEP) {
            return Err(Error::Sampling(format!(
                "phase step {step:.4} rad between offsets {} and {} m exceeds pi/4; \
                 reduce the spacing below {:e} m",
                e.offsets[i],
                e.offsets[i + 1],
                (e.offsets[i + 1] - e.offsets[i]) * MAX_PHASE_STEP / step
            )));
        }
    }
    let mut arrows = Vec::with_capacity(excess.len());
    let mut partial_sums = Vec::with_capacity(excess.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for d in &excess {
        let a = Complex64::cis(ref_phase + k * d);
        acc += a;
        arrows.push(a);
        partial_sums.push(acc);
    }
    Ok(PhasorResultant {
        amplitude: acc.norm() / arrows.len() as f64,
        resultant: acc,
        arrows,
        partial_sums,
    })
}

/// Smallest half-width whose inner paths alone reach `fraction` of the full
/// resultant magnitude.
pub fn contributing_half_width(e: &PathEnsemble, fraction: f64) -> Result<f64> {
    let res = phasor_sum(e)?;
    let total = res.resultant.norm();
    let n = e.offsets.len();
    let mid = n / 2;
    let mut acc = Complex64::new(0.0, 0.0);
    if n % 2 == 1 {
        acc += res.arrows[mid];
        if acc.norm() >= fraction * total {
            return Ok(0.0);
        }
    }
    let start = n.div_ceil(2);
    for j in start..n {
        acc += res.arrows[j] + res.arrows[n - 1 - j];
        if acc.norm() >= fraction * total {
            return Ok(e.offsets[j].abs());
        }
    }
    Err(Error::Degenerate(format!(
        "inner paths never reach {fraction} of the resultant"
    )))
}

/// |sum over |y| >= half_width| / |sum over all|.
pub fn outside_zone_ratio(e: &PathEnsemble, half_width: f64) -> Result<f64> {
    let res = phasor_sum(e)?;
    let outer: Complex64 = e
        .offsets
        .iter()
        .zip(&res.arrows)
        .filter(|(y, _)| y.abs() >= half_width)
        .map(|(_, a)| *a)
        .sum();
    Ok(outer.norm() / res.resultant.norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceSample {
    pub r: f64,
    pub paths: usize,
    /// |resultant| times the angular spacing of the paths
    pub line_amplitude: f64,
    /// Solid-angle amplitude, the square of the line amplitude
    pub amplitude: f64,
    /// amplitude^2
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceStudy {
    pub samples: Vec<DistanceSample>,
    pub amplitude_slope: f64,
    pub intensity_slope: f64,
}

/// Repeats the sum of `base` at each distance with the same transverse
/// aperture and the same number of paths per unit angle at the source.
///
/// The sum runs over a line of paths; treating the transverse aperture as
/// the product of two such lines, the solid-angle amplitude is the square
/// of the line amplitude.
pub fn amplitude_vs_distance(base: &PathEnsemble, r_values: &[f64]) -> Result<DistanceStudy> {
    base.validate()?;
    if r_values.len() < 2 || r_values.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::param("r_values", "need at least two positive distances"));
    }
    let (lo, hi) = r_values
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
    if hi / lo < 10.0 * (1.0 - 1e-12) {
        return Err(Error::param("r_values", "must span at least one decade"));
    }
    if base.offsets.len() < 2 {
        return Err(Error::param("offsets", "need at least two paths to fix the density"));
    }
    let aperture = base.offsets.last().unwrap().abs();
    let spacing = base.offsets[1] - base.offsets[0];
    let d_theta = spacing / (base.screen_x - base.source[0]);

    let mut samples = Vec::with_capacity(r_values.len());
    for &r in r_values {
        let dy = d_theta * 0.5 * r;
        let e = PathEnsemble::symmetric(r, base.wavelength, aperture, dy)?;
        let res = phasor_sum(&e)?;
        let line = res.resultant.norm() * d_theta;
        let amp = line * line;
        samples.push(DistanceSample {
            r,
            paths: e.offsets.len(),
            line_amplitude: line,
            amplitude: amp,
            intensity: amp * amp,
        });
    }
    let rs: Vec<f64> = samples.iter().map(|s| s.r).collect();
    let amps: Vec<f64> = samples.iter().map(|s| s.amplitude).collect();
    let ints: Vec<f64> = samples.iter().map(|s| s.intensity).collect();
    Ok(DistanceStudy {
        amplitude_slope: loglog_slope(&rs, &amps)?,
        intensity_slope: loglog_slope(&rs, &ints)?,
        samples,
    })
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::param("fit", "need two or more matching points"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::Degenerate("log-log fit needs positive values".into()));
    }
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all x values coincide".into()));
    }
    Ok(sxy / sxx)
}

/// Amplitude gain (8 r / (pi lambda)) * solid angle of an equal-delay
/// optical system over the bare contributing zone.
pub fn enhancement_factor(r: f64, wavelength: f64, solid_angle: f64) -> Result<f64> {
    if !(r > 0.0 && wavelength > 0.0) {
        return Err(Error::param("r", "distance and wavelength must be positive"));
    }
    if !(solid_angle > 0.0 && solid_angle <= 4.0 * PI) {
        return Err(Error::param("solid_angle", "must lie in (0, 4 pi]"));
    }
    Ok(8.0 * r / (PI * wavelength) * solid_angle)
}
