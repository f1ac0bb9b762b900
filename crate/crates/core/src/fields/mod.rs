//! Retarded field of the emitter plus advanced field of the absorber.
//!
//! Lengths are in units of lambda/(2 pi), times in 1/omega0, c = 1. The
//! emitter alpha sits at the origin and the absorber beta at
//! (separation_dx, 0). Both potentials point along z.

mod contours;
mod movie;
mod streamlines;

pub use contours::{marching_squares, zero_crossing_contours, ContourSet, Polyline};
pub use movie::{axis_maxima, field_movie, lobe_phase_coherence, track_peaks, FieldMovie, LobeCoherence, PeakTrack};
pub use streamlines::{
    flux_balance, poynting_streamlines, FluxBalance, Streamline, StreamlineEnd, StreamlineMode,
    StreamlineOptions,
};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of phase samples used for period averages; exact for the second
/// harmonic.
pub const AVERAGE_SAMPLES: usize = 8;

const FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// 800 x 400 samples over [-5, dx + 5] x [-10, 10].
    pub fn default_for(dx: f64) -> Self {
        GridSpec {
            x_min: -5.0,
            x_max: dx + 5.0,
            y_min: -10.0,
            y_max: 10.0,
            nx: 800,
            ny: 400,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::param("grid", "need at least 2 x 2 samples"));
        }
        if !(self.x_max > self.x_min && self.y_max > self.y_min) {
            return Err(Error::param("grid", "extents must be increasing"));
        }
        Ok(())
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        // measured from the nearer end, so symmetric extents mirror exactly
        let m = n - 1;
        (0..n)
            .map(|i| {
                if 2 * i <= m {
                    lo + (hi - lo) * (i as f64 / m as f64)
                } else {
                    hi - (hi - lo) * ((m - i) as f64 / m as f64)
                }
            })
            .collect()
    }

    pub fn xs(&self) -> Vec<f64> {
        Self::axis(self.x_min, self.x_max, self.nx)
    }

    pub fn ys(&self) -> Vec<f64> {
        Self::axis(self.y_min, self.y_max, self.ny)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HandshakeFieldConfig {
    pub separation_dx: f64,
    pub times: Vec<f64>,
    pub grid: GridSpec,
    /// 1/tau amplitude factor shared by both terms
    pub envelope_rate: f64,
    /// Radius of the discs around each atom where nothing is evaluated
    pub exclusion_radius: f64,
    /// Relative weight of the retarded (emitter) term
    pub weight_alpha: f64,
    /// Relative weight of the advanced (absorber) term
    pub weight_beta: f64,
}

impl Default for HandshakeFieldConfig {
    fn default() -> Self {
        Self::with_separation(12.0)
    }
}

impl HandshakeFieldConfig {
    pub fn with_separation(dx: f64) -> Self {
        HandshakeFieldConfig {
            separation_dx: dx,
            times: vec![0.0],
            grid: GridSpec::default_for(dx),
            envelope_rate: 1.0,
            exclusion_radius: 0.05,
            weight_alpha: 1.0,
            weight_beta: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.separation_dx > 0.0 && self.separation_dx.is_finite()) {
            return Err(Error::param("separation_dx", "must be positive"));
        }
        if !(self.exclusion_radius > 0.0) {
            return Err(Error::param("exclusion_radius", "must be positive"));
        }
        if 2.0 * self.exclusion_radius >= self.separation_dx {
            return Err(Error::param("exclusion_radius", "exclusion discs overlap"));
        }
        if !(self.envelope_rate.is_finite()
            && self.weight_alpha.is_finite()
            && self.weight_beta.is_finite())
        {
            return Err(Error::param("envelope_rate", "amplitudes must be finite"));
        }
        if self.times.is_empty() {
            return Err(Error::param("times", "need at least one time"));
        }
        if self.times.windows(2).any(|w| !(w[1] > w[0])) || self.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::param("times", "must be finite and strictly increasing"));
        }
        self.grid.validate()
    }

    /// Distances to alpha and beta of a point in 3-D.
    fn distances(&self, x: f64, y: f64, z: f64) -> (f64, f64) {
        let ra = (x * x + y * y + z * z).sqrt();
        let xb = x - self.separation_dx;
        let rb = (xb * xb + y * y + z * z).sqrt();
        (ra, rb)
    }

    pub fn is_excluded(&self, x: f64, y: f64) -> bool {
        self.is_excluded_3d(x, y, 0.0)
    }

    fn is_excluded_3d(&self, x: f64, y: f64, z: f64) -> bool {
        let (ra, rb) = self.distances(x, y, z);
        ra < self.exclusion_radius || rb < self.exclusion_radius
    }

    fn check(&self, x: f64, y: f64, z: f64) -> Result<()> {
        if self.is_excluded_3d(x, y, z) {
            Err(Error::Domain(format!(
                "({x}, {y}, {z}) lies inside an exclusion disc of radius {}",
                self.exclusion_radius
            )))
        } else {
            Ok(())
        }
    }

    /// Potential without the exclusion check.
    fn potential_3d(&self, x: f64, y: f64, z: f64, t: f64) -> f64 {
        let (ra, rb) = self.distances(x, y, z);
        let ret = -self.weight_alpha * (t - ra).sin() / ra;
        let adv = self.weight_beta * (t + self.separation_dx + rb).cos() / rb;
        self.envelope_rate * (ret + adv)
    }

    /// E_z = -dA/dt, analytic.
    fn electric_3d(&self, x: f64, y: f64, z: f64, t: f64) -> f64 {
        let (ra, rb) = self.distances(x, y, z);
        let ret = self.weight_alpha * (t - ra).cos() / ra;
        let adv = self.weight_beta * (t + self.separation_dx + rb).sin() / rb;
        self.envelope_rate * (ret + adv)
    }

    /// Gradient of A by fourth-order central differences.
    fn gradient_3d(&self, x: f64, y: f64, z: f64, t: f64) -> [f64; 3] {
        let h = FD_STEP;
        let d = |f: &dyn Fn(f64) -> f64| (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
        [
            d(&|s| self.potential_3d(x + s, y, z, t)),
            d(&|s| self.potential_3d(x, y + s, z, t)),
            d(&|s| self.potential_3d(x, y, z + s, t)),
        ]
    }

    /// Complex amplitude with A = Re(phasor * e^{i t}).
    pub fn phasor(&self, x: f64, y: f64) -> Result<Complex64> {
        self.check(x, y, 0.0)?;
        let (ra, rb) = self.distances(x, y, 0.0);
        let ret = Complex64::i() * Complex64::cis(-ra) * (self.weight_alpha / ra);
        let adv = Complex64::cis(self.separation_dx + rb) * (self.weight_beta / rb);
        Ok((ret + adv) * self.envelope_rate)
    }
}

/// Total potential at (x, y, t).
pub fn eval_handshake_potential(cfg: &HandshakeFieldConfig, x: f64, y: f64, t: f64) -> Result<f64> {
    cfg.check(x, y, 0.0)?;
    Ok(cfg.potential_3d(x, y, 0.0, t))
}

/// E_z at (x, y, t).
pub fn electric_field(cfg: &HandshakeFieldConfig, x: f64, y: f64, t: f64) -> Result<f64> {
    cfg.check(x, y, 0.0)?;
    Ok(cfg.electric_3d(x, y, 0.0, t))
}

/// In-plane B = curl(A z) = (dA/dy, -dA/dx).
pub fn magnetic_field(cfg: &HandshakeFieldConfig, x: f64, y: f64, t: f64) -> Result<[f64; 2]> {
    cfg.check(x, y, 0.0)?;
    let g = cfg.gradient_3d(x, y, 0.0, t);
    Ok([g[1], -g[0]])
}

/// Poynting vector E x B with mu0 = 1, which for a z-directed potential
/// is E_z grad A.
pub fn poynting(cfg: &HandshakeFieldConfig, x: f64, y: f64, t: f64) -> Result<[f64; 2]> {
    cfg.check(x, y, 0.0)?;
    let e = cfg.electric_3d(x, y, 0.0, t);
    let g = cfg.gradient_3d(x, y, 0.0, t);
    Ok([e * g[0], e * g[1]])
}

/// Poynting vector averaged over one optical period.
pub fn mean_poynting(cfg: &HandshakeFieldConfig, x: f64, y: f64) -> Result<[f64; 2]> {
    let s = mean_poynting_3d(cfg, x, y, 0.0)?;
    Ok([s[0], s[1]])
}

/// Period-averaged E_z grad A at a point off the plane; its divergence
/// vanishes away from the atoms.
pub fn mean_poynting_3d(cfg: &HandshakeFieldConfig, x: f64, y: f64, z: f64) -> Result<[f64; 3]> {
    cfg.check(x, y, z)?;
    let mut acc = [0.0; 3];
    for k in 0..AVERAGE_SAMPLES {
        let t = 2.0 * PI * k as f64 / AVERAGE_SAMPLES as f64;
        let e = cfg.electric_3d(x, y, z, t);
        let g = cfg.gradient_3d(x, y, z, t);
        for i in 0..3 {
            acc[i] += e * g[i];
        }
    }
    Ok(acc.map(|v| v / AVERAGE_SAMPLES as f64))
}

/// Sampled potential. `frames[k][j * nx + i]` holds A at (x[i], y[j],
/// times[k]); samples inside an exclusion disc are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub times: Vec<f64>,
    pub frames: Vec<Vec<f64>>,
}

impl FieldGrid {
    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn ny(&self) -> usize {
        self.y.len()
    }

    pub fn value(&self, frame: usize, i: usize, j: usize) -> f64 {
        self.frames[frame][j * self.x.len() + i]
    }
}

/// Which quantity a grid holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridQuantity {
    Potential,
    Electric,
}

/// Evaluates the potential over the configured grid at every time.
pub fn evaluate_grid(cfg: &HandshakeFieldConfig) -> Result<FieldGrid> {
    evaluate_quantity(cfg, GridQuantity::Potential)
}

pub fn evaluate_quantity(cfg: &HandshakeFieldConfig, q: GridQuantity) -> Result<FieldGrid> {
    cfg.validate()?;
    let xs = cfg.grid.xs();
    let ys = cfg.grid.ys();
    let mut frames = Vec::with_capacity(cfg.times.len());
    for &t in &cfg.times {
        let mut v = Vec::with_capacity(xs.len() * ys.len());
        for &y in &ys {
            for &x in &xs {
                v.push(if cfg.is_excluded(x, y) {
                    f64::NAN
                } else {
                    match q {
                        GridQuantity::Potential => cfg.potential_3d(x, y, 0.0, t),
                        GridQuantity::Electric => cfg.electric_3d(x, y, 0.0, t),
                    }
                });
            }
        }
        frames.push(v);
    }
    Ok(FieldGrid {
        x: xs,
        y: ys,
        times: cfg.times.clone(),
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exclusion_is_reported() {
        let cfg = HandshakeFieldConfig::default();
        assert!(matches!(eval_handshake_potential(&cfg, 0.01, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(eval_handshake_potential(&cfg, 12.0, 0.049, 0.0).is_err());
        assert!(eval_handshake_potential(&cfg, 6.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn phasor_reproduces_potential() {
        let cfg = HandshakeFieldConfig::default();
        for &(x, y, t) in &[(1.0, 2.0, 0.3), (7.5, -3.0, 4.0), (-2.0, 0.5, -1.0)] {
            let a = eval_handshake_potential(&cfg, x, y, t).unwrap();
            let p = (cfg.phasor(x, y).unwrap() * Complex64::cis(t)).re;
            assert!((a - p).abs() < 1e-13);
        }
    }

    #[test]
    fn electric_field_is_minus_time_derivative() {
        let cfg = HandshakeFieldConfig::default();
        let (x, y, t, h) = (3.0, 1.5, 0.7, 1e-4);
        let fd = -(eval_handshake_potential(&cfg, x, y, t + h).unwrap()
            - eval_handshake_potential(&cfg, x, y, t - h).unwrap())
            / (2.0 * h);
        assert!((fd - electric_field(&cfg, x, y, t).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn symmetric_grid_axis_is_mirrored() {
        let ys = GridSpec::default_for(12.0).ys();
        let n = ys.len();
        for j in 0..n {
            assert_eq!(ys[j], -ys[n - 1 - j]);
        }
    }
}
