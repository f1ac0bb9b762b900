//! Coincidence experiments: intensity interferometry, single-photon
//! splitting, and cascade polarization correlations.

use std::collections::VecDeque;
use std::f64::consts::PI;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// HBT

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbtGeometry {
    /// Source separation [m]
    pub d12: f64,
    /// Detector separation [m]
    pub d_ab: f64,
    /// Source-to-detector-plane distance [m]
    pub l: f64,
    pub wavelength: f64,
}

impl HbtGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.d12 > 0.0 && self.l > 0.0 && self.wavelength > 0.0) {
            return Err(Error::param("hbt", "d12, L and wavelength must be positive"));
        }
        if !(self.d_ab >= 0.0) {
            return Err(Error::param("d_ab", "must be non-negative"));
        }
        Ok(())
    }

    /// False when L < 100 max(d12, d_AB) and the far-field form is suspect.
    pub fn far_field(&self) -> bool {
        self.l >= 100.0 * self.d12.max(self.d_ab)
    }

    /// lambda L / d12
    pub fn fringe_period(&self) -> f64 {
        self.wavelength * self.l / self.d12
    }
}

/// 1 + cos(2 pi d_AB d12 / (lambda L)), in [0, 2].
pub fn hbt_coincidence_rate(g: &HbtGeometry) -> Result<f64> {
    g.validate()?;
    Ok(1.0 + (2.0 * PI * g.d_ab * g.d12 / (g.wavelength * g.l)).cos())
}

/// Fringe period read off a scan of the rate over `d_ab` in [0, d_max]
/// with `n` steps, from the first and last upward crossings of 1.
pub fn hbt_scan_period(g: &HbtGeometry, d_max: f64, n: usize) -> Result<f64> {
    if n < 2 || !(d_max > 0.0) {
        return Err(Error::param("scan", "need a positive range and at least 2 steps"));
    }
    let mut prev: Option<(f64, f64)> = None;
    let mut ups = Vec::new();
    for i in 0..=n {
        let d = d_max * i as f64 / n as f64;
        let v = hbt_coincidence_rate(&HbtGeometry { d_ab: d, ..*g })? - 1.0;
        if let Some((dp, vp)) = prev {
            if vp < 0.0 && v >= 0.0 {
                ups.push(dp + (d - dp) * (-vp) / (v - vp));
            }
        }
        prev = Some((d, v));
    }
    if ups.len() < 2 {
        return Err(Error::Degenerate("scan covers less than one fringe".into()));
    }
    Ok((ups[ups.len() - 1] - ups[0]) / (ups.len() - 1) as f64)
}

// ---------------------------------------------------------------------------
// Polarization correlations

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarimeterPair {
    pub theta1: f64,
    pub theta2: f64,
    /// Transmittance along the major axis, per polarizer
    pub eff_major: [f64; 2],
    /// Transmittance along the minor axis, per polarizer
    pub eff_minor: [f64; 2],
}

impl PolarimeterPair {
    /// Two identical polarizers.
    pub fn new(theta1: f64, theta2: f64, eff_major: f64, eff_minor: f64) -> Self {
        PolarimeterPair {
            theta1,
            theta2,
            eff_major: [eff_major; 2],
            eff_minor: [eff_minor; 2],
        }
    }

    pub fn perfect(theta1: f64, theta2: f64) -> Self {
        Self::new(theta1, theta2, 1.0, 0.0)
    }

    pub fn phi(&self) -> f64 {
        self.theta2 - self.theta1
    }

    pub fn validate(&self) -> Result<()> {
        for k in 0..2 {
            let (big, small) = (self.eff_major[k], self.eff_minor[k]);
            if !(0.0 <= small && small <= big && big <= 1.0) {
                return Err(Error::param(
                    "eff_major",
                    "need 0 <= eff_minor <= eff_major <= 1",
                ));
            }
        }
        if !(self.theta1.is_finite() && self.theta2.is_finite()) {
            return Err(Error::param("theta1", "angles must be finite"));
        }
        Ok(())
    }

    /// Transmittance of polarizer k for light polarized at `angle` to its
    /// major axis.
    fn transmittance(&self, k: usize, angle: f64) -> f64 {
        let c2 = 0.5 * (1.0 + (2.0 * angle).cos());
        let s2 = 0.5 * (1.0 - (2.0 * angle).cos());
        self.eff_major[k] * c2 + self.eff_minor[k] * s2
    }
}

/// Coincidence probability when the shared axis is fixed by polarizer 2:
/// T2(0) * T1(phi). Reduces to cos^2(phi) for perfect polarizers.
pub fn fc_coincidence_ti(p: &PolarimeterPair) -> Result<f64> {
    p.validate()?;
    Ok(p.transmittance(1, 0.0) * p.transmittance(0, p.phi()))
}

/// Average over a uniformly random shared axis of T1 * T2.
pub fn fc_classical_closed_form(p: &PolarimeterPair) -> Result<f64> {
    p.validate()?;
    let (m1, m2) = (p.eff_minor[0], p.eff_minor[1]);
    let (d1, d2) = (p.eff_major[0] - m1, p.eff_major[1] - m2);
    Ok(m1 * m2 + 0.5 * (m1 * d2 + m2 * d1) + d1 * d2 * (2.0 + (2.0 * p.phi()).cos()) / 8.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub value: f64,
    /// Binomial standard error sqrt(p (1 - p) / n)
    pub std_error: f64,
    pub samples: u64,
}

pub const MIN_CLASSICAL_SAMPLES: u64 = 10_000;

/// Monte Carlo of the local model: random shared axis, independent
/// Malus-law passage at each polarizer.
pub fn fc_coincidence_classical(p: &PolarimeterPair, samples: u64, rng_seed: u64) -> Result<MonteCarloEstimate> {
    p.validate()?;
    if samples < MIN_CLASSICAL_SAMPLES {
        return Err(Error::param("samples", format!("need at least {MIN_CLASSICAL_SAMPLES}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let axis = PI * rng.random::<f64>();
        let pass1 = rng.random::<f64>() < p.transmittance(0, axis - p.theta1);
        let pass2 = rng.random::<f64>() < p.transmittance(1, axis - p.theta2);
        if pass1 && pass2 {
            hits += 1;
        }
    }
    let value = hits as f64 / samples as f64;
    Ok(MonteCarloEstimate {
        value,
        std_error: (value * (1.0 - value) / samples as f64).sqrt(),
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcRow {
    pub phi: f64,
    pub ti: f64,
    pub classical: f64,
    pub classical_error: f64,
    pub classical_exact: f64,
}

/// Both models over a list of relative angles in [0, pi/2]. Each angle gets
/// its own generator seeded from a stream derived from `rng_seed`.
pub fn fc_curve(base: &PolarimeterPair, phi_values: &[f64], samples: u64, rng_seed: u64) -> Result<Vec<FcRow>> {
    base.validate()?;
    if phi_values.iter().any(|p| !(0.0..=PI / 2.0).contains(p)) {
        return Err(Error::param("phi", "angles must lie in [0, pi/2]"));
    }
    let mut seeds = ChaCha8Rng::seed_from_u64(rng_seed);
    phi_values
        .iter()
        .map(|&phi| {
            let p = PolarimeterPair {
                theta2: base.theta1 + phi,
                ..*base
            };
            let mc = fc_coincidence_classical(&p, samples, seeds.next_u64())?;
            Ok(FcRow {
                phi,
                ti: fc_coincidence_ti(&p)?,
                classical: mc.value,
                classical_error: mc.std_error,
                classical_exact: fc_classical_closed_form(&p)?,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Single-photon splitting

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterStream {
    /// Mean time between excitations of the main emitter [s]
    pub mean_interval: f64,
    /// Coincidence bin width [s]
    pub window: f64,
    /// Run length [s]
    pub duration: f64,
    pub rng_seed: u64,
    /// Minimum time between two excitations of the main emitter [s]
    pub recovery_time: f64,
    /// Rate of a stray second emitter relative to the main one
    pub accidental_fraction: f64,
    /// Probability that a photon goes to neither detector
    pub p_loss: f64,
    /// Histogram half-range [s]
    pub max_delay: f64,
}

impl Default for EmitterStream {
    fn default() -> Self {
        EmitterStream {
            mean_interval: 12e-9,
            window: 1e-9,
            duration: 0.2,
            rng_seed: 1,
            recovery_time: 2e-9,
            accidental_fraction: 0.02,
            p_loss: 0.0,
            max_delay: 120e-9,
        }
    }
}

impl EmitterStream {
    pub fn validate(&self) -> Result<()> {
        if !(self.window > 0.0 && self.window < self.mean_interval) {
            return Err(Error::param("window", "need 0 < window < mean_interval"));
        }
        if !(self.recovery_time >= 0.0 && self.recovery_time < self.mean_interval) {
            return Err(Error::param("recovery_time", "need 0 <= recovery_time < mean_interval"));
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::param("duration", "must be positive"));
        }
        if !(self.accidental_fraction >= 0.0 && self.accidental_fraction.is_finite()) {
            return Err(Error::param("accidental_fraction", "must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.p_loss) {
            return Err(Error::param("p_loss", "must lie in [0, 1]"));
        }
        if !(self.max_delay >= self.window) {
            return Err(Error::param("max_delay", "must be at least one window"));
        }
        Ok(())
    }

    /// Probability that a photon reaches a given detector.
    pub fn p_detector(&self) -> f64 {
        0.5 * (1.0 - self.p_loss)
    }

    pub fn main_rate(&self) -> f64 {
        1.0 / self.mean_interval
    }

    pub fn accidental_rate(&self) -> f64 {
        self.accidental_fraction / self.mean_interval
    }

    fn half_bins(&self) -> i64 {
        (self.max_delay / self.window).round() as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutcomeTally {
    pub main_excitations: u64,
    pub accidental_excitations: u64,
    pub detector_a: u64,
    pub detector_b: u64,
    /// Photons that went to a partner other than a detector
    pub lost: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelayHistogram {
    /// Bin centres [s]; bin k covers [(k - 1/2) w, (k + 1/2) w)
    pub centres: Vec<f64>,
    pub counts: Vec<u64>,
    pub window: f64,
    pub tally: OutcomeTally,
}

impl DelayHistogram {
    pub fn zero_bin(&self) -> u64 {
        self.counts[self.counts.len() / 2]
    }

    /// Mean and standard error of the bins with |delay| >= min_delay.
    pub fn plateau(&self, min_delay: f64) -> Result<(f64, f64)> {
        let v: Vec<f64> = self
            .centres
            .iter()
            .zip(&self.counts)
            .filter(|(c, _)| c.abs() >= min_delay)
            .map(|(_, &n)| n as f64)
            .collect();
        if v.is_empty() {
            return Err(Error::param("min_delay", "no bins that far out"));
        }
        let m = v.iter().sum::<f64>() / v.len() as f64;
        Ok((m, (m / v.len() as f64).sqrt()))
    }
}

/// Event-stream simulation. The main emitter fires a renewal process with
/// a fixed recovery time plus an exponential wait; a stray emitter fires
/// as a Poisson process. Every excitation hands one whole photon to
/// detector A, detector B, or elsewhere. All A-B pairs within
/// `max_delay` are histogrammed by delay t_B - t_A.
pub fn split_photon_run(s: &EmitterStream) -> Result<DelayHistogram> {
    s.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.rng_seed);
    let wait = s.mean_interval - s.recovery_time;
    let main_gap = Exp::new(1.0 / wait).map_err(|e| Error::param("mean_interval", e.to_string()))?;
    let stray_gap = if s.accidental_fraction > 0.0 {
        Some(Exp::new(s.accidental_rate()).map_err(|e| Error::param("accidental_fraction", e.to_string()))?)
    } else {
        None
    };
    let k = s.half_bins();
    let nbins = (2 * k + 1) as usize;
    let mut counts = vec![0u64; nbins];
    let reach = (k as f64 + 0.5) * s.window;
    let pd = s.p_detector();

    let mut next_main = main_gap.sample(&mut rng);
    let mut next_stray = stray_gap.map_or(f64::INFINITY, |d| d.sample(&mut rng));
    let mut recent_a: VecDeque<f64> = VecDeque::new();
    let mut recent_b: VecDeque<f64> = VecDeque::new();
    let mut tally = OutcomeTally::default();

    let bin_of = |delay: f64| -> Option<usize> {
        let b = (delay / s.window + 0.5).floor() as i64;
        (-k..=k).contains(&b).then(|| (b + k) as usize)
    };

    loop {
        let t = next_main.min(next_stray);
        if t >= s.duration {
            break;
        }
        if next_main <= next_stray {
            tally.main_excitations += 1;
            next_main += s.recovery_time + main_gap.sample(&mut rng);
        } else {
            tally.accidental_excitations += 1;
            next_stray += stray_gap.map_or(f64::INFINITY, |d| d.sample(&mut rng));
        }
        let u: f64 = rng.random();
        if u < pd {
            tally.detector_a += 1;
            while recent_b.front().is_some_and(|&tb| t - tb > reach) {
                recent_b.pop_front();
            }
            for &tb in &recent_b {
                if let Some(i) = bin_of(tb - t) {
                    counts[i] += 1;
                }
            }
            recent_a.push_back(t);
        } else if u < 2.0 * pd {
            tally.detector_b += 1;
            while recent_a.front().is_some_and(|&ta| t - ta > reach) {
                recent_a.pop_front();
            }
            for &ta in &recent_a {
                if let Some(i) = bin_of(t - ta) {
                    counts[i] += 1;
                }
            }
            recent_b.push_back(t);
        } else {
            tally.lost += 1;
        }
    }
    if tally.main_excitations + tally.accidental_excitations == 0 {
        return Err(Error::Degenerate("no excitations within the run".into()));
    }
    Ok(DelayHistogram {
        centres: (-k..=k).map(|b| b as f64 * s.window).collect(),
        counts,
        window: s.window,
        tally,
    })
}

/// Expected zero-delay count from overlaps with the stray emitter. Valid
/// when the recovery time exceeds half a window, so the main emitter alone
/// never lands two photons in the zero bin.
pub fn split_zero_delay_prediction(s: &EmitterStream) -> Result<f64> {
    s.validate()?;
    if s.recovery_time < 0.5 * s.window {
        return Err(Error::param("recovery_time", "prediction needs recovery_time >= window / 2"));
    }
    let (rm, rb, p) = (s.main_rate(), s.accidental_rate(), s.p_detector());
    Ok(s.duration * p * p * s.window * (2.0 * rm * rb + rb * rb))
}

/// Expected count per bin far from zero delay.
pub fn split_plateau_prediction(s: &EmitterStream) -> Result<f64> {
    s.validate()?;
    let r = s.main_rate() + s.accidental_rate();
    let p = s.p_detector();
    Ok(s.duration * p * p * s.window * r * r)
}
