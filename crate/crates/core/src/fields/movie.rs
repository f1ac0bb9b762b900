use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::{evaluate_grid, FieldGrid, HandshakeFieldConfig};

/// Sampling step of the on-axis profile used for peak finding.
const AXIS_STEP: f64 = 1e-3;
/// Peaks closer than this to either atom are not tracked.
pub const AXIS_MARGIN: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldMovie {
    pub grid: FieldGrid,
    /// Positions of the potential maxima on the axis between the atoms,
    /// one list per frame.
    pub peaks: Vec<Vec<f64>>,
}

/// Frames at every configured time, plus on-axis peak positions.
pub fn field_movie(cfg: &HandshakeFieldConfig) -> Result<FieldMovie> {
    let grid = evaluate_grid(cfg)?;
    let peaks = cfg
        .times
        .iter()
        .map(|&t| axis_maxima(cfg, t, AXIS_MARGIN))
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldMovie { grid, peaks })
}

/// Local maxima of A(x, 0, t) for margin <= x <= dx - margin, refined by a
/// parabola through the three samples around each one.
pub fn axis_maxima(cfg: &HandshakeFieldConfig, t: f64, margin: f64) -> Result<Vec<f64>> {
    cfg.validate()?;
    let lo = margin.max(cfg.exclusion_radius);
    let hi = cfg.separation_dx - lo;
    if !(hi > lo) {
        return Err(Error::param("margin", "leaves no room between the atoms"));
    }
    let n = ((hi - lo) / AXIS_STEP).ceil() as usize;
    let h = (hi - lo) / n as f64;
    let v: Vec<f64> = (0..=n)
        .map(|i| cfg.potential_3d(lo + h * i as f64, 0.0, 0.0, t))
        .collect();
    let mut out = Vec::new();
    for i in 1..n {
        if v[i] > v[i - 1] && v[i] >= v[i + 1] {
            let den = v[i - 1] - 2.0 * v[i] + v[i + 1];
            let shift = if den != 0.0 { 0.5 * (v[i - 1] - v[i + 1]) / den } else { 0.0 };
            out.push(lo + h * (i as f64 + shift.clamp(-0.5, 0.5)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakTrack {
    /// Per frame transition, the displacement of every matched peak.
    pub displacements: Vec<Vec<f64>>,
    /// Every matched peak moved towards beta, and every transition matched
    /// at least one peak.
    pub monotone_forward: bool,
}

/// Matches each peak to the nearest peak of the previous frame (within
/// `max_jump`) and records how far it moved.
pub fn track_peaks(peaks: &[Vec<f64>], max_jump: f64) -> PeakTrack {
    let mut displacements = Vec::new();
    let mut ok = peaks.len() >= 2;
    for w in peaks.windows(2) {
        let mut d = Vec::new();
        for &p in &w[1] {
            let nearest = w[0]
                .iter()
                .map(|&q| p - q)
                .min_by(|a, b| a.abs().total_cmp(&b.abs()));
            if let Some(delta) = nearest {
                if delta.abs() < max_jump {
                    d.push(delta);
                }
            }
        }
        if d.is_empty() || d.iter().any(|&x| !(x > 0.0)) {
            ok = false;
        }
        displacements.push(d);
    }
    PeakTrack {
        displacements,
        monotone_forward: ok,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LobeCoherence {
    /// High-amplitude lobe centres on the perpendicular bisector (y >= 0).
    pub lobes: Vec<[f64; 2]>,
    /// Length of the two-segment path alpha -> lobe -> beta.
    pub path_lengths: Vec<f64>,
    /// Largest distance of a path-length difference from a whole number of
    /// wavelengths, in cycles.
    pub max_deviation_cycles: f64,
}

/// Finds the maxima of the field amplitude along the bisector
/// x = dx/2 and compares the phases accumulated along paths through them.
pub fn lobe_phase_coherence(cfg: &HandshakeFieldConfig, y_max: f64) -> Result<LobeCoherence> {
    cfg.validate()?;
    let xm = 0.5 * cfg.separation_dx;
    let n = (y_max / AXIS_STEP).ceil() as usize;
    if n < 3 {
        return Err(Error::param("y_max", "too small"));
    }
    let amp: Vec<f64> = (0..=n)
        .map(|i| cfg.phasor(xm, AXIS_STEP * i as f64).map(|p| p.norm()))
        .collect::<Result<_>>()?;
    let mut lobes = Vec::new();
    for i in 1..n {
        if amp[i] > amp[i - 1] && amp[i] >= amp[i + 1] {
            let den = amp[i - 1] - 2.0 * amp[i] + amp[i + 1];
            let shift = if den != 0.0 { 0.5 * (amp[i - 1] - amp[i + 1]) / den } else { 0.0 };
            lobes.push([xm, AXIS_STEP * (i as f64 + shift)]);
        }
    }
    if lobes.len() < 2 {
        return Err(Error::Degenerate("fewer than two lobes on the bisector".into()));
    }
    let path_lengths: Vec<f64> = lobes
        .iter()
        .map(|p| p[0].hypot(p[1]) + (cfg.separation_dx - p[0]).hypot(p[1]))
        .collect();
    let mut worst: f64 = 0.0;
    for l in &path_lengths[1..] {
        let cycles = (l - path_lengths[0]) / (2.0 * PI);
        worst = worst.max((cycles - cycles.round()).abs());
    }
    Ok(LobeCoherence {
        lobes,
        path_lengths,
        max_deviation_cycles: worst,
    })
}
