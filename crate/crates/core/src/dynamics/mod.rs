//! Amplitude-transfer dynamics between coupled atoms.
//!
//! All integrators run in dimensionless time (units of the relevant
//! transition timescale); [`timescales`] converts to seconds.

mod cascade;
mod competition;
pub mod timescales;
mod two_atom;
mod work;

pub use cascade::{integrate_cascade, CascadeScenario};
pub use competition::{integrate_competition, CompetitionScenario};
pub use two_atom::{analytic_two_atom, integrate_two_atom, logistic_offset, TwoAtomAmplitudes, TwoAtomScenario};
pub use work::{per_cycle_work, per_cycle_work_closed};

use crate::error::{Error, Result};
use crate::ode::{IntegratorStats, OdeOptions};

/// Square-root arguments clamped by more than this are reported.
pub const CLAMP_REPORT_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    TwoAtom,
    Competition,
    Cascade,
}

/// Time series produced by one integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub kind: ScenarioKind,
    pub times: Vec<f64>,
    /// Names of the squared-amplitude columns in `states`.
    pub labels: Vec<&'static str>,
    /// One row per time, columns as in `labels`.
    pub states: Vec<Vec<f64>>,
    /// Normalized transfer rate per time.
    pub power: Vec<f64>,
    /// Extra derived series (dipole envelopes and the like).
    pub extra: Vec<(&'static str, Vec<f64>)>,
    /// Column groups whose sum must stay at 1.
    pub groups: Vec<Vec<usize>>,
    /// Resolved scenario parameters.
    pub scenario: Vec<(&'static str, f64)>,
    pub stats: IntegratorStats,
    /// Largest amount by which a square-root argument or the state itself
    /// had to be pulled back into range.
    pub max_clamp: f64,
}

impl Trajectory {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        if let Some(j) = self.labels.iter().position(|l| *l == name) {
            return Some(self.states.iter().map(|row| row[j]).collect());
        }
        if name == "power" {
            return Some(self.power.clone());
        }
        self.extra
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v.clone())
    }

    /// Largest |sum - 1| over all groups and samples.
    pub fn conservation_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.states {
            for g in &self.groups {
                let s: f64 = g.iter().map(|&j| row[j]).sum();
                worst = worst.max((s - 1.0).abs());
            }
        }
        worst
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn clamp_warning(&self) -> bool {
        self.max_clamp > CLAMP_REPORT_LIMIT
    }

    /// Time of the maximum of a named column.
    pub fn peak_time(&self, name: &str) -> Option<f64> {
        let v = self.column(name)?;
        let (i, _) = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        Some(self.times[i])
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if !(1e-12..=1e-3).contains(&tol) {
        return Err(Error::param("tol", format!("must lie in [1e-12, 1e-3], got {tol}")));
    }
    Ok(())
}

/// Relative tolerance `tol`; the absolute floor sits far below it so that
/// small seed populations are tracked to relative accuracy.
pub(crate) fn ode_options(tol: f64) -> OdeOptions {
    OdeOptions {
        rtol: tol,
        atol: tol * 1e-6,
        ..Default::default()
    }
}

pub(crate) fn sample_times(t_start: f64, t_end: f64, samples: usize) -> Result<Vec<f64>> {
    if !(t_start.is_finite() && t_end.is_finite() && t_end > t_start) {
        return Err(Error::param("t_span", "need finite t_start < t_end"));
    }
    if samples < 2 {
        return Err(Error::param("samples", "need at least 2 output samples"));
    }
    let n = samples - 1;
    Ok((0..=n)
        .map(|i| {
            if i == n {
                t_end
            } else {
                t_start + (t_end - t_start) * (i as f64 / n as f64)
            }
        })
        .collect())
}

/// sqrt of x clamped to [0, 1], recording how far x was outside.
pub(crate) fn clamped_sqrt(x: f64, worst: &std::cell::Cell<f64>) -> f64 {
    let c = x.clamp(0.0, 1.0);
    let d = (x - c).abs();
    if d > worst.get() {
        worst.set(d);
    }
    c.sqrt()
}
