use std::cell::Cell;

use crate::error::{Error, Result};
use crate::ode::integrate;

use super::{check_tol, clamped_sqrt, ode_options, sample_times, ScenarioKind, Trajectory};

/// One emitter, two candidate absorbers; beta2 is detuned by `delta_omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompetitionScenario {
    pub tau: f64,
    /// Detuning of beta2 in units of 1/tau.
    pub delta_omega: f64,
    /// Initial excited fractions of (beta1, beta2).
    pub initial_b2: (f64, f64),
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
}

impl Default for CompetitionScenario {
    fn default() -> Self {
        CompetitionScenario {
            tau: 1.0,
            delta_omega: 0.3,
            initial_b2: (1e-6, 1e-6),
            t_start: -10.0,
            t_end: 30.0,
            samples: 4001,
        }
    }
}

impl CompetitionScenario {
    /// Seeds must be positive; a zero seed is accepted only to reduce to
    /// the two-atom problem.
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::param("tau", "must be positive"));
        }
        let (s1, s2) = self.initial_b2;
        if !(s1 >= 0.0 && s2 >= 0.0 && s1 + s2 > 0.0 && s1 + s2 < 1.0) {
            return Err(Error::param(
                "initial_b2",
                "seeds must be non-negative, not both zero, and sum below 1",
            ));
        }
        if !self.delta_omega.is_finite() {
            return Err(Error::param("delta_omega", "must be finite"));
        }
        sample_times(self.t_start, self.t_end, self.samples).map(|_| ())
    }
}

fn project(y: &mut [f64]) -> f64 {
    let before = [y[0], y[1]];
    y[0] = y[0].clamp(0.0, 1.0);
    y[1] = y[1].clamp(0.0, 1.0);
    let s = y[0] + y[1];
    if s > 1.0 {
        y[0] /= s;
        y[1] /= s;
    }
    (y[0] - before[0]).abs().max((y[1] - before[1]).abs())
}

pub fn integrate_competition(s: &CompetitionScenario, tol: f64) -> Result<Trajectory> {
    s.validate()?;
    check_tol(tol)?;
    let times = sample_times(s.t_start, s.t_end, s.samples)?;
    let worst = Cell::new(0.0);
    let (tau, dw) = (s.tau, s.delta_omega);
    let rates = |t: f64, y: &[f64], worst: &Cell<f64>| {
        let (b1, b2) = (y[0], y[1]);
        let sum = b1 + b2;
        let common = (1.0 - sum) * sum;
        let g1 = clamped_sqrt(b1 * (1.0 - b1) * common, worst);
        let g2 = clamped_sqrt(b2 * (1.0 - b2) * common, worst);
        (g1 / tau, g2 * (dw * t / tau).cos() / tau)
    };
    let sol = integrate(
        |t, y, dy| {
            let (d1, d2) = rates(t, y, &worst);
            dy[0] = d1;
            dy[1] = d2;
        },
        s.t_start,
        &[s.initial_b2.0, s.initial_b2.1],
        &times,
        ode_options(tol),
        Some(&project),
    )?;

    let scratch = Cell::new(0.0);
    let mut states = Vec::with_capacity(times.len());
    let mut power = Vec::with_capacity(times.len());
    for (t, y) in sol.times.iter().zip(&sol.states) {
        let alpha = (1.0 - y[0] - y[1]).max(0.0);
        states.push(vec![y[0], y[1], alpha]);
        let (d1, d2) = rates(*t, y, &scratch);
        power.push(d1 + d2);
    }
    Ok(Trajectory {
        kind: ScenarioKind::Competition,
        times: sol.times,
        labels: vec!["b2_beta1", "b2_beta2", "b2_alpha"],
        states,
        power,
        extra: Vec::new(),
        groups: vec![vec![0, 1, 2]],
        scenario: vec![
            ("tau", s.tau),
            ("delta_omega", s.delta_omega),
            ("initial_b2_beta1", s.initial_b2.0),
            ("initial_b2_beta2", s.initial_b2.1),
            ("t_start", s.t_start),
            ("t_end", s.t_end),
            ("tol", tol),
        ],
        stats: sol.stats,
        max_clamp: worst.get().max(sol.stats.max_projection),
    })
}
