use std::cell::Cell;

use crate::error::{Error, Result};
use crate::ode::integrate;

use super::{check_tol, clamped_sqrt, ode_options, sample_times, ScenarioKind, Trajectory};

/// Three-level cascade c (upper) -> b (middle) -> a (ground), each step
/// driven by its own partner atom. Times are in the units of `tau_alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeScenario {
    pub tau_alpha: f64,
    pub tau_beta: f64,
    /// Initial (a^2, b^2, c^2).
    pub initial: (f64, f64, f64),
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
}

impl Default for CascadeScenario {
    fn default() -> Self {
        CascadeScenario {
            tau_alpha: 1.0,
            tau_beta: 1.0 / 1.5,
            initial: (1e-6, 1e-6, 1.0 - 2e-6),
            t_start: 0.0,
            t_end: 60.0,
            samples: 6001,
        }
    }
}

impl CascadeScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_alpha > 0.0 && self.tau_beta > 0.0) {
            return Err(Error::param("tau_alpha", "both timescales must be positive"));
        }
        let (a, b, c) = self.initial;
        if [a, b, c].iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::param("initial", "squared amplitudes must lie in [0, 1]"));
        }
        if (a + b + c - 1.0).abs() > 1e-12 {
            return Err(Error::param(
                "initial",
                format!("a2 + b2 + c2 = {}, expected 1", a + b + c),
            ));
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

pub fn integrate_cascade(s: &CascadeScenario, tol: f64) -> Result<Trajectory> {
    s.validate()?;
    check_tol(tol)?;
    let times = sample_times(s.t_start, s.t_end, s.samples)?;
    let worst = Cell::new(0.0);
    let (ta, tb) = (s.tau_alpha, s.tau_beta);
    // state is (a^2, c^2); b^2 follows from normalization
    let rates = |y: &[f64], worst: &Cell<f64>| {
        let (a2, c2) = (y[0], y[1]);
        let b = clamped_sqrt(1.0 - a2 - c2, worst);
        let da2 = a2 * b * clamped_sqrt(1.0 - a2, worst) / tb;
        let dc2 = -c2 * b * clamped_sqrt(1.0 - c2, worst) / ta;
        (da2, dc2)
    };
    let sol = integrate(
        |_, y, dy| {
            let (da, dc) = rates(y, &worst);
            dy[0] = da;
            dy[1] = dc;
        },
        s.t_start,
        &[s.initial.0, s.initial.2],
        &times,
        ode_options(tol),
        Some(&project),
    )?;

    let scratch = Cell::new(0.0);
    let n = sol.times.len();
    let mut states = Vec::with_capacity(n);
    let mut power = Vec::with_capacity(n);
    let mut upper_rate = Vec::with_capacity(n);
    let mut upper_env = Vec::with_capacity(n);
    let mut lower_env = Vec::with_capacity(n);
    for y in &sol.states {
        let (a2, c2) = (y[0], y[1]);
        let b2 = (1.0 - a2 - c2).max(0.0);
        states.push(vec![a2, b2, c2]);
        let (da, dc) = rates(y, &scratch);
        power.push(da);
        upper_rate.push(-dc);
        upper_env.push((b2 * c2).sqrt());
        lower_env.push((a2 * b2).sqrt());
    }
    Ok(Trajectory {
        kind: ScenarioKind::Cascade,
        times: sol.times,
        labels: vec!["a2", "b2", "c2"],
        states,
        power,
        extra: vec![
            ("upper_rate", upper_rate),
            ("upper_envelope", upper_env),
            ("lower_envelope", lower_env),
        ],
        groups: vec![vec![0, 1, 2]],
        scenario: vec![
            ("tau_alpha", s.tau_alpha),
            ("tau_beta", s.tau_beta),
            ("initial_a2", s.initial.0),
            ("initial_b2", s.initial.1),
            ("initial_c2", s.initial.2),
            ("t_start", s.t_start),
            ("t_end", s.t_end),
            ("tol", tol),
        ],
        stats: sol.stats,
        max_clamp: worst.get().max(sol.stats.max_projection),
    })
}
