use crate::error::{Error, Result};
use crate::ode::integrate;

use super::{check_tol, ode_options, sample_times, ScenarioKind, Trajectory};

/// Emitter alpha hands its excitation to absorber beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAtomScenario {
    pub tau: f64,
    pub t_start: f64,
    pub t_end: f64,
    /// Excited fraction of the emitter at `t_start`.
    pub initial_b2_alpha: f64,
    /// sin of the relative dipole phase; -1 gives full-rate decay.
    pub sin_phi: f64,
    pub samples: usize,
}

impl Default for TwoAtomScenario {
    fn default() -> Self {
        TwoAtomScenario {
            tau: 1.0,
            t_start: -10.0,
            t_end: 10.0,
            initial_b2_alpha: 1.0 - 1e-6,
            sin_phi: -1.0,
            samples: 2001,
        }
    }
}

impl TwoAtomScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::param("tau", "must be positive"));
        }
        if !(self.initial_b2_alpha > 0.0 && self.initial_b2_alpha < 1.0) {
            return Err(Error::param(
                "initial_b2_alpha",
                "must lie strictly inside (0, 1); 0 and 1 are fixed points",
            ));
        }
        if !(-1.0..=1.0).contains(&self.sin_phi) {
            return Err(Error::param("sin_phi", "must lie in [-1, 1]"));
        }
        sample_times(self.t_start, self.t_end, self.samples).map(|_| ())
    }

    /// Rate constant of the logistic, -sin(phi)/tau.
    pub fn rate(&self) -> f64 {
        -self.sin_phi / self.tau
    }

    /// Closed-form emitter excitation at `t`.
    pub fn analytic_b2_alpha(&self, t: f64) -> f64 {
        let k = self.rate();
        if k == 0.0 {
            return self.initial_b2_alpha;
        }
        let t0 = logistic_offset(self.initial_b2_alpha, self.t_start, 1.0 / k);
        logistic(k * (t - t0))
    }
}

/// 1 / (e^x + 1) without overflow.
fn logistic(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (x.exp() + 1.0)
    }
}

/// Time at which a decaying logistic started at `b2_0` at `t_start` passes 1/2.
pub fn logistic_offset(b2_0: f64, t_start: f64, tau: f64) -> f64 {
    t_start - tau * ((1.0 - b2_0) / b2_0).ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAtomAmplitudes {
    pub b2_alpha: f64,
    pub a2_alpha: f64,
    pub b2_beta: f64,
    pub a2_beta: f64,
}

/// Closed-form logistic transfer centred on `t_offset`.
pub fn analytic_two_atom(t: f64, tau: f64, t_offset: f64) -> Result<TwoAtomAmplitudes> {
    if !(tau > 0.0) {
        return Err(Error::param("tau", "must be positive"));
    }
    let b2 = logistic((t - t_offset) / tau);
    let a2 = logistic(-(t - t_offset) / tau);
    Ok(TwoAtomAmplitudes {
        b2_alpha: b2,
        a2_alpha: a2,
        b2_beta: a2,
        a2_beta: b2,
    })
}

pub fn integrate_two_atom(s: &TwoAtomScenario, tol: f64) -> Result<Trajectory> {
    s.validate()?;
    check_tol(tol)?;
    let times = sample_times(s.t_start, s.t_end, s.samples)?;
    let k = s.rate();
    // Both populations are carried so the minority one keeps its relative
    // accuracy; their sum is a linear invariant of the scheme.
    let project = |y: &mut [f64]| {
        let mut d: f64 = 0.0;
        for v in y.iter_mut() {
            let c = v.clamp(0.0, 1.0);
            d = d.max((*v - c).abs());
            *v = c;
        }
        d
    };
    let sol = integrate(
        |_, y, dy| {
            let flow = k * y[0] * y[1];
            dy[0] = -flow;
            dy[1] = flow;
        },
        s.t_start,
        &[s.initial_b2_alpha, 1.0 - s.initial_b2_alpha],
        &times,
        ode_options(tol),
        Some(&project),
    )?;

    let mut states = Vec::with_capacity(times.len());
    let mut power = Vec::with_capacity(times.len());
    for y in &sol.states {
        let b2 = if y[0] <= 0.5 { y[0] } else { 1.0 - y[1] };
        let a2 = 1.0 - b2;
        states.push(vec![b2, a2, a2, b2]);
        power.push(k * b2 * a2);
    }
    Ok(Trajectory {
        kind: ScenarioKind::TwoAtom,
        times: sol.times,
        labels: vec!["b2_alpha", "a2_alpha", "b2_beta", "a2_beta"],
        states,
        power,
        extra: Vec::new(),
        groups: vec![vec![0, 1], vec![2, 3]],
        scenario: vec![
            ("tau", s.tau),
            ("t_start", s.t_start),
            ("t_end", s.t_end),
            ("initial_b2_alpha", s.initial_b2_alpha),
            ("sin_phi", s.sin_phi),
            ("tol", tol),
        ],
        stats: sol.stats,
        max_clamp: sol.stats.max_projection,
    })
}
