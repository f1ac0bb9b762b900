//! Dormand-Prince 5(4) with step-size control and fourth-order dense output.

use crate::error::{Error, Result};

/// Correction hook applied to accepted states; returns the size of the correction.
pub type Projection<'a> = &'a dyn Fn(&mut [f64]) -> f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// First trial step; picked automatically when `None`.
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions {
            rtol: tol,
            atol: tol,
            ..Default::default()
        }
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-9,
            atol: 1e-9,
            h_init: None,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    /// Largest correction applied by the projection hook.
    pub max_projection: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

/// Single-step driver. Each call to [`Dopri5::step`] advances by one
/// accepted step and leaves the dense-output polynomial for that step.
pub struct Dopri5<F> {
    f: F,
    opts: OdeOptions,
    t: f64,
    y: Vec<f64>,
    h: f64,
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    t_prev: f64,
    cont: [Vec<f64>; 5],
    stats: IntegratorStats,
}

impl<F> Dopri5<F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    pub fn new(mut f: F, t0: f64, y0: &[f64], direction_hint: f64, opts: OdeOptions) -> Result<Self> {
        if !(opts.rtol > 0.0 && opts.atol > 0.0) {
            return Err(Error::param("tol", "tolerances must be positive"));
        }
        let n = y0.len();
        let mut k: [Vec<f64>; 7] = Default::default();
        for ki in k.iter_mut() {
            *ki = vec![0.0; n];
        }
        f(t0, y0, &mut k[0]);
        let mut s = Dopri5 {
            f,
            opts,
            t: t0,
            y: y0.to_vec(),
            h: 0.0,
            k,
            tmp: vec![0.0; n],
            t_prev: t0,
            cont: [y0.to_vec(), vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            stats: IntegratorStats {
                evaluations: 1,
                ..Default::default()
            },
        };
        s.h = match opts.h_init {
            Some(h) => h.abs().min(opts.h_max),
            None => s.initial_step(direction_hint.abs()),
        };
        Ok(s)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn stats(&self) -> IntegratorStats {
        self.stats
    }

    fn scale(&self, v: f64) -> f64 {
        self.opts.atol + self.opts.rtol * v.abs()
    }

    fn initial_step(&mut self, span: f64) -> f64 {
        let n = self.y.len().max(1) as f64;
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..self.y.len() {
            let sc = self.scale(self.y[i]);
            d0 += (self.y[i] / sc).powi(2);
            d1 += (self.k[0][i] / sc).powi(2);
        }
        let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        if span > 0.0 {
            h0 = h0.min(span);
        }
        h0 = h0.min(self.opts.h_max);
        // one explicit Euler probe for the second derivative
        for i in 0..self.y.len() {
            self.tmp[i] = self.y[i] + h0 * self.k[0][i];
        }
        let mut f1 = vec![0.0; self.y.len()];
        (self.f)(self.t + h0, &self.tmp, &mut f1);
        self.stats.evaluations += 1;
        let mut d2 = 0.0;
        for (i, f1i) in f1.iter().enumerate() {
            let sc = self.scale(self.y[i]);
            d2 += ((f1i - self.k[0][i]) / sc).powi(2);
        }
        let d2 = (d2 / n).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.opts.h_max)
    }

    /// Takes one accepted step without passing `t_limit`. The optional
    /// `project` hook may modify the new state and returns the size of its
    /// correction.
    pub fn step(&mut self, t_limit: f64, project: Option<Projection<'_>>) -> Result<()> {
        let n = self.y.len();
        let mut reject_streak = false;
        loop {
            if self.stats.accepted + self.stats.rejected >= self.opts.max_steps {
                return Err(self.fail("step budget exhausted"));
            }
            let remaining = t_limit - self.t;
            if remaining <= 0.0 {
                return Ok(());
            }
            let mut h = self.h.min(self.opts.h_max);
            if h >= remaining {
                h = remaining;
            } else if 1.1 * h >= remaining {
                h = 0.5 * remaining;
            }
            if h <= 16.0 * f64::EPSILON * self.t.abs().max(1.0) {
                return Err(self.fail("step size underflow"));
            }
            let t = self.t;
            let y = &self.y;
            let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
            let tmp = &mut self.tmp;
            let f = &mut self.f;

            for i in 0..n {
                tmp[i] = y[i] + h * A21 * k1[i];
            }
            f(t + C2 * h, tmp, k2);
            for i in 0..n {
                tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            f(t + C3 * h, tmp, k3);
            for i in 0..n {
                tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            f(t + C4 * h, tmp, k4);
            for i in 0..n {
                tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            f(t + C5 * h, tmp, k5);
            for i in 0..n {
                tmp[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            f(t + h, tmp, k6);
            let mut y1 = vec![0.0; n];
            for i in 0..n {
                y1[i] = y[i]
                    + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            f(t + h, &y1, k7);
            self.stats.evaluations += 6;

            let mut err = 0.0;
            for i in 0..n {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.opts.atol + self.opts.rtol * y[i].abs().max(y1[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / n.max(1) as f64).sqrt();
            if !err.is_finite() {
                self.stats.rejected += 1;
                self.h = h * FAC_MIN;
                reject_streak = true;
                continue;
            }
            let mut fac = (SAFETY * err.max(1e-10).powf(-0.2)).clamp(FAC_MIN, FAC_MAX);
            if err > 1.0 {
                self.stats.rejected += 1;
                self.h = h * fac.min(1.0);
                reject_streak = true;
                continue;
            }
            if reject_streak {
                fac = fac.min(1.0);
            }

            // dense output coefficients
            for i in 0..n {
                let dy = y1[i] - y[i];
                let bspl = h * k1[i] - dy;
                self.cont[0][i] = y[i];
                self.cont[1][i] = dy;
                self.cont[2][i] = bspl;
                self.cont[3][i] = dy - h * k7[i] - bspl;
                self.cont[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            self.t_prev = t;
            self.t = if h == remaining { t_limit } else { t + h };
            self.stats.accepted += 1;
            if let Some(p) = project {
                let moved = p(&mut y1);
                if moved > 0.0 {
                    self.stats.max_projection = self.stats.max_projection.max(moved);
                    f(self.t, &y1, k7);
                    self.stats.evaluations += 1;
                }
            }
            self.y = y1;
            std::mem::swap(k1, k7);
            self.h = h * fac;
            return Ok(());
        }
    }

    /// Dense output inside the last accepted step.
    pub fn dense(&self, t: f64, out: &mut [f64]) {
        let h = self.t - self.t_prev;
        let th = if h == 0.0 { 1.0 } else { (t - self.t_prev) / h };
        let th1 = 1.0 - th;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.cont[0][i]
                + th * (self.cont[1][i]
                    + th1 * (self.cont[2][i] + th * (self.cont[3][i] + th1 * self.cont[4][i])));
        }
    }

    pub fn last_step_start(&self) -> f64 {
        self.t_prev
    }

    fn fail(&self, reason: &str) -> Error {
        Error::IntegrationFailure {
            t: self.t,
            reason: reason.to_string(),
            times: Vec::new(),
            states: Vec::new(),
        }
    }
}

/// Solution sampled at the requested output times.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub stats: IntegratorStats,
}

/// Integrates `f` from `t0` through every time in `t_out` (ascending,
/// all >= t0). Output samples are passed through `project` as well.
pub fn integrate<F>(
    f: F,
    t0: f64,
    y0: &[f64],
    t_out: &[f64],
    opts: OdeOptions,
    project: Option<Projection<'_>>,
) -> Result<OdeSolution>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    if t_out.windows(2).any(|w| w[1] < w[0]) || t_out.first().is_some_and(|&t| t < t0) {
        return Err(Error::param("t_out", "output times must be ascending and >= t0"));
    }
    let t_end = t_out.last().copied().unwrap_or(t0);
    let mut solver = Dopri5::new(f, t0, y0, t_end - t0, opts)?;
    let mut times = Vec::with_capacity(t_out.len());
    let mut states = Vec::with_capacity(t_out.len());
    let mut buf = vec![0.0; y0.len()];
    let mut max_sample_projection: f64 = 0.0;
    for &t in t_out {
        while solver.t() < t {
            if let Err(e) = solver.step(t_end, project) {
                return Err(match e {
                    Error::IntegrationFailure { t, reason, .. } => Error::IntegrationFailure {
                        t,
                        reason,
                        times,
                        states,
                    },
                    other => other,
                });
            }
        }
        if t == solver.t() {
            buf.copy_from_slice(solver.y());
        } else if t == t0 && solver.stats().accepted == 0 {
            buf.copy_from_slice(y0);
        } else {
            solver.dense(t, &mut buf);
            if let Some(p) = project {
                max_sample_projection = max_sample_projection.max(p(&mut buf));
            }
        }
        times.push(t);
        states.push(buf.clone());
    }
    let mut stats = solver.stats();
    stats.max_projection = stats.max_projection.max(max_sample_projection);
    Ok(OdeSolution { times, states, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let ts: Vec<f64> = (0..=50).map(|i| i as f64 * 0.2).collect();
        let sol = integrate(
            |_, y, dy| dy[0] = -y[0],
            0.0,
            &[1.0],
            &ts,
            OdeOptions::with_tol(1e-10),
            None,
        )
        .unwrap();
        for (t, y) in sol.times.iter().zip(&sol.states) {
            assert!((y[0] - (-t).exp()).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn harmonic_oscillator_dense_output() {
        let ts: Vec<f64> = (0..=300).map(|i| i as f64 * 0.1).collect();
        let sol = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[1.0, 0.0],
            &ts,
            OdeOptions::with_tol(1e-11),
            None,
        )
        .unwrap();
        for (t, y) in sol.times.iter().zip(&sol.states) {
            assert!((y[0] - t.cos()).abs() < 1e-8, "t={t} {}", y[0]);
        }
        assert!(sol.stats.accepted < 2000);
    }

    #[test]
    fn blowup_reports_partial_trajectory() {
        let ts: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1).collect();
        let err = integrate(
            |_, y, dy| dy[0] = y[0] * y[0],
            0.0,
            &[1.0],
            &ts,
            OdeOptions::with_tol(1e-10),
            None,
        )
        .unwrap_err();
        match err {
            Error::IntegrationFailure { t, times, .. } => {
                assert!(t < 1.0 + 1e-6);
                assert!(!times.is_empty() && *times.last().unwrap() < 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
