//! Hydrogen 1s and 2p(m=0) eigenstates, their superpositions, and the
//! quadratures built on them. Lengths are in Bohr radii.

use std::f64::consts::{PI, SQRT_2};

use crate::constants::{PhysicalConstants, ELECTRON_VOLT};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Prefactor of the normalized 2p(m=0) amplitude, 1/(4 sqrt(2 pi)).
pub const P210_PREFACTOR: f64 = 0.099_735_570_100_358_17;

/// Prefactor 1/(4 sqrt(6 pi)) that sometimes appears in print. With it the
/// state has norm 1/3.
pub const P210_PREFACTOR_UNNORMALIZED: f64 = 0.057_582_358_245_222_58;

/// Exact 1s-2p dipole strength, 2 * 128 sqrt(2) / 243, in units of q a0.
pub fn d12_exact() -> f64 {
    2.0 * 128.0 * SQRT_2 / 243.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateLabel {
    S100,
    P210,
    /// Upper level of the three-level cascade (no spatial form).
    SUpper,
    /// Middle level of the cascade.
    PMiddle,
    /// Ground level of the cascade.
    SGround,
}

impl StateLabel {
    pub fn has_spatial_form(self) -> bool {
        matches!(self, StateLabel::S100 | StateLabel::P210)
    }

    fn parity_odd(self) -> bool {
        matches!(self, StateLabel::P210 | StateLabel::PMiddle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenState {
    pub label: StateLabel,
    /// Angular frequency E/hbar [rad/s]; negative for bound states.
    pub omega: f64,
}

impl EigenState {
    pub fn new(label: StateLabel, omega: f64) -> Self {
        EigenState { label, omega }
    }

    /// 1s or 2p hydrogen state with omega = E_n / hbar.
    pub fn hydrogen(label: StateLabel, k: &PhysicalConstants) -> Result<Self> {
        let n = match label {
            StateLabel::S100 => 1.0,
            StateLabel::P210 => 2.0,
            _ => {
                return Err(Error::Domain(format!(
                    "{label:?} is not a hydrogen state"
                )))
            }
        };
        let energy = -k.hartree() / (2.0 * n * n);
        Ok(EigenState::new(label, energy / k.hbar))
    }

    pub fn s100() -> Self {
        Self::hydrogen(StateLabel::S100, &PhysicalConstants::codata2018()).unwrap()
    }

    pub fn p210() -> Self {
        Self::hydrogen(StateLabel::P210, &PhysicalConstants::codata2018()).unwrap()
    }

    /// Real amplitude at (r, theta).
    pub fn amplitude(&self, r: f64, theta: f64) -> Result<f64> {
        eval_eigenstate(self, r, theta)
    }
}

/// Evaluates the real spatial amplitude of `state`.
pub fn eval_eigenstate(state: &EigenState, r: f64, theta: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("theta must lie in [0, pi], got {theta}")));
    }
    amplitude_mu(state.label, r, theta.cos())
}

/// Amplitude as a function of r and mu = cos(theta).
fn amplitude_mu(label: StateLabel, r: f64, mu: f64) -> Result<f64> {
    match label {
        StateLabel::S100 => Ok((-r).exp() / PI.sqrt()),
        StateLabel::P210 => Ok(r * (-0.5 * r).exp() * mu * P210_PREFACTOR),
        other => Err(Error::Domain(format!("{other:?} has no spatial amplitude"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Outer radius of the radial rule [a0]
    pub radial_cutoff: f64,
    pub radial_points: usize,
    pub angular_points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_cutoff: 40.0,
            radial_points: 2000,
            angular_points: 200,
        }
    }
}

impl QuadratureSpec {
    /// Probability of the 1s state beyond the cutoff.
    pub fn ground_tail(&self) -> f64 {
        let r = self.radial_cutoff;
        (-2.0 * r).exp() * (2.0 * r * r + 2.0 * r + 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radial_cutoff > 0.0) {
            return Err(Error::param("radial_cutoff", "must be positive"));
        }
        if self.radial_points < 2 || self.angular_points < 2 {
            return Err(Error::param("radial_points", "need at least 2 points per axis"));
        }
        if self.ground_tail() >= 1e-10 {
            return Err(Error::param(
                "radial_cutoff",
                format!(
                    "ground-state tail beyond {} a0 is {:e}, must stay below 1e-10",
                    self.radial_cutoff,
                    self.ground_tail()
                ),
            ));
        }
        Ok(())
    }

    fn halved(&self) -> Self {
        QuadratureSpec {
            radial_points: (self.radial_points / 2).max(2),
            angular_points: (self.angular_points / 2).max(2),
            ..*self
        }
    }
}

/// Quadrature value with an error estimate from a half-resolution rerun.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

const CONVERGENCE_LIMIT: f64 = 1e-6;

/// 2 pi * int_0^R r^2 dr int_-1^1 f(r, mu) dmu
fn volume_integral(spec: &QuadratureSpec, f: &dyn Fn(f64, f64) -> f64) -> f64 {
    let radial = GaussLegendre::new(spec.radial_points);
    let angular = GaussLegendre::new(spec.angular_points);
    let mut total = 0.0;
    for (r, wr) in radial.on(0.0, spec.radial_cutoff) {
        let mut shell = 0.0;
        for (&mu, &wm) in angular.nodes.iter().zip(&angular.weights) {
            shell += wm * f(r, mu);
        }
        total += wr * r * r * shell;
    }
    2.0 * PI * total
}

fn refined(spec: &QuadratureSpec, f: &dyn Fn(f64, f64) -> f64) -> Result<QuadratureResult> {
    spec.validate()?;
    let value = volume_integral(spec, f);
    let coarse = volume_integral(&spec.halved(), f);
    let error_estimate = (value - coarse).abs();
    Ok(QuadratureResult {
        value,
        error_estimate,
        converged: error_estimate <= CONVERGENCE_LIMIT,
    })
}

fn require_spatial(s: &EigenState) -> Result<()> {
    if s.label.has_spatial_form() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{:?} has no spatial amplitude", s.label)))
    }
}

/// Overlap integral of two states over all space.
pub fn norm_integral(
    s1: &EigenState,
    s2: &EigenState,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    require_spatial(s1)?;
    require_spatial(s2)?;
    let (l1, l2) = (s1.label, s2.label);
    refined(spec, &|r, mu| {
        amplitude_mu(l1, r, mu).unwrap() * amplitude_mu(l2, r, mu).unwrap()
    })
}

/// Dipole strength d12 = 2 q int R1 R2 z dvol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleStrength {
    /// In units of q a0
    pub q_a0: f64,
    /// In C m
    pub si: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

pub fn dipole_strength(
    s1: &EigenState,
    s2: &EigenState,
    spec: &QuadratureSpec,
    k: &PhysicalConstants,
) -> Result<DipoleStrength> {
    require_spatial(s1)?;
    require_spatial(s2)?;
    let (l1, l2) = (s1.label, s2.label);
    let res = refined(spec, &|r, mu| {
        amplitude_mu(l1, r, mu).unwrap() * amplitude_mu(l2, r, mu).unwrap() * r * mu
    })?;
    let mut q_a0 = 2.0 * res.value;
    // Same parity makes the integrand odd in mu; the symmetric rule already
    // cancels it to roundoff, this removes the roundoff.
    if l1.parity_odd() == l2.parity_odd() {
        q_a0 = 0.0;
    }
    Ok(DipoleStrength {
        q_a0,
        si: q_a0 * k.electron_charge_q * k.bohr_radius_a0,
        error_estimate: 2.0 * res.error_estimate,
        converged: res.converged,
    })
}

/// Mixed state a e^{i phi_a} |1> + b e^{i phi_b} |2> (optionally a third
/// component c).
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState {
    amps: Vec<f64>,
    phases: Vec<f64>,
}

impl SuperpositionState {
    pub fn new(amps: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        if !(2..=3).contains(&amps.len()) {
            return Err(Error::param("amps", "need two or three amplitudes"));
        }
        if phases.len() != amps.len() {
            return Err(Error::param("phases", "one phase per amplitude"));
        }
        if amps.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(Error::param("amps", "amplitudes must lie in [0, 1]"));
        }
        let norm: f64 = amps.iter().map(|a| a * a).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::param(
                "amps",
                format!("squared amplitudes sum to {norm}, expected 1"),
            ));
        }
        Ok(SuperpositionState { amps, phases })
    }

    /// Two-component state with relative phase `phi` (= phi_a - phi_b).
    pub fn two(a: f64, b: f64, phi: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![phi, 0.0])
    }

    /// Two-component state from the excited fraction b^2.
    pub fn from_excited_fraction(b2: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&b2) {
            return Err(Error::param("b2", "must lie in [0, 1]"));
        }
        Self::two((1.0 - b2).sqrt(), b2.sqrt(), phi)
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn a(&self) -> f64 {
        self.amps[0]
    }

    pub fn b(&self) -> f64 {
        self.amps[1]
    }

    pub fn relative_phase(&self) -> f64 {
        self.phases[0] - self.phases[1]
    }

    fn require_two(&self) -> Result<()> {
        if self.amps.len() == 2 {
            Ok(())
        } else {
            Err(Error::param("state", "a two-component state is required"))
        }
    }
}

/// Charge per unit z from x-y slices of the mixed 1s/2p density.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceProfile {
    pub z: Vec<f64>,
    pub ground: Vec<f64>,
    pub excited: Vec<f64>,
    pub cross: Vec<f64>,
    pub total: Vec<f64>,
}

impl SliceProfile {
    /// Trapezoid integral of the total over the z grid.
    pub fn z_integral(&self) -> f64 {
        trapezoid(&self.z, &self.total)
    }

    /// Trapezoid integral of z * total, i.e. <z> in a0.
    pub fn first_moment(&self) -> f64 {
        let zt: Vec<f64> = self.z.iter().zip(&self.total).map(|(z, v)| z * v).collect();
        trapezoid(&self.z, &zt)
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// Slice profile of the three density terms at dimensionless time `t`
/// (units of 1/omega0). `z_grid` is in a0.
pub fn mixed_density_slice(
    state: &SuperpositionState,
    t: f64,
    z_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<SliceProfile> {
    state.require_two()?;
    spec.validate()?;
    let (a, b) = (state.a(), state.b());
    let osc = (t + state.relative_phase()).cos();
    let rule = GaussLegendre::new(spec.radial_points.clamp(16, 400));
    let cutoff = spec.radial_cutoff;

    let mut out = SliceProfile {
        z: z_grid.to_vec(),
        ground: Vec::with_capacity(z_grid.len()),
        excited: Vec::with_capacity(z_grid.len()),
        cross: Vec::with_capacity(z_grid.len()),
        total: Vec::with_capacity(z_grid.len()),
    };
    for &z in z_grid {
        let az = z.abs();
        let (mut g, mut e, mut x) = (0.0, 0.0, 0.0);
        if az < cutoff {
            // rho d rho = r dr on the slice, r running from |z| outwards
            for (r, w) in rule.on(az, cutoff) {
                let mu = z / r;
                let r1 = amplitude_mu(StateLabel::S100, r, mu)?;
                let r2 = amplitude_mu(StateLabel::P210, r, mu)?;
                let jac = 2.0 * PI * r * w;
                g += r1 * r1 * jac;
                e += r2 * r2 * jac;
                x += r1 * r2 * jac;
            }
        }
        let (g, e, x) = (a * a * g, b * b * e, 2.0 * a * b * x * osc);
        out.ground.push(g);
        out.excited.push(e);
        out.cross.push(x);
        out.total.push(g + e + x);
    }
    Ok(out)
}

/// Oscillating dipole q<z> and its slow-envelope time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleMoment {
    pub moment: f64,
    pub velocity: f64,
    pub acceleration: f64,
}

/// d12 a b cos(omega0 t + phi), in the units of `d12`.
pub fn dipole_moment(state: &SuperpositionState, d12: f64, omega0: f64, t: f64) -> Result<DipoleMoment> {
    state.require_two()?;
    let ab = state.a() * state.b();
    let arg = omega0 * t + state.relative_phase();
    Ok(DipoleMoment {
        moment: d12 * ab * arg.cos(),
        velocity: -d12 * ab * omega0 * arg.sin(),
        acceleration: -d12 * ab * omega0 * omega0 * arg.cos(),
    })
}

/// The 2p -> 1s transition energy, computed two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionEnergy {
    /// E2 - E1 = (3/8) Hartree [J]
    pub rydberg_j: f64,
    pub rydberg_ev: f64,
    /// 9 q^2 / (128 pi eps0 a0) [J], the other printed expression
    pub printed_j: f64,
    pub printed_ev: f64,
    /// Rydberg energy / hbar [rad/s]
    pub omega0: f64,
    /// 2 pi c / omega0 [m]
    pub wavelength: f64,
    /// Set when the two expressions disagree by more than 1e-6 relative.
    pub discrepancy: bool,
}

pub fn transition_energy(k: &PhysicalConstants) -> TransitionEnergy {
    let q = k.electron_charge_q;
    let rydberg_j = 0.375 * k.hartree();
    let printed_j = 9.0 * q * q / (128.0 * PI * k.eps0 * k.bohr_radius_a0);
    let omega0 = rydberg_j / k.hbar;
    TransitionEnergy {
        rydberg_j,
        rydberg_ev: rydberg_j / ELECTRON_VOLT,
        printed_j,
        printed_ev: printed_j / ELECTRON_VOLT,
        omega0,
        wavelength: 2.0 * PI * k.c / omega0,
        discrepancy: ((printed_j - rydberg_j) / rydberg_j).abs() > 1e-6,
    }
}
