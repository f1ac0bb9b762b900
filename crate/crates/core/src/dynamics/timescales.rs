//! Conversion of the dimensionless dynamics to seconds.

use std::f64::consts::PI;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::paths::enhancement_factor;
use crate::states::transition_energy;

/// Fraction of the free coupling rate available at the steepest point of
/// the transfer, where every amplitude is 1/sqrt(2).
pub const PEAK_TRANSFER_FACTOR: f64 = 0.25;

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::param("r", "separation must be positive"))
    }
}

/// Free-space coupling rate mu0 omega0^3 d12^2 / (8 pi r) [W].
/// `d12` is in C m.
pub fn coupling_power(d12: f64, omega0: f64, r: f64, k: &PhysicalConstants) -> Result<f64> {
    check_r(r)?;
    Ok(k.mu0 * omega0.powi(3) * d12 * d12 / (8.0 * PI * r))
}

/// Transition time for separation `r` [m]; an optical system of solid
/// angle `solid_angle` [sr] shortens it by the enhancement factor.
pub fn transition_time(r: f64, k: &PhysicalConstants, solid_angle: Option<f64>) -> Result<f64> {
    check_r(r)?;
    let te = transition_energy(k);
    let a0 = k.bohr_radius_a0;
    let free = r * k.c * k.c / (4.0 * a0.powi(3) * te.omega0.powi(3));
    match solid_angle {
        None => Ok(free),
        Some(omega) => Ok(free / enhancement_factor(r, te.wavelength, omega)?),
    }
}

/// Every intermediate of the energy-over-power estimate of the transition
/// time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionChain {
    /// Energy that has to move [J]
    pub energy: f64,
    /// Dipole strength used [C m]
    pub d12: f64,
    /// Free coupling rate [W]
    pub power: f64,
    /// Rate at the steepest point [W]
    pub peak_power: f64,
    /// energy / peak_power [s]
    pub tau: f64,
}

/// tau = E / (P / 4) with a caller-chosen dipole strength (in q a0) and
/// transferred energy [J]. Using the 9q^2/(128 pi eps0 a0) energy with
/// d12 = 3 q a0 reproduces [`transition_time`] exactly.
pub fn transition_chain(
    r: f64,
    d12_q_a0: f64,
    energy: f64,
    k: &PhysicalConstants,
) -> Result<TransitionChain> {
    check_r(r)?;
    if !(d12_q_a0 > 0.0) {
        return Err(Error::param("d12", "must be positive"));
    }
    let te = transition_energy(k);
    let d12 = d12_q_a0 * k.electron_charge_q * k.bohr_radius_a0;
    let power = coupling_power(d12, te.omega0, r, k)?;
    let peak_power = PEAK_TRANSFER_FACTOR * power;
    Ok(TransitionChain {
        energy,
        d12,
        power,
        peak_power,
        tau: energy / peak_power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_with_printed_energy_matches_closed_form() {
        let k = PhysicalConstants::codata2018();
        let te = transition_energy(&k);
        let chain = transition_chain(1.0, 3.0, te.printed_j, &k).unwrap();
        let direct = transition_time(1.0, &k, None).unwrap();
        assert!((chain.tau / direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_separation() {
        let k = PhysicalConstants::codata2018();
        assert!(transition_time(0.0, &k, None).is_err());
        assert!(coupling_power(1.0, 1.0, -1.0, &k).is_err());
    }
}
