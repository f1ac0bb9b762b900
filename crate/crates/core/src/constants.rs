//! Physical constants, CODATA 2018.

use std::f64::consts::PI;

/// SI values of the constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Bohr radius [m]
    pub bohr_radius_a0: f64,
    /// Elementary charge [C]
    pub electron_charge_q: f64,
    /// Electron mass [kg]
    pub electron_mass_m: f64,
    /// Reduced Planck constant [J s]
    pub hbar: f64,
    /// Speed of light [m/s]
    pub c: f64,
    /// Vacuum permeability [H/m]
    pub mu0: f64,
    /// Vacuum permittivity [F/m]
    pub eps0: f64,
}

pub const PLANCK_H: f64 = 6.626_070_15e-34;
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

impl PhysicalConstants {
    pub const fn codata2018() -> Self {
        PhysicalConstants {
            bohr_radius_a0: 5.291_772_109_03e-11,
            electron_charge_q: 1.602_176_634e-19,
            electron_mass_m: 9.109_383_701_5e-31,
            hbar: PLANCK_H / (2.0 * PI),
            c: 299_792_458.0,
            mu0: 1.256_637_062_12e-6,
            eps0: 8.854_187_812_8e-12,
        }
    }

    /// Bohr radius recomputed from q, m, hbar and eps0.
    pub fn derived_bohr_radius(&self) -> f64 {
        4.0 * PI * self.eps0 * self.hbar * self.hbar
            / (self.electron_mass_m * self.electron_charge_q * self.electron_charge_q)
    }

    /// `eps0 * mu0 * c^2 - 1`
    pub fn vacuum_residual(&self) -> f64 {
        self.eps0 * self.mu0 * self.c * self.c - 1.0
    }

    /// q^2 / (4 pi eps0 a0) [J]
    pub fn hartree(&self) -> f64 {
        let q = self.electron_charge_q;
        q * q / (4.0 * PI * self.eps0 * self.bohr_radius_a0)
    }

    /// Checks both internal consistency relations; returns the relative
    /// residuals `(vacuum, bohr)`.
    pub fn consistency(&self) -> (f64, f64) {
        let bohr = self.derived_bohr_radius() / self.bohr_radius_a0 - 1.0;
        (self.vacuum_residual(), bohr)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}
