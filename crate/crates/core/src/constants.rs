//! CODATA 2018 values in Gaussian (CGS) units.

use serde::{Deserialize, Serialize};

/// Reduced Planck constant, erg s.
pub const HBAR: f64 = 1.054_571_817e-27;
/// Boltzmann constant, erg/K.
pub const BOLTZMANN: f64 = 1.380_649e-16;
/// Speed of light, cm/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e10;
/// Elementary charge, statC.
pub const ELEMENTARY_CHARGE: f64 = 4.803_204_712_570_263e-10;
/// Electron mass, g.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-28;

/// Fundamental constants used by the unit reduction. Defaults to CODATA 2018;
/// individual fields may be overridden for testing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub hbar: f64,
    pub boltzmann: f64,
    pub speed_of_light: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            hbar: HBAR,
            boltzmann: BOLTZMANN,
            speed_of_light: SPEED_OF_LIGHT,
        }
    }
}

/// e²/m for the electron, cm³/s².
pub fn electron_charge_sq_over_mass() -> f64 {
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / ELECTRON_MASS
}
