//! Temperature-dependent energy and free-energy shifts of a charged harmonic
//! oscillator in blackbody radiation, computed by counting the field modes of
//! the dispersive medium the oscillators form.
//!
//! All quantities are dimensionless: frequencies in units of the resonance
//! ω₀, energies in units of ħω₀, temperature as θ = kT/(ħω₀).

// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod constants;
pub mod energies;
mod error;
pub mod model;
pub mod quadrature;
pub mod svg;
pub mod sweep;

pub use energies::{EnergyBreakdown, FreeEnergy, ShiftModel};
pub use error::{Error, Result};
pub use model::{ComplexResponse, DimensionlessParams, PhysicalInput};
pub use quadrature::{MomentSpec, QuadratureResult};
pub use sweep::{SweepTable, ThetaGrid};
