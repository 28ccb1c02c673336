//! Quadrature for the resonant thermal integrals, plus two independent
//! oracles (a brute-force trapezoid and a pole + background estimate).

mod adaptive;
mod moments;
mod oracle;

pub(crate) use adaptive::kronrod15;
pub use adaptive::{
    integrate_adaptive, AdaptiveIntegrator, QuadratureResult, DEFAULT_MAX_EVALUATIONS, MAX_REL_TOL,
    MIN_REL_TOL,
};
pub(crate) use moments::{integrate_resonant, lorentz_denominator, lorentz_denominator_offset};
pub use moments::{
    narrow_resonance_estimate, narrow_resonance_parts, planck_lorentzian_moment, thermal_cutoff,
    MomentSpec, NarrowResonance, RESONANCE_WINDOW,
};
pub use oracle::{riemann_oracle, riemann_oracle_with_refinement, OracleValue, MIN_ORACLE_POINTS};
