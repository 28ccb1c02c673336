//! Planck–Lorentzian moments
//! `I_p(θ, g) = ∫₀^∞ u^p du / [(e^{u/θ} − 1)((1 − u²)² + g²u²)]`
//! and the narrow-resonance estimate used to cross-check them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::adaptive::{AdaptiveIntegrator, QuadratureResult};
use crate::error::{domain, Result};
use crate::model::{bose, check_linewidth};

/// Half-width of the zoomed resonance window in units of g.
pub const RESONANCE_WINDOW: f64 = 50.0;

/// Upper integration limit for a thermal integrand: max(40θ, 10).
pub fn thermal_cutoff(theta: f64) -> f64 {
    (40.0 * theta).max(10.0)
}

/// (1 − u²)² + g²u²
#[inline]
pub(crate) fn lorentz_denominator(u: f64, g: f64) -> f64 {
    let s = 1.0 - u * u;
    s * s + g * g * u * u
}

/// (1 − u²)² + g²u² at u = 1 + t, formed from the offset so it keeps its
/// relative precision when |t| ≪ 1.
#[inline]
pub(crate) fn lorentz_denominator_offset(t: f64, g: f64) -> f64 {
    let s = t * (2.0 + t);
    let u = 1.0 + t;
    s * s + g * g * u * u
}

/// Integrate over `u ∈ [0, upper]` an integrand carrying the Lorentzian
/// resonance at u = 1. `f` receives the offset `t = u − 1`. The window
/// `1 ± βg` is integrated in the angle φ of `t = (g/2) tan φ`, which
/// flattens the peak.
pub(crate) fn integrate_resonant<F: Fn(f64) -> f64>(
    integrator: &AdaptiveIntegrator,
    f: F,
    g: f64,
    upper: f64,
) -> Result<QuadratureResult> {
    let half = RESONANCE_WINDOW * g;
    debug_assert!(upper > 1.0 + half);

    let left_knots: Vec<f64> = [-0.5, -0.1].into_iter().filter(|&k| k < -half).collect();
    let left = integrator.integrate(&f, -1.0, -half, &left_knots)?;

    let edge = (2.0 * RESONANCE_WINDOW).atan();
    let knot = 2f64.atan();
    let zoom = |phi: f64| {
        let t = phi.tan();
        f(0.5 * g * t) * 0.5 * g * (1.0 + t * t)
    };
    let inner = integrator.integrate(zoom, -edge, edge, &[-knot, knot])?;

    let mut right_knots = Vec::new();
    let mut k = 1.1;
    while k < upper {
        if k > 1.0 + half {
            right_knots.push(k - 1.0);
        }
        k = if k < 2.0 { 2.0 } else { 2.0 * k };
    }
    let right = integrator.integrate(&f, half, upper - 1.0, &right_knots)?;

    Ok(QuadratureResult::sum([left, inner, right]))
}

/// Parameters of one moment integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSpec {
    pub p: u32,
    pub theta: f64,
    pub g: f64,
}

impl MomentSpec {
    pub fn new(p: u32, theta: f64, g: f64) -> Result<Self> {
        if p != 3 && p != 5 {
            return Err(domain("p", p as f64, "moment power must be 3 or 5"));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(domain("theta", theta, "must be finite and > 0"));
        }
        check_linewidth(g)?;
        Ok(MomentSpec { p, theta, g })
    }

    /// u^p n̄(u/θ) / D(u)
    #[inline]
    pub fn integrand(&self, u: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        u.powi(self.p as i32) * bose(u / self.theta) / lorentz_denominator(u, self.g)
    }

    /// The integrand at u = 1 + t.
    #[inline]
    pub fn integrand_offset(&self, t: f64) -> f64 {
        let u = 1.0 + t;
        u.powi(self.p as i32) * bose(u / self.theta) / lorentz_denominator_offset(t, self.g)
    }

    /// Bound on the integrand mass beyond `x ≥ 10`.
    pub fn tail_bound(&self, x: f64) -> f64 {
        let theta = self.theta;
        let decay = (-x / theta).exp();
        if decay == 0.0 {
            return 0.0;
        }
        let k = 1.0 / ((1.0 - 1.0 / (x * x)).powi(2) * (-(-x / theta).exp_m1()));
        let moment = match self.p {
            5 => theta * decay * (x + theta),
            _ => theta * decay / x,
        };
        k * moment
    }
}

/// Evaluate `I_p(θ, g)`. The truncation at `max(40θ, 10)` is folded into the
/// error estimate.
pub fn planck_lorentzian_moment(spec: &MomentSpec, rel_tol: f64) -> Result<QuadratureResult> {
    let integrator = AdaptiveIntegrator::new(rel_tol)?;
    let upper = thermal_cutoff(spec.theta);
    let mut r = integrate_resonant(&integrator, |t| spec.integrand_offset(t), spec.g, upper)?;
    r.error_estimate += spec.tail_bound(upper);
    Ok(r)
}

/// Pole and smooth background of the narrow-resonance decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NarrowResonance {
    /// (π/2g)·n̄(1/θ)
    pub pole: f64,
    /// Hadamard finite part of ∫ u^p n̄(u/θ)/(1 − u²)² du.
    pub background: f64,
}

impl NarrowResonance {
    pub fn total(&self) -> f64 {
        self.pole + self.background
    }
}

/// Pole + background decomposition valid for g ≤ 10⁻³.
///
/// As g → 0, `1/D(u) → (π/2g) δ(u − 1) + f.p. 1/(1 − u²)²` with corrections
/// of relative order g². Writing the integrand as `φ(u)/(u − 1)²` with
/// `φ = u^p n̄(u/θ)/(1 + u)²`, the finite part over `[0, 2]` is the regular
/// integral of `[φ − φ(1) − φ′(1)(u − 1)]/(u − 1)²` minus `2φ(1)`.
pub fn narrow_resonance_parts(spec: &MomentSpec) -> Result<NarrowResonance> {
    if spec.g > 1e-3 {
        return Err(domain(
            "g",
            spec.g,
            "narrow-resonance estimate requires g <= 1e-3",
        ));
    }
    let p = spec.p as i32;
    let theta = spec.theta;
    let pf = p as f64;
    let weight = |u: f64| u.powi(p) * bose(u / theta) / ((1.0 + u) * (1.0 + u));

    // derivatives of f(u) = u^p N(u/θ) at u = 1, N′ = −N(1+N), N″ = N(1+N)(1+2N)
    let n = bose(1.0 / theta);
    let n1 = -n * (1.0 + n);
    let n2 = n * (1.0 + n) * (1.0 + 2.0 * n);
    let f0 = n;
    let f1 = pf * n + n1 / theta;
    let f2 = pf * (pf - 1.0) * n + 2.0 * pf * n1 / theta + n2 / (theta * theta);
    // s(u) = (1 + u)⁻²: s(1) = 1/4, s′(1) = −1/4, s″(1) = 3/8
    let phi0 = f0 / 4.0;
    let phi1 = f1 / 4.0 - f0 / 4.0;
    let phi2 = f2 / 4.0 - f1 / 2.0 + 3.0 * f0 / 8.0;

    let subtracted = |u: f64| {
        let t = u - 1.0;
        if t.abs() < 1e-4 {
            0.5 * phi2
        } else {
            (weight(u) - phi0 - phi1 * t) / (t * t)
        }
    };
    let integrator = AdaptiveIntegrator::new(1e-10)?.with_abs_tol(1e-11 * phi0.abs());
    let near = integrator.integrate(subtracted, 0.0, 2.0, &[0.5, 1.0, 1.5])?;
    let upper = thermal_cutoff(theta);
    let mut far_knots = Vec::new();
    let mut k = 4.0;
    while k < upper {
        far_knots.push(k);
        k *= 2.0;
    }
    let far = integrator.integrate(
        |u| weight(u) / ((u - 1.0) * (u - 1.0)),
        2.0,
        upper,
        &far_knots,
    )?;

    Ok(NarrowResonance {
        pole: PI / (2.0 * spec.g) * n,
        background: near.value - 2.0 * phi0 + far.value,
    })
}

pub fn narrow_resonance_estimate(spec: &MomentSpec) -> Result<f64> {
    narrow_resonance_parts(spec).map(|parts| parts.total())
}
