//! Brute-force trapezoid oracle for the moment integrals.

use super::moments::{thermal_cutoff, MomentSpec};
use crate::error::{domain, Result};

pub const MIN_ORACLE_POINTS: usize = 100_000;

fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..intervals {
        sum += f(a + h * i as f64);
    }
    sum * h
}

/// Half-width in u of the φ-uniform zone around the resonance.
const ZOOM_HALF_WIDTH: f64 = 0.5;

fn graded_trapezoid(spec: &MomentSpec, points: usize) -> f64 {
    let g = spec.g;
    let upper = thermal_cutoff(spec.theta);
    // t = (g/2) tan φ reaches ±1/2 at the zone edges
    let edge = (2.0 * ZOOM_HALF_WIDTH / g).atan();

    let n_left = points / 10;
    let n_inner = points * 6 / 10;
    let n_right = points - n_left - n_inner;

    let left = trapezoid(|u| spec.integrand(u), 0.0, 1.0 - ZOOM_HALF_WIDTH, n_left);
    let inner = trapezoid(
        |phi: f64| {
            let t = phi.tan();
            spec.integrand_offset(0.5 * g * t) * 0.5 * g * (1.0 + t * t)
        },
        -edge,
        edge,
        n_inner,
    );
    let right = trapezoid(|u| spec.integrand(u), 1.0 + ZOOM_HALF_WIDTH, upper, n_right);
    left + inner + right
}

/// Oracle value together with `|full − half|`, the change from halving the mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    pub refinement_delta: f64,
}

fn check(spec: &MomentSpec, points: usize) -> Result<()> {
    if points < MIN_ORACLE_POINTS {
        return Err(domain(
            "points",
            points as f64,
            "oracle needs at least 1e5 points",
        ));
    }
    if spec.g < 1e-4 {
        return Err(domain("g", spec.g, "brute-force oracle needs g >= 1e-4"));
    }
    Ok(())
}

/// Composite trapezoid on a mesh that is uniform in u away from the
/// resonance and uniform in φ (u = 1 + (g/2) tan φ) inside `1 ± 1/2`.
pub fn riemann_oracle(spec: &MomentSpec, points: usize) -> Result<f64> {
    check(spec, points)?;
    Ok(graded_trapezoid(spec, points))
}

pub fn riemann_oracle_with_refinement(spec: &MomentSpec, points: usize) -> Result<OracleValue> {
    check(spec, points)?;
    let full = graded_trapezoid(spec, points);
    let half = graded_trapezoid(spec, points / 2);
    Ok(OracleValue {
        value: full,
        refinement_delta: (full - half).abs(),
    })
}
