//! Globally adaptive Gauss–Kronrod (7/15) integration with caller-supplied
//! breakpoints.

#![allow(clippy::excessive_precision)] // tabulated QUADPACK digits

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Kronrod abscissae on [-1, 1] (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const DEFAULT_MAX_EVALUATIONS: usize = 1_000_000;
pub const MIN_REL_TOL: f64 = 1e-14;
pub const MAX_REL_TOL: f64 = 1e-2;

/// Integral value with its error estimate and work counters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
    pub evaluations: usize,
    /// False when subdivision stalled at roundoff before the tolerance was met.
    pub converged: bool,
}

impl QuadratureResult {
    /// Sum of independently integrated pieces, taken in the order given.
    pub fn sum<I: IntoIterator<Item = QuadratureResult>>(parts: I) -> QuadratureResult {
        parts.into_iter().fold(
            QuadratureResult {
                value: 0.0,
                error_estimate: 0.0,
                panels: 0,
                evaluations: 0,
                converged: true,
            },
            |acc, p| QuadratureResult {
                value: acc.value + p.value,
                error_estimate: acc.error_estimate + p.error_estimate,
                panels: acc.panels + p.panels,
                evaluations: acc.evaluations + p.evaluations,
                converged: acc.converged && p.converged,
            },
        )
    }

    pub fn scaled(self, factor: f64) -> QuadratureResult {
        QuadratureResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }

    pub fn relative_error(&self) -> f64 {
        self.error_estimate / self.value.abs()
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    mass: f64,
}

/// One G7/K15 application: (kronrod value, error estimate, ∫|f|).
fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err, resabs)
}

/// Fixed 15-point Kronrod rule on [a, b].
pub(crate) fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = WGK[7] * f(center);
    for j in 0..7 {
        let dx = half * XGK[j];
        sum += WGK[j] * (f(center - dx) + f(center + dx));
    }
    sum * half
}

#[derive(PartialEq)]
struct ByError {
    error: f64,
    index: usize,
}

impl Eq for ByError {}

impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByError {
    // Largest error first; ties go to the lower index.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Adaptive integrator configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveIntegrator {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Tolerance relative to ∫|f|, for integrands whose value cancels.
    pub mass_tol: f64,
    pub max_evaluations: usize,
}

impl AdaptiveIntegrator {
    pub fn new(rel_tol: f64) -> Result<Self> {
        if !(MIN_REL_TOL..=MAX_REL_TOL).contains(&rel_tol) {
            return Err(domain("rel_tol", rel_tol, "must lie in [1e-14, 1e-2]"));
        }
        Ok(AdaptiveIntegrator {
            rel_tol,
            abs_tol: 0.0,
            mass_tol: 0.0,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        })
    }

    pub fn with_mass_tol(mut self, mass_tol: f64) -> Self {
        self.mass_tol = mass_tol.max(0.0);
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol.max(0.0);
        self
    }

    pub fn with_budget(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    /// Integrate `f` over `[a, b]`, seeding the panel set at `knots`
    /// (strictly increasing, strictly inside `(a, b)`).
    pub fn integrate<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        knots: &[f64],
    ) -> Result<QuadratureResult> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(domain(
                "b",
                b,
                "interval must satisfy a < b with finite ends",
            ));
        }
        let mut edges = Vec::with_capacity(knots.len() + 2);
        edges.push(a);
        for &k in knots {
            if !(k > *edges.last().unwrap() && k < b) {
                return Err(domain(
                    "forced_knots",
                    k,
                    "knots must be strictly increasing and inside (a, b)",
                ));
            }
            edges.push(k);
        }
        edges.push(b);

        let mut panels = Vec::with_capacity(64);
        let mut heap = BinaryHeap::new();
        let mut evaluations = 0usize;
        let mut total = 0.0;
        let mut total_err = 0.0;
        let mut total_mass = 0.0;
        for w in edges.windows(2) {
            let (value, error, mass) = kronrod_panel(&f, w[0], w[1]);
            evaluations += 15;
            total += value;
            total_err += error;
            total_mass += mass;
            heap.push(ByError {
                error,
                index: panels.len(),
            });
            panels.push(Panel {
                a: w[0],
                b: w[1],
                value,
                error,
                mass,
            });
        }

        let mut iteration = 0usize;
        let converged = loop {
            if !total.is_finite() || !total_err.is_finite() {
                return Err(Error::NonFinite);
            }
            let tol = self
                .abs_tol
                .max(self.rel_tol * total.abs())
                .max(self.mass_tol * total_mass);
            if total_err <= tol {
                break true;
            }
            if evaluations + 30 > self.max_evaluations {
                return Err(Error::Budget {
                    budget: self.max_evaluations,
                    partial: finish(&mut panels, evaluations, false),
                });
            }
            let Some(worst) = heap.pop() else {
                // every remaining panel is at roundoff width
                break false;
            };
            let p = panels[worst.index];
            let mid = 0.5 * (p.a + p.b);
            if !(mid > p.a && mid < p.b) || (p.b - p.a) <= 64.0 * f64::EPSILON * mid.abs() {
                continue;
            }
            let (lv, le, lm) = kronrod_panel(&f, p.a, mid);
            let (rv, re, rm) = kronrod_panel(&f, mid, p.b);
            evaluations += 30;
            total += lv + rv - p.value;
            total_err += le + re - p.error;
            total_mass += lm + rm - p.mass;
            panels[worst.index] = Panel {
                a: p.a,
                b: mid,
                value: lv,
                error: le,
                mass: lm,
            };
            heap.push(ByError {
                error: le,
                index: worst.index,
            });
            heap.push(ByError {
                error: re,
                index: panels.len(),
            });
            panels.push(Panel {
                a: mid,
                b: p.b,
                value: rv,
                error: re,
                mass: rm,
            });
            iteration += 1;
            if iteration.is_multiple_of(64) {
                total = panels.iter().map(|p| p.value).sum();
                total_err = panels.iter().map(|p| p.error).sum();
                total_mass = panels.iter().map(|p| p.mass).sum();
            }
        };
        let result = finish(&mut panels, evaluations, converged);
        if !result.value.is_finite() || !result.error_estimate.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(result)
    }
}

/// Accumulate in panel-position order.
fn finish(panels: &mut [Panel], evaluations: usize, converged: bool) -> QuadratureResult {
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = 0.0;
    let mut error_estimate = 0.0;
    for p in panels.iter() {
        value += p.value;
        error_estimate += p.error;
    }
    QuadratureResult {
        value,
        error_estimate,
        panels: panels.len(),
        evaluations,
        converged,
    }
}

/// Adaptive integration with the default evaluation budget.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    forced_knots: &[f64],
) -> Result<QuadratureResult> {
    AdaptiveIntegrator::new(rel_tol)?.integrate(f, a, b, forced_knots)
}
