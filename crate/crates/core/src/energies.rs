//! Thermal energy pipeline in units of ħω₀: the perturbative split U0/U1/U2,
//! the oscillator energy and its shift, the free-energy shift by
//! thermodynamic integration, and the full-index consistency diagnostics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{electron_charge_sq_over_mass, Constants};
use crate::error::{domain, Result};
use crate::model::{
    bose, check_density, check_linewidth, mode_weight_excess_offset, particle_count,
};
use crate::quadrature::{
    integrate_resonant, kronrod15, lorentz_denominator, lorentz_denominator_offset,
    planck_lorentzian_moment, thermal_cutoff, AdaptiveIntegrator, MomentSpec, QuadratureResult,
    RESONANCE_WINDOW,
};

pub const DEFAULT_REL_TOL: f64 = 1e-10;
/// Relative step of the central difference in the thermodynamic residual.
pub const THERMO_STEP: f64 = 1e-4;
/// The free-energy integral starts at θ/10³.
pub const FREE_ENERGY_SPAN: f64 = 1e3;
const FREE_ENERGY_PANELS_PER_DECADE: usize = 4;
/// Largest θ′ at which the ΔE ∝ θ′⁴ closure is trusted.
pub const QUARTIC_REGIME: f64 = 0.02;

/// Reference that ΔE is measured from. Recorded in sweep metadata.
pub const DELTA_E_REFERENCE: &str = "E - 3*nbar(1/theta)";

/// One temperature's worth of energies, all in units of ħω₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub theta: f64,
    /// U0/(ħω₀Ṽ)
    pub u0_per_vtilde: f64,
    pub u1: f64,
    pub u2: f64,
    /// E = u1 + u2
    pub e_osc: f64,
    pub delta_e: f64,
    pub delta_e_asym: f64,
    pub delta_f: f64,
    pub thermo_residual: f64,
}

/// ΔF together with the bound on the dropped `[0, θ_min]` segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergy {
    pub value: f64,
    pub truncation_bound: f64,
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(domain("theta", theta, "must be finite and >= 0"));
    }
    Ok(())
}

/// Energies of one oscillator with reduced linewidth `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftModel {
    g: f64,
    rel_tol: f64,
}

impl ShiftModel {
    pub fn new(g: f64, rel_tol: f64) -> Result<Self> {
        check_linewidth(g)?;
        AdaptiveIntegrator::new(rel_tol)?;
        Ok(ShiftModel { g, rel_tol })
    }

    pub fn with_default_tolerance(g: f64) -> Result<Self> {
        Self::new(g, DEFAULT_REL_TOL)
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    fn moment(&self, p: u32, theta: f64) -> Result<QuadratureResult> {
        planck_lorentzian_moment(&MomentSpec::new(p, theta, self.g)?, self.rel_tol)
    }

    /// U1 = (9g/π)·I₃(θ, g)
    pub fn u1(&self, theta: f64) -> Result<f64> {
        check_theta(theta)?;
        if theta == 0.0 {
            return Ok(0.0);
        }
        Ok(9.0 * self.g / PI * self.moment(3, theta)?.value)
    }

    /// U2 = −(3g/π)·I₅(θ, g)
    pub fn u2(&self, theta: f64) -> Result<f64> {
        check_theta(theta)?;
        if theta == 0.0 {
            return Ok(0.0);
        }
        Ok(-3.0 * self.g / PI * self.moment(5, theta)?.value)
    }

    pub fn oscillator_energy(&self, theta: f64) -> Result<f64> {
        Ok(self.u1(theta)? + self.u2(theta)?)
    }

    /// ΔE = E − 3n̄(1/θ).
    ///
    /// Evaluated without forming E: with `h(u) = (3u³ − u⁵) n̄(u/θ)`,
    /// `E = (3g/π)∫h/D` and `∫₀^∞ du/D = π/(2g)` exactly, so
    /// `ΔE = (3g/π)∫₀^∞ [h(u) − h(1)]/D du` since `h(1) = 2n̄(1/θ)`.
    pub fn delta_e(&self, theta: f64) -> Result<f64> {
        check_theta(theta)?;
        if theta == 0.0 {
            return Ok(0.0);
        }
        let g = self.g;
        let n1 = bose(1.0 / theta);
        let h1 = 2.0 * n1;
        // h(1+t) − h(1) = [P(1+t) − 2] n̄ + 2[n̄((1+t)/θ) − n̄(1/θ)] with
        // P(u) = 3u³ − u⁵ and n̄(x) − n̄(x₀) = −expm1(x − x₀) n̄(x)(1 + n̄(x₀))
        let shifted = |t: f64| {
            let u = 1.0 + t;
            if t.abs() > 0.5 {
                // far from resonance the direct difference loses nothing
                let h = if u == 0.0 {
                    0.0
                } else {
                    u * u * u * (3.0 - u * u) * bose(u / theta)
                };
                return (h - h1) / lorentz_denominator_offset(t, g);
            }
            let n = bose(u / theta);
            let poly = t * (4.0 - t * (1.0 + t * (7.0 + t * (5.0 + t))));
            let dn = if (t / theta).abs() < 1.0 {
                -(t / theta).exp_m1() * n * (1.0 + n1)
            } else {
                n - n1
            };
            (poly * n + 2.0 * dn) / lorentz_denominator_offset(t, g)
        };
        let integrator = AdaptiveIntegrator::new(self.rel_tol)?.with_mass_tol(self.rel_tol);
        let upper = thermal_cutoff(theta);
        let body = integrate_resonant(&integrator, shifted, g, upper)?;
        // ∫_X^∞ du/D = ∫₀^{1/X} v² dv / D(v)
        let tail = integrator.with_abs_tol(0.0).integrate(
            |v| v * v / lorentz_denominator(v, g),
            0.0,
            1.0 / upper,
            &[],
        )?;
        Ok(3.0 * g / PI * (body.value - h1 * tail.value))
    }

    /// ΔF(θ) = −θ ∫₀^θ ΔE(θ′)/θ′² dθ′.
    ///
    /// The integral runs over `[θ_min, θ]` on a fixed log-spaced Kronrod
    /// rule, `θ_min = min(θ/10³, 0.02)`; ΔE ∝ θ′⁴ below that supplies the
    /// dropped segment `≈ ΔE(θ_min)/(3θ_min)`.
    pub fn free_energy_shift(&self, theta: f64) -> Result<FreeEnergy> {
        check_theta(theta)?;
        if theta == 0.0 {
            return Ok(FreeEnergy {
                value: 0.0,
                truncation_bound: 0.0,
            });
        }
        let theta_min = (theta / FREE_ENERGY_SPAN).min(QUARTIC_REGIME);
        let decades = (theta / theta_min).log10();
        let panels = (decades * FREE_ENERGY_PANELS_PER_DECADE as f64 - 1e-9).ceil() as usize;
        let s0 = theta_min.ln();
        let width = (theta.ln() - s0) / panels as f64;

        // in s = ln θ′ the integrand is ΔE(θ′)/θ′
        let failure = std::cell::RefCell::new(None);
        let integrand = |s: f64| {
            let t = s.exp();
            match self.delta_e(t) {
                Ok(v) => v / t,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let mut body = 0.0;
        for k in 0..panels {
            let a = s0 + width * k as f64;
            let b = if k + 1 == panels {
                theta.ln()
            } else {
                a + width
            };
            body += kronrod15(&integrand, a, b);
        }
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let dropped = self.delta_e(theta_min)? / (3.0 * theta_min);
        Ok(FreeEnergy {
            value: -theta * (body + dropped),
            truncation_bound: (theta * dropped).abs(),
        })
    }

    /// ΔE − [ΔF − θ dΔF/dθ] with a central difference at relative step 10⁻⁴.
    pub fn thermo_residual(&self, theta: f64) -> Result<f64> {
        let delta_e = self.delta_e(theta)?;
        let delta_f = self.free_energy_shift(theta)?.value;
        self.residual_from(theta, delta_e, delta_f, THERMO_STEP)
    }

    /// Residual with an explicit stencil step.
    pub fn thermo_residual_with_step(&self, theta: f64, step: f64) -> Result<f64> {
        let delta_e = self.delta_e(theta)?;
        let delta_f = self.free_energy_shift(theta)?.value;
        self.residual_from(theta, delta_e, delta_f, step)
    }

    fn residual_from(&self, theta: f64, delta_e: f64, delta_f: f64, step: f64) -> Result<f64> {
        if theta == 0.0 {
            return Ok(delta_e - delta_f);
        }
        let up = self.free_energy_shift(theta * (1.0 + step))?.value;
        let down = self.free_energy_shift(theta * (1.0 - step))?.value;
        let slope = (up - down) / (2.0 * theta * step);
        Ok(delta_e - (delta_f - theta * slope))
    }

    pub fn breakdown(&self, theta: f64) -> Result<EnergyBreakdown> {
        check_theta(theta)?;
        let u0_per_vtilde = u0_per_volume(theta)?;
        let u1 = self.u1(theta)?;
        let u2 = self.u2(theta)?;
        let delta_e = self.delta_e(theta)?;
        let delta_f = self.free_energy_shift(theta)?.value;
        let thermo_residual = self.residual_from(theta, delta_e, delta_f, THERMO_STEP)?;
        Ok(EnergyBreakdown {
            theta,
            u0_per_vtilde,
            u1,
            u2,
            e_osc: u1 + u2,
            delta_e,
            delta_e_asym: delta_e_asymptotic(theta, self.g),
            delta_f,
            thermo_residual,
        })
    }
}

/// π²θ⁴/15
pub fn u0_closed_form(theta: f64) -> f64 {
    PI * PI * theta.powi(4) / 15.0
}

/// U0/(ħω₀Ṽ) = (1/π²)∫₀^∞ u³ n̄(u/θ) du by quadrature, in x = u/θ.
pub fn u0_per_volume(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if theta == 0.0 {
        return Ok(0.0);
    }
    let upper = thermal_cutoff(theta) / theta;
    let knots: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
        .into_iter()
        .filter(|&k| k < upper)
        .collect();
    let r =
        AdaptiveIntegrator::new(1e-13)?.integrate(|x| x * x * x * bose(x), 0.0, upper, &knots)?;
    Ok(theta.powi(4) * r.value / (PI * PI))
}

/// −(π/2)gθ²
pub fn delta_e_asymptotic(theta: f64, g: f64) -> f64 {
    -0.5 * PI * g * theta * theta
}

pub fn u1(theta: f64, g: f64) -> Result<f64> {
    ShiftModel::with_default_tolerance(g)?.u1(theta)
}

pub fn u2(theta: f64, g: f64) -> Result<f64> {
    ShiftModel::with_default_tolerance(g)?.u2(theta)
}

pub fn oscillator_energy(theta: f64, g: f64) -> Result<f64> {
    ShiftModel::with_default_tolerance(g)?.oscillator_energy(theta)
}

pub fn delta_e(theta: f64, g: f64) -> Result<f64> {
    ShiftModel::with_default_tolerance(g)?.delta_e(theta)
}

pub fn free_energy_shift(theta: f64, g: f64) -> Result<FreeEnergy> {
    ShiftModel::with_default_tolerance(g)?.free_energy_shift(theta)
}

pub fn thermo_residual(theta: f64, g: f64) -> Result<f64> {
    ShiftModel::with_default_tolerance(g)?.thermo_residual(theta)
}

/// Thermal part of the full-index mode-counting energy per particle,
/// compared against the perturbative oscillator energy u1 + u2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullIndexComparison {
    /// (full − perturbative)/perturbative
    pub deviation: f64,
    pub full_per_particle: f64,
    pub perturbative: f64,
    pub particle_count: f64,
    /// Λ < 40θ: the cutoff removes part of the thermal support.
    pub cutoff_truncates: bool,
}

pub fn full_index_comparison(
    nu: f64,
    g: f64,
    v_tilde: f64,
    lambda_cut: f64,
    theta: f64,
) -> Result<FullIndexComparison> {
    if !(nu > 0.0 && nu <= 1e-4) {
        return Err(domain("nu", nu, "comparison needs 0 < nu <= 1e-4"));
    }
    check_linewidth(g)?;
    if !(theta > 0.0) {
        return Err(domain("theta", theta, "must be > 0"));
    }
    if !(v_tilde > 0.0) {
        return Err(domain("v_tilde", v_tilde, "must be > 0"));
    }
    let upper = thermal_cutoff(theta).min(lambda_cut);
    if !(upper > 1.0 + 2.0 * RESONANCE_WINDOW * g) {
        return Err(domain(
            "lambda_cut",
            lambda_cut,
            "cutoff must lie above the resonance window",
        ));
    }
    let model = ShiftModel::with_default_tolerance(g)?;
    let perturbative = model.oscillator_energy(theta)?;

    let count = particle_count(nu, g, v_tilde);
    // (Ṽ/π²)·∫/(NV) = (6g/(πν))·∫
    let per_particle = 6.0 * g / (PI * nu);
    let integrator = AdaptiveIntegrator::new(DEFAULT_REL_TOL)?
        .with_abs_tol(1e-4 * DEFAULT_REL_TOL * perturbative.abs() / per_particle);
    let thermal = integrate_resonant(
        &integrator,
        |t| mode_weight_excess_offset(t, g, nu) * bose((1.0 + t) / theta),
        g,
        upper,
    )?;
    let full_per_particle = per_particle * thermal.value;
    Ok(FullIndexComparison {
        deviation: (full_per_particle - perturbative) / perturbative,
        full_per_particle,
        perturbative,
        particle_count: count,
        cutoff_truncates: lambda_cut < 40.0 * theta,
    })
}

/// Relative deviation of the full-index result from u1 + u2.
pub fn full_vs_perturbative(
    nu: f64,
    g: f64,
    v_tilde: f64,
    lambda_cut: f64,
    theta: f64,
) -> Result<f64> {
    full_index_comparison(nu, g, v_tilde, lambda_cut, theta).map(|c| c.deviation)
}

/// Zero-point difference per particle. Diverges like Λ²; carried with its
/// cutoff so it is never read as a physical shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroPointDiagnostic {
    pub value: f64,
    pub lambda_cut: f64,
}

/// (Ṽ/π²)∫₀^Λ [w(u) − u³]/2 du divided by NV.
pub fn zero_point_difference(
    nu: f64,
    g: f64,
    v_tilde: f64,
    lambda_cut: f64,
) -> Result<ZeroPointDiagnostic> {
    check_linewidth(g)?;
    check_density(nu)?;
    if !(lambda_cut > 1.0) {
        return Err(domain("lambda_cut", lambda_cut, "must be > 1"));
    }
    if !(v_tilde > 0.0) {
        return Err(domain("v_tilde", v_tilde, "must be > 0"));
    }
    if nu == 0.0 {
        return Ok(ZeroPointDiagnostic {
            value: 0.0,
            lambda_cut,
        });
    }
    let integrator = AdaptiveIntegrator::new(DEFAULT_REL_TOL)?.with_abs_tol(1e-14 * nu);
    let f = |t: f64| mode_weight_excess_offset(t, g, nu);
    let r = if lambda_cut > 1.0 + 2.0 * RESONANCE_WINDOW * g {
        integrate_resonant(&integrator, f, g, lambda_cut)?
    } else {
        integrator.integrate(f, -1.0, lambda_cut - 1.0, &[-RESONANCE_WINDOW * g, 0.0])?
    };
    Ok(ZeroPointDiagnostic {
        value: 3.0 * g / (PI * nu) * r.value,
        lambda_cut,
    })
}

/// δν = Δω/2π in Hz with Δω = πe²(kT)²/(3ħ²mc³), CODATA electron values.
pub fn rydberg_frequency_shift(temperature: f64) -> f64 {
    rydberg_frequency_shift_with(
        temperature,
        electron_charge_sq_over_mass(),
        &Constants::default(),
    )
}

pub fn rydberg_frequency_shift_with(temperature: f64, charge_sq_over_m: f64, c: &Constants) -> f64 {
    let kt = c.boltzmann * temperature;
    let delta_omega =
        PI * charge_sq_over_m * kt * kt / (3.0 * c.hbar * c.hbar * c.speed_of_light.powi(3));
    delta_omega / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stefan_boltzmann() {
        assert_relative_eq!(u0_closed_form(1.0), 0.657_973_6, max_relative = 1e-7);
        assert_relative_eq!(
            u0_closed_form(2.0),
            16.0 * PI * PI / 15.0,
            max_relative = 1e-15
        );
        for &t in &[0.1, 0.5, 1.0, 2.0, 30.0] {
            assert_relative_eq!(
                u0_per_volume(t).unwrap(),
                u0_closed_form(t),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn zero_temperature_limits() {
        let m = ShiftModel::with_default_tolerance(1e-4).unwrap();
        assert_eq!(m.oscillator_energy(0.0).unwrap(), 0.0);
        assert_eq!(m.free_energy_shift(0.0).unwrap().value, 0.0);
        assert_eq!(delta_e_asymptotic(0.0, 1e-4), 0.0);
        assert!(m.u1(-1.0).is_err());
        // θ = 0.02: every thermal integrand is crushed by e^{-1/θ}
        assert!(m.oscillator_energy(0.02).unwrap().abs() < 1e-7);
    }

    #[test]
    fn asymptotic_shift() {
        assert_relative_eq!(
            delta_e_asymptotic(100.0, 1e-4),
            -std::f64::consts::FRAC_PI_2,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            delta_e_asymptotic(200.0, 1e-4),
            4.0 * delta_e_asymptotic(100.0, 1e-4),
            max_relative = 1e-15
        );
    }

    #[test]
    fn u1_follows_the_pole() {
        // (9/2)/(e^{0.1} − 1) ≈ 42.79
        let v = u1(10.0, 1e-6).unwrap();
        assert_relative_eq!(v, 4.5 / 0.1f64.exp_m1(), max_relative = 1e-4);
        assert_relative_eq!(v, 42.79, max_relative = 1e-3);
        let mut prev = 0.0;
        for &t in &[1.0, 10.0, 100.0, 1000.0] {
            let v = u1(t, 1e-6).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn u2_is_negative_with_pole_limit() {
        for &t in &[0.5, 2.0, 50.0] {
            assert!(u2(t, 1e-5).unwrap() < 0.0);
        }
        let t = 0.5;
        let pole = -1.5 * bose(1.0 / t);
        assert_relative_eq!(u2(t, 1e-7).unwrap(), pole, max_relative = 1e-4);
    }

    #[test]
    fn delta_e_matches_direct_subtraction() {
        let m = ShiftModel::new(1e-4, 1e-12).unwrap();
        for &t in &[0.3, 1.0, 10.0, 100.0] {
            let direct = m.oscillator_energy(t).unwrap() - 3.0 * bose(1.0 / t);
            let stable = m.delta_e(t).unwrap();
            // the direct route loses digits to the 3n̄ cancellation
            let slack = 1e-10 * 3.0 * bose(1.0 / t);
            assert!(
                (direct - stable).abs() <= slack + 1e-6 * stable.abs(),
                "θ = {t}"
            );
        }
    }

    #[test]
    fn delta_e_near_asymptote() {
        let v = delta_e(100.0, 1e-4).unwrap();
        assert_relative_eq!(v, -0.5 * PI, max_relative = 0.02);
    }

    #[test]
    fn free_energy_of_pure_power_law() {
        // −θ∫(−aθ′²)/θ′² dθ′ = aθ²: the log-grid rule reproduces it exactly
        // once the dropped segment is accounted for at the matching power.
        let a = 0.37;
        let theta: f64 = 50.0;
        let theta_min = theta / FREE_ENERGY_SPAN;
        let panels = 12;
        let s0 = theta_min.ln();
        let width = (theta.ln() - s0) / panels as f64;
        let f = |s: f64| -a * s.exp();
        let body: f64 = (0..panels)
            .map(|k| kronrod15(&f, s0 + width * k as f64, s0 + width * (k + 1) as f64))
            .sum();
        let full = -theta * (body - a * theta_min);
        assert_relative_eq!(full, a * theta * theta, max_relative = 1e-13);
    }

    #[test]
    fn free_energy_changes_sign_against_energy() {
        let m = ShiftModel::with_default_tolerance(1e-5).unwrap();
        let f = m.free_energy_shift(100.0).unwrap();
        assert!(f.value > 0.0);
        assert!(f.truncation_bound < 1e-4 * f.value);
        assert!(m.delta_e(100.0).unwrap() < 0.0);
    }

    #[test]
    fn residual_shrinks_with_step() {
        let m = ShiftModel::new(1e-5, 1e-12).unwrap();
        let coarse = m.thermo_residual_with_step(50.0, 1e-2).unwrap().abs();
        let fine = m.thermo_residual_with_step(50.0, 5e-3).unwrap().abs();
        assert!(fine < coarse);
    }

    #[test]
    fn rydberg_shift() {
        let v300 = rydberg_frequency_shift(300.0);
        assert!((2.28e3..=2.52e3).contains(&v300), "{v300}");
        assert_relative_eq!(
            rydberg_frequency_shift(600.0),
            4.0 * v300,
            max_relative = 1e-14
        );
        assert_eq!(rydberg_frequency_shift(0.0), 0.0);
    }

    #[test]
    fn zero_point_vacuum_and_growth() {
        assert_eq!(
            zero_point_difference(0.0, 1e-4, 1.0, 50.0).unwrap().value,
            0.0
        );
        let a = zero_point_difference(1e-6, 1e-4, 1.0, 10.0).unwrap();
        let b = zero_point_difference(1e-6, 1e-4, 1.0, 20.0).unwrap();
        assert!(a.value < 0.0 && b.value < 0.0);
        // large-u tail of the O(ν) expansion: w − u³ ≈ −νu/2  ⇒  ∝ Λ²
        let ratio = b.value / a.value;
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
        assert_eq!(b.lambda_cut, 20.0);
    }

    #[test]
    fn breakdown_is_self_consistent() {
        let m = ShiftModel::with_default_tolerance(1e-5).unwrap();
        let b = m.breakdown(20.0).unwrap();
        assert_eq!(b.e_osc, b.u1 + b.u2);
        assert!(b.u1 > 0.0 && b.u2 < 0.0);
        assert_eq!(b.delta_e_asym, delta_e_asymptotic(20.0, 1e-5));
    }
}
