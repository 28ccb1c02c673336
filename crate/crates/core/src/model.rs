//! Physical parameterization, dimensionless reduction, and the Lorentz
//! oscillator response functions.
//!
//! Everything downstream works in reduced variables: frequencies in units of
//! the resonance ω₀ (`u = ω/ω₀`), energies in units of ħω₀.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{electron_charge_sq_over_mass, Constants};
use crate::error::{domain, Result};

/// Upper bound on both the reduced linewidth and the reduced density.
pub const WEAK_COUPLING_BOUND: f64 = 1e-2;

/// Dimensional input in Gaussian units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalInput {
    /// Kelvin.
    pub temperature: f64,
    /// Resonance angular frequency, rad/s.
    pub omega0: f64,
    /// e²/m, cm³/s².
    pub charge_sq_over_m: f64,
    pub constants: Constants,
}

impl PhysicalInput {
    /// Electron oscillator with CODATA constants.
    pub fn electron(temperature: f64, omega0: f64) -> Result<Self> {
        Self::new(
            temperature,
            omega0,
            electron_charge_sq_over_mass(),
            Constants::default(),
        )
    }

    pub fn new(
        temperature: f64,
        omega0: f64,
        charge_sq_over_m: f64,
        constants: Constants,
    ) -> Result<Self> {
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(domain(
                "temperature",
                temperature,
                "must be finite and >= 0",
            ));
        }
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(domain("omega0", omega0, "must be finite and > 0"));
        }
        if !(charge_sq_over_m > 0.0) || !charge_sq_over_m.is_finite() {
            return Err(domain("charge_sq_over_m", charge_sq_over_m, "must be > 0"));
        }
        let input = PhysicalInput {
            temperature,
            omega0,
            charge_sq_over_m,
            constants,
        };
        let g = input.reduced_linewidth();
        if !(g < WEAK_COUPLING_BOUND) {
            return Err(domain(
                "g",
                g,
                "radiative linewidth gamma/omega0 must be below the weak-coupling bound 1e-2",
            ));
        }
        Ok(input)
    }

    /// γ = 2e²ω₀²/(3mc³), s⁻¹.
    pub fn damping_rate(&self) -> f64 {
        let c = self.constants.speed_of_light;
        2.0 * self.charge_sq_over_m * self.omega0 * self.omega0 / (3.0 * c * c * c)
    }

    /// γ/ω₀.
    pub fn reduced_linewidth(&self) -> f64 {
        self.damping_rate() / self.omega0
    }

    /// kT/(ħω₀).
    pub fn reduced_temperature(&self) -> f64 {
        self.constants.boltzmann * self.temperature / (self.constants.hbar * self.omega0)
    }
}

/// Reduced parameter set. All internal math runs on these.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    /// kT/(ħω₀)
    pub theta: f64,
    /// γ/ω₀
    pub g: f64,
    /// 4πNe²/(mω₀²)
    pub nu: f64,
    /// Ω/ω₀
    pub lambda_cut: f64,
    /// Vω₀³/c³
    pub v_tilde: f64,
}

impl DimensionlessParams {
    pub fn new(theta: f64, g: f64, nu: f64, lambda_cut: f64, v_tilde: f64) -> Result<Self> {
        if !(theta >= 0.0) || !theta.is_finite() {
            return Err(domain("theta", theta, "must be finite and >= 0"));
        }
        check_linewidth(g)?;
        check_density(nu)?;
        if !(lambda_cut > 1.0) || !lambda_cut.is_finite() {
            return Err(domain(
                "lambda_cut",
                lambda_cut,
                "cutoff must exceed the resonance (> 1)",
            ));
        }
        if !(v_tilde > 0.0) || !v_tilde.is_finite() {
            return Err(domain("v_tilde", v_tilde, "must be finite and > 0"));
        }
        Ok(DimensionlessParams {
            theta,
            g,
            nu,
            lambda_cut,
            v_tilde,
        })
    }

    /// NV = νṼ/(6πg).
    pub fn particle_count(&self) -> f64 {
        particle_count(self.nu, self.g, self.v_tilde)
    }
}

pub fn particle_count(nu: f64, g: f64, v_tilde: f64) -> f64 {
    nu * v_tilde / (6.0 * PI * g)
}

/// ν that puts exactly one particle in the reduced volume.
pub fn single_particle_density(g: f64, v_tilde: f64) -> f64 {
    6.0 * PI * g / v_tilde
}

pub(crate) fn check_linewidth(g: f64) -> Result<()> {
    if !(g > 0.0 && g < WEAK_COUPLING_BOUND) {
        return Err(domain(
            "g",
            g,
            "reduced linewidth must satisfy 0 < g < 1e-2 (weak-coupling bound)",
        ));
    }
    Ok(())
}

pub(crate) fn check_density(nu: f64) -> Result<()> {
    if !(0.0..WEAK_COUPLING_BOUND).contains(&nu) {
        return Err(domain(
            "nu",
            nu,
            "reduced density must satisfy 0 <= nu < 1e-2 (weak-coupling bound)",
        ));
    }
    Ok(())
}

/// Reduce a physical configuration. `density` in cm⁻³, `cutoff` in rad/s,
/// `volume` in cm³.
pub fn reduce(
    input: &PhysicalInput,
    density: f64,
    cutoff: f64,
    volume: f64,
) -> Result<DimensionlessParams> {
    if !(density >= 0.0) || !density.is_finite() {
        return Err(domain("density", density, "must be finite and >= 0"));
    }
    let c = input.constants.speed_of_light;
    let w0 = input.omega0;
    let nu = 4.0 * PI * density * input.charge_sq_over_m / (w0 * w0);
    let v_tilde = volume * (w0 / c).powi(3);
    DimensionlessParams::new(
        input.reduced_temperature(),
        input.reduced_linewidth(),
        nu,
        cutoff / w0,
        v_tilde,
    )
}

/// A complex dimensionless response value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexResponse {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexResponse {
    fn from(z: Complex64) -> Self {
        ComplexResponse { re: z.re, im: z.im }
    }
}

impl From<ComplexResponse> for Complex64 {
    fn from(r: ComplexResponse) -> Self {
        Complex64::new(r.re, r.im)
    }
}

#[inline]
pub(crate) fn alpha(u: f64, g: f64) -> Complex64 {
    Complex64::new((1.0 - u) * (1.0 + u), -g * u).inv()
}

/// α̃ at u = 1 + t.
#[inline]
pub(crate) fn alpha_offset(t: f64, g: f64) -> Complex64 {
    Complex64::new(-t * (2.0 + t), -g * (1.0 + t)).inv()
}

/// Reduced Lorentz polarizability α̃(u) = 1/(1 − u² − igu); the physical
/// polarizability is (e²/mω₀²)·α̃.
pub fn polarizability(u: f64, g: f64) -> ComplexResponse {
    alpha(u, g).into()
}

#[inline]
pub(crate) fn index(u: f64, g: f64, nu: f64) -> Complex64 {
    let n = (Complex64::new(1.0, 0.0) + nu * alpha(u, g)).sqrt();
    debug_assert!(
        n.re > 0.0 && n.im >= 0.0,
        "refractive index left the absorptive branch"
    );
    n
}

/// n(u) = √(1 + να̃(u)) on the branch re > 0, im ≥ 0.
pub fn refractive_index(u: f64, g: f64, nu: f64) -> ComplexResponse {
    index(u, g, nu).into()
}

/// `w(u) − u³` where `w(u) = u (n_R u)² d(n_R u)/du` is the mode-counting
/// weight. Written in terms of `n_R − 1` so small densities keep their
/// digits.
pub fn mode_weight_excess(u: f64, g: f64, nu: f64) -> f64 {
    excess_from(u, alpha(u, g), g, nu)
}

/// [`mode_weight_excess`] at u = 1 + t.
#[inline]
pub(crate) fn mode_weight_excess_offset(t: f64, g: f64, nu: f64) -> f64 {
    excess_from(1.0 + t, alpha_offset(t, g), g, nu)
}

#[inline]
fn excess_from(u: f64, a: Complex64, g: f64, nu: f64) -> f64 {
    if nu == 0.0 {
        return 0.0;
    }
    let n = (Complex64::new(1.0, 0.0) + nu * a).sqrt();
    // n − 1 = να̃/(n + 1)
    let delta = (nu * a / (n + 1.0)).re;
    // dn/du = ν α̃′/(2n), α̃′ = (2u + ig) α̃²
    let ddelta = (nu * Complex64::new(2.0 * u, g) * a * a / (2.0 * n)).re;
    let growth = delta * (3.0 + delta * (3.0 + delta));
    u * u * u * (growth + (1.0 + delta) * (1.0 + delta) * u * ddelta)
}

/// Mode-counting weight `u (n_R u)² d(n_R u)/du`, derivative taken analytically.
pub fn mode_weight(u: f64, g: f64, nu: f64) -> f64 {
    u * u * u + mode_weight_excess(u, g, nu)
}

/// 1/(eˣ − 1) without the domain check.
#[inline]
pub(crate) fn bose(x: f64) -> f64 {
    if x > 40.0 {
        let t = (-x).exp();
        t * (1.0 + t)
    } else {
        1.0 / x.exp_m1()
    }
}

/// Bose occupation 1/(eˣ − 1), x = ħω/kT.
pub fn planck_occupation(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("x", x, "photon energy ratio must be > 0"));
    }
    Ok(bose(x))
}

/// ½ + 1/(eˣ − 1).
pub fn planck_occupation_with_zero_point(x: f64) -> Result<f64> {
    planck_occupation(x).map(|n| n + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn reduce_electron_at_room_temperature() {
        let input = PhysicalInput::electron(300.0, 1e15).unwrap();
        let p = reduce(&input, 0.0, 1e17, 1.0).unwrap();
        // (2/3) r_e ω₀ / c with r_e = 2.8179403262e-13 cm
        let g_expected = 2.0 / 3.0 * 2.817_940_326_2e-13 * 1e15 / 2.997_924_58e10;
        assert_relative_eq!(p.g, g_expected, max_relative = 1e-9);
        assert_relative_eq!(p.g, 6.266e-9, max_relative = 1e-3);
        // kT / ħω₀ = 4.1419e-14 erg / 1.05457e-12 erg
        assert_relative_eq!(p.theta, 3.9275e-2, max_relative = 1e-3);
        assert_eq!(p.nu, 0.0);
        assert_relative_eq!(p.lambda_cut, 100.0);
    }

    #[test]
    fn zero_temperature_reduces_to_zero_theta() {
        let input = PhysicalInput::electron(0.0, 1e15).unwrap();
        assert_eq!(input.reduced_temperature(), 0.0);
    }

    #[test]
    fn strong_coupling_is_rejected() {
        // g = (2/3) r_e ω₀/c reaches 1e-2 near ω₀ ≈ 1.6e21 rad/s
        let err = PhysicalInput::electron(300.0, 1e22).unwrap_err();
        assert!(err.to_string().contains("weak-coupling"));
        assert!(DimensionlessParams::new(1.0, 0.1, 0.0, 10.0, 1.0).is_err());
        assert!(DimensionlessParams::new(1.0, 1e-4, 0.02, 10.0, 1.0).is_err());
        assert!(DimensionlessParams::new(1.0, 1e-4, 0.0, 1.0, 1.0).is_err());
        assert!(DimensionlessParams::new(-1.0, 1e-4, 0.0, 10.0, 1.0).is_err());
    }

    #[test]
    fn particle_count_identity() {
        let input = PhysicalInput::electron(300.0, 1e15).unwrap();
        let density = 1e10;
        let volume = 2.5;
        let p = reduce(&input, density, 1e17, volume).unwrap();
        assert_relative_eq!(p.particle_count(), density * volume, max_relative = 1e-12);
        let one = single_particle_density(p.g, p.v_tilde);
        assert_relative_eq!(
            particle_count(one, p.g, p.v_tilde),
            1.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn polarizability_examples() {
        assert_eq!(
            polarizability(0.0, 1e-3),
            ComplexResponse { re: 1.0, im: 0.0 }
        );
        let on = polarizability(1.0, 1e-3);
        assert!(on.re.abs() < 1e-12);
        assert_relative_eq!(on.im, 1000.0, max_relative = 1e-12);
        let above = polarizability(2.0, 1e-6);
        assert_relative_eq!(above.re, -1.0 / 3.0, max_relative = 1e-10);
        assert_relative_eq!(above.im, 2e-6 / 9.0, max_relative = 1e-10);
    }

    #[test]
    fn refractive_index_examples() {
        assert_eq!(
            refractive_index(3.7, 1e-4, 0.0),
            ComplexResponse { re: 1.0, im: 0.0 }
        );
        let stat = refractive_index(0.0, 1e-4, 0.01);
        assert_relative_eq!(stat.re, 1.01f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(stat.re, 1.004_987_6, max_relative = 1e-7);
        assert_eq!(stat.im, 0.0);
        let res = refractive_index(1.0, 1e-3, 1e-6);
        let expect = Complex64::new(1.0, 1e-3).sqrt();
        assert_relative_eq!(res.re, expect.re, max_relative = 1e-12);
        assert_relative_eq!(res.im, expect.im, max_relative = 1e-9);
        assert!(res.im > 0.0);
    }

    #[test]
    fn mode_weight_vacuum_and_origin() {
        for &u in &[0.0, 0.3, 1.0, 2.0, 17.5, 1e3] {
            assert_eq!(mode_weight(u, 1e-4, 0.0), u * u * u);
        }
        assert_eq!(mode_weight(0.0, 1e-4, 1e-3), 0.0);
    }

    #[test]
    fn mode_weight_first_order_coefficient() {
        // n_R ≈ 1 + (ν/2) Re α̃  ⇒  (w − u³)/ν ≈ (3/2)u³ Re α̃ + (1/2)u⁴ (Re α̃)′
        let (u, g, nu) = (0.5f64, 1e-4f64, 1e-8f64);
        let d = (1.0 - u * u).powi(2) + g * g * u * u;
        let re_alpha = (1.0 - u * u) / d;
        let re_alpha_prime = 2.0 * u * ((1.0 - u * u).powi(2) - g * g) / (d * d);
        let coefficient = 1.5 * u.powi(3) * re_alpha + 0.5 * u.powi(4) * re_alpha_prime;
        let measured = (mode_weight(u, g, nu) - u.powi(3)) / nu;
        assert_relative_eq!(measured, coefficient, max_relative = 1e-6);
        let stable = mode_weight_excess(u, g, nu) / nu;
        assert_relative_eq!(stable, coefficient, max_relative = 1e-7);
    }

    #[test]
    fn occupation_examples() {
        assert_relative_eq!(
            planck_occupation(2f64.ln()).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            planck_occupation(1e-8).unwrap(),
            1e8 - 0.5,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            planck_occupation(1.0).unwrap(),
            1.0 / (std::f64::consts::E - 1.0),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            planck_occupation(1.0).unwrap(),
            0.581_976_7,
            max_relative = 1e-7
        );
        assert_relative_eq!(
            planck_occupation_with_zero_point(1.0).unwrap(),
            1.081_976_7,
            max_relative = 1e-7
        );
        assert!(planck_occupation(0.0).is_err());
        assert!(planck_occupation(-1.0).is_err());
        assert_eq!(planck_occupation(1e4).unwrap(), 0.0);
    }

    #[test]
    fn occupation_tiny_argument() {
        // Laurent series 1/x − 1/2 + x/12 is exact to double precision here.
        for &x in &[1e-300, 1e-100, 1e-20, 1e-6, 1e-3] {
            let series = 1.0 / x - 0.5 + x / 12.0;
            assert_relative_eq!(planck_occupation(x).unwrap(), series, max_relative = 1e-14);
        }
    }

    #[test]
    fn occupation_large_argument_branch_is_continuous() {
        let below = bose(40.0 - 1e-12);
        let above = bose(40.0 + 1e-12);
        assert_relative_eq!(below, above, max_relative = 1e-10);
        assert_relative_eq!(bose(45.0), 1.0 / 45f64.exp_m1(), max_relative = 1e-15);
    }

    #[test]
    fn refractive_index_is_continuous_across_resonance() {
        // step g/100 resolves the resonance; a branch flip would jump by ~2|n|
        let (g, nu) = (1e-4, 1e-3);
        let steps = 2_000_000;
        let mut prev = index(0.0, g, nu);
        for k in 1..=steps {
            let u = 2.0 * k as f64 / steps as f64;
            let n = index(u, g, nu);
            assert!(n.re > 0.0 && n.im >= 0.0);
            assert!((n - prev).norm() < 0.05, "jump at u = {u}");
            prev = n;
        }
    }

    proptest! {
        #[test]
        fn passive_response(u in 0.0f64..1e3, g in 1e-9f64..1e-2) {
            prop_assert!(polarizability(u, g).im >= 0.0);
        }

        #[test]
        fn physical_branch(u in 0.0f64..1e3, g in 1e-9f64..1e-2, nu in 0.0f64..1e-2) {
            let n = refractive_index(u, g, nu);
            prop_assert!(n.re > 0.0);
            prop_assert!(n.im >= 0.0);
        }

        #[test]
        fn branch_has_no_jumps(u in 0.0f64..1e3, g in 1e-6f64..1e-2, nu in 0.0f64..1e-2) {
            let h = 1e-3 * g;
            let a = index(u, g, nu);
            let b = index(u + h, g, nu);
            // |dn/du| ≤ ν|α̃′|/(2|n|) and the bound on |α̃′| near resonance is ~ 2/g²
            let bound = nu * 4.0 / (g * g) * h / a.norm().max(1e-3) + 1e-12;
            prop_assert!((b - a).norm() <= bound);
        }

        #[test]
        fn occupation_small_x_limit(x in 1e-300f64..1e-3) {
            let n = planck_occupation(x).unwrap();
            prop_assert!((n * x - 1.0).abs() < x);
        }

        #[test]
        fn occupation_decreasing(x in 1e-6f64..50.0, dx in 1e-6f64..1.0) {
            prop_assert!(planck_occupation(x + dx).unwrap() < planck_occupation(x).unwrap());
        }
    }
}
