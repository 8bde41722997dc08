//! Admissible fluxes and their relative functionals.
//!
//! The normal flux is a strictly convex perturbation of the quadratic flux,
//!
//! f1(u) = a u² + g(u),    a > 0,    ‖g″‖∞ < (2/3) a,
//!
//! and the transverse fluxes f2, ..., fn are unrestricted C¹ functions.
//! This module carries the flux data, the Rankine-Hugoniot speed, the
//! hypothesis gates (Lax condition, flux convexity margin, shock-strength
//! threshold 8π/(2a + ‖g″‖∞)), and the relative functionals
//! G(u|v) = G(u) − G(v) − G′(v)(u − v) used throughout the diagnostics.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// The C² perturbation g of the quadratic normal flux.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GFunction {
    /// g ≡ 0 (pure quadratic flux).
    Zero,
    /// g(u) = kappa · sin(u), with ‖g″‖∞ = |kappa|.
    Sin { kappa: f64 },
    /// g(u) = Σ coeffs[k] · u^k.
    Poly { coeffs: Vec<f64> },
}

impl GFunction {
    pub fn value(&self, u: f64) -> f64 {
        match self {
            GFunction::Zero => 0.0,
            GFunction::Sin { kappa } => kappa * u.sin(),
            GFunction::Poly { coeffs } => horner(coeffs, u),
        }
    }

    pub fn deriv(&self, u: f64) -> f64 {
        match self {
            GFunction::Zero => 0.0,
            GFunction::Sin { kappa } => kappa * u.cos(),
            GFunction::Poly { coeffs } => horner_deriv(coeffs, u, 1),
        }
    }

    pub fn second_deriv(&self, u: f64) -> f64 {
        match self {
            GFunction::Zero => 0.0,
            GFunction::Sin { kappa } => -kappa * u.sin(),
            GFunction::Poly { coeffs } => horner_deriv(coeffs, u, 2),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GFunction::Zero => true,
            GFunction::Sin { kappa } => *kappa == 0.0,
            GFunction::Poly { coeffs } => coeffs.iter().all(|&c| c == 0.0),
        }
    }

    /// A global ‖g″‖∞ when one is available in closed form.
    pub fn natural_g2_bound(&self) -> Option<f64> {
        match self {
            GFunction::Zero => Some(0.0),
            GFunction::Sin { kappa } => Some(kappa.abs()),
            GFunction::Poly { coeffs } if coeffs.len() <= 3 => {
                Some(coeffs.get(2).map_or(0.0, |c| 2.0 * c.abs()))
            }
            // Degree >= 3: unbounded second derivative on the line; the caller
            // must assert a bound for the dynamic range and have it sampled.
            GFunction::Poly { .. } => None,
        }
    }
}

pub(crate) fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

/// Evaluates the `order`-th derivative of the polynomial by Horner on the
/// differentiated coefficient sequence.
pub(crate) fn horner_deriv(coeffs: &[f64], u: f64, order: u32) -> f64 {
    let mut acc = 0.0;
    for k in (order as usize..coeffs.len()).rev() {
        let mut c = coeffs[k];
        for j in 0..order as usize {
            c *= (k - j) as f64;
        }
        acc = acc * u + c;
    }
    acc
}

/// One transverse flux f_i, i >= 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransverseFlux {
    /// f_i(u) = a u², sharing the normal coefficient.
    Quadratic,
    /// f_i(u) = Σ coeffs[k] · u^k.
    Poly { coeffs: Vec<f64> },
}

impl TransverseFlux {
    fn value(&self, a: f64, u: f64) -> f64 {
        match self {
            TransverseFlux::Quadratic => a * u * u,
            TransverseFlux::Poly { coeffs } => horner(coeffs, u),
        }
    }

    fn deriv(&self, a: f64, u: f64) -> f64 {
        match self {
            TransverseFlux::Quadratic => 2.0 * a * u,
            TransverseFlux::Poly { coeffs } => horner_deriv(coeffs, u, 1),
        }
    }
}

/// The full flux vector F = (f1, ..., fn) with the certified ‖g″‖∞ bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxSpec {
    a: f64,
    g: GFunction,
    g2_bound: f64,
    transverse: Vec<TransverseFlux>,
}

impl FluxSpec {
    /// `g2_bound` is the caller-asserted upper bound for ‖g″‖∞; pass `None`
    /// to use the closed-form bound when the family has one.
    pub fn new(
        a: f64,
        g: GFunction,
        g2_bound: Option<f64>,
        transverse: Vec<TransverseFlux>,
    ) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidFlux(format!(
                "a must be positive and finite, got {a}"
            )));
        }
        let g2_bound = match g2_bound.or_else(|| g.natural_g2_bound()) {
            Some(b) => b,
            None => {
                return Err(Error::InvalidFlux(
                    "g2_bound is required for this g family (no closed-form bound)".into(),
                ))
            }
        };
        if !(g2_bound >= 0.0) || !g2_bound.is_finite() {
            return Err(Error::InvalidFlux(format!(
                "g2_bound must be nonnegative and finite, got {g2_bound}"
            )));
        }
        Ok(FluxSpec {
            a,
            g,
            g2_bound,
            transverse,
        })
    }

    /// Quadratic flux f1 = a u² with no perturbation and quadratic transverse fluxes.
    pub fn burgers(a: f64) -> Result<Self> {
        FluxSpec::new(a, GFunction::Zero, None, vec![TransverseFlux::Quadratic])
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn g(&self) -> &GFunction {
        &self.g
    }

    pub fn g2_bound(&self) -> f64 {
        self.g2_bound
    }

    pub fn f1(&self, u: f64) -> f64 {
        self.a * u * u + self.g.value(u)
    }

    pub fn df1(&self, u: f64) -> f64 {
        2.0 * self.a * u + self.g.deriv(u)
    }

    pub fn d2f1(&self, u: f64) -> f64 {
        2.0 * self.a + self.g.second_deriv(u)
    }

    /// Transverse flux f_{d+2}, d = 0, ..., n-2. Directions beyond the
    /// configured list reuse the last entry (default: quadratic).
    pub fn ft(&self, d: usize, u: f64) -> f64 {
        self.transverse_at(d).value(self.a, u)
    }

    pub fn dft(&self, d: usize, u: f64) -> f64 {
        self.transverse_at(d).deriv(self.a, u)
    }

    pub(crate) fn transverse_at(&self, d: usize) -> &TransverseFlux {
        self.transverse
            .get(d)
            .or_else(|| self.transverse.last())
            .unwrap_or(&TransverseFlux::Quadratic)
    }

    /// Spot-checks the asserted ‖g″‖∞ bound by dense sampling on `[lo, hi]`.
    pub fn verify_g2_bound(&self, lo: f64, hi: f64, samples: usize) -> Result<()> {
        let n = samples.max(2);
        for k in 0..n {
            let u = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let observed = self.g.second_deriv(u).abs();
            if observed > self.g2_bound * (1.0 + 1e-12) + 1e-300 {
                return Err(Error::G2BoundViolated {
                    at: u,
                    observed,
                    bound: self.g2_bound,
                });
            }
        }
        Ok(())
    }

    /// Sanity check: every transverse flux has a finite derivative on the
    /// dynamic range (a Lipschitz-on-range condition).
    pub fn verify_transverse_lipschitz(&self, lo: f64, hi: f64, samples: usize) -> Result<()> {
        let n = samples.max(2);
        for d in 0..self.transverse.len().max(1) {
            for k in 0..n {
                let u = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                let s = self.dft(d, u);
                if !s.is_finite() {
                    return Err(Error::InvalidFlux(format!(
                        "transverse flux {d} has non-finite derivative at u = {u}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Shock endpoints with strength and Rankine-Hugoniot speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockData {
    pub u_minus: f64,
    pub u_plus: f64,
    /// eps = u_minus - u_plus (positive exactly when the Lax condition holds).
    pub eps: f64,
    pub sigma: f64,
}

impl ShockData {
    /// Builds the shock data; the Lax condition is *reported* by
    /// [`check_admissibility`], not enforced here, so that inadmissible
    /// configurations remain representable for negative tests.
    pub fn new(flux: &FluxSpec, u_minus: f64, u_plus: f64) -> Result<Self> {
        let sigma = rankine_hugoniot(flux, u_minus, u_plus)?;
        Ok(ShockData {
            u_minus,
            u_plus,
            eps: u_minus - u_plus,
            sigma,
        })
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.u_minus + self.u_plus)
    }
}

/// Shock speed from the flux jump: sigma = (f1(u-) - f1(u+)) / (u- - u+).
pub fn rankine_hugoniot(flux: &FluxSpec, u_minus: f64, u_plus: f64) -> Result<f64> {
    if !u_minus.is_finite() || !u_plus.is_finite() {
        return Err(Error::NonFinite("shock endpoints".into()));
    }
    if u_minus == u_plus {
        return Err(Error::DegenerateShock { u_minus, u_plus });
    }
    Ok((flux.f1(u_minus) - flux.f1(u_plus)) / (u_minus - u_plus))
}

/// Outcome of the three hypothesis gates of the contraction theorem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    /// u_minus > u_plus.
    pub lax: bool,
    /// ‖g″‖∞ < (2/3) a.
    pub flux_hyp: bool,
    /// 0 < eps < 8π (2a + ‖g″‖∞)⁻¹.
    pub strength_hyp: bool,
    pub admissible: bool,
    pub eps: f64,
    /// The strength threshold 8π (2a + ‖g″‖∞)⁻¹.
    pub eps_threshold: f64,
    /// The convexity-margin threshold (2/3) a for ‖g″‖∞.
    pub g2_threshold: f64,
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lax: {}, flux_hyp: {} (g2 threshold {:.6}), strength_hyp: {} (eps = {:.6} vs {:.6})",
            self.lax,
            self.flux_hyp,
            self.g2_threshold,
            self.strength_hyp,
            self.eps,
            self.eps_threshold
        )
    }
}

/// Evaluates the hypothesis gates; failures are carried in the report, never
/// raised as errors.
pub fn check_admissibility(flux: &FluxSpec, shock: &ShockData) -> AdmissibilityReport {
    let lax = shock.u_minus > shock.u_plus;
    let g2_threshold = 2.0 / 3.0 * flux.a;
    let flux_hyp = flux.g2_bound < g2_threshold;
    let eps_threshold = 8.0 * PI / (2.0 * flux.a + flux.g2_bound);
    let strength_hyp = shock.eps > 0.0 && shock.eps < eps_threshold;
    AdmissibilityReport {
        lax,
        flux_hyp,
        strength_hyp,
        admissible: lax && flux_hyp && strength_hyp,
        eps: shock.eps,
        eps_threshold,
        g2_threshold,
    }
}

/// Relative functional G(u|v) = G(u) − G(v) − G′(v)(u − v).
pub fn relative_quantity<F, D>(g: F, dg: D, u: f64, v: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    g(u) - g(v) - dg(v) * (u - v)
}

/// Relative normal flux f1(u|v) = a (u − v)² + g(u|v).
pub fn relative_flux_f1(flux: &FluxSpec, u: f64, v: f64) -> f64 {
    let d = u - v;
    flux.a * d * d + relative_quantity(|w| flux.g.value(w), |w| flux.g.deriv(w), u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn burgers_half() -> FluxSpec {
        FluxSpec::burgers(0.5).unwrap()
    }

    fn sin_flux(a: f64, kappa: f64) -> FluxSpec {
        FluxSpec::new(
            a,
            GFunction::Sin { kappa },
            None,
            vec![TransverseFlux::Quadratic],
        )
        .unwrap()
    }

    #[test]
    fn rankine_hugoniot_quadratic() {
        let flux = burgers_half();
        let sigma = rankine_hugoniot(&flux, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(sigma, 0.5);
    }

    #[test]
    fn rankine_hugoniot_symmetric_endpoints_give_midpoint_speed() {
        // For a pure quadratic flux, sigma = a (u- + u+); symmetric endpoints
        // around c give sigma = 2 a c = c for a = 1/2.
        let flux = burgers_half();
        for (c, delta) in [(0.3, 0.1), (-1.2, 0.5), (2.0, 1.0)] {
            let sigma = rankine_hugoniot(&flux, c + delta, c - delta).unwrap();
            assert_relative_eq!(sigma, c, max_relative = 1e-13);
        }
    }

    #[test]
    fn rankine_hugoniot_sin_perturbation() {
        let flux = sin_flux(1.0, 0.1);
        let sigma = rankine_hugoniot(&flux, 1.0, 0.0).unwrap();
        let expected = 1.0 + 0.1 * (1.0_f64.sin() - 0.0);
        assert_relative_eq!(sigma, expected, max_relative = 1e-15);
        assert_abs_diff_eq!(sigma, 1.0841, epsilon = 1e-4);
    }

    #[test]
    fn rankine_hugoniot_equal_endpoints_is_degenerate() {
        let flux = burgers_half();
        assert!(matches!(
            rankine_hugoniot(&flux, 0.7, 0.7),
            Err(Error::DegenerateShock { .. })
        ));
    }

    #[test]
    fn admissibility_unit_burgers_shock() {
        let flux = burgers_half();
        let shock = ShockData::new(&flux, 1.0, 0.0).unwrap();
        let report = check_admissibility(&flux, &shock);
        assert!(report.lax && report.flux_hyp && report.strength_hyp && report.admissible);
        assert_relative_eq!(report.eps_threshold, 8.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn admissibility_flux_hypothesis_fails_at_half() {
        // g2_bound = 1/2 >= (2/3)(1/2).
        let flux = FluxSpec::new(0.5, GFunction::Sin { kappa: 0.5 }, None, vec![]).unwrap();
        let shock = ShockData::new(&flux, 1.0, 0.0).unwrap();
        let report = check_admissibility(&flux, &shock);
        assert!(!report.flux_hyp);
        assert!(!report.admissible);
    }

    #[test]
    fn admissibility_strength_hypothesis_fails_for_huge_shock() {
        let flux = burgers_half();
        let shock = ShockData::new(&flux, 30.0, 0.0).unwrap();
        let report = check_admissibility(&flux, &shock);
        assert!(report.lax && report.flux_hyp);
        assert!(!report.strength_hyp);
        assert!(!report.admissible);
    }

    #[test]
    fn relative_quantity_examples() {
        // Quadratic entropy: exact identity (u-v)²/2.
        assert_abs_diff_eq!(relative_quantity(|u| 0.5 * u * u, |u| u, 3.0, 1.0), 2.0);
        // Identity case.
        assert_abs_diff_eq!(
            relative_quantity(|u| u.powi(3), |u| 3.0 * u * u, 1.5, 1.5),
            0.0
        );
        // Cubic, by hand: 8 - 1 - 3 = 4.
        assert_abs_diff_eq!(
            relative_quantity(|u| u.powi(3), |u| 3.0 * u * u, 2.0, 1.0),
            4.0
        );
    }

    #[test]
    fn relative_flux_examples() {
        let flux = burgers_half();
        assert_abs_diff_eq!(relative_flux_f1(&flux, 2.0, 0.0), 2.0);
        assert_abs_diff_eq!(relative_flux_f1(&flux, 1.3, 1.3), 0.0);
        let fs = sin_flux(1.0, 0.1);
        let expected = 1.0 + 0.1 * 1.0_f64.sin() - 0.1 * 1.0;
        assert_relative_eq!(
            relative_flux_f1(&fs, 1.0, 0.0),
            expected,
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(relative_flux_f1(&fs, 1.0, 0.0), 0.98415, epsilon = 1e-5);
    }

    #[test]
    fn g2_bound_verification_accepts_true_bound_and_rejects_false_one() {
        let flux = sin_flux(0.5, 0.05);
        flux.verify_g2_bound(-1.0, 2.0, 4097).unwrap();
        let lying = FluxSpec::new(0.5, GFunction::Sin { kappa: 0.05 }, Some(0.01), vec![]).unwrap();
        assert!(matches!(
            lying.verify_g2_bound(-1.0, 2.0, 4097),
            Err(Error::G2BoundViolated { .. })
        ));
    }

    #[test]
    fn poly_g_derivatives_match_closed_forms() {
        // g(u) = 1 + 2u + 3u² + 4u³
        let g = GFunction::Poly {
            coeffs: vec![1.0, 2.0, 3.0, 4.0],
        };
        for u in [-1.5, 0.0, 0.7, 2.0] {
            assert_relative_eq!(
                g.value(u),
                1.0 + 2.0 * u + 3.0 * u * u + 4.0 * u * u * u,
                max_relative = 1e-14
            );
            assert_relative_eq!(
                g.deriv(u),
                2.0 + 6.0 * u + 12.0 * u * u,
                max_relative = 1e-14
            );
            assert_relative_eq!(g.second_deriv(u), 6.0 + 24.0 * u, max_relative = 1e-14);
        }
    }

    proptest! {
        #[test]
        fn relative_entropy_nonnegative_for_convex_entropies(
            u in -10.0f64..10.0, v in -10.0f64..10.0
        ) {
            let quad = relative_quantity(|w| 0.5 * w * w, |w| w, u, v);
            prop_assert!(quad >= -1e-12);
            let quart = relative_quantity(|w| w.powi(4), |w| 4.0 * w.powi(3), u, v);
            prop_assert!(quart >= -1e-9 * (1.0 + u.abs().max(v.abs()).powi(4)));
            if u == v {
                prop_assert_eq!(quad, 0.0);
                prop_assert_eq!(quart, 0.0);
            }
        }

        #[test]
        fn quadratic_entropy_is_exact(u in -50.0f64..50.0, v in -50.0f64..50.0) {
            let lhs = relative_quantity(|w| 0.5 * w * w, |w| w, u, v);
            let rhs = 0.5 * (u - v) * (u - v);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }

        #[test]
        fn relative_flux_sandwich(u in -3.0f64..3.0, v in -3.0f64..3.0) {
            let flux = sin_flux(0.5, 0.05);
            let q = relative_flux_f1(&flux, u, v);
            let d2 = (u - v) * (u - v);
            let lo = 0.5 * (2.0 * flux.a() - flux.g2_bound()) * d2;
            let hi = 0.5 * (2.0 * flux.a() + flux.g2_bound()) * d2;
            let slack = 1e-12 * (1.0 + d2);
            prop_assert!(q >= lo - slack, "q = {q}, lo = {lo}");
            prop_assert!(q <= hi + slack, "q = {q}, hi = {hi}");
        }

        #[test]
        fn admissibility_is_monotone_in_eps_and_g2(
            eps in 0.01f64..20.0, g2 in 0.0f64..0.3, shrink in 0.1f64..1.0
        ) {
            let flux = FluxSpec::new(0.5, GFunction::Sin { kappa: g2 }, None, vec![]).unwrap();
            let shock = ShockData::new(&flux, eps, 0.0).unwrap();
            let before = check_admissibility(&flux, &shock);
            if before.admissible {
                let flux2 =
                    FluxSpec::new(0.5, GFunction::Sin { kappa: g2 * shrink }, None, vec![])
                        .unwrap();
                let shock2 = ShockData::new(&flux2, eps * shrink, 0.0).unwrap();
                prop_assert!(check_admissibility(&flux2, &shock2).admissible);
            }
        }
    }
}
