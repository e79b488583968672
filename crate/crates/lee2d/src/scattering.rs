//! Two-particle scattering observables of the renormalized theory.
//!
//! The separable vertex acts only in the isotropic channel, so every
//! observable is a function of the single dimensionless combination
//!
//! ```text
//! B(k) = L - i pi - c,   L = ln(k^2 / 2 mu E0),
//!                        c = (E + E0) 2 pi / (mu g0^2)   (0 at contact),
//! ```
//!
//! the inverse propagator stripped of its overall scale `mu g0^2 / 2 pi`.
//! In terms of `B`:
//!
//! ```text
//! d sigma / d phi = (2 pi / k) / |B|^2            (angle independent)
//! sigma           = 4 pi^2 / (k (pi^2 + (L-c)^2))
//! delta0          = atan2(pi, c - L)   in (0, pi)
//! S0              = (c - L + i pi) / (c - L - i pi) = e^{2 i delta0}
//! T(k)            = 1 / (2 pi mu B)
//! ```
//!
//! `differential_cross_section` and `t_amplitude` reach `B` through the
//! propagator module while `total_cross_section`, `phase_shift` and
//! `s_matrix_element` use the closed form above directly, so the identity
//! `sigma = 2 pi d sigma/d phi` is a genuine cross-check of the two routes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::propagator::{inverse_propagator_renormalized, EvaluationPoint};
use crate::renorm::{BareCouplingSq, PhysicalParams};

fn check_momentum(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidEvaluationPoint(
            "momentum must be positive and finite",
        ))
    }
}

/// `(L, c)` at relative momentum `k`. `c` is `+inf` for a free theory.
fn log_and_offset(phys: &PhysicalParams, k: f64) -> (f64, f64) {
    let e = k * k / (2.0 * phys.mu());
    let l = (e / phys.e0()).ln();
    let c = match phys.g0_sq() {
        BareCouplingSq::Finite(g0_sq) => (e + phys.e0()) * 2.0 * PI / (phys.mu() * g0_sq),
        BareCouplingSq::Infinite => 0.0,
    };
    (l, c)
}

/// `B(k) = L - i pi - c`, evaluated through the renormalized propagator.
///
/// For a finite coupling this is `G_V^-1(E + i0) / (mu g0^2 / 2 pi)`; at the
/// contact endpoint the propagator already returns the bracket. A free
/// theory (`g0 = 0`) is the limit `c -> +inf`, kept as `-inf - i pi` so the
/// observables degrade to zero instead of NaN.
pub fn scattering_bracket(phys: &PhysicalParams, k: f64) -> Result<Complex64> {
    check_momentum(k)?;
    let e = k * k / (2.0 * phys.mu());
    match phys.g0_sq() {
        BareCouplingSq::Finite(g0_sq) => {
            if g0_sq == 0.0 {
                return Ok(Complex64::new(f64::NEG_INFINITY, -PI));
            }
            let g = inverse_propagator_renormalized(phys, EvaluationPoint::ScatteringLimit(e))?;
            Ok(g / (phys.mu() * g0_sq / (2.0 * PI)))
        }
        BareCouplingSq::Infinite => {
            inverse_propagator_renormalized(phys, EvaluationPoint::ScatteringLimit(e))
        }
    }
}

/// On-shell amplitude `T(k) = 1 / (2 pi mu B(k))`.
pub fn t_amplitude(phys: &PhysicalParams, k: f64) -> Result<Complex64> {
    check_momentum(k)?;
    let e = k * k / (2.0 * phys.mu());
    match phys.g0_sq() {
        BareCouplingSq::Finite(g0_sq) => {
            if g0_sq == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let g = inverse_propagator_renormalized(phys, EvaluationPoint::ScatteringLimit(e))?;
            Ok(Complex64::new(g0_sq / (4.0 * PI * PI), 0.0) / g)
        }
        BareCouplingSq::Infinite => {
            let b = inverse_propagator_renormalized(phys, EvaluationPoint::ScatteringLimit(e))?;
            Ok(1.0 / (2.0 * PI * phys.mu() * b))
        }
    }
}

/// `d sigma / d phi = (2 pi / k) / |B|^2`, through the propagator route.
pub fn differential_cross_section(phys: &PhysicalParams, k: f64) -> Result<f64> {
    let b = scattering_bracket(phys, k)?;
    Ok((2.0 * PI / k) / b.norm_sqr())
}

/// `sigma = 4 pi^2 / (k (pi^2 + (L - c)^2))`, from the closed form.
pub fn total_cross_section(phys: &PhysicalParams, k: f64) -> Result<f64> {
    check_momentum(k)?;
    let (l, c) = log_and_offset(phys, k);
    let x = l - c;
    Ok(4.0 * PI * PI / (k * (PI * PI + x * x)))
}

/// s-wave phase shift `delta0 = atan2(pi, c - L)`, confined to `(0, pi)`.
pub fn phase_shift(phys: &PhysicalParams, k: f64) -> Result<f64> {
    check_momentum(k)?;
    let (l, c) = log_and_offset(phys, k);
    Ok(PI.atan2(c - l))
}

/// Unimodular S-matrix eigenvalue `S0 = e^{2 i delta0}`.
pub fn s_matrix_element(phys: &PhysicalParams, k: f64) -> Result<Complex64> {
    check_momentum(k)?;
    let (l, c) = log_and_offset(phys, k);
    let x = c - l;
    if !x.is_finite() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(Complex64::new(x, PI) / Complex64::new(x, -PI))
}

/// All scattering observables at one relative momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSectionPoint {
    pub k: f64,
    pub dsigma_dphi: f64,
    pub sigma: f64,
    pub delta0: f64,
    pub s0: Complex64,
    pub bracket: Complex64,
}

/// Evaluate every observable at `k`, keeping the two independent routes:
/// `dsigma_dphi` and `bracket` come through the propagator, the rest from
/// the closed forms.
pub fn cross_section_point(phys: &PhysicalParams, k: f64) -> Result<CrossSectionPoint> {
    let bracket = scattering_bracket(phys, k)?;
    Ok(CrossSectionPoint {
        k,
        dsigma_dphi: (2.0 * PI / k) / bracket.norm_sqr(),
        sigma: total_cross_section(phys, k)?,
        delta0: phase_shift(phys, k)?,
        s0: s_matrix_element(phys, k)?,
        bracket,
    })
}
