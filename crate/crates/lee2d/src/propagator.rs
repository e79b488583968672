//! Pair self-energy and the dressed inverse propagator of the composite.
//!
//! The self-energy of `V` from one `N theta` loop is, in two dimensions,
//!
//! ```text
//! Sigma(U) = g0^2 Int d^2q/(2 pi)^2  2 mu f(q)^2 / (q^2 - 2 mu U)
//!          = (mu g0^2 / 2 pi) Int_0^inf f(sqrt(s))^2 ds / (s - 2 mu U)
//! ```
//!
//! after the trivial angular integration and the substitution `s = q^2`. The
//! bare inverse propagator is `G_V^-1(U) = U0 - U - Sigma(U)`; its
//! renormalized form trades `U0` for the bound-state energy `E0 > 0` through
//! `G_V^-1(-E0) = 0` and, once the regulator is removed from the then
//! convergent subtracted integral, collapses to
//!
//! ```text
//! G_V^-1(U) = -(U + E0) - (mu g0^2 / 2 pi) ln(E0 / (-U)).
//! ```
//!
//! On the scattering boundary `U = E + i0+` the branch `ln(-U) = ln E - i pi`
//! applies, which yields `Im Sigma = mu g0^2 f(k)^2 / 2 >= 0` with
//! `k = sqrt(2 mu E)` and hence a strictly negative imaginary part for the
//! inverse propagator.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{FormFactor, ModelParams};
use crate::quad::{adaptive_gk, AdaptiveOpts};
use crate::renorm::{BareCouplingSq, PhysicalParams};

/// Where a propagator-side function is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvaluationPoint {
    /// Real `U < 0`, below the two-particle threshold.
    BelowThreshold(f64),
    /// Boundary value `U = E + i0+` with `E > 0`.
    ScatteringLimit(f64),
    /// `U` strictly off the real axis.
    GeneralComplex(Complex64),
}

impl EvaluationPoint {
    pub(crate) fn check(&self) -> Result<()> {
        match *self {
            EvaluationPoint::BelowThreshold(u) => {
                if u < 0.0 && u.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidEvaluationPoint(
                        "BelowThreshold requires finite U < 0",
                    ))
                }
            }
            EvaluationPoint::ScatteringLimit(e) => {
                if e > 0.0 && e.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidEvaluationPoint(
                        "ScatteringLimit requires finite E > 0",
                    ))
                }
            }
            EvaluationPoint::GeneralComplex(w) => {
                if w.im != 0.0 && w.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidEvaluationPoint(
                        "GeneralComplex requires Im U != 0",
                    ))
                }
            }
        }
    }

    fn as_complex(&self) -> Complex64 {
        match *self {
            EvaluationPoint::BelowThreshold(u) => Complex64::new(u, 0.0),
            EvaluationPoint::ScatteringLimit(e) => Complex64::new(e, 0.0),
            EvaluationPoint::GeneralComplex(w) => w,
        }
    }
}

/// `mu g0^2 / 2 pi`, the coefficient carried by every radial integral.
fn prefactor(params: &ModelParams) -> f64 {
    params.masses.mu * params.g0_sq() / (2.0 * PI)
}

/// Self-energy `Sigma(U)`.
///
/// Closed forms are used where the regulator admits them (sharp cutoff below
/// threshold, and the delta-shell contribution on the scattering boundary);
/// everything else goes through adaptive quadrature. The local form factor
/// has a logarithmically divergent integral and is rejected on this bare
/// path whenever `g0 > 0`.
pub fn self_energy(params: &ModelParams, at: EvaluationPoint) -> Result<Complex64> {
    at.check()?;
    if params.couplings.g0 == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if params.form_factor.is_local() {
        return Err(Error::DivergentIntegral);
    }
    match (params.form_factor, at) {
        (FormFactor::SharpCutoff { lambda }, EvaluationPoint::BelowThreshold(u)) => {
            let b = 2.0 * params.masses.mu * (-u);
            let l2 = lambda * lambda;
            Ok(Complex64::new(prefactor(params) * ((l2 + b) / b).ln(), 0.0))
        }
        _ => self_energy_quadrature(params, at),
    }
}

/// Direct-quadrature evaluation of `Sigma(U)`.
///
/// This is the route `self_energy` itself takes for the Gaussian regulator
/// and for every scattering or off-axis point; for the sharp cutoff below
/// threshold it provides the evaluation that is independent of the closed
/// form, which the oracle suite exploits.
pub fn self_energy_quadrature(params: &ModelParams, at: EvaluationPoint) -> Result<Complex64> {
    at.check()?;
    if params.couplings.g0 == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if params.form_factor.is_local() {
        return Err(Error::DivergentIntegral);
    }
    match at {
        EvaluationPoint::BelowThreshold(_) | EvaluationPoint::GeneralComplex(_) => {
            radial_regular(params, at.as_complex())
        }
        EvaluationPoint::ScatteringLimit(e) => scattering_pv_plus_delta(params, e),
    }
}

/// Radial integral with the pole strictly away from the integration ray.
fn radial_regular(params: &ModelParams, u: Complex64) -> Result<Complex64> {
    let mu = params.masses.mu;
    let a = 2.0 * mu * u;
    let c = prefactor(params);
    let opts = AdaptiveOpts::default();
    match params.form_factor {
        FormFactor::SharpCutoff { lambda } => {
            let l2 = lambda * lambda;
            let mut pts = vec![0.0, l2];
            if a.re > 0.0 && a.re < l2 {
                pts.insert(1, a.re);
            }
            let v = adaptive_gk(|s| 1.0 / (Complex64::new(s, 0.0) - a), &pts, &opts)?;
            Ok(c * v)
        }
        FormFactor::Gaussian { lambda } => {
            let l2 = lambda * lambda;
            let split = (4.0 * l2).max(4.0 * a.norm());
            let mut pts = vec![0.0, split];
            if a.re > 0.0 && a.re < split {
                pts.insert(1, a.re);
            }
            let body = adaptive_gk(
                |s| Complex64::new((-s / l2).exp(), 0.0) / (Complex64::new(s, 0.0) - a),
                &pts,
                &opts,
            )?;
            let tail = gaussian_tail(lambda, split.sqrt(), a, &opts)?;
            Ok(c * (body + tail))
        }
        FormFactor::Local => unreachable!("local form factor rejected above"),
    }
}

/// Tail of the Gaussian radial integral from `q0` upward, taken in momentum
/// space with the compactifying substitution `q = lambda tan t`.
fn gaussian_tail(lambda: f64, q0: f64, a: Complex64, opts: &AdaptiveOpts) -> Result<Complex64> {
    let t0 = (q0 / lambda).atan();
    adaptive_gk(
        |t| {
            let r = t.tan();
            let q = lambda * r;
            if !q.is_finite() {
                return Complex64::new(0.0, 0.0);
            }
            let damp = (-r * r).exp();
            if damp == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let jacobian = lambda * (1.0 + r * r);
            2.0 * q * damp * jacobian / (Complex64::new(q * q, 0.0) - a)
        },
        &[t0, FRAC_PI_2],
        opts,
    )
}

/// Scattering boundary value: principal value by symmetric-window
/// subtraction plus the closed-form delta-shell contribution.
///
/// The window `[k^2 - w, k^2 + w]` is symmetric in `s`, so the subtracted
/// term `f(k)^2/(s - k^2)` integrates to zero there and only the regular
/// remainder is quadratured.
fn scattering_pv_plus_delta(params: &ModelParams, e: f64) -> Result<Complex64> {
    let mu = params.masses.mu;
    let k2 = 2.0 * mu * e;
    let k = k2.sqrt();
    let c = prefactor(params);
    let fk = params.form_factor.eval(k);
    let im = 0.5 * mu * params.g0_sq() * fk * fk;
    let opts = AdaptiveOpts::default();
    let pv = match params.form_factor {
        FormFactor::SharpCutoff { lambda } => {
            if (k - lambda).abs() < 1e-9 * lambda.max(1.0) {
                // On-shell point on the cutoff edge: the principal value
                // itself diverges logarithmically.
                return Err(Error::DivergentIntegral);
            }
            let l2 = lambda * lambda;
            if k2 > l2 {
                // Pole beyond the cutoff: the integral is an ordinary one.
                adaptive_gk(|s| Complex64::new(1.0 / (s - k2), 0.0), &[0.0, l2], &opts)?.re
            } else {
                let w = 0.5 * k2.min(l2 - k2);
                pv_subtracted(|s| params.form_factor.eval_sq_s(s), 0.0, k2, w, l2, &opts)?
            }
        }
        FormFactor::Gaussian { lambda } => {
            let l2 = lambda * lambda;
            let w = 0.5 * k2;
            let split = (4.0 * l2).max(4.0 * k2);
            let finite = pv_subtracted(
                |s| (-s / l2).exp(),
                -(-k2 / l2).exp() / l2,
                k2,
                w,
                split,
                &opts,
            )?;
            let tail = gaussian_tail(lambda, split.sqrt(), Complex64::new(k2, 0.0), &opts)?;
            finite + tail.re
        }
        FormFactor::Local => unreachable!("local form factor rejected above"),
    };
    Ok(Complex64::new(c * pv, im))
}

/// `PV Int_0^upper g(s)/(s - k2) ds` for a pole interior to the range.
/// `dg_at_k2` is `dg/ds` at the pole, the limit of the subtracted remainder.
fn pv_subtracted(
    g: impl Fn(f64) -> f64 + Copy,
    dg_at_k2: f64,
    k2: f64,
    w: f64,
    upper: f64,
    opts: &AdaptiveOpts,
) -> Result<f64> {
    let gk = g(k2);
    let left = adaptive_gk(
        |s| Complex64::new(g(s) / (s - k2), 0.0),
        &[0.0, k2 - w],
        opts,
    )?;
    let mid = adaptive_gk(
        |s| {
            let v = if s == k2 {
                dg_at_k2
            } else {
                (g(s) - gk) / (s - k2)
            };
            Complex64::new(v, 0.0)
        },
        &[k2 - w, k2, k2 + w],
        opts,
    )?;
    let right = adaptive_gk(
        |s| Complex64::new(g(s) / (s - k2), 0.0),
        &[k2 + w, upper],
        opts,
    )?;
    Ok(left.re + mid.re + right.re)
}

/// Bare inverse propagator `G_V^-1(U) = U0 - U - Sigma(U)`.
pub fn inverse_propagator_bare(params: &ModelParams, at: EvaluationPoint) -> Result<Complex64> {
    let sigma = self_energy(params, at)?;
    Ok(Complex64::new(params.couplings.u0, 0.0) - at.as_complex() - sigma)
}

/// Renormalized inverse propagator carrying the bound state at `U = -E0`.
///
/// For a finite bare coupling this is the closed form quoted in the module
/// docs; on the scattering boundary it equals
/// `(mu g0^2 / 2 pi) [ln(k^2 / 2 mu E0) - i pi - (E + E0) 2 pi/(mu g0^2)]`.
/// In the contact limit `g0 -> inf` the physical prefactor diverges while
/// every observable depends only on the bracket, so the function returns the
/// bracket itself: `ln(-U / E0)`, that is `ln(k^2 / 2 mu E0) - i pi` on the
/// boundary. Both normalizations vanish at `U = -E0`.
pub fn inverse_propagator_renormalized(
    phys: &PhysicalParams,
    at: EvaluationPoint,
) -> Result<Complex64> {
    at.check()?;
    let e0 = phys.e0();
    // ln(E0 / (-U)) with the upper-lip branch ln(-U) = ln E - i pi.
    let log_term = match at {
        EvaluationPoint::BelowThreshold(u) => Complex64::new((e0 / -u).ln(), 0.0),
        EvaluationPoint::ScatteringLimit(e) => Complex64::new((e0 / e).ln(), PI),
        EvaluationPoint::GeneralComplex(w) => Complex64::new(e0.ln(), 0.0) - (-w).ln(),
    };
    match phys.g0_sq() {
        BareCouplingSq::Finite(g0_sq) => {
            let c = phys.mu() * g0_sq / (2.0 * PI);
            Ok(-(at.as_complex() + e0) - c * log_term)
        }
        BareCouplingSq::Infinite => Ok(-log_term),
    }
}

/// Eigenstate coefficients of the scattering pair built on relative momentum
/// `k`: the amplitude `zeta` on the bare `V` and the N-theta amplitude
/// `g(q)` at relative momentum `q != k`.
///
/// They satisfy the two linear relations of the coupled eigenvalue problem:
///
/// ```text
/// (U0 - k^2/2mu) zeta = (g0/2pi) f(k) + (g0/2pi) Int d^2q g(q) f(q)
/// g(q) (q^2 - k^2)/2mu = (g0/2pi) zeta f(q)
/// ```
pub fn pair_coefficients(params: &ModelParams, k: f64, q: f64) -> Result<(Complex64, Complex64)> {
    if !(k > 0.0 && k.is_finite() && q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidEvaluationPoint(
            "momenta must be positive and finite",
        ));
    }
    if params.couplings.g0 == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    if (q - k).abs() < 1e-9 * k.max(1.0) {
        return Err(Error::OnShellSingularity { q, k });
    }
    let mu = params.masses.mu;
    let e = k * k / (2.0 * mu);
    let ginv = inverse_propagator_bare(params, EvaluationPoint::ScatteringLimit(e))?;
    let vertex = params.couplings.g0 / (2.0 * PI);
    let fk = params.form_factor.eval(k);
    let fq = params.form_factor.eval(q);
    let zeta = vertex * fk / ginv;
    let gq = vertex * vertex * fq * fk * 2.0 * mu / ((q * q - k * k) * ginv);
    Ok((zeta, gq))
}
