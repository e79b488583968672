//! Renormalization: trading the bare pair `(U0, g0)` for observables.
//!
//! With a regulator in place the composite binds at the energy `E0 > 0`
//! solving `U0 + E0 - Sigma(-E0) = 0`. Once `E0` is held fixed the cutoff
//! can be removed; what survives is the renormalized coupling
//!
//! ```text
//! g^2 = g0^2 / (1 + mu g0^2 / (2 pi E0)),
//! ```
//!
//! the squared residue numerator of the dressed propagator at the pole.
//! `g^2` increases monotonically with `g0^2` and saturates at
//! `2 pi E0 / mu` as `g0 -> inf`; that endpoint is the contact (delta
//! function potential) limit, where the inverse propagator degenerates to a
//! pure logarithm.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::propagator::{self_energy, EvaluationPoint};

/// Squared bare coupling, allowing the contact endpoint explicitly.
///
/// Feeding `f64::INFINITY` through the renormalization algebra produces
/// `inf/inf`; keeping the endpoint as its own variant lets every consumer
/// branch to the closed contact form instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BareCouplingSq {
    Finite(f64),
    Infinite,
}

/// Cutoff-free parameter set: `(E0, mu, g0^2)` with the renormalized `g^2`
/// cached at construction.
#[derive(Debug, Clone, Copy)]
pub struct PhysicalParams {
    e0: f64,
    mu: f64,
    g0_sq: BareCouplingSq,
    g_sq: f64,
}

impl PhysicalParams {
    pub fn new(e0: f64, mu: f64, g0_sq: BareCouplingSq) -> Result<Self> {
        if !(e0 > 0.0 && e0.is_finite()) {
            return Err(Error::InvalidBoundState(e0));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::NonPositiveMass {
                m_n: mu,
                m_theta: mu,
            });
        }
        if let BareCouplingSq::Finite(v) = g0_sq {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::NegativeCoupling(v));
            }
        }
        let g_sq = match g0_sq {
            BareCouplingSq::Finite(v) => renormalized_coupling_sq(v, mu, e0),
            BareCouplingSq::Infinite => 2.0 * PI * e0 / mu,
        };
        Ok(PhysicalParams {
            e0,
            mu,
            g0_sq,
            g_sq,
        })
    }

    /// Contact endpoint at the given binding energy.
    pub fn contact(e0: f64, mu: f64) -> Result<Self> {
        PhysicalParams::new(e0, mu, BareCouplingSq::Infinite)
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn g0_sq(&self) -> BareCouplingSq {
        self.g0_sq
    }

    /// Renormalized squared coupling `g^2`.
    pub fn g_sq(&self) -> f64 {
        self.g_sq
    }

    pub fn is_contact(&self) -> bool {
        matches!(self.g0_sq, BareCouplingSq::Infinite)
    }
}

/// `g^2` from `(g0^2, mu, E0)`.
pub fn renormalized_coupling_sq(g0_sq: f64, mu: f64, e0: f64) -> f64 {
    debug_assert!(g0_sq >= 0.0 && g0_sq.is_finite());
    debug_assert!(mu > 0.0 && e0 > 0.0);
    g0_sq / (1.0 + mu * g0_sq / (2.0 * PI * e0))
}

/// Inverse map `g^2 -> g0^2`. The renormalized coupling is confined to
/// `[0, 2 pi E0 / mu)`; the endpoint maps to the contact limit and anything
/// beyond it corresponds to no bare theory at all.
pub fn bare_coupling_sq(g_sq: f64, mu: f64, e0: f64) -> Result<BareCouplingSq> {
    let bound = 2.0 * PI * e0 / mu;
    if !(g_sq >= 0.0 && g_sq.is_finite()) {
        return Err(Error::NegativeCoupling(g_sq));
    }
    if g_sq > bound {
        return Err(Error::OutOfRange { g_sq, bound });
    }
    if g_sq == bound {
        return Ok(BareCouplingSq::Infinite);
    }
    Ok(BareCouplingSq::Finite(g_sq * bound / (bound - g_sq)))
}

/// `F(E0) = U0 + E0 - Sigma(-E0)`, the root function of the bound state.
/// `Sigma(-E0)` decreases as `E0` grows, so `F` is strictly increasing.
fn root_fn(params: &ModelParams, e0: f64) -> Result<f64> {
    let sigma = self_energy(params, EvaluationPoint::BelowThreshold(-e0))?;
    Ok(params.couplings.u0 + e0 - sigma.re)
}

/// Binding energy `E0 > 0` of the dressed composite, from the bare theory.
///
/// Solves `U0 + E0 = Sigma(-E0)` by bracketing plus bisection with secant
/// refinement. `g0 = 0` leaves the bare mass unshifted: a bound state then
/// exists only as the trivial `-U0` pole, which is not a dressed state, so
/// the search reports no root. A local form factor never yields a finite
/// `Sigma` on this path.
pub fn solve_bound_state(params: &ModelParams) -> Result<f64> {
    if params.couplings.g0 == 0.0 {
        return Err(Error::NoRoot);
    }
    // Bracket the root: F is increasing and F -> +inf with E0.
    let mut lo = 1e-12;
    let mut f_lo = root_fn(params, lo)?;
    if f_lo > 0.0 {
        // Sigma diverges as E0 -> 0+ so F(0+) = -inf; a positive value this
        // close to threshold means the root sits below any representable
        // binding energy.
        return Err(Error::NoRoot);
    }
    let mut hi = 1.0;
    let mut f_hi = root_fn(params, hi)?;
    while f_hi < 0.0 {
        lo = hi;
        f_lo = f_hi;
        hi *= 10.0;
        if hi > 1e300 {
            return Err(Error::NoRoot);
        }
        f_hi = root_fn(params, hi)?;
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    // Bisection with a secant candidate when it lands inside the bracket.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
        let x = if secant.is_finite()
            && secant > lo
            && secant < hi
            && (secant - mid).abs() < 0.4 * (hi - lo)
        {
            secant
        } else {
            mid
        };
        let fx = root_fn(params, x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if hi - lo <= 1e-12 * hi {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `-E0 + Sigma(-E0)`: the bare internal energy `U0` that places the bound
/// state at `E0` under the given regulator. Inverse of `solve_bound_state`.
pub fn bare_internal_energy(params: &ModelParams, e0: f64) -> Result<f64> {
    if !(e0 > 0.0 && e0.is_finite()) {
        return Err(Error::InvalidBoundState(e0));
    }
    let sigma = self_energy(params, EvaluationPoint::BelowThreshold(-e0))?;
    Ok(-e0 + sigma.re)
}

/// Contact-limit coupling ratio `lambda = g0^2 / U0`, the combination that
/// stays meaningful when both factors diverge. Requires a repulsive bare
/// core `U0 > 0`.
pub fn contact_lambda(g0_sq: f64, u0: f64) -> Result<f64> {
    if !(u0 > 0.0 && u0.is_finite()) {
        return Err(Error::NonPositiveU0(u0));
    }
    if !(g0_sq >= 0.0 && g0_sq.is_finite()) {
        return Err(Error::NegativeCoupling(g0_sq));
    }
    Ok(g0_sq / u0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FormFactor;

    #[test]
    fn coupling_map_round_trips_and_saturates() {
        let (mu, e0) = (0.5, 1.0);
        let bound = 2.0 * PI * e0 / mu;
        for g0_sq in [0.0, 0.3, 2.0, 50.0, 1e4] {
            let g_sq = renormalized_coupling_sq(g0_sq, mu, e0);
            assert!(g_sq <= g0_sq);
            assert!(g_sq < bound);
            match bare_coupling_sq(g_sq, mu, e0).unwrap() {
                BareCouplingSq::Finite(back) => {
                    assert!(
                        (back - g0_sq).abs() <= 1e-10 * g0_sq.max(1.0),
                        "{g0_sq} -> {back}"
                    )
                }
                BareCouplingSq::Infinite => panic!("finite input saturated"),
            }
        }
        assert_eq!(
            bare_coupling_sq(bound, mu, e0).unwrap(),
            BareCouplingSq::Infinite
        );
        assert!(matches!(
            bare_coupling_sq(bound * 1.0001, mu, e0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn contact_params_carry_the_saturated_coupling() {
        let phys = PhysicalParams::contact(2.0, 0.5).unwrap();
        assert!(phys.is_contact());
        assert!((phys.g_sq() - 2.0 * PI * 2.0 / 0.5).abs() <= 1e-14);
    }

    #[test]
    fn physical_params_validation() {
        assert!(matches!(
            PhysicalParams::new(-1.0, 0.5, BareCouplingSq::Infinite),
            Err(Error::InvalidBoundState(_))
        ));
        assert!(matches!(
            PhysicalParams::new(1.0, 0.0, BareCouplingSq::Infinite),
            Err(Error::NonPositiveMass { .. })
        ));
        assert!(matches!(
            PhysicalParams::new(1.0, 0.5, BareCouplingSq::Finite(-2.0)),
            Err(Error::NegativeCoupling(_))
        ));
    }

    #[test]
    fn bound_state_matches_the_frozen_sharp_value() {
        // mu = 1/2, g0^2 = 2 pi, Lambda = 10, U0 = 2:
        // E0 solves U0 + E0 = (1/2) ln(1 + 100/E0); mpmath gives
        // 0.57883759947598246856.
        let p = ModelParams::new(
            1.0,
            1.0,
            2.0,
            (2.0 * PI).sqrt(),
            FormFactor::SharpCutoff { lambda: 10.0 },
        )
        .unwrap();
        let e0 = solve_bound_state(&p).unwrap();
        assert!(
            (e0 - 0.578_837_599_475_982_5).abs() <= 1e-10 * e0,
            "got {e0}"
        );
    }

    #[test]
    fn bound_state_inverts_bare_internal_energy() {
        for ff in [
            FormFactor::SharpCutoff { lambda: 7.0 },
            FormFactor::Gaussian { lambda: 3.0 },
        ] {
            for e0_target in [0.013, 0.9, 47.0] {
                let probe = ModelParams::new(1.0, 0.75, 0.0, 1.3, ff).unwrap();
                let u0 = bare_internal_energy(&probe, e0_target).unwrap();
                let p = ModelParams::new(1.0, 0.75, u0, 1.3, ff).unwrap();
                let e0 = solve_bound_state(&p).unwrap();
                assert!(
                    (e0 - e0_target).abs() <= 1e-10 * e0_target,
                    "{ff:?}: {e0} vs {e0_target}"
                );
            }
        }
    }

    #[test]
    fn bound_state_requires_interaction() {
        let p =
            ModelParams::new(1.0, 1.0, 2.0, 0.0, FormFactor::SharpCutoff { lambda: 10.0 }).unwrap();
        assert!(matches!(solve_bound_state(&p), Err(Error::NoRoot)));
    }

    #[test]
    fn bound_state_rejects_the_local_form_factor() {
        let p = ModelParams::new(1.0, 1.0, 2.0, 1.0, FormFactor::Local).unwrap();
        assert!(matches!(
            solve_bound_state(&p),
            Err(Error::DivergentIntegral)
        ));
    }

    #[test]
    fn contact_lambda_requires_repulsive_core() {
        assert!(matches!(
            contact_lambda(4.0, 0.0),
            Err(Error::NonPositiveU0(_))
        ));
        assert!(matches!(
            contact_lambda(4.0, -1.0),
            Err(Error::NonPositiveU0(_))
        ));
        assert_eq!(contact_lambda(4.0, 2.0).unwrap(), 2.0);
    }

    #[test]
    fn frozen_lambda_ratio_at_the_sharp_bound_state() {
        // Same parameters as the frozen bound state: lambda = g0^2/U0 = pi.
        let lambda = contact_lambda(2.0 * PI, 2.0).unwrap();
        assert!((lambda - PI).abs() <= 1e-15);
    }
}
