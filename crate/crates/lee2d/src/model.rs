//! Model parameters: masses, couplings, form factors, kinematics.

use crate::error::{Error, Result};

/// Masses of the two elementary particles and the derived combinations.
///
/// The composite mass obeys the Galilean (Bargmann) additivity rule
/// `m_v = m_n + m_theta`; `mu` is the reduced mass of the pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassSpectrum {
    /// Mass of the `N` particle.
    pub m_n: f64,
    /// Mass of the `theta` particle.
    pub m_theta: f64,
    /// Mass of the composite `V`, fixed to `m_n + m_theta`.
    pub m_v: f64,
    /// Reduced mass `m_n * m_theta / (m_n + m_theta)`.
    pub mu: f64,
}

impl MassSpectrum {
    pub fn new(m_n: f64, m_theta: f64) -> Result<Self> {
        if !(m_n > 0.0 && m_theta > 0.0 && m_n.is_finite() && m_theta.is_finite()) {
            return Err(Error::NonPositiveMass { m_n, m_theta });
        }
        let m_v = m_n + m_theta;
        Ok(Self {
            m_n,
            m_theta,
            m_v,
            mu: m_n * m_theta / m_v,
        })
    }
}

/// Momentum-space vertex form factor, real and normalized to `f(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FormFactor {
    /// No regulator, `f == 1`. The bare self-energy integral diverges
    /// logarithmically with this choice; it is only usable through the
    /// renormalized path.
    Local,
    /// Step cutoff: `f(w) = 1` for `w < lambda`, else `0`.
    SharpCutoff { lambda: f64 },
    /// Smooth cutoff: `f(w) = exp(-w^2 / (2 lambda^2))`.
    Gaussian { lambda: f64 },
}

impl FormFactor {
    /// Evaluates `f` at relative momentum `omega >= 0`.
    pub fn eval(&self, omega: f64) -> f64 {
        match *self {
            FormFactor::Local => 1.0,
            FormFactor::SharpCutoff { lambda } => {
                if omega < lambda {
                    1.0
                } else {
                    0.0
                }
            }
            FormFactor::Gaussian { lambda } => (-omega * omega / (2.0 * lambda * lambda)).exp(),
        }
    }

    /// Squared form factor as a function of `s = omega^2`, the variable the
    /// radial integrals run over.
    pub(crate) fn eval_sq_s(&self, s: f64) -> f64 {
        match *self {
            FormFactor::Local => 1.0,
            FormFactor::SharpCutoff { lambda } => {
                if s < lambda * lambda {
                    1.0
                } else {
                    0.0
                }
            }
            FormFactor::Gaussian { lambda } => (-s / (lambda * lambda)).exp(),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match *self {
            FormFactor::Local => Ok(()),
            FormFactor::SharpCutoff { lambda } | FormFactor::Gaussian { lambda } => {
                if lambda > 0.0 && lambda.is_finite() {
                    Ok(())
                } else {
                    Err(Error::NonPositiveCutoff(lambda))
                }
            }
        }
    }

    pub(crate) fn is_local(&self) -> bool {
        matches!(self, FormFactor::Local)
    }
}

/// Bare couplings of the `V <-> N theta` vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BareCouplings {
    /// Bare internal energy of `V` (any sign).
    pub u0: f64,
    /// Bare coupling strength, `g0 >= 0`.
    pub g0: f64,
}

/// Full bare parameter set of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub masses: MassSpectrum,
    pub couplings: BareCouplings,
    pub form_factor: FormFactor,
}

impl ModelParams {
    pub fn new(m_n: f64, m_theta: f64, u0: f64, g0: f64, form_factor: FormFactor) -> Result<Self> {
        let masses = MassSpectrum::new(m_n, m_theta)?;
        if !(g0 >= 0.0 && g0.is_finite()) {
            return Err(Error::NegativeCoupling(g0));
        }
        if !u0.is_finite() {
            return Err(Error::InvalidEvaluationPoint("U0 must be finite"));
        }
        form_factor.validate()?;
        Ok(Self {
            masses,
            couplings: BareCouplings { u0, g0 },
            form_factor,
        })
    }

    /// Squared bare coupling, the combination every integral carries.
    pub fn g0_sq(&self) -> f64 {
        self.couplings.g0 * self.couplings.g0
    }

    /// Total energy of an `N theta` pair: center-of-mass kinetic term plus
    /// relative kinetic term.
    pub fn total_energy(&self, kin: &KinematicState) -> f64 {
        kin.p_total * kin.p_total / (2.0 * self.masses.m_v)
            + kin.k_rel * kin.k_rel / (2.0 * self.masses.mu)
    }
}

/// Kinematic state of a pair: total momentum magnitude and relative momentum
/// magnitude. `p_total >= 0`, `k_rel > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicState {
    pub p_total: f64,
    pub k_rel: f64,
}

impl KinematicState {
    /// Pair at rest in the center-of-mass frame.
    pub fn at_rest(k_rel: f64) -> Self {
        debug_assert!(k_rel > 0.0);
        Self {
            p_total: 0.0,
            k_rel,
        }
    }

    pub fn boosted(p_total: f64, k_rel: f64) -> Self {
        debug_assert!(p_total >= 0.0 && k_rel > 0.0);
        Self { p_total, k_rel }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_mass_satisfies_harmonic_relation() {
        let ms = MassSpectrum::new(1.7, 0.4).unwrap();
        let lhs = 1.0 / ms.mu;
        let rhs = 1.0 / ms.m_n + 1.0 / ms.m_theta;
        assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs());
        assert_eq!(ms.m_v, 2.1);
    }

    #[test]
    fn equal_masses_give_half_reduced_mass() {
        let ms = MassSpectrum::new(1.0, 1.0).unwrap();
        assert_eq!(ms.mu, 0.5);
        assert_eq!(ms.m_v, 2.0);
    }

    #[test]
    fn invalid_masses_are_rejected() {
        assert!(matches!(
            MassSpectrum::new(0.0, 1.0),
            Err(Error::NonPositiveMass { .. })
        ));
        assert!(matches!(
            MassSpectrum::new(1.0, -2.0),
            Err(Error::NonPositiveMass { .. })
        ));
        assert!(matches!(
            MassSpectrum::new(f64::NAN, 1.0),
            Err(Error::NonPositiveMass { .. })
        ));
    }

    #[test]
    fn form_factor_normalization_at_zero() {
        for ff in [
            FormFactor::Local,
            FormFactor::SharpCutoff { lambda: 3.0 },
            FormFactor::Gaussian { lambda: 3.0 },
        ] {
            assert_eq!(ff.eval(0.0), 1.0);
        }
    }

    #[test]
    fn sharp_cutoff_steps_at_lambda() {
        let ff = FormFactor::SharpCutoff { lambda: 2.0 };
        assert_eq!(ff.eval(1.999_999), 1.0);
        assert_eq!(ff.eval(2.0), 0.0);
        assert_eq!(ff.eval(5.0), 0.0);
    }

    #[test]
    fn gaussian_at_cutoff_is_exp_minus_half() {
        let ff = FormFactor::Gaussian { lambda: 4.0 };
        let got = ff.eval(4.0);
        let want = (-0.5f64).exp();
        assert!((got - want).abs() <= 1e-15);
    }

    #[test]
    fn gaussian_sq_in_s_matches_eval_squared() {
        let ff = FormFactor::Gaussian { lambda: 2.5 };
        for w in [0.0, 0.3, 1.0, 2.5, 7.0] {
            let a = ff.eval_sq_s(w * w);
            let b = ff.eval(w) * ff.eval(w);
            assert!((a - b).abs() <= 1e-15 * (1.0 + b));
        }
    }

    #[test]
    fn bad_cutoffs_are_rejected() {
        assert!(matches!(
            ModelParams::new(1.0, 1.0, 0.0, 1.0, FormFactor::SharpCutoff { lambda: 0.0 }),
            Err(Error::NonPositiveCutoff(_))
        ));
        assert!(matches!(
            ModelParams::new(
                1.0,
                1.0,
                0.0,
                1.0,
                FormFactor::Gaussian {
                    lambda: f64::INFINITY
                }
            ),
            Err(Error::NonPositiveCutoff(_))
        ));
    }

    #[test]
    fn negative_coupling_rejected() {
        assert!(matches!(
            ModelParams::new(1.0, 1.0, 0.0, -0.5, FormFactor::Local),
            Err(Error::NegativeCoupling(_))
        ));
    }

    #[test]
    fn total_energy_splits_into_cm_and_relative_parts() {
        // M = m = 1: calM = 2, mu = 1/2. P = 2, k = 1 gives 2^2/4 + 1/1 = 2.
        let p = ModelParams::new(1.0, 1.0, 0.0, 1.0, FormFactor::Local).unwrap();
        let e = p.total_energy(&KinematicState::boosted(2.0, 1.0));
        assert!((e - 2.0).abs() <= 1e-15);
        // At rest only the relative term survives.
        let e0 = p.total_energy(&KinematicState::at_rest(1.0));
        assert!((e0 - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn total_energy_monotone_in_each_argument() {
        let p = ModelParams::new(1.3, 0.7, 0.0, 1.0, FormFactor::Local).unwrap();
        let ks: Vec<f64> = (1..40).map(|i| 0.1 * i as f64).collect();
        for w in ks.windows(2) {
            let lo = p.total_energy(&KinematicState::at_rest(w[0]));
            let hi = p.total_energy(&KinematicState::at_rest(w[1]));
            assert!(hi > lo);
            let lo_p = p.total_energy(&KinematicState::boosted(w[0], 1.0));
            let hi_p = p.total_energy(&KinematicState::boosted(w[1], 1.0));
            assert!(hi_p > lo_p);
        }
    }
}
