//! Numerical SU(2) Yang-Mills on R^4: instanton gluing and the associated
//! energy bookkeeping.
//!
//! The library implements, with quaternionic arithmetic throughout:
//!
//! * su(2)-valued exterior algebra on R^4 with Hodge star and the
//!   self-dual / anti-self-dual splitting ([`forms`]),
//! * connection fields, curvature, gauge changes (constant, smooth and the
//!   degree-one singular one), and the exponential/radial gauge ([`fields`]),
//! * the closed-form one-instanton family and its rescalings ([`instanton`]),
//! * quadrature on S^3, balls, annuli and all of R^4, Yang-Mills energies
//!   and Chern numbers by bulk or boundary Chern-Simons integrals ([`quad`]),
//! * the two instanton-insertion constructions (thin-annulus and two-cutoff)
//!   together with their measured and predicted energy differences ([`glue`]),
//! * the gain optimization layer: cutoff-profile integrals, the phi(tau)
//!   window, the optimal concentration constant and the constant gauge
//!   rotation chooser ([`gainopt`]).
//!
//! Norm conventions follow the 2x2 matrix trace, so the imaginary units
//! have |i|^2 = |j|^2 = |k|^2 = 2; see [`quat`].

pub mod cli;
pub mod fields;
pub mod forms;
pub mod gainopt;
pub mod glue;
pub mod instanton;
pub mod quad;
pub mod quat;

use thiserror::Error;

/// Errors surfaced by constructors, gauge operations and integrators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion is not unit (|q| deviates by {0:.3e})")]
    NonUnitQuaternion(f64),
    #[error("matrix is not a rotation: {0}")]
    NotARotation(String),
    #[error("evaluation domain contains the declared singular point")]
    SingularPoint,
    #[error("gauge field has no jacobian; gauge_transform needs one")]
    MissingJacobian,
    #[error("parallel transport drifted off SU(2) by {0:.3e} (> 1e-8); refine ode steps")]
    GaugeDrift(f64),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
pub(crate) mod testutil {
    use crate::forms::{Su2TwoForm, Vec4};
    use crate::quat::{ImQuat, Quat, UnitQuat};
    use rand::Rng;

    pub fn rand_quat(rng: &mut impl Rng) -> Quat {
        Quat::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    pub fn rand_im(rng: &mut impl Rng) -> ImQuat {
        ImQuat::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    pub fn rand_unit(rng: &mut impl Rng) -> UnitQuat {
        loop {
            let q = rand_quat(rng);
            if q.norm2_euclid() > 0.01 {
                return UnitQuat::renormalized(q);
            }
        }
    }

    pub fn rand_two_form(rng: &mut impl Rng) -> Su2TwoForm {
        let mut c = [ImQuat::ZERO; 6];
        for v in &mut c {
            *v = rand_im(rng);
        }
        Su2TwoForm(c)
    }

    /// A random point bounded away from the origin.
    pub fn rand_point(rng: &mut impl Rng) -> Vec4 {
        loop {
            let x = Vec4::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if x.norm() > 0.1 {
                return x;
            }
        }
    }
}
