//! The closed-form (anti-)self-dual one-instanton family.
//!
//! SD_lambda(x) = Im(lambda^2 x dxbar / (1 + lambda^2 |x|^2)) with curvature
//! lambda^2 dx^dxbar / (1 + lambda^2 |x|^2)^2, purely self-dual, and the
//! mirrored ASD_lambda with dxbar^dx. Also the gauge-rotated form of SD that
//! appears on the gluing annulus, and the exact partial energies.

use crate::fields::{ConnJacobian, ConnectionField, Decay};
use crate::forms::{dxbardx, dxdxbar, Su2OneForm, Su2TwoForm, Vec4};
use crate::quat::ImQuat;

/// Which of the two oriented instanton families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Sd,
    Asd,
}

/// Concentration parameter; the instanton has scale 1/lambda.
#[derive(Debug, Clone, Copy)]
pub struct InstantonParams {
    pub lambda: f64,
    pub kind: Kind,
}

impl InstantonParams {
    /// The connection of this family member; the mirror kinds share one code
    /// path up to quaternion conjugation.
    pub fn field(&self) -> ConnectionField {
        match self.kind {
            Kind::Sd => sd_lambda(self.lambda),
            Kind::Asd => asd_lambda(self.lambda),
        }
    }

    pub fn curvature(&self, x: Vec4) -> Su2TwoForm {
        match self.kind {
            Kind::Sd => sd_curvature(self.lambda, x),
            Kind::Asd => asd_curvature(self.lambda, x),
        }
    }
}

fn check_lambda(lambda: f64) {
    assert!(lambda > 0.0 && lambda.is_finite(), "lambda must be positive");
}

/// Component SD^m(x) = lambda^2 Im(x conj(e_m)) / (1 + lambda^2 |x|^2).
fn sd_eval(lambda: f64, x: Vec4) -> Su2OneForm {
    let q = x.as_quat();
    let w = lambda * lambda / (1.0 + lambda * lambda * x.norm2());
    let mut a = [ImQuat::ZERO; 4];
    for m in 0..4 {
        a[m] = (q * Vec4::basis_quat(m).conj()).im().scaled(w);
    }
    Su2OneForm(a)
}

fn sd_jacobian(lambda: f64, x: Vec4) -> ConnJacobian {
    let q = x.as_quat();
    let l2 = lambda * lambda;
    let denom = 1.0 + l2 * x.norm2();
    let w = l2 / denom;
    let mut jac = [[ImQuat::ZERO; 4]; 4];
    for m in 0..4 {
        let em_bar = Vec4::basis_quat(m).conj();
        let base = (q * em_bar).im();
        for l in 0..4 {
            let d_im = (Vec4::basis_quat(l) * em_bar).im();
            // d_l [w] = -w * 2 l2 x_l / denom
            let dw = -w * 2.0 * l2 * x.0[l] / denom;
            jac[l][m] = d_im.scaled(w) + base.scaled(dw);
        }
    }
    jac
}

fn asd_eval(lambda: f64, x: Vec4) -> Su2OneForm {
    let qbar = x.as_quat().conj();
    let w = lambda * lambda / (1.0 + lambda * lambda * x.norm2());
    let mut a = [ImQuat::ZERO; 4];
    for m in 0..4 {
        a[m] = (qbar * Vec4::basis_quat(m)).im().scaled(w);
    }
    Su2OneForm(a)
}

fn asd_jacobian(lambda: f64, x: Vec4) -> ConnJacobian {
    let qbar = x.as_quat().conj();
    let l2 = lambda * lambda;
    let denom = 1.0 + l2 * x.norm2();
    let w = l2 / denom;
    let mut jac = [[ImQuat::ZERO; 4]; 4];
    for m in 0..4 {
        let em = Vec4::basis_quat(m);
        let base = (qbar * em).im();
        for l in 0..4 {
            let d_im = (Vec4::basis_quat(l).conj() * em).im();
            let dw = -w * 2.0 * l2 * x.0[l] / denom;
            jac[l][m] = d_im.scaled(w) + base.scaled(dw);
        }
    }
    jac
}

/// The self-dual instanton at concentration lambda, in radial gauge, with
/// analytic jacobian.
pub fn sd_lambda(lambda: f64) -> ConnectionField {
    check_lambda(lambda);
    ConnectionField::new(move |x| sd_eval(lambda, x), Decay::InstantonLike)
        .with_jacobian(move |x| sd_jacobian(lambda, x))
}

/// The anti-self-dual mirror, also radial with A(0) = 0.
pub fn asd_lambda(lambda: f64) -> ConnectionField {
    check_lambda(lambda);
    ConnectionField::new(move |x| asd_eval(lambda, x), Decay::InstantonLike)
        .with_jacobian(move |x| asd_jacobian(lambda, x))
}

/// Exact curvature of SD_lambda.
pub fn sd_curvature(lambda: f64, x: Vec4) -> Su2TwoForm {
    check_lambda(lambda);
    let l2 = lambda * lambda;
    let d = 1.0 + l2 * x.norm2();
    dxdxbar().scaled(l2 / (d * d))
}

/// Exact curvature of ASD_lambda.
pub fn asd_curvature(lambda: f64, x: Vec4) -> Su2TwoForm {
    check_lambda(lambda);
    let l2 = lambda * lambda;
    let d = 1.0 + l2 * x.norm2();
    dxbardx().scaled(l2 / (d * d))
}

/// Pointwise value of the gauge-rotated instanton
/// -(1/(1 + lambda^2 |x|^2)) d(xbar/|x|) (x/|x|), singular at the origin.
/// Componentwise this is -Im(conj(e_m) x) / (|x|^2 (1 + lambda^2 |x|^2)).
pub fn sd_tilde_at(lambda: f64, x: Vec4) -> Su2OneForm {
    let q = x.as_quat();
    let r2 = x.norm2();
    let w = -1.0 / (r2 * (1.0 + lambda * lambda * r2));
    let mut a = [ImQuat::ZERO; 4];
    for m in 0..4 {
        a[m] = (Vec4::basis_quat(m).conj() * q).im().scaled(w);
    }
    Su2OneForm(a)
}

fn sd_tilde_jacobian(lambda: f64, x: Vec4) -> ConnJacobian {
    let q = x.as_quat();
    let r2 = x.norm2();
    let l2 = lambda * lambda;
    let denom = r2 * (1.0 + l2 * r2);
    let w = -1.0 / denom;
    // d_l w = w^2 * d_l denom = w^2 * 2 x_l (1 + 2 l2 r2)
    let mut jac = [[ImQuat::ZERO; 4]; 4];
    for m in 0..4 {
        let em_bar = Vec4::basis_quat(m).conj();
        let base = (em_bar * q).im();
        for l in 0..4 {
            let dw = w * w * 2.0 * x.0[l] * (1.0 + 2.0 * l2 * r2);
            jac[l][m] = (em_bar * Vec4::basis_quat(l)).im().scaled(w) + base.scaled(dw);
        }
    }
    jac
}

/// The instanton in the singular gauge of the gluing, as a field.
pub fn sd_tilde(lambda: f64) -> ConnectionField {
    check_lambda(lambda);
    ConnectionField::new(move |x| sd_tilde_at(lambda, x), Decay::InstantonLike)
        .with_jacobian(move |x| sd_tilde_jacobian(lambda, x))
        .singular_at_origin()
}

/// Energy fraction of SD_lambda outside the ball of rescaled radius z = lambda R:
/// tail(z) = 3/(1+z^2)^2 - 2/(1+z^2)^3, so tail(0) = 1 and tail = O(z^-4).
pub fn sd_tail(z: f64) -> f64 {
    if z.is_infinite() {
        return 0.0;
    }
    let u = 1.0 + z * z;
    3.0 / (u * u) - 2.0 / (u * u * u)
}

/// Exact partial Yang-Mills energy of SD_lambda (equally of ASD_lambda) over
/// the ball B_R: 8 pi^2 (1 - tail(lambda R)). Pass `f64::INFINITY` for the
/// whole space.
pub fn sd_energy_ball(lambda: f64, radius: f64) -> f64 {
    check_lambda(lambda);
    assert!(radius >= 0.0, "radius must be nonnegative");
    8.0 * std::f64::consts::PI.powi(2) * (1.0 - sd_tail(lambda * radius))
}
