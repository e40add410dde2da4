//! The energy-gain optimization layer: the six cutoff-profile integrals, the
//! phi(tau) window for the affine ramp, the optimal concentration constant,
//! the positive-frame chooser in R^3 and the constant gauge rotation built
//! from its adjoint lift.

use crate::fields::CutoffProfile;
use crate::forms::{dxbardx, RealTwoForm, Su2TwoForm};
use crate::quad::gauss_legendre_on;
use crate::quat::UnitQuat;
use crate::{Error, Result};

/// The six integrals over [tau, 1] entering the annulus-energy bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainCoefficients {
    /// int t eta'(t)^2 dt
    pub t_etap2: f64,
    /// int eta(t)^2 / t dt
    pub eta2_over_t: f64,
    /// int eta'(t) eta(t) dt (always 1/2 for a full ramp)
    pub etap_eta: f64,
    /// int eta'(t)^2 / t dt
    pub etap2_over_t: f64,
    /// int eta'(t) eta(t) / t^2 dt
    pub etap_eta_over_t2: f64,
    /// int eta'(t)^2 / t^3 dt
    pub etap2_over_t3: f64,
}

/// Gauss-Legendre quadrature of the six profile integrals, one panel per
/// closed-form piece of the profile.
pub fn gain_coefficients(profile: &CutoffProfile, quad_n: usize) -> GainCoefficients {
    let tau = profile.tau();
    assert!(tau > 0.0, "profile must have tau > 0");
    let mut edges = vec![tau];
    edges.extend(profile.quad_breaks());
    edges.push(1.0);
    let mut c = GainCoefficients {
        t_etap2: 0.0,
        eta2_over_t: 0.0,
        etap_eta: 0.0,
        etap2_over_t: 0.0,
        etap_eta_over_t2: 0.0,
        etap2_over_t3: 0.0,
    };
    for pair in edges.windows(2) {
        let (ts, ws) = gauss_legendre_on(quad_n.max(8), pair[0], pair[1]);
        for (&t, &w) in ts.iter().zip(&ws) {
            let e = profile.eta(t);
            let d = profile.eta_prime(t);
            c.t_etap2 += w * t * d * d;
            c.eta2_over_t += w * e * e / t;
            c.etap_eta += w * d * e;
            c.etap2_over_t += w * d * d / t;
            c.etap_eta_over_t2 += w * d * e / (t * t);
            c.etap2_over_t3 += w * d * d / (t * t * t);
        }
    }
    c
}

/// Exact affine-ramp coefficients, used as the oracle for the quadrature path.
pub fn affine_coefficients(tau: f64) -> GainCoefficients {
    let om = 1.0 - tau;
    let log = (1.0 / tau).ln();
    GainCoefficients {
        t_etap2: (1.0 + tau) / (2.0 * om),
        eta2_over_t: (0.5 - 2.0 * tau + 1.5 * tau * tau + tau * tau * log) / (om * om),
        etap_eta: 0.5,
        etap2_over_t: log / (om * om),
        etap_eta_over_t2: (tau - 1.0 + log) / (om * om),
        etap2_over_t3: (1.0 - tau * tau) / (2.0 * tau * tau * om * om),
    }
}

/// phi(tau, eta) = -(X + 2Y)^2 / (36 Z) + T/2 + 2U - 1 where T, U, X, Y, Z
/// are the bracket integrals; negative values certify a strict energy gain
/// in the worst case.
pub fn phi_general(profile: &CutoffProfile, quad_n: usize) -> f64 {
    let c = gain_coefficients(profile, quad_n);
    phi_from_coefficients(&c)
}

pub fn phi_from_coefficients(c: &GainCoefficients) -> f64 {
    let x2y = c.etap2_over_t + 2.0 * c.etap_eta_over_t2;
    -x2y * x2y / (36.0 * c.etap2_over_t3) + 0.5 * c.t_etap2 + 2.0 * c.eta2_over_t - 1.0
}

/// Closed form of phi for the affine ramp eta0(t) = (t - tau)/(1 - tau):
/// -2 tau^2 ((3/(2(1-tau))) log(1/tau) - 1)^2 / (9 (1 - tau^2))
/// + 2 ((5 - 11 tau)/(8(1-tau)) + tau^2 log(1/tau)/(1-tau)^2 - 1/2).
pub fn phi_closed_affine(tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParam(format!("tau must lie in (0,1); got {tau}")));
    }
    let om = 1.0 - tau;
    let log = (1.0 / tau).ln();
    let first = -2.0 * tau * tau * (1.5 / om * log - 1.0).powi(2) / (9.0 * (1.0 - tau * tau));
    let second = 2.0 * ((5.0 - 11.0 * tau) / (8.0 * om) + tau * tau * log / (om * om) - 0.5);
    Ok(first + second)
}

/// The exact annulus-energy bracket: the leading coefficient of
/// (pi^2 rho^4 / 2) in the predicted annulus integral, as a function of the
/// squared SD/ASD projections of F(0), the pairing
/// s = <g0 dxbar^dx g0^-1, P_- F(0)> and the concentration constant c0.
///
/// The cross coefficient multiplying int eta' eta is 1, not 1/sqrt(2): the
/// pointwise polarization |P+F|^2 - |P-F|^2 = 2 sum <F_radial, F_tangential>
/// over the moving frame fixes the constant, and the quadrature of the mixed
/// S^3 integral confirms it.
pub fn bracket_bc(c: &GainCoefficients, p_plus_norm2: f64, p_minus_norm2: f64, s: f64, c0: f64) -> f64 {
    let base = 0.25 * c.t_etap2 + c.eta2_over_t;
    let cross = c.etap_eta;
    (base - cross) * p_plus_norm2 + (base + cross) * p_minus_norm2
        - c0 * (0.5 * c.etap2_over_t + c.etap_eta_over_t2) * s
        + 12.0 * c0 * c0 * c.etap2_over_t3
}

/// The worst-case bracket after the pointwise positivity estimate and the
/// lower bound s >= (4/sqrt(3)) |P_- F(0)|, including the -|P_- F(0)|^2 term
/// from the removed ball energy; its minimum over c0 is phi * |P_- F(0)|^2.
pub fn worst_case_bracket(c: &GainCoefficients, p_minus_norm2: f64, c0: f64) -> f64 {
    let n = p_minus_norm2.sqrt();
    (0.5 * c.t_etap2 + 2.0 * c.eta2_over_t - 1.0) * p_minus_norm2
        - (2.0 * c0 / 3.0_f64.sqrt()) * (c.etap2_over_t + 2.0 * c.etap_eta_over_t2) * n
        + 12.0 * c0 * c0 * c.etap2_over_t3
}

/// Minimizer of the bracket over c0 at fixed pairing s > 0:
/// c0* = s ((1/2) X + Y) / (24 Z).
pub fn optimal_c0(c: &GainCoefficients, s: f64) -> Result<f64> {
    if c.etap2_over_t3 == 0.0 {
        return Err(Error::InvalidParam("profile has no ramp (int eta'^2/t^3 = 0)".into()));
    }
    if s <= 0.0 {
        return Err(Error::InvalidParam(format!("pairing s must be positive; got {s}")));
    }
    Ok(s * (0.5 * c.etap2_over_t + c.etap_eta_over_t2) / (24.0 * c.etap2_over_t3))
}

/// A positive orthonormal basis (e1, e2, e3) with
/// a.e1 + b.e2 + c.e3 >= sqrt(|a|^2 + |b|^2 + |c|^2) / sqrt(3).
/// Follows the constructive proof: align with the largest input, complete,
/// flip the other two if their contribution is negative.
pub fn lm_r3_frame(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> [[f64; 3]; 3] {
    let norm2 = |v: [f64; 3]| v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let dot = |u: [f64; 3], v: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let cross = |u: [f64; 3], v: [f64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let inputs = [a, b, c];
    let pivot = (0..3)
        .max_by(|&p, &q| norm2(inputs[p]).partial_cmp(&norm2(inputs[q])).unwrap())
        .unwrap();
    if norm2(inputs[pivot]) == 0.0 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    let scale = 1.0 / norm2(inputs[pivot]).sqrt();
    let e_p = [
        inputs[pivot][0] * scale,
        inputs[pivot][1] * scale,
        inputs[pivot][2] * scale,
    ];
    // Complete e_p to a positive basis: pick the coordinate axis least aligned
    // with it, orthogonalize, close with the cross product.
    let axis = {
        let mags = [e_p[0].abs(), e_p[1].abs(), e_p[2].abs()];
        let mut best = 0;
        for l in 1..3 {
            if mags[l] < mags[best] {
                best = l;
            }
        }
        let mut v = [0.0; 3];
        v[best] = 1.0;
        v
    };
    let proj = dot(axis, e_p);
    let mut u = [axis[0] - proj * e_p[0], axis[1] - proj * e_p[1], axis[2] - proj * e_p[2]];
    let un = norm2(u).sqrt();
    for v in &mut u {
        *v /= un;
    }
    let w = cross(e_p, u);
    // Place (e_p, u, w) cyclically so the basis stays positive and slot
    // `pivot` holds e_p.
    let mut basis = [[0.0; 3]; 3];
    basis[pivot] = e_p;
    basis[(pivot + 1) % 3] = u;
    basis[(pivot + 2) % 3] = w;
    let rest = dot(inputs[(pivot + 1) % 3], basis[(pivot + 1) % 3])
        + dot(inputs[(pivot + 2) % 3], basis[(pivot + 2) % 3]);
    if rest < 0.0 {
        for l in 0..3 {
            basis[(pivot + 1) % 3][l] = -basis[(pivot + 1) % 3][l];
            basis[(pivot + 2) % 3][l] = -basis[(pivot + 2) % 3][l];
        }
    }
    basis
}

/// Achieved pairing sum a.e1 + b.e2 + c.e3 for a frame.
pub fn frame_pairing(a: [f64; 3], b: [f64; 3], c: [f64; 3], frame: &[[f64; 3]; 3]) -> f64 {
    let dot = |u: [f64; 3], v: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    dot(a, frame[0]) + dot(b, frame[1]) + dot(c, frame[2])
}

/// Decomposition of a unit anti-self-dual su(2) 2-form along the constant
/// frame: u = a w-_i + b w-_j + c w-_k with a, b, c imaginary quaternions.
fn asd_components(u: &Su2TwoForm) -> [[f64; 3]; 3] {
    let frame = RealTwoForm::omega_minus();
    let mut out = [[0.0; 3]; 3];
    for (slot, w) in frame.iter().enumerate() {
        // Coefficient = sum_n u_n w_n over the six component slots.
        let mut coef = [0.0; 3];
        for n in 0..6 {
            coef[0] += u.0[n].i * w.0[n];
            coef[1] += u.0[n].j * w.0[n];
            coef[2] += u.0[n].k * w.0[n];
        }
        out[slot] = coef;
    }
    out
}

/// Constant gauge rotation g0 realizing
/// <g0 dxbar^dx g0^-1, P_- F(0)> >= (4/sqrt(3)) |P_- F(0)|.
///
/// The anti-self-dual direction of F(0) is decomposed along the constant
/// frame, the R^3 frame chooser is run on the three coefficient vectors and
/// the resulting rotation is lifted to SU(2).
pub fn choose_g0(f0: &Su2TwoForm) -> Result<UnitQuat> {
    let pm = f0.p_minus();
    let n2 = pm.norm2();
    if n2 <= 0.0 {
        return Err(Error::Precondition("choose_g0 needs P_- F(0) != 0".into()));
    }
    let unit = pm.scaled(1.0 / n2.sqrt());
    let abc = asd_components(&unit);
    let frame = lm_r3_frame(abc[0], abc[1], abc[2]);
    // g0 i g0^-1 = e1 etc.: the rotation matrix has columns e1, e2, e3.
    let mut r = [[0.0; 3]; 3];
    for col in 0..3 {
        for row in 0..3 {
            r[row][col] = frame[col][row];
        }
    }
    UnitQuat::from_rotation(&r)
}

/// The pairing s = <g0 dxbar^dx g0^-1, P_- F0>.
pub fn g0_pairing(f0: &Su2TwoForm, g0: UnitQuat) -> f64 {
    dxbardx().adjoint(g0).inner(f0.p_minus())
}

/// C-infinity profile from mollifying the affine ramp; converges to the ramp
/// as the width shrinks.
pub fn smooth_profile(tau: f64, width: f64) -> Result<CutoffProfile> {
    CutoffProfile::mollified_affine(tau, width)
}
