//! Connection fields on R^4: curvature evaluation, gauge changes (constant,
//! smooth, degree-one singular), the exponential/radial gauge built by
//! parallel transport along rays, radial pullbacks and cutoff profiles.
//!
//! A [`ConnectionField`] is a pure evaluation closure plus metadata: an
//! optional analytic jacobian, a decay class, a declared singular set (empty
//! or the origin) and "seam" radii where the field is continuous but not
//! smooth. Evaluators never guard the singular point themselves; curvature
//! and the integrators consult the metadata and refuse the domain instead.

use crate::forms::{frame_covectors, frame_vectors, Su2OneForm, Su2TwoForm, Vec4};
use crate::quad::{gauss_legendre_on, S3Rule};
use crate::quat::{ImQuat, Quat, UnitQuat};
use crate::{Error, Result};
use std::sync::Arc;

/// Decay class of the curvature, used when integrating over all of R^4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decay {
    CompactCurvature,
    InstantonLike,
    GenericFiniteEnergy,
}

/// Jacobian entries `jac[l][m] = d_l A^m`.
pub type ConnJacobian = [[ImQuat; 4]; 4];

type EvalFn = dyn Fn(Vec4) -> Su2OneForm + Send + Sync;
type JacFn = dyn Fn(Vec4) -> ConnJacobian + Send + Sync;

/// An su(2) connection one-form on R^4 as a pure evaluable map.
#[derive(Clone)]
pub struct ConnectionField {
    eval: Arc<EvalFn>,
    jac: Option<Arc<JacFn>>,
    pub decay: Decay,
    pub singular_at_origin: bool,
    /// Radii where the field is continuous but has a kink; finite-difference
    /// stencils shrink so they never straddle one.
    pub seam_radii: Vec<f64>,
}

impl ConnectionField {
    pub fn new<F>(eval: F, decay: Decay) -> Self
    where
        F: Fn(Vec4) -> Su2OneForm + Send + Sync + 'static,
    {
        ConnectionField {
            eval: Arc::new(eval),
            jac: None,
            decay,
            singular_at_origin: false,
            seam_radii: Vec::new(),
        }
    }

    pub fn with_jacobian<F>(mut self, jac: F) -> Self
    where
        F: Fn(Vec4) -> ConnJacobian + Send + Sync + 'static,
    {
        self.jac = Some(Arc::new(jac));
        self
    }

    pub fn singular_at_origin(mut self) -> Self {
        self.singular_at_origin = true;
        self
    }

    pub fn with_seams(mut self, radii: Vec<f64>) -> Self {
        self.seam_radii = radii;
        self
    }

    /// Drop the analytic jacobian, forcing finite-difference curvature.
    pub fn without_jacobian(&self) -> Self {
        let mut c = self.clone();
        c.jac = None;
        c
    }

    pub fn has_jacobian(&self) -> bool {
        self.jac.is_some()
    }

    pub fn at(&self, x: Vec4) -> Su2OneForm {
        (self.eval)(x)
    }

    pub fn jacobian_at(&self, x: Vec4) -> Option<ConnJacobian> {
        self.jac.as_ref().map(|j| j(x))
    }

    pub fn zero() -> Self {
        ConnectionField::new(|_| Su2OneForm::ZERO, Decay::CompactCurvature)
            .with_jacobian(|_| [[ImQuat::ZERO; 4]; 4])
    }

    /// Test connections by name: "zero", "sd:LAMBDA", "asd:LAMBDA",
    /// "poly-bump:P".
    pub fn by_name(name: &str) -> Result<Self> {
        let (kind, arg) = match name.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (name, None),
        };
        let parse = |a: Option<&str>, what: &str| -> Result<f64> {
            let s = a.ok_or_else(|| Error::InvalidParam(format!("{what} needs a parameter")))?;
            s.parse::<f64>()
                .map_err(|_| Error::InvalidParam(format!("bad {what} parameter: {s}")))
        };
        match kind {
            "zero" => Ok(ConnectionField::zero()),
            "sd" => {
                let l = parse(arg, "sd")?;
                if l <= 0.0 {
                    return Err(Error::InvalidParam("sd: lambda must be > 0".into()));
                }
                Ok(crate::instanton::sd_lambda(l))
            }
            "asd" => {
                let l = parse(arg, "asd")?;
                if l <= 0.0 {
                    return Err(Error::InvalidParam("asd: lambda must be > 0".into()));
                }
                Ok(crate::instanton::asd_lambda(l))
            }
            "poly-bump" => Ok(poly_bump(parse(arg, "poly-bump")?)),
            other => Err(Error::InvalidParam(format!("unknown connection '{other}'"))),
        }
    }
}

/// Polynomial-times-bump connection with curvature supported in the unit
/// ball, A(0) = 0, F(0) != 0, P_- F(0) != 0 and a nonzero radial component.
pub fn poly_bump(p: f64) -> ConnectionField {
    let bump = |r2: f64| -> f64 {
        if r2 >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - r2)).exp()
        }
    };
    let poly = move |x: Vec4| -> [ImQuat; 4] {
        [
            ImQuat::new(x.0[1] + p * x.0[2], 0.0, 0.0),
            ImQuat::new(0.0, x.0[2], 0.0),
            ImQuat::new(0.0, 0.0, x.0[3]),
            ImQuat::new(0.0, x.0[0], 0.0),
        ]
    };
    let eval = move |x: Vec4| -> Su2OneForm {
        let b = bump(x.norm2());
        let q = poly(x);
        Su2OneForm([q[0].scaled(b), q[1].scaled(b), q[2].scaled(b), q[3].scaled(b)])
    };
    let jac = move |x: Vec4| -> ConnJacobian {
        let r2 = x.norm2();
        let b = bump(r2);
        let mut out = [[ImQuat::ZERO; 4]; 4];
        if b == 0.0 {
            return out;
        }
        let q = poly(x);
        // d_l b = -2 x_l b / (1 - r2)^2
        let s = 1.0 - r2;
        let db = -2.0 * b / (s * s);
        let mut dpoly = [[ImQuat::ZERO; 4]; 4];
        dpoly[1][0] = ImQuat::new(1.0, 0.0, 0.0);
        dpoly[2][0] = ImQuat::new(p, 0.0, 0.0);
        dpoly[2][1] = ImQuat::new(0.0, 1.0, 0.0);
        dpoly[3][2] = ImQuat::new(0.0, 0.0, 1.0);
        dpoly[0][3] = ImQuat::new(0.0, 1.0, 0.0);
        for l in 0..4 {
            for m in 0..4 {
                out[l][m] = q[m].scaled(db * x.0[l]) + dpoly[l][m].scaled(b);
            }
        }
        out
    };
    ConnectionField::new(eval, Decay::CompactCurvature).with_jacobian(jac)
}

/// Central-difference step at x, shrunk so the stencil stays clear of any
/// declared seam radius.
fn fd_step(a: &ConnectionField, x: Vec4) -> f64 {
    let r = x.norm();
    let mut h = 1e-5_f64.max(1e-5 * r);
    for &s in &a.seam_radii {
        let dist = (r - s).abs();
        if dist > 0.0 {
            h = h.min(0.45 * dist);
        }
    }
    h.max(1e-9)
}

fn fd_jacobian_step(a: &ConnectionField, x: Vec4, h: f64) -> ConnJacobian {
    let mut jac = [[ImQuat::ZERO; 4]; 4];
    for l in 0..4 {
        let mut xp = x;
        let mut xm = x;
        xp.0[l] += h;
        xm.0[l] -= h;
        let fp = a.at(xp);
        let fm = a.at(xm);
        for m in 0..4 {
            jac[l][m] = (fp.0[m] - fm.0[m]).scaled(0.5 / h);
        }
    }
    jac
}

/// Finite-difference jacobian: central differences with one Richardson level.
pub fn fd_jacobian(a: &ConnectionField, x: Vec4) -> ConnJacobian {
    let h = fd_step(a, x);
    let jh = fd_jacobian_step(a, x, h);
    let jh2 = fd_jacobian_step(a, x, 0.5 * h);
    let mut out = [[ImQuat::ZERO; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            out[l][m] = (jh2[l][m].scaled(4.0) - jh[l][m]).scaled(1.0 / 3.0);
        }
    }
    out
}

/// Curvature from a jacobian and the pointwise value:
/// F^{lm} = d_l A^m - d_m A^l + [A^l, A^m].
pub fn curvature_from(jac: &ConnJacobian, a: &Su2OneForm) -> Su2TwoForm {
    let mut c = [ImQuat::ZERO; 6];
    for (n, &(l, m)) in crate::forms::PAIRS.iter().enumerate() {
        c[n] = jac[l][m] - jac[m][l] + a.0[l].bracket(a.0[m]);
    }
    Su2TwoForm(c)
}

/// The antisymmetrized derivative dA alone, without the bracket term.
pub fn d_of(jac: &ConnJacobian) -> Su2TwoForm {
    let mut c = [ImQuat::ZERO; 6];
    for (n, &(l, m)) in crate::forms::PAIRS.iter().enumerate() {
        c[n] = jac[l][m] - jac[m][l];
    }
    Su2TwoForm(c)
}

/// Curvature of A at x, using the analytic jacobian when present and
/// Richardson-extrapolated central differences otherwise.
pub fn curvature(a: &ConnectionField, x: Vec4) -> Result<Su2TwoForm> {
    if a.singular_at_origin && x.norm2() == 0.0 {
        return Err(Error::SingularPoint);
    }
    let jac = match a.jacobian_at(x) {
        Some(j) => j,
        None => fd_jacobian(a, x),
    };
    Ok(curvature_from(&jac, &a.at(x)))
}

type GaugeEvalFn = dyn Fn(Vec4) -> UnitQuat + Send + Sync;
type GaugeJacFn = dyn Fn(Vec4) -> [Quat; 4] + Send + Sync;

/// A smooth SU(2)-valued gauge change.
#[derive(Clone)]
pub struct GaugeField {
    eval: Arc<GaugeEvalFn>,
    jac: Option<Arc<GaugeJacFn>>,
}

impl GaugeField {
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(Vec4) -> UnitQuat + Send + Sync + 'static,
    {
        GaugeField { eval: Arc::new(eval), jac: None }
    }

    pub fn with_jacobian<F>(mut self, jac: F) -> Self
    where
        F: Fn(Vec4) -> [Quat; 4] + Send + Sync + 'static,
    {
        self.jac = Some(Arc::new(jac));
        self
    }

    pub fn at(&self, x: Vec4) -> UnitQuat {
        (self.eval)(x)
    }

    pub fn jacobian_at(&self, x: Vec4) -> Option<[Quat; 4]> {
        self.jac.as_ref().map(|j| j(x))
    }

    pub fn constant(g: UnitQuat) -> Self {
        GaugeField::new(move |_| g).with_jacobian(|_| [Quat::ZERO; 4])
    }
}

/// Constant gauge change A -> g0^-1 A g0; curvature rotates the same way.
pub fn gauge_const(a: &ConnectionField, g0: UnitQuat) -> ConnectionField {
    let inner = a.clone();
    let inv = g0.inverse();
    let mut out = ConnectionField::new(move |x| inner.at(x).adjoint(inv), a.decay);
    if let Some(jac) = a.jac.clone() {
        out = out.with_jacobian(move |x| {
            let j = jac(x);
            let mut r = [[ImQuat::ZERO; 4]; 4];
            for l in 0..4 {
                for m in 0..4 {
                    r[l][m] = inv.adjoint(j[l][m]);
                }
            }
            r
        });
    }
    out.singular_at_origin = a.singular_at_origin;
    out.seam_radii = a.seam_radii.clone();
    out
}

/// Smooth gauge change A -> g^-1 A g + g^-1 dg. The gauge field must carry a
/// jacobian.
pub fn gauge_transform(a: &ConnectionField, g: &GaugeField) -> Result<ConnectionField> {
    if g.jac.is_none() {
        return Err(Error::MissingJacobian);
    }
    let inner = a.clone();
    let gf = g.clone();
    let mut out = ConnectionField::new(
        move |x| {
            let gv = gf.at(x).quat();
            let gbar = gv.conj();
            let dg = gf.jacobian_at(x).unwrap();
            let av = inner.at(x);
            let mut c = [ImQuat::ZERO; 4];
            for l in 0..4 {
                c[l] = (gbar * av.0[l].as_quat() * gv + gbar * dg[l]).im();
            }
            Su2OneForm(c)
        },
        a.decay,
    );
    out.singular_at_origin = a.singular_at_origin;
    out.seam_radii = a.seam_radii.clone();
    Ok(out)
}

/// The degree +1 gauge change, singular at the origin:
/// A -> (x/|x|) A (xbar/|x|) + (x/|x|) d(xbar/|x|). Preserves the radial
/// gauge. The inhomogeneous term is Im(x conj(e_l))/|x|^2.
pub fn degree_one_gauge(a: &ConnectionField) -> ConnectionField {
    let inner = a.clone();
    let mut out = ConnectionField::new(
        move |x| {
            let r2 = x.norm2();
            let u = UnitQuat::renormalized(x.as_quat());
            let av = inner.at(x);
            let mut c = [ImQuat::ZERO; 4];
            for l in 0..4 {
                let pure = (x.as_quat() * Vec4::basis_quat(l).conj()).im().scaled(1.0 / r2);
                c[l] = u.adjoint(av.0[l]) + pure;
            }
            Su2OneForm(c)
        },
        a.decay,
    )
    .singular_at_origin();
    out.seam_radii = a.seam_radii.clone();
    out
}

/// Differential of the quaternion exponential of an imaginary argument,
/// evaluated at u in the direction v.
fn dexp(u: ImQuat, v: ImQuat) -> Quat {
    let theta2 = u.i * u.i + u.j * u.j + u.k * u.k;
    let theta = theta2.sqrt();
    let uv = u.i * v.i + u.j * v.j + u.k * v.k;
    let (s_over, c_minus) = if theta < 1e-4 {
        // sin t / t and (t cos t - sin t)/t^3 by series
        (1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0, -1.0 / 3.0 + theta2 / 30.0)
    } else {
        let (s, c) = (theta.sin(), theta.cos());
        (s / theta, (theta * c - s) / (theta2 * theta))
    };
    let w = -s_over * uv;
    let vec = v.scaled(s_over) + u.scaled(c_minus * uv);
    Quat::new(w, vec.i, vec.j, vec.k)
}

/// Gauge change by g = exp(-sum_l x_l A^l(0)) making the result vanish at the
/// origin. Curvature norms are preserved pointwise.
pub fn normalize_origin(a: &ConnectionField) -> Result<ConnectionField> {
    if a.singular_at_origin {
        return Err(Error::Precondition("normalize_origin needs A smooth at 0".into()));
    }
    let a0 = a.at(Vec4::ZERO);
    let u_of = move |x: Vec4| -> ImQuat {
        let mut u = ImQuat::ZERO;
        for l in 0..4 {
            u = u - a0.0[l].scaled(x.0[l]);
        }
        u
    };
    let g = GaugeField::new(move |x| u_of(x).exp()).with_jacobian(move |x| {
        let u = u_of(x);
        [
            dexp(u, -a0.0[0]),
            dexp(u, -a0.0[1]),
            dexp(u, -a0.0[2]),
            dexp(u, -a0.0[3]),
        ]
    });
    gauge_transform(a, &g)
}

/// Parallel transport of the identity from the origin along the ray through
/// sigma = x/|x|, by `steps` RK4 steps on [0, r], renormalizing each step.
/// Returns the transport and the accumulated off-unit drift before each
/// renormalization.
fn transport_ray(a: &ConnectionField, sigma: Vec4, r: f64, steps: usize) -> (UnitQuat, f64) {
    if r == 0.0 {
        return (UnitQuat::ONE, 0.0);
    }
    let rhs = |t: f64, g: Quat| -> Quat {
        let c = a.at(sigma.scaled(t)).contract(sigma);
        (-c.as_quat()) * g
    };
    let h = r / steps as f64;
    let mut g = Quat::ONE;
    let mut drift = 0.0;
    for n in 0..steps {
        let t = n as f64 * h;
        let k1 = rhs(t, g);
        let k2 = rhs(t + 0.5 * h, g + k1.scaled(0.5 * h));
        let k3 = rhs(t + 0.5 * h, g + k2.scaled(0.5 * h));
        let k4 = rhs(t + h, g + k3.scaled(h));
        g = g + (k1 + k2.scaled(2.0) + k3.scaled(2.0) + k4).scaled(h / 6.0);
        let n2 = g.norm2_euclid().sqrt();
        drift += (n2 - 1.0).abs();
        g = g.scaled(1.0 / n2);
    }
    (UnitQuat::renormalized(g), drift)
}

/// Exponential (radial) gauge: solves d_r g = -(A(r sigma) . d_r) g along rays
/// with g(0) = 1, and returns the transporting gauge together with the
/// transformed connection, whose radial contraction vanishes.
///
/// The step count is fixed per ray regardless of radius so the numerical
/// solution varies smoothly with the evaluation point. The sphere rule is
/// used to validate unitarity drift at construction.
pub fn exp_gauge(
    a: &ConnectionField,
    r_max: f64,
    sphere: &S3Rule,
    ode_steps: usize,
) -> Result<(GaugeField, ConnectionField)> {
    if a.singular_at_origin {
        return Err(Error::Precondition("exp_gauge needs A smooth on the ball".into()));
    }
    let a0_norm = a.at(Vec4::ZERO).norm2().sqrt();
    if a0_norm > 1e-10 {
        return Err(Error::Precondition(format!(
            "exp_gauge needs A(0) = 0 (|A(0)| = {a0_norm:.3e}); apply normalize_origin first"
        )));
    }
    let steps = ode_steps.max(16);
    // Validate drift on the rays through the rule's nodes.
    let mut worst = 0.0_f64;
    for node in &sphere.nodes {
        let (_, drift) = transport_ray(a, *node, r_max, steps);
        worst = worst.max(drift);
    }
    if worst > 1e-8 {
        return Err(Error::GaugeDrift(worst));
    }

    let af = a.clone();
    let solve = move |x: Vec4| -> UnitQuat {
        let r = x.norm();
        if r == 0.0 {
            return UnitQuat::ONE;
        }
        transport_ray(&af, x.unit(), r, steps).0
    };
    let solve_for_gauge = solve.clone();
    let gauge = GaugeField::new(move |x| solve_for_gauge(x));

    let inner = a.clone();
    let transformed = ConnectionField::new(
        move |x| {
            let gv = solve(x).quat();
            let gbar = gv.conj();
            let av = inner.at(x);
            let h = 1e-6 * x.norm().max(0.05);
            let mut c = [ImQuat::ZERO; 4];
            for l in 0..4 {
                let mut xp = x;
                let mut xm = x;
                xp.0[l] += h;
                xm.0[l] -= h;
                let dg = (solve(xp).quat() - solve(xm).quat()).scaled(0.5 / h);
                c[l] = (gbar * av.0[l].as_quat() * gv + gbar * dg).im();
            }
            Su2OneForm(c)
        },
        a.decay,
    );
    Ok((gauge, transformed))
}

/// First-order model of a radial-gauge connection near the origin:
/// (|x|/2) sum_l F(0)(d_r, e_l) e*_l.
pub fn radial_expansion_model(f0: &Su2TwoForm, x: Vec4) -> Su2OneForm {
    if x.norm2() == 0.0 {
        return Su2OneForm::ZERO;
    }
    let r = x.norm();
    let frame = frame_vectors(x).expect("x != 0");
    let cov = frame_covectors(x).expect("x != 0");
    let mut c = [ImQuat::ZERO; 4];
    for l in 1..4 {
        let coef = f0.eval(frame[0], frame[l]).scaled(0.5 * r);
        for m in 0..4 {
            c[m] = c[m] + coef.scaled(cov[l][m]);
        }
    }
    Su2OneForm(c)
}

/// Reconstruction of a radial-gauge connection from its curvature:
/// A(r sigma) = r^-1 sum_l int_0^r F(t sigma)(d_r, e_l) t dt e*_l.
pub fn radial_reconstruction<F>(f: F, x: Vec4, quad_steps: usize) -> Su2OneForm
where
    F: Fn(Vec4) -> Su2TwoForm,
{
    let r = x.norm();
    if r == 0.0 {
        return Su2OneForm::ZERO;
    }
    let frame = frame_vectors(x).expect("x != 0");
    let cov = frame_covectors(x).expect("x != 0");
    let (nodes, weights) = gauss_legendre_on(quad_steps, 0.0, r);
    let sigma = x.unit();
    let mut c = [ImQuat::ZERO; 4];
    for l in 1..4 {
        let mut integral = ImQuat::ZERO;
        for (&t, &w) in nodes.iter().zip(&weights) {
            integral = integral + f(sigma.scaled(t)).eval(frame[0], frame[l]).scaled(w * t);
        }
        let coef = integral.scaled(1.0 / r);
        for m in 0..4 {
            c[m] = c[m] + coef.scaled(cov[l][m]);
        }
    }
    Su2OneForm(c)
}

/// Pullback of A under phi_rho(x) = rho x/|x|, defined away from the origin:
/// (phi* A)_l(x) = (rho/|x|) sum_m A_m(rho x/|x|) (delta_ml - x^_m x^_l).
/// Its radial contraction vanishes identically.
pub fn radial_pullback(a: &ConnectionField, rho: f64) -> ConnectionField {
    assert!(rho > 0.0, "rho must be positive");
    let inner = a.clone();
    ConnectionField::new(
        move |x| {
            let r = x.norm();
            let u = x.unit();
            let av = inner.at(u.scaled(rho));
            let radial = av.contract(u);
            let mut c = [ImQuat::ZERO; 4];
            for l in 0..4 {
                c[l] = (av.0[l] - radial.scaled(u.0[l])).scaled(rho / r);
            }
            Su2OneForm(c)
        },
        Decay::GenericFiniteEnergy,
    )
    .singular_at_origin()
}

/// Smooth ramp eta: 0 on [0, tau], 1 on [1, inf), monotone.
#[derive(Debug, Clone)]
pub enum CutoffProfile {
    /// Piecewise-linear ramp (t - tau)/(1 - tau); continuous, kinked at the ends.
    Affine { tau: f64 },
    /// C-infinity ramp built from exp(-1/t) partitions.
    SmoothStep { tau: f64 },
    /// C-infinity mollification of the affine ramp: the derivative is the
    /// affine slope times a smooth window that turns on over [tau, tau+w] and
    /// off over [1-w, 1]. Converges to the affine ramp as w -> 0.
    MollifiedAffine { tau: f64, width: f64, inv_mass: f64, left_mass: f64 },
    /// Degenerate eta == 1 everywhere (no instanton inserted); violates the
    /// ramp invariants and exists only to exercise the degenerate bookkeeping.
    #[doc(hidden)]
    ConstantOne,
}

fn window_chi(tau: f64, w: f64, t: f64) -> f64 {
    smoothstep((t - tau) / w) * smoothstep((1.0 - t) / w)
}

fn window_integral(tau: f64, w: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let (nodes, weights) = crate::quad::gauss_legendre_on(48, lo, hi);
    nodes
        .iter()
        .zip(&weights)
        .map(|(&t, &ww)| ww * window_chi(tau, w, t))
        .sum()
}

impl CutoffProfile {
    pub fn affine(tau: f64) -> Result<Self> {
        Self::check_tau(tau)?;
        Ok(CutoffProfile::Affine { tau })
    }

    pub fn smoothstep(tau: f64) -> Result<Self> {
        Self::check_tau(tau)?;
        Ok(CutoffProfile::SmoothStep { tau })
    }

    pub fn mollified_affine(tau: f64, width: f64) -> Result<Self> {
        Self::check_tau(tau)?;
        if !(width > 0.0 && width < (1.0 - tau) / 4.0) {
            return Err(Error::InvalidParam(format!(
                "mollifier width must lie in (0, (1-tau)/4); got {width}"
            )));
        }
        let left_mass = window_integral(tau, width, tau, tau + width);
        let right_mass = window_integral(tau, width, 1.0 - width, 1.0);
        let mass = left_mass + (1.0 - width - (tau + width)) + right_mass;
        Ok(CutoffProfile::MollifiedAffine {
            tau,
            width,
            inv_mass: 1.0 / mass,
            left_mass,
        })
    }

    #[doc(hidden)]
    pub fn constant_one() -> Self {
        CutoffProfile::ConstantOne
    }

    fn check_tau(tau: f64) -> Result<()> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::InvalidParam(format!("tau must lie in (0,1); got {tau}")));
        }
        Ok(())
    }

    pub fn tau(&self) -> f64 {
        match *self {
            CutoffProfile::Affine { tau }
            | CutoffProfile::SmoothStep { tau }
            | CutoffProfile::MollifiedAffine { tau, .. } => tau,
            CutoffProfile::ConstantOne => 0.0,
        }
    }

    /// True when eta is C^1 or better everywhere (no kink radii to guard).
    pub fn is_smooth(&self) -> bool {
        !matches!(self, CutoffProfile::Affine { .. })
    }

    /// Interior points of [tau, 1] where the profile switches between exact
    /// closed-form pieces; quadrature panels align with them.
    pub fn quad_breaks(&self) -> Vec<f64> {
        match *self {
            CutoffProfile::MollifiedAffine { tau, width, .. } => {
                vec![tau + width, 1.0 - width]
            }
            _ => Vec::new(),
        }
    }

    pub fn eta(&self, t: f64) -> f64 {
        match *self {
            CutoffProfile::ConstantOne => 1.0,
            CutoffProfile::Affine { tau } => ((t - tau) / (1.0 - tau)).clamp(0.0, 1.0),
            CutoffProfile::SmoothStep { tau } => smoothstep((t - tau) / (1.0 - tau)),
            CutoffProfile::MollifiedAffine { tau, width, inv_mass, left_mass } => {
                if t <= tau {
                    0.0
                } else if t >= 1.0 {
                    1.0
                } else if t < tau + width {
                    inv_mass * window_integral(tau, width, tau, t)
                } else if t <= 1.0 - width {
                    inv_mass * (left_mass + (t - tau - width))
                } else {
                    1.0 - inv_mass * window_integral(tau, width, t, 1.0)
                }
            }
        }
    }

    pub fn eta_prime(&self, t: f64) -> f64 {
        match *self {
            CutoffProfile::ConstantOne => 0.0,
            CutoffProfile::Affine { tau } => {
                if t > tau && t < 1.0 {
                    1.0 / (1.0 - tau)
                } else {
                    0.0
                }
            }
            CutoffProfile::SmoothStep { tau } => {
                smoothstep_prime((t - tau) / (1.0 - tau)) / (1.0 - tau)
            }
            CutoffProfile::MollifiedAffine { tau, width, inv_mass, .. } => {
                if t <= tau || t >= 1.0 {
                    0.0
                } else {
                    inv_mass * window_chi(tau, width, t)
                }
            }
        }
    }
}

fn smoothstep(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let b = (-1.0 / u).exp();
        let c = (-1.0 / (1.0 - u)).exp();
        b / (b + c)
    }
}

fn smoothstep_prime(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        let b = (-1.0 / u).exp();
        let c = (-1.0 / (1.0 - u)).exp();
        let bp = b / (u * u);
        let cp = -c / ((1.0 - u) * (1.0 - u));
        (bp * c - b * cp) / ((b + c) * (b + c))
    }
}


/// Scalar field eta(|x|/scale) with its gradient.
#[derive(Clone)]
pub struct ScalarCutoff {
    profile: CutoffProfile,
    scale: f64,
}

/// eta(|x|/scale) as a scalar field; gradient eta'(|x|/scale) x/(scale |x|).
pub fn cutoff_field(profile: &CutoffProfile, scale: f64) -> ScalarCutoff {
    assert!(scale > 0.0, "scale must be positive");
    ScalarCutoff { profile: profile.clone(), scale }
}

impl ScalarCutoff {
    pub fn value(&self, x: Vec4) -> f64 {
        self.profile.eta(x.norm() / self.scale)
    }

    pub fn gradient(&self, x: Vec4) -> Vec4 {
        let r = x.norm();
        if r == 0.0 {
            return Vec4::ZERO;
        }
        let d = self.profile.eta_prime(r / self.scale) / (self.scale * r);
        x.scaled(d)
    }
}
