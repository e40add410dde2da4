//! Instanton insertion by gluing, and the associated energy bookkeeping.
//!
//! Two constructions are provided. The thin-annulus one interpolates, across
//! B_rho \ B_{tau rho}, between the radial pullback of the (gauge-rotated,
//! degree-one-transformed) background and a concentrated instanton with
//! lambda^2 = 1/(c0 rho^4). The two-cutoff one interpolates at separated
//! scales rho^a and rho^b with lambda^2 = 1/rho^4. In both cases the energy
//! difference obeys an exact identity
//!
//!   YM(glued) - YM(A) = 8 pi^2 + 2 int_ann |P_- F_check|^2 - 2 int_ball |P_- F_A|^2,
//!
//! which is what the evaluators compute, alongside an independent direct
//! energy difference used as a quadrature residual diagnostic.

use crate::fields::{curvature, d_of, fd_jacobian, radial_pullback, ConnectionField, CutoffProfile};
use crate::forms::{asd_frame_at, dxbardx, frame_vectors, Su2OneForm, Su2TwoForm, Vec4};
use crate::gainopt::{bracket_bc, g0_pairing, gain_coefficients};
use crate::instanton::{sd_energy_ball, sd_tilde_at};
use crate::quad::{annulus_integrate, ball_integrate, cs_boundary_integral, S3Rule};
use crate::quat::{ImQuat, UnitQuat};
use crate::{Error, Result};

/// Parameters of the thin-annulus construction.
#[derive(Debug, Clone)]
pub struct GlueParamsBC {
    pub rho: f64,
    pub c0: f64,
    pub g0: UnitQuat,
    pub profile: CutoffProfile,
}

impl GlueParamsBC {
    pub fn new(rho: f64, c0: f64, g0: UnitQuat, profile: CutoffProfile) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::InvalidParam(format!("rho must be positive; got {rho}")));
        }
        if !(c0 > 0.0) {
            return Err(Error::InvalidParam(format!("c0 must be positive; got {c0}")));
        }
        if !(profile.tau() > 0.0 && profile.tau() < 1.0) {
            return Err(Error::InvalidParam("profile must be a genuine ramp".into()));
        }
        Ok(GlueParamsBC { rho, c0, g0, profile })
    }

    pub fn tau(&self) -> f64 {
        self.profile.tau()
    }

    /// lambda^2 = 1/(c0 rho^4).
    pub fn lambda(&self) -> f64 {
        1.0 / (self.c0 * self.rho.powi(4)).sqrt()
    }
}

/// Parameters of the two-cutoff construction, with the exponent window
/// 3/4 < b < 1 < a < 4/3.
#[derive(Debug, Clone)]
pub struct GlueParamsTaubes {
    pub rho: f64,
    pub a: f64,
    pub b: f64,
    pub g0: UnitQuat,
    pub profile: CutoffProfile,
}

impl GlueParamsTaubes {
    pub fn new(rho: f64, a: f64, b: f64, g0: UnitQuat, profile: CutoffProfile) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidParam(format!("rho must lie in (0,1); got {rho}")));
        }
        if !(0.75 < b && b < 1.0 && 1.0 < a && a < 4.0 / 3.0) {
            return Err(Error::InvalidParam(format!(
                "exponents must satisfy 3/4 < b < 1 < a < 4/3; got a={a}, b={b}"
            )));
        }
        if !(profile.tau() > 0.0 && profile.tau() < 1.0) {
            return Err(Error::InvalidParam("profile must be a genuine ramp".into()));
        }
        Ok(GlueParamsTaubes { rho, a, b, g0, profile })
    }

    /// lambda^2 = 1/rho^4.
    pub fn lambda(&self) -> f64 {
        1.0 / (self.rho * self.rho)
    }

    /// Error exponent of the leading-order expansion: the correction to the
    /// rho^4 coefficient is O(rho^delta), delta = min(b, 4(a-1), 4(1-b)).
    pub fn delta(&self) -> f64 {
        self.b.min(4.0 * (self.a - 1.0)).min(4.0 * (1.0 - self.b))
    }

    /// Inner radius of the interpolation region (inside it the glued field is
    /// exactly the rotated instanton).
    pub fn r_inner(&self) -> f64 {
        self.profile.tau() * self.rho.powf(self.a)
    }

    pub fn r_outer(&self) -> f64 {
        self.rho.powf(self.b)
    }

    /// Whether the two cutoff derivatives have disjoint supports at this rho.
    pub fn supports_disjoint(&self) -> bool {
        self.rho.powf(self.a) <= self.profile.tau() * self.rho.powf(self.b)
    }
}

/// Output record of one gluing experiment.
#[derive(Debug, Clone)]
pub struct GlueResult {
    pub rho: f64,
    /// YM(glued) - YM(A) through the exact identity.
    pub delta_ym: f64,
    /// The same difference assembled from direct energies (instanton core in
    /// closed form, annulus and ball by quadrature).
    pub delta_ym_direct: f64,
    /// 2 int_ann |P_- F_check|^2 - 2 int_ball |P_- F_A|^2 (= delta_ym - 8 pi^2).
    pub gain_measured: f64,
    /// Leading-order prediction of the same quantity.
    pub gain_predicted: f64,
    /// Boundary Chern-Simons jump, when requested.
    pub chern_jump: Option<f64>,
    pub ann_integral: f64,
    pub ball_integral: f64,
    /// |delta_ym - delta_ym_direct|, a quadrature-consistency diagnostic.
    pub residual: f64,
    pub supports_disjoint: bool,
}

fn check_background(a: &ConnectionField, radii: &[f64]) -> Result<Su2TwoForm> {
    if a.singular_at_origin {
        return Err(Error::Precondition("background must be smooth at the origin".into()));
    }
    let a0 = a.at(Vec4::ZERO).norm2().sqrt();
    if a0 > 1e-10 {
        return Err(Error::Precondition(format!(
            "background must vanish at the origin (|A(0)| = {a0:.3e})"
        )));
    }
    // Radial gauge spot check on a few spheres.
    let dirs = [
        Vec4::new(1.0, 0.0, 0.0, 0.0),
        Vec4::new(0.0, 1.0, 0.0, 0.0),
        Vec4::new(0.5, -0.5, 0.5, -0.5),
        Vec4::new(0.2, 0.4, -0.8, 0.4),
    ];
    for &r in radii {
        for d in dirs {
            let x = d.unit().scaled(r);
            let res = a.at(x).contract(x.unit()).norm_euclid();
            if res > 1e-8 {
                return Err(Error::Precondition(format!(
                    "background is not in radial gauge (|A . d_r| = {res:.3e} at |x| = {r})"
                )));
            }
        }
    }
    let f0 = curvature(a, Vec4::ZERO)?;
    if f0.norm2() == 0.0 {
        return Err(Error::Precondition("background needs F(0) != 0".into()));
    }
    Ok(f0)
}

/// The interpolated field of the thin-annulus construction in the smooth
/// gauge: eta g0^-1 (underline A) g0 + (1 - eta) sd_tilde, where underline A
/// is the radial pullback inside B_rho and A itself outside.
fn check_field_bc(a: &ConnectionField, p: &GlueParamsBC) -> ConnectionField {
    let rho = p.rho;
    let lambda = p.lambda();
    let g0inv = p.g0.inverse();
    let profile = p.profile.clone();
    let pulled = radial_pullback(a, rho);
    let outer = a.clone();
    let mut seams = vec![rho];
    if !profile.is_smooth() {
        seams.push(profile.tau() * rho);
    }
    ConnectionField::new(
        move |x| {
            let r = x.norm();
            let eta = profile.eta(r / rho);
            let mut out = Su2OneForm::ZERO;
            if eta > 0.0 {
                let base = if r < rho { pulled.at(x) } else { outer.at(x) };
                out = out + base.adjoint(g0inv).scaled(eta);
            }
            if eta < 1.0 {
                out = out + sd_tilde_at(lambda, x).scaled(1.0 - eta);
            }
            out
        },
        a.decay,
    )
    .singular_at_origin()
    .with_seams(seams)
}

/// Builds the thin-annulus glued pair (A_hat, A_check). A_hat is the field in
/// the bundle-changing gauge (smooth across the origin after undoing the
/// degree-one change); A_check is the smooth representative actually
/// integrated on the annulus.
pub fn build_bc_glued(
    a: &ConnectionField,
    p: &GlueParamsBC,
) -> Result<(ConnectionField, ConnectionField)> {
    check_background(a, &[0.5 * p.rho, p.rho, 2.0 * p.rho])?;
    let acheck = check_field_bc(a, p);
    let ahat = crate::fields::degree_one_gauge(&acheck);
    Ok((ahat, acheck))
}

/// The two-cutoff interpolated field: eta_{rho^a} g0^-1 A g0 + (1 - eta_{rho^b}) sd_tilde.
fn check_field_taubes(a: &ConnectionField, p: &GlueParamsTaubes) -> ConnectionField {
    let ra = p.rho.powf(p.a);
    let rb = p.rho.powf(p.b);
    let lambda = p.lambda();
    let g0inv = p.g0.inverse();
    let profile = p.profile.clone();
    let background = a.clone();
    let seams = if profile.is_smooth() {
        Vec::new()
    } else {
        vec![profile.tau() * ra, ra, profile.tau() * rb, rb]
    };
    ConnectionField::new(
        move |x| {
            let r = x.norm();
            let eta_a = profile.eta(r / ra);
            let eta_b = profile.eta(r / rb);
            let mut out = Su2OneForm::ZERO;
            if eta_a > 0.0 {
                out = out + background.at(x).adjoint(g0inv).scaled(eta_a);
            }
            if eta_b < 1.0 {
                out = out + sd_tilde_at(lambda, x).scaled(1.0 - eta_b);
            }
            out
        },
        a.decay,
    )
    .singular_at_origin()
    .with_seams(seams)
}

/// Builds the two-cutoff glued pair (A_hat, A_check).
pub fn build_taubes_glued(
    a: &ConnectionField,
    p: &GlueParamsTaubes,
) -> Result<(ConnectionField, ConnectionField)> {
    check_background(a, &[p.r_inner(), p.rho, p.r_outer()])?;
    let acheck = check_field_taubes(a, p);
    let ahat = crate::fields::degree_one_gauge(&acheck);
    Ok((ahat, acheck))
}

fn pminus_density(field: &ConnectionField) -> impl Fn(Vec4) -> f64 + Send + Sync + '_ {
    move |x| curvature(field, x).map(|f| f.p_minus().norm2()).unwrap_or(f64::NAN)
}

fn full_density(field: &ConnectionField) -> impl Fn(Vec4) -> f64 + Send + Sync + '_ {
    move |x| curvature(field, x).map(|f| f.norm2()).unwrap_or(f64::NAN)
}

struct DeltaPieces {
    ann_pm: f64,
    ball_pm: f64,
    delta: f64,
    delta_direct: f64,
}

fn energy_delta_pieces(
    a: &ConnectionField,
    acheck: &ConnectionField,
    lambda: f64,
    r_in: f64,
    r_out: f64,
    radial_n: usize,
    sphere: &S3Rule,
) -> Result<DeltaPieces> {
    let eight_pi2 = 8.0 * std::f64::consts::PI.powi(2);
    let ann_pm = annulus_integrate(pminus_density(acheck), r_in, r_out, radial_n, sphere)?;
    let ball_pm = ball_integrate(pminus_density(a), r_out, radial_n, sphere);
    let delta = eight_pi2 + 2.0 * (ann_pm - ball_pm);
    // Direct route: closed-form instanton core + annulus + ball energies.
    let core = sd_energy_ball(lambda, r_in);
    let ann_full = annulus_integrate(full_density(acheck), r_in, r_out, radial_n, sphere)?;
    let ball_full = ball_integrate(full_density(a), r_out, radial_n, sphere);
    let delta_direct = core + ann_full - ball_full;
    Ok(DeltaPieces { ann_pm, ball_pm, delta, delta_direct })
}

/// Measured and predicted energy difference for the thin-annulus gluing.
///
/// `delta_ym` uses the exact identity; `gain_predicted` assembles the
/// leading-order annulus bracket from the profile integrals at the given c0
/// and shares the measured ball term.
pub fn energy_delta_bc(
    a: &ConnectionField,
    p: &GlueParamsBC,
    radial_n: usize,
    sphere: &S3Rule,
    with_chern: bool,
) -> Result<GlueResult> {
    let f0 = check_background(a, &[0.5 * p.rho, p.rho, 2.0 * p.rho])?;
    let acheck = check_field_bc(a, p);
    let pieces = energy_delta_pieces(
        a,
        &acheck,
        p.lambda(),
        p.tau() * p.rho,
        p.rho,
        radial_n,
        sphere,
    )?;
    let pred_ann = gain_prediction_bc(&f0, p, 256);
    let chern_jump = if with_chern {
        Some(chern_jump_boundary(a, &crate::fields::degree_one_gauge(&acheck), 2.0 * p.rho, sphere)?)
    } else {
        None
    };
    Ok(GlueResult {
        rho: p.rho,
        delta_ym: pieces.delta,
        delta_ym_direct: pieces.delta_direct,
        gain_measured: 2.0 * (pieces.ann_pm - pieces.ball_pm),
        gain_predicted: 2.0 * (pred_ann - pieces.ball_pm),
        chern_jump,
        ann_integral: pieces.ann_pm,
        ball_integral: pieces.ball_pm,
        residual: (pieces.delta - pieces.delta_direct).abs(),
        supports_disjoint: true,
    })
}

/// Measured and predicted energy difference for the two-cutoff gluing; the
/// prediction is the leading term -2 pi^2 rho^4 <P_- F(0), g0 dxbar^dx g0^-1>.
///
/// On the constant: the annulus integrand's main contribution is the doubled
/// cross term 2 <eta_a P_-(dA^{g0}), -eta'_b/(4 lambda^2 |x|^3) dxbar^dx>,
/// and the shell integral of eta'_b/(4 lambda^2 |x|^3) <P_- dA, dxbar^dx>
/// equals (pi^2/2) rho^4 s + O(rho^{4+b}); doubling and the overall factor 2
/// of the energy identity give -2 pi^2 rho^4 s. Fits of the measured gain
/// (two-basis, with the known O(rho^{4+delta}) correction absorbed) land
/// within a few percent of this constant and far from half of it.
pub fn energy_delta_taubes(
    a: &ConnectionField,
    p: &GlueParamsTaubes,
    radial_n: usize,
    sphere: &S3Rule,
    with_chern: bool,
) -> Result<GlueResult> {
    let f0 = check_background(a, &[p.r_inner(), p.rho, p.r_outer()])?;
    let acheck = check_field_taubes(a, p);
    let pieces = energy_delta_pieces(
        a,
        &acheck,
        p.lambda(),
        p.r_inner(),
        p.r_outer(),
        radial_n,
        sphere,
    )?;
    let s = g0_pairing(&f0, p.g0);
    let gain_predicted = -2.0 * std::f64::consts::PI.powi(2) * p.rho.powi(4) * s;
    let chern_jump = if with_chern {
        Some(chern_jump_boundary(
            a,
            &crate::fields::degree_one_gauge(&acheck),
            2.0 * p.r_outer(),
            sphere,
        )?)
    } else {
        None
    };
    Ok(GlueResult {
        rho: p.rho,
        delta_ym: pieces.delta,
        delta_ym_direct: pieces.delta_direct,
        gain_measured: 2.0 * (pieces.ann_pm - pieces.ball_pm),
        gain_predicted,
        chern_jump,
        ann_integral: pieces.ann_pm,
        ball_integral: pieces.ball_pm,
        residual: (pieces.delta - pieces.delta_direct).abs(),
        supports_disjoint: p.supports_disjoint(),
    })
}

/// Leading-order prediction of the annulus integral
/// int_{B_rho \ B_{tau rho}} |P_- F_check|^2 = (pi^2 rho^4 / 2) * bracket,
/// with the bracket assembled from the six profile integrals, the SD/ASD
/// projections of F(0) = `f0`, and the pairing against the rotated constant
/// anti-self-dual form at the parameters' c0.
pub fn gain_prediction_bc(f0: &Su2TwoForm, p: &GlueParamsBC, quad_n: usize) -> f64 {
    let coeffs = gain_coefficients(&p.profile, quad_n);
    let s = g0_pairing(f0, p.g0);
    let bracket = bracket_bc(&coeffs, f0.p_plus().norm2(), f0.p_minus().norm2(), s, p.c0);
    0.5 * std::f64::consts::PI.powi(2) * p.rho.powi(4) * bracket
}

/// Boundary Chern-Simons jump: CS integral of the glued field minus that of
/// the background over a sphere outside the gluing region.
pub fn chern_jump_boundary(
    a: &ConnectionField,
    ahat: &ConnectionField,
    radius: f64,
    sphere: &S3Rule,
) -> Result<f64> {
    let hat = cs_boundary_integral(ahat, radius, sphere)?;
    let base = cs_boundary_integral(a, radius, sphere)?;
    Ok(hat - base)
}

/// Leading-order model of P_-(d A_check) on the annulus: the eta' term along
/// the pointwise anti-self-dual frame, the eta term along the same frame with
/// the tangential curvature contractions, and the instanton's 1/lambda^2 term.
pub fn pminus_dcheck_leading(
    f0: &Su2TwoForm,
    g0: UnitQuat,
    p: &GlueParamsBC,
    x: Vec4,
) -> Su2TwoForm {
    let r = x.norm();
    assert!(r > 0.0, "model needs x != 0");
    let rho = p.rho;
    let t = r / rho;
    let eta = p.profile.eta(t);
    let eta_prime_radial = p.profile.eta_prime(t) / rho;
    let frame = frame_vectors(x).expect("x != 0");
    let omega = asd_frame_at(x).expect("x != 0");
    let g0inv = g0.inverse();
    let radial: [ImQuat; 3] = [
        g0inv.adjoint(f0.eval(frame[0], frame[1])),
        g0inv.adjoint(f0.eval(frame[0], frame[2])),
        g0inv.adjoint(f0.eval(frame[0], frame[3])),
    ];
    let tangential: [ImQuat; 3] = [
        g0inv.adjoint(f0.eval(frame[2], frame[3])),
        g0inv.adjoint(f0.eval(frame[3], frame[1])),
        g0inv.adjoint(f0.eval(frame[1], frame[2])),
    ];
    let mut out = Su2TwoForm::ZERO;
    let c1 = eta_prime_radial * rho * rho / (2.0 * std::f64::consts::SQRT_2 * r);
    let c2 = -eta * rho * rho / (std::f64::consts::SQRT_2 * r * r);
    for l in 0..3 {
        out = out + omega[l].tensor(radial[l]).scaled(c1) + omega[l].tensor(tangential[l]).scaled(c2);
    }
    let lambda = p.lambda();
    out = out + dxbardx().scaled(-eta_prime_radial / (4.0 * lambda * lambda * r * r * r));
    out
}

/// Numerically computed P_-(d A_check) at a point (no bracket term).
pub fn pminus_dcheck_numeric(acheck: &ConnectionField, x: Vec4) -> Su2TwoForm {
    let jac = fd_jacobian(acheck, x);
    d_of(&jac).p_minus()
}

/// The four S^3 integrals behind the annulus expansion, by quadrature and in
/// closed form: the squared radial contractions, the mixed radial-tangential
/// pairing, and the two frame-weighted pairings against g0 dxbar^dx g0^-1.
#[derive(Debug, Clone, Copy)]
pub struct S3LemmaIntegrals {
    /// int sum_l |F(0)(d_r, e_l)|^2 = pi^2 |F(0)|^2
    pub radial_sq: (f64, f64),
    /// int sum cyclic <F(0)(d_r, I d_r), F(0)(J d_r, K d_r)> =
    /// pi^2 (|P+ F|^2 - |P- F|^2). The constant follows from the pointwise
    /// polarization identity 2 sum <F_rad, F_tan> = |P+F|^2 - |P-F|^2 in the
    /// moving frame; the integrand is constant on the sphere.
    pub mixed: (f64, f64),
    /// int <g0 dxbar dx g0^-1, F(0)(d_r, I d_r) w-_i(x)> =
    /// (sqrt2/3) pi^2 <g0 dxbar dx g0^-1, P_- F(0)>
    pub frame_radial: (f64, f64),
    /// Same with F(0)(J d_r, K d_r): the negative of the above.
    pub frame_tangential: (f64, f64),
}

pub fn s3_lemma_integrals(f0: &Su2TwoForm, g0: UnitQuat, rule: &S3Rule) -> S3LemmaIntegrals {
    let rotated = dxbardx().adjoint(g0);
    let pairing = rotated.inner(f0.p_minus());
    let pi2 = std::f64::consts::PI.powi(2);

    let radial_quad = rule.integrate(|sigma| {
        let fr = frame_vectors(sigma).unwrap();
        (1..4).map(|l| f0.eval(fr[0], fr[l]).norm2()).sum()
    });
    let mixed_quad = rule.integrate(|sigma| {
        let fr = frame_vectors(sigma).unwrap();
        f0.eval(fr[0], fr[1]).inner(f0.eval(fr[2], fr[3]))
            + f0.eval(fr[0], fr[2]).inner(f0.eval(fr[3], fr[1]))
            + f0.eval(fr[0], fr[3]).inner(f0.eval(fr[1], fr[2]))
    });
    let frame_radial_quad = rule.integrate(|sigma| {
        let fr = frame_vectors(sigma).unwrap();
        let omega = asd_frame_at(sigma).unwrap();
        rotated.pair(f0.eval(fr[0], fr[1]), omega[0])
    });
    let frame_tangential_quad = rule.integrate(|sigma| {
        let fr = frame_vectors(sigma).unwrap();
        let omega = asd_frame_at(sigma).unwrap();
        rotated.pair(f0.eval(fr[2], fr[3]), omega[0])
    });

    S3LemmaIntegrals {
        radial_sq: (radial_quad, pi2 * f0.norm2()),
        mixed: (mixed_quad, pi2 * (f0.p_plus().norm2() - f0.p_minus().norm2())),
        frame_radial: (frame_radial_quad, std::f64::consts::SQRT_2 / 3.0 * pi2 * pairing),
        frame_tangential: (
            frame_tangential_quad,
            -std::f64::consts::SQRT_2 / 3.0 * pi2 * pairing,
        ),
    }
}
