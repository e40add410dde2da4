//! Verification suites: each check compares a numeric evaluation against a
//! closed form (or a proved bound) and prints one table row.

use super::fmt_f64;
use crate::fields::{
    curvature, degree_one_gauge, exp_gauge, poly_bump, radial_reconstruction, ConnectionField,
};
use crate::forms::{dxbardx, RealTwoForm, Su2TwoForm, Vec4};
use crate::gainopt::{choose_g0, frame_pairing, g0_pairing, lm_r3_frame};
use crate::glue::s3_lemma_integrals;
use crate::instanton::{asd_lambda, sd_curvature, sd_energy_ball, sd_lambda};
use crate::quad::{
    chern_number, cs_boundary_integral, s3_moment, s3_rule, ChernMethod, Domain, S3Rule,
};
use crate::quat::{ImQuat, UnitQuat};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// One verification row: |numeric - closed| must not exceed the tolerance.
pub struct CheckRow {
    pub name: &'static str,
    pub closed: f64,
    pub numeric: f64,
    pub tol: f64,
}

impl CheckRow {
    pub fn passes(&self) -> bool {
        (self.numeric - self.closed).abs() <= self.tol
    }
}

fn rand_im(rng: &mut ChaCha8Rng) -> ImQuat {
    ImQuat::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

fn rand_unit(rng: &mut ChaCha8Rng) -> UnitQuat {
    loop {
        let q = crate::quat::Quat::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if q.norm2_euclid() > 0.01 {
            return UnitQuat::renormalized(q);
        }
    }
}

fn rand_two_form(rng: &mut ChaCha8Rng) -> Su2TwoForm {
    let mut c = [ImQuat::ZERO; 6];
    for v in &mut c {
        *v = rand_im(rng);
    }
    Su2TwoForm(c)
}

fn rand_dir(rng: &mut ChaCha8Rng) -> Vec4 {
    loop {
        let x = Vec4::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if x.norm() > 0.1 {
            return x.unit();
        }
    }
}

pub fn algebra_suite(seed: u64) -> Vec<CheckRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();

    let ij = (crate::quat::Quat::I * crate::quat::Quat::J - crate::quat::Quat::K).norm2_euclid();
    rows.push(CheckRow { name: "quat: i j = k", closed: 0.0, numeric: ij.sqrt(), tol: 0.0 });
    let br = (ImQuat::I.bracket(ImQuat::J) - ImQuat::K.scaled(2.0)).norm_euclid();
    rows.push(CheckRow { name: "bracket [i,j] = 2k", closed: 0.0, numeric: br, tol: 0.0 });
    rows.push(CheckRow {
        name: "norm |i|^2 = 2",
        closed: 2.0,
        numeric: ImQuat::I.norm2(),
        tol: 0.0,
    });

    let mut jac_worst = 0.0_f64;
    let mut iso_worst = 0.0_f64;
    for _ in 0..1000 {
        let (p, q, r) = (rand_im(&mut rng), rand_im(&mut rng), rand_im(&mut rng));
        let jac = p.bracket(q.bracket(r)) + q.bracket(r.bracket(p)) + r.bracket(p.bracket(q));
        jac_worst = jac_worst.max(jac.norm_euclid());
        let g = rand_unit(&mut rng);
        iso_worst = iso_worst.max((g.adjoint(p).norm2() - p.norm2()).abs());
    }
    rows.push(CheckRow { name: "jacobi identity (1000 rnd)", closed: 0.0, numeric: jac_worst, tol: 1e-13 });
    rows.push(CheckRow { name: "adjoint isometry (1000 rnd)", closed: 0.0, numeric: iso_worst, tol: 1e-12 });

    let mut hom_worst = 0.0_f64;
    for _ in 0..200 {
        let g = rand_unit(&mut rng);
        let h = rand_unit(&mut rng);
        let gh = g.mul(h).so3();
        let (rg, rh) = (g.so3(), h.so3());
        for a in 0..3 {
            for b in 0..3 {
                let mut acc = 0.0;
                for c in 0..3 {
                    acc += rg[a][c] * rh[c][b];
                }
                hom_worst = hom_worst.max((gh[a][b] - acc).abs());
            }
        }
    }
    rows.push(CheckRow { name: "so3 homomorphism (200 rnd)", closed: 0.0, numeric: hom_worst, tol: 1e-12 });

    let mut star_worst = 0.0_f64;
    let mut trfa_worst = 0.0_f64;
    for _ in 0..1000 {
        let f = rand_two_form(&mut rng);
        star_worst = star_worst.max((f.hodge_star().hodge_star() - f).norm2());
        trfa_worst = trfa_worst
            .max((f.tr_wedge(f) + f.p_plus().norm2() - f.p_minus().norm2()).abs());
    }
    rows.push(CheckRow { name: "star^2 = id (1000 rnd)", closed: 0.0, numeric: star_worst, tol: 1e-14 });
    rows.push(CheckRow { name: "tr(F^F) = -|P+|^2+|P-|^2 (1000 rnd)", closed: 0.0, numeric: trfa_worst, tol: 1e-12 });

    let mut basis_worst = 0.0_f64;
    let plus = RealTwoForm::omega_plus();
    let minus = RealTwoForm::omega_minus();
    let all = [plus[0], plus[1], plus[2], minus[0], minus[1], minus[2]];
    for (a, fa) in all.iter().enumerate() {
        for (b, fb) in all.iter().enumerate() {
            let want = if a == b { 1.0 } else { 0.0 };
            basis_worst = basis_worst.max((fa.inner(*fb) - want).abs());
        }
    }
    rows.push(CheckRow { name: "omega basis orthonormal", closed: 0.0, numeric: basis_worst, tol: 1e-14 });

    rows.push(CheckRow {
        name: "vol(S3) |dxbar^dx|^2 / 16 = 6 pi^2",
        closed: 6.0 * PI * PI,
        numeric: 2.0 * PI * PI * dxbardx().norm2() / 16.0,
        tol: 1e-10,
    });
    rows
}

pub fn appendix_suite(seed: u64, sphere: &S3Rule) -> Vec<CheckRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut rows = Vec::new();
    let m2 = sphere.integrate(|x| x.0[0] * x.0[0]);
    rows.push(CheckRow { name: "int x1^2 = pi^2/2", closed: PI * PI / 2.0, numeric: m2, tol: 1e-12 });
    let m4 = sphere.integrate(|x| x.0[2].powi(4));
    rows.push(CheckRow { name: "int x3^4 = pi^2/4", closed: PI * PI / 4.0, numeric: m4, tol: 1e-12 });
    let m22 = sphere.integrate(|x| x.0[1] * x.0[1] * x.0[3] * x.0[3]);
    rows.push(CheckRow { name: "int x2^2 x4^2 = pi^2/12", closed: PI * PI / 12.0, numeric: m22, tol: 1e-12 });
    rows.push(CheckRow {
        name: "moment(2,2,2,0) closed vs rule",
        closed: s3_moment([2, 2, 2, 0]),
        numeric: sphere.integrate(|x| (x.0[0] * x.0[1] * x.0[2]).powi(2)),
        tol: 1e-12,
    });

    let mut worst = [0.0_f64; 4];
    for _ in 0..20 {
        let f0 = rand_two_form(&mut rng);
        let g0 = rand_unit(&mut rng);
        let out = s3_lemma_integrals(&f0, g0, sphere);
        worst[0] = worst[0].max((out.radial_sq.0 - out.radial_sq.1).abs());
        worst[1] = worst[1].max((out.mixed.0 - out.mixed.1).abs());
        worst[2] = worst[2].max((out.frame_radial.0 - out.frame_radial.1).abs());
        worst[3] = worst[3].max((out.frame_tangential.0 - out.frame_tangential.1).abs());
    }
    rows.push(CheckRow { name: "S3 identity: radial squares (20 rnd)", closed: 0.0, numeric: worst[0], tol: 1e-6 });
    rows.push(CheckRow { name: "S3 identity: mixed pairing (20 rnd)", closed: 0.0, numeric: worst[1], tol: 1e-6 });
    rows.push(CheckRow { name: "S3 identity: frame radial (20 rnd)", closed: 0.0, numeric: worst[2], tol: 1e-6 });
    rows.push(CheckRow { name: "S3 identity: frame tangential (20 rnd)", closed: 0.0, numeric: worst[3], tol: 1e-6 });

    let mut frame_worst = 0.0_f64;
    for _ in 0..200 {
        let x = rand_dir(&mut rng);
        let f = crate::forms::asd_frame_at(x).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let want = if a == b { 1.0 } else { 0.0 };
                frame_worst = frame_worst.max((f[a].inner(f[b]) - want).abs());
            }
        }
    }
    rows.push(CheckRow { name: "asd frame orthonormal (200 rnd)", closed: 0.0, numeric: frame_worst, tol: 1e-12 });

    let mut bound_violation = 0.0_f64;
    for _ in 0..10_000 {
        let v = |rng: &mut ChaCha8Rng| {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]
        };
        let (a, b, c) = (v(&mut rng), v(&mut rng), v(&mut rng));
        let frame = lm_r3_frame(a, b, c);
        let total = (a.iter().chain(&b).chain(&c).map(|t| t * t).sum::<f64>()).sqrt();
        let got = frame_pairing(a, b, c, &frame);
        bound_violation = bound_violation.max(total / 3.0_f64.sqrt() - got);
    }
    rows.push(CheckRow { name: "lm-r3 bound (1e4 rnd)", closed: 0.0, numeric: bound_violation.max(0.0), tol: 1e-12 });

    let mut g0_violation = 0.0_f64;
    for _ in 0..200 {
        let f0 = rand_two_form(&mut rng);
        if f0.p_minus().norm2() < 1e-6 {
            continue;
        }
        let g0 = choose_g0(&f0).unwrap();
        let s = g0_pairing(&f0, g0);
        g0_violation = g0_violation.max(4.0 / 3.0_f64.sqrt() * f0.p_minus().norm2().sqrt() - s);
    }
    rows.push(CheckRow { name: "g0 pairing bound (200 rnd)", closed: 0.0, numeric: g0_violation.max(0.0), tol: 1e-10 });
    rows
}

pub fn gauge_suite(seed: u64, sphere: &S3Rule) -> Vec<CheckRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut rows = Vec::new();

    // Constant-gauge invariance of the energy density, analytic path.
    let a = asd_lambda(1.0);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let g0 = rand_unit(&mut rng);
        let x = rand_dir(&mut rng).scaled(rng.gen_range(0.2..1.5));
        let f = curvature(&a, x).unwrap();
        let fg = curvature(&crate::fields::gauge_const(&a, g0), x).unwrap();
        worst = worst.max((f.norm2() - fg.norm2()).abs());
    }
    rows.push(CheckRow { name: "const-gauge energy invariance", closed: 0.0, numeric: worst, tol: 1e-12 });

    // Degree-one gauge preserves radiality on a radial background.
    let tilde = degree_one_gauge(&a);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let x = rand_dir(&mut rng).scaled(rng.gen_range(0.2..1.5));
        worst = worst.max(tilde.at(x).contract(x.unit()).norm_euclid());
    }
    rows.push(CheckRow { name: "degree-one keeps radial gauge", closed: 0.0, numeric: worst, tol: 1e-12 });

    // Exponential gauge kills the radial component of a non-radial field.
    let bump = poly_bump(1.5);
    let small = s3_rule(3);
    let (_, ag) = exp_gauge(&bump, 1.0, &small, 400).expect("exp gauge");
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let x = rand_dir(&mut rng).scaled(rng.gen_range(0.1..0.7));
        worst = worst.max(ag.at(x).contract(x.unit()).norm_euclid());
    }
    rows.push(CheckRow { name: "exp gauge radial residual", closed: 0.0, numeric: worst, tol: 1e-8 });

    // Radial reconstruction round-trip on the instanton family.
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let x = rand_dir(&mut rng).scaled(rng.gen_range(0.2..1.5));
        let rec = radial_reconstruction(|y| crate::instanton::asd_curvature(1.0, y), x, 48);
        let rel = (rec - a.at(x)).norm2().sqrt() / a.at(x).norm2().sqrt();
        worst = worst.max(rel);
    }
    rows.push(CheckRow { name: "radial reconstruction (rel)", closed: 0.0, numeric: worst, tol: 1e-6 });

    // Chern-Simons anomaly of the pure degree-one gauge.
    let pure = degree_one_gauge(&ConnectionField::zero());
    let cs = cs_boundary_integral(&pure, 0.05, sphere).unwrap();
    rows.push(CheckRow { name: "CS of pure gauge = -8 pi^2", closed: -8.0 * PI * PI, numeric: cs, tol: 1e-6 });
    rows
}

pub fn instanton_suite(seed: u64, sphere: &S3Rule) -> Vec<CheckRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let mut rows = Vec::new();

    let a = sd_lambda(1.0);
    let e = crate::quad::ym_energy(&a, Domain::WholeSpace, 192, sphere).unwrap();
    rows.push(CheckRow { name: "YM(SD_1) = 8 pi^2", closed: 8.0 * PI * PI, numeric: e, tol: 8.0 * PI * PI * 1e-6 });
    rows.push(CheckRow {
        name: "closed-form energy agrees",
        closed: sd_energy_ball(1.0, f64::INFINITY),
        numeric: 8.0 * PI * PI,
        tol: 1e-12,
    });

    let mut closed_worst = 0.0_f64;
    let mut jac_worst = 0.0_f64;
    let mut fd_worst = 0.0_f64;
    for _ in 0..100 {
        let x = rand_dir(&mut rng).scaled(rng.gen_range(0.1..2.0));
        closed_worst = closed_worst.max(sd_curvature(1.0, x).p_minus().norm2());
        jac_worst = jac_worst.max(curvature(&a, x).unwrap().p_minus().norm2());
        fd_worst = fd_worst.max(curvature(&a.without_jacobian(), x).unwrap().p_minus().norm2());
    }
    rows.push(CheckRow { name: "P-(F_SD) closed form (exact)", closed: 0.0, numeric: closed_worst, tol: 0.0 });
    rows.push(CheckRow { name: "P-(F_SD) via jacobian", closed: 0.0, numeric: jac_worst, tol: 1e-25 });
    rows.push(CheckRow { name: "P-(F_SD) finite diff (100 rnd)", closed: 0.0, numeric: fd_worst, tol: 1e-10 });

    let mut curv_worst = 0.0_f64;
    for _ in 0..50 {
        let x = rand_dir(&mut rng).scaled(rng.gen_range(0.1..2.0));
        curv_worst =
            curv_worst.max((sd_curvature(1.0, x) - curvature(&a, x).unwrap()).norm2().sqrt());
    }
    rows.push(CheckRow { name: "curvature closed form", closed: 0.0, numeric: curv_worst, tol: 1e-12 });

    let shell = crate::quad::ym_energy(&a, Domain::Annulus(0.5, 1.5), 96, sphere).unwrap();
    rows.push(CheckRow {
        name: "shell energy vs antiderivative",
        closed: sd_energy_ball(1.0, 1.5) - sd_energy_ball(1.0, 0.5),
        numeric: shell,
        tol: 1e-8,
    });

    let bump = poly_bump(1.0);
    let bulk = chern_number(&bump, 0.7, ChernMethod::Bulk, 96, sphere).unwrap();
    let boundary = chern_number(&bump, 0.7, ChernMethod::Boundary, 96, sphere).unwrap();
    rows.push(CheckRow { name: "Stokes: bulk vs boundary CS", closed: bulk, numeric: boundary, tol: 1e-6 });
    rows
}

/// Run the named suite(s) and print the table. Returns Ok(true) iff every row
/// passed.
pub fn cmd_verify(suite: &str, s3_level: usize, seed: u64) -> Result<bool> {
    let sphere = s3_rule(s3_level.max(3));
    let rows: Vec<CheckRow> = match suite {
        "algebra" => algebra_suite(seed),
        "appendix" => appendix_suite(seed, &sphere),
        "gauge" => gauge_suite(seed, &sphere),
        "instanton" => instanton_suite(seed, &sphere),
        "all" => {
            let mut all = algebra_suite(seed);
            all.extend(appendix_suite(seed, &sphere));
            all.extend(gauge_suite(seed, &sphere));
            all.extend(instanton_suite(seed, &sphere));
            all
        }
        other => {
            return Err(crate::Error::InvalidParam(format!(
                "unknown suite '{other}' (want algebra | appendix | gauge | instanton | all)"
            )))
        }
    };
    println!(
        "{:<38} {:>24} {:>24} {:>12} {:>6}",
        "check", "closed-form", "numeric", "abs-error", "pass"
    );
    let mut ok = true;
    for row in &rows {
        let pass = row.passes();
        ok &= pass;
        println!(
            "{:<38} {:>24} {:>24} {:>12.3e} {:>6}",
            row.name,
            fmt_f64(row.closed),
            fmt_f64(row.numeric),
            (row.numeric - row.closed).abs(),
            if pass { "ok" } else { "FAIL" }
        );
    }
    Ok(ok)
}
