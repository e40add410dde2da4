//! Quadrature engines: Gauss-Legendre rules, an S^3 product rule, ball,
//! annulus and whole-space integrals, Yang-Mills energies and Chern numbers.
//!
//! Node evaluations run in parallel; the reduction is a deterministic
//! pairwise sum over the node-ordered vector, so results are identical from
//! run to run at fixed resolution.

use crate::fields::{curvature, d_of, fd_jacobian, ConnectionField};
use crate::forms::{cs3_boundary_integrand, Su2TwoForm, Vec4};
use crate::{Error, Result};
use rayon::prelude::*;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..(n + 1) / 2 {
        // Initial guess (Chebyshev-like), then Newton on P_n.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * d * d);
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_and_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

/// Deterministic pairwise summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

/// A quadrature rule on the unit 3-sphere.
#[derive(Debug, Clone)]
pub struct S3Rule {
    pub nodes: Vec<Vec4>,
    pub weights: Vec<f64>,
    /// Exact for polynomials of total degree <= 2*level - 1.
    pub exactness_degree: usize,
}

/// Product rule in hyperspherical coordinates: Gauss-Chebyshev (2nd kind) in
/// cos of the first polar angle, Gauss-Legendre in cos of the second and the
/// periodic trapezoid in the azimuth. Exact for polynomials of degree
/// <= 2*level - 1.
pub fn s3_rule(level: usize) -> S3Rule {
    assert!(level >= 1, "level must be >= 1");
    let n1 = level;
    // Chebyshev 2nd kind: integrates f(u) sqrt(1-u^2) du exactly for
    // polynomial f of degree <= 2 n1 - 1.
    let cheb: Vec<(f64, f64)> = (1..=n1)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / (n1 as f64 + 1.0);
            (t.cos(), std::f64::consts::PI / (n1 as f64 + 1.0) * t.sin() * t.sin())
        })
        .collect();
    let (u2, w2) = gauss_legendre(level);
    let m = 2 * level + 2;
    let mut nodes = Vec::with_capacity(n1 * level * m);
    let mut weights = Vec::with_capacity(n1 * level * m);
    for &(c1, cw1) in &cheb {
        let s1 = (1.0 - c1 * c1).sqrt();
        for (c2, cw2) in u2.iter().zip(&w2) {
            let s2 = (1.0 - c2 * c2).sqrt();
            for p in 0..m {
                let phi = 2.0 * std::f64::consts::PI * p as f64 / m as f64;
                nodes.push(Vec4::new(
                    c1,
                    s1 * c2,
                    s1 * s2 * phi.cos(),
                    s1 * s2 * phi.sin(),
                ));
                weights.push(cw1 * cw2 * 2.0 * std::f64::consts::PI / m as f64);
            }
        }
    }
    S3Rule { nodes, weights, exactness_degree: 2 * level - 1 }
}

impl S3Rule {
    /// Integral over S^3 of a scalar function, parallel with deterministic
    /// reduction.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(Vec4) -> f64 + Send + Sync,
    {
        let vals: Vec<f64> = self
            .nodes
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(x, w)| w * f(*x))
            .collect();
        pairwise_sum(&vals)
    }
}

/// Closed form for the S^3 moment of x1^a1 x2^a2 x3^a3 x4^a4 via the Gamma
/// function: zero unless all exponents are even, else
/// 2 G(b1) G(b2) G(b3) G(b4) / G(b1+b2+b3+b4) with b = (a+1)/2.
pub fn s3_moment(alpha: [u32; 4]) -> f64 {
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    // All arguments are half-integers; use G(1/2) = sqrt(pi) and the
    // recurrence G(z+1) = z G(z). Work with b in units of 1/2.
    let half_gamma = |twice: u32| -> f64 {
        // Gamma(twice / 2)
        if twice % 2 == 0 {
            let mut acc = 1.0;
            for k in 1..(twice / 2) {
                acc *= k as f64;
            }
            acc
        } else {
            let mut acc = std::f64::consts::PI.sqrt();
            let mut z = 1u32; // z/2
            while z < twice {
                acc *= z as f64 / 2.0;
                z += 2;
            }
            acc
        }
    };
    let b: Vec<u32> = alpha.iter().map(|a| a + 1).collect(); // 2*beta
    let num: f64 = b.iter().map(|&t| half_gamma(t)).product();
    let den = half_gamma(b.iter().sum());
    2.0 * num / den
}

/// Integration domains for energy-type functionals.
#[derive(Debug, Clone, Copy)]
pub enum Domain {
    Ball(f64),
    Annulus(f64, f64),
    WholeSpace,
}

/// Integral over B_R of a scalar field (Lebesgue measure), as a radial
/// Gauss-Legendre rule times an S^3 rule.
pub fn ball_integrate<F>(f: F, radius: f64, radial_n: usize, sphere: &S3Rule) -> f64
where
    F: Fn(Vec4) -> f64 + Send + Sync,
{
    assert!(radius > 0.0);
    let (rs, ws) = gauss_legendre_on(radial_n, 0.0, radius);
    radial_sphere_integrate(&f, &rs, &ws, sphere)
}

/// Integral over the annulus r_in < |x| < r_out.
pub fn annulus_integrate<F>(
    f: F,
    r_in: f64,
    r_out: f64,
    radial_n: usize,
    sphere: &S3Rule,
) -> Result<f64>
where
    F: Fn(Vec4) -> f64 + Send + Sync,
{
    if !(r_in > 0.0 && r_out > r_in) {
        return Err(Error::InvalidParam(format!(
            "annulus radii must satisfy 0 < r_in < r_out; got ({r_in}, {r_out})"
        )));
    }
    let (rs, ws) = gauss_legendre_on(radial_n, r_in, r_out);
    Ok(radial_sphere_integrate(&f, &rs, &ws, sphere))
}

/// Integral over all of R^4 via the substitution r = t/(1-t), t in (0, 1).
pub fn whole_space_integrate<F>(f: F, radial_n: usize, sphere: &S3Rule) -> f64
where
    F: Fn(Vec4) -> f64 + Send + Sync,
{
    let (ts, ws) = gauss_legendre_on(radial_n, 0.0, 1.0);
    let rs: Vec<f64> = ts.iter().map(|t| t / (1.0 - t)).collect();
    // dr = dt/(1-t)^2
    let wr: Vec<f64> = ts.iter().zip(&ws).map(|(t, w)| w / ((1.0 - t) * (1.0 - t))).collect();
    radial_sphere_integrate(&f, &rs, &wr, sphere)
}

fn radial_sphere_integrate<F>(f: &F, rs: &[f64], ws: &[f64], sphere: &S3Rule) -> f64
where
    F: Fn(Vec4) -> f64 + Send + Sync,
{
    let tasks: Vec<(f64, f64)> = rs.iter().copied().zip(ws.iter().copied()).collect();
    let vals: Vec<f64> = tasks
        .par_iter()
        .flat_map_iter(|&(r, wr)| {
            let measure = wr * r * r * r;
            sphere
                .nodes
                .iter()
                .zip(sphere.weights.iter())
                .map(move |(sigma, ws)| measure * ws * f(sigma.scaled(r)))
                .collect::<Vec<f64>>()
        })
        .collect();
    pairwise_sum(&vals)
}

/// Integral over the sphere |x| = r of a scalar density against the
/// Riemannian measure.
pub fn sphere_integral<F>(f: F, r: f64, sphere: &S3Rule) -> f64
where
    F: Fn(Vec4) -> f64 + Send + Sync,
{
    let r3 = r * r * r;
    let vals: Vec<f64> = sphere
        .nodes
        .par_iter()
        .zip(sphere.weights.par_iter())
        .map(|(sigma, w)| w * r3 * f(sigma.scaled(r)))
        .collect();
    pairwise_sum(&vals)
}

fn domain_excludes_origin(domain: Domain) -> bool {
    matches!(domain, Domain::Annulus(_, _))
}

/// Yang-Mills energy of A over the domain: the integral of |F_A|^2.
pub fn ym_energy(
    a: &ConnectionField,
    domain: Domain,
    radial_n: usize,
    sphere: &S3Rule,
) -> Result<f64> {
    if a.singular_at_origin && !domain_excludes_origin(domain) {
        return Err(Error::SingularPoint);
    }
    let density = |x: Vec4| curvature(a, x).map(|f| f.norm2()).unwrap_or(f64::NAN);
    match domain {
        Domain::Ball(r) => {
            if r <= 0.0 {
                return Err(Error::InvalidParam("ball radius must be positive".into()));
            }
            Ok(ball_integrate(density, r, radial_n, sphere))
        }
        Domain::Annulus(r_in, r_out) => annulus_integrate(density, r_in, r_out, radial_n, sphere),
        Domain::WholeSpace => Ok(whole_space_integrate(density, radial_n, sphere)),
    }
}

/// Method selector for the second Chern number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChernMethod {
    Bulk,
    Boundary,
}

/// Boundary Chern-Simons integral over the sphere |x| = r:
/// the integral of tr(A ^ dA + (2/3) A ^ A ^ A) pulled back to the sphere.
pub fn cs_boundary_integral(a: &ConnectionField, r: f64, sphere: &S3Rule) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::InvalidParam("sphere radius must be positive".into()));
    }
    let density = |x: Vec4| {
        let jac = match a.jacobian_at(x) {
            Some(j) => j,
            None => fd_jacobian(a, x),
        };
        cs3_boundary_integrand(a.at(x), d_of(&jac), x)
    };
    Ok(sphere_integral(density, r, sphere))
}

/// Second Chern integral over B_R: bulk quadrature of tr(F ^ F), or the
/// boundary Chern-Simons integral (the two agree by Stokes for A smooth on
/// the ball).
pub fn chern_number(
    a: &ConnectionField,
    radius: f64,
    method: ChernMethod,
    radial_n: usize,
    sphere: &S3Rule,
) -> Result<f64> {
    match method {
        ChernMethod::Bulk => {
            if a.singular_at_origin {
                return Err(Error::SingularPoint);
            }
            if radius <= 0.0 {
                return Err(Error::InvalidParam("ball radius must be positive".into()));
            }
            let density = |x: Vec4| {
                let f = curvature(a, x).unwrap_or(Su2TwoForm::ZERO);
                f.tr_wedge(f)
            };
            if radius.is_infinite() {
                Ok(whole_space_integrate(density, radial_n, sphere))
            } else {
                Ok(ball_integrate(density, radius, radial_n, sphere))
            }
        }
        ChernMethod::Boundary => cs_boundary_integral(a, radius, sphere),
    }
}
