//! Quaternion and su(2) algebra.
//!
//! su(2) is identified with the imaginary quaternions spanned by i, j, k
//! (ij = k, jk = i, ki = j) and SU(2) with the unit quaternions acting by
//! conjugation. Norms come from the 2x2 matrix trace, |p|^2 = tr(p conj(p)),
//! so the three imaginary units each have squared norm 2.

use crate::{Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

/// A quaternion w + i*i + j*j + k*k in the basis (1, i, j, k).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quat {
    pub w: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Quat {
    pub const ZERO: Quat = Quat { w: 0.0, i: 0.0, j: 0.0, k: 0.0 };
    pub const ONE: Quat = Quat { w: 1.0, i: 0.0, j: 0.0, k: 0.0 };
    pub const I: Quat = Quat { w: 0.0, i: 1.0, j: 0.0, k: 0.0 };
    pub const J: Quat = Quat { w: 0.0, i: 0.0, j: 1.0, k: 0.0 };
    pub const K: Quat = Quat { w: 0.0, i: 0.0, j: 0.0, k: 1.0 };

    pub fn new(w: f64, i: f64, j: f64, k: f64) -> Quat {
        Quat { w, i, j, k }
    }

    pub fn conj(self) -> Quat {
        Quat::new(self.w, -self.i, -self.j, -self.k)
    }

    pub fn re(self) -> f64 {
        self.w
    }

    pub fn im(self) -> ImQuat {
        ImQuat::new(self.i, self.j, self.k)
    }

    /// Squared Euclidean norm of the coefficient 4-vector.
    pub fn norm2_euclid(self) -> f64 {
        self.w * self.w + self.i * self.i + self.j * self.j + self.k * self.k
    }

    /// Trace of the corresponding 2x2 matrix: tr(1) = 2, imaginary parts traceless.
    pub fn trace(self) -> f64 {
        2.0 * self.w
    }

    pub fn scaled(self, s: f64) -> Quat {
        Quat::new(self.w * s, self.i * s, self.j * s, self.k * s)
    }
}

impl Mul for Quat {
    type Output = Quat;
    /// Hamilton product.
    fn mul(self, q: Quat) -> Quat {
        let p = self;
        Quat {
            w: p.w * q.w - p.i * q.i - p.j * q.j - p.k * q.k,
            i: p.w * q.i + p.i * q.w + p.j * q.k - p.k * q.j,
            j: p.w * q.j - p.i * q.k + p.j * q.w + p.k * q.i,
            k: p.w * q.k + p.i * q.j - p.j * q.i + p.k * q.w,
        }
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, q: Quat) -> Quat {
        Quat::new(self.w + q.w, self.i + q.i, self.j + q.j, self.k + q.k)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, q: Quat) -> Quat {
        Quat::new(self.w - q.w, self.i - q.i, self.j - q.j, self.k - q.k)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        self.scaled(-1.0)
    }
}

/// An imaginary quaternion, i.e. an element of su(2).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImQuat {
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl ImQuat {
    pub const ZERO: ImQuat = ImQuat { i: 0.0, j: 0.0, k: 0.0 };
    pub const I: ImQuat = ImQuat { i: 1.0, j: 0.0, k: 0.0 };
    pub const J: ImQuat = ImQuat { i: 0.0, j: 1.0, k: 0.0 };
    pub const K: ImQuat = ImQuat { i: 0.0, j: 0.0, k: 1.0 };

    pub fn new(i: f64, j: f64, k: f64) -> ImQuat {
        ImQuat { i, j, k }
    }

    pub fn as_quat(self) -> Quat {
        Quat::new(0.0, self.i, self.j, self.k)
    }

    /// Commutator pq - qp; always imaginary.
    pub fn bracket(self, q: ImQuat) -> ImQuat {
        // [p, q] = 2 (p x q) in the (i, j, k) coordinates.
        ImQuat::new(
            2.0 * (self.j * q.k - self.k * q.j),
            2.0 * (self.k * q.i - self.i * q.k),
            2.0 * (self.i * q.j - self.j * q.i),
        )
    }

    /// Matrix-trace squared norm: 2 (i^2 + j^2 + k^2).
    pub fn norm2(self) -> f64 {
        2.0 * (self.i * self.i + self.j * self.j + self.k * self.k)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    /// Polarization of the trace norm: <p, q> = 2 (p . q).
    pub fn inner(self, q: ImQuat) -> f64 {
        2.0 * (self.i * q.i + self.j * q.j + self.k * q.k)
    }

    /// Plain Euclidean length of the (i, j, k) coefficient vector.
    pub fn norm_euclid(self) -> f64 {
        (self.i * self.i + self.j * self.j + self.k * self.k).sqrt()
    }

    pub fn scaled(self, s: f64) -> ImQuat {
        ImQuat::new(self.i * s, self.j * s, self.k * s)
    }

    /// Quaternion exponential: cos(t) 1 + sin(t) p/t with t the Euclidean length.
    pub fn exp(self) -> UnitQuat {
        let t = self.norm_euclid();
        if t < 1e-300 {
            return UnitQuat(Quat::ONE);
        }
        let s = t.sin() / t;
        UnitQuat(Quat::new(t.cos(), s * self.i, s * self.j, s * self.k))
    }
}

impl Add for ImQuat {
    type Output = ImQuat;
    fn add(self, q: ImQuat) -> ImQuat {
        ImQuat::new(self.i + q.i, self.j + q.j, self.k + q.k)
    }
}

impl Sub for ImQuat {
    type Output = ImQuat;
    fn sub(self, q: ImQuat) -> ImQuat {
        ImQuat::new(self.i - q.i, self.j - q.j, self.k - q.k)
    }
}

impl Neg for ImQuat {
    type Output = ImQuat;
    fn neg(self) -> ImQuat {
        self.scaled(-1.0)
    }
}

/// A unit quaternion, i.e. an element of SU(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuat(Quat);

impl Default for UnitQuat {
    fn default() -> Self {
        UnitQuat::ONE
    }
}

impl UnitQuat {
    pub const ONE: UnitQuat = UnitQuat(Quat::ONE);

    /// Checked constructor; the Euclidean norm must be 1 within 1e-12.
    pub fn new(q: Quat) -> Result<UnitQuat> {
        let dev = (q.norm2_euclid().sqrt() - 1.0).abs();
        if dev > 1e-12 {
            return Err(Error::NonUnitQuaternion(dev));
        }
        Ok(UnitQuat::renormalized(q))
    }

    /// Projects q onto the unit sphere. q must be nonzero.
    pub fn renormalized(q: Quat) -> UnitQuat {
        let n = q.norm2_euclid().sqrt();
        assert!(n > 0.0, "cannot normalize the zero quaternion");
        UnitQuat(q.scaled(1.0 / n))
    }

    pub fn quat(self) -> Quat {
        self.0
    }

    pub fn inverse(self) -> UnitQuat {
        UnitQuat(self.0.conj())
    }

    pub fn mul(self, g: UnitQuat) -> UnitQuat {
        UnitQuat::renormalized(self.0 * g.0)
    }

    /// Adjoint action p -> g p g^-1; preserves ImQuat and its norm.
    pub fn adjoint(self, p: ImQuat) -> ImQuat {
        (self.0 * p.as_quat() * self.0.conj()).im()
    }

    /// Matrix of the adjoint action in the basis (i, j, k); a rotation.
    pub fn so3(self) -> [[f64; 3]; 3] {
        let cols = [self.adjoint(ImQuat::I), self.adjoint(ImQuat::J), self.adjoint(ImQuat::K)];
        let mut r = [[0.0; 3]; 3];
        for (c, q) in cols.iter().enumerate() {
            r[0][c] = q.i;
            r[1][c] = q.j;
            r[2][c] = q.k;
        }
        r
    }

    /// Right inverse of [`UnitQuat::so3`] up to sign; the representative with
    /// w >= 0 is chosen, ties (w = 0) broken by the first nonzero imaginary
    /// coefficient being positive.
    pub fn from_rotation(r: &[[f64; 3]; 3]) -> Result<UnitQuat> {
        check_rotation(r)?;
        // Shepperd's method: pick the largest of the four squared components.
        let tr = r[0][0] + r[1][1] + r[2][2];
        let (mut w, mut i, mut j, mut k);
        if tr >= r[0][0].max(r[1][1]).max(r[2][2]) {
            w = (1.0 + tr).sqrt() * 0.5;
            let s = 0.25 / w;
            i = (r[2][1] - r[1][2]) * s;
            j = (r[0][2] - r[2][0]) * s;
            k = (r[1][0] - r[0][1]) * s;
        } else if r[0][0] >= r[1][1].max(r[2][2]) {
            i = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 0.5;
            let s = 0.25 / i;
            w = (r[2][1] - r[1][2]) * s;
            j = (r[0][1] + r[1][0]) * s;
            k = (r[0][2] + r[2][0]) * s;
        } else if r[1][1] >= r[2][2] {
            j = (1.0 - r[0][0] + r[1][1] - r[2][2]).sqrt() * 0.5;
            let s = 0.25 / j;
            w = (r[0][2] - r[2][0]) * s;
            i = (r[0][1] + r[1][0]) * s;
            k = (r[1][2] + r[2][1]) * s;
        } else {
            k = (1.0 - r[0][0] - r[1][1] + r[2][2]).sqrt() * 0.5;
            let s = 0.25 / k;
            w = (r[1][0] - r[0][1]) * s;
            i = (r[0][2] + r[2][0]) * s;
            j = (r[1][2] + r[2][1]) * s;
        }
        // Resolve the +-g ambiguity deterministically.
        let flip = if w != 0.0 {
            w < 0.0
        } else if i != 0.0 {
            i < 0.0
        } else if j != 0.0 {
            j < 0.0
        } else {
            k < 0.0
        };
        if flip {
            w = -w;
            i = -i;
            j = -j;
            k = -k;
        }
        Ok(UnitQuat::renormalized(Quat::new(w, i, j, k)))
    }
}

fn check_rotation(r: &[[f64; 3]; 3]) -> Result<()> {
    let tol = 1e-10;
    for a in 0..3 {
        for b in 0..3 {
            let mut dot = 0.0;
            for c in 0..3 {
                dot += r[c][a] * r[c][b];
            }
            let want = if a == b { 1.0 } else { 0.0 };
            if (dot - want).abs() > tol {
                return Err(Error::NotARotation(format!(
                    "columns {a},{b} not orthonormal (dot = {dot:.3e})"
                )));
            }
        }
    }
    let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
    if (det - 1.0).abs() > tol {
        return Err(Error::NotARotation(format!("det = {det:.15}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// 2x2 complex-matrix representation, used only to cross-check the
    /// Hamilton product against matrix multiplication.
    #[derive(Clone, Copy)]
    struct M2([[(f64, f64); 2]; 2]);

    fn to_matrix(q: Quat) -> M2 {
        // 1 -> id, i -> [[i,0],[0,-i]], j -> [[0,1],[-1,0]], k -> [[0,i],[i,0]]
        M2([
            [(q.w, q.i), (q.j, q.k)],
            [(-q.j, q.k), (q.w, -q.i)],
        ])
    }

    fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
        (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
    }

    fn mat_mul(a: M2, b: M2) -> M2 {
        let mut out = [[(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                let p = cmul(a.0[r][0], b.0[0][c]);
                let q = cmul(a.0[r][1], b.0[1][c]);
                out[r][c] = (p.0 + q.0, p.1 + q.1);
            }
        }
        M2(out)
    }

    fn assert_matrix_close(a: M2, b: M2) {
        for r in 0..2 {
            for c in 0..2 {
                assert_abs_diff_eq!(a.0[r][c].0, b.0[r][c].0, epsilon = 1e-13);
                assert_abs_diff_eq!(a.0[r][c].1, b.0[r][c].1, epsilon = 1e-13);
            }
        }
    }

    use crate::testutil::{rand_im, rand_quat, rand_unit};

    #[test]
    fn basis_products() {
        assert_eq!(Quat::I * Quat::J, Quat::K);
        assert_eq!(Quat::J * Quat::K, Quat::I);
        assert_eq!(Quat::K * Quat::I, Quat::J);
        assert_eq!(Quat::I * Quat::I, -Quat::ONE);
        assert_eq!(Quat::J * Quat::J, -Quat::ONE);
        assert_eq!(Quat::K * Quat::K, -Quat::ONE);
        let q = Quat::new(0.3, -1.2, 0.7, 2.0);
        assert_eq!(Quat::ONE * q, q);
    }

    #[test]
    fn product_matches_matrix_representation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = rand_quat(&mut rng);
            let q = rand_quat(&mut rng);
            assert_matrix_close(to_matrix(p * q), mat_mul(to_matrix(p), to_matrix(q)));
        }
        // (1 + i)(1 + j) = 1 + i + j + k, expanded by bilinearity.
        let p = Quat::ONE + Quat::I;
        let q = Quat::ONE + Quat::J;
        assert_eq!(p * q, Quat::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn bracket_values() {
        assert_eq!(ImQuat::I.bracket(ImQuat::J), ImQuat::K.scaled(2.0));
        assert_eq!(ImQuat::J.bracket(ImQuat::K), ImQuat::I.scaled(2.0));
        assert_eq!(ImQuat::K.bracket(ImQuat::I), ImQuat::J.scaled(2.0));
        let p = ImQuat::new(0.4, -0.3, 1.1);
        assert_eq!(p.bracket(p), ImQuat::ZERO);
    }

    #[test]
    fn trace_norms() {
        assert_eq!(ImQuat::I.norm2(), 2.0);
        assert_eq!(ImQuat::ZERO.norm2(), 0.0);
        assert_eq!((ImQuat::I + ImQuat::J + ImQuat::K).norm2(), 6.0);
        assert_eq!(Quat::ONE.trace(), 2.0);
        assert_eq!(Quat::I.trace(), 0.0);
    }

    #[test]
    fn adjoint_examples() {
        let p = ImQuat::new(0.2, -0.5, 0.9);
        assert_eq!(UnitQuat::ONE.adjoint(p), p);
        // i j i^-1 = -j via the product chain.
        let g = UnitQuat::new(Quat::I).unwrap();
        let chain = (Quat::I * Quat::J * Quat::I.conj()).im();
        assert_abs_diff_eq!(chain.j, -1.0, epsilon = 1e-15);
        let got = g.adjoint(ImQuat::J);
        assert_abs_diff_eq!(got.i, chain.i, epsilon = 1e-15);
        assert_abs_diff_eq!(got.j, chain.j, epsilon = 1e-15);
        assert_abs_diff_eq!(got.k, chain.k, epsilon = 1e-15);
    }

    #[test]
    fn adjoint_is_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let g = rand_unit(&mut rng);
            let p = rand_im(&mut rng);
            assert_abs_diff_eq!(g.adjoint(p).norm2(), p.norm2(), epsilon = 1e-12);
        }
    }

    #[test]
    fn exp_examples() {
        assert_eq!(ImQuat::ZERO.exp().quat(), Quat::ONE);
        let g = ImQuat::I.scaled(std::f64::consts::FRAC_PI_2).exp().quat();
        assert_abs_diff_eq!(g.w, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.i, 1.0, epsilon = 1e-15);
        // Power-series oracle at a generic argument.
        let p = ImQuat::new(0.31, -0.12, 0.44);
        let series = {
            let mut acc = Quat::ONE;
            let mut term = Quat::ONE;
            for n in 1..40 {
                term = (term * p.as_quat()).scaled(1.0 / n as f64);
                acc = acc + term;
            }
            acc
        };
        let got = p.exp().quat();
        assert_abs_diff_eq!((got - series).norm2_euclid().sqrt(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn exp_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let p = rand_im(&mut rng);
            let q = p.exp().mul((-p).exp()).quat();
            assert_abs_diff_eq!((q - Quat::ONE).norm2_euclid().sqrt(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn so3_identity_and_roundtrip() {
        let r = UnitQuat::ONE.so3();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(r[a][b], if a == b { 1.0 } else { 0.0 });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let g = rand_unit(&mut rng);
            let r = g.so3();
            let h = UnitQuat::from_rotation(&r).unwrap();
            let r2 = h.so3();
            for a in 0..3 {
                for b in 0..3 {
                    assert_abs_diff_eq!(r[a][b], r2[a][b], epsilon = 1e-12);
                }
            }
            // Sign policy: returned lift has nonnegative real part.
            assert!(h.quat().w >= 0.0);
        }
    }

    #[test]
    fn so3_of_exp_rotates_about_axis() {
        // Adjoint of exp((theta/2) i) rotates the (j, k) plane by theta.
        let theta = 0.77;
        let g = ImQuat::I.scaled(theta / 2.0).exp();
        let r = g.so3();
        // Oracle: direct adjoint computation on basis vectors.
        for (col, e) in [ImQuat::I, ImQuat::J, ImQuat::K].into_iter().enumerate() {
            let v = g.adjoint(e);
            assert_abs_diff_eq!(r[0][col], v.i, epsilon = 1e-15);
            assert_abs_diff_eq!(r[1][col], v.j, epsilon = 1e-15);
            assert_abs_diff_eq!(r[2][col], v.k, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(r[1][1], theta.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(r[2][1], theta.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(r[0][0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_non_rotation() {
        let mut r = UnitQuat::ONE.so3();
        r[0][0] = 1.5;
        assert!(UnitQuat::from_rotation(&r).is_err());
        // Reflection: det = -1.
        let refl = [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(UnitQuat::from_rotation(&refl).is_err());
        assert!(UnitQuat::new(Quat::new(1.1, 0.0, 0.0, 0.0)).is_err());
    }

    proptest! {
        #[test]
        fn conj_antihomomorphism(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0,
                                 e in -2.0f64..2.0, f in -2.0f64..2.0, g in -2.0f64..2.0, h in -2.0f64..2.0) {
            let p = Quat::new(a, b, c, d);
            let q = Quat::new(e, f, g, h);
            let lhs = (p * q).conj();
            let rhs = q.conj() * p.conj();
            prop_assert!((lhs - rhs).norm2_euclid() < 1e-20);
        }

        #[test]
        fn bracket_antisymmetric_and_jacobi(pi in -1.0f64..1.0, pj in -1.0f64..1.0, pk in -1.0f64..1.0,
                                            qi in -1.0f64..1.0, qj in -1.0f64..1.0, qk in -1.0f64..1.0,
                                            ri in -1.0f64..1.0, rj in -1.0f64..1.0, rk in -1.0f64..1.0) {
            let p = ImQuat::new(pi, pj, pk);
            let q = ImQuat::new(qi, qj, qk);
            let r = ImQuat::new(ri, rj, rk);
            let anti = p.bracket(q) + q.bracket(p);
            prop_assert!(anti.norm_euclid() < 1e-13);
            let jac = p.bracket(q.bracket(r)) + q.bracket(r.bracket(p)) + r.bracket(p.bracket(q));
            prop_assert!(jac.norm_euclid() < 1e-13);
        }

        #[test]
        fn so3_is_homomorphism(s in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
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
                    prop_assert!((gh[a][b] - acc).abs() < 1e-12);
                }
            }
        }
    }
}
