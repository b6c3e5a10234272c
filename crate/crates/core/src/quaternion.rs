//! Quaternion scalars in complex (Cayley-Dickson) form.
//!
//! A quaternion is stored as a pair of complex numbers `(c1, c2)` standing for
//! `c1 + c2·j2`, where the complex unit of `c1`, `c2` is `j1`. With this
//! placement `j2·z = conj(z)·j2` for every complex `z`, and the product reads
//!
//! ```text
//! (a1 + a2 j2)(b1 + b2 j2) = (a1 b1 - a2 conj(b2)) + (a1 b2 + a2 conj(b1)) j2
//! ```
//!
//! Cartesian components map as `α0 = Re c1`, `α1 = Im c1`, `α2 = Re c2`,
//! `α3 = Im c2`, so `j3 = j1 j2 = (0, i)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    pub const ONE: Self = Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    pub const J1: Self = Self::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0));
    pub const J2: Self = Self::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    pub const J3: Self = Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));

    pub const fn new(c1: Complex64, c2: Complex64) -> Self {
        Self { c1, c2 }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, Complex64::new(0.0, 0.0))
    }

    /// Builds `α0 + α1 j1 + α2 j2 + α3 j3`.
    pub fn from_cartesian(a: [f64; 4]) -> Self {
        Self::new(Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3]))
    }

    pub fn to_cartesian(self) -> [f64; 4] {
        [self.c1.re, self.c1.im, self.c2.re, self.c2.im]
    }

    pub fn conj(self) -> Self {
        Self::new(self.c1.conj(), -self.c2)
    }

    pub fn norm_sqr(self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn modulus(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.c1 * s, self.c2 * s)
    }

    /// Multiplicative inverse; `None` for the zero quaternion.
    pub fn inverse(self) -> Option<Self> {
        let n = self.norm_sqr();
        (n > 0.0).then(|| self.conj().scale(1.0 / n))
    }

    pub fn real_part(self) -> f64 {
        self.c1.re
    }

    pub fn abs_diff(self, other: Self) -> f64 {
        (self - other).modulus()
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.c1 + rhs.c1, self.c2 + rhs.c2)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Self) {
        self.c1 += rhs.c1;
        self.c2 += rhs.c2;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.c1 - rhs.c1, self.c2 - rhs.c2)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c1, -self.c2)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.c1 * rhs.c1 - self.c2 * rhs.c2.conj(),
            self.c1 * rhs.c2 + self.c2 * rhs.c1.conj(),
        )
    }
}

impl From<Complex64> for Quaternion {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

/// Quaternion product.
pub fn q_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

pub fn q_conj(q: Quaternion) -> Quaternion {
    q.conj()
}

pub fn q_modulus(q: Quaternion) -> f64 {
    q.modulus()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_products() {
        let j1 = Quaternion::J1;
        let j2 = Quaternion::J2;
        let j3 = Quaternion::J3;
        assert_eq!(j1 * j2, j3);
        assert_eq!(j2 * j1, -j3);
        assert_eq!(j2 * j3, j1);
        assert_eq!(j3 * j1, j2);
        for u in [j1, j2, j3] {
            assert_eq!(u * u, -Quaternion::ONE);
        }
    }

    #[test]
    fn product_matches_cartesian_hamilton_rule() {
        let p = Quaternion::new(c(1.0, 0.5), c(-0.3, 2.0));
        let q = Quaternion::new(c(0.2, -1.0), c(0.7, 0.4));
        let [a0, a1, a2, a3] = p.to_cartesian();
        let [b0, b1, b2, b3] = q.to_cartesian();
        let expect = [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ];
        let got = (p * q).to_cartesian();
        for k in 0..4 {
            assert!((got[k] - expect[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn conjugate_and_modulus() {
        let q = Quaternion::from_cartesian([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(q.conj().to_cartesian(), [1.0, -2.0, -3.0, -4.0]);
        assert!((q.modulus() - 30f64.sqrt()).abs() < 1e-15);
        let qq = q * q.conj();
        assert!((qq.c1.re - 30.0).abs() < 1e-12);
        assert!(qq.c1.im.abs() < 1e-12 && qq.c2.norm() < 1e-12);
        let inv = q.inverse().unwrap();
        assert!((q * inv).abs_diff(Quaternion::ONE) < 1e-15);
        assert!(Quaternion::ZERO.inverse().is_none());
    }

    #[test]
    fn complex_passes_through_j2_conjugated() {
        let z = Quaternion::from_complex(c(0.3, -1.7));
        let lhs = Quaternion::J2 * z;
        let rhs = Quaternion::from_complex(z.c1.conj()) * Quaternion::J2;
        assert!(lhs.abs_diff(rhs) < 1e-15);
    }
}
