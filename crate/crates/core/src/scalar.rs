//! Reduced-biquaternion scalars.
//!
//! A reduced biquaternion is `a0 + a1 i + a2 j + a3 k` with the commutative
//! table `i² = k² = -1`, `j² = 1`, `ij = ji = k`, `jk = kj = i`,
//! `ki = ik = -j`. Unlike Hamilton quaternions, multiplication commutes.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RbqScalar {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl RbqScalar {
    pub const ZERO: RbqScalar = RbqScalar::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: RbqScalar = RbqScalar::new(1.0, 0.0, 0.0, 0.0);
    pub const I: RbqScalar = RbqScalar::new(0.0, 1.0, 0.0, 0.0);
    pub const J: RbqScalar = RbqScalar::new(0.0, 0.0, 1.0, 0.0);
    pub const K: RbqScalar = RbqScalar::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Self {
        RbqScalar { a0, a1, a2, a3 }
    }

    /// `sqrt(a0² + a1² + a2² + a3²)`; zero iff all components vanish.
    pub fn norm(self) -> f64 {
        (self.a0 * self.a0 + self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3).sqrt()
    }

    pub fn components(self) -> [f64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }
}

impl From<f64> for RbqScalar {
    fn from(a0: f64) -> Self {
        RbqScalar::new(a0, 0.0, 0.0, 0.0)
    }
}

impl Add for RbqScalar {
    type Output = RbqScalar;
    fn add(self, r: RbqScalar) -> RbqScalar {
        RbqScalar::new(
            self.a0 + r.a0,
            self.a1 + r.a1,
            self.a2 + r.a2,
            self.a3 + r.a3,
        )
    }
}

impl Sub for RbqScalar {
    type Output = RbqScalar;
    fn sub(self, r: RbqScalar) -> RbqScalar {
        RbqScalar::new(
            self.a0 - r.a0,
            self.a1 - r.a1,
            self.a2 - r.a2,
            self.a3 - r.a3,
        )
    }
}

impl Neg for RbqScalar {
    type Output = RbqScalar;
    fn neg(self) -> RbqScalar {
        RbqScalar::new(-self.a0, -self.a1, -self.a2, -self.a3)
    }
}

impl Mul for RbqScalar {
    type Output = RbqScalar;
    fn mul(self, r: RbqScalar) -> RbqScalar {
        let (a0, a1, a2, a3) = (self.a0, self.a1, self.a2, self.a3);
        let (b0, b1, b2, b3) = (r.a0, r.a1, r.a2, r.a3);
        // grouping pairs each term with its operand-swapped twin, so the
        // product is bitwise commutative (fp addition commutes; it only
        // fails to associate)
        RbqScalar::new(
            (a0 * b0 - a1 * b1) + (a2 * b2 - a3 * b3),
            (a0 * b1 + a1 * b0) + (a2 * b3 + a3 * b2),
            (a0 * b2 + a2 * b0) - (a1 * b3 + a3 * b1),
            (a0 * b3 + a3 * b0) + (a1 * b2 + a2 * b1),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIS: [RbqScalar; 4] = [RbqScalar::ONE, RbqScalar::I, RbqScalar::J, RbqScalar::K];

    #[test]
    fn multiplication_table() {
        use RbqScalar as Q;
        let minus = |q: Q| -q;
        // rows: 1, i, j, k; columns likewise
        let expected: [[Q; 4]; 4] = [
            [Q::ONE, Q::I, Q::J, Q::K],
            [Q::I, minus(Q::ONE), Q::K, minus(Q::J)],
            [Q::J, Q::K, Q::ONE, Q::I],
            [Q::K, minus(Q::J), Q::I, minus(Q::ONE)],
        ];
        for (r, &x) in BASIS.iter().enumerate() {
            for (c, &y) in BASIS.iter().enumerate() {
                assert_eq!(x * y, expected[r][c], "basis product {r} * {c}");
            }
        }
    }

    #[test]
    fn commutativity_over_basis_pairs() {
        for &x in &BASIS {
            for &y in &BASIS {
                assert_eq!(x * y, y * x);
            }
        }
    }

    #[test]
    fn identity_and_norm() {
        let a = RbqScalar::new(1.5, -2.0, 0.25, 3.0);
        assert_eq!(RbqScalar::ONE * a, a);
        assert_eq!(RbqScalar::new(1.0, 1.0, 1.0, 1.0).norm(), 2.0);
        assert_eq!(RbqScalar::ZERO.norm(), 0.0);
    }
}
