//! Argument tuples for 3j symbols and their structural and selection rules.

use thiserror::Error;

use crate::half_integer::HalfInt;

/// The six entries (a, b, x; alpha, beta, gamma) of a 3j symbol.
///
/// Construction enforces the structural invariants: nonnegative momenta,
/// projections summing to zero, per-column parity, and integral a+b+x.
/// Selection rules (triangle condition and projection bounds) are a separate
/// check; a structurally valid symbol that fails them has value zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ThreeJArgs {
    a: HalfInt,
    b: HalfInt,
    x: HalfInt,
    alpha: HalfInt,
    beta: HalfInt,
    gamma: HalfInt,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArgsError {
    #[error("momentum {0} is negative")]
    NegativeMomentum(HalfInt),
    #[error("projections alpha+beta+gamma = {0}, expected 0")]
    ProjectionSum(HalfInt),
    #[error("projection {projection} has different parity than momentum {momentum}")]
    ParityMismatch {
        momentum: HalfInt,
        projection: HalfInt,
    },
}

impl ThreeJArgs {
    pub fn new(
        a: HalfInt,
        b: HalfInt,
        x: HalfInt,
        alpha: HalfInt,
        beta: HalfInt,
        gamma: HalfInt,
    ) -> Result<Self, ArgsError> {
        for j in [a, b, x] {
            if j.is_negative() {
                return Err(ArgsError::NegativeMomentum(j));
            }
        }
        let m_sum = alpha + beta + gamma;
        if m_sum != HalfInt::ZERO {
            return Err(ArgsError::ProjectionSum(m_sum));
        }
        for (j, m) in [(a, alpha), (b, beta), (x, gamma)] {
            if (j.twice() - m.twice()) % 2 != 0 {
                return Err(ArgsError::ParityMismatch {
                    momentum: j,
                    projection: m,
                });
            }
        }
        // zero projection sum + per-column parity force an integral a+b+x
        debug_assert!((a + b + x).is_integer());
        Ok(ThreeJArgs {
            a,
            b,
            x,
            alpha,
            beta,
            gamma,
        })
    }

    /// Convenience constructor from doubled integers.
    pub fn from_twice(
        ta: i64,
        tb: i64,
        tx: i64,
        talpha: i64,
        tbeta: i64,
        tgamma: i64,
    ) -> Result<Self, ArgsError> {
        ThreeJArgs::new(
            HalfInt::from_twice(ta),
            HalfInt::from_twice(tb),
            HalfInt::from_twice(tx),
            HalfInt::from_twice(talpha),
            HalfInt::from_twice(tbeta),
            HalfInt::from_twice(tgamma),
        )
    }

    pub fn a(&self) -> HalfInt {
        self.a
    }
    pub fn b(&self) -> HalfInt {
        self.b
    }
    pub fn x(&self) -> HalfInt {
        self.x
    }
    pub fn alpha(&self) -> HalfInt {
        self.alpha
    }
    pub fn beta(&self) -> HalfInt {
        self.beta
    }
    pub fn gamma(&self) -> HalfInt {
        self.gamma
    }

    /// Entries as a doubled-integer 6-tuple, usable as a hash/visited key.
    pub fn key(&self) -> [i64; 6] {
        [
            self.a.twice(),
            self.b.twice(),
            self.x.twice(),
            self.alpha.twice(),
            self.beta.twice(),
            self.gamma.twice(),
        ]
    }

    /// True when both the triangle condition and the projection bounds hold.
    pub fn selection_rules(&self) -> bool {
        is_triangle(self.a, self.b, self.x)
            && self.alpha.abs() <= self.a
            && self.beta.abs() <= self.b
            && self.gamma.abs() <= self.x
    }
}

/// Triangle condition |a-b| <= x <= a+b with integral perimeter.
pub fn is_triangle(a: HalfInt, b: HalfInt, x: HalfInt) -> bool {
    (a + b + x).is_integer() && (a - b).abs() <= x && x <= a + b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn triangle_examples() {
        assert!(is_triangle(h(2), h(6), h(4))); // (1,3,2)
        assert!(!is_triangle(h(2), h(6), h(10))); // (1,3,5): x > a+b
        assert!(is_triangle(h(1), h(1), h(2))); // (1/2,1/2,1): x = a+b
        assert!(!is_triangle(h(1), h(1), h(1))); // non-integral perimeter
    }

    #[test]
    fn selection_rule_examples() {
        let ok = ThreeJArgs::from_twice(2, 6, 4, 0, 0, 0).unwrap();
        assert!(ok.selection_rules());

        let alpha_too_big = ThreeJArgs::from_twice(2, 6, 4, 4, -4, 0).unwrap();
        assert!(!alpha_too_big.selection_rules());

        let half = ThreeJArgs::from_twice(1, 1, 2, 1, -1, 0).unwrap();
        assert!(half.selection_rules());
    }

    #[test]
    fn structural_violations_are_construction_errors() {
        assert!(matches!(
            ThreeJArgs::from_twice(-2, 6, 4, 0, 0, 0),
            Err(ArgsError::NegativeMomentum(_))
        ));
        assert!(matches!(
            ThreeJArgs::from_twice(2, 6, 4, 2, 0, 0),
            Err(ArgsError::ProjectionSum(_))
        ));
        assert!(matches!(
            ThreeJArgs::from_twice(2, 6, 4, 1, -1, 0),
            Err(ArgsError::ParityMismatch { .. })
        ));
        // non-integral a+b+x always surfaces as a parity mismatch
        assert!(matches!(
            ThreeJArgs::from_twice(1, 6, 4, 1, 0, -1),
            Err(ArgsError::ParityMismatch { .. })
        ));
    }
}
