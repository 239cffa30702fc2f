//! Exponent multi-indices for the eight-variable monomial basis.

use std::cmp::Ordering;
use std::fmt;

use super::{FIRST_VELOCITY, NUM_VARS, VAR_NAMES};

/// Exponent vector of a monomial in the eight phase-space variables.
///
/// Ordered canonically: graded lexicographic (total degree first, then
/// lexicographic on the exponents), which makes coefficient maps iterate in a
/// deterministic, degree-ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex([u8; NUM_VARS]);

impl MultiIndex {
    pub fn new(exponents: [u8; NUM_VARS]) -> Self {
        MultiIndex(exponents)
    }

    /// The zero index (constant monomial).
    pub fn zero() -> Self {
        MultiIndex([0; NUM_VARS])
    }

    /// The first-order index of a single variable.
    pub fn unit(var: usize) -> Self {
        let mut e = [0; NUM_VARS];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn exponent(&self, var: usize) -> u8 {
        self.0[var]
    }

    pub fn exponents(&self) -> &[u8; NUM_VARS] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; NUM_VARS]
    }

    pub fn total_degree(&self) -> u8 {
        self.0.iter().sum()
    }

    /// Combined degree in the position block `(t, r, theta, phi)`.
    pub fn position_degree(&self) -> u8 {
        self.0[..FIRST_VELOCITY].iter().sum()
    }

    /// Combined degree in the velocity block `(dt, dr, dtheta, dphi)`.
    pub fn velocity_degree(&self) -> u8 {
        self.0[FIRST_VELOCITY..].iter().sum()
    }

    /// Componentwise sum (the index of a monomial product).
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let mut e = [0; NUM_VARS];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = self.0[i] + other.0[i];
        }
        MultiIndex(e)
    }

    /// Index with `var`'s exponent incremented by one.
    pub fn bump(&self, var: usize) -> MultiIndex {
        let mut e = self.0;
        e[var] += 1;
        MultiIndex(e)
    }

    /// `α! = Π αᵢ!` as a float (exact for the small exponents in use).
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&e| FACTORIALS[e as usize]).product()
    }
}

const FACTORIALS: [f64; 13] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
];

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "·")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", VAR_NAMES[i])?;
            } else {
                write!(f, "{}^{}", VAR_NAMES[i], e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_orders_by_total_degree_first() {
        let x3 = MultiIndex::new([3, 0, 0, 0, 0, 0, 0, 0]);
        let xy = MultiIndex::new([1, 1, 0, 0, 0, 0, 0, 0]);
        assert!(xy < x3);
        // Same degree: lexicographic on exponents.
        let x2 = MultiIndex::new([2, 0, 0, 0, 0, 0, 0, 0]);
        assert!(xy < x2);
    }

    #[test]
    fn degrees_split_by_class() {
        let m = MultiIndex::new([1, 0, 2, 0, 0, 3, 0, 1]);
        assert_eq!(m.total_degree(), 7);
        assert_eq!(m.position_degree(), 3);
        assert_eq!(m.velocity_degree(), 4);
    }

    #[test]
    fn factorial_is_componentwise_product() {
        let m = MultiIndex::new([2, 0, 0, 0, 3, 1, 0, 0]);
        assert_eq!(m.factorial(), 2.0 * 6.0);
    }

    #[test]
    fn display_uses_variable_names() {
        let m = MultiIndex::new([0, 1, 0, 0, 2, 0, 0, 0]);
        assert_eq!(m.to_string(), "r·dt^2");
        assert_eq!(MultiIndex::zero().to_string(), "1");
    }
}
