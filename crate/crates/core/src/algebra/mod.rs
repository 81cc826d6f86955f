//! Exact arithmetic in the graded algebras.
//!
//! Monomials are stored in normal order (q-block, p-block, t-block, each
//! sorted by generator index) with `hbar` and the group ring element kept as
//! central even factors. Coefficients are exact rationals.

mod element;
mod flavor;
mod monomial;
mod parse;
mod product;
mod truncation;

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

pub use element::{Element, ElementDisplay};
pub use flavor::Flavor;
pub use monomial::{filtration_weight, Monomial};
pub use product::{mul, mul_super, mul_weyl, normalize, pow};
pub use truncation::{truncate, TruncationPolicy};

/// A generator of one of the algebras. The derived order is the global
/// normal order: every q before every p before every t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Q(usize),
    P(usize),
    T(usize),
    Hbar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(degree: i64) -> Parity {
        if degree.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// An element of the free part `Z^b` of `H_2(M)/R`, written multiplicatively
/// as `e^A` in the group ring.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<i64>);

impl GroupElement {
    pub fn new(coords: Vec<i64>) -> Self {
        GroupElement(coords)
    }

    pub fn identity(rank: usize) -> Self {
        GroupElement(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn inverse(&self) -> Self {
        GroupElement(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;

    fn add(self, rhs: &GroupElement) -> GroupElement {
        debug_assert_eq!(self.rank(), rhs.rank());
        GroupElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_law() {
        let a = GroupElement::new(vec![1, -2]);
        let b = GroupElement::new(vec![3, 2]);
        assert_eq!(&a + &b, GroupElement::new(vec![4, 0]));
        assert!((&a + &a.inverse()).is_identity());
        assert!(GroupElement::identity(3).is_identity());
    }

    #[test]
    fn var_order_is_block_order() {
        assert!(Var::Q(9) < Var::P(0));
        assert!(Var::P(9) < Var::T(0));
        assert!(Var::Q(0) < Var::Q(1));
    }
}
