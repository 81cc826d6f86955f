//! Graded differential algebras of symplectic field theory.
//!
//! The crate covers exact arithmetic in the contact homology, rational SFT and
//! full SFT algebras (with and without marked points), differentials given by
//! generator images, and the constructive machinery that turns a primitive of
//! the unit in one theory into primitives in all the others.

pub mod algebra;
pub mod cli;
pub mod corpus;
pub mod differential;
pub mod error;
pub mod index;
pub mod io;
pub mod linalg;
pub mod theorem;

pub use algebra::{Element, Flavor, GroupElement, Monomial, Parity, TruncationPolicy, Var};
pub use differential::DifferentialSpec;
pub use error::{Error, Result};
pub use index::{AlgebraSignature, OrbitRecord, TFormRecord};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;
