//! Gradings, the combinatorial factor `C(I)`, moduli-space dimensions and
//! the enumeration of index-zero puncture profiles.

mod profile;
mod signature;

pub use profile::{
    combinatorial_factor, degree_drop_check, enumerate_admissible_profiles, generator_degree,
    moduli_dimension, profile_monomial, PunctureProfile, PunctureRole,
};
pub use signature::{AlgebraSignature, OrbitRecord, TFormRecord};
