//! Exact combinatorics of the symmetric join operad.
//!
//! Bottom-up: [`oscalc`] (morphisms of Δ, O and OΣ) → [`presheaves`] →
//! [`joins`] → [`chains`] → [`operads`] → [`coactions`] → [`surjbridge`].
//! Everything is exact; coefficient rings are type parameters (see
//! [`scalar::Ring`]) with aliases below for the common choices.

pub mod chains;
pub mod coactions;
pub mod joins;
pub mod lincomb;
pub mod linalg;
pub mod oscalc;
pub mod operads;
pub mod presheaves;
pub mod report;
pub mod scalar;
pub mod surjbridge;
pub mod verify;

pub use num_bigint::BigInt;
pub use scalar::{Field, Fp, Ring};

/// Integer coefficients for chain-level work.
pub type Z = i64;
/// The field with two elements.
pub type F2 = scalar::Fp<2>;
/// The field with three elements.
pub type F3 = scalar::Fp<3>;
