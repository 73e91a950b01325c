//! Ternary sums of generalized polygonal numbers `P_a(x) + P_b(y) + P_c(z)`:
//! arithmetic invariants, p-adic tools, exceptional square classes, an
//! almost-universality classifier and a bit-set representation sieve.

pub mod arith;
pub mod bitset;
pub mod classifier;
pub mod error;
pub mod exceptional;
pub mod localfield;
pub mod polynum;
pub mod search;

pub use error::{Error, Result};
pub use polynum::{PolygonalOrder, TripleInvariants};
