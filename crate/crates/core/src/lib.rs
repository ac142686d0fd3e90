//! Prime constellations in number fields, made computable: exact arithmetic in
//! rings of integers, ideal factorization, unit fundamental domains,
//! truncated von Mangoldt weights and binary quadratic forms.

pub mod arith;
pub mod constellation;
pub mod error;
pub mod experiments;
pub mod field;
pub mod ideal;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod primes;
pub mod quadform;
pub mod weights;

pub use error::{Error, Result};
pub use field::{AlgInt, Field};
pub use ideal::{FactoredIdeal, Ideal};
