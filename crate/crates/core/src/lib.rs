//! Factorization invariants of cancellative commutative monoids.
//!
//! The crate computes atoms, factorization sets, length sets, unit groups
//! and Grothendieck groups for a fixed catalog of monoid families
//! ([`monoid::Family`]), decides atomicity, the ACCP and the BFM / FFM /
//! LFFM / HFM / LFM properties with re-checkable certificates and witnesses
//! ([`deciders`]), and runs the undermonoid constructions with bounded
//! verification reports ([`constructions`]).
//!
//! All arithmetic is exact. Every search is capped by a [`Budget`]; a cap
//! that runs out produces `Unknown` or a result flagged as not exhaustive,
//! never a wrong answer.
//!
//! ```
//! use monofact::{dsl, factor, Budget, Element};
//!
//! let spec = dsl::parse_spec("N<2,3>").unwrap();
//! let lengths = factor::length_set(&spec, &Element::int(6), &Budget::default()).unwrap();
//! assert_eq!(lengths.to_string(), "{2, 3}");
//! ```

pub mod arith;
pub mod constructions;
pub mod deciders;
pub mod dsl;
pub mod error;
pub mod factor;
pub mod lattice;
pub mod monoid;
pub mod query;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use monoid::{Budget, Element, Family, GroupDesc, MonoidSpec, Tri};
pub use scalar::{Rational, Scalar};

/// Integer coordinate type of lattice elements.
pub type Int = i64;
pub type IntVector = Vec<Int>;
