use std::fmt;

use serde::{Serialize, Serializer};

use crate::scalar::Rational;

/// A value of some monoid family.
///
/// The variant is determined by the family: integer vectors for the lattice
/// families, exact rationals for the Puiseux-style families, residue vectors
/// for finite abelian groups and positive integers for the Hilbert monoid.
/// The derived order is the canonical order used for every sorted output
/// (vectors lexicographically, rationals by value).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Vector(Vec<i64>),
    Rational(Rational),
    Residues(Vec<u64>),
    Natural(u64),
}

impl Element {
    pub fn vector(v: impl Into<Vec<i64>>) -> Self {
        Element::Vector(v.into())
    }

    pub fn int(n: i64) -> Self {
        Element::Vector(vec![n])
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Element::Rational(crate::scalar::rat(n, d))
    }

    pub fn int_rational(n: i64) -> Self {
        Element::Rational(crate::scalar::int_rat(n))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Element::Vector(_) => "integer vector",
            Element::Rational(_) => "rational",
            Element::Residues(_) => "residue vector",
            Element::Natural(_) => "positive integer",
        }
    }

    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            Element::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Element::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_natural(&self) -> Option<u64> {
        match self {
            Element::Natural(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render_element(self))
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
