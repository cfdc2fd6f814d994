use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::prime_factors;
use crate::lattice::Lattice;
use crate::monoid::Tri;
use crate::scalar::Rational;

/// Description of a Grothendieck group or a unit group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDesc {
    /// Sublattice of `Z^dim` in Hermite normal form (never the zero lattice;
    /// that is [`GroupDesc::trivial`]).
    Lattice {
        dim: usize,
        basis: Vec<Vec<i64>>,
    },
    /// `g * Z` inside the rationals, `g > 0` in lowest terms.
    CyclicRational(Rational),
    /// Finite abelian group by invariant factors `d1 | d2 | ...`; empty is trivial.
    FiniteInvariantFactors(Vec<u64>),
    SymbolicQ,
    /// Rationals with squarefree denominator.
    SymbolicSquarefreeDenominators,
    /// `Z[1/2]`.
    SymbolicDyadic,
    /// Positive rationals under multiplication.
    SymbolicPositiveRationalsMul,
    SymbolicUnknown,
}

impl GroupDesc {
    pub fn trivial() -> Self {
        GroupDesc::FiniteInvariantFactors(Vec::new())
    }

    pub fn from_lattice(lattice: &Lattice<i64>) -> Self {
        if lattice.is_zero() {
            GroupDesc::trivial()
        } else {
            GroupDesc::Lattice { dim: lattice.dim(), basis: lattice.basis().to_vec() }
        }
    }

    pub fn full_lattice(dim: usize) -> Self {
        GroupDesc::from_lattice(&Lattice::full(dim))
    }

    /// Canonical invariant factors of `Z/m1 x ... x Z/mk`.
    pub fn finite(moduli: &[u64]) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &m in moduli {
            let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
            for p in prime_factors(m) {
                *counts.entry(p).or_default() += 1;
            }
            for (p, e) in counts {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let width = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, e) in exps.into_iter().enumerate() {
                factors[width - 1 - slot] *= p.pow(e);
            }
        }
        factors.retain(|&f| f > 1);
        GroupDesc::FiniteInvariantFactors(factors)
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, GroupDesc::FiniteInvariantFactors(f) if f.is_empty())
    }

    fn is_finite(&self) -> bool {
        matches!(self, GroupDesc::FiniteInvariantFactors(_))
    }

    /// Decidable equality: `Yes`/`No` when the two descriptions are
    /// comparable, `Unknown` otherwise (symbolic tags of different kinds,
    /// or either side unknown).
    pub fn compare(&self, other: &GroupDesc) -> Tri {
        use GroupDesc::*;
        match (self, other) {
            (SymbolicUnknown, _) | (_, SymbolicUnknown) => Tri::Unknown,
            (a, b) if a.is_finite() != b.is_finite() => Tri::No,
            (Lattice { .. }, Lattice { .. })
            | (CyclicRational(_), CyclicRational(_))
            | (FiniteInvariantFactors(_), FiniteInvariantFactors(_)) => Tri::from_bool(self == other),
            (a, b) if std::mem::discriminant(a) == std::mem::discriminant(b) => Tri::Yes,
            (SymbolicQ | SymbolicDyadic | SymbolicSquarefreeDenominators, CyclicRational(_))
            | (CyclicRational(_), SymbolicQ | SymbolicDyadic | SymbolicSquarefreeDenominators) => Tri::No,
            _ => Tri::Unknown,
        }
    }
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDesc::Lattice { basis, .. } => {
                let rows: Vec<String> = basis
                    .iter()
                    .map(|r| format!("({})", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(f, "lattice<{}>", rows.join(","))
            }
            GroupDesc::CyclicRational(g) => write!(f, "Z*{g}"),
            GroupDesc::FiniteInvariantFactors(fs) if fs.is_empty() => f.write_str("trivial"),
            GroupDesc::FiniteInvariantFactors(fs) => {
                f.write_str(&fs.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x "))
            }
            GroupDesc::SymbolicQ => f.write_str("Q"),
            GroupDesc::SymbolicSquarefreeDenominators => f.write_str("Q_squarefree_denominators"),
            GroupDesc::SymbolicDyadic => f.write_str("Z[1/2]"),
            GroupDesc::SymbolicPositiveRationalsMul => f.write_str("(Q>0,*)"),
            GroupDesc::SymbolicUnknown => f.write_str("unknown"),
        }
    }
}

impl Serialize for GroupDesc {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
