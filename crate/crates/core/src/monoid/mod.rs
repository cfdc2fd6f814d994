//! Monoid families, their elements, membership, divisibility, units and
//! Grothendieck groups.

pub mod budget;
pub mod element;
pub mod group;
pub mod presentation;
mod sample;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{inverse_mod, is_squarefree, prime_factors};
use crate::error::{input, precondition, Error, Result};
use crate::lattice::Lattice;
use crate::scalar::{common_denominator, gcd_all, int_rat, Rational};

pub use budget::Budget;
pub use element::Element;
pub use group::GroupDesc;
pub use presentation::FgPresentation;
pub use sample::sample_elements;

/// Three-valued answer of a bounded decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl std::ops::Not for Tri {
    type Output = Tri;

    fn not(self) -> Tri {
        match self {
            Tri::Yes => Tri::No,
            Tri::No => Tri::Yes,
            Tri::Unknown => Tri::Unknown,
        }
    }
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn and(self, other: Tri) -> Self {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            _ => Tri::Unknown,
        }
    }

    pub fn or(self, other: Tri) -> Self {
        match (self, other) {
            (Tri::Yes, _) | (_, Tri::Yes) => Tri::Yes,
            (Tri::No, Tri::No) => Tri::No,
            _ => Tri::Unknown,
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Tri {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// The monoid families this crate knows how to compute with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Submonoid of `Z^dim` generated by finitely many vectors.
    FgLattice {
        dim: usize,
        generators: Vec<Vec<i64>>,
    },
    /// Submonoid of the nonnegative rationals generated by finitely many positive rationals.
    FgRational {
        generators: Vec<Rational>,
    },
    /// Generated by the reciprocals of all primes.
    PrimeReciprocal,
    /// `{0}` together with all rationals `>= 1`.
    RationalIntervalGe1,
    RationalNonneg,
    /// Rationals `>= 1` under multiplication.
    MultRationalGe1,
    /// Nonnegative dyadic rationals.
    Dyadic,
    /// `(N0 x {0}) u (Z x N)`.
    LexCone,
    /// `Z x N0`.
    ZcrossN0,
    /// `{(0,0)} u N^2`.
    CornerN2,
    /// Positive integers congruent to 1 mod 4 under multiplication.
    Hilbert,
    /// `Z/d1 x ... x Z/dk`; an empty list is the trivial group.
    FiniteAbelianGroup {
        invariant_factors: Vec<u64>,
    },
}

impl Family {
    /// Short identifier used by the DSL and the known-results registry.
    pub fn id(&self) -> &'static str {
        match self {
            Family::FgLattice { .. } => "FgLattice",
            Family::FgRational { .. } => "FgRational",
            Family::PrimeReciprocal => "PrimeRecip",
            Family::RationalIntervalGe1 => "Qge1",
            Family::RationalNonneg => "Qge0",
            Family::MultRationalGe1 => "MultQge1",
            Family::Dyadic => "Dyadic",
            Family::LexCone => "LexCone",
            Family::ZcrossN0 => "ZxN0",
            Family::CornerN2 => "CornerN2",
            Family::Hilbert => "Hilbert",
            Family::FiniteAbelianGroup { .. } => "Group",
        }
    }

    pub(crate) fn element_shape(&self) -> ElementShape {
        match self {
            Family::FgLattice { dim, .. } => ElementShape::Vector(*dim),
            Family::LexCone | Family::ZcrossN0 | Family::CornerN2 => ElementShape::Vector(2),
            Family::FgRational { .. }
            | Family::PrimeReciprocal
            | Family::RationalIntervalGe1
            | Family::RationalNonneg
            | Family::MultRationalGe1
            | Family::Dyadic => ElementShape::Rational,
            Family::Hilbert => ElementShape::Natural,
            Family::FiniteAbelianGroup { invariant_factors } => ElementShape::Residues(invariant_factors.len()),
        }
    }

    /// True for the families whose operation is multiplication.
    pub fn is_multiplicative(&self) -> bool {
        matches!(self, Family::MultRationalGe1 | Family::Hilbert)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ElementShape {
    Vector(usize),
    Rational,
    Natural,
    Residues(usize),
}

/// One monoid instance: a family plus an optional label.
///
/// Equality and hashing look at the family and label only; the cached
/// presentation of finitely generated families is derived data.
#[derive(Clone)]
pub struct MonoidSpec {
    family: Family,
    label: Option<String>,
    presentation: OnceLock<std::result::Result<FgPresentation, Error>>,
}

impl PartialEq for MonoidSpec {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.label == other.label
    }
}

impl Eq for MonoidSpec {}

impl Hash for MonoidSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.family.hash(state);
        self.label.hash(state);
    }
}

impl fmt::Debug for MonoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonoidSpec").field("family", &self.family).field("label", &self.label).finish()
    }
}

impl fmt::Display for MonoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render_spec(self))
    }
}

impl Serialize for MonoidSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl MonoidSpec {
    fn from_family(family: Family) -> Self {
        MonoidSpec { family, label: None, presentation: OnceLock::new() }
    }

    /// Finitely generated submonoid of `Z^dim`. Generators are sorted and
    /// deduplicated; zero vectors are rejected.
    pub fn fg_lattice(dim: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(input("lattice dimension must be positive"));
        }
        if generators.is_empty() {
            return Err(input("generator list must be nonempty"));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(input(format!("generator of length {} in dimension {dim}", g.len())));
        }
        if generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
            return Err(input("zero generator"));
        }
        let mut generators = generators;
        generators.sort();
        generators.dedup();
        Ok(Self::from_family(Family::FgLattice { dim, generators }))
    }

    /// Numerical monoid `<g1, ..., gk>` as a one-dimensional lattice monoid.
    pub fn numerical(generators: &[i64]) -> Result<Self> {
        if let Some(g) = generators.iter().find(|&&g| g <= 0) {
            return Err(input(format!("numerical generators must be positive, got {g}")));
        }
        Self::fg_lattice(1, generators.iter().map(|&g| vec![g]).collect())
    }

    /// Finitely generated Puiseux monoid. Zero generators are dropped.
    pub fn fg_rational(generators: Vec<Rational>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.is_negative()) {
            return Err(input(format!("rational generators must be nonnegative, got {g}")));
        }
        let mut generators: Vec<Rational> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        if generators.is_empty() {
            return Err(input("generator list must contain a positive rational"));
        }
        generators.sort();
        generators.dedup();
        Ok(Self::from_family(Family::FgRational { generators }))
    }

    /// Finite abelian group `Z/d1 x ... x Z/dk`; each factor must be at least 2.
    pub fn group(invariant_factors: Vec<u64>) -> Result<Self> {
        if let Some(d) = invariant_factors.iter().find(|&&d| d < 2) {
            return Err(input(format!("invariant factor {d} is smaller than 2")));
        }
        Ok(Self::from_family(Family::FiniteAbelianGroup { invariant_factors }))
    }

    /// One of the pattern families (no parameters).
    pub fn pattern(family: Family) -> Result<Self> {
        match family {
            Family::FgLattice { .. } | Family::FgRational { .. } | Family::FiniteAbelianGroup { .. } => {
                Err(input("parameterized family passed to MonoidSpec::pattern"))
            }
            f => Ok(Self::from_family(f)),
        }
    }

    pub fn prime_reciprocal() -> Self {
        Self::from_family(Family::PrimeReciprocal)
    }
    pub fn rational_interval_ge1() -> Self {
        Self::from_family(Family::RationalIntervalGe1)
    }
    pub fn rational_nonneg() -> Self {
        Self::from_family(Family::RationalNonneg)
    }
    pub fn mult_rational_ge1() -> Self {
        Self::from_family(Family::MultRationalGe1)
    }
    pub fn dyadic() -> Self {
        Self::from_family(Family::Dyadic)
    }
    pub fn lex_cone() -> Self {
        Self::from_family(Family::LexCone)
    }
    pub fn z_cross_n0() -> Self {
        Self::from_family(Family::ZcrossN0)
    }
    pub fn corner_n2() -> Self {
        Self::from_family(Family::CornerN2)
    }
    pub fn hilbert() -> Self {
        Self::from_family(Family::Hilbert)
    }

    /// Every pattern family plus representative finitely generated and
    /// finite-group instances, including the worked examples.
    pub fn catalog() -> Vec<MonoidSpec> {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        vec![
            Self::numerical(&[2, 3]).expect("valid"),
            Self::numerical(&[3, 4, 5]).expect("valid"),
            Self::numerical(&[1]).expect("valid"),
            Self::fg_lattice(2, vec![vec![1, 0], vec![-1, 0], vec![0, 1]]).expect("valid"),
            Self::fg_lattice(2, vec![vec![2, 0], vec![1, 1], vec![0, 2]]).expect("valid"),
            Self::fg_lattice(2, vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]).expect("valid"),
            Self::fg_rational(vec![r(1, 2), r(2, 3)]).expect("valid"),
            Self::fg_rational(vec![r(3, 2), r(5, 2)]).expect("valid"),
            Self::group(Vec::new()).expect("valid"),
            Self::group(vec![6]).expect("valid"),
            Self::group(vec![2, 4]).expect("valid"),
            Self::prime_reciprocal(),
            Self::rational_interval_ge1(),
            Self::rational_nonneg(),
            Self::mult_rational_ge1(),
            Self::dyadic(),
            Self::lex_cone(),
            Self::z_cross_n0(),
            Self::corner_n2(),
            Self::hilbert(),
        ]
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// True for the two finitely generated families backed by a presentation.
    pub fn is_finitely_generated(&self) -> bool {
        matches!(self.family, Family::FgLattice { .. } | Family::FgRational { .. })
    }

    /// Presentation of a finitely generated family (computed once).
    pub fn presentation(&self) -> Result<&FgPresentation> {
        let cached = self.presentation.get_or_init(|| match &self.family {
            Family::FgLattice { dim, generators } => FgPresentation::new(*dim, generators),
            Family::FgRational { generators } => {
                let scale = common_denominator(generators);
                let ints = generators
                    .iter()
                    .map(|g| {
                        (g * Rational::from_integer(scale.clone()))
                            .to_integer()
                            .to_i64()
                            .map(|v| vec![v])
                            .ok_or_else(|| Error::Overflow(format!("generator {g} does not fit after scaling")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                FgPresentation::new(1, &ints)
            }
            _ => Err(Error::Unsupported(format!("{} has no finite presentation", self.family.id()))),
        });
        cached.as_ref().map_err(Clone::clone)
    }

    /// Common denominator used to embed an `FgRational` monoid in `Z`.
    pub(crate) fn rational_scale(&self) -> Option<BigInt> {
        match &self.family {
            Family::FgRational { generators } => Some(common_denominator(generators)),
            _ => None,
        }
    }

    /// Lattice coordinates of an element of a finitely generated family;
    /// `None` when the element is not in the ambient lattice (for example a
    /// rational whose denominator does not divide the scale).
    pub(crate) fn to_lattice(&self, x: &Element) -> Option<Vec<i64>> {
        match (&self.family, x) {
            (Family::FgLattice { .. }, Element::Vector(v)) => Some(v.clone()),
            (Family::FgRational { .. }, Element::Rational(q)) => {
                let scale = self.rational_scale()?;
                let v = q * Rational::from_integer(scale);
                if v.is_integer() {
                    v.to_integer().to_i64().map(|n| vec![n])
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub(crate) fn element_from_lattice(&self, v: &[i64]) -> Element {
        match &self.family {
            Family::FgRational { .. } => {
                let scale = self.rational_scale().expect("rational family");
                Element::Rational(Rational::new(BigInt::from(v[0]), scale))
            }
            _ => Element::Vector(v.to_vec()),
        }
    }

    /// Checks that `x` has the shape of this family's elements.
    pub fn check_element(&self, x: &Element) -> Result<()> {
        let ok = match (self.family.element_shape(), x) {
            (ElementShape::Vector(d), Element::Vector(v)) => v.len() == d,
            (ElementShape::Rational, Element::Rational(_)) => true,
            (ElementShape::Natural, Element::Natural(n)) => *n >= 1,
            (ElementShape::Residues(k), Element::Residues(r)) => {
                let Family::FiniteAbelianGroup { invariant_factors } = &self.family else { unreachable!() };
                r.len() == k && r.iter().zip(invariant_factors).all(|(a, d)| a < d)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(input(format!("{} ({}) is not an element shape of {}", x, x.kind_name(), self)))
        }
    }

    pub fn identity(&self) -> Element {
        match self.family.element_shape() {
            ElementShape::Vector(d) => Element::Vector(vec![0; d]),
            ElementShape::Rational if self.family.is_multiplicative() => Element::Rational(Rational::one()),
            ElementShape::Rational => Element::Rational(Rational::zero()),
            ElementShape::Natural => Element::Natural(1),
            ElementShape::Residues(k) => Element::Residues(vec![0; k]),
        }
    }

    /// The family operation (addition, or multiplication for the
    /// multiplicative families). Does not check membership.
    pub fn op(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_shape(a)?;
        self.check_shape(b)?;
        Ok(match (a, b) {
            (Element::Vector(x), Element::Vector(y)) => Element::Vector(
                x.iter()
                    .zip(y)
                    .map(|(p, q)| p.checked_add(*q).ok_or_else(|| Error::Overflow("vector sum".into())))
                    .collect::<Result<_>>()?,
            ),
            (Element::Rational(x), Element::Rational(y)) if self.family.is_multiplicative() => Element::Rational(x * y),
            (Element::Rational(x), Element::Rational(y)) => Element::Rational(x + y),
            (Element::Natural(x), Element::Natural(y)) => {
                Element::Natural(x.checked_mul(*y).ok_or_else(|| Error::Overflow(format!("{x} * {y}")))?)
            }
            (Element::Residues(x), Element::Residues(y)) => {
                let Family::FiniteAbelianGroup { invariant_factors } = &self.family else { unreachable!() };
                Element::Residues(x.iter().zip(y).zip(invariant_factors).map(|((p, q), d)| (p + q) % d).collect())
            }
            _ => unreachable!("shapes checked above"),
        })
    }

    /// `k`-fold operation of `a` with itself (`identity` for `k = 0`).
    pub fn scale(&self, a: &Element, k: u64) -> Result<Element> {
        self.check_shape(a)?;
        Ok(match a {
            Element::Vector(v) => Element::Vector(
                v.iter()
                    .map(|x| {
                        i64::try_from(k)
                            .ok()
                            .and_then(|k| x.checked_mul(k))
                            .ok_or_else(|| Error::Overflow("vector multiple".into()))
                    })
                    .collect::<Result<_>>()?,
            ),
            Element::Rational(q) if self.family.is_multiplicative() => {
                let e = u32::try_from(k).map_err(|_| Error::Overflow("exponent".into()))?;
                Element::Rational(num_traits::pow(q.clone(), e as usize))
            }
            Element::Rational(q) => Element::Rational(q * int_rat(k as i64)),
            Element::Natural(n) => {
                let e = u32::try_from(k).map_err(|_| Error::Overflow("exponent".into()))?;
                Element::Natural(n.checked_pow(e).ok_or_else(|| Error::Overflow(format!("{n}^{k}")))?)
            }
            Element::Residues(r) => {
                let Family::FiniteAbelianGroup { invariant_factors } = &self.family else { unreachable!() };
                Element::Residues(
                    r.iter()
                        .zip(invariant_factors)
                        .map(|(x, d)| ((*x as u128 * k as u128) % *d as u128) as u64)
                        .collect(),
                )
            }
        })
    }

    /// The unique `c` in the group of fractions with `a * c = b`, when it is
    /// representable as an element (for the Hilbert monoid: when `a | b` in `N`).
    pub fn difference(&self, a: &Element, b: &Element) -> Result<Option<Element>> {
        self.check_shape(a)?;
        self.check_shape(b)?;
        Ok(match (a, b) {
            (Element::Vector(x), Element::Vector(y)) => {
                let d: Option<Vec<i64>> = y.iter().zip(x).map(|(p, q)| p.checked_sub(*q)).collect();
                Some(Element::Vector(d.ok_or_else(|| Error::Overflow("vector difference".into()))?))
            }
            (Element::Rational(x), Element::Rational(y)) if self.family.is_multiplicative() => {
                if x.is_zero() {
                    None
                } else {
                    Some(Element::Rational(y / x))
                }
            }
            (Element::Rational(x), Element::Rational(y)) => Some(Element::Rational(y - x)),
            (Element::Natural(x), Element::Natural(y)) => (y % x == 0).then(|| Element::Natural(y / x)),
            (Element::Residues(x), Element::Residues(y)) => {
                let Family::FiniteAbelianGroup { invariant_factors } = &self.family else { unreachable!() };
                Some(Element::Residues(
                    x.iter().zip(y).zip(invariant_factors).map(|((p, q), d)| (q + d - p) % d).collect(),
                ))
            }
            _ => unreachable!("shapes checked above"),
        })
    }

    /// Inverse in the group of fractions, when representable.
    pub fn inverse(&self, x: &Element) -> Result<Option<Element>> {
        self.difference(x, &self.identity())
    }

    fn check_shape(&self, x: &Element) -> Result<()> {
        // like check_element but accepts non-canonical values that arithmetic
        // produces (negative vectors, any rational, any positive integer)
        let ok = matches!(
            (self.family.element_shape(), x),
            (ElementShape::Vector(_), Element::Vector(_))
                | (ElementShape::Rational, Element::Rational(_))
                | (ElementShape::Natural, Element::Natural(_))
                | (ElementShape::Residues(_), Element::Residues(_))
        );
        if ok {
            self.check_element(x)
        } else {
            Err(input(format!("{} ({}) is not an element shape of {}", x, x.kind_name(), self)))
        }
    }

    /// Membership. Pattern families answer in closed form; finitely
    /// generated families search under the node budget.
    pub fn contains(&self, x: &Element, budget: &Budget) -> Result<Tri> {
        self.check_element(x)?;
        Ok(match (&self.family, x) {
            (Family::FgLattice { .. } | Family::FgRational { .. }, _) => match self.to_lattice(x) {
                None => Tri::No,
                Some(v) => self.presentation()?.contains(&v, budget.max_nodes),
            },
            (Family::PrimeReciprocal, Element::Rational(q)) => Tri::from_bool(prime_reciprocal_split(q).is_some()),
            (Family::RationalIntervalGe1, Element::Rational(q)) => Tri::from_bool(q.is_zero() || *q >= Rational::one()),
            (Family::RationalNonneg, Element::Rational(q)) => Tri::from_bool(!q.is_negative()),
            (Family::MultRationalGe1, Element::Rational(q)) => Tri::from_bool(*q >= Rational::one()),
            (Family::Dyadic, Element::Rational(q)) => Tri::from_bool(!q.is_negative() && is_power_of_two(q.denom())),
            (Family::LexCone, Element::Vector(v)) => Tri::from_bool(v[1] > 0 || (v[1] == 0 && v[0] >= 0)),
            (Family::ZcrossN0, Element::Vector(v)) => Tri::from_bool(v[1] >= 0),
            (Family::CornerN2, Element::Vector(v)) => {
                Tri::from_bool((v[0] == 0 && v[1] == 0) || (v[0] >= 1 && v[1] >= 1))
            }
            (Family::Hilbert, Element::Natural(n)) => Tri::from_bool(n % 4 == 1),
            (Family::FiniteAbelianGroup { .. }, Element::Residues(_)) => Tri::Yes,
            _ => unreachable!("element shape checked"),
        })
    }

    /// Membership of a value that may fall outside the canonical element
    /// shape (a negative vector is fine, a non-canonical residue is not).
    pub(crate) fn contains_value(&self, x: &Element, budget: &Budget) -> Result<Tri> {
        if let Element::Natural(0) = x {
            return Ok(Tri::No);
        }
        self.contains(x, budget)
    }

    /// `a` divides `b`: `b = a * c` for some `c` in the monoid.
    pub fn divides(&self, a: &Element, b: &Element, budget: &Budget) -> Result<Tri> {
        for (name, v) in [("a", a), ("b", b)] {
            match self.contains(v, budget)? {
                Tri::No => return Err(precondition(format!("{name} = {v} is not in {self}"))),
                Tri::Unknown => return Ok(Tri::Unknown),
                Tri::Yes => {}
            }
        }
        match self.difference(a, b)? {
            None => Ok(Tri::No),
            Some(c) => self.contains_value(&c, budget),
        }
    }

    /// `x` is invertible in the monoid.
    pub fn is_unit(&self, x: &Element, budget: &Budget) -> Result<Tri> {
        match self.contains(x, budget)? {
            Tri::No => return Err(precondition(format!("{x} is not in {self}"))),
            Tri::Unknown => return Ok(Tri::Unknown),
            Tri::Yes => {}
        }
        if let Family::FgLattice { .. } | Family::FgRational { .. } = self.family {
            let v = self.to_lattice(x).expect("member lies in the lattice");
            return Ok(Tri::from_bool(self.presentation()?.is_unit(&v)));
        }
        match self.inverse(x)? {
            None => Ok(Tri::No),
            Some(inv) => self.contains_value(&inv, budget),
        }
    }

    /// True when the whole monoid is a group (every element a unit).
    pub fn is_group(&self) -> Result<bool> {
        Ok(match &self.family {
            Family::FiniteAbelianGroup { .. } => true,
            Family::FgLattice { .. } | Family::FgRational { .. } => self.presentation()?.is_group(),
            _ => false,
        })
    }

    /// The group of units.
    pub fn units_group(&self) -> Result<GroupDesc> {
        Ok(match &self.family {
            Family::FgLattice { .. } => GroupDesc::from_lattice(self.presentation()?.units()),
            Family::ZcrossN0 => GroupDesc::from_lattice(&Lattice::from_generators(2, &[vec![1, 0]])),
            Family::FiniteAbelianGroup { invariant_factors } => GroupDesc::finite(invariant_factors),
            _ => GroupDesc::trivial(),
        })
    }

    /// The Grothendieck group.
    pub fn grothendieck(&self) -> Result<GroupDesc> {
        Ok(match &self.family {
            Family::FgLattice { .. } => GroupDesc::from_lattice(self.presentation()?.lattice()),
            Family::FgRational { generators } => {
                let scale = common_denominator(generators);
                let numerators: Vec<BigInt> =
                    generators.iter().map(|g| (g * Rational::from_integer(scale.clone())).to_integer()).collect();
                GroupDesc::CyclicRational(Rational::new(gcd_all(numerators), scale))
            }
            Family::RationalIntervalGe1 | Family::RationalNonneg => GroupDesc::SymbolicQ,
            Family::Dyadic => GroupDesc::SymbolicDyadic,
            Family::PrimeReciprocal => GroupDesc::SymbolicSquarefreeDenominators,
            Family::MultRationalGe1 => GroupDesc::SymbolicPositiveRationalsMul,
            Family::LexCone | Family::ZcrossN0 | Family::CornerN2 => GroupDesc::full_lattice(2),
            Family::FiniteAbelianGroup { invariant_factors } => GroupDesc::finite(invariant_factors),
            Family::Hilbert => GroupDesc::SymbolicUnknown,
        })
    }
}

fn is_power_of_two(d: &BigInt) -> bool {
    d.is_positive() && (d & (d - BigInt::one())).is_zero()
}

/// For `q` in the monoid generated by the prime reciprocals: the forced
/// residues `(p, a_p)` for each prime `p | d(q)`, with `1 <= a_p < p`, and the
/// integer `m = q - sum a_p / p >= 0` left to distribute. `None` when `q` is
/// not in the monoid.
///
/// Any factorization uses `c_p` copies of `1/p` with `c_p = a_p (mod p)` for
/// `p | d(q)` and `c_p = 0 (mod p)` otherwise, so `q` is a member exactly when
/// `d(q)` is squarefree and `m >= 0`.
pub(crate) fn prime_reciprocal_split(q: &Rational) -> Option<(Vec<(u64, u64)>, BigInt)> {
    if q.is_negative() {
        return None;
    }
    let d = q.denom().to_u64()?;
    if !is_squarefree(d) {
        return None;
    }
    let n = q.numer();
    let mut residues = Vec::new();
    let mut rest = q.clone();
    for p in prime_factors(d) {
        let cofactor = (d / p) as i128;
        let n_mod = n.mod_floor(&BigInt::from(p)).to_i128().expect("residue fits");
        let a = (n_mod * inverse_mod(cofactor, p as i128)).rem_euclid(p as i128) as u64;
        rest -= Rational::new(BigInt::from(a), BigInt::from(p));
        residues.push((p, a));
    }
    debug_assert!(rest.is_integer());
    let m = rest.to_integer();
    (!m.is_negative()).then_some((residues, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn membership_examples() {
        let pr = MonoidSpec::prime_reciprocal();
        assert_eq!(pr.contains(&Element::rational(5, 6), &b()).unwrap(), Tri::Yes);
        assert_eq!(pr.contains(&Element::rational(1, 6), &b()).unwrap(), Tri::No);
        assert_eq!(pr.contains(&Element::rational(1, 4), &b()).unwrap(), Tri::No);
        assert_eq!(pr.contains(&Element::rational(7, 6), &b()).unwrap(), Tri::Yes);
        let lex = MonoidSpec::lex_cone();
        assert_eq!(lex.contains(&Element::vector([-3, 2]), &b()).unwrap(), Tri::Yes);
        assert_eq!(lex.contains(&Element::vector([-3, 0]), &b()).unwrap(), Tri::No);
        let n23 = MonoidSpec::numerical(&[2, 3]).unwrap();
        assert_eq!(n23.contains(&Element::int(1), &b()).unwrap(), Tri::No);
    }

    #[test]
    fn shape_mismatch_is_an_input_error() {
        let n23 = MonoidSpec::numerical(&[2, 3]).unwrap();
        assert!(matches!(n23.contains(&Element::rational(1, 2), &b()), Err(Error::Input(_))));
        assert!(matches!(n23.contains(&Element::vector([1, 2]), &b()), Err(Error::Input(_))));
    }

    #[test]
    fn divisibility_examples() {
        let n23 = MonoidSpec::numerical(&[2, 3]).unwrap();
        assert_eq!(n23.divides(&Element::int(2), &Element::int(6), &b()).unwrap(), Tri::Yes);
        assert_eq!(n23.divides(&Element::int(2), &Element::int(3), &b()).unwrap(), Tri::No);
        assert!(matches!(n23.divides(&Element::int(1), &Element::int(3), &b()), Err(Error::Precondition(_))));
        let z = MonoidSpec::z_cross_n0();
        assert_eq!(z.divides(&Element::vector([5, 1]), &Element::vector([0, 1]), &b()).unwrap(), Tri::Yes);
    }

    #[test]
    fn unit_examples() {
        let z = MonoidSpec::z_cross_n0();
        assert_eq!(z.is_unit(&Element::vector([7, 0]), &b()).unwrap(), Tri::Yes);
        assert_eq!(z.is_unit(&Element::vector([0, 1]), &b()).unwrap(), Tri::No);
        let g = MonoidSpec::group(vec![6]).unwrap();
        for r in 0..6 {
            assert_eq!(g.is_unit(&Element::Residues(vec![r]), &b()).unwrap(), Tri::Yes);
        }
        let h = MonoidSpec::hilbert();
        assert_eq!(h.is_unit(&Element::Natural(1), &b()).unwrap(), Tri::Yes);
        assert_eq!(h.is_unit(&Element::Natural(5), &b()).unwrap(), Tri::No);
    }

    #[test]
    fn groups_of_units_and_fractions() {
        let n23 = MonoidSpec::numerical(&[2, 3]).unwrap();
        assert!(n23.units_group().unwrap().is_trivial());
        assert_eq!(n23.grothendieck().unwrap(), GroupDesc::full_lattice(1));
        assert_eq!(
            MonoidSpec::z_cross_n0().units_group().unwrap(),
            GroupDesc::Lattice { dim: 2, basis: vec![vec![1, 0]] }
        );
        assert!(MonoidSpec::lex_cone().units_group().unwrap().is_trivial());
        assert_eq!(MonoidSpec::rational_interval_ge1().grothendieck().unwrap(), GroupDesc::SymbolicQ);
        assert_eq!(MonoidSpec::corner_n2().grothendieck().unwrap(), GroupDesc::full_lattice(2));
        let q = MonoidSpec::fg_rational(vec![rat(2, 3), rat(1, 2)]).unwrap();
        assert_eq!(q.grothendieck().unwrap(), GroupDesc::CyclicRational(rat(1, 6)));
    }

    #[test]
    fn fg_rational_membership_scales_exactly() {
        let q = MonoidSpec::fg_rational(vec![rat(2, 3), rat(1, 2)]).unwrap();
        assert_eq!(q.contains(&Element::rational(7, 6), &b()).unwrap(), Tri::Yes);
        assert_eq!(q.contains(&Element::rational(1, 6), &b()).unwrap(), Tri::No);
        assert_eq!(q.contains(&Element::rational(1, 5), &b()).unwrap(), Tri::No);
    }

    #[test]
    fn prime_reciprocal_split_is_exact() {
        let (res, m) = prime_reciprocal_split(&rat(5, 6)).unwrap();
        assert_eq!(res, vec![(2, 1), (3, 1)]);
        assert!(m.is_zero());
        let (res, m) = prime_reciprocal_split(&rat(1, 1)).unwrap();
        assert!(res.is_empty());
        assert_eq!(m, BigInt::from(1));
    }

    #[test]
    fn tri_logic() {
        assert_eq!(Tri::Yes.and(Tri::Unknown), Tri::Unknown);
        assert_eq!(Tri::No.and(Tri::Unknown), Tri::No);
        assert_eq!(Tri::Yes.or(Tri::Unknown), Tri::Yes);
        assert_eq!(!Tri::Unknown, Tri::Unknown);
    }
}
