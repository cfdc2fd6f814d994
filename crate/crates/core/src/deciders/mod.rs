//! Tri-state deciders for atomicity, the ACCP and the length-based
//! factorization properties, with certificates and re-checkable witnesses.

mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{input, precondition, Result};
use crate::factor::{factorizations, FactorSearchLimits, FactorSet};
use crate::lattice::rational_kernel;
use crate::monoid::{sample_elements, Budget, Element, Family, GroupDesc, MonoidSpec, Tri};
use crate::scalar::{rat, Rational};

pub use witness::{validate_witness, ChainFormula, FactorizationFamily, LengthFamily, Validation, Witness};

/// Depth to which closed-form chains and families are re-verified before a
/// `Fails` verdict is returned.
pub const WITNESS_DEPTH: u64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Atomic,
    Accp,
    Bfm,
    Ffm,
    Lffm,
    Hfm,
    Lfm,
    /// Not a factorization property; used by undermonoid verdicts.
    Undermonoid,
}

impl Property {
    /// The seven factorization properties, in implication-lattice order.
    pub const ALL: [Property; 7] =
        [Property::Atomic, Property::Accp, Property::Bfm, Property::Ffm, Property::Lffm, Property::Hfm, Property::Lfm];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::Atomic => "atomic",
            Property::Accp => "accp",
            Property::Bfm => "bfm",
            Property::Ffm => "ffm",
            Property::Lffm => "lffm",
            Property::Hfm => "hfm",
            Property::Lfm => "lfm",
            Property::Undermonoid => "undermonoid",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Property {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .chain([Property::Undermonoid])
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| input(format!("unknown property `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

/// Where a verdict comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// A structural argument or an exact computation.
    Proved,
    /// A bounded search.
    Searched,
    /// The known-results registry.
    Cited,
}

/// One entry of the known-results registry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub family: String,
    pub property: String,
    pub status: String,
    pub source: String,
    pub justification: String,
}

#[derive(Deserialize)]
struct RegistryFile {
    version: u32,
    entry: Vec<RegistryEntry>,
}

/// The shipped registry, parsed once.
pub fn registry() -> &'static [RegistryEntry] {
    static REGISTRY: OnceLock<Vec<RegistryEntry>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let file: RegistryFile = toml::from_str(include_str!("registry.toml")).expect("shipped registry parses");
        assert_eq!(file.version, 1, "unsupported registry version");
        file.entry
    })
}

fn registry_lookup(family: &Family, property: Property) -> Option<&'static RegistryEntry> {
    registry().iter().find(|e| e.family == family.id() && e.property == property.as_str())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A grading positive on every non-unit generator: every element has
    /// finitely many divisors up to units and bounded factorization lengths.
    Grading {
        functional: Vec<i64>,
        atoms: Vec<Element>,
    },
    /// The monoid is a group, so there is nothing to factor.
    Vacuous {
        reason: String,
    },
    /// Exact linear algebra on the relations among atoms and units:
    /// `relation_rank` is the dimension of the atom-projected relation space,
    /// `length_neutral_rank` the dimension of its length-zero part.
    RelationRank {
        relation_rank: usize,
        length_neutral_rank: usize,
    },
    Structural {
        argument: String,
    },
    Registry {
        entry: RegistryEntry,
    },
    GroupsEqual {
        group: GroupDesc,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Certificate(Certificate),
    Witness(Witness),
    Exhausted(Budget),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub status: Status,
    pub source: Source,
    pub payload: Payload,
}

impl PropertyVerdict {
    fn holds(property: Property, source: Source, certificate: Certificate) -> Self {
        PropertyVerdict { property, status: Status::Holds, source, payload: Payload::Certificate(certificate) }
    }

    fn fails(property: Property, source: Source, witness: Witness) -> Self {
        PropertyVerdict { property, status: Status::Fails, source, payload: Payload::Witness(witness) }
    }

    fn unknown(property: Property, budget: &Budget) -> Self {
        PropertyVerdict {
            property,
            status: Status::Unknown,
            source: Source::Searched,
            payload: Payload::Exhausted(*budget),
        }
    }

    fn structural(property: Property, argument: &str) -> Self {
        Self::holds(property, Source::Proved, Certificate::Structural { argument: argument.to_string() })
    }

    fn cited(property: Property, family: &Family) -> Self {
        let entry = registry_lookup(family, property).expect("registry entry exists").clone();
        Self::holds(property, Source::Cited, Certificate::Registry { entry })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.payload {
            Payload::Witness(w) => Some(w),
            _ => None,
        }
    }

    /// One-line form used by fixtures: `holds proved`, `fails <witness>`, `unknown`.
    pub fn summary(&self) -> String {
        match (&self.status, &self.payload) {
            (Status::Fails, Payload::Witness(w)) => format!("fails {}", w.summary()),
            (Status::Unknown, _) => "unknown".to_string(),
            (Status::Holds, _) => format!("holds {}", self.source_str()),
            (Status::Fails, _) => "fails".to_string(),
        }
    }

    fn source_str(&self) -> &'static str {
        match self.source {
            Source::Proved => "proved",
            Source::Searched => "searched",
            Source::Cited => "cited",
        }
    }
}

pub fn decide(spec: &MonoidSpec, property: Property, budget: &Budget) -> Result<PropertyVerdict> {
    match property {
        Property::Atomic => decide_atomic(spec, budget),
        Property::Accp => decide_accp(spec, budget),
        Property::Undermonoid => Err(input("undermonoid needs two monoids; use is_undermonoid")),
        p => decide_length_property(spec, p, budget),
    }
}

/// Witness element for the families that have no atoms at all (or, for
/// the lex cone, none that reach it).
fn non_atomic_witness(family: &Family) -> Option<Witness> {
    let (element, reason) = match family {
        Family::LexCone => (Element::vector([0, 1]), "(0,1) = (-n,1) + (n,0) for every n; the only atom is (1,0)"),
        Family::Dyadic => (Element::int_rational(1), "every positive dyadic d splits as d/2 + d/2"),
        Family::RationalNonneg => (Element::int_rational(1), "every positive q splits as q/2 + q/2"),
        Family::MultRationalGe1 => {
            (Element::int_rational(2), "every q > 1 splits as ((q+1)/2) * (2q/(q+1)) with both factors > 1")
        }
        _ => return None,
    };
    Some(Witness::NonAtomicElement { element, reason: reason.to_string() })
}

fn chain_formula(family: &Family) -> Option<ChainFormula> {
    match family {
        Family::LexCone => Some(ChainFormula::LexNegative),
        Family::Dyadic | Family::RationalNonneg => Some(ChainFormula::Halving),
        Family::MultRationalGe1 => Some(ChainFormula::ReciprocalSuccessor),
        _ => None,
    }
}

fn grading_certificate(spec: &MonoidSpec) -> Result<Certificate> {
    let p = spec.presentation()?;
    Ok(Certificate::Grading {
        functional: p.grading().to_vec(),
        atoms: p.atoms().iter().map(|a| spec.element_from_lattice(a)).collect(),
    })
}

fn vacuous(property: Property) -> PropertyVerdict {
    PropertyVerdict::holds(
        property,
        Source::Proved,
        Certificate::Vacuous { reason: "the monoid is a group: every element is a unit".into() },
    )
}

pub fn decide_atomic(spec: &MonoidSpec, budget: &Budget) -> Result<PropertyVerdict> {
    let p = Property::Atomic;
    if spec.is_group()? {
        return Ok(vacuous(p));
    }
    let family = spec.family();
    Ok(match family {
        Family::FgLattice { .. } | Family::FgRational { .. } => {
            PropertyVerdict::holds(p, Source::Proved, grading_certificate(spec)?)
        }
        Family::PrimeReciprocal => {
            PropertyVerdict::structural(p, "each member is a finite sum of generators 1/p, all of which are atoms")
        }
        Family::RationalIntervalGe1 => {
            PropertyVerdict::structural(p, "q >= 2 equals 1 + (q - 1) with q - 1 >= 1, and [1,2) consists of atoms")
        }
        Family::ZcrossN0 => PropertyVerdict::structural(p, "(a, n) = (a, 1) + (n - 1)(0, 1) with atoms (x, 1)"),
        Family::CornerN2 => {
            PropertyVerdict::structural(p, "the grading m + n drops by at least 2 on every proper divisor")
        }
        Family::Hilbert => PropertyVerdict::structural(p, "the number of prime factors drops on every proper divisor"),
        _ => match non_atomic_witness(family) {
            Some(w) => checked_fails(spec, p, Source::Proved, w, budget),
            None => PropertyVerdict::unknown(p, budget),
        },
    })
}

pub fn decide_accp(spec: &MonoidSpec, budget: &Budget) -> Result<PropertyVerdict> {
    let p = Property::Accp;
    if spec.is_group()? {
        return Ok(vacuous(p));
    }
    let family = spec.family();
    Ok(match family {
        Family::FgLattice { .. } | Family::FgRational { .. } => {
            PropertyVerdict::holds(p, Source::Proved, grading_certificate(spec)?)
        }
        Family::CornerN2 | Family::Hilbert => {
            PropertyVerdict::structural(p, "a proper divisor has strictly smaller grade in a well-ordered set")
        }
        Family::PrimeReciprocal | Family::RationalIntervalGe1 | Family::ZcrossN0 => PropertyVerdict::cited(p, family),
        _ => match chain_formula(family) {
            Some(chain) => checked_fails(
                spec,
                p,
                Source::Proved,
                Witness::AscendingChain { chain, verified_depth: WITNESS_DEPTH },
                budget,
            ),
            None => PropertyVerdict::unknown(p, budget),
        },
    })
}

/// A `Fails` verdict, after re-validating its witness; a witness that does
/// not re-validate is a defect.
fn checked_fails(spec: &MonoidSpec, p: Property, source: Source, w: Witness, budget: &Budget) -> PropertyVerdict {
    let v = validate_witness(spec, p, &w, WITNESS_DEPTH, budget);
    assert!(v.is_valid(), "internal witness for {p} on {spec} does not validate: {v:?}");
    PropertyVerdict::fails(p, source, w)
}

pub fn decide_length_property(spec: &MonoidSpec, property: Property, budget: &Budget) -> Result<PropertyVerdict> {
    let p = property;
    if !matches!(p, Property::Bfm | Property::Ffm | Property::Lffm | Property::Hfm | Property::Lfm) {
        return Err(input(format!("{p} is not a length property")));
    }
    if spec.is_group()? {
        return Ok(vacuous(p));
    }
    let family = spec.family();
    if let Some(w) = non_atomic_witness(family) {
        return Ok(checked_fails(spec, p, Source::Proved, w, budget));
    }
    Ok(match (family, p) {
        (Family::FgLattice { .. } | Family::FgRational { .. }, Property::Bfm | Property::Ffm | Property::Lffm) => {
            PropertyVerdict::holds(p, Source::Proved, grading_certificate(spec)?)
        }
        (Family::FgLattice { .. } | Family::FgRational { .. }, _) => decide_fg_hfm_lfm(spec, p, budget)?,
        (Family::ZcrossN0, _) => {
            PropertyVerdict::structural(p, "modulo units every element (a, n) has the single factorization n * (0, 1)")
        }
        (Family::CornerN2 | Family::Hilbert, Property::Bfm | Property::Ffm | Property::Lffm) => {
            PropertyVerdict::structural(p, "every element has finitely many divisors, all found by bounded enumeration")
        }
        (Family::Hilbert, Property::Hfm) => PropertyVerdict::cited(p, family),
        (Family::PrimeReciprocal, Property::Bfm | Property::Ffm) => {
            let lengths: Vec<u64> = crate::arith::primes_up_to(budget.max_denominator);
            if lengths.len() < 2 {
                PropertyVerdict::unknown(p, budget)
            } else {
                let w = Witness::UnboundedLengths {
                    element: Element::int_rational(1),
                    family: LengthFamily::PrimeReciprocalMultiples,
                    lengths,
                };
                checked_fails(spec, p, Source::Proved, w, budget)
            }
        }
        (Family::PrimeReciprocal, Property::Lffm) => PropertyVerdict::structural(
            p,
            "in a length-l factorization only primes p <= l can occur beyond the forced residues, so Z_l(b) is finite",
        ),
        (Family::RationalIntervalGe1, Property::Bfm) => {
            PropertyVerdict::structural(p, "atoms lie in [1,2), so every length of q lies in (q/2, q]")
        }
        (Family::RationalIntervalGe1, Property::Ffm | Property::Lffm) => {
            let w = Witness::InfiniteSameLengthFamily {
                element: Element::int_rational(3),
                family: FactorizationFamily::SymmetricPair { center: rat(3, 2), start: 3 },
                sample_count: 10,
            };
            checked_fails(spec, p, Source::Proved, w, budget)
        }
        (_, Property::Hfm | Property::Lfm) => match scan_for_witness(spec, p, budget)? {
            Some(w) => checked_fails(spec, p, Source::Searched, w, budget),
            None => PropertyVerdict::unknown(p, budget),
        },
        _ => PropertyVerdict::unknown(p, budget),
    })
}

/// Exact HFM / LFM decision for finitely generated monoids.
///
/// Let `K` be the space of atom coefficient vectors `x` for which
/// `sum x_i a_i` is a unit (the relation space, projected to the atoms).
/// Two factorizations of one element differ by an integer vector of `K`,
/// and every integer vector of `K` splits as `x+ - x-` into two
/// factorizations of one element. Hence the monoid is half-factorial iff
/// the length functional vanishes on `K`, and length-factorial iff `K`
/// meets the kernel of the length functional only in 0.
fn decide_fg_hfm_lfm(spec: &MonoidSpec, p: Property, _budget: &Budget) -> Result<PropertyVerdict> {
    let pres = spec.presentation()?;
    let atoms = pres.atoms();
    let units = pres.units().basis();
    let k = atoms.len();
    let cols = k + units.len();
    let dim = pres.dim();
    let matrix: Vec<Vec<Rational>> = (0..dim)
        .map(|r| atoms.iter().chain(units.iter()).map(|v| Rational::from_integer(BigInt::from(v[r]))).collect())
        .collect();
    let relations: Vec<Vec<Rational>> = rational_kernel(&matrix, cols)
        .into_iter()
        .map(|z| z[..k].to_vec())
        .filter(|x| x.iter().any(|c| !c.is_zero()))
        .collect();
    let relation_rank = rational_rank(&relations, k);
    let length = |x: &[Rational]| x.iter().fold(Rational::zero(), |a, c| a + c);
    let length_nonzero = relations.iter().any(|x| !length(x).is_zero());
    let length_neutral_rank = relation_rank - usize::from(length_nonzero);
    let certificate = Certificate::RelationRank { relation_rank, length_neutral_rank };
    let holds = match p {
        Property::Hfm => !length_nonzero,
        _ => length_neutral_rank == 0,
    };
    if holds {
        return Ok(PropertyVerdict::holds(p, Source::Proved, certificate));
    }
    // a relation of the right kind: any with nonzero length for HFM; for LFM
    // a relation with zero length (kernel of the augmented system)
    let relation: Vec<Rational> = if p == Property::Hfm {
        relations.iter().find(|x| !length(x).is_zero()).expect("nonzero-length relation").clone()
    } else {
        let mut augmented = matrix.clone();
        let mut ones: Vec<Rational> = vec![Rational::from_integer(BigInt::from(1)); k];
        ones.extend(std::iter::repeat_n(Rational::zero(), units.len()));
        augmented.push(ones);
        rational_kernel(&augmented, cols)
            .into_iter()
            .map(|z| z[..k].to_vec())
            .find(|x| x.iter().any(|c| !c.is_zero()))
            .expect("length-neutral relation")
    };
    let witness = relation_witness(spec, &relation, p)?;
    Ok(checked_fails(spec, p, Source::Proved, witness, &Budget::default()))
}

/// Turns a rational relation among atoms into two factorizations.
fn relation_witness(spec: &MonoidSpec, relation: &[Rational], p: Property) -> Result<Witness> {
    let pres = spec.presentation()?;
    let denom = relation.iter().fold(BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<i64> = relation
        .iter()
        .map(|c| (c * Rational::from_integer(denom.clone())).to_integer().to_i64())
        .collect::<Option<_>>()
        .ok_or_else(|| crate::error::Error::Overflow("relation coefficients".into()))?;
    let g = crate::scalar::gcd_all(ints.iter().copied()).max(1);
    let atoms: Vec<Element> = pres.atoms().iter().map(|a| spec.element_from_lattice(a)).collect();
    let plus = crate::factor::Factorization::from_terms(atoms.iter().cloned().zip(ints.iter().map(|&c| {
        if c > 0 {
            (c / g) as u64
        } else {
            0
        }
    })));
    let minus = crate::factor::Factorization::from_terms(atoms.iter().cloned().zip(ints.iter().map(|&c| {
        if c < 0 {
            (-c / g) as u64
        } else {
            0
        }
    })));
    let (first, second) = if minus < plus { (minus, plus) } else { (plus, minus) };
    let element = crate::factor::eval_factorization(spec, &first, &Budget::default())?;
    Ok(if p == Property::Hfm {
        Witness::TwoLengths { element, first, second }
    } else {
        Witness::SameLengthDistinct { element, first, second }
    })
}

fn rational_rank(rows: &[Vec<Rational>], cols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    // rank = cols - nullity of the matrix whose rows are `rows`
    cols - rational_kernel(rows, cols).len()
}

/// Searches canonical-order samples for a TwoLengths (HFM) or
/// SameLengthDistinct (LFM) witness. Rational families are searched with
/// growing denominator caps, so the simplest witness is found first.
fn scan_for_witness(spec: &MonoidSpec, p: Property, budget: &Budget) -> Result<Option<Witness>> {
    let caps: Vec<u64> = match spec.family() {
        Family::PrimeReciprocal | Family::RationalIntervalGe1 => (1..=budget.max_denominator).collect(),
        _ => vec![budget.max_denominator],
    };
    for cap in caps {
        let region = budget.with_denominator(cap);
        let candidates: Vec<Element> = match spec.family() {
            Family::Hilbert => (1..=4001u64).step_by(4).map(Element::Natural).collect(),
            _ => sample_elements(spec, &region),
        };
        let limits = FactorSearchLimits::from_budget(&region);
        for c in candidates {
            if spec.is_unit(&c, budget)? != Tri::No {
                continue;
            }
            let fs = factorizations(spec, &c, &limits, &region)?;
            if let Some(w) = witness_in(&c, &fs, p) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

fn witness_in(element: &Element, fs: &FactorSet, p: Property) -> Option<Witness> {
    let first = fs.factorizations.first()?;
    if p == Property::Hfm {
        let second = fs.factorizations.iter().find(|f| f.length() != first.length())?;
        return Some(Witness::TwoLengths { element: element.clone(), first: first.clone(), second: second.clone() });
    }
    let mut by_length: BTreeMap<u64, Vec<&crate::factor::Factorization>> = BTreeMap::new();
    for f in &fs.factorizations {
        by_length.entry(f.length()).or_default().push(f);
    }
    let (_, group) = by_length.into_iter().find(|(_, g)| g.len() >= 2)?;
    Some(Witness::SameLengthDistinct { element: element.clone(), first: group[0].clone(), second: group[1].clone() })
}

/// Verdicts for all seven properties plus a consistency check against the
/// implication lattice. An inconsistency is a defect of this crate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub verdicts: Vec<PropertyVerdict>,
    pub consistent: bool,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn status(&self, p: Property) -> Status {
        self.verdicts.iter().find(|v| v.property == p).map(|v| v.status).unwrap_or(Status::Unknown)
    }

    pub fn summary(&self) -> String {
        let mut parts: Vec<String> = self
            .verdicts
            .iter()
            .map(|v| {
                let s = match v.status {
                    Status::Holds => "holds",
                    Status::Fails => "fails",
                    Status::Unknown => "unknown",
                };
                format!("{}={s}", v.property)
            })
            .collect();
        parts.push(if self.consistent { "consistent".into() } else { "INCONSISTENT".into() });
        parts.join(" ")
    }
}

pub fn implication_audit(spec: &MonoidSpec, budget: &Budget) -> Result<AuditReport> {
    let verdicts = Property::ALL.iter().map(|&p| decide(spec, p, budget)).collect::<Result<Vec<_>>>()?;
    let status: BTreeMap<Property, Status> = verdicts.iter().map(|v| (v.property, v.status)).collect();
    let violations = consistency_violations(&status);
    Ok(AuditReport { verdicts, consistent: violations.is_empty(), violations })
}

/// Pairs `(a, b)` with `a => b` in the implication lattice.
const IMPLICATIONS: [(Property, Property); 9] = [
    (Property::Ffm, Property::Bfm),
    (Property::Ffm, Property::Lffm),
    (Property::Hfm, Property::Bfm),
    (Property::Bfm, Property::Accp),
    (Property::Accp, Property::Atomic),
    (Property::Lffm, Property::Atomic),
    (Property::Lfm, Property::Atomic),
    (Property::Hfm, Property::Atomic),
    (Property::Ffm, Property::Atomic),
];

pub fn consistency_violations(status: &BTreeMap<Property, Status>) -> Vec<String> {
    let s = |p: Property| status.get(&p).copied().unwrap_or(Status::Unknown);
    let mut out = Vec::new();
    for (a, b) in IMPLICATIONS {
        if s(a) == Status::Holds && s(b) == Status::Fails {
            out.push(format!("{a} holds but {b} fails"));
        }
    }
    if s(Property::Ffm) == Status::Fails && s(Property::Bfm) == Status::Holds && s(Property::Lffm) == Status::Holds {
        out.push("bfm and lffm hold but ffm fails".into());
    }
    out
}

/// `sub` is an undermonoid of `ambient`: same Grothendieck group.
pub fn is_undermonoid(ambient: &MonoidSpec, sub: &MonoidSpec, budget: &Budget) -> Result<PropertyVerdict> {
    let p = Property::Undermonoid;
    if ambient.family().element_shape() != sub.family().element_shape()
        || ambient.family().is_multiplicative() != sub.family().is_multiplicative()
    {
        return Err(input(format!("{sub} and {ambient} have different element kinds")));
    }
    let checked: Vec<Element> = match sub.family() {
        Family::FgLattice { generators, .. } => generators.iter().cloned().map(Element::Vector).collect(),
        Family::FgRational { generators } => generators.iter().cloned().map(Element::Rational).collect(),
        _ => sample_elements(sub, budget),
    };
    for x in &checked {
        if ambient.contains(x, budget)? == Tri::No {
            return Err(precondition(format!("{x} lies in {sub} but not in {ambient}")));
        }
    }
    let (ga, gs) = (ambient.grothendieck()?, sub.grothendieck()?);
    Ok(match ga.compare(&gs) {
        Tri::Yes => PropertyVerdict::holds(p, Source::Proved, Certificate::GroupsEqual { group: ga }),
        Tri::No => PropertyVerdict::fails(p, Source::Proved, Witness::GroupMismatch { ambient: ga, sub: gs }),
        Tri::Unknown => PropertyVerdict::unknown(p, budget),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn registry_loads() {
        assert!(registry().len() >= 5);
        assert!(registry_lookup(&Family::ZcrossN0, Property::Accp).is_some());
    }

    #[test]
    fn numerical_two_three() {
        let s = MonoidSpec::numerical(&[2, 3]).unwrap();
        let v = decide(&s, Property::Hfm, &b()).unwrap();
        assert_eq!(v.summary(), "fails TwoLengths 6 [2,2,2] [3,3]");
        let v = decide(&s, Property::Lfm, &b()).unwrap();
        assert_eq!(v.status, Status::Holds);
        let a = implication_audit(&s, &b()).unwrap();
        assert!(a.consistent);
        assert_eq!(
            a.summary(),
            "atomic=holds accp=holds bfm=holds ffm=holds lffm=holds hfm=fails lfm=holds consistent"
        );
    }

    #[test]
    fn numerical_three_four_five_lfm() {
        let s = MonoidSpec::numerical(&[3, 4, 5]).unwrap();
        let v = decide(&s, Property::Lfm, &b()).unwrap();
        assert_eq!(v.summary(), "fails SameLengthDistinct 8 [3,5] [4,4]");
    }

    #[test]
    fn pattern_families() {
        let lex = MonoidSpec::lex_cone();
        assert_eq!(decide(&lex, Property::Atomic, &b()).unwrap().summary(), "fails NonAtomicElement (0,1)");
        assert_eq!(decide(&lex, Property::Accp, &b()).unwrap().summary(), "fails AscendingChain (-n,1) depth 20");
        assert_eq!(decide(&MonoidSpec::z_cross_n0(), Property::Accp, &b()).unwrap().summary(), "holds cited");
        let pr = MonoidSpec::prime_reciprocal();
        assert_eq!(decide(&pr, Property::Bfm, &b()).unwrap().summary(), "fails UnboundedLengths 1 {2, 3, 5, 7, 11}");
        let q = MonoidSpec::rational_interval_ge1();
        assert_eq!(
            decide(&q, Property::Lffm, &b()).unwrap().summary(),
            "fails InfiniteSameLengthFamily 3 (3/2-1/n)+(3/2+1/n) n>=3"
        );
        assert_eq!(decide(&q, Property::Hfm, &b()).unwrap().summary(), "fails TwoLengths 3 [1,1,1] [3/2,3/2]");
        let c = MonoidSpec::corner_n2();
        assert_eq!(
            decide(&c, Property::Hfm, &b()).unwrap().summary(),
            "fails TwoLengths (3,3) [(1,1),(1,1),(1,1)] [(1,2),(2,1)]"
        );
        let h = MonoidSpec::hilbert();
        assert_eq!(decide(&h, Property::Lfm, &b()).unwrap().summary(), "fails SameLengthDistinct 441 [9,49] [21,21]");
    }

    #[test]
    fn groups_hold_vacuously() {
        let g = MonoidSpec::group(vec![6]).unwrap();
        let a = implication_audit(&g, &b()).unwrap();
        assert!(a.verdicts.iter().all(|v| v.status == Status::Holds));
    }

    #[test]
    fn invalid_witnesses_are_rejected() {
        let s = MonoidSpec::numerical(&[2, 3]).unwrap();
        let f = crate::factor::Factorization::from_terms([(Element::int(2), 3)]);
        let w = Witness::TwoLengths { element: Element::int(6), first: f.clone(), second: f };
        assert!(!validate_witness(&s, Property::Hfm, &w, 10, &b()).is_valid());
        let w = Witness::AscendingChain { chain: ChainFormula::LexNegative, verified_depth: 20 };
        assert!(validate_witness(&MonoidSpec::lex_cone(), Property::Accp, &w, 20, &b()).is_valid());
        assert!(!validate_witness(&MonoidSpec::z_cross_n0(), Property::Accp, &w, 20, &b()).is_valid());
    }

    #[test]
    fn undermonoids() {
        let n23 = MonoidSpec::numerical(&[2, 3]).unwrap();
        let n25 = MonoidSpec::numerical(&[2, 5]).unwrap();
        let n46 = MonoidSpec::numerical(&[4, 6]).unwrap();
        assert_eq!(is_undermonoid(&n23, &n25, &b()).unwrap().status, Status::Holds);
        assert_eq!(is_undermonoid(&n23, &n46, &b()).unwrap().status, Status::Fails);
        let z = MonoidSpec::z_cross_n0();
        assert_eq!(is_undermonoid(&z, &MonoidSpec::lex_cone(), &b()).unwrap().status, Status::Holds);
        assert!(is_undermonoid(&n25, &n23, &b()).is_err());
    }
}
