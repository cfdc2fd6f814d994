use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{is_prime, primes_up_to};
use crate::deciders::Property;
use crate::factor::{eval_factorization, factorizations, FactorSearchLimits, Factorization};
use crate::monoid::{Budget, Element, GroupDesc, MonoidSpec, Tri};
use crate::scalar::{rat, Rational};

/// Closed-form sequences `x_1, x_2, ...` with `x_{n+1} | x_n` strictly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainFormula {
    /// `(-n, 1)`.
    LexNegative,
    /// `1 / 2^n`.
    Halving,
    /// `(n + 1) / n` (multiplicative).
    ReciprocalSuccessor,
}

impl ChainFormula {
    pub fn term(self, n: u64) -> Element {
        match self {
            ChainFormula::LexNegative => Element::vector([-(n as i64), 1]),
            ChainFormula::Halving => Element::Rational(Rational::new(BigInt::from(1), BigInt::from(2).pow(n as u32))),
            ChainFormula::ReciprocalSuccessor => Element::rational(n as i64 + 1, n as i64),
        }
    }
}

impl fmt::Display for ChainFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainFormula::LexNegative => "(-n,1)",
            ChainFormula::Halving => "1/2^n",
            ChainFormula::ReciprocalSuccessor => "(n+1)/n",
        })
    }
}

/// A family of same-length factorizations of one element, indexed by `n >= start`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum FactorizationFamily {
    /// `(c - 1/n) + (c + 1/n)`.
    SymmetricPair {
        #[serde(serialize_with = "crate::scalar::serialize_rational")]
        center: Rational,
        start: u64,
    },
}

impl FactorizationFamily {
    pub fn start(&self) -> u64 {
        match self {
            FactorizationFamily::SymmetricPair { start, .. } => *start,
        }
    }

    pub fn member(&self, n: u64) -> Factorization {
        match self {
            FactorizationFamily::SymmetricPair { center, .. } => {
                let eps = rat(1, n as i64);
                Factorization::from_atoms([Element::Rational(center - &eps), Element::Rational(center + &eps)])
            }
        }
    }
}

impl fmt::Display for FactorizationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorizationFamily::SymmetricPair { center, start } => {
                write!(f, "({center}-1/n)+({center}+1/n) n>={start}")
            }
        }
    }
}

/// A family of factorizations of one element with unbounded lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthFamily {
    /// `1 = p * (1/p)`, of length `p`, for every prime `p`.
    PrimeReciprocalMultiples,
}

impl LengthFamily {
    pub fn member(self, p: u64) -> Factorization {
        match self {
            LengthFamily::PrimeReciprocalMultiples => Factorization::from_terms([(Element::rational(1, p as i64), p)]),
        }
    }
}

/// Counterexample attached to a `Fails` verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    /// A non-unit with no factorization into atoms.
    NonAtomicElement {
        element: Element,
        reason: String,
    },
    UnboundedLengths {
        element: Element,
        family: LengthFamily,
        lengths: Vec<u64>,
    },
    TwoLengths {
        element: Element,
        first: Factorization,
        second: Factorization,
    },
    SameLengthDistinct {
        element: Element,
        first: Factorization,
        second: Factorization,
    },
    AscendingChain {
        chain: ChainFormula,
        verified_depth: u64,
    },
    InfiniteSameLengthFamily {
        element: Element,
        family: FactorizationFamily,
        sample_count: u64,
    },
    /// Two Grothendieck groups that differ (undermonoid failure).
    GroupMismatch {
        ambient: GroupDesc,
        sub: GroupDesc,
    },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::NonAtomicElement { .. } => "NonAtomicElement",
            Witness::UnboundedLengths { .. } => "UnboundedLengths",
            Witness::TwoLengths { .. } => "TwoLengths",
            Witness::SameLengthDistinct { .. } => "SameLengthDistinct",
            Witness::AscendingChain { .. } => "AscendingChain",
            Witness::InfiniteSameLengthFamily { .. } => "InfiniteSameLengthFamily",
            Witness::GroupMismatch { .. } => "GroupMismatch",
        }
    }

    /// One-line description used in fixture expectations.
    pub fn summary(&self) -> String {
        match self {
            Witness::NonAtomicElement { element, .. } => format!("NonAtomicElement {element}"),
            Witness::UnboundedLengths { element, lengths, .. } => {
                let ls: Vec<String> = lengths.iter().map(u64::to_string).collect();
                format!("UnboundedLengths {element} {{{}}}", ls.join(", "))
            }
            Witness::TwoLengths { element, first, second } => format!("TwoLengths {element} {first} {second}"),
            Witness::SameLengthDistinct { element, first, second } => {
                format!("SameLengthDistinct {element} {first} {second}")
            }
            Witness::AscendingChain { chain, verified_depth } => {
                format!("AscendingChain {chain} depth {verified_depth}")
            }
            Witness::InfiniteSameLengthFamily { element, family, .. } => {
                format!("InfiniteSameLengthFamily {element} {family}")
            }
            Witness::GroupMismatch { ambient, sub } => format!("GroupMismatch {ambient} {sub}"),
        }
    }

    fn fits(&self, property: Property) -> bool {
        use Property::*;
        match self {
            Witness::NonAtomicElement { .. } => property != Undermonoid,
            Witness::UnboundedLengths { .. } => matches!(property, Bfm | Ffm),
            Witness::TwoLengths { .. } => property == Hfm,
            Witness::SameLengthDistinct { .. } => property == Lfm,
            Witness::AscendingChain { .. } => property == Accp,
            Witness::InfiniteSameLengthFamily { .. } => matches!(property, Lffm | Ffm),
            Witness::GroupMismatch { .. } => property == Undermonoid,
        }
    }
}

/// Outcome of re-checking a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "reason", rename_all = "snake_case")]
pub enum Validation {
    Valid,
    Invalid(String),
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        *self == Validation::Valid
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Ok(Validation::Invalid(format!($($msg)*)));
        }
    };
}

/// Re-verifies `witness` for `property` using only membership, divisibility
/// and factorization evaluation; families are checked for `depth` members.
pub fn validate_witness(
    spec: &MonoidSpec,
    property: Property,
    witness: &Witness,
    depth: u64,
    budget: &Budget,
) -> Validation {
    match check(spec, property, witness, depth, budget) {
        Ok(v) => v,
        Err(e) => Validation::Invalid(e.to_string()),
    }
}

/// `x` and `y` differ by a unit of `spec`.
fn associated(spec: &MonoidSpec, x: &Element, y: &Element, budget: &Budget) -> crate::error::Result<bool> {
    let Some(d) = spec.difference(x, y)? else { return Ok(false) };
    if spec.check_element(&d).is_err() || spec.contains_value(&d, budget)? != Tri::Yes {
        return Ok(false);
    }
    Ok(spec.is_unit(&d, budget)? == Tri::Yes)
}

fn check(
    spec: &MonoidSpec,
    property: Property,
    witness: &Witness,
    depth: u64,
    budget: &Budget,
) -> crate::error::Result<Validation> {
    ensure!(witness.fits(property), "{} does not witness the failure of {property}", witness.kind());
    match witness {
        Witness::NonAtomicElement { element, .. } => {
            ensure!(spec.contains(element, budget)? == Tri::Yes, "{element} is not in the monoid");
            ensure!(spec.is_unit(element, budget)? == Tri::No, "{element} is a unit");
            let fs = factorizations(spec, element, &FactorSearchLimits::from_budget(budget), budget)?;
            ensure!(fs.factorizations.is_empty(), "{element} has the factorization {}", fs.factorizations[0]);
            ensure!(fs.exhaustive, "the factorization search for {element} was not exhaustive");
        }
        Witness::UnboundedLengths { element, family, lengths } => {
            let distinct: BTreeSet<u64> = lengths.iter().copied().collect();
            ensure!(distinct.len() >= 2, "fewer than two distinct lengths");
            let mut indices: BTreeSet<u64> = distinct.clone();
            indices.extend(primes_up_to(2000).into_iter().take(depth as usize));
            for p in indices {
                ensure!(is_prime(p), "{p} is not an index of the family");
                let f = family.member(p);
                ensure!(f.length() == p, "member {p} has length {}", f.length());
                let v = eval_factorization(spec, &f, budget)?;
                ensure!(associated(spec, &v, element, budget)?, "member {p} evaluates to {v}, not {element}");
            }
        }
        Witness::TwoLengths { element, first, second } | Witness::SameLengthDistinct { element, first, second } => {
            for f in [first, second] {
                let v = eval_factorization(spec, f, budget)?;
                ensure!(associated(spec, &v, element, budget)?, "{f} evaluates to {v}, not {element}");
            }
            if let Witness::TwoLengths { .. } = witness {
                ensure!(first.length() != second.length(), "both factorizations have length {}", first.length());
            } else {
                ensure!(first.length() == second.length(), "lengths {} and {} differ", first.length(), second.length());
                ensure!(first != second, "the two factorizations are equal");
            }
        }
        Witness::AscendingChain { chain, .. } => {
            for n in 1..=depth {
                let (a, b) = (chain.term(n), chain.term(n + 1));
                ensure!(spec.check_element(&a).is_ok(), "{a} has the wrong shape");
                ensure!(spec.contains(&a, budget)? == Tri::Yes, "{a} is not in the monoid");
                ensure!(spec.contains(&b, budget)? == Tri::Yes, "{b} is not in the monoid");
                ensure!(spec.divides(&b, &a, budget)? == Tri::Yes, "{b} does not divide {a}");
                ensure!(spec.divides(&a, &b, budget)? == Tri::No, "{a} divides {b}, so the ideals coincide");
            }
        }
        Witness::InfiniteSameLengthFamily { element, family, sample_count } => {
            let count = depth.max(*sample_count);
            let mut seen = BTreeSet::new();
            let mut length = None;
            for n in family.start()..family.start() + count {
                let f = family.member(n);
                let v = eval_factorization(spec, &f, budget)?;
                ensure!(associated(spec, &v, element, budget)?, "member {n} evaluates to {v}, not {element}");
                ensure!(*length.get_or_insert(f.length()) == f.length(), "member {n} has a different length");
                ensure!(seen.insert(f), "member {n} repeats an earlier member");
            }
        }
        Witness::GroupMismatch { ambient, sub } => {
            ensure!(ambient.compare(sub) == Tri::No, "{ambient} and {sub} are not provably different");
        }
    }
    Ok(Validation::Valid)
}
