//! Atoms, factorizations, length sets, and the Dickson-order utilities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{is_prime, prime_factors, primes_up_to};
use crate::constructions::{hilbert_classify, HilbertClass};
use crate::error::{input, precondition, Result};
use crate::monoid::budget::Meter;
use crate::monoid::presentation::FgPresentation;
use crate::monoid::{prime_reciprocal_split, Budget, Element, Family, MonoidSpec, Tri};
use crate::scalar::{common_denominator, rat, Rational, Scalar};

/// A finite multiset of atom representatives.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factorization {
    terms: BTreeMap<Element, u64>,
}

impl Factorization {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Merges repeated atoms and drops zero multiplicities.
    pub fn from_terms(terms: impl IntoIterator<Item = (Element, u64)>) -> Self {
        let mut map = BTreeMap::new();
        for (a, k) in terms {
            if k > 0 {
                *map.entry(a).or_insert(0) += k;
            }
        }
        Factorization { terms: map }
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Element>) -> Self {
        Self::from_terms(atoms.into_iter().map(|a| (a, 1)))
    }

    pub fn terms(&self) -> &BTreeMap<Element, u64> {
        &self.terms
    }

    pub fn length(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Atoms listed with multiplicity in canonical order.
    pub fn atoms(&self) -> Vec<Element> {
        self.terms.iter().flat_map(|(a, &k)| std::iter::repeat_n(a.clone(), k as usize)).collect()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms().iter().map(Element::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(String, u64)> = self.terms.iter().map(|(a, &k)| (a.to_string(), k)).collect();
        let mut s = serializer.serialize_struct("Factorization", 2)?;
        s.serialize_field("terms", &terms)?;
        s.serialize_field("length", &self.length())?;
        s.end()
    }
}

/// Renders a set of factorizations as `{[2,2,2], [3,3]}`.
pub fn render_factorizations(fs: &[Factorization]) -> String {
    let parts: Vec<String> = fs.iter().map(Factorization::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Bounds for a factorization search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FactorSearchLimits {
    /// Restrict to factorizations of exactly this length.
    pub exact_length: Option<u64>,
    pub max_length: Option<u64>,
    pub max_results: usize,
    /// Largest atom denominator tried by the rational pattern families.
    pub max_denominator: u64,
}

impl FactorSearchLimits {
    pub fn from_budget(budget: &Budget) -> Self {
        FactorSearchLimits {
            exact_length: None,
            max_length: None,
            max_results: budget.max_results,
            max_denominator: budget.max_denominator,
        }
    }

    pub fn with_exact_length(mut self, l: u64) -> Self {
        self.exact_length = Some(l);
        self
    }

    pub fn with_max_length(mut self, l: u64) -> Self {
        self.max_length = Some(l);
        self
    }

    pub fn with_max_results(mut self, k: usize) -> Self {
        self.max_results = k.max(1);
        self
    }

    fn accepts(&self, len: u64) -> bool {
        self.exact_length.is_none_or(|l| l == len) && self.max_length.is_none_or(|l| len <= l)
    }

    fn length_cap(&self) -> Option<u64> {
        match (self.exact_length, self.max_length) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Result of [`factorizations`]: canonically sorted, with an exhaustiveness flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorSet {
    pub factorizations: Vec<Factorization>,
    /// True iff the search provably produced the whole requested set.
    pub exhaustive: bool,
}

impl FactorSet {
    fn finish(set: BTreeSet<Factorization>, complete: bool, limits: &FactorSearchLimits) -> Self {
        let mut factorizations: Vec<Factorization> = set.into_iter().collect();
        let mut exhaustive = complete;
        if factorizations.len() > limits.max_results {
            factorizations.truncate(limits.max_results);
            exhaustive = false;
        }
        FactorSet { factorizations, exhaustive }
    }

    pub fn lengths(&self) -> BTreeSet<u64> {
        self.factorizations.iter().map(Factorization::length).collect()
    }
}

/// Atoms found in a bounded region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomList {
    pub atoms: Vec<Element>,
    /// True when the full atom set (modulo units) is listed.
    pub exhaustive: bool,
}

/// `L(b)`, exactly, symbolically, or truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LengthSet {
    Finite(BTreeSet<u64>),
    /// All primes; members are generated up to `bound`.
    SymbolicAllPrimesUpTo {
        bound: u64,
    },
    /// All integers `l` with `lower < l <= upper`.
    SymbolicIntegerInterval {
        lower_exclusive: Rational,
        upper_inclusive: Rational,
    },
    /// Lengths seen by a search that did not finish.
    Truncated(BTreeSet<u64>),
}

impl LengthSet {
    /// The concrete members this value describes (for the prime form, the
    /// primes up to the bound).
    pub fn members(&self) -> Vec<u64> {
        match self {
            LengthSet::Finite(s) | LengthSet::Truncated(s) => s.iter().copied().collect(),
            LengthSet::SymbolicAllPrimesUpTo { bound } => primes_up_to(*bound),
            LengthSet::SymbolicIntegerInterval { lower_exclusive, upper_inclusive } => {
                let lo = lower_exclusive.floor().to_integer() + BigInt::one();
                let hi = upper_inclusive.floor().to_integer();
                let (Some(lo), Some(hi)) = (lo.to_u64(), hi.to_u64()) else { return Vec::new() };
                (lo..=hi).collect()
            }
        }
    }

    /// True when `members` is the complete length set.
    pub fn is_exact(&self) -> bool {
        matches!(self, LengthSet::Finite(_) | LengthSet::SymbolicIntegerInterval { .. })
    }

    fn kind(&self) -> &'static str {
        match self {
            LengthSet::Finite(_) => "finite",
            LengthSet::SymbolicAllPrimesUpTo { .. } => "all_primes",
            LengthSet::SymbolicIntegerInterval { .. } => "integer_interval",
            LengthSet::Truncated(_) => "truncated",
        }
    }
}

fn render_set(xs: &[u64]) -> String {
    format!("{{{}}}", xs.iter().map(u64::to_string).collect::<Vec<_>>().join(", "))
}

impl fmt::Display for LengthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members = render_set(&self.members());
        match self {
            LengthSet::Finite(_) => f.write_str(&members),
            LengthSet::SymbolicAllPrimesUpTo { bound } => write!(f, "primes<={bound} {members}"),
            LengthSet::SymbolicIntegerInterval { lower_exclusive, upper_inclusive } => {
                write!(f, "({lower_exclusive}, {upper_inclusive}] {members}")
            }
            LengthSet::Truncated(_) => write!(f, "{members} truncated"),
        }
    }
}

impl Serialize for LengthSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LengthSet", 4)?;
        s.serialize_field("kind", self.kind())?;
        s.serialize_field("members", &self.members())?;
        s.serialize_field("exact", &self.is_exact())?;
        match self {
            LengthSet::SymbolicAllPrimesUpTo { bound } => {
                s.serialize_field("closed_form", &format!("primes (shown up to {bound})"))?
            }
            LengthSet::SymbolicIntegerInterval { lower_exclusive, upper_inclusive } => {
                s.serialize_field("closed_form", &format!("{lower_exclusive} < l <= {upper_inclusive}"))?
            }
            _ => s.serialize_field("closed_form", &Option::<String>::None)?,
        }
        s.end()
    }
}

fn require_member(spec: &MonoidSpec, x: &Element, budget: &Budget) -> Result<Tri> {
    let t = spec.contains(x, budget)?;
    if t == Tri::No {
        return Err(precondition(format!("{x} is not in {spec}")));
    }
    Ok(t)
}

/// `x` is an atom: a non-unit that is not a sum of two non-units.
pub fn is_atom(spec: &MonoidSpec, x: &Element, budget: &Budget) -> Result<Tri> {
    if require_member(spec, x, budget)? == Tri::Unknown {
        return Ok(Tri::Unknown);
    }
    let one = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    Ok(match (spec.family(), x) {
        (Family::FgLattice { .. } | Family::FgRational { .. }, _) => {
            let p = spec.presentation()?;
            let v = spec.to_lattice(x).expect("member lies in the lattice");
            Tri::from_bool(
                !p.is_unit(&v) && p.atoms().iter().any(|a| p.is_unit(&crate::monoid::presentation::sub(&v, a))),
            )
        }
        (Family::PrimeReciprocal, Element::Rational(q)) => {
            Tri::from_bool(q.numer().is_one() && q.denom().to_u64().is_some_and(is_prime))
        }
        (Family::RationalIntervalGe1, Element::Rational(q)) => Tri::from_bool(*q >= one && *q < two),
        (Family::RationalNonneg | Family::Dyadic | Family::MultRationalGe1 | Family::FiniteAbelianGroup { .. }, _) => {
            Tri::No
        }
        (Family::LexCone, Element::Vector(v)) => Tri::from_bool(v[..] == [1, 0]),
        (Family::ZcrossN0, Element::Vector(v)) => Tri::from_bool(v[1] == 1),
        (Family::CornerN2, Element::Vector(v)) => Tri::from_bool(v[0] >= 1 && (v[0] == 1 || v[1] == 1)),
        (Family::Hilbert, Element::Natural(n)) => {
            Tri::from_bool(matches!(hilbert_classify(*n), HilbertClass::AtomP | HilbertClass::AtomQ))
        }
        _ => unreachable!("element shape checked by contains"),
    })
}

/// Hilbert-monoid region searched by [`atoms_up_to`]: `n <= 25 * max_coordinate`.
fn hilbert_region(budget: &Budget) -> u64 {
    25 * budget.max_coordinate as u64
}

/// Atoms (one representative per class modulo units) inside the region set
/// by the budget: denominators up to `max_denominator`, coordinates up to
/// `max_coordinate`.
pub fn atoms_up_to(spec: &MonoidSpec, region: &Budget) -> Result<AtomList> {
    let den = region.max_denominator as i64;
    let cap = region.max_coordinate;
    let (atoms, exhaustive) = match spec.family() {
        Family::FgLattice { .. } | Family::FgRational { .. } => {
            let p = spec.presentation()?;
            (p.atoms().iter().map(|a| spec.element_from_lattice(a)).collect(), true)
        }
        Family::PrimeReciprocal => {
            (primes_up_to(region.max_denominator).into_iter().map(|p| Element::rational(1, p as i64)).collect(), false)
        }
        Family::RationalIntervalGe1 => {
            let mut set = BTreeSet::new();
            for d in 1..=den {
                for n in d..2 * d {
                    set.insert(Element::Rational(rat(n, d)));
                }
            }
            (set.into_iter().collect(), false)
        }
        Family::RationalNonneg | Family::Dyadic | Family::MultRationalGe1 | Family::FiniteAbelianGroup { .. } => {
            (Vec::new(), true)
        }
        Family::LexCone => (vec![Element::vector([1, 0])], true),
        Family::ZcrossN0 => (vec![Element::vector([0, 1])], true),
        Family::CornerN2 => {
            let mut set = BTreeSet::new();
            for k in 1..=cap {
                set.insert(Element::vector([1, k]));
                set.insert(Element::vector([k, 1]));
            }
            (set.into_iter().collect(), false)
        }
        Family::Hilbert => {
            let atoms = (5..=hilbert_region(region))
                .step_by(4)
                .filter(|&n| matches!(hilbert_classify(n), HilbertClass::AtomP | HilbertClass::AtomQ))
                .map(Element::Natural)
                .collect();
            (atoms, false)
        }
    };
    let mut atoms: Vec<Element> = atoms;
    atoms.sort();
    Ok(AtomList { atoms, exhaustive })
}

/// The monoid sum (product, for multiplicative families) of the atoms of `f`.
pub fn eval_factorization(spec: &MonoidSpec, f: &Factorization, budget: &Budget) -> Result<Element> {
    let mut acc = spec.identity();
    for (a, &k) in f.terms() {
        spec.check_element(a)?;
        if spec.contains(a, budget)? != Tri::Yes || is_atom(spec, a, budget)? != Tri::Yes {
            return Err(input(format!("{a} is not an atom of {spec}")));
        }
        acc = spec.op(&acc, &spec.scale(a, k)?)?;
    }
    Ok(acc)
}

/// `Z(b)` (or the slice selected by `limits`).
pub fn factorizations(
    spec: &MonoidSpec,
    b: &Element,
    limits: &FactorSearchLimits,
    budget: &Budget,
) -> Result<FactorSet> {
    if require_member(spec, b, budget)? == Tri::Unknown {
        return Ok(FactorSet { factorizations: Vec::new(), exhaustive: false });
    }
    let mut meter = budget.meter();
    let mut set = BTreeSet::new();
    let complete = match (spec.family(), b) {
        (Family::FgLattice { .. } | Family::FgRational { .. }, _) => {
            let p = spec.presentation()?;
            let v = spec.to_lattice(b).expect("member lies in the lattice");
            let out = p.factor(&v, limits.exact_length, limits.max_length, limits.max_results, &mut meter);
            let atoms: Vec<Element> = p.atoms().iter().map(|a| spec.element_from_lattice(a)).collect();
            for coeffs in out.solutions {
                set.insert(Factorization::from_terms(atoms.iter().cloned().zip(coeffs)));
            }
            out.complete
        }
        (Family::RationalNonneg | Family::Dyadic | Family::MultRationalGe1 | Family::FiniteAbelianGroup { .. }, _) => {
            if spec.is_unit(b, budget)? == Tri::Yes && limits.accepts(0) {
                set.insert(Factorization::empty());
            }
            true
        }
        (Family::LexCone, Element::Vector(v)) => {
            if v[1] == 0 && limits.accepts(v[0] as u64) {
                set.insert(Factorization::from_terms([(Element::vector([1, 0]), v[0] as u64)]));
            }
            true
        }
        (Family::ZcrossN0, Element::Vector(v)) => {
            if limits.accepts(v[1] as u64) {
                set.insert(Factorization::from_terms([(Element::vector([0, 1]), v[1] as u64)]));
            }
            true
        }
        (Family::CornerN2, Element::Vector(v)) => corner_factorizations(v[0], v[1], limits, &mut meter, &mut set),
        (Family::Hilbert, Element::Natural(n)) => {
            for f in hilbert_factorizations(*n) {
                if limits.accepts(f.length()) {
                    set.insert(f);
                }
            }
            true
        }
        (Family::PrimeReciprocal, Element::Rational(q)) => {
            prime_reciprocal_factorizations(q, limits, &mut meter, &mut set)
        }
        (Family::RationalIntervalGe1, Element::Rational(q)) => interval_factorizations(q, limits, &mut meter, &mut set),
        _ => unreachable!("element shape checked by contains"),
    };
    Ok(FactorSet::finish(set, complete && !meter.exhausted(), limits))
}

fn corner_factorizations(
    m: i64,
    n: i64,
    limits: &FactorSearchLimits,
    meter: &mut Meter,
    out: &mut BTreeSet<Factorization>,
) -> bool {
    let mut atoms = Vec::new();
    for j in 1..=n {
        atoms.push((1, j));
    }
    for i in 2..=m {
        atoms.push((i, 1));
    }
    atoms.sort();
    let cap = limits.length_cap();
    let mut chosen: Vec<(i64, i64)> = Vec::new();
    let mut aborted = false;
    #[allow(clippy::too_many_arguments)]
    fn go(
        start: usize,
        rest: (i64, i64),
        atoms: &[(i64, i64)],
        chosen: &mut Vec<(i64, i64)>,
        cap: Option<u64>,
        limits: &FactorSearchLimits,
        meter: &mut Meter,
        out: &mut BTreeSet<Factorization>,
        aborted: &mut bool,
    ) {
        if *aborted {
            return;
        }
        if !meter.tick() {
            *aborted = true;
            return;
        }
        if rest == (0, 0) {
            if limits.accepts(chosen.len() as u64) {
                out.insert(Factorization::from_atoms(chosen.iter().map(|&(a, b)| Element::vector([a, b]))));
            }
            return;
        }
        if rest.0 <= 0 || rest.1 <= 0 || cap.is_some_and(|c| chosen.len() as u64 >= c) {
            return;
        }
        for i in start..atoms.len() {
            let (a, b) = atoms[i];
            if a > rest.0 || b > rest.1 {
                continue;
            }
            chosen.push((a, b));
            go(i, (rest.0 - a, rest.1 - b), atoms, chosen, cap, limits, meter, out, aborted);
            chosen.pop();
        }
    }
    go(0, (m, n), &atoms, &mut chosen, cap, limits, meter, out, &mut aborted);
    !aborted
}

/// All factorizations in the Hilbert monoid: primes `= 1 (mod 4)` are forced
/// singleton atoms, and the primes `= 3 (mod 4)` are paired up in every
/// possible way.
pub(crate) fn hilbert_factorizations(n: u64) -> Vec<Factorization> {
    if n % 4 != 1 {
        return Vec::new();
    }
    let factors = prime_factors(n);
    let singles: Vec<u64> = factors.iter().copied().filter(|p| p % 4 == 1).collect();
    let threes: Vec<u64> = factors.iter().copied().filter(|p| p % 4 == 3).collect();
    let mut matchings: BTreeSet<Vec<u64>> = BTreeSet::new();
    fn pair_up(rest: &[u64], acc: &mut Vec<u64>, out: &mut BTreeSet<Vec<u64>>) {
        if rest.is_empty() {
            let mut m = acc.clone();
            m.sort_unstable();
            out.insert(m);
            return;
        }
        let first = rest[0];
        let mut seen = BTreeSet::new();
        for j in 1..rest.len() {
            if !seen.insert(rest[j]) {
                continue;
            }
            let mut remaining: Vec<u64> = rest[1..].to_vec();
            remaining.remove(j - 1);
            acc.push(first * rest[j]);
            pair_up(&remaining, acc, out);
            acc.pop();
        }
    }
    pair_up(&threes, &mut Vec::new(), &mut matchings);
    matchings
        .into_iter()
        .map(|pairs| Factorization::from_atoms(singles.iter().chain(pairs.iter()).map(|&a| Element::Natural(a))))
        .collect()
}

fn prime_reciprocal_factorizations(
    q: &Rational,
    limits: &FactorSearchLimits,
    meter: &mut Meter,
    out: &mut BTreeSet<Factorization>,
) -> bool {
    let (residues, m) = prime_reciprocal_split(q).expect("member");
    let Some(m) = m.to_u64() else { return false };
    let mut primes: BTreeSet<u64> = primes_up_to(limits.max_denominator).into_iter().collect();
    primes.extend(residues.iter().map(|&(p, _)| p));
    let primes: Vec<u64> = primes.into_iter().collect();
    let base: BTreeMap<u64, u64> = residues.iter().copied().collect();
    let base_len: u64 = base.values().sum();
    // every copy of 1/p beyond the forced residue comes in blocks of p
    let mut blocks = vec![0u64; primes.len()];
    let mut aborted = false;
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        left: u64,
        len: u64,
        primes: &[u64],
        base: &BTreeMap<u64, u64>,
        blocks: &mut Vec<u64>,
        limits: &FactorSearchLimits,
        meter: &mut Meter,
        out: &mut BTreeSet<Factorization>,
        aborted: &mut bool,
    ) {
        if *aborted {
            return;
        }
        if !meter.tick() {
            *aborted = true;
            return;
        }
        if limits.length_cap().is_some_and(|c| len > c) {
            return;
        }
        if left == 0 {
            if limits.accepts(len) {
                out.insert(Factorization::from_terms(
                    primes
                        .iter()
                        .zip(blocks.iter())
                        .map(|(&p, &j)| (Element::rational(1, p as i64), base.get(&p).copied().unwrap_or(0) + p * j)),
                ));
            }
            return;
        }
        if i == primes.len() {
            return;
        }
        for j in (0..=left).rev() {
            blocks[i] = j;
            go(i + 1, left - j, len + primes[i] * j, primes, base, blocks, limits, meter, out, aborted);
            blocks[i] = 0;
            if *aborted {
                return;
            }
        }
    }
    go(0, m, base_len, &primes, &base, &mut blocks, limits, meter, out, &mut aborted);
    // with a length cap no prime above the cap can contribute a block, so the
    // search is complete once every prime up to the cap was available
    let covered = m == 0 || limits.length_cap().is_some_and(|c| c <= limits.max_denominator);
    !aborted && covered
}

fn interval_factorizations(
    q: &Rational,
    limits: &FactorSearchLimits,
    meter: &mut Meter,
    out: &mut BTreeSet<Factorization>,
) -> bool {
    if q.is_zero() {
        if limits.accepts(0) {
            out.insert(Factorization::empty());
        }
        return true;
    }
    let one = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    let mut pool: Vec<Rational> = Vec::new();
    for d in 1..=limits.max_denominator as i64 {
        for n in d..2 * d {
            pool.push(rat(n, d));
        }
    }
    pool.sort();
    pool.dedup();
    let lo = (q / &two).floor().to_integer().to_u64().unwrap_or(0) + 1;
    let hi = q.floor().to_integer().to_u64().unwrap_or(0);
    let mut aborted = false;
    for len in lo..=hi {
        if !limits.accepts(len) {
            continue;
        }
        let mut chosen = Vec::new();
        fill(q.clone(), len, 0, &pool, &one, &two, &mut chosen, meter, out, &mut aborted);
        if aborted {
            break;
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn fill(
        rest: Rational,
        slots: u64,
        start: usize,
        pool: &[Rational],
        one: &Rational,
        two: &Rational,
        chosen: &mut Vec<Rational>,
        meter: &mut Meter,
        out: &mut BTreeSet<Factorization>,
        aborted: &mut bool,
    ) {
        if *aborted {
            return;
        }
        if !meter.tick() {
            *aborted = true;
            return;
        }
        if slots == 1 {
            let floor = chosen.last().unwrap_or(one);
            if rest >= *floor && rest < *two {
                let mut all = chosen.clone();
                all.push(rest);
                out.insert(Factorization::from_atoms(all.into_iter().map(Element::Rational)));
            }
            return;
        }
        let s = Rational::from_integer(BigInt::from(slots));
        let max_first = &rest / &s;
        for (i, a) in pool.iter().enumerate().skip(start) {
            if *a > max_first {
                break;
            }
            let left = &rest - a;
            // the remaining slots - 1 atoms are each < 2
            if left >= two * Rational::from_integer(BigInt::from(slots - 1)) {
                continue;
            }
            chosen.push(a.clone());
            fill(left, slots - 1, i, pool, one, two, chosen, meter, out, aborted);
            chosen.pop();
            if *aborted {
                return;
            }
        }
    }
    !aborted && *q <= two
}

/// `L(b)`.
pub fn length_set(spec: &MonoidSpec, b: &Element, budget: &Budget) -> Result<LengthSet> {
    if require_member(spec, b, budget)? == Tri::Unknown {
        return Ok(LengthSet::Truncated(BTreeSet::new()));
    }
    match (spec.family(), b) {
        (Family::PrimeReciprocal, Element::Rational(q)) if q.is_one() => {
            return Ok(LengthSet::SymbolicAllPrimesUpTo { bound: budget.max_denominator });
        }
        (Family::RationalIntervalGe1, Element::Rational(q)) if !q.is_zero() => {
            return Ok(LengthSet::SymbolicIntegerInterval {
                lower_exclusive: q / Rational::from_integer(BigInt::from(2)),
                upper_inclusive: q.clone(),
            });
        }
        _ => {}
    }
    let fs = factorizations(spec, b, &FactorSearchLimits::from_budget(budget), budget)?;
    let lengths = fs.lengths();
    Ok(if fs.exhaustive { LengthSet::Finite(lengths) } else { LengthSet::Truncated(lengths) })
}

fn check_points<T: Scalar>(points: &[Vec<T>]) -> Result<usize> {
    let Some(first) = points.first() else { return Err(input("empty point set")) };
    let r = first.len();
    if points.iter().any(|p| p.len() != r) {
        return Err(input("points of mixed arity"));
    }
    if points.iter().flatten().any(|x| x.is_negative()) {
        return Err(input("points must have nonnegative coordinates"));
    }
    Ok(r)
}

fn dominated_by<T: Scalar>(v: &[T], w: &[T]) -> bool {
    v.iter().zip(w).all(|(a, b)| a <= b)
}

/// The minimal elements of a finite subset of `N0^r` under componentwise order.
pub fn dickson_minimal<T: Scalar>(points: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    check_points(points)?;
    let distinct: BTreeSet<Vec<T>> = points.iter().cloned().collect();
    Ok(distinct.iter().filter(|p| !distinct.iter().any(|q| q != *p && dominated_by(q, p))).cloned().collect())
}

/// A longest strictly increasing chain, lexicographically least among the
/// longest ones.
pub fn longest_chain<T: Scalar>(points: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    check_points(points)?;
    let pts: Vec<Vec<T>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let n = pts.len();
    let below = |i: usize, j: usize| i != j && dominated_by(&pts[i], &pts[j]);
    // longest chain starting at i; a strict successor has a strictly larger
    // coordinate sum, so processing by decreasing sum is a topological order
    let sum = |v: &Vec<T>| v.iter().fold(T::zero(), |a, x| a + x.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(sum(&pts[i])));
    let mut from = vec![1usize; n];
    for &i in &order {
        for j in 0..n {
            if below(i, j) {
                from[i] = from[i].max(from[j] + 1);
            }
        }
    }
    let best = *from.iter().max().expect("nonempty");
    let mut cur = (0..n).find(|&i| from[i] == best).expect("some start");
    let mut chain = vec![pts[cur].clone()];
    while from[cur] > 1 {
        cur = (0..n).find(|&j| below(cur, j) && from[j] + 1 == from[cur]).expect("successor exists");
        chain.push(pts[cur].clone());
    }
    Ok(chain)
}

/// Integer embedding of the elements of `spec`'s kind used by the span solver.
enum Embedded {
    Lattice { dim: usize, target: Vec<i64>, blocks: Vec<Vec<i64>> },
    Residues { moduli: Vec<u64>, target: Vec<u64>, blocks: Vec<Vec<u64>> },
}

fn embed(spec: &MonoidSpec, target: &Element, blocks: &[Element]) -> Result<Embedded> {
    spec.check_element(target)?;
    for b in blocks {
        spec.check_element(b)?;
    }
    let all: Vec<&Element> = std::iter::once(target).chain(blocks).collect();
    let overflow = || crate::error::Error::Overflow("span embedding".into());
    match (spec.family(), target) {
        (Family::FiniteAbelianGroup { invariant_factors }, _) => Ok(Embedded::Residues {
            moduli: invariant_factors.clone(),
            target: residues(target),
            blocks: blocks.iter().map(residues).collect(),
        }),
        (_, Element::Vector(t)) => Ok(Embedded::Lattice {
            dim: t.len(),
            target: t.clone(),
            blocks: blocks.iter().map(|b| b.as_vector().expect("shape checked").to_vec()).collect(),
        }),
        (f, Element::Rational(_)) if !f.is_multiplicative() => {
            let qs: Vec<&Rational> = all.iter().map(|e| e.as_rational().expect("shape checked")).collect();
            let scale = common_denominator(qs.iter().copied());
            let ints = qs
                .iter()
                .map(|q| {
                    (*q * Rational::from_integer(scale.clone()))
                        .to_integer()
                        .to_i64()
                        .map(|v| vec![v])
                        .ok_or_else(overflow)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Embedded::Lattice { dim: 1, target: ints[0].clone(), blocks: ints[1..].to_vec() })
        }
        _ => {
            // multiplicative: prime exponent vectors
            let factor = |e: &Element| -> Result<BTreeMap<u64, i64>> {
                let mut m = BTreeMap::new();
                let (num, den) = match e {
                    Element::Natural(n) => (*n, 1u64),
                    Element::Rational(q) => {
                        (q.numer().to_u64().ok_or_else(overflow)?, q.denom().to_u64().ok_or_else(overflow)?)
                    }
                    _ => unreachable!(),
                };
                for p in prime_factors(num) {
                    *m.entry(p).or_insert(0) += 1;
                }
                for p in prime_factors(den) {
                    *m.entry(p).or_insert(0) -= 1;
                }
                Ok(m)
            };
            let maps = all.iter().map(|e| factor(e)).collect::<Result<Vec<_>>>()?;
            let primes: BTreeSet<u64> = maps.iter().flat_map(|m| m.keys().copied()).collect();
            let vecs: Vec<Vec<i64>> =
                maps.iter().map(|m| primes.iter().map(|p| m.get(p).copied().unwrap_or(0)).collect()).collect();
            Ok(Embedded::Lattice { dim: primes.len(), target: vecs[0].clone(), blocks: vecs[1..].to_vec() })
        }
    }
}

fn residues(e: &Element) -> Vec<u64> {
    match e {
        Element::Residues(r) => r.clone(),
        _ => unreachable!("shape checked"),
    }
}

/// Span membership using only the arithmetic of `spec`'s element kind; the
/// elements need not be members of `spec` itself.
pub(crate) fn span_contains(spec: &MonoidSpec, target: &Element, blocks: &[Element], budget: &Budget) -> Result<Tri> {
    match embed(spec, target, blocks)? {
        Embedded::Lattice { dim, target, blocks } => {
            if dim == 0 {
                return Ok(Tri::Yes);
            }
            let p = FgPresentation::new(dim, &blocks)?;
            Ok(p.contains(&target, budget.max_nodes))
        }
        Embedded::Residues { moduli, target, blocks } => {
            // nonnegative combinations in a finite group form the generated subgroup
            let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
            let zero = vec![0u64; moduli.len()];
            seen.insert(zero.clone());
            let mut frontier = vec![zero];
            let mut meter = budget.meter();
            while let Some(x) = frontier.pop() {
                if x == target {
                    return Ok(Tri::Yes);
                }
                for b in &blocks {
                    if !meter.tick() {
                        return Ok(Tri::Unknown);
                    }
                    let y: Vec<u64> = x.iter().zip(b).zip(&moduli).map(|((a, c), d)| (a + c) % d).collect();
                    if seen.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
            Ok(Tri::from_bool(seen.contains(&target)))
        }
    }
}

/// `target` is a nonnegative integer combination of `blocks`.
pub fn nonneg_span_contains(spec: &MonoidSpec, target: &Element, blocks: &[Element], budget: &Budget) -> Result<Tri> {
    let mut any_unknown = false;
    for x in std::iter::once(target).chain(blocks) {
        match spec.contains(x, budget)? {
            Tri::No => return Err(precondition(format!("{x} is not in {spec}"))),
            Tri::Unknown => any_unknown = true,
            Tri::Yes => {}
        }
    }
    let t = span_contains(spec, target, blocks, budget)?;
    Ok(if any_unknown && t == Tri::No { Tri::Unknown } else { t })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    fn n(gens: &[i64]) -> MonoidSpec {
        MonoidSpec::numerical(gens).unwrap()
    }

    fn lim() -> FactorSearchLimits {
        FactorSearchLimits::from_budget(&b())
    }

    #[test]
    fn factorizations_of_six_in_two_three() {
        let fs = factorizations(&n(&[2, 3]), &Element::int(6), &lim(), &b()).unwrap();
        assert!(fs.exhaustive);
        assert_eq!(render_factorizations(&fs.factorizations), "{[2,2,2], [3,3]}");
        assert_eq!(length_set(&n(&[2, 3]), &Element::int(6), &b()).unwrap().to_string(), "{2, 3}");
    }

    #[test]
    fn length_two_slice_of_eight() {
        let fs = factorizations(&n(&[3, 4, 5]), &Element::int(8), &lim().with_exact_length(2), &b()).unwrap();
        assert!(fs.exhaustive);
        assert_eq!(render_factorizations(&fs.factorizations), "{[3,5], [4,4]}");
    }

    #[test]
    fn hilbert_441() {
        let fs = factorizations(&MonoidSpec::hilbert(), &Element::Natural(441), &lim(), &b()).unwrap();
        assert_eq!(render_factorizations(&fs.factorizations), "{[9,49], [21,21]}");
    }

    #[test]
    fn corner_three_three() {
        let c = MonoidSpec::corner_n2();
        let ls = length_set(&c, &Element::vector([3, 3]), &b()).unwrap();
        assert_eq!(ls, LengthSet::Finite([2, 3].into_iter().collect()));
    }

    #[test]
    fn interval_closed_form_and_search_agree_on_three() {
        let q = MonoidSpec::rational_interval_ge1();
        assert_eq!(length_set(&q, &Element::int_rational(3), &b()).unwrap().members(), vec![2, 3]);
        assert_eq!(length_set(&q, &Element::int_rational(1), &b()).unwrap().members(), vec![1]);
        let fs = factorizations(&q, &Element::int_rational(3), &lim(), &b()).unwrap();
        assert!(!fs.exhaustive);
        assert_eq!(fs.lengths(), [2, 3].into_iter().collect());
    }

    #[test]
    fn prime_reciprocal_one() {
        let pr = MonoidSpec::prime_reciprocal();
        let ls = length_set(&pr, &Element::int_rational(1), &b()).unwrap();
        assert_eq!(ls.members(), vec![2, 3, 5, 7, 11]);
        let fs = factorizations(&pr, &Element::int_rational(1), &lim(), &b()).unwrap();
        assert!(!fs.exhaustive);
        assert_eq!(fs.lengths(), [2, 3, 5, 7, 11].into_iter().collect());
        let fs = factorizations(&pr, &Element::rational(5, 6), &lim(), &b()).unwrap();
        assert!(fs.exhaustive);
        assert_eq!(render_factorizations(&fs.factorizations), "{[1/3,1/2]}");
        let fs = factorizations(&pr, &Element::int_rational(1), &lim().with_exact_length(5), &b()).unwrap();
        assert!(fs.exhaustive);
        assert_eq!(fs.factorizations.len(), 1);
    }

    #[test]
    fn atom_examples() {
        let q = MonoidSpec::rational_interval_ge1();
        assert_eq!(is_atom(&q, &Element::rational(3, 2), &b()).unwrap(), Tri::Yes);
        assert_eq!(is_atom(&q, &Element::int_rational(2), &b()).unwrap(), Tri::No);
        let lex = MonoidSpec::lex_cone();
        assert_eq!(is_atom(&lex, &Element::vector([1, 0]), &b()).unwrap(), Tri::Yes);
        assert_eq!(is_atom(&lex, &Element::vector([0, 1]), &b()).unwrap(), Tri::No);
        let m = MonoidSpec::mult_rational_ge1();
        assert_eq!(is_atom(&m, &Element::rational(7, 2), &b()).unwrap(), Tri::No);
    }

    #[test]
    fn atoms_examples() {
        let a = atoms_up_to(&n(&[2, 3]), &b()).unwrap();
        assert_eq!(a.atoms, vec![Element::int(2), Element::int(3)]);
        assert!(a.exhaustive);
        let a = atoms_up_to(&MonoidSpec::prime_reciprocal(), &b().with_denominator(10)).unwrap();
        assert_eq!(a.atoms.iter().map(ToString::to_string).collect::<Vec<_>>(), ["1/7", "1/5", "1/3", "1/2"]);
        assert!(!a.exhaustive);
        let a = atoms_up_to(&MonoidSpec::group(vec![5]).unwrap(), &b()).unwrap();
        assert!(a.atoms.is_empty() && a.exhaustive);
    }

    #[test]
    fn eval_examples() {
        let f = Factorization::from_terms([(Element::int(2), 3)]);
        assert_eq!(eval_factorization(&n(&[2, 3]), &f, &b()).unwrap(), Element::int(6));
        assert_eq!(eval_factorization(&n(&[2, 3]), &Factorization::empty(), &b()).unwrap(), Element::int(0));
        let f = Factorization::from_atoms([Element::Natural(9), Element::Natural(49)]);
        assert_eq!(eval_factorization(&MonoidSpec::hilbert(), &f, &b()).unwrap(), Element::Natural(441));
        let bad = Factorization::from_atoms([Element::int(4)]);
        assert!(eval_factorization(&n(&[2, 3]), &bad, &b()).is_err());
    }

    #[test]
    fn dickson_examples() {
        let pts = vec![vec![1i64, 2], vec![2, 1], vec![2, 2], vec![3, 0]];
        assert_eq!(dickson_minimal(&pts).unwrap(), vec![vec![1, 2], vec![2, 1], vec![3, 0]]);
        let pts = vec![vec![0i64, 0], vec![4, 7]];
        assert_eq!(dickson_minimal(&pts).unwrap(), vec![vec![0, 0]]);
        let mut grid = Vec::new();
        for x in 0..=5i64 {
            for y in 0..=5i64 {
                if x + y >= 5 {
                    grid.push(vec![x, y]);
                }
            }
        }
        let min = dickson_minimal(&grid).unwrap();
        assert_eq!(min.len(), 6);
        assert!(min.iter().all(|p| p[0] + p[1] == 5));
        assert!(dickson_minimal::<i64>(&[]).is_err());
        assert!(dickson_minimal(&[vec![1i64], vec![1, 2]]).is_err());
    }

    #[test]
    fn chain_examples() {
        let pts = vec![vec![0i64, 0], vec![1, 1], vec![2, 2], vec![2, 0]];
        assert_eq!(longest_chain(&pts).unwrap(), vec![vec![0, 0], vec![1, 1], vec![2, 2]]);
        assert_eq!(longest_chain(&[vec![3i64, 4]]).unwrap(), vec![vec![3, 4]]);
        let anti: Vec<Vec<i64>> = (0..=5).map(|x| vec![x, 5 - x]).collect();
        assert_eq!(longest_chain(&anti).unwrap().len(), 1);
    }

    #[test]
    fn span_examples() {
        let s = n(&[2, 3]);
        let blocks = [Element::int(2), Element::int(3)];
        assert_eq!(nonneg_span_contains(&s, &Element::int(6), &blocks, &b()).unwrap(), Tri::Yes);
        assert!(nonneg_span_contains(&s, &Element::int(1), &blocks, &b()).is_err());
        assert_eq!(span_contains(&s, &Element::int(1), &blocks, &b()).unwrap(), Tri::No);
        let lex = MonoidSpec::lex_cone();
        let t = nonneg_span_contains(&lex, &Element::vector([0, 1]), &[Element::vector([1, 0])], &b()).unwrap();
        assert_eq!(t, Tri::No);
        let h = MonoidSpec::hilbert();
        let t = nonneg_span_contains(&h, &Element::Natural(441), &[Element::Natural(21)], &b()).unwrap();
        assert_eq!(t, Tri::Yes);
        let g = MonoidSpec::group(vec![6]).unwrap();
        let t = nonneg_span_contains(&g, &Element::Residues(vec![3]), &[Element::Residues(vec![2])], &b()).unwrap();
        assert_eq!(t, Tri::No);
    }
}
