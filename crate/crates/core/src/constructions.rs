//! Executable versions of the explicit constructions: the union of a
//! submonoid with a non-divisor ideal, the adjoin extension `S + N0 (2b + u)`,
//! block sums along a chain, the corner embedding and the Hilbert-monoid
//! atom classifier. Each construction comes with a bounded verification
//! report rather than a proof.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::arith::{is_prime, prime_factors};
use crate::error::{input, precondition, Error, Result};
use crate::factor::{factorizations, is_atom, span_contains, FactorSearchLimits};
use crate::monoid::{sample_elements, Budget, Element, Family, GroupDesc, MonoidSpec, Tri};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HilbertClass {
    Unit,
    /// A prime `= 1 mod 4`.
    AtomP,
    /// A product of two primes `= 3 mod 4`.
    AtomQ,
    NotAtom,
    NotInMonoid,
}

impl HilbertClass {
    pub fn is_atom(self) -> bool {
        matches!(self, HilbertClass::AtomP | HilbertClass::AtomQ)
    }
}

impl fmt::Display for HilbertClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Classifies `n` in the multiplicative monoid `4 N0 + 1`.
pub fn hilbert_classify(n: u64) -> HilbertClass {
    if n % 4 != 1 {
        return HilbertClass::NotInMonoid;
    }
    if n == 1 {
        return HilbertClass::Unit;
    }
    let f = prime_factors(n);
    match f.as_slice() {
        [_] => HilbertClass::AtomP,
        [p, q] if p % 4 == 3 && q % 4 == 3 => HilbertClass::AtomQ,
        _ => HilbertClass::NotAtom,
    }
}

/// `(m, n) -> p^m q^n`, an injective homomorphism from the corner monoid
/// into `(N, *)` for distinct primes `p`, `q`.
pub fn corner_embedding(p: u64, q: u64, x: &Element) -> Result<u128> {
    if !is_prime(p) || !is_prime(q) {
        return Err(input(format!("{p} and {q} must both be prime")));
    }
    if p == q {
        return Err(input(format!("the primes must be distinct (got {p} twice)")));
    }
    let corner = MonoidSpec::corner_n2();
    if corner.contains(x, &Budget::default())? != Tri::Yes {
        return Err(precondition(format!("{x} is not in {corner}")));
    }
    let v = x.as_vector().expect("corner elements are vectors");
    let pow = |base: u64, e: i64| {
        u32::try_from(e)
            .ok()
            .and_then(|e| (base as u128).checked_pow(e))
            .ok_or_else(|| Error::Overflow(format!("{base}^{e}")))
    };
    pow(p, v[0])?.checked_mul(pow(q, v[1])?).ok_or_else(|| Error::Overflow(format!("image of {x}")))
}

/// Sums `chain[s] + ... + chain[t]` for each 1-based pair `(s, t)`. Pairs
/// must satisfy `s <= t < s'` for consecutive pairs.
pub fn block_sums(spec: &MonoidSpec, chain: &[Element], pairs: &[(usize, usize)]) -> Result<Vec<Element>> {
    let mut previous_end = 0usize;
    let mut out = Vec::with_capacity(pairs.len());
    for &(s, t) in pairs {
        if s == 0 || s > t || t > chain.len() {
            return Err(input(format!("block ({s},{t}) is not a range inside 1..={}", chain.len())));
        }
        if s <= previous_end {
            return Err(input(format!("block ({s},{t}) overlaps or precedes the previous block")));
        }
        previous_end = t;
        let mut acc = spec.identity();
        for x in &chain[s - 1..t] {
            acc = spec.op(&acc, x)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// `m` lies in the ideal `{m in M : m does not divide b}`.
pub fn nondivisor_ideal_membership(ambient: &MonoidSpec, b: &Element, m: &Element, budget: &Budget) -> Result<Tri> {
    Ok(!ambient.divides(m, b, budget)?)
}

/// How a derived monoid is built from its base specs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivationRule {
    /// `sub u {m in ambient : m does not divide b}`.
    UnionWithNondivisorIdeal { ambient: MonoidSpec, sub: MonoidSpec, b: Element },
    /// `base + N0 (2b + u)`.
    AdjoinExtension { base: MonoidSpec, b: Element, u: Element },
    /// Vector members of `ambient` whose `i`-th coordinate is divisible by
    /// `coefficients[i]`.
    ScalarSubmonoid { ambient: MonoidSpec, coefficients: Vec<i64> },
}

/// A monoid given by a membership predicate composed from base specs. Only
/// one level of derivation is supported: bases are always plain specs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedMonoid {
    rule: DerivationRule,
}

/// How far `k` ranges in `x - k g` when no order bounds it.
const ADJOIN_SEARCH_DEPTH: u64 = 64;

impl DerivedMonoid {
    pub fn union_with_nondivisor_ideal(ambient: MonoidSpec, sub: MonoidSpec, b: Element) -> Result<Self> {
        same_kind(&ambient, &sub)?;
        ambient.check_element(&b)?;
        Ok(DerivedMonoid { rule: DerivationRule::UnionWithNondivisorIdeal { ambient, sub, b } })
    }

    pub fn adjoin_extension(base: MonoidSpec, b: Element, u: Element) -> Result<Self> {
        base.check_element(&b)?;
        if base.op(&b, &u).is_err() {
            return Err(input(format!("{u} is not of the element kind of {base}")));
        }
        Ok(DerivedMonoid { rule: DerivationRule::AdjoinExtension { base, b, u } })
    }

    pub fn scalar_submonoid(ambient: MonoidSpec, coefficients: Vec<i64>) -> Result<Self> {
        let Element::Vector(zero) = ambient.identity() else {
            return Err(Error::Unsupported(format!("scalar submonoids need a vector family, not {ambient}")));
        };
        if coefficients.len() != zero.len() || coefficients.iter().any(|&c| c < 1) {
            return Err(input(format!("need {} positive coefficients", zero.len())));
        }
        Ok(DerivedMonoid { rule: DerivationRule::ScalarSubmonoid { ambient, coefficients } })
    }

    pub fn rule(&self) -> &DerivationRule {
        &self.rule
    }

    /// The spec whose arithmetic the derived monoid uses.
    pub fn arithmetic(&self) -> &MonoidSpec {
        match &self.rule {
            DerivationRule::UnionWithNondivisorIdeal { ambient, .. } => ambient,
            DerivationRule::AdjoinExtension { base, .. } => base,
            DerivationRule::ScalarSubmonoid { ambient, .. } => ambient,
        }
    }

    /// The adjoined element `2b + u` of an adjoin extension.
    pub fn adjoined(&self) -> Option<Element> {
        match &self.rule {
            DerivationRule::AdjoinExtension { base, b, u } => Some(base.op(&base.op(b, b).ok()?, u).ok()?),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Element, budget: &Budget) -> Result<Tri> {
        match &self.rule {
            DerivationRule::UnionWithNondivisorIdeal { ambient, sub, b } => {
                let in_sub = sub.contains_value(x, budget)?;
                if in_sub == Tri::Yes {
                    return Ok(Tri::Yes);
                }
                let in_ideal = match ambient.contains_value(x, budget)? {
                    Tri::Yes => nondivisor_ideal_membership(ambient, b, x, budget)?,
                    t => t,
                };
                Ok(in_sub.or(in_ideal))
            }
            DerivationRule::AdjoinExtension { base, .. } => {
                let g = self.adjoined().ok_or_else(|| Error::Overflow("2b + u".into()))?;
                adjoin_contains(base, &g, x, budget)
            }
            DerivationRule::ScalarSubmonoid { ambient, coefficients } => {
                let Some(v) = x.as_vector() else { return Err(input(format!("{x} is not a vector"))) };
                if v.iter().zip(coefficients).any(|(a, c)| a % c != 0) {
                    return Ok(Tri::No);
                }
                ambient.contains_value(x, budget)
            }
        }
    }

    pub fn is_unit(&self, x: &Element, budget: &Budget) -> Result<Tri> {
        let member = self.contains(x, budget)?;
        if member != Tri::Yes {
            return Ok(member.and(Tri::No));
        }
        match self.arithmetic().inverse(x)? {
            None => Ok(Tri::No),
            Some(inv) => self.contains(&inv, budget),
        }
    }
}

fn adjoin_contains(base: &MonoidSpec, g: &Element, x: &Element, budget: &Budget) -> Result<Tri> {
    let mut current = x.clone();
    let ordered = ordered_step(base, g);
    let mut unknown = false;
    for _ in 0..=ADJOIN_SEARCH_DEPTH {
        match base.contains_value(&current, budget) {
            Ok(Tri::Yes) => return Ok(Tri::Yes),
            Ok(Tri::Unknown) => unknown = true,
            Ok(Tri::No) | Err(Error::Input(_)) => {}
            Err(e) => return Err(e),
        }
        let next = match base.difference(g, &current)? {
            Some(n) => n,
            None => return Ok(if unknown { Tri::Unknown } else { Tri::No }),
        };
        if ordered && below_every_member(base, &next) {
            return Ok(if unknown { Tri::Unknown } else { Tri::No });
        }
        current = next;
    }
    // the adjoined element does not move x out of every possible member
    Ok(if ordered && !unknown { Tri::No } else { Tri::Unknown })
}

/// True when repeatedly removing `g` eventually leaves every member behind:
/// nonnegative ordered families and graded lattice monoids with `g` above
/// the identity.
fn ordered_step(base: &MonoidSpec, g: &Element) -> bool {
    match (base.family(), g) {
        (
            Family::FgRational { .. }
            | Family::PrimeReciprocal
            | Family::RationalIntervalGe1
            | Family::RationalNonneg
            | Family::Dyadic,
            Element::Rational(q),
        ) => *q > Rational::from_integer(0.into()),
        (Family::MultRationalGe1, Element::Rational(q)) => *q > Rational::from_integer(1.into()),
        (Family::Hilbert, Element::Natural(n)) => *n > 1,
        (Family::FgLattice { .. }, Element::Vector(v)) => {
            base.presentation().ok().and_then(|p| p.grade(v)).is_some_and(|d| d > 0)
        }
        _ => false,
    }
}

/// `y` is smaller than the identity in an ordered family, so neither it nor
/// anything further down the chain is a member.
fn below_every_member(base: &MonoidSpec, y: &Element) -> bool {
    if let (Family::FgLattice { .. }, Element::Vector(v)) = (base.family(), y) {
        // outside the lattice, or graded below zero
        return base.presentation().ok().is_some_and(|p| p.grade(v).is_none_or(|d| d < 0));
    }
    match (base.family().is_multiplicative(), y) {
        (false, Element::Rational(q)) => *q < Rational::from_integer(0.into()),
        (true, Element::Rational(q)) => *q < Rational::from_integer(1.into()),
        _ => false,
    }
}

impl fmt::Display for DerivedMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            DerivationRule::UnionWithNondivisorIdeal { ambient, sub, b } => write!(f, "union {ambient} {sub} {b}"),
            DerivationRule::AdjoinExtension { base, b, u } => write!(f, "adjoin {base} {b} {u}"),
            DerivationRule::ScalarSubmonoid { ambient, coefficients } => {
                let cs: Vec<String> = coefficients.iter().map(i64::to_string).collect();
                write!(f, "scalar {ambient} ({})", cs.join(","))
            }
        }
    }
}

impl Serialize for DerivedMonoid {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

fn same_kind(a: &MonoidSpec, b: &MonoidSpec) -> Result<()> {
    if a.family().element_shape() != b.family().element_shape()
        || a.family().is_multiplicative() != b.family().is_multiplicative()
    {
        return Err(input(format!("{a} and {b} have different element kinds")));
    }
    Ok(())
}

/// Generators of a finitely generated spec, or its sample elements.
fn checked_elements(spec: &MonoidSpec, budget: &Budget) -> Vec<Element> {
    match spec.family() {
        Family::FgLattice { generators, .. } => generators.iter().cloned().map(Element::Vector).collect(),
        Family::FgRational { generators } => generators.iter().cloned().map(Element::Rational).collect(),
        _ => sample_elements(spec, budget),
    }
}

/// One bounded check in a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionReport {
    pub derived: DerivedMonoid,
    pub seed: u64,
    pub sampled_pairs: usize,
    pub grothendieck: GroupDesc,
    /// Atoms of `M'` found among the divisors of `b` in the sample pool.
    pub atoms_dividing_b: Vec<Element>,
    pub checks: Vec<Check>,
}

impl UnionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Pairs drawn for the closure check.
pub const CLOSURE_PAIRS: usize = 500;

/// Builds `M' = sub u {m in ambient : m does not divide b}` for a `b` with no
/// atom factorization in `sub`, and checks on samples that `M'` is a monoid,
/// that `gp(M') = gp(ambient)`, that `U(M') = U(sub)` and that `b` is still
/// not a sum of atoms of `M'`.
pub fn undermonoid_union(
    ambient: &MonoidSpec,
    sub: &MonoidSpec,
    b: &Element,
    budget: &Budget,
    seed: u64,
) -> Result<UnionReport> {
    same_kind(ambient, sub)?;
    for x in checked_elements(sub, budget) {
        if ambient.contains(&x, budget)? == Tri::No {
            return Err(precondition(format!("{x} lies in {sub} but not in {ambient}")));
        }
    }
    if sub.contains(b, budget)? != Tri::Yes {
        return Err(precondition(format!("{b} is not in {sub}")));
    }
    let ambient_pool = sample_elements(ambient, budget);
    let all_units = ambient_pool.iter().all(|x| ambient.is_unit(x, budget) == Ok(Tri::Yes));
    if ambient.is_group()? || all_units {
        return Err(Error::Unsupported(format!("{ambient} is a group; the union construction needs a non-unit")));
    }
    if sub.is_unit(b, budget)? == Tri::Yes {
        return Err(precondition(format!("{b} is a unit of {sub}")));
    }
    let fs = factorizations(sub, b, &FactorSearchLimits::from_budget(budget), budget)?;
    if let Some(f) = fs.factorizations.first() {
        return Err(precondition(format!("{b} is atomic in {sub}: {b} = {f}")));
    }

    let derived = DerivedMonoid::union_with_nondivisor_ideal(ambient.clone(), sub.clone(), b.clone())?;
    let mut pool: Vec<Element> = Vec::new();
    for x in sample_elements(sub, budget).into_iter().chain(ambient_pool.iter().cloned()) {
        if !pool.contains(&x) && derived.contains(&x, budget)? == Tri::Yes {
            pool.push(x);
        }
    }
    pool.sort();
    let mut checks = Vec::new();

    // closure on random pairs
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut bad, mut unknown) = (Vec::new(), 0usize);
    for _ in 0..CLOSURE_PAIRS {
        let x = &pool[rng.gen_range(0..pool.len())];
        let y = &pool[rng.gen_range(0..pool.len())];
        let s = ambient.op(x, y)?;
        match derived.contains(&s, budget)? {
            Tri::Yes => {}
            Tri::Unknown => unknown += 1,
            Tri::No => bad.push(format!("{x} + {y}")),
        }
    }
    checks.push(Check::new(
        "closure",
        bad.is_empty() && unknown == 0,
        if bad.is_empty() {
            format!("{CLOSURE_PAIRS} sampled sums stay in M' ({unknown} undecided)")
        } else {
            format!("sums leaving M': {}", bad.join(", "))
        },
    ));

    // gp(M') = gp(ambient): an ideal element e with e + c in M' for every
    // sampled c of the ambient shows c = (e + c) - e lies in gp(M')
    let ideal: Vec<&Element> =
        pool.iter().filter(|x| nondivisor_ideal_membership(ambient, b, x, budget) == Ok(Tri::Yes)).collect();
    let mut anchor = None;
    for e in &ideal {
        let mut ok = true;
        for c in &ambient_pool {
            if derived.contains(&ambient.op(e, c)?, budget)? != Tri::Yes {
                ok = false;
                break;
            }
        }
        if ok {
            anchor = Some((*e).clone());
            break;
        }
    }
    let grothendieck = ambient.grothendieck()?;
    checks.push(Check::new(
        "grothendieck",
        anchor.is_some(),
        match &anchor {
            Some(e) => format!(
                "e = {e} in I with e + c in M' for all {} sampled c; gp(M') = {grothendieck}",
                ambient_pool.len()
            ),
            None => "no ideal element absorbs every sample".to_string(),
        },
    ));

    // units of M' agree with units of sub
    let mut mismatches = Vec::new();
    for x in &pool {
        let in_derived = derived.is_unit(x, budget)?;
        let in_sub = match sub.contains(x, budget)? {
            Tri::Yes => sub.is_unit(x, budget)?,
            Tri::No => Tri::No,
            Tri::Unknown => Tri::Unknown,
        };
        if in_derived != in_sub {
            mismatches.push(x.to_string());
        }
    }
    checks.push(Check::new(
        "units",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("unit status agrees on {} samples", pool.len())
        } else {
            format!("unit status differs at {}", mismatches.join(", "))
        },
    ));

    // b is not a sum of atoms of M'
    let divisors: Vec<Element> = pool
        .iter()
        .filter(|d| {
            ambient.difference(d, b).ok().flatten().is_some_and(|r| derived.contains(&r, budget) == Ok(Tri::Yes))
        })
        .cloned()
        .collect();
    let atoms =
        apparent_atoms(ambient, |x| derived.contains(x, budget), |x| derived.is_unit(x, budget), &divisors, &pool)?;
    let in_span = span_contains(ambient, b, &atoms, budget)?;
    checks.push(Check::new(
        "not_atomic",
        in_span == Tri::No,
        format!(
            "{} divisors of {b} in the pool; atoms among them: {}; {b} in their span: {in_span}",
            divisors.len(),
            list(&atoms)
        ),
    ));

    Ok(UnionReport { derived, seed, sampled_pairs: CLOSURE_PAIRS, grothendieck, atoms_dividing_b: atoms, checks })
}

fn list(xs: &[Element]) -> String {
    let parts: Vec<String> = xs.iter().map(Element::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Elements of `candidates` that are non-units of the derived monoid with no
/// split `x = e + f` into two non-units, where `e` ranges over `pool` and the
/// halving split is tried for additive rationals.
fn apparent_atoms(
    arith: &MonoidSpec,
    member: impl Fn(&Element) -> Result<Tri>,
    unit: impl Fn(&Element) -> Result<Tri>,
    candidates: &[Element],
    pool: &[Element],
) -> Result<Vec<Element>> {
    let non_unit = |x: &Element| -> Result<bool> { Ok(member(x)? == Tri::Yes && unit(x)? == Tri::No) };
    let mut atoms = Vec::new();
    for x in candidates {
        if !non_unit(x)? {
            continue;
        }
        let mut splits: Vec<Element> = pool.to_vec();
        if let (Element::Rational(q), false) = (x, arith.family().is_multiplicative()) {
            splits.push(Element::Rational(q / Rational::from_integer(2.into())));
        }
        let mut split = false;
        for e in &splits {
            let Some(f) = arith.difference(e, x)? else { continue };
            if arith.check_element(&f).is_err() {
                continue;
            }
            if non_unit(e)? && non_unit(&f)? {
                split = true;
                break;
            }
        }
        if !split {
            atoms.push(x.clone());
        }
    }
    Ok(atoms)
}

/// How far the semi-decidable conditions on `u` were checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub depth: u64,
    /// Smallest `n0 <= depth` with `n0 u` in the base, if found.
    pub condition_i_witness: Option<u64>,
    /// `n u + q != 0` for all `n <= depth` and `q` in the base; `Some(n)`
    /// gives the first `n` where it fails.
    pub condition_ii_violation: Option<u64>,
    pub warning: Option<String>,
}

impl ConditionReport {
    pub fn condition_ii_verified(&self) -> bool {
        self.condition_ii_violation.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjoinReport {
    pub derived: DerivedMonoid,
    pub adjoined: Element,
    pub conditions: ConditionReport,
    /// Atoms of `S'` found in the sample region.
    pub atoms: Vec<Element>,
    pub vacuous: bool,
    pub checks: Vec<Check>,
}

impl AdjoinReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Depth to which conditions (i) and (ii) on `u` are checked.
pub const CONDITION_DEPTH: u64 = 50;

/// Builds `S' = base + N0 (2b + u)` and checks, on samples: that `2b + u`
/// is not a unit and `U(S') = U(S)`; that every atom of `S'` found is an
/// atom of `S` or lies in `2b + u + U(S)`; and that `b` is not in the span
/// of the atoms found.
pub fn adjoin_extension(base: &MonoidSpec, b: &Element, u: &Element, budget: &Budget) -> Result<AdjoinReport> {
    if base.contains(b, budget)? != Tri::Yes {
        return Err(precondition(format!("{b} is not in {base}")));
    }
    let derived = DerivedMonoid::adjoin_extension(base.clone(), b.clone(), u.clone())?;
    let g = derived.adjoined().ok_or_else(|| Error::Overflow("2b + u".into()))?;
    let conditions = check_conditions(base, u, budget)?;

    if base.is_group()? {
        let checks = ["claim1_units", "claim2_atoms", "claim3_span"]
            .iter()
            .map(|n| Check::new(n, true, format!("vacuous: {base} is a group and absorbs {g}")))
            .collect();
        return Ok(AdjoinReport { derived, adjoined: g, conditions, atoms: Vec::new(), vacuous: true, checks });
    }

    let mut pool: Vec<Element> = Vec::new();
    for s in sample_elements(base, budget) {
        let mut x = s;
        for _ in 0..3 {
            if !pool.contains(&x) {
                pool.push(x.clone());
            }
            x = base.op(&x, &g)?;
        }
    }
    pool.sort();
    let mut checks = Vec::new();

    // claim 1
    let g_unit = derived.is_unit(&g, budget)?;
    let mut mismatches = Vec::new();
    for x in &pool {
        let in_base = match base.contains_value(x, budget) {
            Ok(Tri::Yes) => base.is_unit(x, budget)?,
            Ok(t) => t,
            Err(Error::Input(_)) => Tri::No,
            Err(e) => return Err(e),
        };
        if derived.is_unit(x, budget)? != in_base {
            mismatches.push(x.to_string());
        }
    }
    checks.push(Check::new(
        "claim1_units",
        g_unit == Tri::No && mismatches.is_empty(),
        format!(
            "{g} is a unit of S': {g_unit}; unit status {} on {} samples",
            if mismatches.is_empty() { "agrees".to_string() } else { format!("differs at {}", mismatches.join(", ")) },
            pool.len()
        ),
    ));

    // claim 2
    let atoms = apparent_atoms(base, |x| derived.contains(x, budget), |x| derived.is_unit(x, budget), &pool, &pool)?;
    let mut stray = Vec::new();
    for a in &atoms {
        let base_atom = match base.contains_value(a, budget) {
            Ok(Tri::Yes) => is_atom(base, a, budget)? == Tri::Yes,
            _ => false,
        };
        let near_g = match base.difference(&g, a)? {
            Some(d) => matches!(base.contains_value(&d, budget), Ok(Tri::Yes)) && base.is_unit(&d, budget)? == Tri::Yes,
            None => false,
        };
        if !base_atom && !near_g {
            stray.push(a.to_string());
        }
    }
    checks.push(Check::new(
        "claim2_atoms",
        stray.is_empty(),
        if stray.is_empty() {
            format!("atoms found {} lie in A(S) u ({g} + U(S))", list(&atoms))
        } else {
            format!("atoms outside A(S) u ({g} + U(S)): {}", stray.join(", "))
        },
    ));

    // claim 3
    let in_span = span_contains(base, b, &atoms, budget)?;
    checks.push(Check::new(
        "claim3_span",
        in_span == Tri::No,
        format!("{b} in the span of {}: {in_span}", list(&atoms)),
    ));

    Ok(AdjoinReport { derived, adjoined: g, conditions, atoms, vacuous: false, checks })
}

fn check_conditions(base: &MonoidSpec, u: &Element, budget: &Budget) -> Result<ConditionReport> {
    let mut condition_i_witness = None;
    let mut condition_ii_violation = None;
    for n in 1..=CONDITION_DEPTH {
        let nu = base.scale(u, n)?;
        if condition_i_witness.is_none() && base.contains_value(&nu, budget).unwrap_or(Tri::No) == Tri::Yes {
            condition_i_witness = Some(n);
        }
        // n u + q = 0 for some q in the base iff -(n u) is in the base
        if condition_ii_violation.is_none() {
            if let Some(neg) = base.inverse(&nu)? {
                if base.contains_value(&neg, budget).unwrap_or(Tri::No) == Tri::Yes {
                    condition_ii_violation = Some(n);
                }
            }
        }
    }
    let warning = (condition_i_witness.is_none() && condition_ii_violation.is_some()).then(|| {
        format!(
            "neither condition verified to depth {CONDITION_DEPTH}: no n0 u in the base, and (ii) fails at n = {}",
            condition_ii_violation.unwrap()
        )
    });
    Ok(ConditionReport { depth: CONDITION_DEPTH, condition_i_witness, condition_ii_violation, warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn hilbert_classes() {
        assert_eq!(hilbert_classify(13), HilbertClass::AtomP);
        assert_eq!(hilbert_classify(9), HilbertClass::AtomQ);
        assert_eq!(hilbert_classify(1), HilbertClass::Unit);
        assert_eq!(hilbert_classify(25), HilbertClass::NotAtom);
        assert_eq!(hilbert_classify(7), HilbertClass::NotInMonoid);
        assert_eq!(hilbert_classify(21), HilbertClass::AtomQ);
        assert_eq!(hilbert_classify(441), HilbertClass::NotAtom);
    }

    #[test]
    fn corner_embedding_examples() {
        assert_eq!(corner_embedding(2, 3, &Element::vector([2, 3])).unwrap(), 108);
        assert_eq!(corner_embedding(2, 3, &Element::vector([0, 0])).unwrap(), 1);
        assert_eq!(corner_embedding(2, 3, &Element::vector([3, 3])).unwrap(), 216);
        assert!(corner_embedding(2, 2, &Element::vector([1, 1])).is_err());
        assert!(corner_embedding(2, 3, &Element::vector([0, 1])).is_err());
    }

    #[test]
    fn block_sum_examples() {
        let s = MonoidSpec::numerical(&[2, 3]).unwrap();
        let chain: Vec<Element> = [2, 2, 2, 3, 3, 3].into_iter().map(Element::int).collect();
        assert_eq!(block_sums(&s, &chain, &[(1, 2), (4, 5)]).unwrap(), vec![Element::int(4), Element::int(6)]);
        assert_eq!(block_sums(&s, &chain, &[(1, 1)]).unwrap(), vec![Element::int(2)]);
        assert!(block_sums(&s, &chain, &[(2, 1)]).is_err());
        assert!(block_sums(&s, &chain, &[(1, 3), (3, 4)]).is_err());
        assert!(block_sums(&s, &chain, &[(5, 7)]).is_err());
    }

    #[test]
    fn nondivisor_ideal_examples() {
        let q = MonoidSpec::rational_nonneg();
        let one = Element::int_rational(1);
        assert_eq!(nondivisor_ideal_membership(&q, &one, &Element::rational(3, 2), &b()).unwrap(), Tri::Yes);
        assert_eq!(nondivisor_ideal_membership(&q, &one, &Element::rational(1, 2), &b()).unwrap(), Tri::No);
        let z = MonoidSpec::z_cross_n0();
        let t = nondivisor_ideal_membership(&z, &Element::vector([0, 1]), &Element::vector([4, 0]), &b()).unwrap();
        assert_eq!(t, Tri::No);
    }

    #[test]
    fn union_dyadic_in_rationals() {
        let r = undermonoid_union(
            &MonoidSpec::rational_nonneg(),
            &MonoidSpec::dyadic(),
            &Element::int_rational(1),
            &b(),
            7,
        )
        .unwrap();
        assert!(r.all_passed(), "{:?}", r.checks);
        assert_eq!(r.grothendieck, GroupDesc::SymbolicQ);
        let m = &r.derived;
        assert_eq!(m.contains(&Element::rational(4, 3), &b()).unwrap(), Tri::Yes);
        assert_eq!(m.contains(&Element::rational(2, 3), &b()).unwrap(), Tri::No);
        assert_eq!(m.contains(&Element::rational(3, 4), &b()).unwrap(), Tri::Yes);
    }

    #[test]
    fn union_lex_cone() {
        let r =
            undermonoid_union(&MonoidSpec::z_cross_n0(), &MonoidSpec::lex_cone(), &Element::vector([0, 1]), &b(), 1)
                .unwrap();
        assert!(r.all_passed(), "{:?}", r.checks);
        assert_eq!(r.atoms_dividing_b, vec![Element::vector([1, 0])]);
    }

    #[test]
    fn union_guards() {
        let n = MonoidSpec::numerical(&[2, 3]).unwrap();
        let e = undermonoid_union(&n, &n, &Element::int(6), &b(), 0).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
        let g = MonoidSpec::group(vec![5]).unwrap();
        let e = undermonoid_union(&g, &g, &Element::Residues(vec![1]), &b(), 0).unwrap_err();
        assert!(matches!(e, Error::Unsupported(_) | Error::Precondition(_)));
    }

    #[test]
    fn adjoin_dyadic() {
        let r =
            adjoin_extension(&MonoidSpec::dyadic(), &Element::int_rational(1), &Element::rational(1, 3), &b()).unwrap();
        assert_eq!(r.adjoined, Element::Rational(rat(7, 3)));
        assert!(r.all_passed(), "{:?}", r.checks);
        assert_eq!(r.atoms, vec![Element::rational(7, 3)]);
        assert_eq!(r.conditions.condition_i_witness, Some(3));
        assert!(r.conditions.warning.is_none());
        assert_eq!(r.derived.contains(&Element::rational(5, 3), &b()).unwrap(), Tri::No);
        assert_eq!(r.derived.contains(&Element::rational(17, 6), &b()).unwrap(), Tri::Yes);
        assert_eq!(r.derived.contains(&Element::rational(31, 12), &b()).unwrap(), Tri::Yes);
    }

    #[test]
    fn adjoin_warns_without_conditions() {
        let n = MonoidSpec::numerical(&[2, 3]).unwrap();
        let r = adjoin_extension(&n, &Element::int(6), &Element::int(-1), &b()).unwrap();
        assert_eq!(r.conditions.condition_i_witness, None);
        assert_eq!(r.conditions.condition_ii_violation, Some(2));
        assert!(r.conditions.warning.is_some());
    }

    #[test]
    fn adjoin_to_group_is_vacuous() {
        let g = MonoidSpec::group(vec![5]).unwrap();
        let r = adjoin_extension(&g, &Element::Residues(vec![1]), &Element::Residues(vec![2]), &b()).unwrap();
        assert!(r.vacuous && r.all_passed());
    }

    #[test]
    fn scalar_submonoid_membership() {
        let m = DerivedMonoid::scalar_submonoid(MonoidSpec::z_cross_n0(), vec![2, 1]).unwrap();
        assert_eq!(m.contains(&Element::vector([4, 1]), &b()).unwrap(), Tri::Yes);
        assert_eq!(m.contains(&Element::vector([3, 1]), &b()).unwrap(), Tri::No);
        assert!(DerivedMonoid::scalar_submonoid(MonoidSpec::dyadic(), vec![2]).is_err());
    }
}
