use std::collections::BTreeSet;

use crate::arith::primes_up_to;
use crate::monoid::{Budget, Element, Family, MonoidSpec, Tri};
use crate::scalar::rat;

/// A deterministic, canonically sorted list of monoid elements drawn from a
/// small region: short generator sums for the finitely generated families,
/// small-denominator rationals, a coordinate box, or small integers.
///
/// Used wherever a property must be spot-checked on "typical" elements.
pub fn sample_elements(spec: &MonoidSpec, budget: &Budget) -> Vec<Element> {
    let den = budget.max_denominator.min(12) as i64;
    let cap = budget.max_coordinate.min(6);
    let mut out: BTreeSet<Element> = BTreeSet::new();
    match spec.family() {
        Family::FgLattice { generators, .. } => {
            let gens: Vec<Element> = generators.iter().map(|g| Element::Vector(g.clone())).collect();
            short_sums(spec, &gens, 3, &mut out);
        }
        Family::FgRational { generators } => {
            let gens: Vec<Element> = generators.iter().cloned().map(Element::Rational).collect();
            short_sums(spec, &gens, 3, &mut out);
        }
        Family::PrimeReciprocal => {
            let atoms: Vec<Element> =
                primes_up_to(den.max(2) as u64).into_iter().map(|p| Element::rational(1, p as i64)).collect();
            short_sums(spec, &atoms, 3, &mut out);
            for n in 0..=3 {
                out.insert(Element::rational(n, 1));
            }
        }
        Family::RationalIntervalGe1 | Family::RationalNonneg | Family::Dyadic | Family::MultRationalGe1 => {
            for d in 1..=den {
                for n in 0..=4 * d {
                    let x = Element::Rational(rat(n, d));
                    if spec.contains(&x, budget) == Ok(Tri::Yes) {
                        out.insert(x);
                    }
                }
            }
        }
        Family::LexCone | Family::ZcrossN0 | Family::CornerN2 => {
            for a in -cap..=cap {
                for b in -cap..=cap {
                    let x = Element::vector([a, b]);
                    if spec.contains(&x, budget) == Ok(Tri::Yes) {
                        out.insert(x);
                    }
                }
            }
        }
        Family::Hilbert => {
            for n in (1..=200u64).step_by(4) {
                out.insert(Element::Natural(n));
            }
        }
        Family::FiniteAbelianGroup { invariant_factors } => {
            let mut current = vec![vec![]];
            for &d in invariant_factors {
                let mut next = Vec::new();
                for prefix in &current {
                    for r in 0..d {
                        if next.len() >= 256 {
                            break;
                        }
                        let mut v: Vec<u64> = prefix.clone();
                        v.push(r);
                        next.push(v);
                    }
                }
                current = next;
            }
            out.extend(current.into_iter().map(Element::Residues));
        }
    }
    out.into_iter().collect()
}

/// All sums of at most `depth` elements of `gens` (with repetition).
fn short_sums(spec: &MonoidSpec, gens: &[Element], depth: usize, out: &mut BTreeSet<Element>) {
    let mut frontier = vec![spec.identity()];
    out.insert(spec.identity());
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                if let Ok(y) = spec.op(x, g) {
                    if out.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
        }
        frontier = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_members_and_sorted() {
        let b = Budget::default();
        for spec in [
            MonoidSpec::numerical(&[2, 3]).unwrap(),
            MonoidSpec::lex_cone(),
            MonoidSpec::dyadic(),
            MonoidSpec::prime_reciprocal(),
            MonoidSpec::hilbert(),
            MonoidSpec::group(vec![2, 4]).unwrap(),
        ] {
            let s = sample_elements(&spec, &b);
            assert!(!s.is_empty());
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            for x in &s {
                assert_eq!(spec.contains(x, &b).unwrap(), Tri::Yes, "{spec} {x}");
            }
        }
    }
}
