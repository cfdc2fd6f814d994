//! Property-based checks of the algebraic laws and of the parser.

use std::collections::BTreeSet;

use proptest::prelude::*;

use monofact::constructions::corner_embedding;
use monofact::deciders::{decide, is_undermonoid, validate_witness, Property, Status};
use monofact::dsl::{parse, parse_spec, render_spec, SpecText};
use monofact::factor::{
    dickson_minimal, eval_factorization, factorizations, length_set, longest_chain, FactorSearchLimits, LengthSet,
};
use monofact::monoid::sample_elements;
use monofact::{Budget, Element, GroupDesc, MonoidSpec, Rational, Tri};

fn catalog_index() -> impl Strategy<Value = usize> {
    0..MonoidSpec::catalog().len()
}

fn signed_lattice() -> impl Strategy<Value = MonoidSpec> {
    (1usize..=2)
        .prop_flat_map(|dim| {
            prop::collection::vec(prop::collection::vec(-10i64..=10, dim), 1..=5).prop_map(move |g| (dim, g))
        })
        .prop_filter_map("valid generators", |(dim, g)| MonoidSpec::fg_lattice(dim, g).ok())
}

fn numerical() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..=30, 1..=4)
}

fn any_spec() -> impl Strategy<Value = MonoidSpec> {
    prop_oneof![
        catalog_index().prop_map(|i| MonoidSpec::catalog()[i].clone()),
        signed_lattice(),
        numerical().prop_map(|g| MonoidSpec::numerical(&g).unwrap()),
        prop::collection::vec((1i64..=30, 1i64..=12), 1..=4).prop_map(|g| MonoidSpec::fg_rational(
            g.into_iter().map(|(n, d)| Rational::new(n.into(), d.into())).collect()
        )
        .unwrap()),
        prop::collection::vec(2u64..=9, 0..=3).prop_map(|f| MonoidSpec::group(f).unwrap()),
    ]
    .prop_flat_map(|s| (Just(s), prop::option::of("[a-z][a-z0-9_]{0,6}")))
    .prop_map(|(s, label)| match label {
        Some(l) => s.with_label(l),
        None => s,
    })
}

fn small_budget() -> Budget {
    Budget::default().with_nodes(200_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_of_sampled_pairs(i in catalog_index(), a in 0usize..64, b in 0usize..64) {
        let spec = &MonoidSpec::catalog()[i];
        let samples = sample_elements(spec, &small_budget());
        prop_assume!(!samples.is_empty());
        let (x, y) = (&samples[a % samples.len()], &samples[b % samples.len()]);
        let sum = spec.op(x, y).unwrap();
        prop_assert_ne!(spec.contains(&sum, &small_budget()).unwrap(), Tri::No, "{} + {} in {}", x, y, spec);
    }

    #[test]
    fn divides_iff_difference_is_member(i in catalog_index(), a in 0usize..64, b in 0usize..64) {
        let spec = &MonoidSpec::catalog()[i];
        let samples = sample_elements(spec, &small_budget());
        prop_assume!(!samples.is_empty());
        let (x, y) = (&samples[a % samples.len()], &samples[b % samples.len()]);
        let divides = spec.divides(x, y, &small_budget()).unwrap();
        let via_difference = match spec.difference(x, y).unwrap() {
            Some(d) => spec.contains(&d, &small_budget()).unwrap(),
            None => Tri::No,
        };
        prop_assume!(divides != Tri::Unknown && via_difference != Tri::Unknown);
        prop_assert_eq!(divides, via_difference, "{} | {} in {}", x, y, spec);
    }

    #[test]
    fn unit_law(i in catalog_index(), a in 0usize..64) {
        let spec = &MonoidSpec::catalog()[i];
        let samples = sample_elements(spec, &small_budget());
        prop_assume!(!samples.is_empty());
        let x = &samples[a % samples.len()];
        let unit = spec.is_unit(x, &small_budget()).unwrap();
        let law = match spec.inverse(x).unwrap() {
            Some(inv) => spec.contains(x, &small_budget()).unwrap().and(spec.contains(&inv, &small_budget()).unwrap()),
            None => Tri::No,
        };
        prop_assert_eq!(unit, law, "unit status of {} in {}", x, spec);
    }

    #[test]
    fn lattice_generators_lie_in_grothendieck_group(spec in signed_lattice()) {
        let p = spec.presentation().unwrap();
        for g in p.generators() {
            prop_assert!(p.lattice().contains(g));
        }
        prop_assert_eq!(spec.grothendieck().unwrap(), GroupDesc::from_lattice(p.lattice()));
    }

    #[test]
    fn undermonoid_reflexive_and_transitive(gens in numerical(), k in 1i64..=3) {
        let a = MonoidSpec::numerical(&gens).unwrap();
        let budget = small_budget();
        prop_assert_eq!(is_undermonoid(&a, &a, &budget).unwrap().status, Status::Holds);
        // nested chain: B is generated by sums of generators of A, C by multiples of those of B
        let b_gens: Vec<i64> = gens.iter().flat_map(|&x| gens.iter().map(move |&y| x + y)).collect();
        let c_gens: Vec<i64> = b_gens.iter().flat_map(|&x| [x * k, x * (k + 1)]).collect();
        let b = MonoidSpec::numerical(&b_gens).unwrap();
        let c = MonoidSpec::numerical(&c_gens).unwrap();
        let ab = is_undermonoid(&a, &b, &budget).unwrap().status;
        let bc = is_undermonoid(&b, &c, &budget).unwrap().status;
        if ab == Status::Holds && bc == Status::Holds {
            prop_assert_eq!(is_undermonoid(&a, &c, &budget).unwrap().status, Status::Holds);
        }
    }

    #[test]
    fn factorizations_evaluate_to_the_target(spec in signed_lattice(), pick in 0usize..64) {
        let budget = small_budget();
        let samples = sample_elements(&spec, &budget);
        prop_assume!(!samples.is_empty());
        let b = &samples[pick % samples.len()];
        let z = factorizations(&spec, b, &FactorSearchLimits::from_budget(&budget).with_max_results(200), &budget).unwrap();
        for f in &z.factorizations {
            let value = eval_factorization(&spec, f, &budget).unwrap();
            let diff = spec.difference(b, &value).unwrap().expect("lattice difference");
            prop_assert_eq!(spec.is_unit(&diff, &budget).unwrap(), Tri::Yes, "{} evaluates to {}, target {}", f, value, b);
        }
        if z.exhaustive {
            let l = length_set(&spec, b, &budget).unwrap();
            prop_assert_eq!(l, LengthSet::Finite(z.lengths()));
        }
    }

    #[test]
    fn dickson_minimal_is_a_covering_antichain(points in prop::collection::vec(prop::collection::vec(0i64..=6, 3), 1..=20)) {
        let min = dickson_minimal(&points).unwrap();
        let le = |a: &Vec<i64>, b: &Vec<i64>| a.iter().zip(b).all(|(x, y)| x <= y);
        for (i, a) in min.iter().enumerate() {
            for (j, b) in min.iter().enumerate() {
                prop_assert!(i == j || !le(a, b), "{:?} <= {:?}", a, b);
            }
        }
        for p in &points {
            prop_assert!(min.iter().any(|m| le(m, p)));
        }
    }

    #[test]
    fn longest_chain_is_maximal(points in prop::collection::vec(prop::collection::vec(0i64..=4, 2), 1..=12)) {
        let chain = longest_chain(&points).unwrap();
        let lt = |a: &Vec<i64>, b: &Vec<i64>| a != b && a.iter().zip(b).all(|(x, y)| x <= y);
        for w in chain.windows(2) {
            prop_assert!(lt(&w[0], &w[1]));
        }
        for p in &chain {
            prop_assert!(points.contains(p));
        }
        // exhaustive: the longest strictly increasing chain over all subsets
        let distinct: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let mut best = 0;
        for mask in 1u32..(1 << distinct.len()) {
            let mut sub: Vec<&Vec<i64>> = (0..distinct.len()).filter(|i| mask >> i & 1 == 1).map(|i| &distinct[i]).collect();
            sub.sort_by_key(|p| p.iter().sum::<i64>());
            if sub.windows(2).all(|w| lt(w[0], w[1])) {
                best = best.max(sub.len());
            }
        }
        prop_assert_eq!(chain.len(), best);
    }

    #[test]
    fn fails_verdicts_carry_valid_witnesses(spec in prop_oneof![
        catalog_index().prop_map(|i| MonoidSpec::catalog()[i].clone()),
        signed_lattice(),
    ]) {
        let budget = small_budget();
        for p in Property::ALL {
            let v = decide(&spec, p, &budget).unwrap();
            if let Some(w) = v.witness() {
                let check = validate_witness(&spec, p, w, 10, &budget);
                prop_assert!(check.is_valid(), "{} {}: {:?}", spec, p, check);
            }
        }
    }

    #[test]
    fn budget_monotonicity(i in catalog_index(), nodes in 1u64..5_000, denom in 1u64..12, coord in 1i64..8) {
        let spec = &MonoidSpec::catalog()[i];
        let small = Budget::default().with_nodes(nodes).with_denominator(denom).with_coordinate(coord);
        let large = Budget::default();
        prop_assert!(small.le(&large));
        for p in Property::ALL {
            let a = decide(spec, p, &small).unwrap().status;
            let b = decide(spec, p, &large).unwrap().status;
            if a != Status::Unknown && b != Status::Unknown {
                prop_assert_eq!(a, b, "{} {}", spec, p);
            }
        }
        for x in sample_elements(spec, &large).iter().take(10) {
            let a = spec.contains(x, &small).unwrap();
            let b = spec.contains(x, &large).unwrap();
            prop_assert!(a == Tri::Unknown || a == b, "contains {} in {}", x, spec);
        }
    }

    #[test]
    fn spec_round_trip(spec in any_spec()) {
        let text = render_spec(&spec);
        let back = parse_spec(&text).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(render_spec(&back), text);
    }

    #[test]
    fn parser_is_total(input in "\\PC{0,40}") {
        if let Err(diags) = parse(&SpecText::new(input.clone(), "prop")) {
            prop_assert!(!diags.is_empty());
            for d in &diags {
                prop_assert!(d.line >= 1 && d.column >= 1 && d.span >= 1, "{:?}", d);
            }
        }
    }

    #[test]
    fn parser_is_total_on_near_misses(input in "(N<|Z\\^|Q<|Group\\(|factorize |decide |\\(|[0-9]|,|/|-|>|\\)| ){0,16}") {
        if let Err(diags) = parse(&SpecText::new(input.clone(), "prop")) {
            prop_assert!(!diags.is_empty());
        }
    }
}

#[test]
fn corner_embedding_is_an_injective_homomorphism() {
    let grid: Vec<Element> = (0..=6i64)
        .flat_map(|m| (0..=6i64).map(move |n| Element::vector([m, n])))
        .filter(|v| {
            let c = v.as_vector().unwrap();
            (c[0] == 0) == (c[1] == 0)
        })
        .collect();
    let corner = MonoidSpec::corner_n2();
    let mut images = BTreeSet::new();
    for x in &grid {
        let ex = corner_embedding(2, 3, x).unwrap();
        assert!(images.insert(ex), "{x} collides");
        for y in &grid {
            let sum = corner.op(x, y).unwrap();
            assert_eq!(corner_embedding(2, 3, &sum).unwrap(), ex * corner_embedding(2, 3, y).unwrap());
        }
    }
}
