//! Containment, Θ and spectrum properties on small random S-primes.

mod common;

use itertools::Itertools;
use proptest::prelude::*;

use common::*;
use sprime_core::combinat::{predecessors, WeightedShape};
use sprime_core::spectrum::{contains_radical, intersect_radical, make_radical, RadicalSIdeal};
use sprime_core::sprime::SPrimeData;
use sprime_core::theta::{contains, theta};
use sprime_core::witness::{build_h, certify, find_rational_point, WitnessLayout};

fn radical_strategy() -> impl Strategy<Value = RadicalSIdeal> {
    proptest::collection::vec(prime_strategy(), 0..=3).prop_map(|ps| make_radical(ps).unwrap())
}

fn same(a: &RadicalSIdeal, b: &RadicalSIdeal) -> bool {
    contains_radical(a, b).unwrap() && contains_radical(b, a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, max_global_rejects: 8192, ..ProptestConfig::default() })]

    #[test]
    fn theta_composes((p, nu, mu) in composition_strategy()) {
        check_theta_composition(p, nu, mu)?;
    }

    #[test]
    fn contains_is_reflexive(p in prime_strategy()) {
        check_reflexive(p)?;
    }

    #[test]
    fn contains_is_transitive(p in prime_strategy(), q in prime_strategy(), r in prime_strategy()) {
        check_transitive_total(p, q, r)?;
    }

    #[test]
    fn make_radical_keeps_an_antichain(ps in proptest::collection::vec(prime_strategy(), 1..=4)) {
        check_antichain(ps)?;
    }

    #[test]
    fn contains_ignores_part_order(p in prime_strategy(), q in prime_strategy(), seed in any::<u64>()) {
        check_relabel(p, q, seed)?;
    }

    #[test]
    fn radical_intersection_laws(a in radical_strategy(), b in radical_strategy(), c in radical_strategy()) {
        let ab = intersect_radical(&a, &b).unwrap();
        prop_assert!(same(&intersect_radical(&a, &a).unwrap(), &a));
        prop_assert!(same(&ab, &intersect_radical(&b, &a).unwrap()));
        let left = intersect_radical(&ab, &c).unwrap();
        let right = intersect_radical(&a, &intersect_radical(&b, &c).unwrap()).unwrap();
        prop_assert!(same(&left, &right));
        prop_assert!(ab.is_antichain().unwrap());
        prop_assert!(contains_radical(&ab, &a).unwrap());
    }

    #[test]
    fn radical_containment_is_a_partial_order(a in radical_strategy(), b in radical_strategy(), c in radical_strategy()) {
        prop_assert!(contains_radical(&a, &a).unwrap());
        if contains_radical(&a, &b).unwrap() && contains_radical(&b, &c).unwrap() {
            prop_assert!(contains_radical(&a, &c).unwrap());
        }
    }

    #[test]
    fn slices_grow_downward(p in prime_strategy(), seed in any::<u64>()) {
        // Decrement moves keep the index set, so slices are directly comparable.
        let s = p.shape().clone();
        let below: Vec<WeightedShape> = predecessors(&s, 1).into_iter().filter(|t| t.r() == s.r()).collect();
        prop_assume!(!below.is_empty());
        let t = &below[(seed % below.len() as u64) as usize];
        let big = theta(&p, &s).unwrap().ideal;
        let small = theta(&p, t).unwrap().ideal;
        // Θ at s is cut out by `big`; at the decremented shape every generator
        // of `small` must vanish on V(big).
        for g in small.gens() {
            prop_assert!(big.radical_member(g).unwrap(), "{} not on V({:?}) ({} → {})", g, big, s, t);
        }
    }

    #[test]
    fn witnesses_separate(p in prime_strategy(), q in prime_strategy()) {
        // Membership enumerates r^m assignments of the witness window; keep it small.
        let m = WitnessLayout::new(p.shape(), q.shape()).m;
        prop_assume!((p.r().max(q.r()) as u64).pow(m) <= 4096);
        let c = contains(&p, &q).unwrap();
        prop_assume!(!c.contains);
        let y = find_rational_point(&q, &c.theta.ideal);
        prop_assume!(y.is_some());
        let w = build_h(&p, q.shape(), y.as_deref()).unwrap();
        prop_assert_eq!(certify(&w.h, &p, &q).unwrap(), (true, false), "{}", w.h.to_text());
    }
}

fn pool() -> Vec<SPrimeData> {
    vec![
        sp(&[0], &[1], &[]),
        sp(&[0], &[1], &["t1"]),
        sp(&[0], &[2], &["t1"]),
        sp(&[0], &[3], &["t1"]),
        sp(&[0], &[2], &[]),
        sp(&[0, 0], &[1, 1], &[]),
        sp(&[0, 0], &[1, 1], &["t1 + t2"]),
        sp(&[0, 0], &[1, 1], &["t1", "t2 - 1"]),
        sp(&[0, 1], &[1, 1], &[]),
        sp(&[0, 0], &[2, 1], &["t1 - 2*t2"]),
        sp(&[0, 0], &[2, 2], &["t1^2 + t2^2 - 1"]),
    ]
}

#[test]
fn transitivity_on_a_pool_with_real_chains() {
    let ps = pool();
    let c: Vec<Vec<bool>> =
        ps.iter().map(|p| ps.iter().map(|q| contains(p, q).unwrap().contains).collect()).collect();
    let mut chains = 0;
    for (a, b, d) in (0..ps.len()).cartesian_product(0..ps.len()).cartesian_product(0..ps.len()).map(|((a, b), d)| (a, b, d)) {
        if a != b && b != d && c[a][b] && c[b][d] {
            chains += 1;
            assert!(c[a][d], "{} ⊆ {} ⊆ {}", ps[a], ps[b], ps[d]);
        }
    }
    assert!(chains >= 10, "only {chains} strict chains");
    // Antisymmetry up to equality: mutual containment only for equal data here.
    for (a, b) in (0..ps.len()).tuple_combinations() {
        assert!(!(c[a][b] && c[b][a]), "{} and {} contain each other", ps[a], ps[b]);
    }
}
