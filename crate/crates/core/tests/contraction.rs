//! Contraction theorem over the desk-scale envelope and the derivative criterion.

mod common;

use proptest::prelude::*;

use common::*;
use sprime_core::contractlab::{contract_ideal, derivative_criterion, predicted_ideal, verify_contract};
use sprime_core::poly::{diff, QPoly, Rational, Var};

#[test]
fn char0_envelope() {
    for (n, qq) in [
        (2, vec![1, 3]),
        (2, vec![2, 3]),
        (3, vec![1, 1, 1]),
        (3, vec![1, 2, 2]),
        (3, vec![1, 2, 3]),
        (4, vec![1, 1, 1, 1]),
        (4, vec![2, 2, 2, 2]),
    ] {
        let r = verify_contract(n, &qq, 0).unwrap();
        assert!(r.verified, "{n} {qq:?}: {:?}", r.basis);
    }
}

#[test]
fn char2_envelope() {
    for (n, qq) in [(2, vec![4, 4]), (3, vec![2, 2, 2]), (2, vec![1, 1])] {
        assert!(verify_contract(n, &qq, 2).unwrap().verified, "{n} {qq:?}");
    }
    // Characteristic 3 with q = 3.
    assert!(verify_contract(2, &[3, 3], 3).unwrap().verified);
}

fn poly_in(n: u32) -> impl Strategy<Value = QPoly> {
    proptest::collection::vec((-3i64..=3, proptest::collection::vec(0u32..=3, n as usize)), 1..=5).prop_map(|ts| {
        let mut f = QPoly::zero();
        for (c, e) in ts {
            let mut t = QPoly::int(c);
            for (i, k) in e.into_iter().enumerate() {
                t = &t * &QPoly::var(Var::x(i as u32 + 1)).pow(k);
            }
            f = &f + &t;
        }
        f
    })
}

fn weights() -> impl Strategy<Value = Vec<u32>> {
    prop_oneof![proptest::collection::vec(1u32..=2, 2), proptest::collection::vec(1u32..=2, 3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn derivative_criterion_matches_elimination(qq in weights(), f in poly_in(3)) {
        let n = qq.len() as u32;
        let f = f.eval_partial(&(n + 1..=3).map(|i| (Var::x(i), Rational::new(1, 1))).collect());
        let c = contract_ideal::<Rational>(n, &qq).unwrap();
        prop_assert_eq!(derivative_criterion(&f, &qq), c.contains(&f).unwrap(), "{}", f);
    }

    #[test]
    fn built_members_pass(qq in weights(), a in poly_in(3), b in poly_in(3)) {
        let n = qq.len() as u32;
        let f = &(&a * &diff::<Rational>(1, 2).pow(qq[0] + qq[1] - 1))
            + &(&b * &diff::<Rational>(1, n).pow(qq[0] + qq[n as usize - 1] - 1));
        prop_assert!(derivative_criterion(&f, &qq));
        prop_assert!(contract_ideal::<Rational>(n, &qq).unwrap().contains(&f).unwrap());
    }

    #[test]
    fn predicted_is_inside(qq in weights()) {
        let n = qq.len() as u32;
        let c = contract_ideal::<Rational>(n, &qq).unwrap();
        prop_assert!(c.contains_ideal(&predicted_ideal::<Rational>(n, &qq).unwrap()).unwrap());
    }
}

#[test]
fn non_members_fail_both() {
    // ↦ 2ε₁ε₂ε₃ modulo the squares.
    let f = q("(x1-x2)^2*(x1-x3)");
    assert!(!derivative_criterion(&f, &[2, 2, 2]));
    assert!(!contract_ideal::<Rational>(3, &[2, 2, 2]).unwrap().contains(&f).unwrap());
}
