use locus::ordinals::{ord_add, ord_compare, Ordinal};
use proptest::prelude::*;
use std::cmp::Ordering;

fn ordinal() -> impl Strategy<Value = Ordinal> {
    prop::collection::btree_map(0u32..4, 1u64..5, 0..4).prop_map(|m| {
        Ordinal::from_terms(m.into_iter().rev().collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn addition_is_associative(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(ord_add(&ord_add(&a, &b), &c), ord_add(&a, &ord_add(&b, &c)));
    }

    #[test]
    fn addition_is_monotone_on_the_right(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert!(ord_add(&a, &b) >= a);
        if b < c {
            prop_assert!(ord_add(&a, &b) < ord_add(&a, &c));
        }
    }

    #[test]
    fn rendering_round_trips(a in ordinal()) {
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a.clone());
        prop_assert_eq!(ord_compare(&a, &a), Ordering::Equal);
    }
}

#[test]
fn finite_ordinals_are_naturals() {
    for x in 0..6u64 {
        for y in 0..6u64 {
            assert_eq!(ord_add(&Ordinal::finite(x), &Ordinal::finite(y)), Ordinal::finite(x + y));
            assert_eq!(ord_compare(&Ordinal::finite(x), &Ordinal::finite(y)), x.cmp(&y));
        }
    }
}
