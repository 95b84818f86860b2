mod common;

use nilclean_core::{FinAbGroup, GroupType};
use proptest::prelude::*;

fn arb_type() -> impl Strategy<Value = GroupType> {
    (1usize..=16).prop_flat_map(|n| {
        let types = GroupType::all_of_order(n);
        (0..types.len()).prop_map(move |i| types[i].clone())
    })
}

proptest! {
    #[test]
    fn from_type_round_trips(t in arb_type()) {
        let g = FinAbGroup::from_type(&t);
        prop_assert_eq!(g.order(), t.order());
        prop_assert_eq!(g.classify().unwrap(), t);
    }

    #[test]
    fn direct_sum_type(s in arb_type(), t in arb_type()) {
        prop_assume!(s.order() * t.order() <= 64);
        let g = FinAbGroup::from_type(&s).direct_sum(&FinAbGroup::from_type(&t));
        let mut orders = s.invariant_factors().to_vec();
        orders.extend_from_slice(t.invariant_factors());
        prop_assert_eq!(g.classify().unwrap(), GroupType::from_cyclic_orders(&orders));
    }

    #[test]
    fn element_orders_divide_group_order(t in arb_type()) {
        let g = FinAbGroup::from_type(&t);
        let exponent = t.invariant_factors().last().copied().unwrap_or(1);
        for o in g.element_orders() {
            prop_assert_eq!(g.order() % o, 0);
            prop_assert_eq!(exponent % o, 0);
        }
    }

    #[test]
    fn cyclic_subgroups_have_dividing_order(t in arb_type(), x in any::<prop::sample::Index>()) {
        let g = FinAbGroup::from_type(&t);
        let x = x.index(g.order());
        let mut sub = vec![0];
        let mut y = x;
        while y != 0 {
            sub.push(y);
            y = g.add(y, x);
        }
        prop_assert_eq!(g.order() % sub.len(), 0);
        prop_assert_eq!(g.is_proper_subgroup(&sub).unwrap(), sub.len() < g.order());
    }

    #[test]
    fn type_strings_round_trip(t in arb_type()) {
        prop_assert_eq!(t.to_string().parse::<GroupType>().unwrap(), t);
    }
}

#[test]
fn counts_of_types_by_order() {
    let counts: Vec<usize> = (1..=16).map(|n| GroupType::all_of_order(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
    assert_eq!(GroupType::all_of_order(64).len(), 11);
}

#[test]
fn crt_merges_coprime_factors() {
    let t: GroupType = "C2xC3".parse().unwrap();
    assert_eq!(t.to_string(), "C6");
    assert!(t.is_cyclic_p_power().is_none());
    assert_eq!(
        "C8".parse::<GroupType>().unwrap().is_cyclic_p_power(),
        Some((2, 3))
    );
}
