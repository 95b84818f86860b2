mod common;

use std::collections::HashMap;

use common::catalog_bimodules;
use nilclean_core::construct::triangular_unchecked;
use nilclean_core::dsl::{parse, Expr, ModuleSpec};
use nilclean_core::{canonical_hash, GroupType};
use proptest::prelude::*;

fn arb_group_type() -> impl Strategy<Value = GroupType> {
    prop::collection::vec(2usize..9, 1..4).prop_map(|v| GroupType::from_cyclic_orders(&v))
}

fn arb_path() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_./-]{0,12}"
}

fn arb_mspec() -> impl Strategy<Value = ModuleSpec> {
    prop_oneof![
        Just(ModuleSpec::Reg),
        arb_group_type().prop_map(ModuleSpec::Nat),
        arb_path().prop_map(ModuleSpec::File),
    ]
}

/// Products only ever nest on the left, matching the parser's associativity.
fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (1usize..100).prop_map(Expr::Cyclic),
        arb_path().prop_map(Expr::File),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        let atom = prop_oneof![
            (1usize..100).prop_map(Expr::Cyclic),
            inner.clone().prop_map(|e| Expr::Ut2(Box::new(e))),
            (inner.clone(), arb_mspec(), inner.clone()).prop_map(|(a, m, b)| Expr::Tri(
                Box::new(a),
                m,
                Box::new(b)
            )),
        ];
        prop::collection::vec(atom, 1..4).prop_map(|terms| {
            let mut it = terms.into_iter();
            let first = it.next().unwrap();
            it.fold(first, |acc, t| Expr::Product(Box::new(acc), Box::new(t)))
        })
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(e in arb_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse(&text).unwrap(), e);
    }

    #[test]
    fn garbage_is_rejected_with_an_offset(s in "[A-Za-z0-9(), ]{0,20}") {
        match parse(&s) {
            Ok(e) => prop_assert_eq!(parse(&e.to_string()).unwrap(), e),
            Err(err) => prop_assert!(err.offset <= s.len()),
        }
    }
}

#[test]
fn hashes_separate_distinct_tables() {
    let mut seen: HashMap<String, nilclean_core::RingTables> = HashMap::new();
    for bm in catalog_bimodules() {
        let spec = triangular_unchecked(bm.left_ring(), &bm, bm.right_ring()).unwrap();
        let r = spec.flattened();
        let h = canonical_hash(r);
        assert_eq!(h.len(), 16);
        if let Some(prev) = seen.insert(h.clone(), r.tables().clone()) {
            assert_eq!(&prev, r.tables(), "collision on {h}");
        }
    }
    assert!(seen.len() > 100);
}
