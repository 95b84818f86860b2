#![allow(dead_code)]

use std::sync::Arc;

use nilclean_core::dsl::{build, default_catalog, Context};
use nilclean_core::ValidatedRing;
use proptest::prelude::*;

/// Small rings used as property-test inputs.
pub const POOL: [&str; 14] = [
    "Z1",
    "Z2",
    "Z3",
    "Z4",
    "Z6",
    "Z8",
    "Z9",
    "Z12",
    "Z2xZ2",
    "Z2xZ4",
    "Z2xZ2xZ2",
    "UT2(Z2)",
    "UT2(Z3)",
    "Tri(Z2, nat(C2xC2), Z2)",
];

pub fn ring(expr: &str) -> Arc<ValidatedRing> {
    build(expr, &Context::default()).unwrap().ring
}

pub fn pool() -> Vec<Arc<ValidatedRing>> {
    let mut out: Vec<_> = POOL.iter().map(|e| ring(e)).collect();
    out.extend(default_catalog().into_iter().map(|c| c.ring));
    out
}

/// A pool ring with its non-zero elements shuffled.
pub fn arb_ring() -> impl Strategy<Value = ValidatedRing> {
    let rings = pool();
    (0..rings.len()).prop_flat_map(move |i| {
        let r = rings[i].clone();
        let n = r.order();
        Just((1..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |rest| {
                let mut perm = vec![0];
                perm.extend(rest);
                r.relabel(&perm)
            })
    })
}

/// Brute-force nil clean data over an explicit element list, independent of
/// the table machinery.
pub type BinOp<T> = Box<dyn Fn(&T, &T) -> T>;

pub struct Oracle<T> {
    pub elems: Vec<T>,
    pub zero: T,
    pub add: BinOp<T>,
    pub mul: BinOp<T>,
}

impl<T: Clone + PartialEq> Oracle<T> {
    fn neg(&self, a: &T) -> T {
        self.elems
            .iter()
            .find(|b| (self.add)(a, b) == self.zero)
            .expect("additive inverse")
            .clone()
    }

    pub fn is_nilpotent(&self, a: &T) -> bool {
        let mut p = a.clone();
        for _ in 0..=self.elems.len() {
            if p == self.zero {
                return true;
            }
            p = (self.mul)(&p, a);
        }
        false
    }

    pub fn eta_size(&self, a: &T) -> usize {
        self.elems
            .iter()
            .filter(|e| (self.mul)(e, e) == **e)
            .filter(|e| self.is_nilpotent(&(self.add)(a, &self.neg(e))))
            .count()
    }

    pub fn nin(&self) -> usize {
        self.elems.iter().map(|a| self.eta_size(a)).max().unwrap()
    }
}

type Triple = (u64, u64, u64);

fn triples(a: u64, m: u64, b: u64) -> Vec<Triple> {
    let mut v = Vec::new();
    for x in 0..a {
        for w in 0..m {
            for y in 0..b {
                v.push((x, w, y));
            }
        }
    }
    v
}

/// `[[Z_n, Z_n], [0, Z_n]]` by modular arithmetic.
pub fn oracle_regular(n: u64) -> Oracle<Triple> {
    Oracle {
        elems: triples(n, n, n),
        zero: (0, 0, 0),
        add: Box::new(move |p, q| ((p.0 + q.0) % n, (p.1 + q.1) % n, (p.2 + q.2) % n)),
        mul: Box::new(move |p, q| {
            (
                (p.0 * q.0) % n,
                (p.0 * q.1 + p.1 * q.2) % n,
                (p.2 * q.2) % n,
            )
        }),
    }
}

/// `[[F2, F2^k], [0, F2]]` with scalar actions on both sides.
pub fn oracle_f2_vector(k: u32) -> Oracle<(u64, u64, u64)> {
    Oracle {
        elems: triples(2, 1 << k, 2),
        zero: (0, 0, 0),
        add: Box::new(|p, q| (p.0 ^ q.0, p.1 ^ q.1, p.2 ^ q.2)),
        mul: Box::new(|p, q| {
            let w = (if p.0 == 1 { q.1 } else { 0 }) ^ (if q.2 == 1 { p.1 } else { 0 });
            (p.0 & q.0, w, p.2 & q.2)
        }),
    }
}

/// Upper triangular 2×2 matrices over F2 as `(x, y, z)` = `[[x, y], [0, z]]`.
fn ut2_mul(p: (u64, u64, u64), q: (u64, u64, u64)) -> (u64, u64, u64) {
    (p.0 & q.0, (p.0 & q.1) ^ (p.1 & q.2), p.2 & q.2)
}

/// `[[F2, F2], [0, UT2(F2)]]` where `UT2(F2)` acts on the right through the
/// bottom-right entry.
pub fn oracle_corner() -> Oracle<(u64, u64, (u64, u64, u64))> {
    let mut elems = Vec::new();
    for a in 0..2 {
        for w in 0..2 {
            for b in triples(2, 2, 2) {
                elems.push((a, w, b));
            }
        }
    }
    Oracle {
        elems,
        zero: (0, 0, (0, 0, 0)),
        add: Box::new(|p, q| {
            (
                p.0 ^ q.0,
                p.1 ^ q.1,
                (p.2 .0 ^ q.2 .0, p.2 .1 ^ q.2 .1, p.2 .2 ^ q.2 .2),
            )
        }),
        mul: Box::new(|p, q| (p.0 & q.0, (p.0 & q.1) ^ (p.1 & q.2 .2), ut2_mul(p.2, q.2))),
    }
}

/// Every enumerated bimodule over the default catalog with `|M|` in 2..=4.
pub fn catalog_bimodules() -> Vec<nilclean_core::Bimodule> {
    use nilclean_core::{enumerate_bimodules, FinAbGroup, GroupType, DEFAULT_BUDGET};
    let cat = default_catalog();
    let mut out = Vec::new();
    for a in &cat {
        for b in &cat {
            for m in 2..=4 {
                for t in GroupType::all_of_order(m) {
                    let g = FinAbGroup::from_type(&t);
                    out.extend(enumerate_bimodules(&a.ring, &b.ring, &g, DEFAULT_BUDGET).unwrap());
                }
            }
        }
    }
    out
}

pub fn arb_bimodule() -> impl Strategy<Value = nilclean_core::Bimodule> {
    let all = catalog_bimodules();
    (0..all.len()).prop_map(move |i| all[i].clone())
}
