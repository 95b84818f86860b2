//! Finite abelian groups given by addition tables, and their isomorphism types.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{check_abelian_group, Axiom, ValidatedRing};

pub const DEFAULT_CLASSIFY_BOUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("malformed group table: {0}")]
    Malformed(String),
    #[error("group axiom violated: {axiom} at witness {witness:?}")]
    AxiomViolation { axiom: Axiom, witness: [usize; 3] },
    #[error("group of order {order} exceeds the classification bound {bound}")]
    NotClassified { order: usize, bound: usize },
    #[error("subset is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("invalid group type: {0}")]
    InvalidType(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    order: usize,
    add: Vec<u32>,
}

impl FinAbGroup {
    pub fn new(order: usize, add: Vec<u32>) -> Result<Self, GroupError> {
        if order == 0 || add.len() != order * order {
            return Err(GroupError::Malformed(format!(
                "expected a {order}x{order} table of positive order"
            )));
        }
        if let Some(v) = add.iter().find(|&&v| v as usize >= order) {
            return Err(GroupError::Malformed(format!("entry {v} out of range")));
        }
        check_abelian_group(order, &add)
            .map_err(|(axiom, witness)| GroupError::AxiomViolation { axiom, witness })?;
        Ok(FinAbGroup { order, add })
    }

    /// The additive group of a ring.
    pub fn additive_group_of(ring: &ValidatedRing) -> Self {
        FinAbGroup {
            order: ring.order(),
            add: ring.tables().add.clone(),
        }
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_type(&GroupType::cyclic(n))
    }

    /// Direct sum of cyclic groups. Elements are mixed-radix tuples with the
    /// first invariant factor most significant.
    pub fn from_type(t: &GroupType) -> Self {
        let radices = t.invariant_factors();
        let order = t.order();
        let digits = |mut x: usize| {
            let mut d = vec![0; radices.len()];
            for i in (0..radices.len()).rev() {
                d[i] = x % radices[i];
                x /= radices[i];
            }
            d
        };
        let encode = |d: &[usize]| d.iter().zip(radices).fold(0, |acc, (&x, &r)| acc * r + x);
        let mut add = Vec::with_capacity(order * order);
        for x in 0..order {
            let dx = digits(x);
            for y in 0..order {
                let dy = digits(y);
                let s: Vec<usize> = (0..radices.len())
                    .map(|i| (dx[i] + dy[i]) % radices[i])
                    .collect();
                add.push(encode(&s) as u32);
            }
        }
        FinAbGroup { order, add }
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let (n, m) = (self.order, other.order);
        let mut add = Vec::with_capacity(n * m * n * m);
        for x in 0..n * m {
            for y in 0..n * m {
                let s = self.add(x / m, y / m) * m + other.add(x % m, y % m);
                add.push(s as u32);
            }
        }
        FinAbGroup { order: n * m, add }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.add(a, b) == 0).unwrap_or(0)
    }

    pub fn table(&self) -> &[u32] {
        &self.add
    }

    /// Order of each element under repeated addition, indexed by element.
    pub fn element_orders(&self) -> Vec<usize> {
        (0..self.order)
            .map(|a| {
                let mut k = 1;
                let mut x = a;
                while x != 0 {
                    x = self.add(x, a);
                    k += 1;
                }
                k
            })
            .collect()
    }

    /// Smallest generating sequence, chosen greedily by index.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[0] = true;
        for x in 1..self.order {
            if !span[x] {
                gens.push(x);
                span = self.span_mask(&gens);
            }
        }
        gens
    }

    pub(crate) fn span_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut span = vec![false; self.order];
        span[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if !span[y] {
                    span[y] = true;
                    stack.push(y);
                }
            }
        }
        span
    }

    pub fn classify(&self) -> Result<GroupType, GroupError> {
        DEFAULT_CLASSIFIER.classify(self)
    }

    /// `Ok(true)` iff `subset` is a subgroup other than the whole group.
    pub fn is_proper_subgroup(&self, subset: &[usize]) -> Result<bool, GroupError> {
        let mut mask = vec![false; self.order];
        for &x in subset {
            if x >= self.order {
                return Err(GroupError::NotASubgroup(format!(
                    "element {x} out of range"
                )));
            }
            mask[x] = true;
        }
        if !mask[0] {
            return Err(GroupError::NotASubgroup("does not contain 0".into()));
        }
        for x in (0..self.order).filter(|&x| mask[x]) {
            if !mask[self.neg(x)] {
                return Err(GroupError::NotASubgroup(format!("-{x} missing")));
            }
            for y in (0..self.order).filter(|&y| mask[y]) {
                if !mask[self.add(x, y)] {
                    return Err(GroupError::NotASubgroup(format!("{x}+{y} missing")));
                }
            }
        }
        Ok(mask.iter().any(|&m| !m))
    }
}

/// Isomorphism type of a finite abelian group as invariant factors
/// `d1 | d2 | … | dk`, each at least 2. The trivial group has no factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupType(Vec<usize>);

impl GroupType {
    pub fn new(invariant_factors: Vec<usize>) -> Result<Self, GroupError> {
        if invariant_factors.iter().any(|&d| d < 2) {
            return Err(GroupError::InvalidType(
                "invariant factors must be at least 2".into(),
            ));
        }
        if invariant_factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(GroupError::InvalidType(format!(
                "{invariant_factors:?} is not a divisibility chain"
            )));
        }
        Ok(GroupType(invariant_factors))
    }

    pub fn cyclic(n: usize) -> Self {
        if n <= 1 {
            GroupType(vec![])
        } else {
            GroupType(vec![n])
        }
    }

    pub fn invariant_factors(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.iter().product()
    }

    /// `Some((p, k))` iff the type is the cyclic group of order `p^k`, `p` prime, `k ≥ 1`.
    pub fn is_cyclic_p_power(&self) -> Option<(usize, u32)> {
        let [n] = self.0[..] else { return None };
        let p = smallest_prime_factor(n);
        let mut k = 0;
        let mut m = n;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        (m == 1).then_some((p, k))
    }

    /// Every isomorphism type of the given order: cyclic first, then by
    /// number of factors and lexicographically.
    pub fn all_of_order(n: usize) -> Vec<GroupType> {
        if n == 1 {
            return vec![GroupType(vec![])];
        }
        // Each prime power p^k contributes a partition of k.
        let mut per_prime: Vec<Vec<Vec<usize>>> = Vec::new();
        for (p, k) in factorize(n) {
            per_prime.push(
                partitions(k)
                    .into_iter()
                    .map(|parts| parts.into_iter().map(|e| p.pow(e as u32)).collect())
                    .collect(),
            );
        }
        let mut out = vec![Vec::<usize>::new()];
        for choices in per_prime {
            let mut next = Vec::new();
            for acc in &out {
                for powers in &choices {
                    next.push(merge_invariant_factors(acc, powers));
                }
            }
            out = next;
        }
        let mut types: Vec<GroupType> = out.into_iter().map(GroupType).collect();
        types.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        types
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("C1");
        }
        let parts: Vec<String> = self.0.iter().map(|d| format!("C{d}")).collect();
        f.write_str(&parts.join("x"))
    }
}

impl FromStr for GroupType {
    type Err = GroupError;

    /// Parses `C2`, `C2xC4`, … The factors need not be a divisibility chain;
    /// they are normalized to invariant factors.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cyclic = Vec::new();
        for part in s.split('x') {
            let n: usize = part
                .strip_prefix('C')
                .and_then(|d| d.parse().ok())
                .filter(|&n: &usize| n >= 1)
                .ok_or_else(|| GroupError::InvalidType(s.to_string()))?;
            cyclic.push(n);
        }
        Ok(GroupType::from_cyclic_orders(&cyclic))
    }
}

impl GroupType {
    /// Invariant factors of `C_{n1} ⊕ C_{n2} ⊕ …`.
    pub fn from_cyclic_orders(orders: &[usize]) -> GroupType {
        let mut acc = Vec::new();
        for &n in orders {
            if n > 1 {
                for (p, k) in factorize(n) {
                    acc = merge_invariant_factors(&acc, &[p.pow(k as u32)]);
                }
            }
        }
        GroupType(acc)
    }
}

impl Serialize for GroupType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Merge prime-power cyclic summands into existing invariant factors.
fn merge_invariant_factors(factors: &[usize], prime_powers: &[usize]) -> Vec<usize> {
    // Decompose everything into primary components, then rebuild the chain.
    let mut by_prime: HashMap<usize, Vec<usize>> = HashMap::new();
    for &d in factors.iter().chain(prime_powers) {
        for (p, k) in factorize(d) {
            by_prime.entry(p).or_default().push(p.pow(k as u32));
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1usize; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable();
        let offset = len - powers.len();
        for (i, q) in powers.iter().enumerate() {
            out[offset + i] *= q;
        }
    }
    out
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..)
        .take_while(|p| p * p <= n)
        .find(|p| n.is_multiple_of(*p))
        .unwrap_or(n)
}

fn factorize(mut n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Partitions of `k` into nonincreasing parts.
fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            cur.push(part);
            go(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Sorted element orders of `g`.
fn order_statistics(g: &FinAbGroup) -> Vec<usize> {
    let mut orders = g.element_orders();
    orders.sort_unstable();
    orders
}

/// Lookup table from element-order statistics to isomorphism type, for every
/// abelian group type up to a bound.
pub struct Classifier {
    bound: usize,
    table: HashMap<Vec<usize>, GroupType>,
}

static DEFAULT_CLASSIFIER: LazyLock<Classifier> =
    LazyLock::new(|| Classifier::new(DEFAULT_CLASSIFY_BOUND));

impl Classifier {
    pub fn new(bound: usize) -> Self {
        let mut table = HashMap::new();
        for n in 1..=bound {
            for t in GroupType::all_of_order(n) {
                let stats = order_statistics(&FinAbGroup::from_type(&t));
                let prev = table.insert(stats, t);
                debug_assert!(prev.is_none(), "order statistics collide");
            }
        }
        Classifier { bound, table }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn classify(&self, g: &FinAbGroup) -> Result<GroupType, GroupError> {
        if g.order() > self.bound {
            return Err(GroupError::NotClassified {
                order: g.order(),
                bound: self.bound,
            });
        }
        let stats = order_statistics(g);
        self.table
            .get(&stats)
            .cloned()
            .ok_or_else(|| GroupError::Malformed("order statistics match no abelian type".into()))
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.table.len()
    }
}
