//! Finite unital rings given by addition and multiplication tables.
//!
//! Elements are indices `0..n`. Index 0 is always the additive identity;
//! the multiplicative identity is stored explicitly. All invariants below
//! are decided by exhaustive enumeration.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Axiom families checked by [`ValidatedRing::new`], in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    AdditiveIdentity,
    AdditiveInverse,
    AdditiveAssociativity,
    AdditiveCommutativity,
    MulAssociativity,
    LeftDistributivity,
    RightDistributivity,
    Unity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::AdditiveIdentity => "additive identity",
            Axiom::AdditiveInverse => "additive inverse",
            Axiom::AdditiveAssociativity => "additive associativity",
            Axiom::AdditiveCommutativity => "additive commutativity",
            Axiom::MulAssociativity => "multiplicative associativity",
            Axiom::LeftDistributivity => "left distributivity",
            Axiom::RightDistributivity => "right distributivity",
            Axiom::Unity => "unity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("axiom violated: {axiom} at witness {witness:?}")]
    AxiomViolation { axiom: Axiom, witness: [usize; 3] },
}

/// Unvalidated ring tables, as read from a file or produced by a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingTables {
    pub order: usize,
    pub one: usize,
    /// Row-major `order × order` addition table.
    pub add: Vec<u32>,
    /// Row-major `order × order` multiplication table.
    pub mul: Vec<u32>,
}

impl RingTables {
    pub fn from_fns(
        order: usize,
        one: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut a = Vec::with_capacity(order * order);
        let mut m = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                a.push(add(x, y) as u32);
                m.push(mul(x, y) as u32);
            }
        }
        RingTables {
            order,
            one,
            add: a,
            mul: m,
        }
    }

    fn check_shape(&self) -> Result<(), RingError> {
        let n = self.order;
        if n == 0 {
            return Err(RingError::Malformed("order must be at least 1".into()));
        }
        if self.add.len() != n * n || self.mul.len() != n * n {
            return Err(RingError::Malformed(format!("tables must be {n}x{n}")));
        }
        if self.one >= n {
            return Err(RingError::Malformed(format!(
                "one = {} out of range",
                self.one
            )));
        }
        if let Some(bad) = self.add.iter().chain(&self.mul).find(|&&v| v as usize >= n) {
            return Err(RingError::Malformed(format!("entry {bad} out of range")));
        }
        Ok(())
    }
}

/// Checks that `add` (row-major, `n × n`) is an abelian group law with identity 0.
///
/// Order of checks: identity, inverses (every row a permutation containing 0),
/// associativity, commutativity.
pub(crate) fn check_abelian_group(n: usize, add: &[u32]) -> Result<(), (Axiom, [usize; 3])> {
    let at = |a: usize, b: usize| add[a * n + b] as usize;
    for a in 0..n {
        if at(0, a) != a || at(a, 0) != a {
            return Err((Axiom::AdditiveIdentity, [a, 0, 0]));
        }
    }
    let mut seen = vec![false; n];
    for a in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for b in 0..n {
            let s = at(a, b);
            if seen[s] {
                return Err((Axiom::AdditiveInverse, [a, b, 0]));
            }
            seen[s] = true;
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = at(a, b);
            for c in 0..n {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err((Axiom::AdditiveAssociativity, [a, b, c]));
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if at(a, b) != at(b, a) {
                return Err((Axiom::AdditiveCommutativity, [a, b, 0]));
            }
        }
    }
    Ok(())
}

/// A finite unital ring whose tables passed every axiom check.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedRing {
    tables: RingTables,
    neg: Vec<u32>,
}

impl ValidatedRing {
    /// Validates `tables` exhaustively, checking all triples.
    pub fn new(tables: RingTables) -> Result<Self, RingError> {
        tables.check_shape()?;
        let n = tables.order;
        check_abelian_group(n, &tables.add)
            .map_err(|(axiom, witness)| RingError::AxiomViolation { axiom, witness })?;
        let ring = Self::from_tables_unchecked(tables);
        ring.check_multiplicative()?;
        Ok(ring)
    }

    /// Wraps tables without running the O(n³) axiom scan.
    ///
    /// The additive part must already be a group law; callers that cannot
    /// guarantee the full axioms must call [`ValidatedRing::new`] instead.
    pub(crate) fn from_tables_unchecked(tables: RingTables) -> Self {
        let n = tables.order;
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| tables.add[a * n + b] == 0).unwrap_or(0) as u32)
            .collect();
        ValidatedRing { tables, neg }
    }

    fn check_multiplicative(&self) -> Result<(), RingError> {
        let n = self.order();
        let violation = |axiom, witness| Err(RingError::AxiomViolation { axiom, witness });
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return violation(Axiom::MulAssociativity, [a, b, c]);
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return violation(Axiom::LeftDistributivity, [a, b, c]);
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.add(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.add(self.mul(a, c), self.mul(b, c)) {
                        return violation(Axiom::RightDistributivity, [a, b, c]);
                    }
                }
            }
        }
        let one = self.one();
        for a in 0..n {
            if self.mul(one, a) != a || self.mul(a, one) != a {
                return violation(Axiom::Unity, [a, 0, 0]);
            }
        }
        Ok(())
    }

    pub fn tables(&self) -> &RingTables {
        &self.tables
    }

    pub fn into_tables(self) -> RingTables {
        self.tables
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.tables.order
    }

    #[inline]
    pub fn one(&self) -> usize {
        self.tables.one
    }

    #[inline]
    pub fn zero(&self) -> usize {
        0
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.tables.add[a * self.tables.order + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.tables.mul[a * self.tables.order + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `a^k` by iterated multiplication; `a^0` is the identity.
    pub fn pow(&self, a: usize, k: u32) -> usize {
        (0..k).fold(self.one(), |acc, _| self.mul(acc, a))
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    /// Walks the forward orbit `a, a², …` for at most `order` steps.
    pub fn is_nilpotent(&self, a: usize) -> bool {
        let mut x = a;
        for _ in 0..self.order() {
            if x == 0 {
                return true;
            }
            x = self.mul(x, a);
        }
        x == 0
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&e| self.is_idempotent(e))
            .collect()
    }

    pub fn nilpotents(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&a| self.is_nilpotent(a))
            .collect()
    }

    pub fn nilpotent_mask(&self) -> Vec<bool> {
        (0..self.order()).map(|a| self.is_nilpotent(a)).collect()
    }

    pub fn units(&self) -> Vec<usize> {
        let n = self.order();
        let one = self.one();
        (0..n)
            .filter(|&u| (0..n).any(|v| self.mul(u, v) == one && self.mul(v, u) == one))
            .collect()
    }

    pub fn eta(&self, a: usize) -> EtaSet {
        self.eta_with(a, &self.idempotents(), &self.nilpotent_mask())
    }

    fn eta_with(&self, a: usize, idempotents: &[usize], nilpotent: &[bool]) -> EtaSet {
        let members = idempotents
            .iter()
            .copied()
            .filter(|&e| nilpotent[self.sub(a, e)])
            .collect();
        EtaSet {
            element: a,
            members,
        }
    }

    /// η(a) for every element, indexed by element.
    pub fn eta_all(&self) -> Vec<EtaSet> {
        let idem = self.idempotents();
        let nil = self.nilpotent_mask();
        (0..self.order())
            .map(|a| self.eta_with(a, &idem, &nil))
            .collect()
    }

    pub fn nil_clean_index(&self) -> IndexReport {
        let idem = self.idempotents();
        let nil = self.nilpotent_mask();
        let sizes: Vec<usize> = (0..self.order())
            .map(|a| self.eta_with(a, &idem, &nil).len())
            .collect();
        IndexReport::from_sizes(&sizes)
    }

    /// Same as [`nil_clean_index`](Self::nil_clean_index), scanning elements on
    /// the current rayon pool. The result does not depend on scheduling.
    pub fn nil_clean_index_par(&self) -> IndexReport {
        let idem = self.idempotents();
        let nil = self.nilpotent_mask();
        let sizes: Vec<usize> = (0..self.order())
            .into_par_iter()
            .map(|a| self.eta_with(a, &idem, &nil).len())
            .collect();
        IndexReport::from_sizes(&sizes)
    }

    pub fn is_nil_clean(&self) -> bool {
        let idem = self.idempotents();
        let nil = self.nilpotent_mask();
        (0..self.order()).all(|a| !self.eta_with(a, &idem, &nil).is_empty())
    }

    /// The opposite ring: same addition, `a ∘ b = b·a`.
    pub fn opposite(&self) -> ValidatedRing {
        let n = self.order();
        let tables =
            RingTables::from_fns(n, self.one(), |x, y| self.add(x, y), |x, y| self.mul(y, x));
        ValidatedRing::from_tables_unchecked(tables)
    }

    /// Relabels elements by a permutation fixing 0: element `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> ValidatedRing {
        let n = self.order();
        assert_eq!(perm.len(), n);
        assert_eq!(perm[0], 0, "relabeling must fix the additive identity");
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let tables = RingTables::from_fns(
            n,
            perm[self.one()],
            |x, y| perm[self.add(inv[x], inv[y])],
            |x, y| perm[self.mul(inv[x], inv[y])],
        );
        ValidatedRing::from_tables_unchecked(tables)
    }
}

/// η(a): idempotents `e` with `a - e` nilpotent, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaSet {
    pub element: usize,
    pub members: Vec<usize>,
}

impl EtaSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub nin: usize,
    /// Smallest element attaining `nin`.
    pub witness: usize,
    /// `|η(a)|` ↦ number of elements `a` with that size.
    pub histogram: BTreeMap<usize, usize>,
}

impl IndexReport {
    fn from_sizes(sizes: &[usize]) -> Self {
        let mut histogram = BTreeMap::new();
        let mut nin = 0;
        let mut witness = 0;
        for (a, &s) in sizes.iter().enumerate() {
            *histogram.entry(s).or_insert(0) += 1;
            if s > nin {
                nin = s;
                witness = a;
            }
        }
        IndexReport {
            nin,
            witness,
            histogram,
        }
    }
}
