//! A–B-bimodule structures on finite abelian groups.
//!
//! Actions are stored as full tables: `laction[a][w] = a·w` and
//! `raction[w][b] = w·b`. Enumeration treats a left action as a unital ring
//! homomorphism `A → End(M,+)` and a right action as a unital ring
//! homomorphism `B → End(M,+)^op`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{FinAbGroup, GroupError};
use crate::ring::{RingTables, ValidatedRing};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BimoduleAxiom {
    /// `(a + a')w = aw + a'w`
    LeftAdditiveInRing,
    /// `a(w + w') = aw + aw'`
    LeftAdditiveInModule,
    /// `(w + w')b = wb + w'b`
    RightAdditiveInModule,
    /// `w(b + b') = wb + wb'`
    RightAdditiveInRing,
    /// `(aa')w = a(a'w)`
    LeftAssociativity,
    /// `w(bb') = (wb)b'`
    RightAssociativity,
    /// `(aw)b = a(wb)`
    Compatibility,
    LeftUnital,
    RightUnital,
}

impl fmt::Display for BimoduleAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BimoduleError {
    #[error("malformed action table: {0}")]
    Malformed(String),
    #[error("bimodule axiom violated: {axiom} at witness {witness:?}")]
    AxiomViolation {
        axiom: BimoduleAxiom,
        witness: [usize; 3],
    },
    #[error("{which:?} map is not a unital ring homomorphism: {reason}")]
    NotARingHom { which: Side, reason: String },
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("element {element} is not idempotent in the {side:?} ring")]
    NotIdempotent { side: Side, element: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone)]
pub struct Bimodule {
    left: Arc<ValidatedRing>,
    right: Arc<ValidatedRing>,
    group: FinAbGroup,
    laction: Vec<u32>,
    raction: Vec<u32>,
    provenance: String,
}

impl PartialEq for Bimodule {
    fn eq(&self, other: &Self) -> bool {
        self.left == other.left
            && self.right == other.right
            && self.group == other.group
            && self.laction == other.laction
            && self.raction == other.raction
    }
}

impl Eq for Bimodule {}

impl Bimodule {
    /// Validates every bimodule axiom exhaustively.
    pub fn new(
        left: Arc<ValidatedRing>,
        right: Arc<ValidatedRing>,
        group: FinAbGroup,
        laction: Vec<u32>,
        raction: Vec<u32>,
    ) -> Result<Self, BimoduleError> {
        let (na, m, nb) = (left.order(), group.order(), right.order());
        if laction.len() != na * m || raction.len() != m * nb {
            return Err(BimoduleError::Malformed(format!(
                "expected {na}x{m} left and {m}x{nb} right tables"
            )));
        }
        if let Some(v) = laction.iter().chain(&raction).find(|&&v| v as usize >= m) {
            return Err(BimoduleError::Malformed(format!("entry {v} out of range")));
        }
        let bm = Bimodule {
            left,
            right,
            group,
            laction,
            raction,
            provenance: "tables".into(),
        };
        bm.check_axioms()?;
        Ok(bm)
    }

    fn check_axioms(&self) -> Result<(), BimoduleError> {
        use BimoduleAxiom::*;
        let (a_ring, b_ring, g) = (&*self.left, &*self.right, &self.group);
        let (na, m, nb) = (a_ring.order(), g.order(), b_ring.order());
        let fail = |axiom, witness| Err(BimoduleError::AxiomViolation { axiom, witness });
        for a in 0..na {
            for a2 in 0..na {
                for w in 0..m {
                    let lhs = self.lact(a_ring.add(a, a2), w);
                    if lhs != g.add(self.lact(a, w), self.lact(a2, w)) {
                        return fail(LeftAdditiveInRing, [a, a2, w]);
                    }
                }
            }
        }
        for a in 0..na {
            for w in 0..m {
                for w2 in 0..m {
                    if self.lact(a, g.add(w, w2)) != g.add(self.lact(a, w), self.lact(a, w2)) {
                        return fail(LeftAdditiveInModule, [a, w, w2]);
                    }
                }
            }
        }
        for w in 0..m {
            for w2 in 0..m {
                for b in 0..nb {
                    if self.ract(g.add(w, w2), b) != g.add(self.ract(w, b), self.ract(w2, b)) {
                        return fail(RightAdditiveInModule, [w, w2, b]);
                    }
                }
            }
        }
        for w in 0..m {
            for b in 0..nb {
                for b2 in 0..nb {
                    let lhs = self.ract(w, b_ring.add(b, b2));
                    if lhs != g.add(self.ract(w, b), self.ract(w, b2)) {
                        return fail(RightAdditiveInRing, [w, b, b2]);
                    }
                }
            }
        }
        for a in 0..na {
            for a2 in 0..na {
                for w in 0..m {
                    if self.lact(a_ring.mul(a, a2), w) != self.lact(a, self.lact(a2, w)) {
                        return fail(LeftAssociativity, [a, a2, w]);
                    }
                }
            }
        }
        for w in 0..m {
            for b in 0..nb {
                for b2 in 0..nb {
                    if self.ract(w, b_ring.mul(b, b2)) != self.ract(self.ract(w, b), b2) {
                        return fail(RightAssociativity, [w, b, b2]);
                    }
                }
            }
        }
        for a in 0..na {
            for w in 0..m {
                for b in 0..nb {
                    if self.ract(self.lact(a, w), b) != self.lact(a, self.ract(w, b)) {
                        return fail(Compatibility, [a, w, b]);
                    }
                }
            }
        }
        for w in 0..m {
            if self.lact(a_ring.one(), w) != w {
                return fail(LeftUnital, [a_ring.one(), w, 0]);
            }
        }
        for w in 0..m {
            if self.ract(w, b_ring.one()) != w {
                return fail(RightUnital, [w, b_ring.one(), 0]);
            }
        }
        Ok(())
    }

    /// `r` as an r–r-bimodule over its own additive group.
    pub fn regular(r: Arc<ValidatedRing>) -> Self {
        let t = r.tables();
        let bm = Bimodule {
            group: FinAbGroup::additive_group_of(&r),
            laction: t.mul.clone(),
            raction: t.mul.clone(),
            left: r.clone(),
            right: r,
            provenance: "regular".into(),
        };
        bm.with_check()
    }

    /// `C` as an A–B-bimodule through unital ring homs `φ: A → C`, `ψ: B → C`:
    /// `a·w = φ(a)w`, `w·b = wψ(b)`.
    pub fn hom_induced(
        a: Arc<ValidatedRing>,
        b: Arc<ValidatedRing>,
        c: &ValidatedRing,
        phi: &[usize],
        psi: &[usize],
    ) -> Result<Self, BimoduleError> {
        check_ring_hom(&a, c, phi).map_err(|reason| BimoduleError::NotARingHom {
            which: Side::Left,
            reason,
        })?;
        check_ring_hom(&b, c, psi).map_err(|reason| BimoduleError::NotARingHom {
            which: Side::Right,
            reason,
        })?;
        let m = c.order();
        let laction = (0..a.order())
            .flat_map(|x| (0..m).map(move |w| (x, w)))
            .map(|(x, w)| c.mul(phi[x], w) as u32)
            .collect();
        let raction = (0..m)
            .flat_map(|w| (0..b.order()).map(move |y| (w, y)))
            .map(|(w, y)| c.mul(w, psi[y]) as u32)
            .collect();
        let mut bm = Bimodule::new(a, b, FinAbGroup::additive_group_of(c), laction, raction)?;
        bm.provenance = "hom-induced".into();
        Ok(bm)
    }

    fn with_check(self) -> Self {
        if let Err(e) = self.check_axioms() {
            panic!("constructed bimodule failed validation: {e}");
        }
        self
    }

    pub(crate) fn from_parts_unchecked(
        left: Arc<ValidatedRing>,
        right: Arc<ValidatedRing>,
        group: FinAbGroup,
        laction: Vec<u32>,
        raction: Vec<u32>,
        provenance: String,
    ) -> Self {
        Bimodule {
            left,
            right,
            group,
            laction,
            raction,
            provenance,
        }
    }

    pub fn left_ring(&self) -> &Arc<ValidatedRing> {
        &self.left
    }

    pub fn right_ring(&self) -> &Arc<ValidatedRing> {
        &self.right
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn laction_table(&self) -> &[u32] {
        &self.laction
    }

    pub fn raction_table(&self) -> &[u32] {
        &self.raction
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn set_provenance(&mut self, p: impl Into<String>) {
        self.provenance = p.into();
    }

    /// `a·w`
    #[inline]
    pub fn lact(&self, a: usize, w: usize) -> usize {
        self.laction[a * self.group.order() + w] as usize
    }

    /// `w·b`
    #[inline]
    pub fn ract(&self, w: usize, b: usize) -> usize {
        self.raction[w * self.right.order() + b] as usize
    }

    /// The same group as a `B^op`–`A^op`-bimodule (sides exchanged).
    pub fn transpose(&self) -> Bimodule {
        let bop = Arc::new(self.right.opposite());
        let aop = Arc::new(self.left.opposite());
        let m = self.group.order();
        let laction = (0..bop.order())
            .flat_map(|b| (0..m).map(move |w| (b, w)))
            .map(|(b, w)| self.ract(w, b) as u32)
            .collect();
        let raction = (0..m)
            .flat_map(|w| (0..aop.order()).map(move |a| (w, a)))
            .map(|(w, a)| self.lact(a, w) as u32)
            .collect();
        Bimodule {
            left: bop,
            right: aop,
            group: self.group.clone(),
            laction,
            raction,
            provenance: format!("transpose of {}", self.provenance),
        }
        .with_check()
    }

    fn check_idempotents(&self, e: usize, f: usize) -> Result<(), BimoduleError> {
        if e >= self.left.order() || !self.left.is_idempotent(e) {
            return Err(BimoduleError::NotIdempotent {
                side: Side::Left,
                element: e,
            });
        }
        if f >= self.right.order() || !self.right.is_idempotent(f) {
            return Err(BimoduleError::NotIdempotent {
                side: Side::Right,
                element: f,
            });
        }
        Ok(())
    }

    /// Whether `eM(1_B - f) + (1_A - e)Mf ≠ 0`, decided as `∃w: ew ≠ wf`.
    pub fn module_condition(&self, e: usize, f: usize) -> Result<bool, BimoduleError> {
        self.check_idempotents(e, f)?;
        Ok((0..self.group.order()).any(|w| self.lact(e, w) != self.ract(w, f)))
    }

    /// Same predicate as [`module_condition`](Self::module_condition), computed
    /// by building the subgroup `eM(1_B - f) + (1_A - e)Mf` and testing it for zero.
    pub fn module_condition_by_subgroup(&self, e: usize, f: usize) -> Result<bool, BimoduleError> {
        self.check_idempotents(e, f)?;
        let m = self.group.order();
        let ce = self.left.sub(self.left.one(), e);
        let cf = self.right.sub(self.right.one(), f);
        let mut first = vec![false; m];
        let mut second = vec![false; m];
        for w in 0..m {
            first[self.ract(self.lact(e, w), cf)] = true;
            second[self.ract(self.lact(ce, w), f)] = true;
        }
        for x in (0..m).filter(|&x| first[x]) {
            for y in (0..m).filter(|&y| second[y]) {
                if self.group.add(x, y) != 0 {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// `{z ∈ M : ez = zf}`.
    pub fn fixed_set(&self, e: usize, f: usize) -> Result<Vec<usize>, BimoduleError> {
        self.check_idempotents(e, f)?;
        Ok((0..self.group.order())
            .filter(|&z| self.lact(e, z) == self.ract(z, f))
            .collect())
    }
}

/// Exhaustively checks that `map: src → dst` is additive, multiplicative and unital.
pub fn check_ring_hom(
    src: &ValidatedRing,
    dst: &ValidatedRing,
    map: &[usize],
) -> Result<(), String> {
    let n = src.order();
    if map.len() != n {
        return Err(format!("map has {} entries, expected {n}", map.len()));
    }
    if let Some(&v) = map.iter().find(|&&v| v >= dst.order()) {
        return Err(format!("image {v} out of range"));
    }
    for x in 0..n {
        for y in 0..n {
            if map[src.add(x, y)] != dst.add(map[x], map[y]) {
                return Err(format!("not additive at ({x}, {y})"));
            }
            if map[src.mul(x, y)] != dst.mul(map[x], map[y]) {
                return Err(format!("not multiplicative at ({x}, {y})"));
            }
        }
    }
    if map[src.one()] != dst.one() {
        return Err(format!("maps one to {}", map[src.one()]));
    }
    Ok(())
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn spend(&mut self, n: u64) -> Result<(), BimoduleError> {
        self.used += n;
        if self.used > self.limit {
            Err(BimoduleError::BudgetExhausted { nodes: self.used })
        } else {
            Ok(())
        }
    }
}

/// Extends images of `gens` additively over the subgroup they span.
///
/// Returns `None` when two paths to the same element disagree.
fn extend_additively(
    n: usize,
    dom_add: impl Fn(usize, usize) -> usize,
    gens: &[usize],
    images: &[usize],
    cod_add: impl Fn(usize, usize) -> usize,
) -> Option<Vec<Option<usize>>> {
    let mut val = vec![None; n];
    val[0] = Some(0);
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        let vx = val[x].expect("visited");
        for (&g, &img) in gens.iter().zip(images) {
            let y = dom_add(x, g);
            let vy = cod_add(vx, img);
            match val[y] {
                None => {
                    val[y] = Some(vy);
                    stack.push(y);
                }
                Some(v) if v != vy => return None,
                Some(_) => {}
            }
        }
    }
    Some(val)
}

/// The endomorphism ring of `(M,+)`, maps sorted lexicographically so the zero
/// map has index 0.
struct EndRing {
    maps: Vec<Vec<u32>>,
    ring: ValidatedRing,
    opposite: ValidatedRing,
}

impl EndRing {
    fn new(g: &FinAbGroup, budget: &mut Budget) -> Result<Self, BimoduleError> {
        let m = g.order();
        let gens = g.generators();
        let mut maps = Vec::new();
        let mut images = Vec::with_capacity(gens.len());
        fn go(
            g: &FinAbGroup,
            gens: &[usize],
            images: &mut Vec<usize>,
            maps: &mut Vec<Vec<u32>>,
            budget: &mut Budget,
        ) -> Result<(), BimoduleError> {
            let depth = images.len();
            let add = |x, y| g.add(x, y);
            let Some(ext) = extend_additively(g.order(), add, &gens[..depth], images, add) else {
                return Ok(());
            };
            if depth == gens.len() {
                maps.push(ext.into_iter().map(|v| v.expect("spans") as u32).collect());
                return Ok(());
            }
            for img in 0..g.order() {
                budget.spend(1)?;
                images.push(img);
                go(g, gens, images, maps, budget)?;
                images.pop();
            }
            Ok(())
        }
        go(g, &gens, &mut images, &mut maps, budget)?;
        maps.sort();
        let k = maps.len();
        budget.spend((k * k) as u64)?;
        let index: HashMap<&[u32], usize> =
            maps.iter().enumerate().map(|(i, v)| (&v[..], i)).collect();
        let identity: Vec<u32> = (0..m as u32).collect();
        let one = index[&identity[..]];
        let mut add = Vec::with_capacity(k * k);
        let mut compose = Vec::with_capacity(k * k);
        for t in &maps {
            for u in &maps {
                let sum: Vec<u32> = (0..m)
                    .map(|w| g.add(t[w] as usize, u[w] as usize) as u32)
                    .collect();
                let tu: Vec<u32> = (0..m).map(|w| t[u[w] as usize]).collect();
                add.push(index[&sum[..]] as u32);
                compose.push(index[&tu[..]] as u32);
            }
        }
        let mut op = vec![0u32; k * k];
        for i in 0..k {
            for j in 0..k {
                op[i * k + j] = compose[j * k + i];
            }
        }
        let ring = ValidatedRing::from_tables_unchecked(RingTables {
            order: k,
            one,
            add: add.clone(),
            mul: compose,
        });
        let opposite = ValidatedRing::from_tables_unchecked(RingTables {
            order: k,
            one,
            add,
            mul: op,
        });
        Ok(EndRing {
            maps,
            ring,
            opposite,
        })
    }
}

/// All unital ring homomorphisms `src → dst`, lexicographic in the images of
/// the greedy additive generators of `src`.
fn unital_ring_homs(
    src: &ValidatedRing,
    dst: &ValidatedRing,
    budget: &mut Budget,
) -> Result<Vec<Vec<usize>>, BimoduleError> {
    let gens = FinAbGroup::additive_group_of(src).generators();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    hom_search(src, dst, &gens, &mut images, &mut out, budget)?;
    Ok(out)
}

fn hom_search(
    src: &ValidatedRing,
    dst: &ValidatedRing,
    gens: &[usize],
    images: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    budget: &mut Budget,
) -> Result<(), BimoduleError> {
    let depth = images.len();
    let Some(ext) = extend_additively(
        src.order(),
        |x, y| src.add(x, y),
        &gens[..depth],
        images,
        |x, y| dst.add(x, y),
    ) else {
        return Ok(());
    };
    if let Some(v) = ext[src.one()] {
        if v != dst.one() {
            return Ok(());
        }
    }
    let known: Vec<usize> = (0..src.order()).filter(|&x| ext[x].is_some()).collect();
    for &x in &known {
        for &y in &known {
            if let (Some(vx), Some(vy), Some(vxy)) = (ext[x], ext[y], ext[src.mul(x, y)]) {
                if dst.mul(vx, vy) != vxy {
                    return Ok(());
                }
            }
        }
    }
    if depth == gens.len() {
        out.push(
            ext.into_iter()
                .map(|v| v.expect("generators span"))
                .collect(),
        );
        return Ok(());
    }
    for img in 0..dst.order() {
        budget.spend(1)?;
        images.push(img);
        hom_search(src, dst, gens, images, out, budget)?;
        images.pop();
    }
    Ok(())
}

/// Every A–B-bimodule structure on `group`, each exactly once, in a fixed order.
///
/// Left actions are the outer loop, right actions the inner one. Exceeding the
/// node budget discards all output.
pub fn enumerate_bimodules(
    a: &Arc<ValidatedRing>,
    b: &Arc<ValidatedRing>,
    group: &FinAbGroup,
    budget: u64,
) -> Result<Vec<Bimodule>, BimoduleError> {
    let mut budget = Budget {
        limit: budget,
        used: 0,
    };
    let end = EndRing::new(group, &mut budget)?;
    let lefts = unital_ring_homs(a, &end.ring, &mut budget)?;
    let rights = unital_ring_homs(b, &end.opposite, &mut budget)?;
    let m = group.order();
    let mut out = Vec::new();
    for l in &lefts {
        for r in &rights {
            budget.spend(1)?;
            let commute = l.iter().all(|&lx| {
                r.iter()
                    .all(|&ry| end.ring.mul(lx, ry) == end.ring.mul(ry, lx))
            });
            if !commute {
                continue;
            }
            let laction = l
                .iter()
                .flat_map(|&t| end.maps[t].iter().copied())
                .collect();
            let mut raction = Vec::with_capacity(m * b.order());
            for w in 0..m {
                for &t in r {
                    raction.push(end.maps[t][w]);
                }
            }
            let index = out.len();
            let bm = Bimodule::from_parts_unchecked(
                a.clone(),
                b.clone(),
                group.clone(),
                laction,
                raction,
                format!("enumerated #{index}"),
            );
            debug_assert!(bm.check_axioms().is_ok());
            out.push(bm);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{cyclic_ring, ut2};
    use crate::group::GroupType;

    fn z(n: usize) -> Arc<ValidatedRing> {
        Arc::new(cyclic_ring(n))
    }

    fn k4() -> FinAbGroup {
        FinAbGroup::from_type(&"C2xC2".parse::<GroupType>().unwrap())
    }

    #[test]
    fn regular_z2_validates() {
        let bm = Bimodule::regular(z(2));
        let t = bm.clone();
        assert!(Bimodule::new(
            t.left.clone(),
            t.right.clone(),
            t.group.clone(),
            t.laction.clone(),
            t.raction.clone()
        )
        .is_ok());
        assert_eq!(Bimodule::regular(z(4)).group().order(), 4);
        assert_eq!(Bimodule::regular(z(3)).group().order(), 3);
    }

    #[test]
    fn identity_action_on_klein_group() {
        // 0 acts as zero, 1 as the identity.
        let laction = vec![0, 0, 0, 0, 0, 1, 2, 3];
        let raction = vec![0, 0, 0, 1, 0, 2, 0, 3];
        assert!(Bimodule::new(z(2), z(2), k4(), laction, raction).is_ok());
    }

    /// Brute force: every unital left table of Z2 on C4 fails validation.
    #[test]
    fn z2_cannot_act_on_c4() {
        let c4 = FinAbGroup::cyclic(4);
        let id_right = vec![0, 0, 0, 1, 0, 2, 0, 3];
        let mut accepted = 0;
        for code in 0..4usize.pow(4) {
            let row1: Vec<u32> = (0..4).map(|i| ((code >> (2 * i)) & 3) as u32).collect();
            let mut laction = vec![0, 0, 0, 0];
            laction.extend(&row1);
            if Bimodule::new(z(2), z(2), c4.clone(), laction, id_right.clone()).is_ok() {
                accepted += 1;
            }
        }
        assert_eq!(accepted, 0);
        assert!(enumerate_bimodules(&z(2), &z(2), &c4, DEFAULT_BUDGET)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn hom_induced_via_corner_projection() {
        let t = ut2(&z(2));
        let b = Arc::new(t.flattened().clone());
        let bottom: Vec<usize> = (0..8).map(|i| t.decode(i).2).collect();
        let bm = Bimodule::hom_induced(z(2), b.clone(), &cyclic_ring(2), &[0, 1], &bottom).unwrap();
        assert_eq!(bm.group().order(), 2);
        let middle: Vec<usize> = (0..8).map(|i| t.decode(i).1).collect();
        assert!(matches!(
            Bimodule::hom_induced(z(2), b, &cyclic_ring(2), &[0, 1], &middle),
            Err(BimoduleError::NotARingHom {
                which: Side::Right,
                ..
            })
        ));
        let id = Bimodule::hom_induced(z(2), z(2), &cyclic_ring(2), &[0, 1], &[0, 1]).unwrap();
        assert_eq!(id, Bimodule::regular(z(2)));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(
            enumerate_bimodules(&z(2), &z(2), &FinAbGroup::cyclic(2), DEFAULT_BUDGET)
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            enumerate_bimodules(&z(2), &z(2), &k4(), DEFAULT_BUDGET)
                .unwrap()
                .len(),
            1
        );
        let u = Arc::new(ut2(&z(2)).flattened().clone());
        let found = enumerate_bimodules(&u, &z(2), &FinAbGroup::cyclic(2), DEFAULT_BUDGET).unwrap();
        assert_eq!(found.len(), 2);
        // The two structures are the corner projections.
        let t = ut2(&z(2));
        let mut corners: Vec<Vec<usize>> = vec![
            (0..8).map(|i| t.decode(i).0).collect(),
            (0..8).map(|i| t.decode(i).2).collect(),
        ];
        corners.sort();
        let mut got: Vec<Vec<usize>> = found
            .iter()
            .map(|bm| (0..8).map(|x| bm.lact(x, 1)).collect())
            .collect();
        got.sort();
        assert_eq!(got, corners);
    }

    #[test]
    fn enumeration_contains_regular() {
        for n in 2..=4 {
            let found =
                enumerate_bimodules(&z(n), &z(n), &FinAbGroup::cyclic(n), DEFAULT_BUDGET).unwrap();
            assert!(found.contains(&Bimodule::regular(z(n))));
        }
    }

    #[test]
    fn zero_ring_admits_no_nontrivial_module() {
        for g in [FinAbGroup::cyclic(2), k4()] {
            assert!(enumerate_bimodules(&z(1), &z(2), &g, DEFAULT_BUDGET)
                .unwrap()
                .is_empty());
        }
        assert_eq!(
            enumerate_bimodules(&z(1), &z(1), &FinAbGroup::cyclic(1), DEFAULT_BUDGET)
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let u = Arc::new(ut2(&z(2)).flattened().clone());
        assert!(matches!(
            enumerate_bimodules(&u, &u, &k4(), 50),
            Err(BimoduleError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn module_condition_examples() {
        let laction = vec![0, 0, 0, 0, 0, 1, 2, 3];
        let raction = vec![0, 0, 0, 1, 0, 2, 0, 3];
        let bm = Bimodule::new(z(2), z(2), k4(), laction, raction).unwrap();
        assert_eq!(bm.module_condition(1, 1), Ok(false));
        assert_eq!(bm.module_condition(1, 0), Ok(true));
        assert_eq!(bm.module_condition_by_subgroup(1, 0), Ok(true));
        assert_eq!(bm.fixed_set(1, 1).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(bm.fixed_set(1, 0).unwrap(), vec![0]);
        let z3 = Bimodule::regular(z(3));
        assert!(matches!(
            z3.module_condition(2, 1),
            Err(BimoduleError::NotIdempotent {
                side: Side::Left,
                element: 2
            })
        ));
    }

    #[test]
    fn axiom_violation_names_the_family() {
        let mut bm = Bimodule::regular(z(2));
        bm.laction[3] = 0;
        let err = Bimodule::new(bm.left, bm.right, bm.group, bm.laction, bm.raction).unwrap_err();
        assert!(matches!(err, BimoduleError::AxiomViolation { .. }));
    }
}
