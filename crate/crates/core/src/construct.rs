//! Concrete rings: `Z/nZ`, direct products, and formal triangular matrix rings.

use std::sync::Arc;

use thiserror::Error;

use crate::bimodule::Bimodule;
use crate::ring::{RingError, RingTables, ValidatedRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("bimodule rings do not match the diagonal rings")]
    MismatchedBimodule,
    #[error("flattened ring failed validation: {0}")]
    Ring(#[from] RingError),
}

/// `Z/nZ`; for `n = 1` the zero ring with `one = 0`.
pub fn cyclic_ring(n: usize) -> ValidatedRing {
    assert!(n >= 1, "Z/nZ needs n >= 1");
    let tables = RingTables::from_fns(n, 1 % n, |a, b| (a + b) % n, |a, b| a * b % n);
    ValidatedRing::from_tables_unchecked(tables)
}

/// Componentwise product; element `(x, y)` has index `x·|r2| + y`.
pub fn direct_product(r1: &ValidatedRing, r2: &ValidatedRing) -> ValidatedRing {
    let m = r2.order();
    let tables = RingTables::from_fns(
        r1.order() * m,
        r1.one() * m + r2.one(),
        |x, y| r1.add(x / m, y / m) * m + r2.add(x % m, y % m),
        |x, y| r1.mul(x / m, y / m) * m + r2.mul(x % m, y % m),
    );
    ValidatedRing::from_tables_unchecked(tables)
}

/// The ring of matrices `[[a, w], [0, b]]` over an A–B-bimodule, flattened to
/// index form. Element `(a, w, b)` has index `(a·|M| + w)·|B| + b`.
#[derive(Debug, Clone)]
pub struct TriangularSpec {
    a_ring: Arc<ValidatedRing>,
    bimodule: Bimodule,
    b_ring: Arc<ValidatedRing>,
    flattened: ValidatedRing,
}

fn same_ring(x: &Arc<ValidatedRing>, y: &Arc<ValidatedRing>) -> bool {
    Arc::ptr_eq(x, y) || x == y
}

/// Builds the triangular ring and validates the flattened tables.
pub fn triangular(
    a: &Arc<ValidatedRing>,
    bimodule: &Bimodule,
    b: &Arc<ValidatedRing>,
) -> Result<TriangularSpec, ConstructionError> {
    let spec = triangular_unchecked(a, bimodule, b)?;
    ValidatedRing::new(spec.flattened.tables().clone())?;
    Ok(spec)
}

/// As [`triangular`] without the O(n³) validation of the flattened tables.
pub fn triangular_unchecked(
    a: &Arc<ValidatedRing>,
    bimodule: &Bimodule,
    b: &Arc<ValidatedRing>,
) -> Result<TriangularSpec, ConstructionError> {
    if !same_ring(a, bimodule.left_ring()) || !same_ring(b, bimodule.right_ring()) {
        return Err(ConstructionError::MismatchedBimodule);
    }
    let flattened = ValidatedRing::from_tables_unchecked(flatten(a, bimodule, b));
    Ok(TriangularSpec {
        a_ring: a.clone(),
        bimodule: bimodule.clone(),
        b_ring: b.clone(),
        flattened,
    })
}

pub(crate) fn flatten(a: &ValidatedRing, bm: &Bimodule, b: &ValidatedRing) -> RingTables {
    let g = bm.group();
    let (m, nb) = (g.order(), b.order());
    let decode = |x: usize| (x / (m * nb), (x / nb) % m, x % nb);
    let encode = |(x, w, y): (usize, usize, usize)| (x * m + w) * nb + y;
    let one = encode((a.one(), 0, b.one()));
    RingTables::from_fns(
        a.order() * m * nb,
        one,
        |p, q| {
            let (x, w, y) = decode(p);
            let (x2, w2, y2) = decode(q);
            encode((a.add(x, x2), g.add(w, w2), b.add(y, y2)))
        },
        |p, q| {
            let (x, w, y) = decode(p);
            let (x2, w2, y2) = decode(q);
            encode((
                a.mul(x, x2),
                g.add(bm.lact(x, w2), bm.ract(w, y2)),
                b.mul(y, y2),
            ))
        },
    )
}

/// `UT2(r)`: the triangular ring over the regular r–r-bimodule.
pub fn ut2(r: &Arc<ValidatedRing>) -> TriangularSpec {
    let bm = Bimodule::regular(r.clone());
    triangular(r, &bm, r).expect("UT2 of a valid ring is a valid ring")
}

impl TriangularSpec {
    pub fn a_ring(&self) -> &Arc<ValidatedRing> {
        &self.a_ring
    }

    pub fn b_ring(&self) -> &Arc<ValidatedRing> {
        &self.b_ring
    }

    pub fn bimodule(&self) -> &Bimodule {
        &self.bimodule
    }

    pub fn flattened(&self) -> &ValidatedRing {
        &self.flattened
    }

    pub fn module_order(&self) -> usize {
        self.bimodule.group().order()
    }

    /// `(|A|, |M|, |B|)`
    pub fn shape(&self) -> (usize, usize, usize) {
        (
            self.a_ring.order(),
            self.module_order(),
            self.b_ring.order(),
        )
    }

    pub fn encode(&self, a: usize, w: usize, b: usize) -> usize {
        let (_, m, nb) = self.shape();
        (a * m + w) * nb + b
    }

    pub fn decode(&self, flat: usize) -> (usize, usize, usize) {
        let (_, m, nb) = self.shape();
        (flat / (m * nb), (flat / nb) % m, flat % nb)
    }

    /// Runs the full axiom scan on the flattened tables.
    pub fn validate(&self) -> Result<(), RingError> {
        ValidatedRing::new(self.flattened.tables().clone()).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::enumerate_bimodules;
    use crate::group::{FinAbGroup, GroupType};

    fn z(n: usize) -> Arc<ValidatedRing> {
        Arc::new(cyclic_ring(n))
    }

    #[test]
    fn cyclic_rings_validate() {
        for n in 1..=6 {
            assert!(ValidatedRing::new(cyclic_ring(n).tables().clone()).is_ok());
        }
        assert_eq!(cyclic_ring(1).one(), 0);
    }

    #[test]
    fn products() {
        let k = direct_product(&cyclic_ring(2), &cyclic_ring(2));
        assert!(ValidatedRing::new(k.tables().clone()).is_ok());
        assert_eq!(k.order(), 4);
        assert_eq!(k.idempotents().len(), 4);
        assert_eq!(k.nil_clean_index().nin, 1);
        let u = ut2(&z(2)).flattened().clone();
        let p = direct_product(&cyclic_ring(1), &u);
        assert_eq!(p.tables(), u.tables());
    }

    #[test]
    fn ut2_z2() {
        let t = ut2(&z(2));
        assert_eq!(t.flattened().order(), 8);
        let r = t.flattened();
        assert_eq!(r.idempotents().len(), 6);
        assert_eq!(r.nilpotents(), vec![t.encode(0, 0, 0), t.encode(0, 1, 0)]);
        let units = r.units();
        assert_eq!(units, vec![t.encode(1, 0, 1), t.encode(1, 1, 1)]);
        assert_eq!(r.nil_clean_index().nin, 2);
        assert_eq!(t.encode(1, 0, 0), 4);
    }

    #[test]
    fn ut2_z3_has_index_three() {
        let t = ut2(&z(3));
        assert_eq!(t.flattened().order(), 27);
        assert_eq!(t.flattened().nil_clean_index().nin, 3);
    }

    #[test]
    fn triangular_examples() {
        let t = triangular(&z(4), &Bimodule::regular(z(4)), &z(4)).unwrap();
        assert_eq!(t.flattened().order(), 64);
        let k4 = FinAbGroup::from_type(&"C2xC2".parse::<GroupType>().unwrap());
        let bms = enumerate_bimodules(&z(2), &z(2), &k4, 1000).unwrap();
        let t = triangular(&z(2), &bms[0], &z(2)).unwrap();
        assert_eq!(t.flattened().order(), 16);
    }

    #[test]
    fn mismatched_bimodule() {
        let bm = Bimodule::regular(z(2));
        assert_eq!(
            triangular(&z(3), &bm, &z(2)).unwrap_err(),
            ConstructionError::MismatchedBimodule
        );
    }

    #[test]
    fn codec() {
        let t = triangular(&z(2), &Bimodule::regular(z(2)), &z(2)).unwrap();
        assert_eq!(t.encode(0, 0, 0), 0);
        assert_eq!(t.encode(1, 0, 1), t.flattened().one());
        for i in 0..8 {
            let (a, w, b) = t.decode(i);
            assert_eq!(t.encode(a, w, b), i);
        }
    }
}
