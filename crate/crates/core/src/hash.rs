//! Canonical content hashes for ring tables.
//!
//! The hash is the first 8 bytes of SHA-256 over
//! `order (u64 LE) ‖ one (u64 LE) ‖ add entries (u32 LE, row-major) ‖ mul entries (u32 LE, row-major)`,
//! rendered as 16 lowercase hex digits.

use sha2::{Digest, Sha256};

use crate::bimodule::Bimodule;
use crate::ring::{RingTables, ValidatedRing};

pub fn canonical_hash(r: &ValidatedRing) -> String {
    tables_hash(r.tables())
}

pub fn tables_hash(t: &RingTables) -> String {
    let mut h = Sha256::new();
    h.update((t.order as u64).to_le_bytes());
    h.update((t.one as u64).to_le_bytes());
    for &v in t.add.iter().chain(&t.mul) {
        h.update(v.to_le_bytes());
    }
    truncate(h)
}

/// Hash of a bimodule's group and action tables (rings hashed separately).
pub fn bimodule_hash(bm: &Bimodule) -> String {
    let mut h = Sha256::new();
    h.update(canonical_hash(bm.left_ring()).as_bytes());
    h.update(canonical_hash(bm.right_ring()).as_bytes());
    h.update((bm.group().order() as u64).to_le_bytes());
    for &v in bm
        .group()
        .table()
        .iter()
        .chain(bm.laction_table())
        .chain(bm.raction_table())
    {
        h.update(v.to_le_bytes());
    }
    truncate(h)
}

/// Hash of arbitrary labelled parts, for composite cache keys.
pub fn hash_parts(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    truncate(h)
}

fn truncate(h: Sha256) -> String {
    let digest = h.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::cyclic_ring;

    #[test]
    fn distinct_rings_hash_differently() {
        let h2 = canonical_hash(&cyclic_ring(2));
        assert_eq!(h2.len(), 16);
        assert_ne!(h2, canonical_hash(&cyclic_ring(3)));
        assert_eq!(h2, canonical_hash(&cyclic_ring(2)));
    }

    #[test]
    fn hash_is_pinned() {
        // Frozen value: guards against accidental changes to the byte layout.
        assert_eq!(canonical_hash(&cyclic_ring(2)), Z2_HASH);
    }

    const Z2_HASH: &str = "7c4ebb20efb1f374";
}
