//! Exact nil clean index computations over finite rings.
//!
//! Rings are finite Cayley tables over element indices `0..n` with index 0 the
//! additive identity. Everything here is decided by exhaustive enumeration:
//! idempotents, nilpotents, the sets η(a) = {e idempotent : a − e nilpotent},
//! and the nil clean index `Nin(R) = max |η(a)|`.
//!
//! On top of that sit formal triangular matrix rings `[[A, M], [0, B]]`,
//! bimodule enumeration, and a harness that checks the known results on the
//! nil clean index of triangular rings against brute force.

pub mod bimodule;
pub mod cache;
pub mod construct;
pub mod dsl;
pub mod group;
pub mod hash;
pub mod io;
pub mod ring;
pub mod theorems;

pub use bimodule::{enumerate_bimodules, Bimodule, BimoduleError, DEFAULT_BUDGET};
pub use construct::{
    cyclic_ring, direct_product, triangular, ut2, ConstructionError, TriangularSpec,
};
pub use group::{FinAbGroup, GroupError, GroupType};
pub use hash::canonical_hash;
pub use ring::{EtaSet, IndexReport, RingError, RingTables, ValidatedRing};

/// Version string baked into cache keys.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
