//! Benchmark fixtures for the cbf measures.

use cbf_core::{consonant_from_normal, ConsonantBbd};

/// The four normal densities of the pairwise tables.
pub fn table_one() -> [ConsonantBbd; 4] {
    [(0.0, 1.0), (0.0, 0.5), (4.0, 1.0), (4.0, 0.5)]
        .map(|(m, s)| consonant_from_normal(m, s).unwrap())
}
