//! Benchmark-only crate; see `benches/gatedec.rs`.
//!
//! Shared helpers for the benchmark targets live here so the bench file
//! stays focused on the timing loops.

use gatedec::{haar_random_unitary, UnitaryMatrix};

/// Fixed-seed Haar matrix used as a benchmark workload.
pub fn workload(n: usize) -> UnitaryMatrix {
    haar_random_unitary(n, 0xBEEF).expect("benchmark qubit counts are in range")
}
