//! Decomposition of n-qubit unitary gates into controlled single-qubit gates.
//!
//! An n-qubit gate is a unitary `U` in `M_N` with `N = 2^n`. A fixed
//! recurrence schedule reduces `U` to the identity with at most `N(N-1)/2`
//! left-multiplications by controlled single-qubit gates, so `U` factors as
//! the product of the daggered gates. The schedule itself is pure
//! combinatorics and is generated symbolically; a numeric driver walks it
//! against a concrete matrix and certifies `U_r ... U_1 U = I`. An exact
//! integer engine provides the number of k-controlled gates the scheme
//! spends, region breakdowns, and the comparison series against a Gray-code
//! based alternative.
//!
//! - [`linalg`]: dense complex matrices, unitarity checks, the 2x2
//!   elimination primitive, Haar-random test matrices.
//! - [`gates`]: control words such as `10V*` and their dense and in-place
//!   matrix semantics.
//! - [`scheme`]: which entry to annihilate when, and with which word.
//! - [`decompose`]: the numeric driver, reconstruction, verification.
//! - [`counting`]: exact count recursions, closed forms and the comparison
//!   series.

pub mod counting;
pub mod decompose;
mod error;
pub mod gates;
pub mod linalg;
pub mod scheme;

pub use counting::{
    b1_closed_form, binomial, compare_series, count_breakdown, count_gray, count_scheme,
    count_scheme_from_schedule, total_controls, weighted_total, BreakdownRow, ComparisonRow,
    CountBreakdown, CountVector,
};
pub use decompose::{
    decompose, reconstruct, verify, DecomposeOptions, DecomposedGate, Decomposition, VerifyReport,
};
pub use error::{Error, Result};
pub use gates::{
    apply_gate_left, expand_gate, matched_row_pairs, ControlledGate, GatePattern, GateSymbol,
    RowPair, MAX_QUBITS,
};
pub use linalg::{
    check_unitary, givens_for_pair, haar_random_unitary, Complex64, ComplexMatrix,
    TwoByTwoUnitary, UnitarityCheck, UnitaryMatrix, ZeroSlot, INPUT_UNITARY_TOL,
    INTERNAL_UNITARY_TOL,
};
pub use scheme::{
    adapt_gate, column1_lower_order, final_gate, generate_schedule, lift_gate, xor_index,
    Schedule, ScheduleEntry,
};
