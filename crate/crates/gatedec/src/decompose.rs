//! Numeric driver: walks the symbolic schedule against a concrete unitary.
//!
//! Each schedule entry annihilates one work-matrix entry with a 2x2
//! rotation on its pivot pair; each column's final gate consumes the
//! diagonal pivot. Since the surviving component of every rotation is
//! real-positive and a finished column carries its whole norm on the pivot
//! pair, the diagonal is driven to 1 column by column and the accumulated
//! product `U_r ... U_1 U` lands on the identity, so `U` factors as
//! `U_1\u{2020} ... U_r\u{2020}`.

use crate::error::{Error, Result};
use crate::gates::{apply_gate_left, ControlledGate, GatePattern};
use crate::linalg::{
    givens_for_pair, ComplexMatrix, TwoByTwoUnitary, UnitaryMatrix, ZeroSlot, INPUT_UNITARY_TOL,
};
use crate::scheme::generate_schedule;

/// Knobs for [`decompose`].
#[derive(Debug, Clone, Copy)]
pub struct DecomposeOptions {
    /// Entries at or below this magnitude are treated as already zero and
    /// their slot is skipped (final gates are skipped only when their block
    /// degenerates to the identity).
    pub skip_tol: f64,
    /// Emit an explicit identity gate for every skipped slot so the gate
    /// list always has length N(N-1)/2.
    pub keep_identity_gates: bool,
    /// Largest acceptable max-abs deviation of the finished work matrix
    /// from the identity.
    pub residual_tol: f64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            skip_tol: 1e-14,
            keep_identity_gates: false,
            residual_tol: 1e-10,
        }
    }
}

/// One emitted gate, tagged with the schedule slot that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedGate {
    /// 1-based ordinal of the slot in the full schedule.
    pub step: u32,
    pub row: u32,
    pub col: u32,
    pub gate: ControlledGate,
}

/// Result of eliminating a unitary: the gates `U_1, ..., U_r` in
/// application order, plus bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    n: usize,
    pub gates: Vec<DecomposedGate>,
    /// Schedule slots whose target entry was already below tolerance.
    pub skipped: usize,
    /// Max-abs deviation of `U_r ... U_1 U` from the identity.
    pub residual: f64,
}

impl Decomposition {
    /// Reassembles a decomposition, e.g. from a record file. The slot
    /// balance `gates + skipped = N(N-1)/2` and the word lengths must hold.
    pub fn from_parts(
        n: usize,
        gates: Vec<DecomposedGate>,
        skipped: usize,
        residual: f64,
    ) -> Result<Self> {
        crate::linalg::check_qubits(n)?;
        let dim = 1usize << n;
        let slots = dim * (dim - 1) / 2;
        if gates.len() + skipped != slots {
            return Err(Error::DimensionMismatch {
                left: gates.len() + skipped,
                right: slots,
            });
        }
        for g in &gates {
            if g.gate.pattern.qubits() != n {
                return Err(Error::DimensionMismatch {
                    left: g.gate.pattern.qubits(),
                    right: n,
                });
            }
        }
        Ok(Decomposition {
            n,
            gates,
            skipped,
            residual,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Total schedule slots, `N(N-1)/2`.
    pub fn total_slots(&self) -> usize {
        self.gates.len() + self.skipped
    }

    /// Sum of control counts over the emitted gates.
    pub fn total_controls(&self) -> usize {
        self.gates
            .iter()
            .map(|g| g.gate.pattern.control_count())
            .sum()
    }
}

/// Report from re-running a decomposition against its source matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    /// Max-abs deviation of `U_r ... U_1 U` from the identity.
    pub deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Pivot pair of a schedule entry, 0-based, with the slot the rotation
/// must zero.
fn pair_of(row: usize, pattern: &GatePattern) -> (usize, usize, ZeroSlot) {
    let stride = 1usize << (pattern.target_position() - 1);
    let r = row - 1;
    if r & stride == 0 {
        (r, r ^ stride, ZeroSlot::First)
    } else {
        (r ^ stride, r, ZeroSlot::Second)
    }
}

/// Unitary completion of the daggered 2x2 work submatrix on a pivot pair.
///
/// The first row is forced by the pair's column values (their joint norm is
/// the whole column, i.e. 1), so the new diagonal entry is real-positive
/// and equal to that norm. The second row is seeded from the pair's other
/// column: when the trailing 2x2 block is all that is left of the matrix
/// this reproduces its exact inverse and absorbs the residual phase, which
/// is what makes the very last gate finish on the identity instead of a
/// diagonal phase matrix.
fn final_block(work: &ComplexMatrix, lo: usize, hi: usize, col: usize) -> Result<TwoByTwoUnitary> {
    let a = work[(lo, lo)];
    let b = work[(hi, lo)];
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r < 1e-8 {
        return Err(Error::DegeneratePivot { col: col + 1, norm: r });
    }
    let row1 = (a.conj() / r, b.conj() / r);
    let seed = (work[(lo, hi)].conj(), work[(hi, hi)].conj());
    let inner = seed.0 * row1.0.conj() + seed.1 * row1.1.conj();
    let mut row2 = (seed.0 - inner * row1.0, seed.1 - inner * row1.1);
    let norm2 = (row2.0.norm_sqr() + row2.1.norm_sqr()).sqrt();
    if norm2 < 1e-8 {
        // Degenerate seed; any unit vector orthogonal to row1 works here
        // because a phase only matters for the trailing block, whose seed
        // is never degenerate.
        row2 = (-b / r, a / r);
    } else {
        // second orthogonalization pass so a small norm2 cannot cost digits
        let inner2 = row2.0 * row1.0.conj() + row2.1 * row1.1.conj();
        row2 = (row2.0 - inner2 * row1.0, row2.1 - inner2 * row1.1);
        let norm2 = (row2.0.norm_sqr() + row2.1.norm_sqr()).sqrt();
        row2 = (row2.0 / norm2, row2.1 / norm2);
    }
    TwoByTwoUnitary::new([[row1.0, row1.1], [row2.0, row2.1]])
}

/// Eliminates `u` along the schedule, certifying `U_r ... U_1 U = I`.
pub fn decompose(u: &UnitaryMatrix, opts: &DecomposeOptions) -> Result<Decomposition> {
    let n = u.qubits();
    let schedule = generate_schedule(n)?;
    let mut work = u.matrix().clone();
    let mut gates = Vec::new();
    let mut skipped = 0usize;
    let mut step = 0u32;

    for (col, entries) in schedule.columns() {
        let col0 = col - 1;
        let last = entries.len() - 1;
        for (k, entry) in entries.iter().enumerate() {
            step += 1;
            let (lo, hi, slot) = pair_of(entry.row as usize, &entry.pattern);
            let v = if k < last {
                let target = work[(entry.row as usize - 1, col0)];
                if target.norm() <= opts.skip_tol {
                    if opts.keep_identity_gates {
                        Some(TwoByTwoUnitary::identity())
                    } else {
                        None
                    }
                } else {
                    let v = givens_for_pair(work[(lo, col0)], work[(hi, col0)], slot)?;
                    apply_gate_left(
                        &ControlledGate::new(entry.pattern.clone(), v),
                        &mut work,
                    );
                    Some(v)
                }
            } else {
                debug_assert_eq!(lo, col0, "final gate must pivot on the diagonal");
                let v = final_block(&work, lo, hi, col0)?;
                if !opts.keep_identity_gates && v.deviation_from_identity() <= opts.skip_tol {
                    None
                } else {
                    apply_gate_left(
                        &ControlledGate::new(entry.pattern.clone(), v),
                        &mut work,
                    );
                    Some(v)
                }
            };
            match v {
                Some(v) => gates.push(DecomposedGate {
                    step,
                    row: entry.row,
                    col: entry.col,
                    gate: ControlledGate::new(entry.pattern.clone(), v),
                }),
                None => skipped += 1,
            }
        }
    }

    let residual = work.deviation_from_identity();
    if residual > opts.residual_tol {
        return Err(Error::ResidualTooLarge {
            residual,
            tol: opts.residual_tol,
        });
    }
    Ok(Decomposition {
        n,
        gates,
        skipped,
        residual,
    })
}

/// Rebuilds the original unitary as `U_1\u{2020} ... U_r\u{2020}`,
/// applying the daggered gates to the identity.
pub fn reconstruct(d: &Decomposition) -> Result<UnitaryMatrix> {
    let mut m = ComplexMatrix::identity(d.dim());
    for g in d.gates.iter().rev() {
        apply_gate_left(&g.gate.dagger(), &mut m);
    }
    UnitaryMatrix::new(m, INPUT_UNITARY_TOL)
}

/// Re-applies `U_1, ..., U_r` to `u` and reports how far the product is
/// from the identity.
pub fn verify(d: &Decomposition, u: &UnitaryMatrix, tol: f64) -> Result<VerifyReport> {
    if d.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            left: d.dim(),
            right: u.dim(),
        });
    }
    let mut work = u.matrix().clone();
    for g in &d.gates {
        apply_gate_left(&g.gate, &mut work);
    }
    let deviation = work.deviation_from_identity();
    Ok(VerifyReport {
        deviation,
        tol,
        passed: deviation <= tol,
    })
}
