//! Symbolic elimination schedule.
//!
//! For an n-qubit unitary the scheme annihilates every strictly-lower
//! off-diagonal entry exactly once, column by column, using controlled
//! single-qubit gates. Everything here is pure combinatorics on 1-based
//! indices and control words; the numbers only enter in
//! [`crate::decompose`].
//!
//! The recurrence: a column `l <= N/2` first clears its upper half with the
//! (n-1)-qubit schedule for the same column, `*`-prefixed. Its lower half
//! reuses the (n-1)-qubit column-1 gates, lifted to n qubits ([`lift_gate`])
//! and, for `l >= 2`, rewritten against the binary label of the column
//! ([`adapt_gate`]); the rows are the column-1 lower rows XORed with the
//! column label. Each column ends with a leftmost-target gate built from the
//! column label ([`final_gate`]), which consumes the diagonal pivot. Columns
//! past `N/2` are the (n-1)-qubit schedule shifted into the lower-right
//! block with a `1` prefix.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::gates::{GatePattern, GateSymbol, MAX_QUBITS};
use crate::linalg::check_qubits;

/// One elimination step: zero the (`row`, `col`) entry with `pattern`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub row: u32,
    pub col: u32,
    pub pattern: GatePattern,
}

impl ScheduleEntry {
    fn new(row: usize, col: usize, pattern: GatePattern) -> Self {
        ScheduleEntry {
            row: row as u32,
            col: col as u32,
            pattern,
        }
    }

    /// 1-based row of the pivot supplying the nonzero used to annihilate
    /// `row`: the target bit of the row label, flipped.
    pub fn pivot_row(&self) -> usize {
        let t = self.pattern.target_position();
        ((self.row as usize - 1) ^ (1 << (t - 1))) + 1
    }
}

/// The full elimination order for `n` qubits, grouped by column `1..N-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    n: usize,
    entries: Vec<ScheduleEntry>,
}

impl Schedule {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All entries in execution order; the 1-based step ordinal of
    /// `entries()[i]` is `i + 1`.
    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    fn column_start(&self, col: usize) -> usize {
        // column j holds N - j entries, so col starts after sum_{j<col} (N - j)
        let n = self.dim();
        (col - 1) * n - (col - 1) * col / 2
    }

    /// Entries of one column, in execution order. Columns run `1..=N-1`.
    pub fn column(&self, col: usize) -> &[ScheduleEntry] {
        assert!(col >= 1 && col < self.dim(), "column {col} out of range");
        let start = self.column_start(col);
        &self.entries[start..start + (self.dim() - col)]
    }

    /// Iterates `(column, entries-of-column)` pairs in execution order.
    pub fn columns(&self) -> impl Iterator<Item = (usize, &[ScheduleEntry])> {
        (1..self.dim()).map(|col| (col, self.column(col)))
    }
}

/// XOR of two 1-based indices through their binary labels.
///
/// Index `k` carries the label of `k - 1`, so `xor_index(6, 2) = 5` on three
/// qubits: `101 ^ 001 = 100`.
pub fn xor_index(a: usize, l: usize) -> usize {
    ((a - 1) ^ (l - 1)) + 1
}

/// Bit `j` (1-based, least significant first) of the label of index `k`.
fn index_bit(k: usize, j: usize) -> bool {
    (k - 1) >> (j - 1) & 1 == 1
}

/// Lifts an (n-1)-qubit column-1 gate to n qubits.
///
/// The new leftmost position is `1` when the word has no 1-control yet and
/// `*` otherwise, so every lifted word keeps at least one 1-control above
/// the rows already cleared.
pub fn lift_gate(c: &GatePattern) -> Result<GatePattern> {
    if c.symbols().contains(&GateSymbol::Zero) {
        return Err(Error::bad_pattern(c, "column-1 gates never carry a 0-control"));
    }
    let has_one = c.symbols().contains(&GateSymbol::One);
    c.prefixed(if has_one { GateSymbol::Free } else { GateSymbol::One })
}

fn block_exponent(l: usize) -> usize {
    // m with 2^(m-1) < l <= 2^m
    usize::BITS as usize - (l - 1).leading_zeros() as usize
}

/// Rewrites a lifted column-1 gate for column `l`, `2 <= l <= 2^(n-1)`.
///
/// With `m` such that `2^(m-1) < l <= 2^m`: the leftmost position becomes
/// `1` if no 1-control sits in positions `n..m+1`, and every 1-control at a
/// position where the column label has a 1 becomes a 0-control. The first
/// rule keeps the gate off the rows already reduced to identity; the second
/// re-aims it at the XOR-permuted elimination order.
pub fn adapt_gate(c: &GatePattern, l: usize) -> Result<GatePattern> {
    let n = c.qubits();
    let max = 1usize << (n - 1);
    if !(2..=max).contains(&l) {
        return Err(Error::ColumnOutOfRange {
            col: l,
            min: 2,
            max,
            n,
        });
    }
    let m = block_exponent(l);
    let mut out = c.clone();
    if (m + 1..=n).all(|j| c.symbol(j) != GateSymbol::One) {
        out = out.with_symbol(n, GateSymbol::One);
    }
    for j in 1..=m {
        if c.symbol(j) == GateSymbol::One && index_bit(l, j) {
            out = out.with_symbol(j, GateSymbol::Zero);
        }
    }
    Ok(out)
}

/// The gate closing column `l`: target leftmost, controls read off the
/// binary label of `l` with zeros relaxed to `*`.
pub fn final_gate(l: usize, n: usize) -> Result<GatePattern> {
    check_qubits(n)?;
    let max = 1usize << (n - 1);
    if !(1..=max).contains(&l) {
        return Err(Error::ColumnOutOfRange { col: l, min: 1, max, n });
    }
    let mut symbols = vec![GateSymbol::Target];
    for j in (1..n).rev() {
        symbols.push(if index_bit(l, j) {
            GateSymbol::One
        } else {
            GateSymbol::Free
        });
    }
    GatePattern::from_symbols(symbols)
}

/// The order `(d_1, ..., d_{N/2})` in which the lower half of column 1 is
/// eliminated: the (n-1)-qubit column-1 rows shifted into the lower half,
/// then `N/2 + 1` last.
pub fn column1_lower_order(n: usize) -> Result<Vec<usize>> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCountOutOfRange { n, min: 2, max: MAX_QUBITS });
    }
    let half = 1usize << (n - 1);
    let schedule = generate_schedule(n)?;
    Ok(schedule.column(1)[half - 1..]
        .iter()
        .map(|e| e.row as usize)
        .collect())
}

fn build_base() -> Schedule {
    Schedule {
        n: 1,
        entries: vec![ScheduleEntry::new(
            2,
            1,
            GatePattern::parse("V").expect("base pattern"),
        )],
    }
}

fn build_from(prev: &Schedule) -> Schedule {
    let n = prev.n + 1;
    let half = 1usize << (n - 1);
    let dim = 1usize << n;
    let mut entries = Vec::with_capacity(half * (dim - 1));

    // Column-1 gates of the (n-1)-qubit case, lifted; their rows shifted
    // into the lower half give the elimination order d_1 .. d_{N/2 - 1}.
    let prev_col1 = prev.column(1);
    let lifted: Vec<GatePattern> = prev_col1
        .iter()
        .map(|e| lift_gate(&e.pattern).expect("column-1 gates carry no 0-control"))
        .collect();
    let lower_rows: Vec<usize> = prev_col1.iter().map(|e| e.row as usize + half).collect();

    for l in 1..=half {
        // upper half: the (n-1)-qubit schedule for the same column, *-prefixed
        if l < half {
            for e in prev.column(l) {
                entries.push(ScheduleEntry::new(
                    e.row as usize,
                    l,
                    e.pattern.prefixed(GateSymbol::Free).expect("within MAX_QUBITS"),
                ));
            }
        }
        // lower half: column-1 rows XORed with the column label
        for (d, g) in lower_rows.iter().zip(&lifted) {
            let pattern = if l == 1 {
                g.clone()
            } else {
                adapt_gate(g, l).expect("column index in range")
            };
            entries.push(ScheduleEntry::new(xor_index(*d, l), l, pattern));
        }
        entries.push(ScheduleEntry::new(
            half + l,
            l,
            final_gate(l, n).expect("column index in range"),
        ));
    }

    // lower-right block: the (n-1)-qubit schedule shifted, 1-prefixed
    for (col, column) in prev.columns() {
        for e in column {
            entries.push(ScheduleEntry::new(
                e.row as usize + half,
                col + half,
                e.pattern.prefixed(GateSymbol::One).expect("within MAX_QUBITS"),
            ));
        }
    }

    Schedule { n, entries }
}

/// Builds a schedule without touching the shared cache. Prefer
/// [`generate_schedule`]; this exists for measuring construction cost.
pub fn generate_schedule_uncached(n: usize) -> Result<Schedule> {
    check_qubits(n)?;
    let mut s = build_base();
    for _ in 2..=n {
        s = build_from(&s);
    }
    Ok(s)
}

/// The full elimination schedule for `n` qubits, built once and shared.
///
/// The construction is recursive, so schedules for all smaller qubit counts
/// are built and cached along the way.
pub fn generate_schedule(n: usize) -> Result<Arc<Schedule>> {
    check_qubits(n)?;
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Schedule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut map = cache.lock().expect("schedule cache poisoned");
    if let Some(s) = map.get(&n) {
        return Ok(Arc::clone(s));
    }
    for m in 1..=n {
        if !map.contains_key(&m) {
            let schedule = if m == 1 {
                build_base()
            } else {
                build_from(&map[&(m - 1)])
            };
            map.insert(m, Arc::new(schedule));
        }
    }
    Ok(Arc::clone(&map[&n]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::matched_row_pairs;

    fn pat(s: &str) -> GatePattern {
        GatePattern::parse(s).unwrap()
    }

    fn entry_triples(entries: &[ScheduleEntry]) -> Vec<(u32, u32, String)> {
        entries
            .iter()
            .map(|e| (e.row, e.col, e.pattern.to_string()))
            .collect()
    }

    #[test]
    fn xor_index_matches_table_conversions() {
        // column 2 on three qubits: (6,8,7,5) -> (5,7,8,6)
        assert_eq!(xor_index(6, 2), 5);
        assert_eq!(xor_index(8, 2), 7);
        assert_eq!(xor_index(7, 2), 8);
        assert_eq!(xor_index(5, 2), 6);
        // column 3: 101 ^ 010 = 111
        assert_eq!(xor_index(6, 3), 8);
        // column 1 has the all-zero label
        for k in 1..=8 {
            assert_eq!(xor_index(k, 1), k);
        }
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_gate(&pat("*V")).unwrap(), pat("1*V"));
        assert_eq!(lift_gate(&pat("1V")).unwrap(), pat("*1V"));
        assert_eq!(lift_gate(&pat("V*")).unwrap(), pat("1V*"));
        assert_eq!(lift_gate(&pat("V")).unwrap(), pat("1V"));
    }

    #[test]
    fn lift_rejects_zero_controls() {
        assert!(matches!(
            lift_gate(&pat("10V")),
            Err(Error::InvalidPattern { .. })
        ));
    }

    #[test]
    fn adapt_examples() {
        assert_eq!(adapt_gate(&pat("*1*V"), 5).unwrap(), pat("10*V"));
        assert_eq!(adapt_gate(&pat("*1V"), 3).unwrap(), pat("10V"));
        // column 2 never rewrites a column-1 gate
        for g in ["1*V", "*1V", "1V*", "1**V", "**1V", "1*V*", "*1*V"] {
            assert_eq!(adapt_gate(&pat(g), 2).unwrap(), pat(g));
        }
    }

    #[test]
    fn adapt_rejects_out_of_range_columns() {
        assert!(adapt_gate(&pat("1*V"), 1).is_err());
        assert!(adapt_gate(&pat("1*V"), 5).is_err());
    }

    #[test]
    fn final_gate_examples() {
        assert_eq!(final_gate(1, 3).unwrap(), pat("V**"));
        assert_eq!(final_gate(4, 3).unwrap(), pat("V11"));
        assert_eq!(final_gate(6, 4).unwrap(), pat("V1*1"));
        assert!(final_gate(5, 3).is_err());
        assert!(final_gate(0, 3).is_err());
    }

    #[test]
    fn column1_lower_orders() {
        assert_eq!(column1_lower_order(2).unwrap(), vec![4, 3]);
        assert_eq!(column1_lower_order(3).unwrap(), vec![6, 8, 7, 5]);
        assert_eq!(
            column1_lower_order(4).unwrap(),
            vec![10, 12, 11, 14, 16, 15, 13, 9]
        );
        assert!(column1_lower_order(1).is_err());
    }

    #[test]
    fn two_qubit_schedule_is_the_golden_table() {
        let s = generate_schedule(2).unwrap();
        let expected = [
            (2, 1, "*V"),
            (4, 1, "1V"),
            (3, 1, "V*"),
            (3, 2, "1V"),
            (4, 2, "V1"),
            (4, 3, "1V"),
        ];
        assert_eq!(
            entry_triples(s.entries()),
            expected
                .iter()
                .map(|&(r, c, p)| (r, c, p.to_string()))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn three_qubit_column_four() {
        let s = generate_schedule(3).unwrap();
        let expected = [(7, 4, "1*V"), (5, 4, "10V"), (6, 4, "1V*"), (8, 4, "V11")];
        assert_eq!(
            entry_triples(s.column(4)),
            expected
                .iter()
                .map(|&(r, c, p)| (r, c, p.to_string()))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn four_qubit_column_eight_lower_half() {
        let s = generate_schedule(4).unwrap();
        let col = s.column(8);
        let expected = [
            (15, 8, "1**V"),
            (13, 8, "1*0V"),
            (14, 8, "1*V*"),
            (11, 8, "10*V"),
            (9, 8, "1*0V"),
            (10, 8, "10V*"),
            (12, 8, "1V**"),
            (16, 8, "V111"),
        ];
        assert_eq!(
            entry_triples(col),
            expected
                .iter()
                .map(|&(r, c, p)| (r, c, p.to_string()))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn schedule_size_and_column_row_sets() {
        for n in 1..=8 {
            let s = generate_schedule(n).unwrap();
            let dim = 1 << n;
            assert_eq!(s.len(), dim * (dim - 1) / 2, "n = {n}");
            for (col, entries) in s.columns() {
                assert_eq!(entries.len(), dim - col);
                let mut rows: Vec<u32> = entries.iter().map(|e| e.row).collect();
                rows.sort_unstable();
                let expected: Vec<u32> = (col as u32 + 1..=dim as u32).collect();
                assert_eq!(rows, expected, "n = {n}, column {col}");
                for e in entries {
                    assert_eq!(e.pattern.qubits(), n);
                }
            }
        }
    }

    #[test]
    fn column_one_gates_avoid_zero_and_low_one_controls() {
        for n in 1..=8 {
            let s = generate_schedule(n).unwrap();
            for e in s.column(1) {
                assert!(!e.pattern.symbols().contains(&GateSymbol::Zero));
                assert_ne!(e.pattern.symbol(1), GateSymbol::One);
            }
        }
    }

    #[test]
    fn pivot_row_satisfies_pattern_and_is_diagonal_or_later() {
        for n in 2..=6 {
            let s = generate_schedule(n).unwrap();
            for (col, entries) in s.columns() {
                for (k, e) in entries.iter().enumerate() {
                    let pivot = e.pivot_row();
                    let lo = (e.row as usize).min(pivot);
                    let hi = (e.row as usize).max(pivot);
                    assert!(
                        matched_row_pairs(&e.pattern)
                            .iter()
                            .any(|p| p.lo == lo && p.hi == hi),
                        "n={n} entry ({},{}) {} does not act on its pivot pair",
                        e.row,
                        e.col,
                        e.pattern
                    );
                    // pivot value must still be live: the diagonal or an
                    // entry this column eliminates later
                    let later = entries[k + 1..].iter().any(|f| f.row as usize == pivot);
                    assert!(
                        pivot == col || later,
                        "n={n} entry ({},{}) pivots on already-cleared row {pivot}",
                        e.row,
                        e.col
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_qubit_counts() {
        assert!(generate_schedule(0).is_err());
        assert!(generate_schedule(MAX_QUBITS + 1).is_err());
    }

    #[test]
    fn concurrent_callers_share_one_schedule() {
        let handles: Vec<_> = (0..4)
            .map(|_| std::thread::spawn(|| generate_schedule(6).unwrap()))
            .collect();
        let schedules: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for s in &schedules[1..] {
            assert!(Arc::ptr_eq(&schedules[0], s));
        }
    }
}
