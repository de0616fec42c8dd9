//! Controlled-gate patterns and their matrix semantics.
//!
//! A gate over n qubits is written as a word `(c_n ... c_1)` over
//! `{0, 1, *, V}` with exactly one `V`. The string renders left to right
//! from `c_n` down to `c_1`, e.g. `"10V*"` controls qubit 4 on 1, qubit 3
//! on 0, targets qubit 2 and leaves qubit 1 free. Rows are 1-based and row
//! `k` carries the n-bit label of `k - 1`, with `c_1` the least significant
//! bit; this mirrors the index identification `k = sum k_j 2^(j-1) + 1`
//! used by the elimination tables.

use std::fmt;
use std::str::FromStr;

use arrayvec::ArrayVec;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TwoByTwoUnitary, UnitaryMatrix, INTERNAL_UNITARY_TOL};

/// Largest supported qubit count.
pub const MAX_QUBITS: usize = 12;

/// One position of a control word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateSymbol {
    /// `0`: control satisfied when the qubit is |0>.
    Zero,
    /// `1`: control satisfied when the qubit is |1>.
    One,
    /// `*`: free, the gate acts regardless.
    Free,
    /// `V`: the target qubit the 2x2 block acts on.
    Target,
}

impl GateSymbol {
    pub fn as_char(self) -> char {
        match self {
            GateSymbol::Zero => '0',
            GateSymbol::One => '1',
            GateSymbol::Free => '*',
            GateSymbol::Target => 'V',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(GateSymbol::Zero),
            '1' => Some(GateSymbol::One),
            '*' => Some(GateSymbol::Free),
            'V' => Some(GateSymbol::Target),
            _ => None,
        }
    }
}

/// The symbolic control word `(c_n ... c_1)`, stored leftmost-first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GatePattern {
    symbols: ArrayVec<GateSymbol, MAX_QUBITS>,
}

impl GatePattern {
    /// Builds a pattern from symbols given in string order (`c_n` first).
    pub fn from_symbols<I>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = GateSymbol>,
    {
        let mut v = ArrayVec::new();
        for s in symbols {
            if v.try_push(s).is_err() {
                return Err(Error::bad_pattern(
                    "<symbols>",
                    format!("longer than {MAX_QUBITS} positions"),
                ));
            }
        }
        let p = GatePattern { symbols: v };
        p.validate()?;
        Ok(p)
    }

    /// Parses a pattern string such as `"10V*"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut symbols = ArrayVec::new();
        for c in s.chars() {
            let sym = GateSymbol::from_char(c)
                .ok_or_else(|| Error::bad_pattern(s, format!("illegal character {c:?}")))?;
            if symbols.try_push(sym).is_err() {
                return Err(Error::bad_pattern(s, format!("longer than {MAX_QUBITS} positions")));
            }
        }
        let p = GatePattern { symbols };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.symbols.is_empty() {
            return Err(Error::bad_pattern(self, "empty pattern"));
        }
        let targets = self
            .symbols
            .iter()
            .filter(|&&s| s == GateSymbol::Target)
            .count();
        match targets {
            1 => Ok(()),
            0 => Err(Error::bad_pattern(self, "no target symbol 'V'")),
            _ => Err(Error::bad_pattern(self, "more than one target symbol 'V'")),
        }
    }

    /// Number of qubits the word spans.
    pub fn qubits(&self) -> usize {
        self.symbols.len()
    }

    /// Symbols in string order, `c_n` first.
    pub fn symbols(&self) -> &[GateSymbol] {
        &self.symbols
    }

    /// Symbol `c_j` for a 1-based position `j` counted from the right.
    pub fn symbol(&self, j: usize) -> GateSymbol {
        assert!(j >= 1 && j <= self.qubits(), "position {j} out of range");
        self.symbols[self.qubits() - j]
    }

    /// 1-based position `t` of the target, i.e. `c_t = V`.
    pub fn target_position(&self) -> usize {
        let idx = self
            .symbols
            .iter()
            .position(|&s| s == GateSymbol::Target)
            .expect("validated pattern has a target");
        self.qubits() - idx
    }

    /// Number of positions fixed to 0 or 1.
    pub fn control_count(&self) -> usize {
        self.symbols
            .iter()
            .filter(|&&s| matches!(s, GateSymbol::Zero | GateSymbol::One))
            .count()
    }

    /// New pattern with `sym` prepended as the new `c_{n+1}`.
    pub fn prefixed(&self, sym: GateSymbol) -> Result<Self> {
        if sym == GateSymbol::Target {
            return Err(Error::bad_pattern(self, "cannot prefix a second target"));
        }
        let mut symbols = ArrayVec::new();
        if self.qubits() + 1 > MAX_QUBITS {
            return Err(Error::bad_pattern(
                self,
                format!("prefix would exceed {MAX_QUBITS} positions"),
            ));
        }
        symbols.push(sym);
        symbols.extend(self.symbols.iter().copied());
        Ok(GatePattern { symbols })
    }

    /// Replaces `c_j` (1-based from the right); used by the schedule rules.
    pub(crate) fn with_symbol(&self, j: usize, sym: GateSymbol) -> Self {
        let mut out = self.clone();
        let n = out.qubits();
        out.symbols[n - j] = sym;
        out
    }
}

impl fmt::Display for GatePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for GatePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GatePattern::parse(s)
    }
}

/// A pair of 1-based rows whose labels differ only in the target bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowPair {
    /// Row whose target bit is 0.
    pub lo: usize,
    /// Row whose target bit is 1; `hi = lo + 2^(t-1)`.
    pub hi: usize,
}

/// All row pairs a pattern acts on, sorted by `lo`.
///
/// A pair is matched when every 0/1 control of the word is satisfied by the
/// shared non-target bits; free positions range over both values, so the
/// list has `2^(n - 1 - #controls)` pairs.
pub fn matched_row_pairs(p: &GatePattern) -> Vec<RowPair> {
    let n = p.qubits();
    let stride = 1usize << (p.target_position() - 1);
    let mut control_mask = 0usize;
    let mut ones = 0usize;
    for j in 1..=n {
        match p.symbol(j) {
            GateSymbol::Zero => control_mask |= 1 << (j - 1),
            GateSymbol::One => {
                control_mask |= 1 << (j - 1);
                ones |= 1 << (j - 1);
            }
            _ => {}
        }
    }
    let mut pairs = Vec::with_capacity(1 << (n - 1 - p.control_count()));
    for lo in 0..1usize << n {
        if lo & stride == 0 && lo & control_mask == ones {
            pairs.push(RowPair {
                lo: lo + 1,
                hi: lo + stride + 1,
            });
        }
    }
    pairs
}

/// A control word bound to a concrete 2x2 unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledGate {
    pub pattern: GatePattern,
    pub v: TwoByTwoUnitary,
}

impl ControlledGate {
    pub fn new(pattern: GatePattern, v: TwoByTwoUnitary) -> Self {
        ControlledGate { pattern, v }
    }

    /// The inverse gate: same word, daggered block.
    pub fn dagger(&self) -> Self {
        ControlledGate {
            pattern: self.pattern.clone(),
            v: self.v.dagger(),
        }
    }
}

/// Dense N x N matrix of a controlled gate: the identity everywhere except
/// on matched row pairs, where the 2x2 block equals `v`.
pub fn expand_gate(g: &ControlledGate) -> UnitaryMatrix {
    let dim = 1usize << g.pattern.qubits();
    let mut m = ComplexMatrix::identity(dim);
    for pair in matched_row_pairs(&g.pattern) {
        let (lo, hi) = (pair.lo - 1, pair.hi - 1);
        m[(lo, lo)] = g.v.entry(0, 0);
        m[(lo, hi)] = g.v.entry(0, 1);
        m[(hi, lo)] = g.v.entry(1, 0);
        m[(hi, hi)] = g.v.entry(1, 1);
    }
    UnitaryMatrix::new(m, INTERNAL_UNITARY_TOL)
        .expect("embedding a certified 2x2 block preserves unitarity")
}

/// In-place left multiplication `M <- expand_gate(g) * M`.
///
/// Only matched row pairs are touched, so the cost is
/// `2^(n - #controls - 1) * N` pair updates instead of a dense N^3 product.
pub fn apply_gate_left(g: &ControlledGate, m: &mut ComplexMatrix) {
    assert_eq!(
        m.dim(),
        1usize << g.pattern.qubits(),
        "gate and matrix dimensions disagree"
    );
    let v00 = g.v.entry(0, 0);
    let v01 = g.v.entry(0, 1);
    let v10 = g.v.entry(1, 0);
    let v11 = g.v.entry(1, 1);
    for pair in matched_row_pairs(&g.pattern) {
        let (row_lo, row_hi) = m.row_pair_mut(pair.lo - 1, pair.hi - 1);
        for (x, y) in row_lo.iter_mut().zip(row_hi.iter_mut()) {
            let (a, b) = (*x, *y);
            *x = v00 * a + v01 * b;
            *y = v10 * a + v11 * b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{givens_for_pair, Complex64, ZeroSlot};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_v() -> TwoByTwoUnitary {
        givens_for_pair(c(0.6, 0.3), c(-0.2, 0.7), ZeroSlot::Second).unwrap()
    }

    #[test]
    fn parse_examples() {
        let p = GatePattern::parse("1V").unwrap();
        assert_eq!(p.qubits(), 2);
        assert_eq!(p.symbol(2), GateSymbol::One);
        assert_eq!(p.symbol(1), GateSymbol::Target);

        let p = GatePattern::parse("V***").unwrap();
        assert_eq!(p.qubits(), 4);
        assert_eq!(p.target_position(), 4);
    }

    #[test]
    fn parse_rejects_bad_patterns() {
        assert!(matches!(
            GatePattern::parse("VV"),
            Err(Error::InvalidPattern { .. })
        ));
        assert!(GatePattern::parse("10*").is_err());
        assert!(GatePattern::parse("").is_err());
        assert!(GatePattern::parse("1xV").is_err());
        assert!(GatePattern::parse("V************").is_err()); // 13 positions
    }

    #[test]
    fn render_round_trips() {
        for s in ["V", "1V", "V*", "10V*", "11*0V1", "*1V"] {
            assert_eq!(GatePattern::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn control_count_of_six_qubit_word() {
        let p = GatePattern::parse("11*0V1").unwrap();
        assert_eq!(p.control_count(), 4);
        assert_eq!(p.target_position(), 2);
    }

    #[test]
    fn pairs_of_fully_controlled_two_qubit_gates() {
        let pairs = matched_row_pairs(&GatePattern::parse("1V").unwrap());
        assert_eq!(pairs, vec![RowPair { lo: 3, hi: 4 }]);
        let pairs = matched_row_pairs(&GatePattern::parse("0V").unwrap());
        assert_eq!(pairs, vec![RowPair { lo: 1, hi: 2 }]);
    }

    #[test]
    fn pairs_of_free_two_qubit_gates() {
        let pairs = matched_row_pairs(&GatePattern::parse("*V").unwrap());
        assert_eq!(pairs, vec![RowPair { lo: 1, hi: 2 }, RowPair { lo: 3, hi: 4 }]);
        let pairs = matched_row_pairs(&GatePattern::parse("V*").unwrap());
        assert_eq!(pairs, vec![RowPair { lo: 1, hi: 3 }, RowPair { lo: 2, hi: 4 }]);
    }

    #[test]
    fn leftmost_target_pairs_upper_with_lower_half() {
        for s in ["V**", "V0*", "V11"] {
            let p = GatePattern::parse(s).unwrap();
            for pair in matched_row_pairs(&p) {
                assert_eq!(pair.hi, pair.lo + 4);
            }
        }
    }

    #[test]
    fn expand_one_controlled_gate_is_direct_sum() {
        let v = sample_v();
        let g = ControlledGate::new(GatePattern::parse("1V").unwrap(), v);
        let m = expand_gate(&g);
        let mut expected = ComplexMatrix::identity(4);
        expected[(2, 2)] = v.entry(0, 0);
        expected[(2, 3)] = v.entry(0, 1);
        expected[(3, 2)] = v.entry(1, 0);
        expected[(3, 3)] = v.entry(1, 1);
        assert_eq!(m.matrix(), &expected);
    }

    #[test]
    fn expand_free_gate_is_kronecker_with_identity() {
        let v = sample_v();
        let g = ControlledGate::new(GatePattern::parse("*V").unwrap(), v);
        let m = expand_gate(&g);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.entry(i, j), v.entry(i, j));
                assert_eq!(m.entry(2 + i, 2 + j), v.entry(i, j));
                assert_eq!(m.entry(i, 2 + j), Complex64::ZERO);
            }
        }
    }

    #[test]
    fn expand_identity_block_is_identity() {
        let g = ControlledGate::new(GatePattern::parse("0V1").unwrap(), TwoByTwoUnitary::identity());
        assert_eq!(expand_gate(&g).matrix(), &ComplexMatrix::identity(8));
    }

    #[test]
    fn apply_identity_block_leaves_matrix_bit_identical() {
        let m0 = crate::linalg::haar_random_unitary(2, 5).unwrap().into_matrix();
        let mut m = m0.clone();
        let g = ControlledGate::new(GatePattern::parse("1V").unwrap(), TwoByTwoUnitary::identity());
        apply_gate_left(&g, &mut m);
        assert_eq!(m, m0);
    }

    #[test]
    fn apply_zero_controlled_gate_touches_only_first_two_rows() {
        let m0 = crate::linalg::haar_random_unitary(2, 9).unwrap().into_matrix();
        let mut m = m0.clone();
        let v = sample_v();
        let g = ControlledGate::new(GatePattern::parse("0V").unwrap(), v);
        apply_gate_left(&g, &mut m);
        for j in 0..4 {
            let (x, y) = v.mul_pair(m0[(0, j)], m0[(1, j)]);
            assert_eq!(m[(0, j)], x);
            assert_eq!(m[(1, j)], y);
            // untouched rows must be bit-identical, not merely close
            assert_eq!(m[(2, j)], m0[(2, j)]);
            assert_eq!(m[(3, j)], m0[(3, j)]);
        }
    }

    #[test]
    fn apply_matches_dense_product_on_random_gate() {
        let m0 = crate::linalg::haar_random_unitary(3, 11).unwrap().into_matrix();
        let v = sample_v();
        for s in ["**V", "1V0", "V*1", "0*V"] {
            let g = ControlledGate::new(GatePattern::parse(s).unwrap(), v);
            let mut fast = m0.clone();
            apply_gate_left(&g, &mut fast);
            let dense = expand_gate(&g).into_matrix().mul(&m0);
            assert!(fast.max_abs_diff(&dense) <= 1e-13);
        }
    }
}
