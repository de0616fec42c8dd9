//! Dense complex matrix substrate.
//!
//! Storage is row-major `Vec<Complex64>`. Matrices stay small enough
//! (N <= 4096, i.e. 12 qubits) that dense storage is the honest cost model:
//! the elimination scheme touches O(N^2) entries no matter what.

use std::ops::{Index, IndexMut};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gates::MAX_QUBITS;

pub use num_complex::Complex64;

/// Tolerance applied to unitaries handed in from outside (files, callers).
pub const INPUT_UNITARY_TOL: f64 = 1e-10;
/// Tolerance applied to matrices this crate constructs itself.
pub const INTERNAL_UNITARY_TOL: f64 = 1e-12;
/// Tolerance for 2x2 blocks bound into controlled gates.
pub const TWO_BY_TWO_TOL: f64 = 1e-12;

/// Square matrix of complex doubles, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// All-zero matrix of side `dim`.
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    /// Identity matrix of side `dim`.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    row: i + 1,
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Mutable views of two distinct rows, `i < k`.
    pub fn row_pair_mut(&mut self, i: usize, k: usize) -> (&mut [Complex64], &mut [Complex64]) {
        assert!(i < k && k < self.dim, "row pair ({i}, {k}) out of order or range");
        let n = self.dim;
        let (head, tail) = self.data.split_at_mut(k * n);
        (&mut head[i * n..(i + 1) * n], &mut tail[..n])
    }

    /// Index of the first non-finite entry, if any.
    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
            .map(|p| (p / self.dim, p % self.dim))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Dense product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                let (out_row, rhs_row) = (i * n, k * n);
                for j in 0..n {
                    out.data[out_row + j] += a * rhs.data[rhs_row + j];
                }
            }
        }
        out
    }

    /// Largest entrywise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise absolute deviation from the identity.
    pub fn deviation_from_identity(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { Complex64::ONE } else { Complex64::ZERO };
                dev = dev.max((self[(i, j)] - target).norm());
            }
        }
        dev
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Outcome of a unitarity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityCheck {
    pub passed: bool,
    /// Max-abs entry of `M\u{2020}M - I`.
    pub deviation: f64,
}

/// Checks `M\u{2020}M = I` to the given max-abs tolerance.
///
/// Returns the verdict together with the measured deviation; rejects
/// non-finite input outright.
pub fn check_unitary(m: &ComplexMatrix, tol: f64) -> Result<UnitarityCheck> {
    if let Some((row, col)) = m.first_non_finite() {
        return Err(Error::NonFinite { row, col });
    }
    let n = m.dim();
    let mut deviation: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            // (M†M)_{ij} = <col_i, col_j>
            let mut acc = Complex64::ZERO;
            for k in 0..n {
                acc += m[(k, i)].conj() * m[(k, j)];
            }
            if i == j {
                acc -= Complex64::ONE;
            }
            deviation = deviation.max(acc.norm());
        }
    }
    Ok(UnitarityCheck {
        passed: deviation <= tol,
        deviation,
    })
}

/// A 2x2 unitary, the payload of every controlled gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoByTwoUnitary {
    e: [[Complex64; 2]; 2],
}

impl TwoByTwoUnitary {
    /// Validates finiteness and unitarity at [`TWO_BY_TWO_TOL`].
    pub fn new(e: [[Complex64; 2]; 2]) -> Result<Self> {
        for (i, row) in e.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.re.is_finite() || !c.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        let v = TwoByTwoUnitary { e };
        let dev = v.unitarity_deviation();
        if dev > TWO_BY_TWO_TOL {
            return Err(Error::NotUnitary {
                deviation: dev,
                tol: TWO_BY_TWO_TOL,
            });
        }
        Ok(v)
    }

    pub fn identity() -> Self {
        TwoByTwoUnitary {
            e: [
                [Complex64::ONE, Complex64::ZERO],
                [Complex64::ZERO, Complex64::ONE],
            ],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.e[i][j]
    }

    pub fn dagger(&self) -> Self {
        TwoByTwoUnitary {
            e: [
                [self.e[0][0].conj(), self.e[1][0].conj()],
                [self.e[0][1].conj(), self.e[1][1].conj()],
            ],
        }
    }

    /// Applies the block to a column pair `(x, y)`.
    pub fn mul_pair(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (
            self.e[0][0] * x + self.e[0][1] * y,
            self.e[1][0] * x + self.e[1][1] * y,
        )
    }

    /// Max-abs entry of `V\u{2020}V - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let [[a, b], [c, d]] = self.e;
        let g00 = a.conj() * a + c.conj() * c - Complex64::ONE;
        let g01 = a.conj() * b + c.conj() * d;
        let g11 = b.conj() * b + d.conj() * d - Complex64::ONE;
        g00.norm().max(g01.norm()).max(g11.norm())
    }

    /// Max-abs entry of `V - I`.
    pub fn deviation_from_identity(&self) -> f64 {
        let [[a, b], [c, d]] = self.e;
        (a - Complex64::ONE)
            .norm()
            .max(b.norm())
            .max(c.norm())
            .max((d - Complex64::ONE).norm())
    }
}

/// Which component of `V (a, b)^T` must vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroSlot {
    First,
    Second,
}

/// The 2x2 elimination primitive.
///
/// `a` is the value in the row whose target bit is 0, `b` the value in the
/// row whose target bit is 1. The returned unitary sends the selected
/// component of `(a, b)^T` to zero and the surviving component to the
/// real, nonnegative `sqrt(|a|^2 + |b|^2)`. Keeping the survivor
/// real-positive is what lets each column's final gate drive its diagonal
/// pivot to 1 so the full elimination reaches the identity exactly.
pub fn givens_for_pair(a: Complex64, b: Complex64, slot: ZeroSlot) -> Result<TwoByTwoUnitary> {
    // Scale by the largest component so r never overflows or underflows;
    // the rotation only depends on a and b through a/r and b/r.
    let scale = a
        .re
        .abs()
        .max(a.im.abs())
        .max(b.re.abs())
        .max(b.im.abs());
    if scale == 0.0 {
        return Err(Error::NothingToEliminate);
    }
    let (a, b) = (a / scale, b / scale);
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / r, b / r);
    let e = match slot {
        // V (a, b)^T = (r, 0)^T
        ZeroSlot::Second => [[a.conj(), b.conj()], [-b, a]],
        // V (a, b)^T = (0, r)^T
        ZeroSlot::First => [[b, -a], [a.conj(), b.conj()]],
    };
    TwoByTwoUnitary::new(e)
}

/// N x N unitary over n qubits (N = 2^n), carrying the deviation measured
/// when it was certified.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    m: ComplexMatrix,
    qubits: usize,
    deviation: f64,
    tol: f64,
}

impl UnitaryMatrix {
    /// Certifies a matrix as unitary at `tol`.
    ///
    /// The dimension must be `2^n` with `1 <= n <= 12`; entries must be
    /// finite and `M\u{2020}M = I` must hold to `tol` in max-abs norm.
    pub fn new(m: ComplexMatrix, tol: f64) -> Result<Self> {
        let dim = m.dim();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let qubits = dim.trailing_zeros() as usize;
        if qubits > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                n: qubits,
                min: 1,
                max: MAX_QUBITS,
            });
        }
        let check = check_unitary(&m, tol)?;
        if !check.passed {
            return Err(Error::NotUnitary {
                deviation: check.deviation,
                tol,
            });
        }
        Ok(UnitaryMatrix {
            m,
            qubits,
            deviation: check.deviation,
            tol,
        })
    }

    /// Convenience wrapper: build from rows and certify at `tol`.
    pub fn from_rows(rows: Vec<Vec<Complex64>>, tol: f64) -> Result<Self> {
        Self::new(ComplexMatrix::from_rows(rows)?, tol)
    }

    /// Identity on `n` qubits.
    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Self::new(ComplexMatrix::identity(1 << n), 0.0)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    /// Deviation `max |U\u{2020}U - I|` measured at construction.
    pub fn unitarity_deviation(&self) -> f64 {
        self.deviation
    }

    /// Tolerance the matrix was certified against.
    pub fn unitarity_tol(&self) -> f64 {
        self.tol
    }
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::QubitCountOutOfRange {
            n,
            min: 1,
            max: MAX_QUBITS,
        })
    }
}

/// Haar-distributed random unitary on `n` qubits, deterministic in `seed`.
///
/// Samples an N x N complex Gaussian and orthonormalizes its columns
/// (modified Gram-Schmidt, two passes). The triangular factor's diagonal is
/// real-positive by construction, which is exactly the phase normalization
/// that makes the QR recipe Haar-distributed.
pub fn haar_random_unitary(n: usize, seed: u64) -> Result<UnitaryMatrix> {
    check_qubits(n)?;
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    for j in 0..dim {
        // Re-orthogonalize once; a single MGS pass drifts above 1e-12 as
        // the dimension grows.
        for _ in 0..2 {
            for i in 0..j {
                let mut inner = Complex64::ZERO;
                for k in 0..dim {
                    inner += m[(k, i)].conj() * m[(k, j)];
                }
                for k in 0..dim {
                    let correction = inner * m[(k, i)];
                    m[(k, j)] -= correction;
                }
            }
        }
        let norm = (0..dim).map(|k| m[(k, j)].norm_sqr()).sum::<f64>().sqrt();
        for k in 0..dim {
            m[(k, j)] /= norm;
        }
    }
    UnitaryMatrix::new(m, INTERNAL_UNITARY_TOL)
}
