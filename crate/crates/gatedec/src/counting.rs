//! Exact integer gate-count engine.
//!
//! `g_n^k` counts the k-controlled gates the elimination scheme spends on an
//! n-qubit unitary. The recursion mirrors the four regions of the schedule:
//! upper-left block (A), lower halves of the left columns (B), the per-column
//! final gates (C) and the lower-right block (D). The Gray-code competitor is
//! represented by its published count recursion only. All arithmetic is
//! `u128`, which is exact through n = 50 (the counts stay below 2^106).

use crate::error::{Error, Result};
use crate::scheme::generate_schedule;

/// Largest qubit count the counting formulas are exposed for.
pub const MAX_COUNT_QUBITS: usize = 50;
/// Largest qubit count with a materializable schedule to tally against.
pub const MAX_SCHEDULE_QUBITS: usize = crate::gates::MAX_QUBITS;

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The vector `(g_n^0, ..., g_n^{n-1})` for one qubit count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    n: usize,
    g: Vec<u128>,
}

impl CountVector {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `g_n^k`; zero outside `0..n`.
    pub fn get(&self, k: usize) -> u128 {
        self.g.get(k).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u128] {
        &self.g
    }

    /// Total number of gates, `sum_k g_n^k`.
    pub fn total_gates(&self) -> u128 {
        self.g.iter().sum()
    }
}

/// A/B/C/D split of `g_n^k` by schedule region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BreakdownRow {
    /// Upper-left block (the recursive (n-1)-qubit pass over the left columns).
    pub a: u128,
    /// Lower halves of columns `1..=N/2`, final gates excluded.
    pub b: u128,
    /// The final gates at `(N/2 + l, l)`.
    pub c: u128,
    /// Lower-right block (the shifted (n-1)-qubit pass).
    pub d: u128,
}

impl BreakdownRow {
    pub fn total(&self) -> u128 {
        self.a + self.b + self.c + self.d
    }
}

/// Region split of the whole schedule, indexed by control count `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountBreakdown {
    n: usize,
    rows: Vec<BreakdownRow>,
}

impl CountBreakdown {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, k: usize) -> BreakdownRow {
        self.rows.get(k).copied().unwrap_or_default()
    }

    pub fn rows(&self) -> &[BreakdownRow] {
        &self.rows
    }
}

fn check_count_range(n: usize, min: usize, max: usize) -> Result<()> {
    if (min..=max).contains(&n) {
        Ok(())
    } else {
        Err(Error::QubitCountOutOfRange { n, min, max })
    }
}

/// `B_n^1 = 2^(n-3) (n+2) (n-1)`, the one-control share of the adapted
/// lower-half gates. Integer for every `n >= 2`; the published closed form
/// starts at `n = 3`.
fn b1(n: usize) -> u128 {
    debug_assert!(n >= 2);
    // evaluates as ((n+2)(n-1) * 2^n) / 8, which is integral down to n = 2
    (((n as u128 + 2) * (n as u128 - 1)) << n) >> 3
}

/// Closed form `B_n^1 = 2^(n-3) (n+2) (n-1)` for `n >= 3`.
pub fn b1_closed_form(n: usize) -> Result<u128> {
    check_count_range(n, 3, MAX_COUNT_QUBITS)?;
    Ok(b1(n))
}

/// `(g_n^0, ..., g_n^{n-1})` via the region recursion:
/// `g_n^k = A + B + C + D` with `A = g_{n-1}^k`, `D = g_{n-1}^{k-1}`,
/// `C = binom(n-1, k)` and `B` the adapted lower-half share, which is zero
/// for `k > 2` and splits `2^(n-1) (2^(n-1) - 1)` between `k = 1` and
/// `k = 2`. The closed forms for `g^1` and `g^2` are independent checks,
/// not inputs.
pub fn count_scheme(n: usize) -> Result<CountVector> {
    check_count_range(n, 1, MAX_COUNT_QUBITS)?;
    let mut g: Vec<u128> = vec![1];
    for m in 2..=n {
        let prev = |k: isize| -> u128 {
            if k < 0 {
                0
            } else {
                g.get(k as usize).copied().unwrap_or(0)
            }
        };
        let lower_total = (1u128 << (m - 1)) * ((1u128 << (m - 1)) - 1);
        let next = (0..m)
            .map(|k| {
                let b = match k {
                    1 => b1(m),
                    2 => lower_total - b1(m),
                    _ => 0,
                };
                prev(k as isize) + b + binomial(m - 1, k) + prev(k as isize - 1)
            })
            .collect();
        g = next;
    }
    Ok(CountVector { n, g })
}

/// Independent oracle: histogram of control counts over the generated
/// schedule.
pub fn count_scheme_from_schedule(n: usize) -> Result<CountVector> {
    check_count_range(n, 1, MAX_SCHEDULE_QUBITS)?;
    let schedule = generate_schedule(n)?;
    let mut g = vec![0u128; n];
    for e in schedule.entries() {
        g[e.pattern.control_count()] += 1;
    }
    Ok(CountVector { n, g })
}

/// A/B/C/D tallies obtained by classifying every schedule entry by the
/// region that produced it (readable off its coordinates).
pub fn count_breakdown(n: usize) -> Result<CountBreakdown> {
    check_count_range(n, 2, MAX_SCHEDULE_QUBITS)?;
    let schedule = generate_schedule(n)?;
    let half = (1usize << n) / 2;
    let mut rows = vec![BreakdownRow::default(); n];
    for e in schedule.entries() {
        let (row, col) = (e.row as usize, e.col as usize);
        let slot = &mut rows[e.pattern.control_count()];
        if col > half {
            slot.d += 1;
        } else if row <= half {
            slot.a += 1;
        } else if row == half + col {
            slot.c += 1;
        } else {
            slot.b += 1;
        }
    }
    Ok(CountBreakdown { n, rows })
}

/// Count vector of the Gray-code scheme, from its published recursion
/// `g_n^k = g_{n-1}^k + g_{n-1}^{k-1} + max(2^(n-2), 2^k)
///  + (2^(2n-k-2) - 2^(n-2))` with `g_n^0 = 2^(n-1)` and `g_n^n = 0`,
/// seeded from the small-n table rows `(1)` and `(2, 4)`.
pub fn count_gray(n: usize) -> Result<CountVector> {
    check_count_range(n, 1, MAX_COUNT_QUBITS)?;
    let mut g: Vec<u128> = vec![1];
    if n >= 2 {
        g = vec![2, 4];
    }
    for m in 3..=n {
        let prev = |k: usize| g.get(k).copied().unwrap_or(0);
        let next = (0..m)
            .map(|k| {
                if k == 0 {
                    1u128 << (m - 1)
                } else {
                    let guard = (1u128 << (m - 2)).max(1u128 << k);
                    prev(k) + prev(k - 1) + guard + (1u128 << (2 * m - k - 2))
                        - (1u128 << (m - 2))
                }
            })
            .collect();
        g = next;
    }
    Ok(CountVector { n, g })
}

/// Total controls `sum_k k * g^k`.
pub fn total_controls(v: &CountVector) -> u128 {
    weighted_total(v, |k| k as u128)
}

/// Generalized cost `sum_k w(k) * g^k`; `w(k) = k` recovers the plain
/// control total.
pub fn weighted_total(v: &CountVector, w: impl Fn(usize) -> u128) -> u128 {
    v.as_slice()
        .iter()
        .enumerate()
        .map(|(k, &g)| w(k) * g)
        .sum()
}

/// One line of the scheme-vs-Gray comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComparisonRow {
    pub n: usize,
    /// Total controls of this scheme.
    pub t1: u128,
    /// Total controls of the Gray-code scheme.
    pub t2: u128,
    /// `T2 - T1`.
    pub diff: i128,
}

/// The comparison series for `n = 1..=n_max`, exact.
pub fn compare_series(n_max: usize) -> Result<Vec<ComparisonRow>> {
    check_count_range(n_max, 1, MAX_COUNT_QUBITS)?;
    (1..=n_max)
        .map(|n| {
            let t1 = total_controls(&count_scheme(n)?);
            let t2 = total_controls(&count_gray(n)?);
            Ok(ComparisonRow {
                n,
                t1,
                t2,
                diff: t2 as i128 - t1 as i128,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(4, 7), 0);
        assert_eq!(binomial(49, 24), 63205303218876);
    }

    #[test]
    fn scheme_counts_match_published_rows() {
        let expected: [&[u128]; 5] = [
            &[1],
            &[2, 4],
            &[3, 18, 7],
            &[4, 60, 48, 8],
            &[5, 180, 242, 60, 9],
        ];
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(count_scheme(i + 1).unwrap().as_slice(), *row, "n = {}", i + 1);
        }
    }

    #[test]
    fn gray_counts_match_published_rows() {
        let expected: [&[u128]; 5] = [
            &[1],
            &[2, 4],
            &[4, 14, 10],
            &[8, 50, 40, 22],
            &[16, 186, 154, 94, 46],
        ];
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(count_gray(i + 1).unwrap().as_slice(), *row, "n = {}", i + 1);
        }
    }

    #[test]
    fn control_totals_match_published_rows() {
        let expected = [(0, 0), (4, 4), (32, 34), (180, 196), (880, 960)];
        for (i, &(t1, t2)) in expected.iter().enumerate() {
            let n = i + 1;
            assert_eq!(total_controls(&count_scheme(n).unwrap()), t1);
            assert_eq!(total_controls(&count_gray(n).unwrap()), t2);
        }
    }

    #[test]
    fn schedule_histogram_examples() {
        assert_eq!(count_scheme_from_schedule(1).unwrap().as_slice(), &[1]);
        assert_eq!(count_scheme_from_schedule(2).unwrap().as_slice(), &[2, 4]);
        assert_eq!(count_scheme_from_schedule(3).unwrap().as_slice(), &[3, 18, 7]);
    }

    #[test]
    fn recursion_matches_schedule_up_to_eight() {
        for n in 1..=8 {
            assert_eq!(
                count_scheme(n).unwrap(),
                count_scheme_from_schedule(n).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn breakdown_examples() {
        let b3 = count_breakdown(3).unwrap();
        assert_eq!(b3.row(0), BreakdownRow { a: 2, b: 0, c: 1, d: 0 });
        assert_eq!(b3.row(1), BreakdownRow { a: 4, b: 10, c: 2, d: 2 });
        assert_eq!(b3.row(2), BreakdownRow { a: 0, b: 2, c: 1, d: 4 });
        let b2 = count_breakdown(2).unwrap();
        assert_eq!(b2.row(0), BreakdownRow { a: 1, b: 0, c: 1, d: 0 });
        assert_eq!(b2.row(1), BreakdownRow { a: 0, b: 2, c: 1, d: 1 });
    }

    #[test]
    fn b1_closed_form_examples() {
        assert_eq!(b1_closed_form(3).unwrap(), 10);
        assert_eq!(b1_closed_form(4).unwrap(), 36);
        assert_eq!(b1_closed_form(5).unwrap(), 112);
        assert!(b1_closed_form(2).is_err());
        // independent route: classify the generated schedule
        for n in 3..=6 {
            assert_eq!(
                b1_closed_form(n).unwrap(),
                count_breakdown(n).unwrap().row(1).b,
                "n = {n}"
            );
        }
    }

    #[test]
    fn conservation_up_to_fifty() {
        for n in 1..=MAX_COUNT_QUBITS {
            let total = count_scheme(n).unwrap().total_gates();
            assert_eq!(total, (1u128 << (n - 1)) * ((1u128 << n) - 1), "n = {n}");
        }
    }

    #[test]
    fn closed_forms_agree_with_recursion() {
        for n in 2..=MAX_COUNT_QUBITS {
            let g = count_scheme(n).unwrap();
            let n128 = n as u128;
            assert_eq!(g.get(1), n128 * (n128 - 1) * ((1u128 << (n - 2)) + 1), "g^1 at n = {n}");
            if n >= 3 {
                let four_n = 1u128 << (2 * n);
                let g2 = (four_n - 4) / 3 - (1u128 << n) * (n128 - 1)
                    + n128 * (n128 - 1) * (n128 - 2) / 2;
                assert_eq!(g.get(2), g2, "g^2 at n = {n}");
                assert_eq!(g.get(n - 1), 7 + (n128 - 3), "g^(n-1) at n = {n}");
            }
        }
    }

    #[test]
    fn zero_control_count_is_n() {
        for n in 1..=MAX_COUNT_QUBITS {
            assert_eq!(count_scheme(n).unwrap().get(0), n as u128);
        }
    }

    #[test]
    fn comparison_series_anchors() {
        let rows = compare_series(10).unwrap();
        assert_eq!(rows[0].diff, 0);
        assert_eq!(rows[1].diff, 0);
        assert_eq!(rows[2].diff, 2);
        assert_eq!(rows[3].diff, 16);
        assert_eq!(rows[9].diff, 30720);
    }

    #[test]
    fn gray_advantage_grows_monotonically() {
        let rows = compare_series(MAX_COUNT_QUBITS).unwrap();
        for w in rows[2..].windows(2) {
            assert!(w[0].diff > 0);
            assert!(w[1].diff > w[0].diff, "diff not increasing at n = {}", w[1].n);
        }
    }

    #[test]
    fn weighted_total_recovers_t1() {
        let g = count_scheme(6).unwrap();
        assert_eq!(weighted_total(&g, |k| k as u128), total_controls(&g));
        // all-ones weights count the gates themselves
        assert_eq!(weighted_total(&g, |_| 1), g.total_gates());
    }

    #[test]
    fn range_errors() {
        assert!(count_scheme(0).is_err());
        assert!(count_scheme(51).is_err());
        assert!(count_gray(0).is_err());
        assert!(count_gray(51).is_err());
        assert!(count_breakdown(1).is_err());
        assert!(count_breakdown(13).is_err());
        assert!(count_scheme_from_schedule(13).is_err());
        assert!(compare_series(51).is_err());
    }
}
