//! Invariant factors of integer matrices over arbitrary-precision integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

type SparseRow = BTreeMap<usize, BigInt>;

/// Nonzero invariant factors (Smith normal form diagonal, each dividing the
/// next) of the `rows × cols` matrix given by `(row, col, value)` triplets.
/// Duplicate positions are summed. The rank is the number of factors.
pub fn elementary_divisors(
    rows: usize,
    cols: usize,
    entries: impl IntoIterator<Item = (usize, usize, i64)>,
) -> Vec<BigInt> {
    let mut matrix: Vec<SparseRow> = vec![SparseRow::new(); rows];
    for (r, c, v) in entries {
        assert!(
            r < rows && c < cols,
            "entry ({r}, {c}) outside {rows}x{cols}"
        );
        let e = matrix[r].entry(c).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            matrix[r].remove(&c);
        }
    }

    let units = eliminate_unit_pivots(&mut matrix, cols);
    let mut out: Vec<BigInt> = std::iter::repeat_with(BigInt::one).take(units).collect();
    out.extend(dense_smith(matrix, cols));
    debug_assert!(out.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    out
}

/// Repeatedly pivots on ±1 entries. A unit pivot clears its column by row
/// operations; the rest of its row is then cleared by column operations that
/// touch no other row, so the row and column can be dropped.
fn eliminate_unit_pivots(matrix: &mut [SparseRow], cols: usize) -> usize {
    let mut col_rows: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); cols];
    for (r, row) in matrix.iter().enumerate() {
        for &c in row.keys() {
            col_rows[c].insert(r);
        }
    }
    let mut rank = 0;
    loop {
        // Prefer short rows to limit fill-in.
        let pivot = matrix
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                row.iter()
                    .find(|(_, v)| v.abs().is_one())
                    .map(|(&c, _)| (row.len(), r, c))
            })
            .min();
        let Some((_, pr, pc)) = pivot else { break };
        let pivot_row = std::mem::take(&mut matrix[pr]);
        for &c in pivot_row.keys() {
            col_rows[c].remove(&pr);
        }
        let pivot_value = pivot_row[&pc].clone();
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in targets {
            let factor = &matrix[r][&pc] * &pivot_value; // pivot is ±1, so 1/p = p
            for (&c, v) in &pivot_row {
                let e = matrix[r].entry(c).or_insert_with(BigInt::zero);
                let was_zero = e.is_zero();
                *e -= &factor * v;
                if e.is_zero() {
                    matrix[r].remove(&c);
                    col_rows[c].remove(&r);
                } else if was_zero {
                    col_rows[c].insert(r);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn dense_smith(matrix: Vec<SparseRow>, cols: usize) -> Vec<BigInt> {
    let live_rows: Vec<SparseRow> = matrix.into_iter().filter(|r| !r.is_empty()).collect();
    if live_rows.is_empty() {
        return Vec::new();
    }
    let mut live_cols: Vec<usize> = live_rows.iter().flat_map(|r| r.keys().copied()).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    debug_assert!(live_cols.last().is_none_or(|&c| c < cols));
    let index: BTreeMap<usize, usize> =
        live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let m = live_rows.len();
    let n = live_cols.len();
    let mut a = vec![vec![BigInt::zero(); n]; m];
    for (i, row) in live_rows.into_iter().enumerate() {
        for (c, v) in row {
            a[i][index[&c]] = v;
        }
    }

    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&a, t, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..n {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // Move the smallest leftover in row/column t onto the pivot.
                let (pi, pj) = min_abs_in_cross(&a, t);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_abs_entry(a: &[Vec<BigInt>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, v) in row.iter().enumerate().skip(c0) {
            if !v.is_zero() && best.as_ref().is_none_or(|(b, _, _)| v.abs() < *b) {
                best = Some((v.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn min_abs_in_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (a[t][t].abs(), t, t);
    if best.0.is_zero() {
        best.0 = BigInt::from(-1);
    }
    let mut consider = |v: &BigInt, i: usize, j: usize| {
        if !v.is_zero() && (best.0.is_negative() || v.abs() < best.0) {
            best = (v.abs(), i, j);
        }
    };
    for (i, row) in a.iter().enumerate().skip(t) {
        consider(&row[t], i, t);
    }
    for (j, v) in a[t].iter().enumerate().skip(t) {
        consider(v, t, j);
    }
    (best.1, best.2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(rows: usize, cols: usize, dense: &[i64]) -> Vec<i64> {
        let entries = dense
            .iter()
            .enumerate()
            .map(|(k, &v)| (k / cols, k % cols, v));
        elementary_divisors(rows, cols, entries)
            .into_iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect()
    }

    #[test]
    fn diagonalizes_small_matrices() {
        assert_eq!(divisors(2, 2, &[2, 0, 0, 3]), vec![1, 6]);
        assert_eq!(divisors(2, 2, &[2, 4, 6, 8]), vec![2, 4]);
        assert_eq!(divisors(1, 1, &[0]), Vec::<i64>::new());
        assert_eq!(divisors(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]), vec![1, 3]);
        assert_eq!(divisors(2, 3, &[4, 6, 10, 0, 0, 0]), vec![2]);
    }

    #[test]
    fn unit_pivot_path_matches_dense() {
        // Mixed: unit pivots first, then a 2x2 torsion block.
        let m = [1, 1, 0, 0, 0, 2, 0, 0, 0, 0, 2, 0];
        assert_eq!(divisors(3, 4, &m), vec![1, 2, 2]);
    }

    #[test]
    fn large_entries_do_not_overflow() {
        let big = i64::MAX / 2;
        let d = elementary_divisors(2, 2, [(0, 0, big), (1, 1, big), (0, 1, big)]);
        assert_eq!(d.len(), 2);
        assert_eq!(&d[0] * &d[1], BigInt::from(big) * BigInt::from(big));
    }
}
