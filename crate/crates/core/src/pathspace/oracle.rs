//! Brute-force path classes and deadlock detection on the 1-skeleton.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::grid::{has_forward_edge, reach, Grid};
use crate::complex::EuclideanComplex;
use crate::error::{Error, Result};

/// Flip classes of monotone edge paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub paths: u64,
    pub classes: usize,
    /// One path per class as a sequence of axes (0-based), smallest first.
    pub representatives: Vec<Vec<usize>>,
}

/// Enumerates every monotone edge path from `a` to `b` in `k` and groups them
/// under square flips: `…, e_i, e_j, …` and `…, e_j, e_i, …` are adjacent
/// when the square they bound lies in `k`. Fails when there are more than
/// `cap` paths.
pub fn flip_oracle(k: &EuclideanComplex, a: &[i64], b: &[i64], cap: u64) -> Result<OracleResult> {
    let n = k.n();
    for v in [a, b] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let empty = OracleResult {
        paths: 0,
        classes: 0,
        representatives: Vec::new(),
    };
    if a.iter().zip(b).any(|(x, y)| x > y) || !k.contains_vertex(a) || !k.contains_vertex(b) {
        return Ok(empty);
    }
    let grid = Grid::new(a, b);
    // Paths from each vertex to b, counted backwards in index order.
    let mut count = vec![0u64; grid.len()];
    let last = grid.len() - 1;
    count[last] = 1;
    for idx in (0..last).rev() {
        let v = grid.vertex(idx);
        if !k.contains_vertex(&v) {
            continue;
        }
        let mut total = 0u64;
        for axis in 0..n {
            if v[axis] < b[axis] && has_forward_edge(k, &v, axis) {
                total = total.saturating_add(count[idx + grid.stride(axis)]);
            }
        }
        count[idx] = total;
    }
    let total = count[0];
    if total > cap {
        return Err(Error::CapExceeded(total));
    }
    if total == 0 {
        return Ok(empty);
    }

    let mut paths: Vec<Vec<u8>> = Vec::with_capacity(total as usize);
    let mut stack: Vec<(usize, Vec<u8>)> = vec![(0, Vec::new())];
    while let Some((idx, path)) = stack.pop() {
        if idx == last {
            paths.push(path);
            continue;
        }
        let v = grid.vertex(idx);
        for axis in (0..n).rev() {
            if v[axis] < b[axis] && has_forward_edge(k, &v, axis) {
                let next = idx + grid.stride(axis);
                if count[next] > 0 {
                    let mut p = path.clone();
                    p.push(axis as u8);
                    stack.push((next, p));
                }
            }
        }
    }
    paths.sort();
    let index: HashMap<&[u8], usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let mut uf = UnionFind::<usize>::new(paths.len());
    for (i, p) in paths.iter().enumerate() {
        let mut v = a.to_vec();
        for pos in 0..p.len().saturating_sub(1) {
            let (x, y) = (p[pos], p[pos + 1]);
            if x < y {
                let mut half: Vec<i64> = v.iter().map(|c| 2 * c).collect();
                half[x as usize] += 1;
                half[y as usize] += 1;
                if k.contains_half(&half) {
                    let mut q = p.clone();
                    q.swap(pos, pos + 1);
                    uf.union(i, index[q.as_slice()]);
                }
            }
            v[x as usize] += 1;
        }
    }
    let mut reps: HashMap<usize, usize> = HashMap::new();
    for i in 0..paths.len() {
        reps.entry(uf.find(i)).or_insert(i);
    }
    let mut firsts: Vec<usize> = reps.into_values().collect();
    firsts.sort_unstable();
    Ok(OracleResult {
        paths: total,
        classes: firsts.len(),
        representatives: firsts
            .into_iter()
            .map(|i| paths[i].iter().map(|&x| x as usize).collect())
            .collect(),
    })
}

/// Vertices of `k ∩ [a, b]` other than `b`, reachable from `a`, with no
/// edge `[v, v + e_i] ⊆ k` inside `[a, b]`.
pub fn deadlocks(k: &EuclideanComplex, a: &[i64], b: &[i64]) -> Result<Vec<Vec<i64>>> {
    let n = k.n();
    for v in [a, b] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    if a.iter().zip(b).any(|(x, y)| x > y) {
        return Err(Error::EndpointOrder(format!("{a:?}"), format!("{b:?}")));
    }
    let grid = Grid::new(a, b);
    let seen = reach(k, &grid, &[a.to_vec()], true);
    let mut out = Vec::new();
    for (idx, &s) in seen.iter().enumerate() {
        if !s || idx == grid.len() - 1 {
            continue;
        }
        let v = grid.vertex(idx);
        if (0..n).all(|axis| v[axis] >= b[axis] || !has_forward_edge(k, &v, axis)) {
            out.push(v);
        }
    }
    Ok(out)
}
