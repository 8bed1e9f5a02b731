//! Grid vertices of a box and directed reachability along edges of a complex.

use std::collections::VecDeque;

use crate::complex::EuclideanComplex;

/// Vertices of `[lo, hi]` in row-major order. A predecessor `v − j` of `v`
/// always has a smaller index.
pub(crate) struct Grid {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    pub fn new(lo: &[i64], hi: &[i64]) -> Self {
        let n = lo.len();
        let mut strides = vec![1; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (hi[i + 1] - lo[i + 1] + 1) as usize;
        }
        let len = if n == 0 {
            1
        } else {
            strides[0] * (hi[0] - lo[0] + 1) as usize
        };
        Grid {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            strides,
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn index(&self, v: &[i64]) -> usize {
        v.iter()
            .zip(&self.lo)
            .zip(&self.strides)
            .map(|((x, l), s)| (x - l) as usize * s)
            .sum()
    }

    pub fn vertex(&self, mut idx: usize) -> Vec<i64> {
        let mut v = vec![0; self.n()];
        for i in 0..self.n() {
            v[i] = self.lo[i] + (idx / self.strides[i]) as i64;
            idx %= self.strides[i];
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.iter()
            .zip(&self.lo)
            .zip(&self.hi)
            .all(|((x, l), h)| l <= x && x <= h)
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }
}

/// Edge `[v, v + e_axis]` lies in `k`.
pub(crate) fn has_forward_edge(k: &EuclideanComplex, v: &[i64], axis: usize) -> bool {
    let mut half: Vec<i64> = v.iter().map(|x| 2 * x).collect();
    half[axis] += 1;
    k.contains_half(&half)
}

/// Vertices of the grid that lie in `k` and are reachable from `sources`
/// along edges of `k` (forward) or that reach them (backward).
pub(crate) fn reach(
    k: &EuclideanComplex,
    grid: &Grid,
    sources: &[Vec<i64>],
    forward: bool,
) -> Vec<bool> {
    let mut seen = vec![false; grid.len()];
    let mut queue = VecDeque::new();
    for s in sources {
        if grid.contains(s) && k.contains_vertex(s) {
            let i = grid.index(s);
            if !seen[i] {
                seen[i] = true;
                queue.push_back(i);
            }
        }
    }
    while let Some(i) = queue.pop_front() {
        let v = grid.vertex(i);
        for axis in 0..grid.n() {
            let (next, edge_lo) = if forward {
                if v[axis] >= grid.hi[axis] {
                    continue;
                }
                (i + grid.stride(axis), v.clone())
            } else {
                if v[axis] <= grid.lo[axis] {
                    continue;
                }
                let mut w = v.clone();
                w[axis] -= 1;
                (i - grid.stride(axis), w)
            };
            if !seen[next] && has_forward_edge(k, &edge_lo, axis) {
                seen[next] = true;
                queue.push_back(next);
            }
        }
    }
    seen
}
