//! Conversions between a complex and its hole representation.

use super::{EuclideanComplex, HalfIter, HoleSet, IntBox, OpenBox};
use crate::error::{Error, Result};

/// All cubes of `window` that avoid every hole.
pub fn from_holes(h: &HoleSet, window: &IntBox) -> Result<EuclideanComplex> {
    if window.dim() != h.n() {
        return Err(Error::DimensionMismatch {
            expected: h.n(),
            got: window.dim(),
        });
    }
    for hole in h.holes() {
        let closure = IntBox {
            lo: hole.lo.clone(),
            hi: hole.hi.clone(),
        };
        if !window.contains_box(&closure) {
            return Err(Error::BoxTooSmall {
                window: window.to_string(),
                hole: hole.to_string(),
            });
        }
    }
    Ok(EuclideanComplex::from_predicate(window.clone(), |half| {
        h.holes().iter().all(|b| !b.contains_half(half))
    }))
}

/// Open boxes whose union is the complement of `k` inside its window.
///
/// Each missing cell with midpoint `x` yields the box `(⌈x−1⌉, ⌊x+1⌋)`, which
/// lies outside `k`; it is then grown greedily along each axis (upper side,
/// then lower side) while it stays outside `k`. Cells already covered are
/// skipped and boxes contained in others dropped. Requires every cube on the
/// window's boundary to be present, so that the complement is bounded.
pub fn holes_of(k: &EuclideanComplex) -> Result<HoleSet> {
    if let Some(c) = k.missing_shell_cube() {
        return Err(Error::ShellIncomplete(c.to_string()));
    }
    let n = k.n();
    let mut boxes: Vec<OpenBox> = Vec::new();
    let mut missing: Vec<Vec<i64>> = Vec::new();
    k.for_each_half(|half, member| {
        if !member {
            missing.push(half.to_vec());
        }
    });
    for half in &missing {
        if boxes.iter().any(|b| b.contains_half(half)) {
            continue;
        }
        // x = half/2: ⌈x−1⌉ = ⌈(half−2)/2⌉, ⌊x+1⌋ = ⌊(half+2)/2⌋.
        let mut b = OpenBox {
            lo: half.iter().map(|h| (h - 1).div_euclid(2)).collect(),
            hi: half.iter().map(|h| (h + 2).div_euclid(2)).collect(),
        };
        debug_assert!(outside(k, &b));
        for axis in 0..n {
            loop {
                b.hi[axis] += 1;
                if !outside(k, &b) {
                    b.hi[axis] -= 1;
                    break;
                }
            }
            loop {
                b.lo[axis] -= 1;
                if !outside(k, &b) {
                    b.lo[axis] += 1;
                    break;
                }
            }
        }
        boxes.push(b);
    }
    let kept: Vec<OpenBox> = boxes
        .iter()
        .enumerate()
        .filter(|&(i, b)| {
            !boxes
                .iter()
                .enumerate()
                .any(|(j, o)| j != i && o.contains_box(b) && (o != b || j < i))
        })
        .map(|(_, b)| b.clone())
        .collect();
    HoleSet::new(n, kept)
}

/// No member cube of `k` meets the open box. Positions outside the window
/// count as members, so boxes never leave the window.
fn outside(k: &EuclideanComplex, b: &OpenBox) -> bool {
    let window = k.window();
    if (0..b.lo.len()).any(|i| b.lo[i] < window.lo[i] || b.hi[i] > window.hi[i]) {
        return false;
    }
    let radices: Vec<usize> = (0..b.lo.len())
        .map(|i| (2 * (b.hi[i] - b.lo[i]) - 1) as usize)
        .collect();
    let mut it = HalfIter::new(&radices);
    let mut abs = vec![0; b.lo.len()];
    while let Some(off) = it.next() {
        for i in 0..off.len() {
            abs[i] = 2 * b.lo[i] + 1 + off[i];
        }
        if k.contains_half(&abs) {
            return false;
        }
    }
    true
}
