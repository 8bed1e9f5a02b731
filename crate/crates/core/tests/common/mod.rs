#![allow(dead_code)]

use proptest::prelude::*;
use pvtopo::{HoleSet, OpenBox, PVOperation, PVProcess, ResourceId, SimplicialComplex};

/// Operation with each of `resources` acquired and released 0..=2 times.
pub fn operation(resources: u32) -> impl Strategy<Value = PVOperation> {
    proptest::collection::vec((0u32..=2, 0u32..=2), resources as usize).prop_map(|counts| {
        counts
            .into_iter()
            .enumerate()
            .fold(PVOperation::empty(), |op, (r, (p, v))| {
                op.with_acquire(ResourceId(r as u32), p)
                    .with_release(ResourceId(r as u32), v)
            })
    })
}

pub fn process(max_ops: usize, resources: u32) -> impl Strategy<Value = PVProcess> {
    proptest::collection::vec(operation(resources), 0..=max_ops).prop_map(PVProcess::new)
}

/// Up to `max_holes` boxes with corners in `[0, size]^n`.
pub fn hole_set(n: usize, size: i64, max_holes: usize) -> impl Strategy<Value = HoleSet> {
    let hole = proptest::collection::vec((0..size, 1..=size), n).prop_map(move |axes| {
        let lo: Vec<i64> = axes.iter().map(|(l, _)| *l).collect();
        let hi: Vec<i64> = axes.iter().map(|(l, e)| (l + e).min(size)).collect();
        OpenBox::new(lo, hi).unwrap()
    });
    proptest::collection::vec(hole, 0..=max_holes)
        .prop_map(move |holes| HoleSet::new(n, holes).unwrap())
}

/// Complex on `n` vertices generated by up to six random facets.
pub fn simplicial(n: usize) -> impl Strategy<Value = SimplicialComplex> {
    proptest::collection::vec(proptest::collection::btree_set(1..=n, 1..=n), 1..=6).prop_map(
        move |facets| {
            let facets: Vec<Vec<usize>> = facets
                .into_iter()
                .map(|f| f.into_iter().collect())
                .collect();
            SimplicialComplex::from_facets(n, &facets).unwrap()
        },
    )
}

/// Random minimal-non-face list, as accepted by `from_minimal_nonfaces`.
pub fn nonfaces(n: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    proptest::collection::vec(proptest::collection::btree_set(1..=n, 1..=n), 1..=5)
        .prop_map(|sets| sets.into_iter().map(|s| s.into_iter().collect()).collect())
}
