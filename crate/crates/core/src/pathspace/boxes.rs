//! Path spaces of a box with open boxes removed, through the cover by
//! "pass hole `i` in direction `j`" pieces.
//!
//! For a hole `R = (lo, hi)` and an axis `j` let `R_j` be `R` extended
//! downwards along every axis except `j`. Every path from the bottom corner
//! to the top corner that misses `R` misses some `R_j`, and the paths
//! missing a prescribed family of `R_j` form an empty or contractible set.
//! The nerve of the cover is a prod-simplicial complex with one cell per
//! "alive" 0/1 matrix (rows are holes, columns axes, no zero row); it is
//! triangulated here by chains of one-hot matrices in the product order.

use std::collections::{BTreeSet, HashMap, VecDeque};

use petgraph::unionfind::UnionFind;

use super::PathSpaceModel;
use crate::complex::EuclideanComplex;
use crate::simplicial::SimplicialComplex;

/// Give up above these sizes.
const MAX_DIM: usize = 4;
const MAX_HOLES: usize = 8;
const MAX_POINTS: usize = 4096;
const MAX_CHAINS: usize = 200_000;

/// Model of `P(K)_a^b` for `K` restricted to `[a, b]`, or `None` when the
/// instance is too large for the cover.
pub(crate) fn box_model(k: &EuclideanComplex, a: &[i64], b: &[i64]) -> Option<PathSpaceModel> {
    let n = a.len();
    if n > MAX_DIM {
        return None;
    }
    let holes = hole_boxes(k, a, b);
    if holes.is_empty() {
        return Some(PathSpaceModel::Contractible);
    }
    if holes.len() > MAX_HOLES || n.pow(holes.len() as u32) > MAX_POINTS {
        return None;
    }
    let size: Vec<i64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let holes: Vec<(Vec<i64>, Vec<i64>)> = holes
        .into_iter()
        .map(|(lo, hi)| {
            (
                lo.iter().zip(a).map(|(x, o)| x - o).collect(),
                hi.iter().zip(a).map(|(x, o)| x - o).collect(),
            )
        })
        .collect();
    let mut cover = Cover {
        holes,
        size,
        memo: HashMap::new(),
    };

    // One-hot matrices, stored as the chosen axis per hole.
    let l = cover.holes.len();
    let mut points: Vec<Vec<u8>> = Vec::new();
    let mut f = vec![0u8; l];
    loop {
        if cover.alive(&f.iter().map(|&j| 1u16 << j).collect::<Vec<_>>()) {
            points.push(f.clone());
        }
        let mut i = 0;
        while i < l && f[i] as usize == n - 1 {
            f[i] = 0;
            i += 1;
        }
        if i == l {
            break;
        }
        f[i] += 1;
    }
    if points.is_empty() {
        return Some(PathSpaceModel::Empty);
    }
    let leq = |x: &[u8], y: &[u8]| x.iter().zip(y).all(|(p, q)| p <= q);
    let union = |chain: &[usize], extra: usize| -> Vec<u16> {
        let mut rows = vec![0u16; l];
        for &v in chain.iter().chain([&extra]) {
            for (r, &j) in rows.iter_mut().zip(&points[v]) {
                *r |= 1 << j;
            }
        }
        rows
    };

    // Facets: chains with alive union that admit no further vertex.
    let mut facets: Vec<Vec<usize>> = Vec::new();
    let mut visited = 0usize;
    let mut stack: Vec<Vec<usize>> = (0..points.len()).map(|v| vec![v]).collect();
    while let Some(chain) = stack.pop() {
        visited += 1;
        if visited > MAX_CHAINS {
            return None;
        }
        let last = *chain.last().unwrap();
        for g in 0..points.len() {
            if g != last && leq(&points[last], &points[g]) && cover.alive(&union(&chain, g)) {
                let mut next = chain.clone();
                next.push(g);
                stack.push(next);
            }
        }
        let maximal = (0..points.len()).all(|g| {
            chain.contains(&g)
                || !chain
                    .iter()
                    .all(|&c| leq(&points[c], &points[g]) || leq(&points[g], &points[c]))
                || !cover.alive(&union(&chain, g))
        });
        if maximal {
            let mut s = chain;
            s.sort_unstable();
            facets.push(s);
        }
    }
    facets.sort();
    facets.dedup();

    let mut uf = UnionFind::<usize>::new(points.len());
    for f in &facets {
        for w in f.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut groups: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
    for f in facets {
        let root = uf.find(f[0]);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, fs)) => fs.push(f),
            None => groups.push((root, vec![f])),
        }
    }
    let mut parts = Vec::with_capacity(groups.len());
    for (_, fs) in groups {
        parts.push(component_model(strong_collapse(fs))?);
    }
    Some(PathSpaceModel::disjoint_union(parts))
}

struct Cover {
    holes: Vec<(Vec<i64>, Vec<i64>)>,
    size: Vec<i64>,
    memo: HashMap<Vec<u16>, bool>,
}

impl Cover {
    /// Some edge path from `0` to `size` avoids `R_j` for every `j` in
    /// `rows[i]`, for every hole `i`.
    fn alive(&mut self, rows: &[u16]) -> bool {
        if let Some(&x) = self.memo.get(rows) {
            return x;
        }
        let x = self.search(rows);
        self.memo.insert(rows.to_vec(), x);
        x
    }

    /// The cell with corner `lo` (extended by one along `axis` if given)
    /// meets some chosen `R_j`.
    fn blocked(&self, rows: &[u16], lo: &[i64], axis: Option<usize>) -> bool {
        self.holes.iter().zip(rows).any(|((hl, hh), &mask)| {
            (0..lo.len()).filter(|&j| mask >> j & 1 == 1).any(|j| {
                (0..lo.len()).all(|m| {
                    let top = lo[m] + i64::from(axis == Some(m));
                    if m == j {
                        lo[m] < hh[m] && top > hl[m]
                    } else {
                        lo[m] < hh[m]
                    }
                })
            })
        })
    }

    fn search(&self, rows: &[u16]) -> bool {
        let n = self.size.len();
        let start = vec![0i64; n];
        if self.blocked(rows, &start, None) {
            return false;
        }
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            if v == self.size {
                return true;
            }
            for axis in 0..n {
                if v[axis] < self.size[axis] && !self.blocked(rows, &v, Some(axis)) {
                    let mut w = v.clone();
                    w[axis] += 1;
                    if seen.insert(w.clone()) {
                        queue.push_back(w);
                    }
                }
            }
        }
        false
    }
}

/// Maximal open boxes covering the part of `[a, b]` outside `k`. A box may
/// stick out of `[a, b]` by one unit, which no path from `a` to `b` sees.
fn hole_boxes(k: &EuclideanComplex, a: &[i64], b: &[i64]) -> Vec<(Vec<i64>, Vec<i64>)> {
    let n = a.len();
    let mut missing: Vec<Vec<i64>> = Vec::new();
    let mut h: Vec<i64> = a.iter().map(|x| 2 * x).collect();
    loop {
        if !k.contains_half(&h) {
            missing.push(h.clone());
        }
        let mut i = 0;
        while i < n && h[i] == 2 * b[i] {
            h[i] = 2 * a[i];
            i += 1;
        }
        if i == n {
            break;
        }
        h[i] += 1;
    }
    // Every window cell meeting the open box lies outside `k`.
    let clear = |lo: &[i64], hi: &[i64]| -> bool {
        let from: Vec<i64> = (0..n).map(|i| (2 * lo[i] + 1).max(2 * a[i])).collect();
        let to: Vec<i64> = (0..n).map(|i| (2 * hi[i] - 1).min(2 * b[i])).collect();
        if from.iter().zip(&to).any(|(f, t)| f > t) {
            return true;
        }
        let mut h = from.clone();
        loop {
            if k.contains_half(&h) {
                return false;
            }
            let mut i = 0;
            while i < n && h[i] == to[i] {
                h[i] = from[i];
                i += 1;
            }
            if i == n {
                return true;
            }
            h[i] += 1;
        }
    };
    let inside = |h: &[i64], lo: &[i64], hi: &[i64]| {
        (0..n).all(|i| {
            let x = h[i].div_euclid(2);
            if h[i] % 2 == 0 {
                lo[i] < x && x < hi[i]
            } else {
                lo[i] <= x && x < hi[i]
            }
        })
    };
    let mut boxes: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for c in &missing {
        if boxes.iter().any(|(lo, hi)| inside(c, lo, hi)) {
            continue;
        }
        let mut lo: Vec<i64> = c
            .iter()
            .map(|&x| x.div_euclid(2) - i64::from(x % 2 == 0))
            .collect();
        let mut hi: Vec<i64> = c.iter().map(|&x| x.div_euclid(2) + 1).collect();
        for i in 0..n {
            while hi[i] <= b[i] {
                hi[i] += 1;
                if !clear(&lo, &hi) {
                    hi[i] -= 1;
                    break;
                }
            }
            while lo[i] >= a[i] {
                lo[i] -= 1;
                if !clear(&lo, &hi) {
                    lo[i] += 1;
                    break;
                }
            }
        }
        boxes.push((lo, hi));
    }
    let contains = |x: &(Vec<i64>, Vec<i64>), y: &(Vec<i64>, Vec<i64>)| {
        (0..n).all(|i| x.0[i] <= y.0[i] && y.1[i] <= x.1[i])
    };
    let mut kept: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for (i, x) in boxes.iter().enumerate() {
        let dominated = boxes
            .iter()
            .enumerate()
            .any(|(j, y)| j != i && contains(y, x) && (x != y || j < i));
        if !dominated {
            kept.push(x.clone());
        }
    }
    kept
}

/// Removes dominated vertices (every facet through `v` also contains some
/// `w ≠ v`) until none is left. Each removal is a deformation retraction.
fn strong_collapse(mut facets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let vertices: BTreeSet<usize> = facets.iter().flatten().copied().collect();
        if vertices.len() <= 1 {
            return facets;
        }
        let dominated = vertices.iter().copied().find(|&v| {
            let mut through = facets.iter().filter(|f| f.contains(&v));
            let first = through.next().unwrap();
            let mut common: BTreeSet<usize> = first.iter().copied().filter(|&w| w != v).collect();
            for f in through {
                common.retain(|w| f.contains(w));
            }
            !common.is_empty()
        });
        let Some(v) = dominated else {
            return facets;
        };
        for f in facets.iter_mut() {
            f.retain(|&w| w != v);
        }
        facets.retain(|f| !f.is_empty());
        facets.sort();
        facets.dedup();
        let all = facets.clone();
        facets.retain(|f| {
            !all.iter()
                .any(|g| g != f && f.iter().all(|x| g.contains(x)))
        });
    }
}

fn component_model(facets: Vec<Vec<usize>>) -> Option<PathSpaceModel> {
    let vertices: Vec<usize> = facets
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if vertices.len() == 1 {
        return Some(PathSpaceModel::Contractible);
    }
    if vertices.len() > 64 {
        return None;
    }
    let relabelled: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| {
            f.iter()
                .map(|v| vertices.binary_search(v).unwrap() + 1)
                .collect()
        })
        .collect();
    let l = SimplicialComplex::from_facets(vertices.len(), &relabelled).ok()?;
    Some(PathSpaceModel::complex(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{boundary_box, from_holes, HoleSet, IntBox, OpenBox};
    use crate::pathspace::homology_of_model;

    #[test]
    fn swiss_flag_two_points() {
        let h = HoleSet::new(2, vec![OpenBox::new(vec![1, 1], vec![2, 2]).unwrap()]).unwrap();
        let k = from_holes(&h, &IntBox::cube(2, 0, 3).unwrap()).unwrap();
        assert_eq!(
            box_model(&k, &[0, 0], &[3, 3]),
            Some(PathSpaceModel::DisjointUnion(
                vec![PathSpaceModel::Contractible; 2]
            ))
        );
    }

    #[test]
    fn boundary_box_is_a_sphere() {
        for n in 2..=4 {
            let m = box_model(&boundary_box(n).unwrap(), &vec![0; n], &vec![2; n]).unwrap();
            let h = homology_of_model(&m).unwrap();
            for d in 0..=n {
                let expected = usize::from(d == 0) + usize::from(d == n - 2);
                assert_eq!(h.betti(d), expected, "n={n} degree {d}");
            }
        }
    }

    #[test]
    fn full_box_is_contractible() {
        let k = EuclideanComplex::full(IntBox::cube(3, 0, 2).unwrap());
        assert_eq!(
            box_model(&k, &[0; 3], &[2; 3]),
            Some(PathSpaceModel::Contractible)
        );
    }

    #[test]
    fn hole_boxes_cover_the_complement() {
        let h = HoleSet::new(
            2,
            vec![
                OpenBox::new(vec![1, 1], vec![3, 2]).unwrap(),
                OpenBox::new(vec![2, 0], vec![3, 4]).unwrap(),
            ],
        )
        .unwrap();
        let k = from_holes(&h, &IntBox::cube(2, 0, 4).unwrap()).unwrap();
        let mut boxes = hole_boxes(&k, &[0, 0], &[4, 4]);
        boxes.sort();
        assert_eq!(
            boxes,
            vec![(vec![1, 1], vec![3, 2]), (vec![2, 0], vec![3, 4])]
        );
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(300))]
        #[test]
        fn agrees_with_nerve_where_known(
            n in 2usize..=3,
            size in 2i64..=4,
            raw in proptest::collection::vec((proptest::collection::vec(0i64..4, 3), proptest::collection::vec(1i64..=4, 3)), 0..5),
        ) {
            let holes: Vec<OpenBox> = raw
                .iter()
                .map(|(lo, ext)| {
                    let lo: Vec<i64> = lo[..n].iter().map(|x| x % size).collect();
                    let hi = lo.iter().zip(ext).map(|(l, e)| (l + e).min(size)).collect();
                    OpenBox::new(lo, hi).unwrap()
                })
                .collect();
            let k = from_holes(&HoleSet::new(n, holes).unwrap(), &IntBox::cube(n, 0, size).unwrap()).unwrap();
            let (a, b) = (vec![0; n], vec![size; n]);
            proptest::prop_assume!(k.contains_vertex(&a) && k.contains_vertex(&b));
            let nerve = crate::pathspace::nerve_model(&k, &a, &b).unwrap();
            if let (Some(x), Some(m)) = (homology_of_model(&nerve), box_model(&k, &a, &b)) {
                proptest::prop_assert_eq!(Some(x), homology_of_model(&m));
            }
        }
    }
}
