//! Past links and the vertex-by-vertex nerve model.

use std::collections::{BTreeSet, HashMap};

use petgraph::unionfind::UnionFind;

use super::grid::Grid;
use super::PathSpaceModel;
use crate::complex::EuclideanComplex;
use crate::error::{Error, Result};
use crate::simplicial::{nonempty_submasks, Simplex, SimplicialComplex};

/// Doubled midpoint of `[v − j, v]`.
fn cube_below(v: &[i64], j: Simplex) -> Vec<i64> {
    v.iter()
        .enumerate()
        .map(|(i, x)| 2 * x - (j >> i & 1) as i64)
        .collect()
}

fn fmt_vertex(v: &[i64]) -> String {
    format!("{v:?}")
}

pub(crate) fn check_endpoints(k: &EuclideanComplex, a: &[i64], b: &[i64]) -> Result<()> {
    for v in [a, b] {
        if v.len() != k.n() {
            return Err(Error::DimensionMismatch {
                expected: k.n(),
                got: v.len(),
            });
        }
    }
    if a.iter().zip(b).any(|(x, y)| x > y) {
        return Err(Error::EndpointOrder(fmt_vertex(a), fmt_vertex(b)));
    }
    for v in [a, b] {
        if !k.contains_vertex(v) {
            return Err(Error::NotInComplex(fmt_vertex(v)));
        }
    }
    Ok(())
}

/// `lk⁻_K(v)`: nonempty `j ∈ {0,1}^n` with `[v − j, v] ⊆ K`.
pub fn past_link(k: &EuclideanComplex, v: &[i64]) -> Result<SimplicialComplex> {
    let n = k.n();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    if n > 24 {
        return Err(Error::TooManyVertices(n));
    }
    if !k.contains_vertex(v) {
        return Err(Error::NotInComplex(fmt_vertex(v)));
    }
    let simplices: Vec<Simplex> = (1..1u64 << n)
        .filter(|&j| k.contains_half(&cube_below(v, j)))
        .collect();
    SimplicialComplex::from_simplices(n, simplices)
}

/// Path-space model of `P(K)_a^b` computed vertex by vertex over `[a, b]`.
///
/// For each vertex `v` the effective past link collects the `j` with
/// `[v − j, v] ⊆ K ∩ [a, b]` and nonempty `P(K)_a^{v−j}`. An empty link
/// gives `Empty`. If every predecessor is contractible the model is the link
/// itself. Otherwise path components are tracked: a component of `P(v)` is
/// a connected class of pairs `(j, c)` with `c` a component of `P(v − j)`.
/// Such a class is modelled by the predecessor component that every member
/// maps to, if there is one; when all members are contractible, by its
/// order complex. Anything else is `Unknown` at `v`.
pub fn nerve_model(k: &EuclideanComplex, a: &[i64], b: &[i64]) -> Result<PathSpaceModel> {
    check_endpoints(k, a, b)?;
    let n = k.n();
    if n > 24 {
        return Err(Error::TooManyVertices(n));
    }
    let grid = Grid::new(a, b);
    let mut data: Vec<VertexData> = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let v = grid.vertex(idx);
        let d = if !k.contains_vertex(&v) {
            VertexData::empty()
        } else if idx == 0 {
            VertexData {
                whole: PathSpaceModel::Contractible,
                comps: vec![PathSpaceModel::Contractible],
                into: HashMap::new(),
            }
        } else {
            vertex_model(k, &grid, &data, &v)?
        };
        data.push(d);
    }
    Ok(data.pop().unwrap().whole)
}

/// Path components at a vertex and how predecessors map into them.
struct VertexData {
    whole: PathSpaceModel,
    /// One connected model per component.
    comps: Vec<PathSpaceModel>,
    /// `into[j][c]`: component of `P(v)` receiving component `c` of
    /// `P(v − j)` along the straight segment.
    into: HashMap<Simplex, Vec<usize>>,
}

impl VertexData {
    fn empty() -> Self {
        VertexData {
            whole: PathSpaceModel::Empty,
            comps: Vec::new(),
            into: HashMap::new(),
        }
    }
}

fn vertex_model(
    k: &EuclideanComplex,
    grid: &Grid,
    data: &[VertexData],
    v: &[i64],
) -> Result<VertexData> {
    let n = v.len();
    let support: Simplex = (0..n)
        .filter(|&i| v[i] > grid.lo[i])
        .fold(0, |acc, i| acc | 1 << i);
    let idx = grid.index(v);
    let pred = |j: Simplex| {
        idx - (0..n)
            .filter(|&i| j >> i & 1 == 1)
            .map(|i| grid.stride(i))
            .sum::<usize>()
    };
    let link: BTreeSet<Simplex> = nonempty_submasks(support)
        .filter(|&j| k.contains_half(&cube_below(v, j)) && !data[pred(j)].comps.is_empty())
        .collect();
    if link.is_empty() {
        return Ok(VertexData::empty());
    }
    let complex = SimplicialComplex::from_simplices(n, link.iter().copied())?;
    // Faces of a cube in K are in K, and paths to v − j extend to v − j'
    // for j' ⊆ j, so the link is already closed.
    assert_eq!(
        complex.len(),
        link.len(),
        "effective past link not closed at {v:?}"
    );

    // Objects (j, c) of the category of components over the link.
    let mut objects: Vec<(Simplex, usize)> = Vec::new();
    let mut object_of: HashMap<(Simplex, usize), usize> = HashMap::new();
    for &j in &link {
        for c in 0..data[pred(j)].comps.len() {
            object_of.insert((j, c), objects.len());
            objects.push((j, c));
        }
    }
    // The segment from v − j to v − j0 (j0 ⊊ j), as a map on components.
    let image = |j: Simplex, c: usize, j0: Simplex| -> usize { data[pred(j0)].into[&(j & !j0)][c] };
    let mut uf = UnionFind::<usize>::new(objects.len());
    for (o, &(j, c)) in objects.iter().enumerate() {
        let mut rest = j;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            if j != bit {
                let j0 = j & !bit;
                uf.union(o, object_of[&(j0, image(j, c, j0))]);
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut comp_of_object = vec![0; objects.len()];
    for o in 0..objects.len() {
        let r = uf.find(o);
        let pos = roots.iter().position(|&x| x == r).unwrap_or_else(|| {
            roots.push(r);
            roots.len() - 1
        });
        comp_of_object[o] = pos;
    }
    let mut into: HashMap<Simplex, Vec<usize>> = HashMap::new();
    for (o, &(j, _)) in objects.iter().enumerate() {
        into.entry(j).or_default().push(comp_of_object[o]);
    }

    let all_simple = link
        .iter()
        .all(|&j| data[pred(j)].comps == [PathSpaceModel::Contractible]);
    if all_simple {
        // Each class is a connected subcomplex of the link.
        let comps = (0..roots.len())
            .map(|r| {
                let faces = objects
                    .iter()
                    .enumerate()
                    .filter(|&(o, _)| comp_of_object[o] == r)
                    .map(|(_, &(j, _))| j);
                Ok(PathSpaceModel::complex(SimplicialComplex::from_simplices(
                    n, faces,
                )?))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(VertexData {
            whole: PathSpaceModel::complex(complex),
            comps,
            into,
        });
    }

    let mut comps = Vec::with_capacity(roots.len());
    for r in 0..roots.len() {
        let members: Vec<(Simplex, usize)> = objects
            .iter()
            .enumerate()
            .filter(|&(o, _)| comp_of_object[o] == r)
            .map(|(_, &x)| x)
            .collect();
        // `x → y` when y's direction is a face of x's and x's component maps
        // to y's.
        let arrow = |x: (Simplex, usize), y: (Simplex, usize)| {
            x == y || (y.0 != x.0 && y.0 & x.0 == y.0 && image(x.0, x.1, y.0) == y.1)
        };
        let value = |x: (Simplex, usize)| &data[pred(x.0)].comps[x.1];
        comps.push(reduce_component(&members, arrow, value, v));
    }
    Ok(VertexData {
        whole: PathSpaceModel::disjoint_union(comps.clone()),
        comps,
        into,
    })
}

/// Homotopy colimit over a connected poset of objects carrying connected
/// spaces. Two moves shrink the poset without changing the answer:
///
/// * an object nothing maps into is dropped when the objects it maps to form
///   a contractible poset;
/// * an object mapping nowhere becomes a wedge summand when everything
///   mapping into it is contractible and forms a contractible poset.
///
/// What remains must be a single object or carry only contractible spaces,
/// in which case its order complex is used.
fn reduce_component<'a, T: Copy>(
    members: &[T],
    arrow: impl Fn(T, T) -> bool,
    value: impl Fn(T) -> &'a PathSpaceModel,
    v: &[i64],
) -> PathSpaceModel {
    let unknown = |reason: &str| PathSpaceModel::Unknown {
        reason: reason.into(),
        vertex: v.to_vec(),
    };
    let mut alive: Vec<usize> = (0..members.len()).collect();
    let mut summands: Vec<PathSpaceModel> = Vec::new();
    let contractible = |set: &[T]| !set.is_empty() && poset_contractible(set, &arrow);
    'shrink: while alive.len() > 1 {
        let others = |s: usize, alive: &[usize], into: bool| -> Vec<T> {
            alive
                .iter()
                .filter(|&&x| x != s)
                .filter(|&&x| {
                    if into {
                        arrow(members[x], members[s])
                    } else {
                        arrow(members[s], members[x])
                    }
                })
                .map(|&x| members[x])
                .collect()
        };
        for (pos, &s) in alive.iter().enumerate() {
            if others(s, &alive, true).is_empty() && contractible(&others(s, &alive, false)) {
                alive.remove(pos);
                continue 'shrink;
            }
        }
        for (pos, &s) in alive.iter().enumerate() {
            if *value(members[s]) == PathSpaceModel::Contractible
                || !others(s, &alive, false).is_empty()
            {
                continue;
            }
            let below = others(s, &alive, true);
            if below
                .iter()
                .all(|&x| *value(x) == PathSpaceModel::Contractible)
                && contractible(&below)
            {
                summands.push(value(members[s]).clone());
                alive.remove(pos);
                continue 'shrink;
            }
        }
        break;
    }
    let rest: Vec<T> = alive.iter().map(|&x| members[x]).collect();
    let base = if rest.len() == 1 {
        value(rest[0]).clone()
    } else if let Some(u) = rest.iter().map(|&x| value(x)).find(|m| m.is_unknown()) {
        u.clone()
    } else if rest
        .iter()
        .any(|&x| *value(x) != PathSpaceModel::Contractible)
    {
        return unknown(
            "predecessors are not contractible and the component poset does not reduce",
        );
    } else if rest.len() > 64 {
        return unknown(&format!(
            "component category with {} objects is too large",
            rest.len()
        ));
    } else {
        match order_complex(&rest, &arrow) {
            Ok(l) => PathSpaceModel::complex(l),
            Err(e) => return unknown(&e.to_string()),
        }
    };
    summands.insert(0, base);
    wedge(summands).unwrap_or_else(|| unknown("wedge of pieces that are not simplicial complexes"))
}

/// One-point union of connected models; `None` unless every factor is
/// contractible or a simplicial complex (and the vertex budget allows it).
fn wedge(parts: Vec<PathSpaceModel>) -> Option<PathSpaceModel> {
    if let Some(u) = parts.iter().find(|m| m.is_unknown()) {
        return Some(u.clone());
    }
    let mut acc: Option<SimplicialComplex> = None;
    let mut single = None;
    let mut count = 0;
    for p in parts {
        match p {
            PathSpaceModel::Contractible => {}
            PathSpaceModel::Complex(l) => {
                count += 1;
                acc = Some(match acc {
                    None => l,
                    Some(a) => a.wedge(&l).ok()?,
                });
            }
            other => {
                count += 1;
                single = Some(other);
            }
        }
    }
    match (count, single, acc) {
        (0, _, _) => Some(PathSpaceModel::Contractible),
        (1, Some(m), _) => Some(m),
        (_, None, Some(l)) => Some(PathSpaceModel::complex(l)),
        _ => None,
    }
}

/// A poset with a least or greatest element, or a small one whose order
/// complex collapses to a point.
fn poset_contractible<T: Copy>(set: &[T], arrow: impl Fn(T, T) -> bool) -> bool {
    if set.iter().any(|&x| set.iter().all(|&y| arrow(x, y)))
        || set.iter().any(|&x| set.iter().all(|&y| arrow(y, x)))
    {
        return true;
    }
    set.len() <= 16
        && order_complex(set, &arrow).is_ok_and(|l| l.is_cone().is_some() || l.is_collapsible())
}

/// Order complex of a small category given by objects and an arrow test.
fn order_complex<T: Copy>(
    objects: &[T],
    arrow: &impl Fn(T, T) -> bool,
) -> Result<SimplicialComplex> {
    let m = objects.len();
    let below = |x: usize, y: usize| x != y && arrow(objects[x], objects[y]);
    let mut chains = Vec::new();
    let mut stack: Vec<(usize, Simplex)> = (0..m).map(|i| (i, 1u64 << i)).collect();
    while let Some((last, chain)) = stack.pop() {
        let mut extended = false;
        for next in 0..m {
            if chain >> next & 1 == 0 && below(last, next) {
                stack.push((next, chain | 1 << next));
                extended = true;
            }
        }
        if !extended {
            chains.push(chain);
        }
    }
    SimplicialComplex::from_simplices(m, chains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{
        boundary_box, build_cl, from_holes, EuclideanComplex, HoleSet, IntBox, OpenBox,
    };

    fn sc(n: usize, facets: &[&[usize]]) -> SimplicialComplex {
        let f: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
        SimplicialComplex::from_facets(n, &f).unwrap()
    }

    #[test]
    fn past_link_of_cl() {
        let l = sc(4, &[&[1, 2], &[2, 3, 4], &[1, 4]]);
        let cl = build_cl(&l).unwrap();
        assert_eq!(past_link(&cl, &[1, 1, 1, 1]).unwrap(), l);
    }

    #[test]
    fn past_link_interior_is_full() {
        let k = EuclideanComplex::full(IntBox::cube(3, 0, 2).unwrap());
        assert_eq!(
            past_link(&k, &[1, 1, 1]).unwrap(),
            SimplicialComplex::full_simplex(3).unwrap()
        );
    }

    #[test]
    fn past_link_on_box_surface() {
        let k = boundary_box(3).unwrap();
        let expected = sc(3, &[&[1, 3], &[2, 3]]);
        assert_eq!(past_link(&k, &[2, 2, 1]).unwrap(), expected);
    }

    #[test]
    fn past_link_requires_vertex() {
        let k = boundary_box(2).unwrap();
        assert!(matches!(
            past_link(&k, &[1, 1]),
            Err(Error::NotInComplex(_))
        ));
    }

    #[test]
    fn full_box_is_contractible() {
        for n in 1..=5 {
            let k = EuclideanComplex::full(IntBox::cube(n, 0, 2).unwrap());
            let m = nerve_model(&k, &vec![0; n], &vec![2; n]).unwrap();
            assert_eq!(m, PathSpaceModel::Contractible);
        }
    }

    #[test]
    fn boundary_box_is_sphere() {
        for n in 2..=5 {
            let m = nerve_model(&boundary_box(n).unwrap(), &vec![0; n], &vec![2; n]).unwrap();
            assert_eq!(
                m,
                PathSpaceModel::Complex(SimplicialComplex::boundary_simplex(n).unwrap()),
                "n={n}"
            );
        }
    }

    #[test]
    fn cl_gives_l() {
        let l = sc(3, &[&[1], &[2, 3]]);
        let m = nerve_model(&build_cl(&l).unwrap(), &[0, 0, 0], &[1, 1, 1]).unwrap();
        assert_eq!(m, PathSpaceModel::Complex(l));
    }

    #[test]
    fn cl_with_top_box_is_unknown() {
        let l = SimplicialComplex::boundary_simplex(3).unwrap();
        let w = IntBox::cube(3, 0, 2).unwrap();
        let k = build_cl(&l)
            .unwrap()
            .embed(&w)
            .unwrap()
            .union(
                &EuclideanComplex::full(IntBox::cube(3, 1, 2).unwrap())
                    .embed(&w)
                    .unwrap(),
            )
            .unwrap();
        let m = nerve_model(&k, &[0, 0, 0], &[2, 2, 2]).unwrap();
        assert!(m.is_unknown());
    }

    #[test]
    fn endpoint_errors() {
        let k = EuclideanComplex::full(IntBox::cube(2, 0, 2).unwrap());
        assert!(matches!(
            nerve_model(&k, &[2, 0], &[0, 2]),
            Err(Error::EndpointOrder(..))
        ));
        assert!(matches!(
            nerve_model(&k, &[0, 0], &[3, 3]),
            Err(Error::NotInComplex(_))
        ));
    }

    #[test]
    fn circle_passes_through_a_zigzag() {
        // P(2,2,3) is a circle; at (2,3,3) it is glued to contractible
        // neighbours along a path of the component poset.
        let holes = vec![
            OpenBox::new(vec![0, 2, 1], vec![3, 3, 3]).unwrap(),
            OpenBox::new(vec![2, 2, 0], vec![3, 3, 3]).unwrap(),
            OpenBox::new(vec![1, 1, 2], vec![2, 2, 3]).unwrap(),
        ];
        let k = from_holes(
            &HoleSet::new(3, holes).unwrap(),
            &IntBox::cube(3, 0, 3).unwrap(),
        )
        .unwrap();
        for v in [[2, 2, 3], [2, 3, 3]] {
            let m = nerve_model(&k, &[0, 0, 0], &v).unwrap();
            let h = crate::pathspace::homology_of_model(&m).unwrap();
            assert_eq!(h.betti, vec![1, 1], "at {v:?}");
        }
    }
}
