//! Splitting path spaces along a level hyperplane `|x| = ℓ`.

use std::collections::{BTreeSet, HashMap};

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::boxes::box_model;
use super::grid::{reach, Grid};
use super::nerve::{check_endpoints, nerve_model};
use super::PathSpaceModel;
use crate::complex::{ElementaryCube, EuclideanComplex, IntBox};
use crate::error::{Error, Result};

/// Recursion depth used by [`model`].
pub const DEFAULT_DEPTH: usize = 6;

/// One connected piece of `K ∩ {|x| = ℓ}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionComponent {
    /// Grid vertices with coordinate sum `ℓ`, sorted.
    pub vertices: Vec<Vec<i64>>,
    /// Cubes `[k, l]` with `|k| ≤ ℓ ≤ |l|`, sorted.
    pub cubes: Vec<ElementaryCube>,
}

impl SectionComponent {
    /// Every path through this component passes through its only vertex.
    pub fn is_singleton(&self) -> bool {
        self.vertices.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSection {
    pub level: i64,
    /// Ordered by smallest vertex.
    pub components: Vec<SectionComponent>,
}

impl LevelSection {
    pub fn singletons(&self) -> usize {
        self.components.iter().filter(|c| c.is_singleton()).count()
    }
}

fn sum(v: &[i64]) -> i64 {
    v.iter().sum()
}

/// Doubled midpoints of cubes of `k` inside `[a, b]` crossing level `level`.
fn crossing_cells(k: &EuclideanComplex, a: &[i64], b: &[i64], level: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    k.for_each_half(|h, member| {
        if !member
            || h.iter()
                .zip(a)
                .zip(b)
                .any(|((x, l), u)| *x < 2 * l || *x > 2 * u)
        {
            return;
        }
        let lo: i64 = h.iter().map(|x| x.div_euclid(2)).sum();
        let hi: i64 = h.iter().map(|x| x.div_euclid(2) + x.rem_euclid(2)).sum();
        if lo <= level && level <= hi {
            out.push(h.to_vec());
        }
    });
    out
}

fn half_to_cube(h: &[i64]) -> ElementaryCube {
    ElementaryCube {
        lo: h.iter().map(|x| x.div_euclid(2)).collect(),
        hi: h
            .iter()
            .map(|x| x.div_euclid(2) + x.rem_euclid(2))
            .collect(),
    }
}

/// Connected components of the section of `K ∩ [a, b]` at `|x| = level`.
/// Two crossing cubes are joined when one is a facet of the other.
pub fn level_split(k: &EuclideanComplex, a: &[i64], b: &[i64], level: i64) -> Result<LevelSection> {
    check_endpoints(k, a, b)?;
    let (lo, hi) = (sum(a), sum(b));
    if level <= lo || level >= hi {
        return Err(Error::LevelOutOfRange { level, lo, hi });
    }
    let cells = crossing_cells(k, a, b, level);
    let index: HashMap<&[i64], usize> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_slice(), i))
        .collect();
    let mut uf = UnionFind::<usize>::new(cells.len());
    let mut facet = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        for axis in 0..c.len() {
            if c[axis] % 2 == 0 {
                continue;
            }
            for d in [-1, 1] {
                facet.clear();
                facet.extend_from_slice(c);
                facet[axis] += d;
                if let Some(&j) = index.get(facet.as_slice()) {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut groups: HashMap<usize, (BTreeSet<Vec<i64>>, Vec<ElementaryCube>)> = HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        let entry = groups.entry(uf.find(i)).or_default();
        let cube = half_to_cube(c);
        if cube.dim() == 0 && sum(&cube.lo) == level {
            entry.0.insert(cube.lo.clone());
        }
        entry.1.push(cube);
    }
    let mut components: Vec<SectionComponent> = groups
        .into_values()
        .map(|(vertices, mut cubes)| {
            cubes.sort();
            SectionComponent {
                vertices: vertices.into_iter().collect(),
                cubes,
            }
        })
        .collect();
    debug_assert!(components.iter().all(|c| !c.vertices.is_empty()));
    components.sort_by(|x, y| x.vertices[0].cmp(&y.vertices[0]));
    Ok(LevelSection { level, components })
}

/// [`model_with_depth`] with [`DEFAULT_DEPTH`].
pub fn model(k: &EuclideanComplex, a: &[i64], b: &[i64]) -> Result<PathSpaceModel> {
    model_with_depth(k, a, b, DEFAULT_DEPTH)
}

/// Model of `P(K)_a^b`: the nerve model, and where that is `Unknown`, a
/// split at some level `|a| < ℓ < |b|` into a disjoint union over section
/// components. A component with a single vertex `w` contributes
/// `P(K ∩ [a,w]) × P(K ∩ [w,b])`; any other component `C` contributes the
/// path space of the subcomplex `K_C` spanned by the vertices that reach `C`
/// from below or are reached from `C` above. Levels are tried by number of
/// singleton components, then number of components, then level; the first
/// split with no `Unknown` piece wins. In dimension at most 4, when neither
/// works, the complement of `K` in `[a, b]` is covered by open boxes and the
/// nerve of the induced cover of the path space is used.
pub fn model_with_depth(
    k: &EuclideanComplex,
    a: &[i64],
    b: &[i64],
    depth: usize,
) -> Result<PathSpaceModel> {
    check_endpoints(k, a, b)?;
    let k = k.restrict(&IntBox::new(a.to_vec(), b.to_vec())?)?;
    model_rec(&k, a, b, depth)
}

/// The nerve model, retried on the reflected complex (paths run backwards)
/// when it is `Unknown`.
fn nerve_either_way(k: &EuclideanComplex, a: &[i64], b: &[i64]) -> Result<PathSpaceModel> {
    let forward = nerve_model(k, a, b)?;
    if !forward.is_unknown() {
        return Ok(forward);
    }
    let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
    let backward = nerve_model(&k.reflected(), &neg(b), &neg(a))?;
    Ok(if backward.is_unknown() {
        forward
    } else {
        backward
    })
}

fn model_rec(k: &EuclideanComplex, a: &[i64], b: &[i64], depth: usize) -> Result<PathSpaceModel> {
    let nerve = nerve_either_way(k, a, b)?;
    if !nerve.is_unknown() {
        return Ok(nerve);
    }
    if depth == 0 {
        return Ok(box_model(k, a, b).unwrap_or(nerve));
    }
    let mut sections = Vec::new();
    for level in sum(a) + 1..sum(b) {
        sections.push(level_split(k, a, b, level)?);
    }
    sections.sort_by_key(|s| {
        (
            std::cmp::Reverse(s.singletons()),
            std::cmp::Reverse(s.components.len()),
            s.level,
        )
    });
    'levels: for section in &sections {
        let mut pieces = Vec::new();
        let ordered = section
            .components
            .iter()
            .filter(|c| c.is_singleton())
            .chain(section.components.iter().filter(|c| !c.is_singleton()));
        for comp in ordered {
            let piece = if comp.is_singleton() {
                let w = &comp.vertices[0];
                let below = k.restrict(&IntBox::new(a.to_vec(), w.clone())?)?;
                let above = k.restrict(&IntBox::new(w.clone(), b.to_vec())?)?;
                let left = model_rec(&below, a, w, depth - 1)?;
                if left == PathSpaceModel::Empty {
                    continue;
                }
                let right = model_rec(&above, w, b, depth - 1)?;
                PathSpaceModel::product([left, right])
            } else {
                let kc = component_complex(k, a, b, section.level, comp);
                if kc == *k {
                    continue 'levels;
                }
                if !kc.contains_vertex(a) || !kc.contains_vertex(b) {
                    continue;
                }
                let crossing = crossing_cells(&kc, a, b, section.level);
                let own: BTreeSet<&ElementaryCube> = comp.cubes.iter().collect();
                if crossing.iter().any(|h| !own.contains(&half_to_cube(h))) {
                    PathSpaceModel::Unknown {
                        reason: format!(
                            "restriction to a component at level {} is not sound",
                            section.level
                        ),
                        vertex: comp.vertices[0].clone(),
                    }
                } else {
                    model_rec(&kc, a, b, depth - 1)?
                }
            };
            if piece.is_unknown() {
                continue 'levels;
            }
            pieces.push(piece);
        }
        return Ok(PathSpaceModel::disjoint_union(pieces));
    }
    Ok(box_model(k, a, b).unwrap_or(nerve))
}

/// Cubes of `k` all of whose vertices reach `comp` (sum at most `level`) or
/// are reached from it (sum at least `level`).
fn component_complex(
    k: &EuclideanComplex,
    a: &[i64],
    b: &[i64],
    level: i64,
    comp: &SectionComponent,
) -> EuclideanComplex {
    let grid = Grid::new(a, b);
    let back = reach(k, &grid, &comp.vertices, false);
    let fwd = reach(k, &grid, &comp.vertices, true);
    let keep = |v: &[i64]| {
        let i = grid.index(v);
        let s = sum(v);
        (s <= level && back[i]) || (s >= level && fwd[i])
    };
    EuclideanComplex::from_predicate(k.window().clone(), |h| {
        k.contains_half(h) && half_to_cube(h).vertices().iter().all(|v| keep(v))
    })
}
