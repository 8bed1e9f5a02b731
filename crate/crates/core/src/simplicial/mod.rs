//! Finite simplicial complexes on the vertices `1..=n` (`n <= 64`).
//!
//! A simplex is a nonempty vertex subset stored as a bit mask: vertex `v`
//! is bit `v - 1`. Complexes keep every simplex, not only facets.

mod homology;
mod smith;

use std::collections::{BTreeSet, HashSet};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use homology::{homology, HomologyProfile};
pub use smith::elementary_divisors;

/// Bit mask of a simplex.
pub type Simplex = u64;

/// Vertex labels (1-based, increasing) of a simplex mask.
pub fn vertices_of(s: Simplex) -> Vec<usize> {
    (0..64).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Mask of a vertex list; labels must lie in `1..=n`.
pub fn mask_of(vertices: &[usize], n: usize) -> Result<Simplex> {
    let mut mask = 0u64;
    for &v in vertices {
        if v == 0 || v > n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        mask |= 1 << (v - 1);
    }
    Ok(mask)
}

/// Dimension of a simplex (one less than its vertex count).
pub fn simplex_dim(s: Simplex) -> usize {
    s.count_ones() as usize - 1
}

/// Nonempty submasks of `s`, including `s`.
pub(crate) fn nonempty_submasks(s: Simplex) -> impl Iterator<Item = Simplex> {
    let mut next = Some(s);
    std::iter::from_fn(move || {
        let cur = next?;
        if cur == 0 {
            next = None;
            return None;
        }
        next = Some((cur - 1) & s);
        Some(cur)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplicialComplex {
    n: usize,
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    /// The empty complex on `n` potential vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n > 64 {
            return Err(Error::TooManyVertices(n));
        }
        Ok(SimplicialComplex {
            n,
            simplices: BTreeSet::new(),
        })
    }

    /// Downward closure of the given masks.
    pub fn from_simplices(n: usize, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut out = Self::empty(n)?;
        let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for s in simplices {
            if s == 0 {
                continue;
            }
            if s & !limit != 0 {
                return Err(Error::VertexOutOfRange {
                    vertex: 64 - s.leading_zeros() as usize,
                    n,
                });
            }
            if out.simplices.contains(&s) {
                continue;
            }
            out.simplices.extend(nonempty_submasks(s));
        }
        Ok(out)
    }

    pub fn from_facets(n: usize, facets: &[Vec<usize>]) -> Result<Self> {
        let masks = facets
            .iter()
            .map(|f| mask_of(f, n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_simplices(n, masks)
    }

    /// The full simplex `Δ^{n-1}`.
    pub fn full_simplex(n: usize) -> Result<Self> {
        if n > 64 {
            return Err(Error::TooManyVertices(n));
        }
        let top = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self::from_simplices(n, [top])
    }

    /// All nonempty proper subsets of `1..=n`: the sphere `S^{n-2}`.
    pub fn boundary_simplex(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        if n > 20 {
            return Err(Error::TooManyVertices(n));
        }
        let top = (1u64 << n) - 1;
        Self::from_simplices(n, (0..n).map(|i| top & !(1 << i)))
    }

    /// `S` is a simplex iff no `A_r ⊆ S`.
    ///
    /// Singleton non-faces remove vertices entirely.
    pub fn from_minimal_nonfaces(n: usize, nonfaces: &[Vec<usize>]) -> Result<Self> {
        let mut out = Self::empty(n)?;
        let mut forbidden = Vec::with_capacity(nonfaces.len());
        for a in nonfaces {
            let m = mask_of(a, n)?;
            if m == 0 {
                return Err(Error::EmptyNonFace);
            }
            forbidden.push(m);
        }
        let allowed = |s: Simplex| forbidden.iter().all(|&a| a & s != a);
        // Depth-first over simplices, extending by larger vertices only.
        let mut stack: Vec<(Simplex, usize)> = (0..n)
            .map(|v| (1u64 << v, v))
            .filter(|&(s, _)| allowed(s))
            .collect();
        while let Some((s, top)) = stack.pop() {
            out.simplices.insert(s);
            for v in top + 1..n {
                let t = s | 1 << v;
                if allowed(t) {
                    stack.push((t, v));
                }
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.simplices.contains(&s)
    }

    pub fn simplices(&self) -> impl Iterator<Item = Simplex> + '_ {
        self.simplices.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|&s| simplex_dim(s)).max()
    }

    /// Number of simplices in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim().map_or(0, |d| d + 1)];
        for &s in &self.simplices {
            f[simplex_dim(s)] += 1;
        }
        f
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.simplices.contains(&(1 << i)))
            .map(|i| i + 1)
            .collect()
    }

    /// Maximal simplices, in mask order.
    pub fn facets(&self) -> Vec<Simplex> {
        self.simplices
            .iter()
            .copied()
            .filter(|&s| {
                (0..self.n).all(|v| s >> v & 1 == 1 || !self.simplices.contains(&(s | 1 << v)))
            })
            .collect()
    }

    /// Facets as sorted vertex lists, sorted.
    pub fn facet_lists(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.facets().into_iter().map(vertices_of).collect();
        out.sort();
        out
    }

    /// Inclusion-minimal vertex sets that are not simplices.
    pub fn minimal_nonfaces(&self) -> Vec<Simplex> {
        let mut out: BTreeSet<Simplex> = (0..self.n)
            .map(|v| 1u64 << v)
            .filter(|s| !self.simplices.contains(s))
            .collect();
        let vertices: Vec<Simplex> = (0..self.n)
            .map(|v| 1u64 << v)
            .filter(|s| self.simplices.contains(s))
            .collect();
        for &s in &self.simplices {
            for &v in &vertices {
                let t = s | v;
                if t == s || self.simplices.contains(&t) {
                    continue;
                }
                let minimal = (0..self.n)
                    .filter(|&u| t >> u & 1 == 1)
                    .all(|u| self.simplices.contains(&(t & !(1 << u))));
                if minimal {
                    out.insert(t);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Smallest vertex lying in every facet, if any. Such a complex is a cone
    /// and hence contractible.
    pub fn is_cone(&self) -> Option<usize> {
        let common = self
            .facets()
            .into_iter()
            .fold(None, |acc: Option<u64>, f| Some(acc.map_or(f, |a| a & f)))?;
        (common != 0).then(|| common.trailing_zeros() as usize + 1)
    }

    /// Collapses to a single vertex by repeatedly removing a free face
    /// together with the one simplex above it. Each step is a deformation
    /// retraction, so `true` certifies contractibility. `false` proves
    /// nothing.
    pub fn is_collapsible(&self) -> bool {
        let mut live: HashSet<Simplex> = self.simplices.iter().copied().collect();
        let cofaces = |s: Simplex, live: &HashSet<Simplex>| -> Vec<Simplex> {
            (0..self.n)
                .map(|u| s | 1 << u)
                .filter(|&t| t != s && live.contains(&t))
                .collect()
        };
        let mut queue: Vec<Simplex> = self.simplices.iter().copied().collect();
        while let Some(s) = queue.pop() {
            if live.len() == 1 {
                break;
            }
            if !live.contains(&s) {
                continue;
            }
            let above = cofaces(s, &live);
            if above.len() != 1 || !cofaces(above[0], &live).is_empty() {
                continue;
            }
            let t = above[0];
            live.remove(&s);
            live.remove(&t);
            // Faces of the removed pair, and their faces, may have become
            // free.
            let facets_of = |x: Simplex| {
                let mut out = Vec::new();
                let mut rest = x;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    rest &= rest - 1;
                    if x != bit {
                        out.push(x & !bit);
                    }
                }
                out
            };
            for x in facets_of(t) {
                for y in facets_of(x) {
                    if live.contains(&y) {
                        queue.push(y);
                    }
                }
                if live.contains(&x) {
                    queue.push(x);
                }
            }
        }
        live.len() == 1
    }

    /// One-point union: `other`'s vertices are relabelled after this
    /// complex's and its smallest vertex is identified with this complex's
    /// smallest vertex.
    pub fn wedge(&self, other: &SimplicialComplex) -> Result<SimplicialComplex> {
        let (Some(&a), Some(&b)) = (self.vertices().first(), other.vertices().first()) else {
            return Err(Error::EmptyComplex);
        };
        let n = self.n + other.n;
        if n > 64 {
            return Err(Error::TooManyVertices(n));
        }
        let shift = self.n;
        let (from, to) = (1u64 << (shift + b - 1), 1u64 << (a - 1));
        let moved = other.simplices.iter().map(|&s| {
            let t = s << shift;
            if t & from != 0 {
                (t & !from) | to
            } else {
                t
            }
        });
        SimplicialComplex::from_simplices(n, self.simplices.iter().copied().chain(moved))
    }

    /// Every nonempty subset of a simplex is a simplex.
    pub fn is_downward_closed(&self) -> bool {
        self.simplices.iter().all(|&s| {
            (0..self.n)
                .filter(|&u| s >> u & 1 == 1)
                .all(|u| s & !(1 << u) == 0 || self.simplices.contains(&(s & !(1 << u))))
        })
    }

    /// Barycentric subdivision: one vertex per simplex (in mask order), one
    /// simplex per chain under inclusion.
    pub fn order_complex(&self) -> Result<SimplicialComplex> {
        let m = self.simplices.len();
        if m > 64 {
            return Err(Error::TooManyVertices(m));
        }
        let order: Vec<Simplex> = self.simplices.iter().copied().collect();
        // Maximal chains are enough; closure fills in the rest.
        let mut chains: Vec<Simplex> = Vec::new();
        let mut stack: Vec<(usize, Simplex)> = (0..m)
            .filter(|&i| order[i].count_ones() == 1)
            .map(|i| (i, 1u64 << i))
            .collect();
        while let Some((last, chain)) = stack.pop() {
            let mut extended = false;
            for (j, &t) in order.iter().enumerate() {
                let s = order[last];
                if t != s && t & s == s && t.count_ones() == s.count_ones() + 1 {
                    stack.push((j, chain | 1 << j));
                    extended = true;
                }
            }
            if !extended {
                chains.push(chain);
            }
        }
        SimplicialComplex::from_simplices(m, chains)
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SimplicialComplex", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("facets", &self.facet_lists())?;
        st.end()
    }
}

/// Checks closure by brute force over all vertex subsets (small `n` only).
pub fn exhaustive_downward_closed(l: &SimplicialComplex) -> bool {
    let members: HashSet<Simplex> = l.simplices().collect();
    members
        .iter()
        .all(|&s| nonempty_submasks(s).all(|t| members.contains(&t)))
}
