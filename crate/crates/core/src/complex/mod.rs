//! Euclidean cubical complexes inside an explicit integer window.
//!
//! Every elementary cube `[k, l]` (with `l - k ∈ {0,1}^n`) is addressed by its
//! doubled midpoint `k + l`. Relative to the window's lower corner these
//! "half coordinates" run over `0..=2·width`, so a complex is a bit per
//! half-coordinate vector.

mod constructions;
mod holes;
mod program;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use constructions::{
    boundary_box, build_cl, build_kl, build_ql, cone, guard_resource_name, u_l_holes,
    ConeDirection, KlConstruction,
};
pub use holes::{from_holes, holes_of};
pub use program::{compile_program, compile_program_named, default_window, state_space};

/// Closed integer box `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl IntBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::InvalidBox(format!("{lo:?} is not <= {hi:?}")));
        }
        Ok(IntBox { lo, hi })
    }

    /// `[lo·1, hi·1]` in dimension `n`.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Result<Self> {
        IntBox::new(vec![lo; n], vec![hi; n])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains_point(&self, x: &[i64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(&self.lo)
                .zip(&self.hi)
                .all(|((v, a), b)| a <= v && v <= b)
    }

    pub fn contains_box(&self, other: &IntBox) -> bool {
        self.contains_point(&other.lo) && self.contains_point(&other.hi)
    }

    /// Number of half-coordinate positions along each axis.
    fn radices(&self) -> Vec<usize> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (2 * (b - a) + 1) as usize)
            .collect()
    }
}

impl fmt::Display for IntBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// `[lo, hi]` with `hi - lo ∈ {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementaryCube {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl ElementaryCube {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| b - a != 0 && b - a != 1) {
            return Err(Error::InvalidCube(format!("[{lo:?}, {hi:?}]")));
        }
        Ok(ElementaryCube { lo, hi })
    }

    pub fn vertex(v: Vec<i64>) -> Self {
        ElementaryCube {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn dim(&self) -> usize {
        self.lo.iter().zip(&self.hi).filter(|(a, b)| a != b).count()
    }

    /// Corner vertices.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let free: Vec<usize> = (0..self.n())
            .filter(|&i| self.lo[i] != self.hi[i])
            .collect();
        (0..1u64 << free.len())
            .map(|bits| {
                let mut v = self.lo.clone();
                for (k, &i) in free.iter().enumerate() {
                    v[i] += (bits >> k & 1) as i64;
                }
                v
            })
            .collect()
    }
}

impl fmt::Display for ElementaryCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// Open integer box `(lo, hi)` with `lo < hi` in every coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpenBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl OpenBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(Error::InvalidBox(format!(
                "open box ({lo:?}, {hi:?}) is empty"
            )));
        }
        Ok(OpenBox { lo, hi })
    }

    /// The cube avoids this open box.
    pub fn misses(&self, c: &ElementaryCube) -> bool {
        (0..self.lo.len()).any(|i| c.hi[i] <= self.lo[i] || c.lo[i] >= self.hi[i])
    }

    pub fn contains_box(&self, other: &OpenBox) -> bool {
        (0..self.lo.len()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    /// Open box holds the point `half / 2`.
    fn contains_half(&self, half: &[i64]) -> bool {
        (0..self.lo.len()).all(|i| 2 * self.lo[i] < half[i] && half[i] < 2 * self.hi[i])
    }
}

impl fmt::Display for OpenBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.lo, self.hi)
    }
}

/// A complex given by its complement: `ℝ^n ∖ ⋃ holes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoleSet {
    n: usize,
    holes: Vec<OpenBox>,
}

impl HoleSet {
    /// Duplicates are dropped, first occurrence order kept.
    pub fn new(n: usize, holes: Vec<OpenBox>) -> Result<Self> {
        let mut out: Vec<OpenBox> = Vec::with_capacity(holes.len());
        for h in holes {
            if h.lo.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: h.lo.len(),
                });
            }
            if !out.contains(&h) {
                out.push(h);
            }
        }
        Ok(HoleSet { n, holes: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn holes(&self) -> &[OpenBox] {
        &self.holes
    }

    pub fn len(&self) -> usize {
        self.holes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.holes.is_empty()
    }

    /// Smallest closed box containing every hole.
    pub fn bounding_box(&self) -> Option<IntBox> {
        let first = self.holes.first()?;
        let mut lo = first.lo.clone();
        let mut hi = first.hi.clone();
        for h in &self.holes[1..] {
            for i in 0..self.n {
                lo[i] = lo[i].min(h.lo[i]);
                hi[i] = hi[i].max(h.hi[i]);
            }
        }
        Some(IntBox { lo, hi })
    }
}

/// Membership of elementary cubes.
pub trait CubeMembership {
    fn ambient_dim(&self) -> usize;
    fn contains_cube(&self, c: &ElementaryCube) -> bool;

    fn cube_in(&self, c: &ElementaryCube) -> Result<bool> {
        if c.n() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: c.n(),
            });
        }
        Ok(self.contains_cube(c))
    }
}

impl CubeMembership for HoleSet {
    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn contains_cube(&self, c: &ElementaryCube) -> bool {
        self.holes.iter().all(|h| h.misses(c))
    }
}

impl CubeMembership for EuclideanComplex {
    fn ambient_dim(&self) -> usize {
        self.window.dim()
    }

    fn contains_cube(&self, c: &ElementaryCube) -> bool {
        self.contains(c)
    }
}

/// Face-closed set of elementary cubes inside `window`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EuclideanComplex {
    window: IntBox,
    radices: Vec<usize>,
    cells: Vec<bool>,
}

impl EuclideanComplex {
    pub fn empty(window: IntBox) -> Self {
        let radices = window.radices();
        let size = radices.iter().product();
        EuclideanComplex {
            window,
            radices,
            cells: vec![false; size],
        }
    }

    /// Every cube of the window.
    pub fn full(window: IntBox) -> Self {
        let mut k = Self::empty(window);
        k.cells.iter_mut().for_each(|c| *c = true);
        k
    }

    /// Union of the given cubes (with all their faces).
    pub fn from_cubes<'a>(
        window: IntBox,
        cubes: impl IntoIterator<Item = &'a ElementaryCube>,
    ) -> Result<Self> {
        let mut k = Self::empty(window);
        for c in cubes {
            let idx = k
                .index_of(c)
                .ok_or_else(|| Error::InvalidCube(format!("{c} outside window {}", k.window)))?;
            k.cells[idx] = true;
        }
        k.close_faces();
        Ok(k)
    }

    /// Cubes of the window whose doubled midpoint is accepted by `keep`. The
    /// caller guarantees the predicate is face-closed.
    pub(crate) fn from_predicate(window: IntBox, mut keep: impl FnMut(&[i64]) -> bool) -> Self {
        let mut k = Self::empty(window);
        let mut cells = std::mem::take(&mut k.cells);
        let lo2: Vec<i64> = k.window.lo.iter().map(|x| 2 * x).collect();
        let mut it = HalfIter::new(&k.radices);
        let mut abs = vec![0; k.n()];
        let mut idx = 0;
        while let Some(h) = it.next() {
            for i in 0..h.len() {
                abs[i] = h[i] + lo2[i];
            }
            cells[idx] = keep(&abs);
            idx += 1;
        }
        k.cells = cells;
        k
    }

    pub fn window(&self) -> &IntBox {
        &self.window
    }

    pub fn n(&self) -> usize {
        self.window.dim()
    }

    pub fn len(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.cells.iter().any(|&c| c)
    }

    /// Number of window positions (members or not).
    pub fn window_size(&self) -> usize {
        self.cells.len()
    }

    fn index_of_half(&self, half: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for i in 0..self.n() {
            let h = half[i] - 2 * self.window.lo[i];
            if h < 0 || h as usize >= self.radices[i] {
                return None;
            }
            idx = idx * self.radices[i] + h as usize;
        }
        Some(idx)
    }

    fn index_of(&self, c: &ElementaryCube) -> Option<usize> {
        if c.n() != self.n() {
            return None;
        }
        let half: Vec<i64> = c.lo.iter().zip(&c.hi).map(|(a, b)| a + b).collect();
        self.index_of_half(&half)
    }

    /// Doubled midpoints of the window position `idx`.
    fn half_of(&self, mut idx: usize) -> Vec<i64> {
        let mut half = vec![0; self.n()];
        for i in (0..self.n()).rev() {
            half[i] = (idx % self.radices[i]) as i64 + 2 * self.window.lo[i];
            idx /= self.radices[i];
        }
        half
    }

    pub fn contains(&self, c: &ElementaryCube) -> bool {
        self.index_of(c).is_some_and(|i| self.cells[i])
    }

    pub fn contains_vertex(&self, v: &[i64]) -> bool {
        v.len() == self.n() && self.contains_half(&v.iter().map(|x| 2 * x).collect::<Vec<_>>())
    }

    /// Membership by doubled midpoint; false outside the window.
    pub fn contains_half(&self, half: &[i64]) -> bool {
        self.index_of_half(half).is_some_and(|i| self.cells[i])
    }

    /// All member cubes in window order.
    pub fn cubes(&self) -> impl Iterator<Item = ElementaryCube> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(i, _)| cube_from_half(&self.half_of(i)))
    }

    /// Member count per cube dimension `0..=n`.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n() + 1];
        let mut it = HalfIter::new(&self.radices);
        let mut idx = 0;
        while let Some(h) = it.next() {
            if self.cells[idx] {
                counts[h.iter().filter(|&&x| x % 2 == 1).count()] += 1;
            }
            idx += 1;
        }
        counts
    }

    fn close_faces(&mut self) {
        // Facets of d-cubes are marked before (d-1)-cubes are visited.
        for d in (1..=self.n()).rev() {
            let mut it = HalfIter::new(&self.radices);
            let mut idx = 0;
            let mut marks = Vec::new();
            while let Some(h) = it.next() {
                if self.cells[idx] && h.iter().filter(|&&x| x % 2 == 1).count() == d {
                    for (i, &x) in h.iter().enumerate() {
                        if x % 2 == 1 {
                            let stride: usize = self.radices[i + 1..].iter().product();
                            marks.push(idx - stride);
                            marks.push(idx + stride);
                        }
                    }
                }
                idx += 1;
            }
            for m in marks {
                self.cells[m] = true;
            }
        }
    }

    /// Every facet of every member is a member.
    pub fn is_face_closed(&self) -> bool {
        self.first_open_face().is_none()
    }

    fn first_open_face(&self) -> Option<ElementaryCube> {
        let mut it = HalfIter::new(&self.radices);
        let mut idx = 0;
        while let Some(h) = it.next() {
            if self.cells[idx] {
                for (i, &x) in h.iter().enumerate() {
                    if x % 2 == 1 {
                        let stride: usize = self.radices[i + 1..].iter().product();
                        if !self.cells[idx - stride] || !self.cells[idx + stride] {
                            return Some(cube_from_half(&self.half_of(idx)));
                        }
                    }
                }
            }
            idx += 1;
        }
        None
    }

    pub fn check_face_closed(&self) -> Result<()> {
        match self.first_open_face() {
            Some(c) => Err(Error::NotFaceClosed(c.to_string())),
            None => Ok(()),
        }
    }

    /// Same cubes, restricted to a sub-window.
    pub fn restrict(&self, window: &IntBox) -> Result<EuclideanComplex> {
        if !self.window.contains_box(window) {
            return Err(Error::InvalidBox(format!(
                "{window} is not inside {}",
                self.window
            )));
        }
        Ok(EuclideanComplex::from_predicate(window.clone(), |h| {
            self.contains_half(h)
        }))
    }

    /// Same cubes in a larger window.
    pub fn embed(&self, window: &IntBox) -> Result<EuclideanComplex> {
        if !window.contains_box(&self.window) {
            return Err(Error::InvalidBox(format!(
                "{window} does not contain {}",
                self.window
            )));
        }
        Ok(EuclideanComplex::from_predicate(window.clone(), |h| {
            self.contains_half(h)
        }))
    }

    /// Union of two complexes over the same window.
    pub fn union(&self, other: &EuclideanComplex) -> Result<EuclideanComplex> {
        if self.window != other.window {
            return Err(Error::InvalidBox(format!(
                "windows differ: {} vs {}",
                self.window, other.window
            )));
        }
        let mut out = self.clone();
        for (a, &b) in out.cells.iter_mut().zip(&other.cells) {
            *a |= b;
        }
        Ok(out)
    }

    /// First cube (in window order) where the two complexes differ.
    pub fn first_difference(&self, other: &EuclideanComplex) -> Option<ElementaryCube> {
        if self.window != other.window {
            return Some(ElementaryCube::vertex(self.window.lo.clone()));
        }
        self.cells
            .iter()
            .zip(&other.cells)
            .position(|(a, b)| a != b)
            .map(|i| cube_from_half(&self.half_of(i)))
    }

    /// Cubes touching the window boundary (some coordinate pinned to the
    /// window's lower or upper face) missing from the complex.
    pub fn missing_shell_cube(&self) -> Option<ElementaryCube> {
        let lo2: Vec<i64> = self.window.lo.iter().map(|x| 2 * x).collect();
        let hi2: Vec<i64> = self.window.hi.iter().map(|x| 2 * x).collect();
        let mut it = HalfIter::new(&self.radices);
        let mut idx = 0;
        while let Some(h) = it.next() {
            if !self.cells[idx] {
                let abs: Vec<i64> = h.iter().zip(&lo2).map(|(x, l)| x + l).collect();
                if abs
                    .iter()
                    .zip(&lo2)
                    .zip(&hi2)
                    .any(|((x, l), u)| x == l || x == u)
                {
                    return Some(cube_from_half(&abs));
                }
            }
            idx += 1;
        }
        None
    }

    /// Image under `x ↦ −x`, which reverses every directed path.
    pub fn reflected(&self) -> EuclideanComplex {
        let window = IntBox {
            lo: self.window.hi.iter().map(|x| -x).collect(),
            hi: self.window.lo.iter().map(|x| -x).collect(),
        };
        let mut neg = vec![0; self.n()];
        EuclideanComplex::from_predicate(window, |h| {
            for (d, x) in neg.iter_mut().zip(h) {
                *d = -x;
            }
            self.contains_half(&neg)
        })
    }

    /// Iterates member positions as doubled absolute midpoints.
    pub(crate) fn for_each_half(&self, mut f: impl FnMut(&[i64], bool)) {
        let lo2: Vec<i64> = self.window.lo.iter().map(|x| 2 * x).collect();
        let mut it = HalfIter::new(&self.radices);
        let mut idx = 0;
        let mut abs = vec![0; self.n()];
        while let Some(h) = it.next() {
            for i in 0..h.len() {
                abs[i] = h[i] + lo2[i];
            }
            f(&abs, self.cells[idx]);
            idx += 1;
        }
    }
}

/// Cube whose doubled midpoint is `half`.
pub(crate) fn cube_from_half(half: &[i64]) -> ElementaryCube {
    ElementaryCube {
        lo: half.iter().map(|h| h.div_euclid(2)).collect(),
        hi: half
            .iter()
            .map(|h| h.div_euclid(2) + h.rem_euclid(2))
            .collect(),
    }
}

/// Odometer over `0..radix[i]` in row-major order.
pub(crate) struct HalfIter {
    radices: Vec<usize>,
    current: Vec<i64>,
    started: bool,
    done: bool,
}

impl HalfIter {
    pub(crate) fn new(radices: &[usize]) -> Self {
        HalfIter {
            radices: radices.to_vec(),
            current: vec![0; radices.len()],
            started: false,
            done: radices.contains(&0),
        }
    }

    pub(crate) fn next(&mut self) -> Option<&[i64]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        for i in (0..self.radices.len()).rev() {
            self.current[i] += 1;
            if (self.current[i] as usize) < self.radices[i] {
                return Some(&self.current);
            }
            self.current[i] = 0;
        }
        self.done = true;
        None
    }
}
