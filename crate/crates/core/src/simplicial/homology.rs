use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::{elementary_divisors, simplex_dim, Simplex, SimplicialComplex};

/// Integer homology: free rank and torsion coefficients per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyProfile {
    /// All groups zero.
    pub fn zero() -> Self {
        HomologyProfile {
            betti: vec![0],
            torsion: vec![Vec::new()],
        }
    }

    /// Homology of a point.
    pub fn point() -> Self {
        HomologyProfile {
            betti: vec![1],
            torsion: vec![Vec::new()],
        }
    }

    pub fn betti(&self, degree: usize) -> usize {
        self.betti.get(degree).copied().unwrap_or(0)
    }

    pub fn torsion(&self, degree: usize) -> &[BigInt] {
        self.torsion.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn is_zero(&self) -> bool {
        self.betti.iter().all(|&b| b == 0) && self.torsion.iter().all(Vec::is_empty)
    }

    /// `Σ (-1)^d betti_d`.
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &HomologyProfile) -> HomologyProfile {
        let len = self.betti.len().max(other.betti.len());
        let mut out = HomologyProfile {
            betti: vec![0; len],
            torsion: vec![Vec::new(); len],
        };
        for d in 0..len {
            out.betti[d] = self.betti(d) + other.betti(d);
            out.torsion[d].extend_from_slice(self.torsion(d));
            out.torsion[d].extend_from_slice(other.torsion(d));
            out.torsion[d].sort();
        }
        out
    }

    /// Drops trailing all-zero degrees (keeping degree 0).
    fn trimmed(mut self) -> Self {
        while self.betti.len() > 1
            && *self.betti.last().unwrap() == 0
            && self.torsion.last().unwrap().is_empty()
        {
            self.betti.pop();
            self.torsion.pop();
        }
        self
    }
}

impl Serialize for HomologyProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let torsion: Vec<Vec<serde_json::Value>> = self
            .torsion
            .iter()
            .map(|ts| {
                ts.iter()
                    .map(|t| match u64::try_from(t) {
                        Ok(v) => serde_json::Value::from(v),
                        Err(_) => serde_json::Value::from(t.to_string()),
                    })
                    .collect()
            })
            .collect();
        let mut st = serializer.serialize_struct("HomologyProfile", 2)?;
        st.serialize_field("betti", &self.betti)?;
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// Simplices of one dimension in lexicographic vertex order.
fn chains(l: &SimplicialComplex, max_dim: usize) -> Vec<Vec<Simplex>> {
    let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); max_dim + 1];
    for s in l.simplices() {
        by_dim[simplex_dim(s)].push(s);
    }
    for level in &mut by_dim {
        // Lexicographic on increasing vertex lists equals descending order of
        // the bit-reversed masks.
        level.sort_by_key(|s| std::cmp::Reverse(s.reverse_bits()));
    }
    by_dim
}

/// Integer simplicial homology. Simplices are oriented by increasing vertex
/// label; the boundary of `[v0 < … < vd]` is `Σ (-1)^i [… v̂i …]`.
/// `reduced` subtracts the augmentation from degree 0 (nonempty complexes).
pub fn homology(l: &SimplicialComplex, reduced: bool) -> HomologyProfile {
    let Some(top) = l.dim() else {
        return HomologyProfile::zero();
    };
    let by_dim = chains(l, top);
    let index: Vec<HashMap<Simplex, usize>> = by_dim
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, &s)| (s, i)).collect())
        .collect();

    // divisors[d] = invariant factors of ∂_d : C_d → C_{d-1}, d >= 1.
    let mut divisors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 2];
    for d in 1..=top {
        let mut entries = Vec::new();
        for (col, &s) in by_dim[d].iter().enumerate() {
            let mut sign = 1i64;
            let mut rest = s;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest &= rest - 1;
                entries.push((index[d - 1][&(s & !bit)], col, sign));
                sign = -sign;
            }
        }
        divisors[d] = elementary_divisors(by_dim[d - 1].len(), by_dim[d].len(), entries);
    }

    let mut betti = Vec::with_capacity(top + 1);
    let mut torsion = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let rank_out = divisors[d].len();
        let rank_in = divisors[d + 1].len();
        betti.push(by_dim[d].len() - rank_out - rank_in);
        torsion.push(
            divisors[d + 1]
                .iter()
                .filter(|t| !t.is_one())
                .cloned()
                .collect(),
        );
    }
    if reduced {
        betti[0] -= 1;
    }
    HomologyProfile { betti, torsion }.trimmed()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(n: usize, facets: &[&[usize]]) -> SimplicialComplex {
        let f: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
        SimplicialComplex::from_facets(n, &f).unwrap()
    }

    #[test]
    fn circle() {
        let h = homology(&SimplicialComplex::boundary_simplex(3).unwrap(), false);
        assert_eq!(h.betti, vec![1, 1]);
        assert!(h.torsion.iter().all(Vec::is_empty));
    }

    #[test]
    fn spheres_reduced() {
        for n in 2..=7 {
            let h = homology(&SimplicialComplex::boundary_simplex(n).unwrap(), true);
            for d in 0..n {
                assert_eq!(h.betti(d), usize::from(d == n - 2), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn empty_and_point() {
        assert!(homology(&SimplicialComplex::empty(3).unwrap(), false).is_zero());
        let p = sc(1, &[&[1]]);
        assert_eq!(homology(&p, false), HomologyProfile::point());
        assert!(homology(&p, true).is_zero());
    }

    #[test]
    fn two_components() {
        let h = homology(&sc(4, &[&[1, 2], &[3, 4]]), false);
        assert_eq!(h.betti, vec![2]);
    }

    #[test]
    fn direct_sum_pads() {
        let a = HomologyProfile {
            betti: vec![1, 0, 1],
            torsion: vec![vec![], vec![BigInt::from(2)], vec![]],
        };
        let s = a.direct_sum(&HomologyProfile::point());
        assert_eq!(s.betti, vec![2, 0, 1]);
        assert_eq!(s.torsion(1), &[BigInt::from(2)]);
    }
}
