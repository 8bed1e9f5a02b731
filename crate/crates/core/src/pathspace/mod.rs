//! Models of directed path spaces `P(K)_a^b` between grid vertices.

mod boxes;
mod grid;
mod nerve;
mod oracle;
mod split;

use serde::Serialize;

use crate::simplicial::{homology, HomologyProfile, SimplicialComplex};

pub use nerve::{nerve_model, past_link};
pub use oracle::{deadlocks, flip_oracle, OracleResult};
pub use split::{
    level_split, model, model_with_depth, LevelSection, SectionComponent, DEFAULT_DEPTH,
};

/// Homotopy type of a path space, up to the rules below.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum PathSpaceModel {
    Empty,
    Contractible,
    Complex(SimplicialComplex),
    Product(Vec<PathSpaceModel>),
    DisjointUnion(Vec<PathSpaceModel>),
    Unknown { reason: String, vertex: Vec<i64> },
}

impl PathSpaceModel {
    /// `|L|`, or `Contractible` when `L` collapses to a point (cones do) and
    /// `Empty` when `L` is.
    pub fn complex(l: SimplicialComplex) -> Self {
        if l.is_empty() {
            PathSpaceModel::Empty
        } else if l.is_cone().is_some() || l.is_collapsible() {
            PathSpaceModel::Contractible
        } else {
            PathSpaceModel::Complex(l)
        }
    }

    /// Product with `Empty` absorbing, contractible factors dropped and
    /// nested products flattened.
    pub fn product(factors: impl IntoIterator<Item = PathSpaceModel>) -> Self {
        let mut out = Vec::new();
        for f in factors {
            match f {
                PathSpaceModel::Empty => return PathSpaceModel::Empty,
                PathSpaceModel::Contractible => {}
                PathSpaceModel::Product(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => PathSpaceModel::Contractible,
            1 => out.pop().unwrap(),
            _ => PathSpaceModel::Product(out),
        }
    }

    /// Disjoint union with empty parts dropped and nested unions flattened.
    pub fn disjoint_union(parts: impl IntoIterator<Item = PathSpaceModel>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                PathSpaceModel::Empty => {}
                PathSpaceModel::DisjointUnion(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => PathSpaceModel::Empty,
            1 => out.pop().unwrap(),
            _ => PathSpaceModel::DisjointUnion(out),
        }
    }

    pub fn is_unknown(&self) -> bool {
        self.first_unknown().is_some()
    }

    /// The first `Unknown` leaf in depth-first order.
    pub fn first_unknown(&self) -> Option<&PathSpaceModel> {
        match self {
            PathSpaceModel::Unknown { .. } => Some(self),
            PathSpaceModel::Product(v) | PathSpaceModel::DisjointUnion(v) => {
                v.iter().find_map(|m| m.first_unknown())
            }
            _ => None,
        }
    }

    /// Short human-readable form, e.g. `|L| ⊔ *`.
    pub fn describe(&self) -> String {
        match self {
            PathSpaceModel::Empty => "∅".into(),
            PathSpaceModel::Contractible => "*".into(),
            PathSpaceModel::Complex(l) => {
                let f = l.f_vector();
                format!("|L| (n={}, f={:?})", l.n(), f)
            }
            PathSpaceModel::Product(v) => {
                let parts: Vec<String> = v.iter().map(|m| format!("({})", m.describe())).collect();
                parts.join(" × ")
            }
            PathSpaceModel::DisjointUnion(v) => {
                let parts: Vec<String> = v.iter().map(|m| m.describe()).collect();
                parts.join(" ⊔ ")
            }
            PathSpaceModel::Unknown { reason, vertex } => {
                format!("unknown at {vertex:?}: {reason}")
            }
        }
    }
}

/// Unreduced integer homology of a model. `None` when the model contains
/// `Unknown`, or a product with two factors whose homology is not that of a
/// point.
pub fn homology_of_model(m: &PathSpaceModel) -> Option<HomologyProfile> {
    match m {
        PathSpaceModel::Empty => Some(HomologyProfile::zero()),
        PathSpaceModel::Contractible => Some(HomologyProfile::point()),
        PathSpaceModel::Complex(l) => Some(homology(l, false)),
        PathSpaceModel::DisjointUnion(parts) => {
            parts.iter().try_fold(HomologyProfile::zero(), |acc, p| {
                Some(acc.direct_sum(&homology_of_model(p)?))
            })
        }
        PathSpaceModel::Product(factors) => {
            let profiles = factors
                .iter()
                .map(homology_of_model)
                .collect::<Option<Vec<_>>>()?;
            let point = HomologyProfile::point();
            let mut nontrivial = profiles.into_iter().filter(|p| *p != point);
            let first = nontrivial.next();
            if nontrivial.next().is_some() {
                return None;
            }
            Some(first.unwrap_or(point))
        }
        PathSpaceModel::Unknown { .. } => None,
    }
}

/// Number of path components, `None` when the model contains `Unknown`.
pub fn h0_rank(m: &PathSpaceModel) -> Option<usize> {
    match m {
        PathSpaceModel::Empty => Some(0),
        PathSpaceModel::Contractible => Some(1),
        PathSpaceModel::Complex(l) => Some(homology(l, false).betti(0)),
        PathSpaceModel::Product(v) => v.iter().try_fold(1, |acc, f| Some(acc * h0_rank(f)?)),
        PathSpaceModel::DisjointUnion(v) => v.iter().try_fold(0, |acc, f| Some(acc + h0_rank(f)?)),
        PathSpaceModel::Unknown { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn two_points() -> SimplicialComplex {
        SimplicialComplex::from_facets(2, &[vec![1], vec![2]]).unwrap()
    }

    #[test]
    fn simplification_rules() {
        let s0 = PathSpaceModel::complex(two_points());
        assert_eq!(
            PathSpaceModel::product([PathSpaceModel::Contractible, s0.clone()]),
            s0
        );
        assert_eq!(
            PathSpaceModel::product([PathSpaceModel::Empty, s0.clone()]),
            PathSpaceModel::Empty
        );
        assert_eq!(
            PathSpaceModel::disjoint_union([
                PathSpaceModel::Empty,
                PathSpaceModel::disjoint_union([s0.clone(), PathSpaceModel::Contractible]),
            ]),
            PathSpaceModel::DisjointUnion(vec![s0, PathSpaceModel::Contractible])
        );
        let edge = SimplicialComplex::from_facets(2, &[vec![1, 2]]).unwrap();
        assert_eq!(PathSpaceModel::complex(edge), PathSpaceModel::Contractible);
    }

    #[test]
    fn homology_of_named_models() {
        assert_eq!(
            homology_of_model(&PathSpaceModel::Contractible),
            Some(HomologyProfile::point())
        );
        let four = PathSpaceModel::DisjointUnion(vec![PathSpaceModel::Contractible; 4]);
        assert_eq!(homology_of_model(&four).unwrap().betti, vec![4]);
        assert_eq!(h0_rank(&four), Some(4));

        let a: Vec<Vec<usize>> = vec![
            vec![1, 2, 3],
            vec![2, 3, 4],
            vec![3, 4, 5],
            vec![4, 5, 1],
            vec![5, 1, 2],
            vec![1, 3, 6],
            vec![2, 4, 6],
            vec![3, 5, 6],
            vec![4, 1, 6],
            vec![5, 2, 6],
        ];
        let rp2 = SimplicialComplex::from_minimal_nonfaces(6, &a).unwrap();
        let m = PathSpaceModel::DisjointUnion(vec![
            PathSpaceModel::Complex(rp2),
            PathSpaceModel::Complex(SimplicialComplex::boundary_simplex(6).unwrap()),
        ]);
        let h = homology_of_model(&m).unwrap();
        assert_eq!(h.betti, vec![2, 0, 0, 0, 1]);
        assert_eq!(h.torsion(1), &[BigInt::from(2)]);
        assert!(h.torsion(2).is_empty());
    }

    #[test]
    fn products_of_nontrivial_factors() {
        let s0 = PathSpaceModel::Complex(two_points());
        let p = PathSpaceModel::product([s0.clone(), s0]);
        assert_eq!(homology_of_model(&p), None);
        assert_eq!(h0_rank(&p), Some(4));
    }

    #[test]
    fn unknown_blocks_homology() {
        let u = PathSpaceModel::Unknown {
            reason: "x".into(),
            vertex: vec![0],
        };
        let m = PathSpaceModel::disjoint_union([PathSpaceModel::Contractible, u]);
        assert!(m.is_unknown());
        assert_eq!(h0_rank(&m), None);
        assert_eq!(homology_of_model(&m), None);
    }
}
