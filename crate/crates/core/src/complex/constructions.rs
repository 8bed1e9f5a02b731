//! Cones over simplicial complexes and the complexes `C_L`, `K_L`, `U_L`.

use super::{
    compile_program_named, from_holes, ElementaryCube, EuclideanComplex, HoleSet, IntBox, OpenBox,
};
use crate::error::{Error, Result};
use crate::model::PVProgram;
use crate::simplicial::{vertices_of, Simplex, SimplicialComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeDirection {
    Future,
    Past,
}

/// Indicator vector of a simplex.
fn indicator(s: Simplex, n: usize) -> Vec<i64> {
    (0..n).map(|i| (s >> i & 1) as i64).collect()
}

/// `⋃_{j∈M} [apex, apex+j]` (future) or `⋃_{j∈M} [apex−j, apex]` (past),
/// together with the apex. The window is the unit box on the cone's side.
pub fn cone(
    apex: &[i64],
    m: &SimplicialComplex,
    direction: ConeDirection,
) -> Result<EuclideanComplex> {
    let n = m.n();
    if apex.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: apex.len(),
        });
    }
    let sign = match direction {
        ConeDirection::Future => 1,
        ConeDirection::Past => -1,
    };
    let far: Vec<i64> = apex.iter().map(|a| a + sign).collect();
    let window = match direction {
        ConeDirection::Future => IntBox::new(apex.to_vec(), far)?,
        ConeDirection::Past => IntBox::new(far, apex.to_vec())?,
    };
    let mut cubes = vec![ElementaryCube::vertex(apex.to_vec())];
    for j in m.facets() {
        let other: Vec<i64> = apex
            .iter()
            .zip(indicator(j, n))
            .map(|(a, e)| a + sign * e)
            .collect();
        cubes.push(match direction {
            ConeDirection::Future => ElementaryCube::new(apex.to_vec(), other)?,
            ConeDirection::Past => ElementaryCube::new(other, apex.to_vec())?,
        });
    }
    EuclideanComplex::from_cubes(window, &cubes)
}

/// `C_L = C^+(0, ∂Δ^{n−1}) ∪ C^−(1, L)` in the window `[0,1]`.
pub fn build_cl(l: &SimplicialComplex) -> Result<EuclideanComplex> {
    let n = l.n();
    let sphere = SimplicialComplex::boundary_simplex(n)?;
    let future = cone(&vec![0; n], &sphere, ConeDirection::Future)?;
    let past = cone(&vec![1; n], l, ConeDirection::Past)?;
    future.union(&past)
}

/// `∂[0,2]^n`: cubes of `[0,2]^n` with a coordinate fixed at 0 or 2.
pub fn boundary_box(n: usize) -> Result<EuclideanComplex> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    Ok(EuclideanComplex::from_predicate(
        IntBox::cube(n, 0, 2)?,
        |h| h.iter().any(|&x| x == 0 || x == 4),
    ))
}

/// Resource name of the guard hole for the ordered pair `(i, j)` (1-based).
pub fn guard_resource_name(i: usize, j: usize) -> String {
    format!("g_{i}_{j}")
}

/// Guard holes `(c^{i,j}, d^{i,j})` for ordered pairs `i ≠ j` in
/// lexicographic order, then `(0, k^r)` for each set `A_r` in the given order.
/// `c^{i,j}` is `e_i`; `d^{i,j}` is 1 at `j` and 2 elsewhere; `k^r` is 1 on
/// `A_r` and 2 elsewhere.
pub fn u_l_holes(n: usize, nonfaces: &[Simplex]) -> Result<HoleSet> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let mut holes = Vec::with_capacity(n * (n - 1) + nonfaces.len());
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let c: Vec<i64> = (0..n).map(|m| i64::from(m == i)).collect();
            let d: Vec<i64> = (0..n).map(|m| if m == j { 1 } else { 2 }).collect();
            holes.push(OpenBox::new(c, d)?);
        }
    }
    for &a in nonfaces {
        if a == 0 {
            return Err(Error::EmptyNonFace);
        }
        if let Some(&v) = vertices_of(a).last() {
            if v > n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        let k: Vec<i64> = (0..n)
            .map(|m| if a >> m & 1 == 1 { 1 } else { 2 })
            .collect();
        holes.push(OpenBox::new(vec![0; n], k)?);
    }
    HoleSet::new(n, holes)
}

/// Both descriptions of `K_L` on the window `[0,2]^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlConstruction {
    /// `C_L ∪ [1,2] ∪ ∂[0,2]`.
    pub complex: EuclideanComplex,
    /// `U_L`, built from the minimal non-faces of `L`.
    pub holes: HoleSet,
}

/// Builds `K_L` directly and as the complement of `U_L`, and checks that the
/// two agree cube by cube.
pub fn build_kl(l: &SimplicialComplex) -> Result<KlConstruction> {
    let n = l.n();
    let window = IntBox::cube(n, 0, 2)?;
    let cl = build_cl(l)?.embed(&window)?;
    let top = EuclideanComplex::full(IntBox::cube(n, 1, 2)?).embed(&window)?;
    let complex = cl.union(&top)?.union(&boundary_box(n)?)?;
    let holes = u_l_holes(n, &l.minimal_nonfaces())?;
    let other = from_holes(&holes, &window)?;
    if let Some(c) = complex.first_difference(&other) {
        return Err(Error::ConstructionMismatch(format!(
            "cube {c} differs between the direct construction and the complement of U_L"
        )));
    }
    Ok(KlConstruction { complex, holes })
}

/// A program whose state space is `K_L`: the compiled program of `U_L`, with
/// guard resources `g_i_j` and one resource `A1, A2, …` per minimal non-face.
pub fn build_ql(l: &SimplicialComplex) -> Result<PVProgram> {
    let n = l.n();
    let nonfaces = l.minimal_nonfaces();
    let holes = u_l_holes(n, &nonfaces)?;
    let mut names = Vec::with_capacity(holes.len());
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                names.push(guard_resource_name(i, j));
            }
        }
    }
    names.extend((1..=nonfaces.len()).map(|r| format!("A{r}")));
    compile_program_named(&holes, &names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{default_window, state_space, CubeMembership};

    fn sc(n: usize, facets: &[&[usize]]) -> SimplicialComplex {
        let f: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
        SimplicialComplex::from_facets(n, &f).unwrap()
    }

    fn rp2() -> SimplicialComplex {
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
        SimplicialComplex::from_minimal_nonfaces(6, &a).unwrap()
    }

    #[test]
    fn past_cone_of_full_simplex_is_cube() {
        for n in 1..=4 {
            let k = cone(
                &vec![1; n],
                &SimplicialComplex::full_simplex(n).unwrap(),
                ConeDirection::Past,
            )
            .unwrap();
            assert_eq!(k, EuclideanComplex::full(IntBox::cube(n, 0, 1).unwrap()));
        }
    }

    #[test]
    fn future_cone_of_circle() {
        let k = cone(
            &[0, 0, 0],
            &SimplicialComplex::boundary_simplex(3).unwrap(),
            ConeDirection::Future,
        )
        .unwrap();
        // Every [0, j] with j a proper nonzero face, plus all their faces:
        // 7 vertices, 9 edges, 3 squares.
        assert_eq!(k.counts_by_dim(), vec![7, 9, 3, 0]);
        assert!(!k.contains_vertex(&[1, 1, 1]));
    }

    #[test]
    fn past_cone_of_empty_complex() {
        let k = cone(
            &[1, 1],
            &SimplicialComplex::empty(2).unwrap(),
            ConeDirection::Past,
        )
        .unwrap();
        assert_eq!(k.len(), 1);
        assert!(k.contains_vertex(&[1, 1]));
    }

    #[test]
    fn cl_of_full_simplex() {
        let k = build_cl(&SimplicialComplex::full_simplex(3).unwrap()).unwrap();
        assert_eq!(k, EuclideanComplex::full(IntBox::cube(3, 0, 1).unwrap()));
    }

    #[test]
    fn cl_of_empty_complex() {
        let k = build_cl(&SimplicialComplex::empty(3).unwrap()).unwrap();
        let future = cone(
            &[0, 0, 0],
            &SimplicialComplex::boundary_simplex(3).unwrap(),
            ConeDirection::Future,
        )
        .unwrap();
        assert_eq!(k.len(), future.len() + 1);
        assert!(k.contains_vertex(&[1, 1, 1]));
    }

    #[test]
    fn boundary_box_counts() {
        assert_eq!(boundary_box(2).unwrap().counts_by_dim(), vec![8, 8, 0]);
        // 26 vertices, 48 edges, 24 squares on the surface of [0,2]^3.
        assert_eq!(
            boundary_box(3).unwrap().counts_by_dim(),
            vec![26, 48, 24, 0]
        );
        let big = HoleSet::new(3, vec![OpenBox::new(vec![0; 3], vec![2; 3]).unwrap()]).unwrap();
        for c in boundary_box(3).unwrap().cubes() {
            assert!(big.cube_in(&c).unwrap());
        }
    }

    #[test]
    fn u_l_two_points() {
        let l = sc(2, &[&[1], &[2]]);
        let kl = build_kl(&l).unwrap();
        let expected: Vec<OpenBox> = vec![
            OpenBox::new(vec![1, 0], vec![2, 1]).unwrap(),
            OpenBox::new(vec![0, 1], vec![1, 2]).unwrap(),
            OpenBox::new(vec![0, 0], vec![1, 1]).unwrap(),
        ];
        assert_eq!(kl.holes.holes(), &expected[..]);
        assert_eq!(kl.complex.counts_by_dim(), vec![9, 12, 1]);
    }

    #[test]
    fn u_l_full_simplex_has_only_guards() {
        let kl = build_kl(&SimplicialComplex::full_simplex(4).unwrap()).unwrap();
        assert_eq!(kl.holes.len(), 12);
    }

    #[test]
    fn u_l_projective_plane() {
        let l = rp2();
        assert_eq!(l.minimal_nonfaces().len(), 10);
        let kl = build_kl(&l).unwrap();
        assert_eq!(kl.holes.len(), 40);
    }

    #[test]
    fn ql_shape() {
        let l = rp2();
        let q = build_ql(&l).unwrap();
        assert_eq!(q.dim(), 6);
        assert_eq!(q.resources().len(), 40);
        assert!(q.resources().iter().all(|(_, _, c)| c == 5));
        for p in q.processes() {
            assert_eq!(p.len(), 3);
            assert_eq!(p.progression(), Some(&[0, 1, 2][..]));
        }
    }

    #[test]
    fn ql_operations() {
        let l = rp2();
        let q = build_ql(&l).unwrap();
        let res = q.resources();
        let nonfaces = l.minimal_nonfaces();
        let guard = |i: usize, j: usize| res.id(&guard_resource_name(i, j)).unwrap();
        for m in 1..=6 {
            let ops = q.processes()[m - 1].ops();
            // Time 0: every A resource and every guard g_i_j with i ≠ m.
            for (r, _, _) in res.iter() {
                let name = res.name(r);
                let expected = if name.starts_with('A') {
                    1
                } else {
                    let parts: Vec<usize> =
                        name[2..].split('_').map(|s| s.parse().unwrap()).collect();
                    u32::from(parts[0] != m)
                };
                assert_eq!(ops[0].acquires(r), expected, "m={m} {name}");
                assert_eq!(ops[0].releases(r), 0);
            }
            // Time 1: releases A_r containing m and g_i_m; acquires g_m_j.
            for (idx, &a) in nonfaces.iter().enumerate() {
                let r = res.id(&format!("A{}", idx + 1)).unwrap();
                assert_eq!(ops[1].releases(r), u32::from(a >> (m - 1) & 1 == 1));
            }
            for o in 1..=6 {
                if o != m {
                    assert_eq!(ops[1].releases(guard(o, m)), 1);
                    assert_eq!(ops[1].acquires(guard(m, o)), 1);
                    assert_eq!(ops[1].acquires(guard(o, m)), 0);
                }
            }
            // Time 2 releases whatever is still held.
            assert!(!ops[2].has_acquire());
        }
    }

    #[test]
    fn ql_state_space_is_kl() {
        let l = sc(3, &[&[1, 2], &[3]]);
        let q = build_ql(&l).unwrap();
        let kl = build_kl(&l).unwrap();
        let k = state_space(&q, &default_window(&q).unwrap()).unwrap();
        assert_eq!(k.restrict(kl.complex.window()).unwrap(), kl.complex);
    }
}
