mod common;

use proptest::prelude::*;
use pvtopo::simplicial::{exhaustive_downward_closed, mask_of};
use pvtopo::{homology, SimplicialComplex};

fn complexes() -> impl Strategy<Value = SimplicialComplex> {
    (1usize..=6).prop_flat_map(common::simplicial)
}

/// Reduced homology of a point: everything zero.
fn acyclic(l: &SimplicialComplex) -> bool {
    homology(l, true).is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constructors_are_downward_closed(
        l in complexes(),
        a in (1usize..=8).prop_flat_map(common::nonfaces),
    ) {
        prop_assert!(exhaustive_downward_closed(&l));
        prop_assert!(l.is_downward_closed());
        let n = a.iter().flatten().copied().max().unwrap();
        let m = SimplicialComplex::from_minimal_nonfaces(n, &a).unwrap();
        prop_assert!(exhaustive_downward_closed(&m));
        prop_assert!(exhaustive_downward_closed(&l.order_complex().unwrap()));
    }

    #[test]
    fn minimal_nonfaces_round_trip(a in (1usize..=7).prop_flat_map(common::nonfaces)) {
        let n = a.iter().flatten().copied().max().unwrap();
        let masks: Vec<u64> = a.iter().map(|s| mask_of(s, n).unwrap()).collect();
        let mut minimal: Vec<u64> = masks
            .iter()
            .copied()
            .filter(|&s| !masks.iter().any(|&t| t != s && t & s == t))
            .collect();
        minimal.sort();
        minimal.dedup();
        let l = SimplicialComplex::from_minimal_nonfaces(n, &a).unwrap();
        prop_assert_eq!(l.minimal_nonfaces(), minimal);
    }

    #[test]
    fn subdivision_keeps_homology(l in complexes()) {
        prop_assert_eq!(homology(&l.order_complex().unwrap(), false), homology(&l, false));
    }

    #[test]
    fn cones_and_collapsible_complexes_are_acyclic(l in complexes()) {
        if l.is_cone().is_some() || l.is_collapsible() {
            prop_assert!(acyclic(&l));
        }
    }

    #[test]
    fn euler_characteristic_matches_f_vector(l in complexes()) {
        let chi: i64 = l
            .f_vector()
            .iter()
            .enumerate()
            .map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum();
        prop_assert_eq!(homology(&l, false).euler_characteristic(), chi);
        prop_assert_eq!(homology(&l, true).euler_characteristic(), chi - 1);
    }

    #[test]
    fn wedge_adds_reduced_homology(a in complexes(), b in complexes()) {
        prop_assume!(a.n() + b.n() <= 64);
        let w = a.wedge(&b).unwrap();
        prop_assert_eq!(homology(&w, true), homology(&a, true).direct_sum(&homology(&b, true)));
    }
}

#[test]
fn spheres() {
    for n in 2..=7 {
        let h = homology(&SimplicialComplex::boundary_simplex(n).unwrap(), true);
        for d in 0..=n {
            assert_eq!(h.betti(d), usize::from(d == n - 2), "n={n} d={d}");
        }
    }
}
