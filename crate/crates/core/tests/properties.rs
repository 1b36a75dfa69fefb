mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use sumset_core::{
    convex_hull, ehrhart_interpolate, generates_full_lattice, h_fold_sumset, inner_polytope,
    inner_polytope_direct_lattice_points, khovanskii_constant, nearest_facet, normalize_to_origin,
    perpendicular_foot, rho_certificate, smith_normal_form, solve_integer_rep, sqdist_point_boundary,
    sqdist_points, volume, IntMatrix, IntVector, LatticePointSet, Lemma2Checker, Rat,
    SumsetMembership, TheoremChecker,
};

fn point_set(dim: usize, max_len: usize, r: i64) -> impl Strategy<Value = LatticePointSet> {
    prop::collection::btree_set(prop::collection::vec(-r..=r, dim), 1..=max_len).prop_map(move |pts| {
        LatticePointSet::from_points(dim, pts.iter().map(|p| IntVector::from_i64(p))).unwrap()
    })
}

fn full_set(dim: usize, max_len: usize, r: i64) -> impl Strategy<Value = LatticePointSet> {
    point_set(dim, max_len, r).prop_filter("differences must generate Z^n", |a| {
        a.len() > a.dim() && generates_full_lattice(a).unwrap()
    })
}

fn any_dim_full_set(max_len: usize, r: i64) -> impl Strategy<Value = LatticePointSet> {
    (1usize..=3).prop_flat_map(move |n| full_set(n, max_len, r))
}

fn small_vector(dim: usize, r: i64) -> impl Strategy<Value = IntVector> {
    prop::collection::vec(-r..=r, dim).prop_map(|v| IntVector::from_i64(&v))
}

fn rat_of(v: &IntVector) -> Vec<Rat> {
    v.coords().iter().map(|c| Rat::from_integer(c.clone())).collect()
}

/// All lattice points of the box `[lo, hi]^n` inside the half-spaces.
fn brute_lattice_points(p: &sumset_core::Polytope) -> LatticePointSet {
    let (lo, hi) = p.bounding_box();
    let mut out = LatticePointSet::new(p.dim());
    let mut cur: Vec<BigInt> = lo.clone();
    loop {
        let v = IntVector::new(cur.clone());
        if p.contains_int(&v) {
            out.insert(v).unwrap();
        }
        let mut k = 0;
        loop {
            if k == cur.len() {
                return out;
            }
            cur[k] += 1;
            if cur[k] <= hi[k] {
                break;
            }
            cur[k] = lo[k].clone();
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_recomposes(rows in 1usize..=3, cols in 1usize..=5, seed in prop::collection::vec(-6i64..=6, 15)) {
        let data: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * cols..(i + 1) * cols].to_vec()).collect();
        let m = IntMatrix::from_rows(&data).unwrap();
        prop_assume!(!m.is_zero());
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(s.u.det().abs().is_one());
        prop_assert!(s.v.det().abs().is_one());
        let f = s.invariant_factors();
        prop_assert_eq!(f.len(), m.rank());
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn integer_representations_are_exact(a in point_set(2, 5, 4), z in small_vector(2, 6)) {
        if let Some(n) = solve_integer_rep(&a, &z).unwrap() {
            let mut acc = IntVector::zeros(2);
            for (c, p) in n.iter().zip(a.iter()) {
                acc = &acc + &p.scale(c);
            }
            prop_assert_eq!(acc, z);
        }
    }

    #[test]
    fn hull_is_sound_and_commutes_with_dilation(a in any_dim_full_set(6, 3), h in 1u64..=4, b in small_vector(3, 5)) {
        let hull = convex_hull(&a).unwrap();
        prop_assert!(a.iter().all(|p| hull.contains_int(p)));
        for v in hull.vertices() {
            let v = IntVector::new(v.iter().map(|c| c.to_integer()).collect());
            prop_assert!(a.contains(&v));
        }
        let dilated = convex_hull(&a.dilate(&BigInt::from(h))).unwrap();
        prop_assert_eq!(dilated, hull.dilate(h).unwrap());
        let b = IntVector::new(b.coords()[..a.dim()].to_vec());
        prop_assert_eq!(convex_hull(&a.translate(&b)).unwrap(), hull.translate(&b).unwrap());
    }

    #[test]
    fn lattice_points_match_box_filter(a in any_dim_full_set(5, 3), h in 1u64..=2) {
        let p = convex_hull(&a).unwrap().dilate(h).unwrap();
        prop_assert_eq!(p.lattice_points().unwrap(), brute_lattice_points(&p));
    }

    #[test]
    fn boundary_foot_is_nearest(a in full_set(2, 6, 4), w in prop::collection::vec(1i64..=9, 6)) {
        let hull = convex_hull(&a).unwrap();
        let verts = hull.vertices();
        let total: i64 = w.iter().take(verts.len()).sum();
        let z: Vec<Rat> = (0..2)
            .map(|k| {
                verts.iter().zip(&w).map(|(v, wi)| &v[k] * Rat::from_integer(BigInt::from(*wi))).sum::<Rat>()
                    / Rat::from_integer(BigInt::from(total))
            })
            .collect();
        let (i, d) = nearest_facet(&hull, &z).unwrap();
        let foot = perpendicular_foot(&z, hull.halfspaces()[i].hyperplane());
        prop_assert!(hull.contains(&foot));
        prop_assert_eq!(sqdist_points(&z, &foot), d.clone());
        for p in hull.vertices() {
            prop_assert!(sqdist_points(&z, p) >= d);
        }
    }

    #[test]
    fn sumset_recurrence_and_translation(a in point_set(2, 4, 3), h in 0u64..=4, b in small_vector(2, 4)) {
        let next = h_fold_sumset(&a, h + 1).unwrap();
        prop_assert_eq!(h_fold_sumset(&a, h).unwrap().minkowski_sum(&a).unwrap(), next.clone());
        let shifted = h_fold_sumset(&a.translate(&b), h).unwrap();
        prop_assert_eq!(shifted, h_fold_sumset(&a, h).unwrap().translate(&b.scale(&BigInt::from(h))));
        if a.contains_origin() {
            prop_assert!(h_fold_sumset(&a, h).unwrap().is_subset(&next));
        }
    }

    #[test]
    fn sumset_lies_in_dilate_and_under_ehrhart(a in full_set(2, 5, 3), h in 1u64..=5) {
        let hull = convex_hull(&a).unwrap();
        let sums = h_fold_sumset(&a, h).unwrap();
        let dilated = hull.dilate(h).unwrap();
        prop_assert!(sums.iter().all(|p| dilated.contains_int(p)));
        let p = ehrhart_interpolate(&hull).unwrap();
        prop_assert!(Rat::from_integer(BigInt::from(sums.len())) <= p.eval_int(h as i64));
    }

    #[test]
    fn ehrhart_matches_counts_and_volume(a in full_set(2, 7, 4)) {
        let hull = convex_hull(&a).unwrap();
        let p = ehrhart_interpolate(&hull).unwrap();
        prop_assert_eq!(p.coefficient(0), Rat::one());
        prop_assert_eq!(p.leading(), volume(&hull).unwrap());
        for h in 1..=6u64 {
            let count = hull.dilate(h).unwrap().count_lattice_points().unwrap();
            prop_assert_eq!(p.eval_int(h as i64), Rat::from_integer(BigInt::from(count)));
        }
    }

    #[test]
    fn normalization_moves_least_point_to_origin(a in point_set(3, 5, 4)) {
        let (norm, shift) = normalize_to_origin(&a).unwrap();
        prop_assert!(norm.contains_origin());
        if a.contains_origin() {
            prop_assert!(shift.is_zero());
        } else {
            prop_assert_eq!(&shift, a.first().unwrap());
        }
        prop_assert_eq!(norm.translate(&shift), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn membership_matches_enumeration(a in full_set(2, 5, 3)) {
        let (a, _) = normalize_to_origin(&a).unwrap();
        let oracle = SumsetMembership::new(&a).unwrap();
        let big = h_fold_sumset(&a, 5).unwrap();
        for h in 0..=4 {
            let hs = h_fold_sumset(&a, h).unwrap();
            for z in big.iter() {
                prop_assert_eq!(oracle.contains(z, h).unwrap(), hs.contains(z));
            }
        }
    }

    #[test]
    fn inner_polytope_identity(a in prop_oneof![full_set(1, 4, 3), full_set(2, 4, 2)], extra in 0u64..=3) {
        let (a, _) = normalize_to_origin(&a).unwrap();
        let cert = khovanskii_constant(&a).unwrap();
        let s = cert.scale();
        for h in [s - 1, s, s + extra] {
            let inner = inner_polytope(&a, h, cert.c).unwrap().lattice_points(a.dim()).unwrap();
            prop_assert_eq!(inner, inner_polytope_direct_lattice_points(&a, h, cert.c).unwrap());
        }
    }

    #[test]
    fn lemma2_against_brute_force(a in full_set(1, 4, 3), extra in 1u64..=4) {
        let (a, _) = normalize_to_origin(&a).unwrap();
        let cert = khovanskii_constant(&a).unwrap();
        let h = cert.scale() + extra;
        let report = Lemma2Checker::new(&cert).unwrap().check(h).unwrap();
        prop_assert!(report.holds());
        let inner = inner_polytope(&a, h, cert.c).unwrap().lattice_points(1).unwrap();
        prop_assert!(inner.is_subset(&h_fold_sumset(&a, h).unwrap()));
    }

    #[test]
    fn deep_points_match_brute_force(a in full_set(1, 4, 3), b in -5i64..=5, factor in 2u64..=4) {
        let a = a.translate(&IntVector::from_i64(&[b]));
        let cert = rho_certificate(&a).unwrap();
        let checker = TheoremChecker::new(&cert).unwrap();
        let h = factor * cert.scale + 3;
        let report = checker.check(h).unwrap();
        let body = convex_hull(&a).unwrap().dilate(h).unwrap();
        let expected: BTreeSet<IntVector> = body
            .lattice_points()
            .unwrap()
            .iter()
            .filter(|z| sqdist_point_boundary(&body, &rat_of(z)).unwrap() > cert.rho_sq)
            .cloned()
            .collect();
        prop_assert_eq!(report.deep_points.iter().cloned().collect::<BTreeSet<_>>(), expected.clone());
        let sums = h_fold_sumset(&a, h).unwrap();
        prop_assert!(expected.iter().all(|z| sums.contains(z)));
        prop_assert!(report.holds());
        prop_assert_eq!(report.lattice_count, body.count_lattice_points().unwrap());
    }

    #[test]
    fn rho_is_translation_invariant(a in prop_oneof![full_set(1, 4, 3), full_set(2, 4, 2)], b in small_vector(2, 6)) {
        // anchor the set at its least point so that normalization is a pure translation
        let least = a.first().unwrap().clone();
        let a = a.translate(&-&least);
        let b = IntVector::new(b.coords()[..a.dim()].to_vec());
        let moved = a.translate(&b);
        prop_assume!(!moved.contains_origin() || b.is_zero());
        let r0 = rho_certificate(&a).unwrap();
        let r1 = rho_certificate(&moved).unwrap();
        prop_assert_eq!(&r0.rho_sq, &r1.rho_sq);
        prop_assert_eq!(&r1.normalization, &b);
        prop_assert!(r0.gaps_consistent() && r1.gaps_consistent());
    }
}

#[test]
fn deep_points_in_the_plane() {
    let a = common::set(&[&[0, 0], &[1, 0], &[0, 1]]);
    let cert = rho_certificate(&a).unwrap();
    let checker = TheoremChecker::new(&cert).unwrap();
    let h = 6 * cert.scale;
    let report = checker.check(h).unwrap();
    assert!(!report.deep_points.is_empty());
    assert!(report.holds());
    let sums = h_fold_sumset(&a, h).unwrap();
    assert!(report.deep_points.iter().all(|z| sums.contains(z)));
    assert_eq!(report.lattice_count, sums.len() as u64);
    let body = convex_hull(&a).unwrap().dilate(h).unwrap();
    for z in &report.deep_points {
        assert!(sqdist_point_boundary(&body, &rat_of(z)).unwrap() > cert.rho_sq);
    }
}
