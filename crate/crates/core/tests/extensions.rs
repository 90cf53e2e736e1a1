mod common;

use std::sync::Arc;

use rbgroups::cohomology::{b2_rbe, h2_rbe, CocyclePair, DEFAULT_BUDGET};
use rbgroups::extensions::{
    are_equivalent, build_abelian_extension, build_split_extension, central_action, classify_abelian, coupling_of,
    extract_cocycle, h2_alpha, transform_triplet, triplets_equivalent, verify_triplet, Coupling, OuterAutomorphisms,
    Triplet,
};
use rbgroups::group::{inner_automorphism, GroupMap};
use rbgroups::operators::{enumerate_rb_operators, is_rb_operator};
use rbgroups::{Error, FiniteGroup, RotaBaxterOperator};

use common::*;

#[test]
fn roundtrip_through_canonical_section() {
    for i in ["Z2", "Z4", "Z3"] {
        for m in rb_modules("Z2", i) {
            for p in oracle_z2(&m) {
                let ae = build_abelian_extension(&m, &p).unwrap();
                let e = ae.extension();
                assert!(is_rb_operator(e.group(), e.e().images()));
                assert_eq!(extract_cocycle(&ae, e.section()).unwrap(), p);
            }
        }
    }
}

#[test]
fn every_section_gives_a_cohomologous_pair() {
    for (h, i) in [("Z2", "Z4"), ("Z3", "Z2"), ("Z2xZ2", "Z2")] {
        for m in rb_modules(h, i) {
            let h2 = h2_rbe(&m, DEFAULT_BUDGET).unwrap();
            for p in h2.representatives() {
                let ae = build_abelian_extension(&m, p).unwrap();
                for s in ae.extension().all_sections() {
                    let q = extract_cocycle(&ae, &s).unwrap();
                    assert_eq!(h2.class_of(&q), h2.class_of(p));
                }
            }
        }
    }
}

#[test]
fn classes_of_extensions_match_h2() {
    for (h, i) in [("Z2", "Z2"), ("Z2", "Z4"), ("Z3", "Z2"), ("Z2", "Z2xZ2")] {
        for m in rb_modules(h, i) {
            let (report, _) = classify_abelian(&m, DEFAULT_BUDGET).unwrap();
            let expected = oracle_z2(&m).len() / b2_rbe(&m, DEFAULT_BUDGET).unwrap().len();
            assert_eq!(report.num_classes, expected, "{h} {i}");
            assert!(report.matches && report.partition_matches_cosets);
        }
    }
}

#[test]
fn coboundary_twists_are_equivalent_to_the_split_extension() {
    for m in rb_modules("Z2", "Z4") {
        let zero = build_abelian_extension(&m, &CocyclePair::zero(2)).unwrap();
        for b in b2_rbe(&m, DEFAULT_BUDGET).unwrap() {
            let other = build_abelian_extension(&m, &b).unwrap();
            let f = are_equivalent(&zero, &other).unwrap();
            assert!(f.is_homomorphism(zero.extension().group(), other.extension().group()));
        }
    }
}

#[test]
fn non_cocycles_are_rejected() {
    let m = rb_modules("Z2", "Z2").remove(0);
    let z2 = oracle_z2(&m);
    let mut rejected = 0;
    for tau in all_values(2, 2, 2) {
        for g in all_values(1, 2, 2) {
            let p = CocyclePair { tau: tau.clone(), g };
            if !z2.contains(&p) {
                rejected += 1;
                assert!(matches!(build_abelian_extension(&m, &p), Err(Error::NotCocycle { .. })));
            }
        }
    }
    assert_eq!(rejected + z2.len(), 4);
}

#[test]
fn json_dump_carries_table_and_data() {
    let m = rb_modules("Z2", "Z3").remove(0);
    let ae = build_abelian_extension(&m, &CocyclePair::zero(2)).unwrap();
    let v = ae.to_json();
    assert_eq!(v["order"], 6);
    assert_eq!(v["table"].as_array().unwrap().len(), 6);
    assert!(v["tau"].is_object() && v["g"].is_object());
}

fn s3_as_semidirect() -> (RotaBaxterOperator, RotaBaxterOperator, Vec<GroupMap>) {
    let (h, i) = (grp("Z2"), grp("Z3"));
    let mu = vec![GroupMap::identity(3), GroupMap::new(vec![0, 2, 1])];
    (RotaBaxterOperator::zero(h), RotaBaxterOperator::zero(i), mu)
}

#[test]
fn split_extension_of_z2_by_z3_is_s3() {
    let (rh, ri, mu) = s3_as_semidirect();
    let e = build_split_extension(&rh, &ri, &mu, &[0, 0]).unwrap();
    assert!(!e.group().is_abelian());
    assert_eq!(e.group().order(), 6);
    assert!(e.homomorphic_section().is_some());
    let t = e.extract_triplet(e.section()).unwrap();
    assert!(t.tau.is_zero());
    assert_eq!(t.mu, mu);
}

#[test]
fn split_condition_failure_names_a_pair() {
    // over all operator and g choices, some fail and every failure carries a witness
    let (h, i) = (grp("Z2"), grp("Z3"));
    let mu = vec![GroupMap::identity(3), GroupMap::new(vec![0, 2, 1])];
    let (mut ok, mut failed) = (0, 0);
    for rh in enumerate_rb_operators(&h).unwrap() {
        for ri in enumerate_rb_operators(&i).unwrap() {
            for v in 0..3 {
                match build_split_extension(&rh, &ri, &mu, &[0, v]) {
                    Ok(e) => {
                        ok += 1;
                        assert!(is_rb_operator(e.group(), e.e().images()));
                    }
                    Err(Error::SplitCondition { x, y }) => {
                        failed += 1;
                        assert!(x < 6 && y < 6);
                    }
                    Err(other) => panic!("{other}"),
                }
            }
        }
    }
    assert!(ok > 0 && failed > 0);
}

/// Oracle for non-abelian triplets: builds the carrier table by hand and
/// checks associativity and the RB law.
fn oracle_triplet(h: &RotaBaxterOperator, i: &RotaBaxterOperator, t: &Triplet) -> bool {
    let (hg, ig): (&FiniteGroup, &FiniteGroup) = (h.group(), i.group());
    let n = ig.order();
    let size = hg.order() * n;
    let mul = |a: usize, b: usize| {
        let (h1, y1, h2, y2) = (a / n, a % n, b / n, b % n);
        hg.mul(h1, h2) * n + ig.product(&[t.tau.get(&[h1, h2]), t.mu[h2].apply(y1), y2])
    };
    for a in 0..size {
        for b in 0..size {
            for c in 0..size {
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return false;
                }
            }
        }
    }
    let inv: Vec<usize> = (0..size).map(|a| (0..size).find(|&b| mul(a, b) == 0).unwrap()).collect();
    let r = |x: usize| {
        let (hh, y) = (x / n, x % n);
        let rh = h.apply(hh);
        let g = t.g.get(&[hh]);
        rh * n + ig.mul(g, i.apply(ig.product(&[ig.inv(g), t.mu[rh].apply(y), g])))
    };
    (0..size).all(|x| {
        let rx = r(x);
        (0..size).all(|y| mul(rx, r(y)) == r(mul(mul(mul(x, rx), y), inv[rx])))
    })
}

#[test]
fn census_matches_oracle_on_z2_by_s3() {
    let (h, i) = (grp("Z2"), grp("S3"));
    let inner: Vec<GroupMap> = i.elements().map(|x| inner_automorphism(&i, x)).collect();
    for rh in enumerate_rb_operators(&h).unwrap() {
        for ri in enumerate_rb_operators(&i).unwrap() {
            let census = h2_alpha(&rh, &ri, &Coupling::trivial(2), 1_000_000).unwrap();
            let mut expected = Vec::new();
            for mu1 in &inner {
                for tau in all_values(2, 2, 6) {
                    for g in all_values(1, 2, 6) {
                        let t = Triplet { mu: vec![GroupMap::identity(6), mu1.clone()], tau: tau.clone(), g };
                        if oracle_triplet(&rh, &ri, &t) {
                            expected.push(t);
                        }
                    }
                }
            }
            expected.sort();
            expected.dedup();
            assert_eq!(census.triplets(), expected.as_slice());
            for t in census.triplets() {
                assert!(verify_triplet(t, &rh, &ri).is_ok());
            }
        }
    }
}

#[test]
fn section_change_preserves_validity_and_is_detected() {
    let (h, i) = (grp("Z2"), grp("D4"));
    let rh = RotaBaxterOperator::inversion(h);
    let ri = RotaBaxterOperator::zero(i);
    let census = h2_alpha(&rh, &ri, &Coupling::trivial(2), 1_000_000).unwrap();
    assert!(census.num_classes() >= 1);
    for t in census.triplets().iter().step_by(3) {
        for v in 0..8 {
            let theta = [0, v];
            let moved = transform_triplet(t, &rh, &ri, &theta);
            assert!(verify_triplet(&moved, &rh, &ri).is_ok());
            let found = triplets_equivalent(t, &moved, &rh, &ri).unwrap();
            assert_eq!(transform_triplet(t, &rh, &ri, &found), moved);
        }
    }
    let reps: Vec<&Triplet> = census.representatives().collect();
    for (a, b) in reps.iter().zip(reps.iter().skip(1)) {
        assert!(triplets_equivalent(a, b, &rh, &ri).is_none());
    }
}

#[test]
fn coupling_is_an_outer_class_invariant() {
    let (rh, ri, mu) = s3_as_semidirect();
    let e = build_split_extension(&rh, &ri, &mu, &[0, 0]).unwrap();
    let out = OuterAutomorphisms::new(ri.group()).unwrap();
    let t = e.extract_triplet(e.section()).unwrap();
    let c = coupling_of(&t, &out).unwrap();
    assert_eq!(c.classes, vec![0, 1]);
    assert!(c.is_anti_homomorphism(rh.group(), &out));
    for s in e.all_sections() {
        assert_eq!(coupling_of(&e.extract_triplet(&s).unwrap(), &out).unwrap(), c);
    }
}

#[test]
fn central_action_is_free_on_z2_by_q8() {
    let (h, i) = (grp("Z2"), grp("Q8"));
    let rh = RotaBaxterOperator::zero(h);
    for ri in enumerate_rb_operators(&i).unwrap() {
        let census = h2_alpha(&rh, &ri, &Coupling::trivial(2), 1_000_000).unwrap();
        let action = central_action(&rh, &ri, &census, DEFAULT_BUDGET).unwrap();
        assert!(action.free);
        assert_eq!(action.table.len(), action.center_classes);
    }
}

#[test]
fn h2_alpha_respects_budget() {
    let (h, i) = (grp("Z3"), grp("D4"));
    let r = h2_alpha(&RotaBaxterOperator::zero(h), &RotaBaxterOperator::zero(i), &Coupling::trivial(3), 1000);
    assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
}

#[test]
fn module_built_from_split_extension_roundtrips() {
    let m = rb_modules("Z2", "Z3").into_iter().find(|m| !m.action()[1].is_identity()).unwrap();
    let rh = m.h_op().clone();
    let ri = RotaBaxterOperator::new(Arc::clone(m.i_arc()), m.r_i_map().images().to_vec()).unwrap();
    let e = build_split_extension(&rh, &ri, m.action(), &[0, 0]).unwrap();
    let ae = build_abelian_extension(&m, &CocyclePair::zero(2)).unwrap();
    assert_eq!(e.group().table(), ae.extension().group().table());
    assert_eq!(e.e().images(), ae.extension().e().images());
}
