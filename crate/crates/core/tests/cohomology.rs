mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use rbgroups::cohomology::{
    b2_rbe, d1_rbe, d2_rbe, delta, h2_rbe, partial, phi1, phi2, z1_rbe, z2_rbe, Cochain, CochainJson, CocyclePair,
    RbCochain, RbModule, DEFAULT_BUDGET,
};
use rbgroups::group::GroupMap;
use rbgroups::{Error, RotaBaxterOperator};

use common::*;

#[test]
fn scalar_complexes_square_to_zero() {
    for h in ["Z1", "Z2", "Z3"] {
        for i in ["Z2", "Z3", "Z4", "Z2xZ2"] {
            for m in rb_modules(h, i) {
                let (ho, n) = (m.h_order(), m.i_order());
                for arity in 1..=2 {
                    for f in all_values(arity, ho, n) {
                        assert!(dd_scalar(&m, &f).is_empty(), "{h} {i} {f:?}");
                    }
                }
                for f in generators(3, ho, n) {
                    assert!(dd_scalar(&m, &f).is_empty(), "{h} {i} {f:?}");
                }
            }
        }
    }
}

#[test]
fn combined_complexes_square_to_zero() {
    for h in ["Z2", "Z3"] {
        for i in ["Z2", "Z3", "Z4", "Z2xZ2"] {
            for m in rb_modules(h, i) {
                let (ho, n) = (m.h_order(), m.i_order());
                let ones = all_values(1, ho, n);
                for f in &ones {
                    for g in &ones {
                        let c = RbCochain::Degree1 { f: f.clone(), g: g.clone() };
                        assert!(dd_combined(&m, &c).is_empty(), "{h} {i}");
                    }
                }
                // degree 2 on generators of C² ⊕ C¹ ⊕ C²; the maps are additive
                let z2 = Cochain::zero(2, ho);
                let z1 = Cochain::zero(1, ho);
                let mut gens = Vec::new();
                for f in generators(2, ho, n) {
                    gens.push(RbCochain::Higher { f: f.clone(), g: z1.clone(), h: z2.clone() });
                    gens.push(RbCochain::Higher { f: z2.clone(), g: z1.clone(), h: f });
                }
                for g in generators(1, ho, n) {
                    gens.push(RbCochain::Higher { f: z2.clone(), g, h: z2.clone() });
                }
                for c in &gens {
                    assert!(dd_combined(&m, c).is_empty(), "{h} {i}");
                }
            }
        }
    }
}

#[test]
fn rbe_complex_squares_to_zero() {
    for h in ["Z1", "Z2", "Z3"] {
        for i in ["Z2", "Z3", "Z4", "Z2xZ2"] {
            for m in rb_modules(h, i) {
                for theta in all_values(1, m.h_order(), m.i_order()) {
                    let (a, b) = d2_rbe(&m, &d1_rbe(&m, &theta).unwrap()).unwrap();
                    assert!(a.is_zero() && b.is_zero(), "{h} {i} {theta:?}");
                }
            }
        }
    }
}

#[test]
fn central_identity_for_trivial_action() {
    for h in ["Z1", "Z2", "Z3"] {
        for i in ["Z2", "Z3", "Z4", "Z2xZ2"] {
            for m in rb_modules(h, i).into_iter().filter(|m| m.action().iter().all(GroupMap::is_identity)) {
                for theta in all_values(1, m.h_order(), m.i_order()) {
                    assert_eq!(partial(&m, &phi1(&m, &theta)), phi2(&m, &delta(&m, &theta)), "{h} {i}");
                }
            }
        }
    }
}

#[test]
fn z2_matches_extension_oracle() {
    for (h, i) in [("Z2", "Z2"), ("Z2", "Z3"), ("Z2", "Z4"), ("Z2", "Z2xZ2"), ("Z3", "Z2"), ("Z3", "Z3")] {
        for m in rb_modules(h, i) {
            assert_eq!(z2_rbe(&m, DEFAULT_BUDGET).unwrap(), oracle_z2(&m), "{h} {i}");
        }
    }
}

#[test]
fn coboundaries_are_cocycles_and_h2_partitions() {
    for (h, i) in [("Z2", "Z2"), ("Z2", "Z4"), ("Z3", "Z2"), ("Z2xZ2", "Z2")] {
        for m in rb_modules(h, i) {
            let h2 = h2_rbe(&m, DEFAULT_BUDGET).unwrap();
            let b2 = b2_rbe(&m, DEFAULT_BUDGET).unwrap();
            assert!(b2.iter().all(|b| h2.class_of(b) == Some(0)));
            assert_eq!(h2.z2().len(), h2.order() * b2.len());
            assert!(h2.representatives()[0].is_zero());
            // kernel of ∂¹: |C¹| = |Z¹|·|B²|
            let z1 = z1_rbe(&m, DEFAULT_BUDGET).unwrap();
            assert_eq!(z1.len() * b2.len(), m.i_order().pow((m.h_order() - 1) as u32));
        }
    }
}

#[test]
fn trivial_h_has_trivial_h2() {
    for i in ["Z2", "Z3", "Z2xZ2"] {
        for m in rb_modules("Z1", i) {
            assert_eq!(h2_rbe(&m, DEFAULT_BUDGET).unwrap().order(), 1);
        }
    }
}

#[test]
fn checked_construction_rejects_invalid_modules() {
    let (h, i) = (grp("Z2"), grp("Z3"));
    let all = rbgroups::cohomology::all_modules(&h, &i).unwrap();
    let (good, bad): (Vec<_>, Vec<_>) = all.into_iter().partition(RbModule::is_rb_module);
    assert!(!good.is_empty() && !bad.is_empty());
    for m in bad {
        let rebuilt = RbModule::new_checked(m.h_op().clone(), i.clone(), m.r_i_map().clone(), m.action().to_vec());
        assert!(matches!(rebuilt, Err(Error::Module(_))));
    }
    let short = RbModule::new_checked(RotaBaxterOperator::inversion(h), i, GroupMap::identity(3), vec![GroupMap::identity(3)]);
    assert!(short.is_err());
}

#[test]
fn budget_is_enforced() {
    let m = rb_modules("Z3", "Z4").remove(0);
    assert!(matches!(z2_rbe(&m, 10), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn cochain_json_roundtrip() {
    for m in rb_modules("Z3", "Z2").into_iter().take(3) {
        for p in z2_rbe(&m, DEFAULT_BUDGET).unwrap() {
            let text = serde_json::to_string(&p.tau.to_json()).unwrap();
            let back: CochainJson = serde_json::from_str(&text).unwrap();
            assert_eq!(Cochain::from_json(&back, 3).unwrap(), p.tau);
        }
    }
}

fn order4_modules() -> &'static Vec<RbModule> {
    static MODS: OnceLock<Vec<RbModule>> = OnceLock::new();
    MODS.get_or_init(|| {
        let mut v = Vec::new();
        for h in ["Z4", "Z2xZ2"] {
            for i in ["Z2", "Z3", "Z4", "Z2xZ2"] {
                v.extend(rb_modules(h, i));
            }
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn order4_complexes_square_to_zero(k in any::<prop::sample::Index>(), raw in prop::collection::vec(0usize..64, 64)) {
        let m = &order4_modules()[k.index(order4_modules().len())];
        let (h, n) = (m.h_order(), m.i_order());
        let f1 = cochain_from_raw(1, h, n, &raw);
        let g1 = cochain_from_raw(1, h, n, &raw[3..]);
        let f2 = cochain_from_raw(2, h, n, &raw[5..]);
        let h2 = cochain_from_raw(2, h, n, &raw[11..]);
        prop_assert!(dd_scalar(m, &f1).is_empty());
        prop_assert!(dd_scalar(m, &f2).is_empty());
        let c1 = RbCochain::Degree1 { f: f1.clone(), g: g1.clone() };
        let c2 = RbCochain::Higher { f: f2, g: g1, h: h2 };
        prop_assert!(dd_combined(m, &c1).is_empty());
        prop_assert!(dd_combined(m, &c2).is_empty());
        let (a, b) = d2_rbe(m, &d1_rbe(m, &f1).unwrap()).unwrap();
        prop_assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn z2_is_a_group(k in any::<prop::sample::Index>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let mods = rb_modules_small();
        let m = &mods[k.index(mods.len())];
        let z = z2_rbe(m, DEFAULT_BUDGET).unwrap();
        let (p, q) = (&z[a.index(z.len())], &z[b.index(z.len())]);
        let s: CocyclePair = p.sub(q, m.i());
        prop_assert!(z.binary_search(&s).is_ok());
    }
}

fn rb_modules_small() -> &'static Vec<RbModule> {
    static MODS: OnceLock<Vec<RbModule>> = OnceLock::new();
    MODS.get_or_init(|| {
        let mut v = rb_modules("Z2", "Z4");
        v.extend(rb_modules("Z3", "Z2"));
        v.extend(rb_modules("Z2", "Z2xZ2"));
        v
    })
}
