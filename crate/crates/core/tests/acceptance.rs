//! One test per acceptance criterion; each prints a single PASS/FAIL line.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rbgroups::cohomology::{
    b2_rbe, d1_rbe, d2_rbe, delta, h2_rbe, partial, phi1, phi2, Cochain, RbCochain, RbModule, DEFAULT_BUDGET,
};
use rbgroups::extensions::{build_abelian_extension, central_action, classify_abelian, extract_cocycle, h2_alpha, verify_triplet, Coupling};
use rbgroups::group::{endomorphisms, GroupMap};
use rbgroups::operators::{enumerate_rb_operators, is_rb_operator, OperatorRecord};
use rbgroups::wells::{check_wells_exactness, z1_iso};
use rbgroups::RotaBaxterOperator;

use common::*;

fn report(n: usize, what: &str, ok: bool, detail: String, elapsed: Duration) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {n:>2}: {what} ({detail}; {:.2}s)", elapsed.as_secs_f64());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn fixture_images(g: &rbgroups::FiniteGroup, name: &str) -> Vec<usize> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"));
    OperatorRecord::load(path).unwrap().resolve(g).unwrap()
}

/// Count and membership of listed operators.
fn enumeration_case(desc: &str, fixtures: &[&str]) -> (usize, Vec<String>) {
    let g = grp(desc);
    let ops = enumerate_rb_operators(&g).unwrap();
    let missing = fixtures
        .iter()
        .filter(|f| {
            let images = fixture_images(&g, f);
            !ops.iter().any(|r| r.images() == images.as_slice())
        })
        .map(|f| f.to_string())
        .collect();
    (ops.len(), missing)
}

#[test]
fn criterion_01_s3_enumeration() {
    let t = Instant::now();
    let names: Vec<String> = (1..=7).map(|k| format!("s3_R{k}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let (count, missing) = enumeration_case("S3", &refs);
    let el = t.elapsed();
    report(1, "S3 has 8 operators, R1-R7 listed", count == 8 && missing.is_empty() && el < Duration::from_secs(1), format!("count {count}, missing {missing:?}"), el);
}

#[test]
fn criterion_02_d4_enumeration() {
    let t = Instant::now();
    let (count, missing) = enumeration_case("D4", &["d4_R1", "d4_R2", "d4_R3"]);
    let el = t.elapsed();
    report(2, "D4 has 52 operators, R1-R3 listed", count == 52 && missing.is_empty() && el < Duration::from_secs(30), format!("count {count}, missing {missing:?}"), el);
}

#[test]
fn criterion_03_q8_enumeration() {
    let t = Instant::now();
    let (count, missing) = enumeration_case("Q8", &["q8_R1", "q8_R2"]);
    let el = t.elapsed();
    report(3, "Q8 has 8 operators, both listed", count == 8 && missing.is_empty() && el < Duration::from_secs(30), format!("count {count}, missing {missing:?}"), el);
}

#[test]
fn criterion_04_brace_induction() {
    let mut ops = Vec::new();
    for d in ["S3", "D4", "Q8"] {
        ops.extend(enumerate_rb_operators(&grp(d)).unwrap());
    }
    let t = Instant::now();
    let bad = ops.iter().filter(|r| !r.induced_skew_brace().is_skew_brace()).count();
    let el = t.elapsed();
    report(4, "every operator induces a skew brace", bad == 0 && el < Duration::from_secs(5), format!("{} operators, {bad} failures", ops.len()), el);
}

#[test]
fn criterion_05_abelian_operators_are_endomorphisms() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for d in ["Z2", "Z3", "Z4", "Z2xZ2", "Z6"] {
        let g = grp(d);
        let ops: Vec<GroupMap> = enumerate_rb_operators(&g).unwrap().iter().map(|r| r.map().clone()).collect();
        if ops != endomorphisms(&g).unwrap() {
            bad.push(d);
        }
    }
    report(5, "RB operators equal endomorphisms on abelian groups", bad.is_empty(), format!("mismatches {bad:?}"), t.elapsed());
}

fn dd_rbe(m: &RbModule, theta: &Cochain) -> bool {
    let (a, b) = d2_rbe(m, &d1_rbe(m, theta).unwrap()).unwrap();
    a.is_zero() && b.is_zero()
}

#[test]
fn criterion_06_cochain_complexes() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for h in ["Z1", "Z2", "Z3"] {
        for i in ["Z2", "Z3", "Z4", "Z2xZ2"] {
            for m in rb_modules(h, i) {
                let (ho, n) = (m.h_order(), m.i_order());
                let ones = all_values(1, ho, n);
                for f in &ones {
                    checked += 1;
                    failures.extend(dd_scalar(&m, f));
                    if !dd_rbe(&m, f) {
                        failures.push("rbe");
                    }
                    for g in &ones {
                        failures.extend(dd_combined(&m, &RbCochain::Degree1 { f: f.clone(), g: g.clone() }));
                    }
                }
                for f in all_values(2, ho, n) {
                    checked += 1;
                    failures.extend(dd_scalar(&m, &f));
                }
                let (z1, z2) = (Cochain::zero(1, ho), Cochain::zero(2, ho));
                for f in generators(2, ho, n) {
                    failures.extend(dd_combined(&m, &RbCochain::Higher { f: f.clone(), g: z1.clone(), h: z2.clone() }));
                    failures.extend(dd_combined(&m, &RbCochain::Higher { f: z2.clone(), g: z1.clone(), h: f }));
                }
                for g in generators(1, ho, n) {
                    failures.extend(dd_combined(&m, &RbCochain::Higher { f: z2.clone(), g, h: z2.clone() }));
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut mods = Vec::new();
    for h in ["Z4", "Z2xZ2"] {
        for i in ["Z2", "Z3", "Z4", "Z2xZ2"] {
            mods.extend(rb_modules(h, i));
        }
    }
    let random = 200;
    for _ in 0..random {
        let m = &mods[rng.gen_range(0..mods.len())];
        let (ho, n) = (m.h_order(), m.i_order());
        let raw: Vec<usize> = (0..32).map(|_| rng.gen_range(0..n)).collect();
        let f1 = cochain_from_raw(1, ho, n, &raw);
        let g1 = cochain_from_raw(1, ho, n, &raw[4..]);
        let f2 = cochain_from_raw(2, ho, n, &raw[7..]);
        let h2 = cochain_from_raw(2, ho, n, &raw[13..]);
        failures.extend(dd_scalar(m, &f1));
        failures.extend(dd_scalar(m, &f2));
        failures.extend(dd_combined(m, &RbCochain::Degree1 { f: f1.clone(), g: g1.clone() }));
        failures.extend(dd_combined(m, &RbCochain::Higher { f: f2, g: g1, h: h2 }));
        if !dd_rbe(m, &f1) {
            failures.push("rbe");
        }
    }
    let el = t.elapsed();
    report(
        6,
        "d∘d = 0 for δ, ∂, ∂_∘, δ_RB, ∂_RB, ∂_RBE",
        failures.is_empty() && el < Duration::from_secs(60),
        format!("{checked} exhaustive cochains, {random} random at order 4, failures {failures:?}"),
        el,
    );
}

fn criterion_7_modules() -> Vec<RbModule> {
    let mut v = rb_modules("Z2", "Z2");
    v.extend(rb_modules("Z2", "Z4"));
    v
}

#[test]
fn criterion_07_roundtrip() {
    let t = Instant::now();
    let (mut pairs, mut bad, mut nontrivial_actions) = (0, 0, 0);
    let modules = criterion_7_modules();
    for m in &modules {
        if !m.action()[1].is_identity() {
            nontrivial_actions += 1;
        }
        for p in h2_rbe(m, DEFAULT_BUDGET).unwrap().z2() {
            pairs += 1;
            let ok = build_abelian_extension(m, p).is_ok_and(|ae| {
                let e = ae.extension();
                is_rb_operator(e.group(), e.e().images()) && extract_cocycle(&ae, e.section()).is_ok_and(|q| q == *p)
            });
            if !ok {
                bad += 1;
            }
        }
    }
    let el = t.elapsed();
    report(
        7,
        "build then extract returns (τ, g)",
        bad == 0 && nontrivial_actions > 0 && el < Duration::from_secs(60),
        format!("{} modules ({nontrivial_actions} with nontrivial action), {pairs} cocycles, {bad} failures", modules.len()),
        el,
    );
}

#[test]
fn criterion_08_bijection() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let modules = criterion_7_modules();
    for (k, m) in modules.iter().enumerate() {
        let (rep, _) = classify_abelian(m, DEFAULT_BUDGET).unwrap();
        let quotient = oracle_z2(m).len() / b2_rbe(m, DEFAULT_BUDGET).unwrap().len();
        if rep.num_classes != quotient {
            bad.push((k, rep.num_classes, quotient));
        }
    }
    report(8, "extension classes = |Z²|/|B²|", bad.is_empty(), format!("{} modules, mismatches {bad:?}", modules.len()), t.elapsed());
}

#[test]
fn criterion_09_central_identity() {
    let t = Instant::now();
    let (mut n, mut bad) = (0, 0);
    for h in ["Z1", "Z2", "Z3"] {
        for i in ["Z2", "Z3", "Z4", "Z2xZ2"] {
            for m in rb_modules(h, i).into_iter().filter(|m| m.action().iter().all(GroupMap::is_identity)) {
                for theta in all_values(1, m.h_order(), m.i_order()) {
                    n += 1;
                    if partial(&m, &phi1(&m, &theta)) != phi2(&m, &delta(&m, &theta)) {
                        bad += 1;
                    }
                }
            }
        }
    }
    report(9, "∂¹Φ¹ = Φ²δ¹ for trivial actions", bad == 0, format!("{n} cochains, {bad} failures"), t.elapsed());
}

#[test]
fn criterion_10_wells() {
    let t = Instant::now();
    let mut cases = Vec::new();
    // direct product Z2 × Z4 with the inversion operator on Z2
    let (h, i) = (grp("Z2"), grp("Z4"));
    let m = RbModule::new_checked(RotaBaxterOperator::inversion(h), i, GroupMap::identity(4), RbModule::trivial_action(2, 4)).unwrap();
    cases.push(("direct product", build_abelian_extension(&m, &rbgroups::cohomology::CocyclePair::zero(2)).unwrap()));
    // first extension with τ ≢ 0 and nontrivial ω, then one with nontrivial action
    let mut twisted = None;
    let mut acting = None;
    let modules = rb_modules("Z2", "Z2xZ2").into_iter().chain(rb_modules("Z2", "Z4")).chain(rb_modules("Z3", "Z3"));
    for m in modules {
        let h2 = h2_rbe(&m, DEFAULT_BUDGET).unwrap();
        for p in h2.representatives().iter().filter(|p| !p.tau.is_zero()) {
            let ae = build_abelian_extension(&m, p).unwrap();
            if twisted.is_none() {
                twisted = Some(ae.clone());
            }
            if acting.is_none() && !m.action()[1].is_identity() {
                acting = Some(ae);
            }
        }
    }
    cases.push(("τ ≠ 0", twisted.unwrap()));
    cases.push(("τ ≠ 0, nontrivial action", acting.unwrap()));
    let mut details = Vec::new();
    let mut ok = true;
    for (name, ae) in &cases {
        let r = check_wells_exactness(ae, DEFAULT_BUDGET).unwrap();
        let iso = z1_iso(ae, DEFAULT_BUDGET);
        let good = r.passed() && iso.is_ok() && r.z1_order == r.aut_hi_order && !ae.pair().tau.is_zero() == (*name != "direct product");
        ok &= good;
        details.push(format!("{name}: |Z¹|={} |Aut_I|={} |C_μ|={} |H²|={} ok={good}", r.z1_order, r.aut_i_order, r.cmu_order, r.h2_order));
    }
    let el = t.elapsed();
    report(10, "Wells sequence exact, ω a derivation", ok && el < Duration::from_secs(120), details.join("; "), el);
}

#[test]
fn criterion_11_nonabelian_census() {
    let t = Instant::now();
    let (h, i) = (grp("Z2"), grp("D4"));
    let (mut cases, mut triplets, mut unverified, mut not_free) = (0, 0, 0, 0);
    for rh in enumerate_rb_operators(&h).unwrap() {
        for ri in enumerate_rb_operators(&i).unwrap() {
            cases += 1;
            let census = h2_alpha(&rh, &ri, &Coupling::trivial(2), 1_000_000).unwrap();
            triplets += census.triplets().len();
            unverified += census.triplets().iter().filter(|t| verify_triplet(t, &rh, &ri).is_err()).count();
            let action = central_action(&rh, &ri, &census, DEFAULT_BUDGET).unwrap();
            if !action.free {
                not_free += 1;
            }
        }
    }
    let el = t.elapsed();
    report(
        11,
        "Z2 by D4 census verified, central action free",
        unverified == 0 && not_free == 0 && triplets > 0 && el < Duration::from_secs(120),
        format!("{cases} operator pairs, {triplets} triplets, {unverified} unverified, {not_free} non-free"),
        el,
    );
}
