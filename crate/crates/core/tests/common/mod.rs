//! Independent oracles and instance generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rbgroups::cohomology::{
    all_modules, delta, delta_rb, partial, partial_circ, partial_rb, Cochain, CocyclePair, RbCochain, RbModule, Sigma,
};
use rbgroups::{make_group, FiniteGroup};

pub fn grp(desc: &str) -> Arc<FiniteGroup> {
    Arc::new(make_group(desc).unwrap())
}

/// Every module on `(H, I)` satisfying the module condition.
pub fn rb_modules(h: &str, i: &str) -> Vec<RbModule> {
    all_modules(&grp(h), &grp(i)).unwrap().into_iter().filter(RbModule::is_rb_module).collect()
}

/// Oracle: `(τ, g)` is a 2-cocycle iff the table
/// `(h1,y1)(h2,y2) = (h1h2, τ(h1,h2) + μ_{h2}(y1) + y2)` is associative and
/// `R(h, y) = (R_H h, g(h) + R_I μ_{R_H h}(y))` satisfies the RB law.
/// Written from scratch here so it shares no code with the library builder.
pub fn oracle_is_rb_extension(m: &RbModule, tau: &Cochain, g: &Cochain) -> bool {
    let (hg, ig) = (m.h(), m.i());
    let n = ig.order();
    let size = hg.order() * n;
    let mul = |a: usize, b: usize| {
        let (h1, y1, h2, y2) = (a / n, a % n, b / n, b % n);
        let y = ig.mul(ig.mul(tau.get(&[h1, h2]), m.mu(h2, y1)), y2);
        hg.mul(h1, h2) * n + y
    };
    for a in 0..size {
        for b in 0..size {
            let ab = mul(a, b);
            for c in 0..size {
                if mul(ab, c) != mul(a, mul(b, c)) {
                    return false;
                }
            }
        }
    }
    let inv: Vec<usize> = (0..size).map(|a| (0..size).find(|&b| mul(a, b) == 0).unwrap()).collect();
    let r = |x: usize| {
        let (h, y) = (x / n, x % n);
        let rh = m.r_h(h);
        rh * n + ig.mul(g.get(&[h]), m.r_i(m.mu(rh, y)))
    };
    for x in 0..size {
        let rx = r(x);
        for y in 0..size {
            if mul(rx, r(y)) != r(mul(mul(mul(x, rx), y), inv[rx])) {
                return false;
            }
        }
    }
    true
}

/// Oracle `Z²`: every normalized pair passing [`oracle_is_rb_extension`], sorted.
pub fn oracle_z2(m: &RbModule) -> Vec<CocyclePair> {
    let (h, n) = (m.h_order(), m.i_order());
    let mut out = Vec::new();
    for tau in all_values(2, h, n) {
        for g in all_values(1, h, n) {
            if oracle_is_rb_extension(m, &tau, &g) {
                out.push(CocyclePair { tau: tau.clone(), g });
            }
        }
    }
    out.sort();
    out
}

fn slots(arity: usize, h: usize) -> usize {
    (h - 1).pow(arity as u32)
}

/// Every normalized cochain, via an odometer independent of the library's.
pub fn all_values(arity: usize, h: usize, n: usize) -> Vec<Cochain> {
    let k = slots(arity, h);
    let mut vals = vec![0; k];
    let mut out = Vec::new();
    loop {
        out.push(Cochain::from_values(arity, h, vals.clone()).unwrap());
        let mut j = 0;
        while j < k {
            vals[j] += 1;
            if vals[j] < n {
                break;
            }
            vals[j] = 0;
            j += 1;
        }
        if j == k {
            return out;
        }
    }
}

/// Cochains with exactly one nonzero coordinate, for every slot and value:
/// they generate the cochain group.
pub fn generators(arity: usize, h: usize, n: usize) -> Vec<Cochain> {
    let k = slots(arity, h);
    let mut out = Vec::new();
    for slot in 0..k {
        for v in 1..n {
            let mut vals = vec![0; k];
            vals[slot] = v;
            out.push(Cochain::from_values(arity, h, vals).unwrap());
        }
    }
    out
}

/// A cochain filled from `raw`, reduced mod `n` and cycled as needed.
pub fn cochain_from_raw(arity: usize, h: usize, n: usize, raw: &[usize]) -> Cochain {
    let k = slots(arity, h);
    let vals = (0..k).map(|j| raw[j % raw.len()] % n).collect();
    Cochain::from_values(arity, h, vals).unwrap()
}

/// Admissible σ for a module: the μ-twist and the trivial action, when valid.
pub fn sigmas(m: &RbModule) -> Vec<Sigma> {
    let trivial = Sigma::new(m, RbModule::trivial_action(m.h_order(), m.i_order()));
    [m.mu_twist(), trivial].into_iter().flatten().collect()
}

pub fn dd_scalar(m: &RbModule, f: &Cochain) -> Vec<&'static str> {
    let mut bad = Vec::new();
    if !delta(m, &delta(m, f)).is_zero() {
        bad.push("delta");
    }
    if !partial(m, &partial(m, f)).is_zero() {
        bad.push("partial");
    }
    for s in sigmas(m) {
        if !partial_circ(m, &partial_circ(m, f, &s), &s).is_zero() {
            bad.push("partial_circ");
        }
    }
    bad
}

pub fn dd_combined(m: &RbModule, c: &RbCochain) -> Vec<&'static str> {
    let mut bad = Vec::new();
    if m.action_commutes_with_ri() && !delta_rb(m, &delta_rb(m, c).unwrap()).unwrap().is_zero() {
        bad.push("delta_rb");
    }
    for s in sigmas(m) {
        if !partial_rb(m, &partial_rb(m, c, &s).unwrap(), &s).unwrap().is_zero() {
            bad.push("partial_rb");
        }
    }
    bad
}
