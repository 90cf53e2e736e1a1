//! Cochain complexes attached to a Rota-Baxter module.
//!
//! The kernel `I` is abelian but stored as an ordinary group table, so "+"
//! below is `I.mul` and "−" is `I.inv`. The action is a right action written
//! `μ_h(y)`; it is an anti-homomorphism, `μ_{h1 h2} = μ_{h2} ∘ μ_{h1}`.
//!
//! Sign conventions (all coboundaries use the standard alternating sign on
//! the action term):
//!
//! * `∂¹_RBE(θ) = (δ¹θ, Φ¹θ)` and
//!   `Φ²(f)(h1,h2) = −f(a,b) + R_I μ_{ab}(T_f(h1,h2))` with `a = R_H h1`,
//!   `b = R_H h2` and
//!   `T_f = f(h1 a, h2 a⁻¹) + μ_{h2 a⁻¹}(f(h1, a)) + f(h2, a⁻¹) − f(a, a⁻¹)`.
//!   With these, `g(h)` is exactly the `I`-component of `R_E(h, 0)` in the
//!   extension built from `(τ, g)`, and `∂¹Φ¹ = Φ²δ¹`.
//! * The degree-1 combined coboundary uses `f̄ − R_I(g)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{automorphisms, homomorphisms, FiniteGroup, GroupMap};
use crate::operators::RotaBaxterOperator;

/// Default bound on the number of brute-force candidates.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Why a candidate module fails [`is_rb_module`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModuleViolation {
    #[error("I is not abelian ({0} and {1} do not commute)")]
    NotAbelian(usize, usize),
    #[error("R_I is not an endomorphism of I")]
    EndomorphismLaw,
    #[error("wrong number of action maps")]
    ActionLength,
    #[error("mu_{0} is not an automorphism of I")]
    NotAutomorphism(usize),
    #[error("mu is not an anti-homomorphism at ({0}, {1})")]
    NotAntiHomomorphism(usize, usize),
    #[error("module condition fails at h={h}, z={z}")]
    Condition { h: usize, z: usize },
}

fn structural_violation(
    h: &FiniteGroup,
    i: &FiniteGroup,
    r_i: &GroupMap,
    mu: &[GroupMap],
) -> Option<ModuleViolation> {
    if let Some((a, b)) = i.non_commuting_pair() {
        return Some(ModuleViolation::NotAbelian(a, b));
    }
    if r_i.len() != i.order() || r_i.images().iter().any(|&v| v >= i.order()) || !r_i.is_homomorphism(i, i) {
        return Some(ModuleViolation::EndomorphismLaw);
    }
    if mu.len() != h.order() {
        return Some(ModuleViolation::ActionLength);
    }
    for (x, m) in mu.iter().enumerate() {
        if m.len() != i.order() || !m.is_bijective() || !m.is_homomorphism(i, i) {
            return Some(ModuleViolation::NotAutomorphism(x));
        }
    }
    for a in h.elements() {
        for b in h.elements() {
            if mu[h.mul(a, b)] != mu[b].compose(&mu[a]) {
                return Some(ModuleViolation::NotAntiHomomorphism(a, b));
            }
        }
    }
    None
}

/// `μ_{R(h)}(R_I z) = R_I(μ_{h R(h)}(z + R_I z) − μ_{R(h)}(R_I z))`
fn condition_violation(rh: &RotaBaxterOperator, i: &FiniteGroup, r_i: &GroupMap, mu: &[GroupMap]) -> Option<(usize, usize)> {
    let h = rh.group();
    for x in h.elements() {
        let r = rh.apply(x);
        let xr = h.mul(x, r);
        for z in i.elements() {
            let riz = r_i.apply(z);
            let lhs = mu[r].apply(riz);
            let inner = i.div(mu[xr].apply(i.mul(z, riz)), mu[r].apply(riz));
            if lhs != r_i.apply(inner) {
                return Some((x, z));
            }
        }
    }
    None
}

/// Full check: structure, anti-homomorphism, and the module condition.
pub fn is_rb_module(
    rh: &RotaBaxterOperator,
    i: &FiniteGroup,
    mu: &[GroupMap],
    r_i: &GroupMap,
) -> std::result::Result<(), ModuleViolation> {
    if let Some(v) = structural_violation(rh.group(), i, r_i, mu) {
        return Err(v);
    }
    match condition_violation(rh, i, r_i, mu) {
        Some((h, z)) => Err(ModuleViolation::Condition { h, z }),
        None => Ok(()),
    }
}

/// An abelian group `I` with endomorphism `R_I` and a right action of an
/// RB group `(H, R_H)`.
///
/// Construction checks everything except the module condition, which the
/// plain complexes do not need; see [`RbModule::check_condition`].
#[derive(Clone, Debug)]
pub struct RbModule {
    rh: RotaBaxterOperator,
    i: Arc<FiniteGroup>,
    r_i: GroupMap,
    mu: Vec<GroupMap>,
}

impl RbModule {
    pub fn new(rh: RotaBaxterOperator, i: Arc<FiniteGroup>, r_i: GroupMap, mu: Vec<GroupMap>) -> Result<Self> {
        if let Some(v) = structural_violation(rh.group(), &i, &r_i, &mu) {
            return Err(match v {
                ModuleViolation::NotAbelian(a, b) => Error::NotAbelian(a, b),
                other => Error::Module(other.to_string()),
            });
        }
        Ok(Self { rh, i, r_i, mu })
    }

    /// Like [`RbModule::new`] but also requires the module condition.
    pub fn new_checked(rh: RotaBaxterOperator, i: Arc<FiniteGroup>, r_i: GroupMap, mu: Vec<GroupMap>) -> Result<Self> {
        let m = Self::new(rh, i, r_i, mu)?;
        m.check_condition()?;
        Ok(m)
    }

    pub fn trivial_action(h_order: usize, i_order: usize) -> Vec<GroupMap> {
        vec![GroupMap::identity(i_order); h_order]
    }

    pub fn check_condition(&self) -> Result<()> {
        match condition_violation(&self.rh, &self.i, &self.r_i, &self.mu) {
            Some((h, z)) => Err(Error::Module(format!("module condition fails at h={h}, z={z}"))),
            None => Ok(()),
        }
    }

    pub fn is_rb_module(&self) -> bool {
        self.check_condition().is_ok()
    }

    /// `R_I ∘ μ_h = μ_h ∘ R_I` for every `h`.
    pub fn action_commutes_with_ri(&self) -> bool {
        self.mu.iter().all(|m| m.compose(&self.r_i) == self.r_i.compose(m))
    }

    pub fn h_op(&self) -> &RotaBaxterOperator {
        &self.rh
    }

    pub fn h(&self) -> &FiniteGroup {
        self.rh.group()
    }

    pub fn h_order(&self) -> usize {
        self.rh.group().order()
    }

    pub fn i(&self) -> &FiniteGroup {
        &self.i
    }

    pub fn i_arc(&self) -> &Arc<FiniteGroup> {
        &self.i
    }

    pub fn i_order(&self) -> usize {
        self.i.order()
    }

    pub fn r_i_map(&self) -> &GroupMap {
        &self.r_i
    }

    pub fn action(&self) -> &[GroupMap] {
        &self.mu
    }

    #[inline]
    pub fn r_h(&self, h: usize) -> usize {
        self.rh.apply(h)
    }

    #[inline]
    pub fn r_i(&self, y: usize) -> usize {
        self.r_i.apply(y)
    }

    #[inline]
    pub fn mu(&self, h: usize, y: usize) -> usize {
        self.mu[h].apply(y)
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.i.mul(a, b)
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.i.div(a, b)
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.i.inv(a)
    }

    fn sum(&self, terms: &[usize]) -> usize {
        self.i.product(terms)
    }

    /// `σ_h = μ_{R_H(h)}`, valid when `R_I` commutes with the action.
    pub fn mu_twist(&self) -> Result<Sigma> {
        let maps = self.h().elements().map(|h| self.mu[self.r_h(h)].clone()).collect();
        Sigma::new(self, maps)
    }

    pub fn zero_cochain(&self, arity: usize) -> Cochain {
        Cochain::zero(arity, self.h_order())
    }
}

/// All right actions of `h` on `i`, i.e. anti-homomorphisms `H → Aut(I)`,
/// as `μ_h = φ(h⁻¹)` for the homomorphisms `φ: H → Aut(I)`.
pub fn all_actions(h: &FiniteGroup, i: &FiniteGroup) -> Result<Vec<Vec<GroupMap>>> {
    let aut = automorphisms(i)?;
    let homs = homomorphisms(h, aut.as_group())?;
    Ok(homs
        .iter()
        .map(|phi| h.elements().map(|x| aut.maps()[phi.apply(h.inv(x))].clone()).collect())
        .collect())
}

/// Every structurally valid module on `(H, I)`: all RB operators on `H`,
/// all endomorphisms `R_I` and all actions. The module condition is not
/// imposed; filter with [`RbModule::is_rb_module`].
pub fn all_modules(h: &Arc<FiniteGroup>, i: &Arc<FiniteGroup>) -> Result<Vec<RbModule>> {
    let ops = crate::operators::enumerate_rb_operators(h)?;
    let endos = crate::group::endomorphisms(i)?;
    let actions = all_actions(h, i)?;
    let mut out = Vec::new();
    for rh in &ops {
        for r_i in &endos {
            for mu in &actions {
                out.push(RbModule::new(rh.clone(), Arc::clone(i), r_i.clone(), mu.clone())?);
            }
        }
    }
    Ok(out)
}

/// An action `σ` of the circle group `(H, ∘_{R_H})` on `I` with
/// `R_I σ_h = μ_{R_H(h)} R_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma {
    maps: Vec<GroupMap>,
}

impl Sigma {
    pub fn new(m: &RbModule, maps: Vec<GroupMap>) -> Result<Self> {
        let (h, i) = (m.h(), m.i());
        if maps.len() != h.order() {
            return Err(Error::WrongLength { expected: h.order(), got: maps.len() });
        }
        for s in &maps {
            if s.len() != i.order() || !s.is_bijective() || !s.is_homomorphism(i, i) {
                return Err(Error::Module("sigma_h is not an automorphism of I".into()));
            }
        }
        for a in h.elements() {
            for b in h.elements() {
                if maps[m.h_op().circle(a, b)] != maps[b].compose(&maps[a]) {
                    return Err(Error::Module(format!(
                        "sigma is not an anti-homomorphism of the circle group at ({a}, {b})"
                    )));
                }
            }
        }
        for x in h.elements() {
            for y in i.elements() {
                if m.r_i(maps[x].apply(y)) != m.mu(m.r_h(x), m.r_i(y)) {
                    return Err(Error::Intertwining { h: x, y });
                }
            }
        }
        Ok(Self { maps })
    }

    #[inline]
    pub fn apply(&self, h: usize, y: usize) -> usize {
        self.maps[h].apply(y)
    }

    pub fn maps(&self) -> &[GroupMap] {
        &self.maps
    }
}

/// A normalized cochain `Hⁿ → I`, stored on non-degenerate tuples only.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain {
    arity: usize,
    h_order: usize,
    values: Vec<usize>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}{:?}", self.arity, self.values)
    }
}

fn table_len(arity: usize, h_order: usize) -> usize {
    (h_order - 1).pow(arity as u32)
}

/// Odometer over the non-degenerate tuples `{1..m-1}^n`, in index order.
pub fn nondegenerate_tuples(arity: usize, h_order: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = table_len(arity, h_order);
    let base = h_order - 1;
    (0..total).map(move |mut k| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = k % base + 1;
            k /= base;
        }
        t
    })
}

impl Cochain {
    pub fn zero(arity: usize, h_order: usize) -> Self {
        Self { arity, h_order, values: vec![0; table_len(arity, h_order)] }
    }

    pub fn from_values(arity: usize, h_order: usize, values: Vec<usize>) -> Result<Self> {
        if values.len() != table_len(arity, h_order) {
            return Err(Error::Arity(format!(
                "a {arity}-cochain on a group of order {h_order} has {} values, got {}",
                table_len(arity, h_order),
                values.len()
            )));
        }
        Ok(Self { arity, h_order, values })
    }

    /// Evaluates `f` on every non-degenerate tuple.
    pub fn from_fn(arity: usize, h_order: usize, mut f: impl FnMut(&[usize]) -> usize) -> Self {
        let values = nondegenerate_tuples(arity, h_order).map(|t| f(&t)).collect();
        Self { arity, h_order, values }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn h_order(&self) -> usize {
        self.h_order
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    fn index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &t| acc * (self.h_order - 1) + (t - 1))
    }

    /// Value at `tuple`; 0 whenever some entry is the identity.
    #[inline]
    pub fn get(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity);
        if tuple.contains(&0) {
            0
        } else {
            self.values[self.index(tuple)]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Cochain, i: &FiniteGroup) -> Cochain {
        debug_assert_eq!((self.arity, self.h_order), (other.arity, other.h_order));
        Cochain {
            arity: self.arity,
            h_order: self.h_order,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| i.mul(a, b)).collect(),
        }
    }

    pub fn neg(&self, i: &FiniteGroup) -> Cochain {
        self.map_values(|v| i.inv(v))
    }

    pub fn sub(&self, other: &Cochain, i: &FiniteGroup) -> Cochain {
        self.add(&other.neg(i), i)
    }

    pub fn map_values(&self, f: impl Fn(usize) -> usize) -> Cochain {
        Cochain { arity: self.arity, h_order: self.h_order, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// `R_I ∘ f`
    pub fn apply_ri(&self, m: &RbModule) -> Cochain {
        self.map_values(|v| m.r_i(v))
    }

    /// `f̄(h1, ..., hn) = f(R_H h1, ..., R_H hn)`
    pub fn bar(&self, m: &RbModule) -> Cochain {
        Cochain::from_fn(self.arity, self.h_order, |t| {
            let rt: Vec<usize> = t.iter().map(|&h| m.r_h(h)).collect();
            self.get(&rt)
        })
    }

    pub fn to_json(&self) -> CochainJson {
        let values = nondegenerate_tuples(self.arity, self.h_order)
            .zip(&self.values)
            .filter(|(_, &v)| v != 0)
            .map(|(t, &v)| {
                let key: Vec<String> = t.iter().map(usize::to_string).collect();
                (format!("({})", key.join(",")), v)
            })
            .collect();
        CochainJson { arity: self.arity, values }
    }

    pub fn from_json(json: &CochainJson, h_order: usize) -> Result<Self> {
        let mut c = Cochain::zero(json.arity, h_order);
        for (key, &v) in &json.values {
            let inner = key.trim().trim_start_matches('(').trim_end_matches(')');
            let t: Vec<usize> = inner
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad tuple `{key}`"))))
                .collect::<Result<_>>()?;
            if t.len() != json.arity || t.iter().any(|&x| x >= h_order) {
                return Err(Error::Arity(format!("tuple `{key}` does not fit arity {}", json.arity)));
            }
            if t.contains(&0) {
                if v != 0 {
                    return Err(Error::Invalid(format!("nonzero value on degenerate tuple `{key}`")));
                }
                continue;
            }
            let idx = c.index(&t);
            c.values[idx] = v;
        }
        Ok(c)
    }
}

/// Serialized cochain: only nonzero entries on non-degenerate tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainJson {
    pub arity: usize,
    pub values: std::collections::BTreeMap<String, usize>,
}

/// All normalized cochains of a given arity, in lexicographic order of values.
pub fn all_cochains(arity: usize, h_order: usize, i_order: usize) -> impl Iterator<Item = Cochain> {
    let len = table_len(arity, h_order);
    let total = (i_order as u128).pow(len as u32);
    (0..total).map(move |mut k| {
        let mut values = vec![0; len];
        for slot in values.iter_mut().rev() {
            *slot = (k % i_order as u128) as usize;
            k /= i_order as u128;
        }
        Cochain { arity, h_order, values }
    })
}

/// Shared coboundary: `f(h2..) + Σ (−1)^k f(.., h_k·h_{k+1}, ..) + (−1)^{n+1} act(h_{n+1}, f(h1..hn))`.
fn coboundary(
    m: &RbModule,
    f: &Cochain,
    prod: impl Fn(usize, usize) -> usize,
    act: impl Fn(usize, usize) -> usize,
) -> Cochain {
    let n = f.arity;
    let i = m.i();
    Cochain::from_fn(n + 1, f.h_order, |t| {
        let mut acc = f.get(&t[1..]);
        let mut buf = vec![0; n];
        for k in 0..n {
            buf[..k].copy_from_slice(&t[..k]);
            buf[k] = prod(t[k], t[k + 1]);
            buf[k + 1..].copy_from_slice(&t[k + 2..]);
            let v = f.get(&buf);
            acc = if k % 2 == 0 { i.div(acc, v) } else { i.mul(acc, v) };
        }
        let last = act(t[n], f.get(&t[..n]));
        if n % 2 == 0 {
            i.div(acc, last)
        } else {
            i.mul(acc, last)
        }
    })
}

/// `δⁿ`: coboundary for `(H, ·)` acting by `μ`.
pub fn delta(m: &RbModule, f: &Cochain) -> Cochain {
    let h = m.h();
    coboundary(m, f, |a, b| h.mul(a, b), |x, y| m.mu(x, y))
}

/// `∂ⁿ`: coboundary for `(H, ∘_{R_H})` acting by `y ↦ μ_{R_H(h)}(y)`.
pub fn partial(m: &RbModule, f: &Cochain) -> Cochain {
    let rh = m.h_op();
    coboundary(m, f, |a, b| rh.circle(a, b), |x, y| m.mu(m.r_h(x), y))
}

/// `∂ⁿ_∘`: coboundary for `(H, ∘_{R_H})` acting by `σ`.
pub fn partial_circ(m: &RbModule, f: &Cochain, sigma: &Sigma) -> Cochain {
    let rh = m.h_op();
    coboundary(m, f, |a, b| rh.circle(a, b), |x, y| sigma.apply(x, y))
}

/// Elements of the combined complex: `(f, g)` in degree 1, `(f, g, h)` above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RbCochain {
    Degree1 { f: Cochain, g: Cochain },
    Higher { f: Cochain, g: Cochain, h: Cochain },
}

impl RbCochain {
    pub fn degree(&self) -> usize {
        match self {
            RbCochain::Degree1 { .. } => 1,
            RbCochain::Higher { f, .. } => f.arity,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RbCochain::Degree1 { f, g } => f.is_zero() && g.is_zero(),
            RbCochain::Higher { f, g, h } => f.is_zero() && g.is_zero() && h.is_zero(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            RbCochain::Degree1 { f, g } => f.arity == 1 && g.arity == 1,
            RbCochain::Higher { f, g, h } => f.arity >= 2 && g.arity + 1 == f.arity && h.arity == f.arity,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Arity("combined cochain components have inconsistent arities".into()))
        }
    }
}

fn combined(m: &RbModule, c: &RbCochain, last: impl Fn(&Cochain) -> Cochain) -> Result<RbCochain> {
    c.validate()?;
    let i = m.i();
    Ok(match c {
        RbCochain::Degree1 { f, g } => RbCochain::Higher {
            f: delta(m, f),
            g: f.bar(m).sub(&g.apply_ri(m), i),
            h: last(g),
        },
        RbCochain::Higher { f, g, h } => {
            let n = f.arity;
            let twist = f.bar(m).sub(&h.apply_ri(m), i);
            let twist = if n % 2 == 1 { twist } else { twist.neg(i) };
            RbCochain::Higher { f: delta(m, f), g: partial(m, g).add(&twist, i), h: last(h) }
        }
    })
}

/// `δ_RB`; assumes `R_I` commutes with the action for `δ_RB ∘ δ_RB = 0`.
pub fn delta_rb(m: &RbModule, c: &RbCochain) -> Result<RbCochain> {
    combined(m, c, |h| partial(m, h))
}

/// `∂_RB`, using `∂_∘` with `σ` in the last slot.
pub fn partial_rb(m: &RbModule, c: &RbCochain, sigma: &Sigma) -> Result<RbCochain> {
    combined(m, c, |h| partial_circ(m, h, sigma))
}

/// `Φ¹(θ)(h) = R_I(μ_{R_H h}(θ(h))) − θ(R_H h)`
pub fn phi1(m: &RbModule, theta: &Cochain) -> Cochain {
    Cochain::from_fn(1, m.h_order(), |t| {
        let r = m.r_h(t[0]);
        m.sub(m.r_i(m.mu(r, theta.get(&[t[0]]))), theta.get(&[r]))
    })
}

/// `T_f(h1, h2)`, the argument of `R_I μ_{R(h1∘h2)}` in `Φ²`.
fn phi2_inner(m: &RbModule, f: &Cochain, h1: usize, h2: usize) -> usize {
    let h = m.h();
    let a = m.r_h(h1);
    let ai = h.inv(a);
    m.sum(&[
        f.get(&[h.mul(h1, a), h.mul(h2, ai)]),
        m.mu(h.mul(h2, ai), f.get(&[h1, a])),
        f.get(&[h2, ai]),
        m.neg(f.get(&[a, ai])),
    ])
}

/// `Φ²(f)(h1,h2) = −f(R h1, R h2) + R_I(μ_{R(h1∘h2)}(T_f(h1,h2)))`
pub fn phi2(m: &RbModule, f: &Cochain) -> Cochain {
    let h = m.h();
    Cochain::from_fn(2, m.h_order(), |t| {
        let (a, b) = (m.r_h(t[0]), m.r_h(t[1]));
        let inner = phi2_inner(m, f, t[0], t[1]);
        m.sub(m.r_i(m.mu(h.mul(a, b), inner)), f.get(&[a, b]))
    })
}

/// A point of `TC²_RBE = C² ⊕ C¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CocyclePair {
    pub tau: Cochain,
    pub g: Cochain,
}

impl CocyclePair {
    pub fn zero(h_order: usize) -> Self {
        Self { tau: Cochain::zero(2, h_order), g: Cochain::zero(1, h_order) }
    }

    pub fn add(&self, other: &Self, i: &FiniteGroup) -> Self {
        Self { tau: self.tau.add(&other.tau, i), g: self.g.add(&other.g, i) }
    }

    pub fn neg(&self, i: &FiniteGroup) -> Self {
        Self { tau: self.tau.neg(i), g: self.g.neg(i) }
    }

    pub fn sub(&self, other: &Self, i: &FiniteGroup) -> Self {
        self.add(&other.neg(i), i)
    }

    pub fn is_zero(&self) -> bool {
        self.tau.is_zero() && self.g.is_zero()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "tau": self.tau.to_json(), "g": self.g.to_json() })
    }
}

/// `∂¹_RBE(θ) = (δ¹θ, Φ¹θ)`
pub fn d1_rbe(m: &RbModule, theta: &Cochain) -> Result<CocyclePair> {
    if theta.arity != 1 {
        return Err(Error::Arity("d1_RBE takes a 1-cochain".into()));
    }
    Ok(CocyclePair { tau: delta(m, theta), g: phi1(m, theta) })
}

/// `β(h1,h2) = ∂¹g(h1,h2) − R_I(μ_{R h2}(μ_{h2}(g(h1)) − g(h1))) − Φ²(f)(h1,h2)`
pub fn beta(m: &RbModule, f: &Cochain, g: &Cochain) -> Cochain {
    let dg = partial(m, g);
    let p2 = phi2(m, f);
    Cochain::from_fn(2, m.h_order(), |t| {
        let (h1, h2) = (t[0], t[1]);
        let g1 = g.get(&[h1]);
        let twist = m.r_i(m.mu(m.r_h(h2), m.sub(m.mu(h2, g1), g1)));
        m.sum(&[dg.get(t), m.neg(twist), m.neg(p2.get(t))])
    })
}

/// `∂²_RBE(f, g) = (δ²f, β)`
pub fn d2_rbe(m: &RbModule, pair: &CocyclePair) -> Result<(Cochain, Cochain)> {
    if pair.tau.arity != 2 || pair.g.arity != 1 {
        return Err(Error::Arity("d2_RBE takes a (2-cochain, 1-cochain) pair".into()));
    }
    Ok((delta(m, &pair.tau), beta(m, &pair.tau, &pair.g)))
}

/// First failing tuple of the 2-cocycle conditions, if any.
pub fn cocycle_violation(m: &RbModule, pair: &CocyclePair) -> Option<Error> {
    let h = m.h_order();
    let dtau = delta(m, &pair.tau);
    if let Some(t) = nondegenerate_tuples(3, h).find(|t| dtau.get(t) != 0) {
        return Some(Error::NotCocycle { component: "group", tuple: t });
    }
    let b = beta(m, &pair.tau, &pair.g);
    nondegenerate_tuples(2, h)
        .find(|t| b.get(t) != 0)
        .map(|t| Error::NotCocycle { component: "operator", tuple: t })
}

pub fn is_z2_rbe(m: &RbModule, pair: &CocyclePair) -> bool {
    cocycle_violation(m, pair).is_none()
}

/// `λ ∈ Z¹_RBE`: `λ(h1 h2) = λ(h2) + μ_{h2}(λ(h1))` and `λ(R h) = R_I(μ_{R h}(λ(h)))`.
pub fn is_z1_rbe(m: &RbModule, lambda: &Cochain) -> bool {
    delta(m, lambda).is_zero() && phi1(m, lambda).is_zero()
}

fn check_budget(candidates: u128, budget: u128) -> Result<()> {
    if candidates > budget {
        Err(Error::BudgetExceeded { candidates, budget })
    } else {
        Ok(())
    }
}

fn pow_u128(base: usize, exp: usize) -> u128 {
    (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

/// `Z¹_RBE = Ker ∂¹_RBE`, sorted.
pub fn z1_rbe(m: &RbModule, budget: u128) -> Result<Vec<Cochain>> {
    let h = m.h_order();
    check_budget(pow_u128(m.i_order(), h - 1), budget)?;
    Ok(all_cochains(1, h, m.i_order()).filter(|l| is_z1_rbe(m, l)).collect())
}

/// `B²_RBE = Im ∂¹_RBE`, sorted and deduplicated.
pub fn b2_rbe(m: &RbModule, budget: u128) -> Result<Vec<CocyclePair>> {
    let h = m.h_order();
    check_budget(pow_u128(m.i_order(), h - 1), budget)?;
    let mut out: Vec<CocyclePair> = all_cochains(1, h, m.i_order()).map(|t| d1_rbe(m, &t)).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// `Z²_RBE = Ker ∂²_RBE`, sorted. Group 2-cocycles are found first, then
/// the `g` compatible with each.
pub fn z2_rbe(m: &RbModule, budget: u128) -> Result<Vec<CocyclePair>> {
    m.check_condition()?;
    let h = m.h_order();
    let k = h - 1;
    check_budget(pow_u128(m.i_order(), k * k + k), budget)?;
    let mut out = Vec::new();
    for tau in all_cochains(2, h, m.i_order()) {
        if !delta(m, &tau).is_zero() {
            continue;
        }
        for g in all_cochains(1, h, m.i_order()) {
            if beta(m, &tau, &g).is_zero() {
                out.push(CocyclePair { tau: tau.clone(), g });
            }
        }
    }
    Ok(out)
}

/// `H²_RBE = Z²_RBE / B²_RBE` with canonical coset representatives.
#[derive(Clone, Debug)]
pub struct H2 {
    z2: Vec<CocyclePair>,
    b2: Vec<CocyclePair>,
    representatives: Vec<CocyclePair>,
    class_of: HashMap<CocyclePair, usize>,
}

impl H2 {
    pub fn z2(&self) -> &[CocyclePair] {
        &self.z2
    }

    pub fn b2(&self) -> &[CocyclePair] {
        &self.b2
    }

    /// Lexicographically least member of each coset, in increasing order.
    pub fn representatives(&self) -> &[CocyclePair] {
        &self.representatives
    }

    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    /// Index of the class of a 2-cocycle, or `None` when it is not in `Z²`.
    pub fn class_of(&self, pair: &CocyclePair) -> Option<usize> {
        self.class_of.get(pair).copied()
    }

    pub fn report(&self) -> H2Report {
        H2Report {
            order_z2: self.z2.len(),
            order_b2: self.b2.len(),
            order_h2: self.order(),
            representatives: self.representatives.iter().map(CocyclePair::to_json).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct H2Report {
    #[serde(rename = "order_Z2")]
    pub order_z2: usize,
    #[serde(rename = "order_B2")]
    pub order_b2: usize,
    #[serde(rename = "order_H2")]
    pub order_h2: usize,
    pub representatives: Vec<serde_json::Value>,
}

pub fn h2_rbe(m: &RbModule, budget: u128) -> Result<H2> {
    let z2 = z2_rbe(m, budget)?;
    let b2 = b2_rbe(m, budget)?;
    let i = m.i();
    let mut class_of = HashMap::with_capacity(z2.len());
    let mut representatives = Vec::new();
    for z in &z2 {
        if class_of.contains_key(z) {
            continue;
        }
        // z2 is sorted, so the first unseen member is the least of its coset
        let id = representatives.len();
        representatives.push(z.clone());
        for b in &b2 {
            let member = z.add(b, i);
            if !class_of.contains_key(&member) && member >= *z {
                class_of.insert(member, id);
            } else if class_of.get(&member).is_some_and(|&c| c != id) {
                return Err(Error::Invalid("cosets of B² overlap; B² is not a subgroup of Z²".into()));
            }
        }
    }
    if class_of.len() != z2.len() {
        return Err(Error::Invalid("B² is not contained in Z²".into()));
    }
    Ok(H2 { z2, b2, representatives, class_of })
}
