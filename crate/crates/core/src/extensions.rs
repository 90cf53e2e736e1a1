//! Rota-Baxter extensions `0 → (I, R_I) → (E, R_E) → (H, R_H) → 0`.
//!
//! Extensions built here live on the carrier `H × I` with `(h, y)` at index
//! `h·|I| + y`. The group law is `(h1,y1)(h2,y2) = (h1h2, τ(h1,h2)·μ_{h2}(y1)·y2)`
//! and the canonical section is `h ↦ (h, e)`.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::cohomology::{h2_rbe, nondegenerate_tuples, Cochain, CocyclePair, RbModule, H2};
use crate::error::{Error, Result};
use crate::group::{automorphisms, center, quotient, subgroup_as_group, AutomorphismGroup, FiniteGroup, GroupMap};
use crate::operators::{rb_violation, RotaBaxterOperator};

/// An RB extension with its structure maps, all verified at construction.
#[derive(Clone, Debug)]
pub struct Extension {
    h: RotaBaxterOperator,
    i: RotaBaxterOperator,
    e: RotaBaxterOperator,
    include: GroupMap,
    project: GroupMap,
    section: GroupMap,
    /// `include⁻¹` on the kernel, `None` elsewhere.
    kernel_index: Vec<Option<usize>>,
}

impl Extension {
    /// Checks exactness, that `include` and `project` are RB morphisms, and
    /// that `section` is an st-section.
    pub fn new(
        h: RotaBaxterOperator,
        i: RotaBaxterOperator,
        e: RotaBaxterOperator,
        include: GroupMap,
        project: GroupMap,
        section: GroupMap,
    ) -> Result<Self> {
        let (hg, ig, eg) = (h.group(), i.group(), e.group());
        let include = GroupMap::checked(ig, eg, include.into_images())?;
        let project = GroupMap::checked(eg, hg, project.into_images())?;
        if let Some((a, b)) = include.homomorphism_violation(ig, eg) {
            return Err(Error::NotHomomorphism(a, b));
        }
        if let Some((a, b)) = project.homomorphism_violation(eg, hg) {
            return Err(Error::NotHomomorphism(a, b));
        }
        let mut kernel_index = vec![None; eg.order()];
        for y in ig.elements() {
            let x = include.apply(y);
            if kernel_index[x].is_some() {
                return Err(Error::Invalid("inclusion is not injective".into()));
            }
            kernel_index[x] = Some(y);
        }
        let mut hit = vec![false; hg.order()];
        for x in eg.elements() {
            hit[project.apply(x)] = true;
            if (project.apply(x) == 0) != kernel_index[x].is_some() {
                return Err(Error::Invalid(format!("sequence is not exact at element {x}")));
            }
        }
        if hit.contains(&false) {
            return Err(Error::Invalid("projection is not surjective".into()));
        }
        if let Some(y) = ig.elements().find(|&y| e.apply(include.apply(y)) != include.apply(i.apply(y))) {
            return Err(Error::Invalid(format!("inclusion is not an RB morphism at {y}")));
        }
        if let Some(x) = eg.elements().find(|&x| project.apply(e.apply(x)) != h.apply(project.apply(x))) {
            return Err(Error::Invalid(format!("projection is not an RB morphism at {x}")));
        }
        let ext = Self { h, i, e, include, project, section: GroupMap::identity(0), kernel_index };
        ext.check_section(&section)?;
        Ok(Self { section, ..ext })
    }

    pub fn h(&self) -> &RotaBaxterOperator {
        &self.h
    }

    pub fn i(&self) -> &RotaBaxterOperator {
        &self.i
    }

    pub fn e(&self) -> &RotaBaxterOperator {
        &self.e
    }

    pub fn group(&self) -> &FiniteGroup {
        self.e.group()
    }

    pub fn include(&self) -> &GroupMap {
        &self.include
    }

    pub fn project(&self) -> &GroupMap {
        &self.project
    }

    pub fn section(&self) -> &GroupMap {
        &self.section
    }

    /// `include⁻¹(x)` for `x` in the kernel.
    pub fn kernel_element(&self, x: usize) -> Option<usize> {
        self.kernel_index[x]
    }

    pub fn check_section(&self, s: &GroupMap) -> Result<()> {
        let hg = self.h.group();
        if s.len() != hg.order() || s.images().iter().any(|&x| x >= self.group().order()) {
            return Err(Error::NotSection("wrong shape".into()));
        }
        if s.apply(0) != 0 {
            return Err(Error::NotSection("s(e) is not the identity".into()));
        }
        if let Some(h) = hg.elements().find(|&h| self.project.apply(s.apply(h)) != h) {
            return Err(Error::NotSection(format!("π(s({h})) ≠ {h}")));
        }
        Ok(())
    }

    /// All st-sections, in lexicographic order.
    pub fn all_sections(&self) -> Vec<GroupMap> {
        let hg = self.h.group();
        let fibres: Vec<Vec<usize>> = hg
            .elements()
            .map(|h| if h == 0 { vec![0] } else { self.group().elements().filter(|&x| self.project.apply(x) == h).collect() })
            .collect();
        fibres.into_iter().multi_cartesian_product().map(GroupMap::new).collect()
    }

    /// A section that is a group homomorphism, if one exists.
    pub fn homomorphic_section(&self) -> Option<GroupMap> {
        let hg = self.h.group();
        self.all_sections().into_iter().find(|s| s.is_homomorphism(hg, self.group()))
    }

    /// Extracts `(μ, τ, g)` along an st-section:
    /// `μ_h(y) = s(h)⁻¹ y s(h)`, `τ(h1,h2) = s(h1h2)⁻¹ s(h1) s(h2)`,
    /// `g(h) = s(R_H h)⁻¹ R_E(s(h))`.
    pub fn extract_triplet(&self, s: &GroupMap) -> Result<Triplet> {
        self.check_section(s)?;
        let (hg, eg) = (self.h.group(), self.group());
        let back = |x: usize| self.kernel_index[x].expect("element lies in the kernel");
        let mu = hg
            .elements()
            .map(|h| {
                let sh = s.apply(h);
                GroupMap::new(
                    self.i.group().elements().map(|y| back(eg.mul(eg.mul(eg.inv(sh), self.include.apply(y)), sh))).collect(),
                )
            })
            .collect();
        let m = hg.order();
        let tau = Cochain::from_fn(2, m, |t| {
            let (a, b) = (t[0], t[1]);
            back(eg.mul(eg.inv(s.apply(hg.mul(a, b))), eg.mul(s.apply(a), s.apply(b))))
        });
        let g = Cochain::from_fn(1, m, |t| {
            let h = t[0];
            back(eg.mul(eg.inv(s.apply(self.h.apply(h))), self.e.apply(s.apply(h))))
        });
        Ok(Triplet { mu, tau, g })
    }
}

fn pair_labels(hg: &FiniteGroup, ig: &FiniteGroup) -> Vec<String> {
    let n = ig.order();
    (0..hg.order() * n).map(|x| format!("({},{})", hg.label(x / n), ig.label(x % n))).collect()
}

/// Builds `E` on `H × I` from a triplet and checks the group axioms and the
/// RB law exhaustively.
fn construct(h: &RotaBaxterOperator, i: &RotaBaxterOperator, t: &Triplet) -> std::result::Result<Extension, TripletViolation> {
    let (hg, ig) = (h.group(), i.group());
    let (m, n) = (hg.order(), ig.order());
    if t.mu.len() != m || t.tau.arity() != 2 || t.g.arity() != 1 || t.tau.h_order() != m || t.g.h_order() != m {
        return Err(TripletViolation::Shape);
    }
    if t.tau.values().iter().chain(t.g.values()).any(|&v| v >= n) {
        return Err(TripletViolation::Shape);
    }
    for (x, mu) in t.mu.iter().enumerate() {
        if mu.len() != n || !mu.is_bijective() || !mu.is_homomorphism(ig, ig) {
            return Err(TripletViolation::NotAutomorphism(x));
        }
    }
    if !t.mu[0].is_identity() {
        return Err(TripletViolation::NotAutomorphism(0));
    }
    let size = m * n;
    let mut table = Vec::with_capacity(size * size);
    for a in 0..size {
        let (h1, y1) = (a / n, a % n);
        for b in 0..size {
            let (h2, y2) = (b / n, b % n);
            let y = ig.mul(ig.mul(t.tau.get(&[h1, h2]), t.mu[h2].apply(y1)), y2);
            table.push(hg.mul(h1, h2) * n + y);
        }
    }
    let eg = match FiniteGroup::from_flat(size, table, Some(pair_labels(hg, ig))) {
        Ok(g) => Arc::new(g),
        Err(Error::Axiom(v)) => return Err(TripletViolation::Group(v)),
        Err(_) => return Err(TripletViolation::Shape),
    };
    let images: Vec<usize> = (0..size)
        .map(|x| {
            let (hh, y) = (x / n, x % n);
            let rh = h.apply(hh);
            let gh = t.g.get(&[hh]);
            let inner = ig.mul(ig.mul(ig.inv(gh), t.mu[rh].apply(y)), gh);
            rh * n + ig.mul(gh, i.apply(inner))
        })
        .collect();
    if let Some((x, y)) = rb_violation(&eg, &images) {
        return Err(TripletViolation::RotaBaxter(x, y));
    }
    let e = RotaBaxterOperator::new_unchecked(eg, images);
    let include = GroupMap::new((0..n).collect());
    let project = GroupMap::new((0..size).map(|x| x / n).collect());
    let section = GroupMap::new((0..m).map(|x| x * n).collect());
    Extension::new(h.clone(), i.clone(), e, include, project, section).map_err(|_| TripletViolation::Shape)
}

/// An abelian extension together with the data it was built from.
#[derive(Clone, Debug)]
pub struct AbelianExtension {
    module: RbModule,
    pair: CocyclePair,
    ext: Extension,
}

impl AbelianExtension {
    pub fn module(&self) -> &RbModule {
        &self.module
    }

    pub fn pair(&self) -> &CocyclePair {
        &self.pair
    }

    pub fn extension(&self) -> &Extension {
        &self.ext
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mu: Vec<&[usize]> = self.module.action().iter().map(GroupMap::images).collect();
        serde_json::json!({
            "order": self.ext.group().order(),
            "table": self.ext.group().rows(),
            "labels": self.ext.group().labels(),
            "operator": self.ext.e().images(),
            "tau": self.pair.tau.to_json(),
            "g": self.pair.g.to_json(),
            "mu": mu,
        })
    }
}

fn kernel_operator(m: &RbModule) -> RotaBaxterOperator {
    // an endomorphism of an abelian group is an RB operator
    RotaBaxterOperator::new_unchecked(Arc::clone(m.i_arc()), m.r_i_map().images().to_vec())
}

/// `E(τ, g)` with `R_E(h, y) = (R_H h, g(h) + R_I μ_{R_H h}(y))`.
pub fn build_abelian_extension(m: &RbModule, pair: &CocyclePair) -> Result<AbelianExtension> {
    if let Some(err) = crate::cohomology::cocycle_violation(m, pair) {
        return Err(err);
    }
    let t = Triplet { mu: m.action().to_vec(), tau: pair.tau.clone(), g: pair.g.clone() };
    let ext = construct(m.h_op(), &kernel_operator(m), &t).map_err(|v| match v {
        TripletViolation::RotaBaxter(x, y) => Error::NotRotaBaxter { x, y },
        other => Error::Invalid(other.to_string()),
    })?;
    Ok(AbelianExtension { module: m.clone(), pair: pair.clone(), ext })
}

/// `(τ, g)` read off along the st-section `s`; the action recovered along
/// `s` must be the module's action.
pub fn extract_cocycle(ae: &AbelianExtension, s: &GroupMap) -> Result<CocyclePair> {
    let t = ae.ext.extract_triplet(s)?;
    if t.mu != ae.module.action() {
        return Err(Error::Module("recovered action differs from the module action".into()));
    }
    let pair = CocyclePair { tau: t.tau, g: t.g };
    if let Some(err) = crate::cohomology::cocycle_violation(&ae.module, &pair) {
        return Err(err);
    }
    Ok(pair)
}

/// Searches for an RB isomorphism `E1 → E2` that is the identity on `I` and
/// covers the identity on `H`: `s1(h)·y ↦ s2(h)·θ(h)·y`.
pub fn extensions_equivalent(e1: &Extension, e2: &Extension) -> Option<GroupMap> {
    let (hg, ig) = (e1.h.group(), e1.i.group());
    let (g1, g2) = (e1.group(), e2.group());
    if g1.order() != g2.order() || hg.order() != e2.h.group().order() || ig.order() != e2.i.group().order() {
        return None;
    }
    // x = s1(π x) · i1(y_x)
    let decomposed: Vec<(usize, usize)> = g1
        .elements()
        .map(|x| {
            let h = e1.project.apply(x);
            let y = e1.kernel_index[g1.mul(g1.inv(e1.section.apply(h)), x)].expect("kernel element");
            (h, y)
        })
        .collect();
    let m = hg.order();
    let n = ig.order();
    let total = n.pow((m - 1) as u32);
    'theta: for k in 0..total {
        let mut theta = vec![0; m];
        let mut r = k;
        for slot in theta[1..].iter_mut().rev() {
            *slot = r % n;
            r /= n;
        }
        let map: Vec<usize> = decomposed
            .iter()
            .map(|&(h, y)| g2.mul(e2.section.apply(h), e2.include.apply(ig.mul(theta[h], y))))
            .collect();
        let f = GroupMap::new(map);
        for a in g1.elements() {
            if f.apply(e1.e.apply(a)) != e2.e.apply(f.apply(a)) {
                continue 'theta;
            }
        }
        if f.is_homomorphism(g1, g2) && f.is_bijective() {
            return Some(f);
        }
    }
    None
}

pub fn are_equivalent(e1: &AbelianExtension, e2: &AbelianExtension) -> Option<GroupMap> {
    extensions_equivalent(&e1.ext, &e2.ext)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub num_classes: usize,
    pub h2_order: usize,
    #[serde(rename = "match")]
    pub matches: bool,
    /// Whether "equivalent extensions" coincides with "cohomologous pairs".
    pub partition_matches_cosets: bool,
    pub class_representatives: Vec<serde_json::Value>,
}

/// Builds an extension for every member of `Z²_RBE`, partitions them by
/// [`are_equivalent`], and compares the class count with `|H²_RBE|`.
pub fn classify_abelian(m: &RbModule, budget: u128) -> Result<(ClassificationReport, H2)> {
    let h2 = h2_rbe(m, budget)?;
    let exts: Vec<AbelianExtension> = h2.z2().iter().map(|p| build_abelian_extension(m, p)).collect::<Result<_>>()?;
    let mut reps: Vec<usize> = Vec::new();
    let mut class = vec![0; exts.len()];
    for (k, e) in exts.iter().enumerate() {
        match reps.iter().position(|&r| are_equivalent(&exts[r], e).is_some()) {
            Some(c) => class[k] = c,
            None => {
                class[k] = reps.len();
                reps.push(k);
            }
        }
    }
    let partition_matches_cosets = (0..exts.len()).all(|a| {
        (0..exts.len()).all(|b| (class[a] == class[b]) == (h2.class_of(exts[a].pair()) == h2.class_of(exts[b].pair())))
    });
    let report = ClassificationReport {
        num_classes: reps.len(),
        h2_order: h2.order(),
        matches: reps.len() == h2.order(),
        partition_matches_cosets,
        class_representatives: reps.iter().map(|&r| exts[r].pair().to_json()).collect(),
    };
    Ok((report, h2))
}

/// Split extension `H ⋉_μ I` with
/// `R(h, y) = (R_H h, g(h)·R_I(g(h)⁻¹ μ_{R_H h}(y) g(h)))`.
///
/// `mu` must be an anti-homomorphism `H → Aut(I)`; `g` a map `H → I` with
/// `g(e) = e`. The RB law is checked exhaustively and a failing pair is
/// reported as [`Error::SplitCondition`].
pub fn build_split_extension(
    h: &RotaBaxterOperator,
    i: &RotaBaxterOperator,
    mu: &[GroupMap],
    g: &[usize],
) -> Result<Extension> {
    let (hg, ig) = (h.group(), i.group());
    if mu.len() != hg.order() || g.len() != hg.order() {
        return Err(Error::WrongLength { expected: hg.order(), got: mu.len().min(g.len()) });
    }
    if g[0] != 0 || g.iter().any(|&v| v >= ig.order()) {
        return Err(Error::Invalid("g must send e to e and take values in I".into()));
    }
    for a in hg.elements() {
        for b in hg.elements() {
            if mu[hg.mul(a, b)] != mu[b].compose(&mu[a]) {
                return Err(Error::Module(format!("mu is not an anti-homomorphism at ({a}, {b})")));
            }
        }
    }
    let gc = Cochain::from_fn(1, hg.order(), |t| g[t[0]]);
    let t = Triplet { mu: mu.to_vec(), tau: Cochain::zero(2, hg.order()), g: gc };
    let ext = construct(h, i, &t).map_err(|v| match v {
        TripletViolation::RotaBaxter(x, y) => Error::SplitCondition { x, y },
        other => Error::Invalid(other.to_string()),
    })?;
    debug_assert!(ext.section.is_homomorphism(hg, ext.group()));
    Ok(ext)
}

/// Non-abelian extension datum `(μ, τ, g)`; `τ` and `g` are normalized and
/// take values in a possibly non-abelian `I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triplet {
    pub mu: Vec<GroupMap>,
    pub tau: Cochain,
    pub g: Cochain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TripletViolation {
    #[error("malformed triplet")]
    Shape,
    #[error("mu_{0} is not an automorphism (or mu_e is not the identity)")]
    NotAutomorphism(usize),
    #[error("group law fails: {0}")]
    Group(crate::group::AxiomViolation),
    #[error("RB law fails at ({0}, {1})")]
    RotaBaxter(usize, usize),
}

/// Builds the candidate extension of a triplet and checks it.
pub fn verify_triplet(t: &Triplet, h: &RotaBaxterOperator, i: &RotaBaxterOperator) -> std::result::Result<Extension, TripletViolation> {
    construct(h, i, t)
}

/// The triplet read along the section `s·θ` when `t` is read along `s`.
pub fn transform_triplet(t: &Triplet, h: &RotaBaxterOperator, i: &RotaBaxterOperator, theta: &[usize]) -> Triplet {
    let (hg, ig) = (h.group(), i.group());
    let m = hg.order();
    let mu: Vec<GroupMap> = hg
        .elements()
        .map(|x| {
            let th = theta[x];
            GroupMap::new(ig.elements().map(|y| ig.mul(ig.mul(ig.inv(th), t.mu[x].apply(y)), th)).collect())
        })
        .collect();
    let tau = Cochain::from_fn(2, m, |tt| {
        let (a, b) = (tt[0], tt[1]);
        ig.product(&[ig.inv(theta[hg.mul(a, b)]), t.tau.get(&[a, b]), t.mu[b].apply(theta[a]), theta[b]])
    });
    let g = Cochain::from_fn(1, m, |tt| {
        let x = tt[0];
        let g1 = t.g.get(&[x]);
        let inner = ig.product(&[ig.inv(g1), t.mu[h.apply(x)].apply(theta[x]), g1]);
        ig.product(&[ig.inv(theta[h.apply(x)]), g1, i.apply(inner)])
    });
    Triplet { mu, tau, g }
}

fn all_thetas(m: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow((m - 1) as u32);
    (0..total).map(move |mut k| {
        let mut theta = vec![0; m];
        for slot in theta[1..].iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        theta
    })
}

/// Searches for `θ: H → I`, `θ(e) = e`, relating the two triplets:
/// `₂μ_h = θ(h)⁻¹ ₁μ_h(·) θ(h)`,
/// `τ₂(h1,h2) = θ(h1h2)⁻¹ τ₁(h1,h2) ₁μ_{h2}(θ(h1)) θ(h2)` and
/// `θ(R_H h) g₂(h) = g₁(h) R_I(g₁(h)⁻¹ ₁μ_{R_H h}(θ(h)) g₁(h))`.
pub fn triplets_equivalent(t1: &Triplet, t2: &Triplet, h: &RotaBaxterOperator, i: &RotaBaxterOperator) -> Option<Vec<usize>> {
    all_thetas(h.group().order(), i.group().order()).find(|theta| transform_triplet(t1, h, i, theta) == *t2)
}

/// `Aut(I)` together with its projection onto `Out(I) = Aut(I)/Inn(I)`.
#[derive(Clone, Debug)]
pub struct OuterAutomorphisms {
    aut: AutomorphismGroup,
    inner: Vec<usize>,
    out: FiniteGroup,
    proj: GroupMap,
}

impl OuterAutomorphisms {
    pub fn new(i: &FiniteGroup) -> Result<Self> {
        let aut = automorphisms(i)?;
        let inner = aut.inner(i);
        let (out, proj) = quotient(aut.as_group(), &inner)?;
        Ok(Self { aut, inner, out, proj })
    }

    pub fn aut(&self) -> &AutomorphismGroup {
        &self.aut
    }

    pub fn out(&self) -> &FiniteGroup {
        &self.out
    }

    /// Indices (into `aut().maps()`) of the inner automorphisms.
    pub fn inner(&self) -> &[usize] {
        &self.inner
    }

    pub fn outer_class(&self, f: &GroupMap) -> Option<usize> {
        self.aut.index_of(f).map(|k| self.proj.apply(k))
    }

    /// Automorphisms (as indices) in the outer class `c`.
    pub fn lifts(&self, c: usize) -> Vec<usize> {
        (0..self.aut.len()).filter(|&k| self.proj.apply(k) == c).collect()
    }
}

/// `h ↦ [μ_h] ∈ Out(I)`. With right actions this is an anti-homomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Coupling {
    pub classes: Vec<usize>,
}

impl Coupling {
    pub fn trivial(h_order: usize) -> Self {
        Self { classes: vec![0; h_order] }
    }

    pub fn is_anti_homomorphism(&self, h: &FiniteGroup, out: &OuterAutomorphisms) -> bool {
        h.elements()
            .all(|a| h.elements().all(|b| self.classes[h.mul(a, b)] == out.out().mul(self.classes[b], self.classes[a])))
    }
}

pub fn coupling_of(t: &Triplet, out: &OuterAutomorphisms) -> Result<Coupling> {
    let classes = t
        .mu
        .iter()
        .map(|m| out.outer_class(m).ok_or_else(|| Error::Invalid("mu_h is not an automorphism".into())))
        .collect::<Result<_>>()?;
    Ok(Coupling { classes })
}

/// Valid triplets with a given coupling, grouped into equivalence classes.
#[derive(Clone, Debug)]
pub struct H2Alpha {
    triplets: Vec<Triplet>,
    class_of: Vec<usize>,
    representatives: Vec<usize>,
    index: HashMap<Triplet, usize>,
}

impl H2Alpha {
    pub fn triplets(&self) -> &[Triplet] {
        &self.triplets
    }

    pub fn num_classes(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &Triplet> {
        self.representatives.iter().map(|&k| &self.triplets[k])
    }

    pub fn class_of_index(&self, k: usize) -> usize {
        self.class_of[k]
    }

    pub fn class_of(&self, t: &Triplet) -> Option<usize> {
        self.index.get(t).map(|&k| self.class_of[k])
    }
}

/// Enumerates every valid triplet whose coupling is `alpha`, checking each
/// candidate constructively, then splits them into orbits under change of
/// section.
pub fn h2_alpha(h: &RotaBaxterOperator, i: &RotaBaxterOperator, alpha: &Coupling, budget: u128) -> Result<H2Alpha> {
    let (hg, ig) = (h.group(), i.group());
    let (m, n) = (hg.order(), ig.order());
    let out = OuterAutomorphisms::new(ig)?;
    if alpha.classes.len() != m || alpha.classes[0] != 0 || alpha.classes.iter().any(|&c| c >= out.out().order()) {
        return Err(Error::Invalid("coupling has the wrong shape".into()));
    }
    let lift_sets: Vec<Vec<usize>> =
        hg.elements().map(|x| if x == 0 { vec![0] } else { out.lifts(alpha.classes[x]) }).collect();
    let lifts: u128 = lift_sets.iter().map(|l| l.len() as u128).product();
    let candidates = lifts
        .saturating_mul((n as u128).saturating_pow(((m - 1) * (m - 1)) as u32))
        .saturating_mul((n as u128).saturating_pow((m - 1) as u32));
    if candidates > budget {
        return Err(Error::BudgetExceeded { candidates, budget });
    }
    let mus: Vec<Vec<GroupMap>> = lift_sets
        .iter()
        .map(|set| set.iter().map(|&k| out.aut().maps()[k].clone()).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect();
    let mut triplets = Vec::new();
    for mu in &mus {
        for tau in crate::cohomology::all_cochains(2, m, n) {
            // group law first, independent of g
            let probe = Triplet { mu: mu.clone(), tau: tau.clone(), g: Cochain::zero(1, m) };
            match construct(&RotaBaxterOperator::zero(Arc::clone(h.group_arc())), &RotaBaxterOperator::zero(Arc::clone(i.group_arc())), &probe) {
                Err(TripletViolation::Group(_)) | Err(TripletViolation::Shape) | Err(TripletViolation::NotAutomorphism(_)) => continue,
                _ => {}
            }
            for g in crate::cohomology::all_cochains(1, m, n) {
                let t = Triplet { mu: mu.clone(), tau: tau.clone(), g };
                if construct(h, i, &t).is_ok() {
                    triplets.push(t);
                }
            }
        }
    }
    triplets.sort();
    let index: HashMap<Triplet, usize> = triplets.iter().cloned().enumerate().map(|(k, t)| (t, k)).collect();
    let mut class_of = vec![usize::MAX; triplets.len()];
    let mut representatives = Vec::new();
    for k in 0..triplets.len() {
        if class_of[k] != usize::MAX {
            continue;
        }
        let c = representatives.len();
        representatives.push(k);
        for theta in all_thetas(m, n) {
            let t2 = transform_triplet(&triplets[k], h, i, &theta);
            let j = *index
                .get(&t2)
                .ok_or_else(|| Error::Invalid("change of section left the set of valid triplets".into()))?;
            class_of[j] = c;
        }
    }
    Ok(H2Alpha { triplets, class_of, representatives, index })
}

/// The action of `H²_RBE(H, Z(I))` on the classes of `H2Alpha`.
#[derive(Clone, Debug, Serialize)]
pub struct CentralAction {
    /// `table[c][k]`: class of `[(τ', g')]·(class k)` for center class `c`.
    pub table: Vec<Vec<usize>>,
    pub center_classes: usize,
    pub free: bool,
}

/// `[(τ', g')]·[(μ, τ, g)] = [(μ, ττ', gg')]` with `(τ', g')` valued in `Z(I)`.
pub fn central_action(h: &RotaBaxterOperator, i: &RotaBaxterOperator, census: &H2Alpha, budget: u128) -> Result<CentralAction> {
    let ig = i.group();
    let z = center(ig);
    if let Some(&bad) = z.iter().find(|&&c| !z.contains(&i.apply(c))) {
        return Err(Error::CenterNotInvariant(bad));
    }
    let (zg, embed) = subgroup_as_group(ig, &z)?;
    let local = |x: usize| embed.iter().position(|&e| e == x).expect("central element");
    let zg = Arc::new(zg);
    let r_z = GroupMap::new(embed.iter().map(|&c| local(i.apply(c))).collect());
    let Some(first) = census.representatives().next() else {
        return Ok(CentralAction { table: Vec::new(), center_classes: 0, free: true });
    };
    // inner automorphisms fix the center, so any lift of the coupling gives the same action
    let mu_z: Vec<GroupMap> =
        first.mu.iter().map(|m| GroupMap::new(embed.iter().map(|&c| local(m.apply(c))).collect())).collect();
    let module = RbModule::new_checked(h.clone(), zg, r_z, mu_z)?;
    let h2z = h2_rbe(&module, budget)?;
    let lift = |c: &Cochain| c.map_values(|v| embed[v]);
    let mut table = Vec::with_capacity(h2z.order());
    for rep in h2z.representatives() {
        let (tz, gz) = (lift(&rep.tau), lift(&rep.g));
        let row = census
            .representatives()
            .map(|t| {
                let moved = Triplet {
                    mu: t.mu.clone(),
                    tau: Cochain::from_fn(2, t.tau.h_order(), |x| ig.mul(t.tau.get(x), tz.get(x))),
                    g: Cochain::from_fn(1, t.g.h_order(), |x| ig.mul(t.g.get(x), gz.get(x))),
                };
                census.class_of(&moved).ok_or_else(|| Error::Invalid("central action left the census".into()))
            })
            .collect::<Result<Vec<usize>>>()?;
        table.push(row);
    }
    let free = table.iter().skip(1).all(|row| row.iter().enumerate().all(|(k, &c)| c != k));
    Ok(CentralAction { center_classes: h2z.order(), table, free })
}

/// All tuples helper re-exported for callers building cochains by hand.
pub fn tuples(arity: usize, h_order: usize) -> impl Iterator<Item = Vec<usize>> {
    nondegenerate_tuples(arity, h_order)
}
