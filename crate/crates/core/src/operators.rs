//! Rota-Baxter operators of weight 1, their circle groups and skew braces.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{check_group_table, AxiomViolation, FiniteGroup, GroupMap};

/// Default bound on group order for operator enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 16;
const SOFT_ENUMERATION_LIMIT: usize = 12;

/// `x ∘_R y = x R(x) y R(x)^-1`
#[inline]
fn circle_with(g: &FiniteGroup, images: &[usize], x: usize, y: usize) -> usize {
    g.mul(x, g.conj(images[x], y))
}

/// First pair `(x, y)` in row-major order at which the RB law fails.
pub fn rb_violation(g: &FiniteGroup, images: &[usize]) -> Option<(usize, usize)> {
    for x in g.elements() {
        for y in g.elements() {
            if g.mul(images[x], images[y]) != images[circle_with(g, images, x, y)] {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn is_rb_operator(g: &FiniteGroup, images: &[usize]) -> bool {
    images.len() == g.order() && images.iter().all(|&v| v < g.order()) && rb_violation(g, images).is_none()
}

/// A verified Rota-Baxter operator on a shared group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotaBaxterOperator {
    group: Arc<FiniteGroup>,
    map: GroupMap,
}

impl RotaBaxterOperator {
    pub fn new(group: Arc<FiniteGroup>, images: Vec<usize>) -> Result<Self> {
        let map = GroupMap::checked(&group, &group, images)?;
        if let Some((x, y)) = rb_violation(&group, map.images()) {
            return Err(Error::NotRotaBaxter { x, y });
        }
        Ok(Self { group, map })
    }

    /// Skips the RB-law scan; for callers that have already established it.
    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, images: Vec<usize>) -> Self {
        debug_assert!(is_rb_operator(&group, &images));
        Self { group, map: GroupMap::new(images) }
    }

    /// `R ≡ e`
    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        Self { group, map: GroupMap::constant_identity(n) }
    }

    /// `R(x) = x^-1`
    pub fn inversion(group: Arc<FiniteGroup>) -> Self {
        let images = group.elements().map(|x| group.inv(x)).collect();
        Self { group, map: GroupMap::new(images) }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map.apply(x)
    }

    pub fn images(&self) -> &[usize] {
        self.map.images()
    }

    pub fn map(&self) -> &GroupMap {
        &self.map
    }

    #[inline]
    pub fn circle(&self, x: usize, y: usize) -> usize {
        circle_with(&self.group, self.map.images(), x, y)
    }

    /// Inverse of `x` in the circle group: `R(x)^-1 x^-1 R(x)`.
    pub fn circle_inv(&self, x: usize) -> usize {
        let g = &self.group;
        let r = self.apply(x);
        g.mul(g.mul(g.inv(r), g.inv(x)), r)
    }

    pub fn circle_table(&self) -> Vec<usize> {
        let n = self.group.order();
        (0..n * n).map(|k| self.circle(k / n, k % n)).collect()
    }

    /// `(G, ∘_R)`, re-verified as a group.
    pub fn induced_circle_group(&self) -> Result<FiniteGroup> {
        FiniteGroup::from_flat(self.group.order(), self.circle_table(), self.group.labels().map(<[String]>::to_vec))
    }

    pub fn induced_skew_brace(&self) -> SkewBrace {
        SkewBrace { order: self.group.order(), add: self.group.table().to_vec(), circ: self.circle_table() }
    }

    pub fn is_rb_subgroup(&self, elems: &[usize]) -> Result<bool> {
        if !self.group.is_subgroup(elems) {
            return Err(Error::NotSubgroup);
        }
        let mut member = vec![false; self.group.order()];
        for &x in elems {
            member[x] = true;
        }
        Ok(elems.iter().all(|&x| member[self.apply(x)]))
    }

    pub fn to_record(&self, group: &str) -> OperatorRecord {
        OperatorRecord::from_images(group, self.images())
    }
}

/// Checks `f ∘ R_source = R_target ∘ f`.
///
/// Returns `Ok(None)` when `f` is an RB morphism, `Ok(Some(h))` with the
/// first element where the intertwining fails, and an error when `f` is not
/// a homomorphism.
pub fn is_rb_morphism(f: &GroupMap, source: &RotaBaxterOperator, target: &RotaBaxterOperator) -> Result<Option<usize>> {
    let f = GroupMap::checked(source.group(), target.group(), f.images().to_vec())?;
    if let Some((a, b)) = f.homomorphism_violation(source.group(), target.group()) {
        return Err(Error::NotHomomorphism(a, b));
    }
    Ok(source.group().elements().find(|&h| f.apply(source.apply(h)) != target.apply(f.apply(h))))
}

/// Options for operator enumeration.
#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    pub bound: usize,
    /// Number of worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self { bound: DEFAULT_ENUMERATION_BOUND, workers: None }
    }
}

/// Depth-first search for RB operators with `R(x)` drawn from `candidates[x]`.
struct Search<'a> {
    g: &'a FiniteGroup,
    candidates: &'a [Vec<usize>],
    images: Vec<usize>,
    stop_at_first: bool,
    found: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a FiniteGroup, candidates: &'a [Vec<usize>], stop_at_first: bool) -> Self {
        Self { g, candidates, images: vec![usize::MAX; g.order()], stop_at_first, found: Vec::new() }
    }

    /// All RB-law instances whose lookups are among `0..=k` and involve `k`.
    fn consistent(&self, k: usize) -> bool {
        let g = self.g;
        let r = &self.images;
        // x = k
        for y in 0..=k {
            let z = circle_with(g, r, k, y);
            if z <= k && g.mul(r[k], r[y]) != r[z] {
                return false;
            }
        }
        for x in 0..k {
            let rx = r[x];
            // y = k
            let z = g.mul(x, g.conj(rx, k));
            if z <= k && g.mul(rx, r[k]) != r[z] {
                return false;
            }
            // z = k: solve x R(x) y R(x)^-1 = k for y
            let y = g.mul(g.mul(g.inv(rx), g.inv(x)), g.mul(k, rx));
            if y < k && g.mul(rx, r[y]) != r[k] {
                return false;
            }
        }
        true
    }

    fn run(&mut self, k: usize) {
        if k == self.g.order() {
            self.found.push(self.images.clone());
            return;
        }
        for &c in &self.candidates[k] {
            self.images[k] = c;
            if self.consistent(k) {
                self.run(k + 1);
                if self.stop_at_first && !self.found.is_empty() {
                    return;
                }
            }
        }
        self.images[k] = usize::MAX;
    }
}

fn search_all(g: &FiniteGroup, candidates: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = g.order();
    if n == 1 {
        return if candidates[0].contains(&0) { vec![vec![0]] } else { Vec::new() };
    }
    if !candidates[0].contains(&0) {
        return Vec::new();
    }
    let pinned: Vec<Vec<usize>> = std::iter::once(vec![0]).chain(candidates[1..].iter().cloned()).collect();
    // split the tree on R(1); each branch yields its results in lexicographic order
    let branches: Vec<Vec<Vec<usize>>> = pinned[1]
        .par_iter()
        .map(|&c| {
            let mut local = pinned.clone();
            local[1] = vec![c];
            let mut s = Search::new(g, &local, false);
            s.images[0] = 0;
            s.run(1);
            s.found
        })
        .collect();
    branches.into_iter().flatten().collect()
}

/// All weight-1 RB operators on `g`, in lexicographic order of image tables.
pub fn enumerate_rb_operators(g: &Arc<FiniteGroup>) -> Result<Vec<RotaBaxterOperator>> {
    enumerate_rb_operators_with(g, &EnumerationOptions::default())
}

pub fn enumerate_rb_operators_with(g: &Arc<FiniteGroup>, opts: &EnumerationOptions) -> Result<Vec<RotaBaxterOperator>> {
    let n = g.order();
    if n > opts.bound {
        return Err(Error::BoundExceeded { order: n, bound: opts.bound });
    }
    if n > SOFT_ENUMERATION_LIMIT {
        log::warn!("enumerating RB operators on a group of order {n}; this may be slow");
    }
    let candidates: Vec<Vec<usize>> = vec![(0..n).collect(); n];
    let raw = match opts.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Invalid(format!("cannot start worker pool: {e}")))?;
            pool.install(|| search_all(g, &candidates))
        }
        None => search_all(g, &candidates),
    };
    Ok(raw.into_iter().map(|images| RotaBaxterOperator::new_unchecked(Arc::clone(g), images)).collect())
}

/// Failure reported by [`SkewBrace::check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BraceViolation {
    #[error("additive structure: {0}")]
    Add(AxiomViolation),
    #[error("circle structure: {0}")]
    Circ(AxiomViolation),
    #[error("compatibility fails at ({0}, {1}, {2})")]
    Compatibility(usize, usize, usize),
    #[error("table shape or range error")]
    Shape,
}

/// Two group tables on the same carrier, both with identity 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewBrace {
    pub order: usize,
    pub add: Vec<usize>,
    pub circ: Vec<usize>,
}

impl SkewBrace {
    pub fn from_groups(add: &FiniteGroup, circ: &FiniteGroup) -> Result<Self> {
        if add.order() != circ.order() {
            return Err(Error::Invalid("carriers differ in size".into()));
        }
        Ok(Self { order: add.order(), add: add.table().to_vec(), circ: circ.table().to_vec() })
    }

    /// Verifies both group structures and `a∘(b+c) = a∘b − a + a∘c`.
    pub fn check(&self) -> std::result::Result<(), BraceViolation> {
        let n = self.order;
        if n == 0
            || self.add.len() != n * n
            || self.circ.len() != n * n
            || self.add.iter().chain(&self.circ).any(|&v| v >= n)
        {
            return Err(BraceViolation::Shape);
        }
        let neg = check_group_table(n, &self.add).map_err(BraceViolation::Add)?;
        check_group_table(n, &self.circ).map_err(BraceViolation::Circ)?;
        let add = |a: usize, b: usize| self.add[a * n + b];
        let circ = |a: usize, b: usize| self.circ[a * n + b];
        for a in 0..n {
            for b in 0..n {
                let ab = circ(a, b);
                for c in 0..n {
                    if circ(a, add(b, c)) != add(add(ab, neg[a]), circ(a, c)) {
                        return Err(BraceViolation::Compatibility(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_skew_brace(&self) -> bool {
        self.check().is_ok()
    }

    pub fn additive_group(&self) -> Result<FiniteGroup> {
        FiniteGroup::from_flat(self.order, self.add.clone(), None)
    }
}

pub fn is_skew_brace(s: &SkewBrace) -> bool {
    s.is_skew_brace()
}

/// Searches for an RB operator on the additive group of `s` whose circle
/// operation equals `s.circ`. `additive` must be the additive group of `s`
/// (it carries the labels used for output).
///
/// `R(x)` must satisfy `R(x) y R(x)^-1 = x^-1 (x∘y)` for every `y`, which
/// fixes it up to the center; the remaining choices are searched with the
/// same pruning as enumeration.
pub fn find_rb_inducing_brace(additive: &Arc<FiniteGroup>, s: &SkewBrace, bound: usize) -> Result<Option<RotaBaxterOperator>> {
    let n = s.order;
    if n > bound {
        return Err(Error::BoundExceeded { order: n, bound });
    }
    if additive.table() != s.add.as_slice() {
        return Err(Error::Invalid("group does not match the brace's additive table".into()));
    }
    if let Err(v) = s.check() {
        return Err(Error::Invalid(format!("not a skew brace: {v}")));
    }
    let g: &FiniteGroup = additive;
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let target: Vec<usize> = (0..n).map(|y| g.mul(g.inv(x), s.circ[x * n + y])).collect();
            (0..n).filter(|&r| (0..n).all(|y| g.conj(r, y) == target[y])).collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) || !candidates[0].contains(&0) {
        return Ok(None);
    }
    let mut pinned = candidates;
    pinned[0] = vec![0];
    let mut search = Search::new(g, &pinned, true);
    search.images[0] = 0;
    search.run(1);
    Ok(search.found.pop().map(|images| RotaBaxterOperator::new_unchecked(Arc::clone(additive), images)))
}

/// Image entry in an operator file: a raw index or an element label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ImageEntry {
    Index(usize),
    Label(String),
}

/// Operator images, either in element order or keyed by element label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Images {
    List(Vec<ImageEntry>),
    Map(BTreeMap<String, ImageEntry>),
}

/// On-disk operator format: `{"group": "S3", "images": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub group: String,
    pub images: Images,
}

impl OperatorRecord {
    pub fn from_images(group: &str, images: &[usize]) -> Self {
        Self { group: group.to_string(), images: Images::List(images.iter().map(|&x| ImageEntry::Index(x)).collect()) }
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Resolves labels against `g` and returns the raw image table (not yet verified).
    pub fn resolve(&self, g: &FiniteGroup) -> Result<Vec<usize>> {
        let lookup = |e: &ImageEntry| match e {
            ImageEntry::Index(i) => Ok(*i),
            ImageEntry::Label(l) => element_by_label(g, l),
        };
        match &self.images {
            Images::List(list) => list.iter().map(lookup).collect(),
            Images::Map(map) => {
                let mut images = vec![None; g.order()];
                for (k, v) in map {
                    let x = element_by_label(g, k)?;
                    if x >= g.order() {
                        return Err(Error::ImageOutOfRange { image: x, order: g.order() });
                    }
                    images[x] = Some(lookup(v)?);
                }
                images
                    .into_iter()
                    .enumerate()
                    .map(|(x, v)| v.ok_or_else(|| Error::Invalid(format!("no image given for `{}`", g.label(x)))))
                    .collect()
            }
        }
    }
}

fn element_by_label(g: &FiniteGroup, l: &str) -> Result<usize> {
    g.find_label(l)
        .or_else(|| l.trim().parse().ok())
        .ok_or_else(|| Error::Invalid(format!("unknown element label `{l}`")))
}
