//! Finite groups stored as Cayley tables over dense indices `0..n`.
//!
//! Index 0 is always the identity. Every constructor re-verifies the
//! group axioms exhaustively, so a `FiniteGroup` value is always a group.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on group order for automorphism and endomorphism searches.
pub const DEFAULT_MAX_ORDER: usize = 64;

/// First failing instance of a group axiom in a raw table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum AxiomViolation {
    #[error("identity law fails for element {0}")]
    Identity(usize),
    #[error("element {0} has no two-sided inverse")]
    Inverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    Associativity(usize, usize, usize),
}

/// Checks a row-major `n x n` table with identity 0 and returns the inverse table.
///
/// Checks run in the order identity, inverses, associativity; the first
/// failure is reported.
pub fn check_group_table(n: usize, table: &[usize]) -> std::result::Result<Vec<usize>, AxiomViolation> {
    debug_assert_eq!(table.len(), n * n);
    for a in 0..n {
        if table[a] != a || table[a * n] != a {
            return Err(AxiomViolation::Identity(a));
        }
    }
    let mut inverses = vec![usize::MAX; n];
    for a in 0..n {
        let row = &table[a * n..(a + 1) * n];
        match row.iter().position(|&v| v == 0) {
            Some(b) if table[b * n + a] == 0 => inverses[a] = b,
            _ => return Err(AxiomViolation::Inverse(a)),
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = table[a * n + b];
            for c in 0..n {
                if table[ab * n + c] != table[a * n + table[b * n + c]] {
                    return Err(AxiomViolation::Associativity(a, b, c));
                }
            }
        }
    }
    Ok(inverses)
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.order).finish_non_exhaustive()
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major flat table, verifying all axioms.
    pub fn from_flat(order: usize, table: Vec<usize>, labels: Option<Vec<String>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::MalformedTable("order must be positive".into()));
        }
        if table.len() != order * order {
            return Err(Error::MalformedTable(format!(
                "expected {} entries, found {}",
                order * order,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= order) {
            return Err(Error::MalformedTable(format!("entry {bad} out of range")));
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(Error::MalformedTable(format!(
                    "expected {order} labels, found {}",
                    l.len()
                )));
            }
        }
        let inverses = check_group_table(order, &table)?;
        Ok(Self { order, table, inverses, labels })
    }

    pub fn from_rows(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::MalformedTable("table is not square".into()));
        }
        Self::from_flat(order, rows.into_iter().flatten().collect(), labels)
    }

    pub fn trivial() -> Self {
        Self { order: 1, table: vec![0], inverses: vec![0], labels: Some(vec!["e".into()]) }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `a * b^-1`
    #[inline]
    pub fn div(&self, a: usize, b: usize) -> usize {
        self.mul(a, self.inv(b))
    }

    /// `g x g^-1`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn product(&self, elems: &[usize]) -> usize {
        elems.iter().fold(0, |acc, &x| self.mul(acc, x))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::MalformedTable("label count mismatch".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        let needle: String = label.chars().filter(|c| !c.is_whitespace()).collect();
        self.labels.as_ref()?.iter().position(|l| *l == needle)
    }

    pub fn is_abelian(&self) -> bool {
        self.non_commuting_pair().is_none()
    }

    pub fn non_commuting_pair(&self) -> Option<(usize, usize)> {
        for a in 0..self.order {
            for b in a + 1..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[0] = true;
        // Prefer elements of large order: they cover more per generator.
        let mut candidates: Vec<usize> = (1..self.order).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        for a in candidates {
            if !span[a] {
                gens.push(a);
                for x in self.generated(&gens) {
                    span[x] = true;
                }
            }
        }
        gens
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        if !set.contains(&0) || set.iter().any(|&x| x >= self.order) {
            return false;
        }
        set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn normality_witness(&self, elems: &[usize]) -> Option<(usize, usize)> {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        for g in 0..self.order {
            for &n in &set {
                if !set.contains(&self.conj(g, n)) {
                    return Some((n, g));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, elems: &[usize]) -> bool {
        self.is_subgroup(elems) && self.normality_witness(elems).is_none()
    }
}

/// A total set map between two groups, stored as an image table.
///
/// Laws (homomorphism, bijectivity, ...) are checked by methods that take
/// the domain and codomain explicitly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupMap {
    images: Vec<usize>,
}

impl GroupMap {
    pub fn new(images: Vec<usize>) -> Self {
        Self { images }
    }

    /// Builds a map and checks it is total on `domain` with images in `codomain`.
    pub fn checked(domain: &FiniteGroup, codomain: &FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != domain.order() {
            return Err(Error::WrongLength { expected: domain.order(), got: images.len() });
        }
        if let Some(&image) = images.iter().find(|&&v| v >= codomain.order()) {
            return Err(Error::ImageOutOfRange { image, order: codomain.order() });
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn constant_identity(n: usize) -> Self {
        Self { images: vec![0; n] }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn into_images(self) -> Vec<usize> {
        self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        GroupMap { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &v in &self.images {
            if v >= seen.len() || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    /// Inverse of a bijective self-map.
    pub fn inverse(&self) -> GroupMap {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        GroupMap { images: inv }
    }

    pub fn homomorphism_violation(&self, dom: &FiniteGroup, cod: &FiniteGroup) -> Option<(usize, usize)> {
        for a in dom.elements() {
            for b in dom.elements() {
                if self.apply(dom.mul(a, b)) != cod.mul(self.apply(a), self.apply(b)) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_homomorphism(&self, dom: &FiniteGroup, cod: &FiniteGroup) -> bool {
        self.homomorphism_violation(dom, cod).is_none()
    }

    /// `f(ab) = f(b) f(a)` for all `a, b`.
    pub fn is_anti_homomorphism(&self, dom: &FiniteGroup, cod: &FiniteGroup) -> bool {
        dom.elements().all(|a| {
            dom.elements()
                .all(|b| self.apply(dom.mul(a, b)) == cod.mul(self.apply(b), self.apply(a)))
        })
    }
}

/// Extends generator images to a homomorphism on the generated subgroup, or
/// `None` when the assignment is inconsistent.
fn extend_on_generators(
    dom: &FiniteGroup,
    cod: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<Option<usize>>> {
    let mut map = vec![None; dom.order()];
    map[0] = Some(0);
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x].expect("queued elements are mapped");
        for (&g, &img) in gens.iter().zip(images) {
            let y = dom.mul(x, g);
            let fy = cod.mul(fx, img);
            match map[y] {
                None => {
                    map[y] = Some(fy);
                    queue.push_back(y);
                }
                Some(v) if v != fy => return None,
                Some(_) => {}
            }
        }
    }
    Some(map)
}

fn search_homomorphisms(dom: &FiniteGroup, cod: &FiniteGroup, bijective: bool) -> Vec<GroupMap> {
    let gens = dom.generators();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(gens.len());
    fn rec(
        dom: &FiniteGroup,
        cod: &FiniteGroup,
        gens: &[usize],
        bijective: bool,
        chosen: &mut Vec<usize>,
        out: &mut Vec<GroupMap>,
    ) {
        let k = chosen.len();
        if k == gens.len() {
            if let Some(map) = extend_on_generators(dom, cod, gens, chosen) {
                let images: Vec<usize> = map.into_iter().map(|v| v.expect("generators span")).collect();
                let f = GroupMap::new(images);
                if !bijective || f.is_bijective() {
                    out.push(f);
                }
            }
            return;
        }
        let g_order = dom.element_order(gens[k]);
        for c in cod.elements() {
            let c_order = cod.element_order(c);
            let ok = if bijective { c_order == g_order } else { g_order % c_order == 0 };
            if !ok {
                continue;
            }
            chosen.push(c);
            let keep = match extend_on_generators(dom, cod, &gens[..=k], chosen) {
                None => false,
                Some(map) if bijective => {
                    // injective on the generated subgroup so far
                    let mut seen = vec![false; cod.order()];
                    map.into_iter().flatten().all(|v| !std::mem::replace(&mut seen[v], true))
                }
                Some(_) => true,
            };
            if keep {
                rec(dom, cod, gens, bijective, chosen, out);
            }
            chosen.pop();
        }
    }
    rec(dom, cod, &gens, bijective, &mut chosen, &mut out);
    out.sort();
    out.dedup();
    out
}

fn check_bound(order: usize, bound: usize) -> Result<()> {
    if order > bound {
        Err(Error::BoundExceeded { order, bound })
    } else {
        Ok(())
    }
}

/// All homomorphisms `dom -> cod`, in lexicographic order of image tables.
pub fn homomorphisms(dom: &FiniteGroup, cod: &FiniteGroup) -> Result<Vec<GroupMap>> {
    check_bound(dom.order().max(cod.order()), DEFAULT_MAX_ORDER)?;
    Ok(search_homomorphisms(dom, cod, false))
}

pub fn endomorphisms(g: &FiniteGroup) -> Result<Vec<GroupMap>> {
    homomorphisms(g, g)
}

/// The automorphisms of a group, with their composition table.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    maps: Vec<GroupMap>,
    index: HashMap<GroupMap, usize>,
    composition: FiniteGroup,
}

impl AutomorphismGroup {
    pub fn maps(&self) -> &[GroupMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn index_of(&self, f: &GroupMap) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// The automorphisms as an abstract group; `a * b` is `maps[a] ∘ maps[b]`.
    pub fn as_group(&self) -> &FiniteGroup {
        &self.composition
    }

    /// Indices of inner automorphisms of `base`.
    pub fn inner(&self, base: &FiniteGroup) -> Vec<usize> {
        let set: BTreeSet<usize> = base
            .elements()
            .map(|g| self.index_of(&inner_automorphism(base, g)).expect("inner maps are automorphisms"))
            .collect();
        set.into_iter().collect()
    }
}

/// Builds an `AutomorphismGroup` from an explicit closed list of automorphisms.
pub fn automorphism_group_from(maps: Vec<GroupMap>) -> Result<AutomorphismGroup> {
    let mut maps = maps;
    maps.sort();
    maps.dedup();
    let n = maps.first().map_or(0, GroupMap::len);
    // identity first so index 0 is the group identity
    let id = GroupMap::identity(n);
    let pos = maps
        .iter()
        .position(|m| *m == id)
        .ok_or_else(|| Error::Invalid("automorphism list lacks the identity".into()))?;
    let idm = maps.remove(pos);
    maps.insert(0, idm);
    let index: HashMap<GroupMap, usize> = maps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let k = maps.len();
    let mut table = Vec::with_capacity(k * k);
    for a in &maps {
        for b in &maps {
            let c = a.compose(b);
            let idx = index
                .get(&c)
                .ok_or_else(|| Error::Invalid("automorphism list not closed under composition".into()))?;
            table.push(*idx);
        }
    }
    let composition = FiniteGroup::from_flat(k, table, None)?;
    Ok(AutomorphismGroup { maps, index, composition })
}

/// All automorphisms of `g`; the identity sits at index 0, the rest follow
/// in lexicographic order of image tables.
pub fn automorphisms(g: &FiniteGroup) -> Result<AutomorphismGroup> {
    automorphisms_bounded(g, DEFAULT_MAX_ORDER)
}

pub fn automorphisms_bounded(g: &FiniteGroup, bound: usize) -> Result<AutomorphismGroup> {
    check_bound(g.order(), bound)?;
    automorphism_group_from(search_homomorphisms(g, g, true))
}

pub fn center(g: &FiniteGroup) -> Vec<usize> {
    g.elements().filter(|&z| g.elements().all(|x| g.mul(z, x) == g.mul(x, z))).collect()
}

/// `x ↦ g x g^-1`
pub fn inner_automorphism(g: &FiniteGroup, elem: usize) -> GroupMap {
    GroupMap::new(g.elements().map(|x| g.conj(elem, x)).collect())
}

/// Quotient by a normal subgroup. Cosets are numbered by their least element,
/// so the coset of the identity is 0.
pub fn quotient(g: &FiniteGroup, normal: &[usize]) -> Result<(FiniteGroup, GroupMap)> {
    if !g.is_subgroup(normal) {
        return Err(Error::NotSubgroup);
    }
    if let Some((n, x)) = g.normality_witness(normal) {
        return Err(Error::NotNormal { n, g: x });
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x] == usize::MAX {
            let id = reps.len();
            reps.push(x);
            for &n in normal {
                coset_of[g.mul(x, n)] = id;
            }
        }
    }
    let k = reps.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            table.push(coset_of[g.mul(a, b)]);
        }
    }
    let labels = g.labels().map(|_| reps.iter().map(|&r| format!("{}N", g.label(r))).collect());
    let q = FiniteGroup::from_flat(k, table, labels)?;
    Ok((q, GroupMap::new(coset_of)))
}

/// `G1 × G2` with `(a, b)` at index `a * |G2| + b`.
pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup) -> FiniteGroup {
    let (n1, n2) = (g1.order(), g2.order());
    let n = n1 * n2;
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let x = g1.mul(a / n2, b / n2);
            let y = g2.mul(a % n2, b % n2);
            table.push(x * n2 + y);
        }
    }
    let labels = (0..n).map(|a| format!("({},{})", g1.label(a / n2), g2.label(a % n2))).collect();
    FiniteGroup::from_flat(n, table, Some(labels)).expect("direct product of groups is a group")
}

/// A subgroup re-indexed as a standalone group, with its embedding.
///
/// The embedding lists subgroup elements in increasing order, so index 0
/// maps to the identity.
pub fn subgroup_as_group(g: &FiniteGroup, elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
    if !g.is_subgroup(elems) {
        return Err(Error::NotSubgroup);
    }
    let mut embed: Vec<usize> = elems.to_vec();
    embed.sort_unstable();
    embed.dedup();
    let mut local = vec![usize::MAX; g.order()];
    for (i, &x) in embed.iter().enumerate() {
        local[x] = i;
    }
    let k = embed.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &embed {
        for &b in &embed {
            table.push(local[g.mul(a, b)]);
        }
    }
    let labels = g.labels().map(|_| embed.iter().map(|&x| g.label(x)).collect());
    Ok((FiniteGroup::from_flat(k, table, labels)?, embed))
}

/// On-disk Cayley table format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyTable {
    pub order: usize,
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl CayleyTable {
    pub fn from_group(g: &FiniteGroup) -> Self {
        Self { order: g.order(), identity: 0, table: g.rows(), labels: g.labels().map(<[String]>::to_vec) }
    }

    pub fn into_group(self) -> Result<FiniteGroup> {
        if self.identity != 0 {
            return Err(Error::MalformedTable(format!(
                "identity must be element 0, found {}",
                self.identity
            )));
        }
        if self.table.len() != self.order {
            return Err(Error::MalformedTable(format!(
                "declared order {} but table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        FiniteGroup::from_rows(self.table, self.labels)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FiniteGroup> {
        let text = std::fs::read_to_string(path)?;
        let t: CayleyTable = serde_json::from_str(&text)?;
        t.into_group()
    }
}
