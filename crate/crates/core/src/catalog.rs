//! Named small groups.
//!
//! Descriptors: `Z<n>` / `C<n>` (cyclic), `D<n>` (dihedral of order 2n,
//! acting on n points), `S<n>` and `A<n>` for n ≤ 5, `Q8`, `V4` / `K4`,
//! direct products written `AxB`, and paths to Cayley-table JSON files.
//!
//! Permutation groups are labelled in 1-based cycle notation, e.g.
//! `(1,3)(2,4)`, and the product `p*q` applies `p` first.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use crate::error::{Error, Result};
use crate::group::{direct_product, CayleyTable, FiniteGroup, DEFAULT_MAX_ORDER};

type Perm = Vec<u8>;

fn perm_mul(p: &Perm, q: &Perm) -> Perm {
    p.iter().map(|&i| q[i as usize]).collect()
}

/// Disjoint cycles of length ≥ 2, each starting at its least point, sorted.
fn cycles(p: &Perm) -> Vec<Vec<u8>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i as u8);
            i = p[i] as usize;
        }
        out.push(cyc);
    }
    out
}

fn cycle_label(p: &Perm) -> String {
    let cs = cycles(p);
    if cs.is_empty() {
        return "e".into();
    }
    cs.iter()
        .map(|c| {
            let inner: Vec<String> = c.iter().map(|&i| (i + 1).to_string()).collect();
            format!("({})", inner.join(","))
        })
        .collect()
}

fn perm_order(p: &Perm) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    cycles(p).iter().fold(1, |acc, c| acc / gcd(acc, c.len()) * c.len())
}

/// Parses 1-based cycle notation such as `(1,2,3)(4,5)` into a permutation of `degree` points.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Vec<usize>> {
    let mut p: Vec<usize> = (0..degree).collect();
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "e" || t == "()" {
        return Ok(p);
    }
    let bad = || Error::Invalid(format!("cannot parse permutation `{text}`"));
    for chunk in t.split(')') {
        if chunk.is_empty() {
            continue;
        }
        let body = chunk.strip_prefix('(').ok_or_else(bad)?;
        let pts: Vec<usize> = body
            .split(',')
            .map(|s| s.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if pts.iter().any(|&x| x == 0 || x > degree) {
            return Err(bad());
        }
        // compose the new cycle after what we have so far
        let mut c: Vec<usize> = (0..degree).collect();
        for (k, &x) in pts.iter().enumerate() {
            c[x - 1] = pts[(k + 1) % pts.len()] - 1;
        }
        p = p.iter().map(|&i| c[i]).collect();
    }
    Ok(p)
}

/// The permutation group generated by `gens` (each a 0-based image list).
///
/// Elements are ordered by element order, then by cycle notation.
pub fn permutation_group(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
    let gens: Vec<Perm> = gens.iter().map(|g| g.iter().map(|&x| x as u8).collect()).collect();
    for g in &gens {
        let set: BTreeSet<u8> = g.iter().copied().collect();
        if g.len() != degree || set.len() != degree || set.iter().any(|&x| x as usize >= degree) {
            return Err(Error::Invalid("generator is not a permutation".into()));
        }
    }
    let id: Perm = (0..degree as u8).collect();
    let mut elems = vec![id.clone()];
    let mut seen: BTreeSet<Perm> = BTreeSet::from([id]);
    let mut frontier = 0;
    while frontier < elems.len() {
        let x = elems[frontier].clone();
        frontier += 1;
        for g in &gens {
            let y = perm_mul(&x, g);
            if seen.insert(y.clone()) {
                elems.push(y);
            }
        }
    }
    elems.sort_by_cached_key(|p| (perm_order(p), cycles(p)));
    let index: HashMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = elems.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elems {
        for b in &elems {
            table.push(index[&perm_mul(a, b)]);
        }
    }
    let labels = elems.iter().map(cycle_label).collect();
    FiniteGroup::from_flat(n, table, Some(labels))
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnknownDescriptor("Z0".into()));
    }
    let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    FiniteGroup::from_flat(n, table, Some((0..n).map(|i| i.to_string()).collect()))
}

pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::UnknownDescriptor(format!("D{n}")));
    }
    let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|i| n - 1 - i).collect();
    permutation_group(n, &[rot, refl])
}

pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 5 {
        return Err(Error::UnknownDescriptor(format!("S{n}")));
    }
    if n == 1 {
        return Ok(FiniteGroup::trivial());
    }
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    permutation_group(n, &[cycle, swap])
}

pub fn alternating(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 5 {
        return Err(Error::UnknownDescriptor(format!("A{n}")));
    }
    if n < 3 {
        return Ok(FiniteGroup::trivial());
    }
    // 3-cycles (1,2,k) generate A_n
    let gens: Vec<Vec<usize>> = (2..n)
        .map(|k| {
            let mut p: Vec<usize> = (0..n).collect();
            p[0] = 1;
            p[1] = k;
            p[k] = 0;
            p
        })
        .collect();
    permutation_group(n, &gens)
}

pub fn quaternion() -> Result<FiniteGroup> {
    let i = parse_cycles("(1,2,3,4)(5,6,7,8)", 8)?;
    let j = parse_cycles("(1,5,3,7)(2,8,4,6)", 8)?;
    permutation_group(8, &[i, j])
}

pub fn klein_four() -> Result<FiniteGroup> {
    permutation_group(4, &[parse_cycles("(1,2)(3,4)", 4)?, parse_cycles("(1,3)(2,4)", 4)?])
}

/// Builds a group from a descriptor with the default order bound.
pub fn make_group(desc: &str) -> Result<FiniteGroup> {
    make_group_with_bound(desc, DEFAULT_MAX_ORDER)
}

pub fn make_group_with_bound(desc: &str, bound: usize) -> Result<FiniteGroup> {
    let g = build(desc.trim())?;
    if g.order() > bound {
        return Err(Error::BoundExceeded { order: g.order(), bound });
    }
    Ok(g)
}

fn build(desc: &str) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownDescriptor(desc.to_string());
    if desc.ends_with(".json") || Path::new(desc).is_file() {
        return CayleyTable::load(desc);
    }
    if desc.contains('x') {
        let mut parts = desc.split('x').map(build);
        let first = parts.next().ok_or_else(unknown)??;
        return parts.try_fold(first, |acc, g| Ok(direct_product(&acc, &g?)));
    }
    match desc {
        "Q8" => return quaternion(),
        "V4" | "K4" => return klein_four(),
        "e" | "1" => return Ok(FiniteGroup::trivial()),
        _ => {}
    }
    let (head, tail) = desc.split_at(1.min(desc.len()));
    let n: usize = tail.parse().map_err(|_| unknown())?;
    match head {
        "Z" | "C" => cyclic(n),
        "D" => dihedral(n),
        "S" => symmetric(n),
        "A" => alternating(n),
        _ => Err(unknown()),
    }
    .map_err(|e| match e {
        Error::UnknownDescriptor(_) => unknown(),
        other => other,
    })
}
