//! Finite groups given by Cayley tables.
//!
//! Elements are the indices `0..order`, with `0` the identity. Homomorphisms
//! are plain image arrays; the groups they relate are passed alongside.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table. `table[a][b]` is `a·b` and element `0`
    /// must be the identity.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!(
                    "row {a} has length {}",
                    row.len()
                )));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(Error::NotAGroup(format!(
                    "entry {v} in row {a} out of range"
                )));
            }
        }
        if let Some(a) = (0..n).find(|&a| table[0][a] != a || table[a][0] != a) {
            return Err(Error::NotAGroup(format!("0 is not an identity at {a}")));
        }
        for a in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for b in 0..n {
                if std::mem::replace(&mut row_seen[table[a][b]], true) {
                    return Err(Error::NotAGroup(format!("row {a} repeats an entry")));
                }
                if std::mem::replace(&mut col_seen[table[b][a]], true) {
                    return Err(Error::NotAGroup(format!("column {a} repeats an entry")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inv = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == 0).expect("latin square"))
            .collect();
        Ok(FiniteGroup {
            name: name.to_string(),
            order: n,
            table: table.into_iter().flatten().collect(),
            inv,
        })
    }

    /// The cyclic group of order `n` with `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FiniteGroup::from_table(&format!("Z{n}"), table).expect("cyclic table is a group")
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.order)
    }

    /// `a·b·a⁻¹`.
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
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

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Greedy generating set: repeatedly adjoin the least element outside
    /// the subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[0] = true;
        while let Some(a) = (0..self.order).find(|&a| !inside[a]) {
            gens.push(a);
            for x in self.closure(&gens) {
                inside[x] = true;
            }
        }
        gens
    }

    /// Elements of the subgroup generated by `gens`, in discovery order.
    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }
}

/// A homomorphism as an image array over the source's elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupHom {
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn identity(g: &FiniteGroup) -> GroupHom {
        GroupHom {
            map: (0..g.order()).collect(),
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            map: other.map.iter().map(|&a| self.map[a]).collect(),
        }
    }

    pub fn inverse(&self) -> GroupHom {
        let mut map = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            map[b] = a;
        }
        GroupHom { map }
    }
}

/// Checks that `f: g → k` is a homomorphism, returning the first failing
/// pair in the error.
pub fn check_hom(g: &FiniteGroup, k: &FiniteGroup, f: &GroupHom) -> Result<()> {
    if f.map.len() != g.order() {
        return Err(Error::ShapeMismatch(format!(
            "map has {} entries, source has order {}",
            f.map.len(),
            g.order()
        )));
    }
    if let Some(&v) = f.map.iter().find(|&&v| v >= k.order()) {
        return Err(Error::IndexOutOfRange {
            what: "image",
            index: v,
            bound: k.order(),
        });
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            if f.apply(g.mul(a, b)) != k.mul(f.apply(a), f.apply(b)) {
                return Err(Error::NotAHom(a, b));
            }
        }
    }
    Ok(())
}

pub fn is_bijective(f: &GroupHom, target_order: usize) -> bool {
    if f.map.len() != target_order {
        return false;
    }
    let mut seen = vec![false; target_order];
    f.map
        .iter()
        .all(|&b| b < target_order && !std::mem::replace(&mut seen[b], true))
}

/// All isomorphisms `g → k`, sorted lexicographically by image array.
///
/// Images are chosen generator by generator; after each choice the map is
/// extended over the subgroup generated so far and abandoned on conflict.
pub fn enumerate_isomorphisms(g: &FiniteGroup, k: &FiniteGroup) -> Vec<GroupHom> {
    if g.order() != k.order() {
        return Vec::new();
    }
    let gens = g.generators();
    let k_orders: Vec<usize> = (0..k.order()).map(|b| k.element_order(b)).collect();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    extend_isos(g, k, &gens, &k_orders, &mut images, &mut out);
    out.sort();
    out
}

fn extend_isos(
    g: &FiniteGroup,
    k: &FiniteGroup,
    gens: &[usize],
    k_orders: &[usize],
    images: &mut Vec<usize>,
    out: &mut Vec<GroupHom>,
) {
    let depth = images.len();
    if depth == gens.len() {
        let map = partial_map(g, k, gens, images).expect("checked at previous depth");
        if map.iter().all(|m| m.is_some()) {
            out.push(GroupHom {
                map: map.into_iter().map(|m| m.unwrap()).collect(),
            });
        }
        return;
    }
    let want = g.element_order(gens[depth]);
    for b in 0..k.order() {
        if k_orders[b] != want || images.contains(&b) {
            continue;
        }
        images.push(b);
        if partial_map(g, k, &gens[..=depth], images).is_some() {
            extend_isos(g, k, gens, k_orders, images, out);
        }
        images.pop();
    }
}

/// Extends generator images over the generated subgroup. Returns `None`
/// when the assignment is inconsistent or not injective.
fn partial_map(
    g: &FiniteGroup,
    k: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<Option<usize>>> {
    let mut map: Vec<Option<usize>> = vec![None; g.order()];
    let mut hit = vec![false; k.order()];
    map[0] = Some(0);
    hit[0] = true;
    let mut queue = vec![0];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        let fx = map[x].unwrap();
        for (&s, &fs) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = k.mul(fx, fs);
            match map[y] {
                Some(v) if v != fy => return None,
                Some(_) => {}
                None => {
                    if std::mem::replace(&mut hit[fy], true) {
                        return None;
                    }
                    map[y] = Some(fy);
                    queue.push(y);
                }
            }
        }
        i += 1;
    }
    Some(map)
}

/// `Aut(G)` with its elements kept in lexicographic order of their image
/// arrays, so that element `0` is the identity map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    pub elements: Vec<GroupHom>,
    pub group: FiniteGroup,
}

impl AutGroup {
    pub fn index_of(&self, f: &GroupHom) -> Option<usize> {
        self.elements.binary_search(f).ok()
    }
}

/// The automorphism group, multiplied by composition: `(a·b)(x) = a(b(x))`.
pub fn automorphism_group(g: &FiniteGroup) -> AutGroup {
    let elements = enumerate_isomorphisms(g, g);
    let index = |f: &GroupHom| elements.binary_search(f).expect("closed under composition");
    let table = elements
        .iter()
        .map(|a| elements.iter().map(|b| index(&a.compose(b))).collect())
        .collect();
    let group = FiniteGroup::from_table(&format!("Aut({})", g.name()), table)
        .expect("automorphisms form a group");
    AutGroup { elements, group }
}
