//! Finite groupoids, covers of a finite base and their Čech groupoids,
//! pull-back groupoids and refinements.
//!
//! Objects of the Čech groupoid of a cover are the pairs `(i, x)` with
//! `x ∈ U_i`; arrows are the triples `(i, j, x)` with `x ∈ U_i ∩ U_j`. Both
//! are ordered point-major, by `(x, i)` and `(x, i, j)`, which makes the
//! Čech groupoid coincide index-for-index with the pull-back of the trivial
//! groupoid along the inclusion of `⊔U_i`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{check_index, Error, Result};

/// A tuple of indices naming an object or arrow.
pub type Label = Vec<usize>;

#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    obj_labels: Vec<Label>,
    arrow_labels: Vec<Label>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    out: Vec<Vec<usize>>,
    pos: Vec<usize>,
    prod: Vec<Vec<usize>>,
    by_label: HashMap<Label, usize>,
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.same_structure(other)
            && self.obj_labels == other.obj_labels
            && self.arrow_labels == other.arrow_labels
    }
}

impl Eq for FiniteGroupoid {}

/// Raw data for [`FiniteGroupoid::new`].
pub struct GroupoidParts {
    pub obj_labels: Vec<Label>,
    pub arrow_labels: Vec<Label>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub unit: Vec<usize>,
    pub inv: Vec<usize>,
}

impl FiniteGroupoid {
    /// Builds and exhaustively validates a groupoid. `prod(a, b)` is only
    /// called on composable pairs, `tgt(a) = src(b)`.
    pub fn new(
        parts: GroupoidParts,
        mut prod: impl FnMut(usize, usize) -> usize,
    ) -> Result<FiniteGroupoid> {
        let GroupoidParts {
            obj_labels,
            arrow_labels,
            src,
            tgt,
            unit,
            inv,
        } = parts;
        let (n, na) = (obj_labels.len(), arrow_labels.len());
        if src.len() != na || tgt.len() != na || inv.len() != na || unit.len() != n {
            return Err(Error::InvalidGroupoid("table lengths disagree".into()));
        }
        for a in 0..na {
            check_index("source", src[a], n)?;
            check_index("target", tgt[a], n)?;
            check_index("inverse", inv[a], na)?;
        }
        let mut out = vec![Vec::new(); n];
        let mut pos = vec![0; na];
        for a in 0..na {
            pos[a] = out[src[a]].len();
            out[src[a]].push(a);
        }
        let mut table = Vec::with_capacity(na);
        for a in 0..na {
            let row: Vec<usize> = out[tgt[a]].iter().map(|&b| prod(a, b)).collect();
            if let Some(&c) = row.iter().find(|&&c| c >= na) {
                return Err(Error::IndexOutOfRange {
                    what: "product",
                    index: c,
                    bound: na,
                });
            }
            table.push(row);
        }
        let mut by_label = HashMap::with_capacity(na);
        for (a, l) in arrow_labels.iter().enumerate() {
            if by_label.insert(l.clone(), a).is_some() {
                return Err(Error::InvalidGroupoid(format!(
                    "duplicate arrow label {l:?}"
                )));
            }
        }
        let g = FiniteGroupoid {
            obj_labels,
            arrow_labels,
            src,
            tgt,
            unit,
            inv,
            out,
            pos,
            prod: table,
            by_label,
        };
        g.validate()?;
        Ok(g)
    }

    /// Builds a groupoid from a partial product table, deriving units and
    /// inverses.
    pub fn from_table(
        n_objects: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        table: &HashMap<(usize, usize), usize>,
    ) -> Result<FiniteGroupoid> {
        let na = src.len();
        if tgt.len() != na {
            return Err(Error::InvalidGroupoid(
                "source and target lists differ".into(),
            ));
        }
        for a in 0..na {
            check_index("source", src[a], n_objects)?;
            check_index("target", tgt[a], n_objects)?;
        }
        let get = |a: usize, b: usize| -> Result<usize> {
            table.get(&(a, b)).copied().ok_or_else(|| {
                Error::InvalidGroupoid(format!("missing product of composable {a} and {b}"))
            })
        };
        for &(a, b) in table.keys() {
            if a >= na || b >= na || tgt[a] != src[b] {
                return Err(Error::InvalidGroupoid(format!(
                    "product given for ({a}, {b})"
                )));
            }
        }
        let mut unit = Vec::with_capacity(n_objects);
        for o in 0..n_objects {
            let mut found = None;
            for e in (0..na).filter(|&e| src[e] == o && tgt[e] == o) {
                let left = (0..na)
                    .filter(|&b| src[b] == o)
                    .all(|b| get(e, b).ok() == Some(b));
                let right = (0..na)
                    .filter(|&b| tgt[b] == o)
                    .all(|b| get(b, e).ok() == Some(b));
                if left && right {
                    found = Some(e);
                    break;
                }
            }
            unit.push(
                found.ok_or_else(|| Error::InvalidGroupoid(format!("object {o} has no unit")))?,
            );
        }
        let mut inv = Vec::with_capacity(na);
        for a in 0..na {
            let b = (0..na)
                .find(|&b| {
                    src[b] == tgt[a] && tgt[b] == src[a] && get(a, b).ok() == Some(unit[src[a]])
                })
                .ok_or_else(|| Error::InvalidGroupoid(format!("arrow {a} has no inverse")))?;
            inv.push(b);
        }
        let parts = GroupoidParts {
            obj_labels: (0..n_objects).map(|o| vec![o]).collect(),
            arrow_labels: (0..na).map(|a| vec![a]).collect(),
            src,
            tgt,
            unit,
            inv,
        };
        FiniteGroupoid::new(parts, |a, b| table[&(a, b)])
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidGroupoid(m));
        for (o, &e) in self.unit.iter().enumerate() {
            check_index("unit", e, self.n_arrows())?;
            if self.src[e] != o || self.tgt[e] != o {
                return bad(format!("unit of {o} is not a loop at {o}"));
            }
        }
        for a in 0..self.n_arrows() {
            for &b in &self.out[self.tgt[a]] {
                let ab = self.mul(a, b);
                if self.src[ab] != self.src[a] || self.tgt[ab] != self.tgt[b] {
                    return bad(format!("product of {a} and {b} has wrong ends"));
                }
            }
            if self.mul(self.unit[self.src[a]], a) != a || self.mul(a, self.unit[self.tgt[a]]) != a
            {
                return bad(format!("unit law fails at {a}"));
            }
            let i = self.inv[a];
            if self.src[i] != self.tgt[a]
                || self.tgt[i] != self.src[a]
                || self.mul(a, i) != self.unit[self.src[a]]
                || self.mul(i, a) != self.unit[self.tgt[a]]
            {
                return bad(format!("inverse law fails at {a}"));
            }
        }
        for a in 0..self.n_arrows() {
            for &b in &self.out[self.tgt[a]] {
                let ab = self.mul(a, b);
                for &c in &self.out[self.tgt[b]] {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return bad(format!("not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// The groupoid with only unit arrows on `n` objects.
    pub fn trivial(n: usize) -> FiniteGroupoid {
        let parts = GroupoidParts {
            obj_labels: (0..n).map(|o| vec![o]).collect(),
            arrow_labels: (0..n).map(|o| vec![o]).collect(),
            src: (0..n).collect(),
            tgt: (0..n).collect(),
            unit: (0..n).collect(),
            inv: (0..n).collect(),
        };
        FiniteGroupoid::new(parts, |a, _| a).expect("trivial groupoid")
    }

    /// The groupoid with exactly one arrow `a → b` for every pair of
    /// objects; arrow `a·n + b` goes from `a` to `b`.
    pub fn pair(n: usize) -> FiniteGroupoid {
        let parts = GroupoidParts {
            obj_labels: (0..n).map(|o| vec![o]).collect(),
            arrow_labels: (0..n * n).map(|k| vec![k / n, k % n]).collect(),
            src: (0..n * n).map(|k| k / n).collect(),
            tgt: (0..n * n).map(|k| k % n).collect(),
            unit: (0..n).map(|o| o * n + o).collect(),
            inv: (0..n * n).map(|k| (k % n) * n + k / n).collect(),
        };
        FiniteGroupoid::new(parts, |a, b| (a / n) * n + b % n).expect("pair groupoid")
    }

    pub fn n_objects(&self) -> usize {
        self.unit.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    pub fn unit(&self, o: usize) -> usize {
        self.unit[o]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.unit[self.src[a]] == a
    }

    /// Arrows with source `o`, in index order.
    pub fn out(&self, o: usize) -> &[usize] {
        &self.out[o]
    }

    /// `a•b`, defined when `tgt(a) = src(b)`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        (self.tgt[a] == self.src[b]).then(|| self.prod[a][self.pos[b]])
    }

    /// `a•b` for a composable pair.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        debug_assert_eq!(self.tgt[a], self.src[b]);
        self.prod[a][self.pos[b]]
    }

    pub fn obj_label(&self, o: usize) -> &Label {
        &self.obj_labels[o]
    }

    pub fn arrow_label(&self, a: usize) -> &Label {
        &self.arrow_labels[a]
    }

    pub fn arrow_by_label(&self, l: &[usize]) -> Option<usize> {
        self.by_label.get(l).copied()
    }

    /// Equality of the underlying groupoids, ignoring labels.
    pub fn same_structure(&self, other: &FiniteGroupoid) -> bool {
        self.src == other.src
            && self.tgt == other.tgt
            && self.unit == other.unit
            && self.inv == other.inv
            && self.prod == other.prod
    }

    /// Replaces the object labels, keeping everything else.
    pub fn with_object_labels(mut self, labels: Vec<Label>) -> FiniteGroupoid {
        assert_eq!(labels.len(), self.n_objects());
        self.obj_labels = labels;
        self
    }

    /// Composable pairs `(a, b)` in lexicographic order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_arrows()).flat_map(move |a| self.out[self.tgt[a]].iter().map(move |&b| (a, b)))
    }
}

/// A functor given by its object and arrow maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMorphism {
    pub obj_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl GroupoidMorphism {
    pub fn identity(g: &FiniteGroupoid) -> GroupoidMorphism {
        GroupoidMorphism {
            obj_map: (0..g.n_objects()).collect(),
            arrow_map: (0..g.n_arrows()).collect(),
        }
    }

    pub fn validate(&self, from: &FiniteGroupoid, to: &FiniteGroupoid) -> Result<()> {
        let bad = |m: String| Err(Error::NotAMorphism(m));
        if self.obj_map.len() != from.n_objects() || self.arrow_map.len() != from.n_arrows() {
            return bad("map lengths do not match the source".into());
        }
        for &o in &self.obj_map {
            check_index("object image", o, to.n_objects())?;
        }
        for &a in &self.arrow_map {
            check_index("arrow image", a, to.n_arrows())?;
        }
        for a in 0..from.n_arrows() {
            let fa = self.arrow_map[a];
            if to.src(fa) != self.obj_map[from.src(a)] || to.tgt(fa) != self.obj_map[from.tgt(a)] {
                return bad(format!("arrow {a} changes ends"));
            }
        }
        for o in 0..from.n_objects() {
            if self.arrow_map[from.unit(o)] != to.unit(self.obj_map[o]) {
                return bad(format!("unit of {o} not preserved"));
            }
        }
        for (a, b) in from.composable_pairs() {
            if self.arrow_map[from.mul(a, b)] != to.mul(self.arrow_map[a], self.arrow_map[b]) {
                return bad(format!("product of {a} and {b} not preserved"));
            }
        }
        Ok(())
    }

    pub fn is_bijective(&self, from: &FiniteGroupoid, to: &FiniteGroupoid) -> bool {
        from.n_objects() == to.n_objects()
            && from.n_arrows() == to.n_arrows()
            && is_permutation(&self.obj_map)
            && is_permutation(&self.arrow_map)
    }
}

pub(crate) fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter()
        .all(|&v| v < map.len() && !std::mem::replace(&mut seen[v], true))
}

pub(crate) fn invert_permutation(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (a, &b) in map.iter().enumerate() {
        inv[b] = a;
    }
    inv
}

/// An indexed cover `{U_i}` of the base `0..base_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    base_size: usize,
    sets: Vec<Vec<usize>>,
    sets_at: Vec<Vec<usize>>,
    objects: Vec<(usize, usize)>,
    pairs: Vec<(usize, usize, usize)>,
    triples: Vec<[usize; 4]>,
    obj_off: Vec<usize>,
    pair_off: Vec<usize>,
    triple_off: Vec<usize>,
}

impl Cover {
    /// Each set must be strictly increasing and every point covered.
    pub fn new(base_size: usize, sets: Vec<Vec<usize>>) -> Result<Cover> {
        let mut sets_at = vec![Vec::new(); base_size];
        for (i, s) in sets.iter().enumerate() {
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidCover(format!(
                    "set {i} is not strictly increasing"
                )));
            }
            for &x in s {
                if x >= base_size {
                    return Err(Error::InvalidCover(format!(
                        "set {i} contains {x} outside the base"
                    )));
                }
                sets_at[x].push(i);
            }
        }
        if let Some(x) = sets_at.iter().position(|s| s.is_empty()) {
            return Err(Error::InvalidCover(format!("point {x} is not covered")));
        }
        let (mut objects, mut pairs, mut triples) = (Vec::new(), Vec::new(), Vec::new());
        let (mut obj_off, mut pair_off, mut triple_off) = (vec![0], vec![0], vec![0]);
        for (x, here) in sets_at.iter().enumerate() {
            for &i in here {
                objects.push((i, x));
                for &j in here {
                    pairs.push((i, j, x));
                    for &k in here {
                        triples.push([i, j, k, x]);
                    }
                }
            }
            obj_off.push(objects.len());
            pair_off.push(pairs.len());
            triple_off.push(triples.len());
        }
        Ok(Cover {
            base_size,
            sets,
            sets_at,
            objects,
            pairs,
            triples,
            obj_off,
            pair_off,
            triple_off,
        })
    }

    /// The cover of the base by its points.
    pub fn singletons(base_size: usize) -> Cover {
        Cover::new(base_size, (0..base_size).map(|x| vec![x]).collect()).expect("singleton cover")
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn n_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Indices of the sets containing `x`, increasing.
    pub fn sets_at(&self, x: usize) -> &[usize] {
        &self.sets_at[x]
    }

    pub fn contains(&self, i: usize, x: usize) -> bool {
        self.local(i, x).is_some()
    }

    fn local(&self, i: usize, x: usize) -> Option<usize> {
        self.sets_at.get(x)?.binary_search(&i).ok()
    }

    /// Points of `⊔U_i`, ordered by `(x, i)`.
    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object(&self, o: usize) -> (usize, usize) {
        self.objects[o]
    }

    pub fn object_index(&self, i: usize, x: usize) -> Option<usize> {
        Some(self.obj_off[x] + self.local(i, x)?)
    }

    /// Points of `⊔U_ij`, ordered by `(x, i, j)`.
    pub fn n_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, p: usize) -> (usize, usize, usize) {
        self.pairs[p]
    }

    pub fn pair_index(&self, i: usize, j: usize, x: usize) -> Option<usize> {
        let d = self.sets_at.get(x)?.len();
        Some(self.pair_off[x] + self.local(i, x)? * d + self.local(j, x)?)
    }

    /// Points of `⊔U_ijk`, ordered by `(x, i, j, k)`.
    pub fn n_triples(&self) -> usize {
        self.triples.len()
    }

    pub fn triple(&self, t: usize) -> [usize; 4] {
        self.triples[t]
    }

    pub fn triple_index(&self, i: usize, j: usize, k: usize, x: usize) -> Option<usize> {
        let d = self.sets_at.get(x)?.len();
        Some(
            self.triple_off[x]
                + (self.local(i, x)? * d + self.local(j, x)?) * d
                + self.local(k, x)?,
        )
    }

    /// Index ranges of objects, pairs and triples over the point `x`.
    pub fn objects_at(&self, x: usize) -> std::ops::Range<usize> {
        self.obj_off[x]..self.obj_off[x + 1]
    }

    pub fn pairs_at(&self, x: usize) -> std::ops::Range<usize> {
        self.pair_off[x]..self.pair_off[x + 1]
    }

    pub fn triples_at(&self, x: usize) -> std::ops::Range<usize> {
        self.triple_off[x]..self.triple_off[x + 1]
    }

    /// The map `⊔U_i → base`.
    pub fn inclusion(&self) -> Vec<usize> {
        self.objects.iter().map(|&(_, x)| x).collect()
    }
}

/// The Čech groupoid of a cover; arrow `p` is the pair point `p` of the
/// cover, so arrow indices agree with [`Cover::pair_index`].
pub fn cech_groupoid(c: &Cover) -> FiniteGroupoid {
    let src = (0..c.n_pairs()).map(|p| {
        let (i, _, x) = c.pair(p);
        c.object_index(i, x).unwrap()
    });
    let tgt = (0..c.n_pairs()).map(|p| {
        let (_, j, x) = c.pair(p);
        c.object_index(j, x).unwrap()
    });
    let parts = GroupoidParts {
        obj_labels: (0..c.n_objects())
            .map(|o| {
                let (i, x) = c.object(o);
                vec![i, x]
            })
            .collect(),
        arrow_labels: (0..c.n_pairs())
            .map(|p| {
                let (i, j, x) = c.pair(p);
                vec![i, j, x]
            })
            .collect(),
        src: src.collect(),
        tgt: tgt.collect(),
        unit: (0..c.n_objects())
            .map(|o| {
                let (i, x) = c.object(o);
                c.pair_index(i, i, x).unwrap()
            })
            .collect(),
        inv: (0..c.n_pairs())
            .map(|p| {
                let (i, j, x) = c.pair(p);
                c.pair_index(j, i, x).unwrap()
            })
            .collect(),
    };
    FiniteGroupoid::new(parts, |a, b| {
        let ((i, _, x), (_, k, _)) = (c.pair(a), c.pair(b));
        c.pair_index(i, k, x).unwrap()
    })
    .expect("Čech groupoid")
}

/// The pull-back `𝒢[p]` along `p: M' → 𝒢₀`: arrows are the triples
/// `(m, γ, m')` with `p(m) = src γ` and `tgt γ = p(m')`, ordered
/// lexicographically and labelled by that triple.
pub fn pullback_groupoid(g: &FiniteGroupoid, p: &[usize]) -> Result<FiniteGroupoid> {
    for &y in p {
        check_index("pull-back map value", y, g.n_objects())?;
    }
    let mut fibre = vec![Vec::new(); g.n_objects()];
    for (m, &y) in p.iter().enumerate() {
        fibre[y].push(m);
    }
    let mut labels = Vec::new();
    for (m, &y) in p.iter().enumerate() {
        for &a in g.out(y) {
            for &m2 in &fibre[g.tgt(a)] {
                labels.push(vec![m, a, m2]);
            }
        }
    }
    let index: HashMap<&[usize], usize> = labels
        .iter()
        .enumerate()
        .map(|(k, l)| (l.as_slice(), k))
        .collect();
    let find = |m: usize, a: usize, m2: usize| index[&[m, a, m2][..]];
    let parts = GroupoidParts {
        obj_labels: (0..p.len()).map(|m| vec![m]).collect(),
        src: labels.iter().map(|l| l[0]).collect(),
        tgt: labels.iter().map(|l| l[2]).collect(),
        unit: (0..p.len()).map(|m| find(m, g.unit(p[m]), m)).collect(),
        inv: labels
            .iter()
            .map(|l| find(l[2], g.inv(l[1]), l[0]))
            .collect(),
        arrow_labels: labels.clone(),
    };
    FiniteGroupoid::new(parts, |a, b| {
        find(
            labels[a][0],
            g.mul(labels[a][1], labels[b][1]),
            labels[b][2],
        )
    })
}

/// Whether `(m, γ) ↦ tgt γ` is onto the objects of `g`; returns the first
/// missed object otherwise.
pub fn check_gen_surj_subm(p: &[usize], g: &FiniteGroupoid) -> Result<()> {
    let mut hit = vec![false; g.n_objects()];
    for &y in p {
        check_index("map value", y, g.n_objects())?;
        for &a in g.out(y) {
            hit[g.tgt(a)] = true;
        }
    }
    match hit.iter().position(|&h| !h) {
        Some(y) => Err(Error::NotGenSurjSubmersion(y)),
        None => Ok(()),
    }
}

pub fn is_gen_surj_subm(p: &[usize], g: &FiniteGroupoid) -> bool {
    check_gen_surj_subm(p, g).is_ok()
}

/// `V` refines `U` via `σ` when `V_j ⊆ U_σ(j)` for every `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub fine: Arc<Cover>,
    pub coarse: Arc<Cover>,
    pub sigma: Vec<usize>,
}

impl Refinement {
    pub fn new(fine: Arc<Cover>, coarse: Arc<Cover>, sigma: Vec<usize>) -> Result<Refinement> {
        if fine.base_size() != coarse.base_size() {
            return Err(Error::DomainMismatch("covers over different bases".into()));
        }
        if sigma.len() != fine.n_sets() {
            return Err(Error::ShapeMismatch(
                "σ must have one entry per fine set".into(),
            ));
        }
        for (j, &i) in sigma.iter().enumerate() {
            check_index("coarse set", i, coarse.n_sets())?;
            if let Some(&x) = fine.set(j).iter().find(|&&x| !coarse.contains(i, x)) {
                return Err(Error::NotARefinement { set: j, point: x });
            }
        }
        Ok(Refinement {
            fine,
            coarse,
            sigma,
        })
    }

    /// The least containing set for each fine set.
    pub fn least(fine: Arc<Cover>, coarse: Arc<Cover>) -> Result<Refinement> {
        let mut sigma = Vec::with_capacity(fine.n_sets());
        for j in 0..fine.n_sets() {
            let i = (0..coarse.n_sets())
                .find(|&i| fine.set(j).iter().all(|&x| coarse.contains(i, x)))
                .ok_or(Error::NotARefinement {
                    set: j,
                    point: fine.set(j).first().copied().unwrap_or(0),
                })?;
            sigma.push(i);
        }
        Refinement::new(fine, coarse, sigma)
    }

    /// `(j, x) ↦ (σ(j), x)` on object indices.
    pub fn object_map(&self) -> Vec<usize> {
        (0..self.fine.n_objects())
            .map(|o| {
                let (j, x) = self.fine.object(o);
                self.coarse.object_index(self.sigma[j], x).unwrap()
            })
            .collect()
    }

    /// The induced functor between Čech groupoids.
    pub fn functor(&self) -> GroupoidMorphism {
        GroupoidMorphism {
            obj_map: self.object_map(),
            arrow_map: (0..self.fine.n_pairs())
                .map(|p| {
                    let (i, j, x) = self.fine.pair(p);
                    self.coarse
                        .pair_index(self.sigma[i], self.sigma[j], x)
                        .unwrap()
                })
                .collect(),
        }
    }
}

/// The cover by the nonempty `U_i ∩ V_j`, indexed by `(i, j)` in
/// lexicographic order, with its refinements of both covers.
#[derive(Debug, Clone)]
pub struct CommonRefinement {
    pub cover: Arc<Cover>,
    pub index_pairs: Vec<(usize, usize)>,
    pub to_first: Refinement,
    pub to_second: Refinement,
}

pub fn common_refinement(u: &Arc<Cover>, v: &Arc<Cover>) -> Result<CommonRefinement> {
    if u.base_size() != v.base_size() {
        return Err(Error::DomainMismatch("covers over different bases".into()));
    }
    let mut sets = Vec::new();
    let mut index_pairs = Vec::new();
    for i in 0..u.n_sets() {
        for j in 0..v.n_sets() {
            let w: Vec<usize> = u
                .set(i)
                .iter()
                .copied()
                .filter(|&x| v.contains(j, x))
                .collect();
            if !w.is_empty() {
                sets.push(w);
                index_pairs.push((i, j));
            }
        }
    }
    let cover = Arc::new(Cover::new(u.base_size(), sets)?);
    let to_first = Refinement::new(
        cover.clone(),
        u.clone(),
        index_pairs.iter().map(|p| p.0).collect(),
    )?;
    let to_second = Refinement::new(
        cover.clone(),
        v.clone(),
        index_pairs.iter().map(|p| p.1).collect(),
    )?;
    Ok(CommonRefinement {
        cover,
        index_pairs,
        to_first,
        to_second,
    })
}

impl CommonRefinement {
    /// For each point of `⊔W_k`, the least `m` with `q(m)` equal to its
    /// base point.
    pub fn section(&self, q: &[usize]) -> Result<Vec<usize>> {
        (0..self.cover.n_objects())
            .map(|o| {
                let x = self.cover.object(o).1;
                q.iter()
                    .position(|&y| y == x)
                    .ok_or_else(|| Error::NotSurjective(format!("{x} has no preimage")))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{circ3, pt2};

    #[test]
    fn cech_sizes() {
        let g = cech_groupoid(&circ3());
        assert_eq!((g.n_objects(), g.n_arrows()), (6, 12));
        let g = cech_groupoid(&pt2());
        assert_eq!((g.n_objects(), g.n_arrows()), (2, 4));
    }

    #[test]
    fn cech_matches_pullback_of_trivial() {
        for c in [circ3(), pt2(), Cover::singletons(4)] {
            let p =
                pullback_groupoid(&FiniteGroupoid::trivial(c.base_size()), &c.inclusion()).unwrap();
            assert!(p.same_structure(&cech_groupoid(&c)));
        }
    }

    #[test]
    fn uncovered_point_is_rejected() {
        assert!(matches!(
            Cover::new(3, vec![vec![0, 1]]),
            Err(Error::InvalidCover(_))
        ));
        assert!(matches!(
            Cover::new(3, vec![vec![1, 0, 2]]),
            Err(Error::InvalidCover(_))
        ));
    }

    #[test]
    fn singleton_refinement_of_circ3() {
        let r = Refinement::least(Arc::new(Cover::singletons(3)), Arc::new(circ3())).unwrap();
        assert_eq!(r.sigma, vec![0, 0, 1]);
        r.functor()
            .validate(&cech_groupoid(&r.fine), &cech_groupoid(&r.coarse))
            .unwrap();
        assert!(matches!(
            Refinement::new(r.fine.clone(), r.coarse.clone(), vec![1, 0, 1]),
            Err(Error::NotARefinement { set: 0, point: 0 })
        ));
    }

    #[test]
    fn pair_groupoid_and_submersions() {
        let g = FiniteGroupoid::pair(3);
        assert_eq!(g.n_arrows(), 9);
        assert!(is_gen_surj_subm(&[1], &g));
        let t = FiniteGroupoid::trivial(3);
        assert!(matches!(
            check_gen_surj_subm(&[0, 2], &t),
            Err(Error::NotGenSurjSubmersion(1))
        ));
        let p = pullback_groupoid(&g, &[0, 0]).unwrap();
        assert_eq!(p.n_arrows(), 4);
    }

    #[test]
    fn common_refinement_refines_both() {
        let u = Arc::new(circ3());
        let v = Arc::new(Cover::singletons(3));
        let w = common_refinement(&u, &v).unwrap();
        assert_eq!(w.cover.n_sets(), 6);
        assert_eq!(
            w.section(&[2, 1, 0, 1]).unwrap(),
            (0..6).map(|o| 2 - w.cover.object(o).1).collect::<Vec<_>>()
        );
    }

    #[test]
    fn from_table_derives_units_and_inverses() {
        let g = FiniteGroupoid::pair(2);
        let mut t = HashMap::new();
        for (a, b) in g.composable_pairs() {
            t.insert((a, b), g.mul(a, b));
        }
        let h = FiniteGroupoid::from_table(
            2,
            (0..4).map(|a| g.src(a)).collect(),
            (0..4).map(|a| g.tgt(a)).collect(),
            &t,
        )
        .unwrap();
        assert!(h.same_structure(&g));
    }
}
