//! Non-abelian Čech cocycles with values in a crossed module, coboundaries
//! and the first cohomology set of a finite cover.
//!
//! A cocycle is a pair of tables: `λ` over `⊔U_ij` with values in `H` and
//! `g` over `⊔U_ijk` with values in `G`, indexed as in [`Cover`]. A
//! coboundary is `r` over `⊔U_i` with values in `H` and `v` over `⊔U_ij`
//! with values in `G`. Every relation holds pointwise, so searches run one
//! base point at a time and combine the local results.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::cech::{CommonRefinement, Cover, Refinement};
use crate::error::{Error, Result};
use crate::xmod::CrossedModule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    cm: Arc<CrossedModule>,
    cover: Arc<Cover>,
    pub lam: Vec<usize>,
    pub g: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coboundary {
    cm: Arc<CrossedModule>,
    cover: Arc<Cover>,
    pub r: Vec<usize>,
    pub v: Vec<usize>,
}

fn check_values(what: &'static str, values: &[usize], len: usize, bound: usize) -> Result<()> {
    if values.len() != len {
        return Err(Error::ShapeMismatch(format!(
            "{what} has {} entries, expected {len}",
            values.len()
        )));
    }
    match values.iter().find(|&&v| v >= bound) {
        Some(&v) => Err(Error::IndexOutOfRange {
            what,
            index: v,
            bound,
        }),
        None => Ok(()),
    }
}

impl Cocycle {
    /// Checks shapes and value ranges only; see [`Cocycle::validate`].
    pub fn from_tables(
        cm: Arc<CrossedModule>,
        cover: Arc<Cover>,
        lam: Vec<usize>,
        g: Vec<usize>,
    ) -> Result<Cocycle> {
        check_values("lam value", &lam, cover.n_pairs(), cm.h().order())?;
        check_values("g value", &g, cover.n_triples(), cm.g().order())?;
        Ok(Cocycle { cm, cover, lam, g })
    }

    /// The cocycle with every entry the identity.
    pub fn trivial(cm: Arc<CrossedModule>, cover: Arc<Cover>) -> Cocycle {
        let (lam, g) = (vec![0; cover.n_pairs()], vec![0; cover.n_triples()]);
        Cocycle { cm, cover, lam, g }
    }

    pub fn cm(&self) -> &Arc<CrossedModule> {
        &self.cm
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn lam_at(&self, i: usize, j: usize, x: usize) -> usize {
        self.lam[self.cover.pair_index(i, j, x).expect("x in U_ij")]
    }

    pub fn g_at(&self, i: usize, j: usize, k: usize, x: usize) -> usize {
        self.g[self.cover.triple_index(i, j, k, x).expect("x in U_ijk")]
    }

    /// Normalisation `g_iij = e`, then `ρ(g_ijk)·λ_ik = λ_ij·λ_jk`, then
    /// `g_ijk·g_ikl = λ_ij(g_jkl)·g_ijl`.
    pub fn validate(&self) -> Result<()> {
        let (c, cm) = (&*self.cover, &*self.cm);
        for x in 0..c.base_size() {
            for &i in c.sets_at(x) {
                for &j in c.sets_at(x) {
                    if self.g_at(i, i, j, x) != 0 {
                        return Err(Error::NormalizationViolation { i, j, x });
                    }
                }
            }
        }
        for t in 0..c.n_triples() {
            let [i, j, k, x] = c.triple(t);
            if !relation_one(
                cm,
                self.lam_at(i, j, x),
                self.lam_at(j, k, x),
                self.lam_at(i, k, x),
                self.g[t],
            ) {
                return Err(Error::CocycleRelation1 { i, j, k, x });
            }
        }
        for x in 0..c.base_size() {
            let s = c.sets_at(x);
            for &i in s {
                for &j in s {
                    for &k in s {
                        for &l in s {
                            let ok = relation_two(
                                cm,
                                self.lam_at(i, j, x),
                                self.g_at(i, j, k, x),
                                self.g_at(i, k, l, x),
                                self.g_at(j, k, l, x),
                                self.g_at(i, j, l, x),
                            );
                            if !ok {
                                return Err(Error::CocycleRelation2 { i, j, k, l, x });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    fn key(&self) -> (&[usize], &[usize]) {
        (&self.lam, &self.g)
    }
}

impl PartialOrd for Cocycle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on `(λ, g)`; only meaningful between cocycles of the same
/// crossed module and cover.
impl Ord for Cocycle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

fn relation_one(cm: &CrossedModule, lij: usize, ljk: usize, lik: usize, gijk: usize) -> bool {
    let h = cm.h();
    h.mul(cm.rho(gijk), lik) == h.mul(lij, ljk)
}

fn relation_two(
    cm: &CrossedModule,
    lij: usize,
    gijk: usize,
    gikl: usize,
    gjkl: usize,
    gijl: usize,
) -> bool {
    let g = cm.g();
    g.mul(gijk, gikl) == g.mul(cm.act(lij, gjkl), gijl)
}

impl Coboundary {
    pub fn from_tables(
        cm: Arc<CrossedModule>,
        cover: Arc<Cover>,
        r: Vec<usize>,
        v: Vec<usize>,
    ) -> Result<Coboundary> {
        check_values("r value", &r, cover.n_objects(), cm.h().order())?;
        check_values("v value", &v, cover.n_pairs(), cm.g().order())?;
        Ok(Coboundary { cm, cover, r, v })
    }

    pub fn identity(cm: Arc<CrossedModule>, cover: Arc<Cover>) -> Coboundary {
        let (r, v) = (vec![0; cover.n_objects()], vec![0; cover.n_pairs()]);
        Coboundary { cm, cover, r, v }
    }

    pub fn cm(&self) -> &Arc<CrossedModule> {
        &self.cm
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn r_at(&self, i: usize, x: usize) -> usize {
        self.r[self.cover.object_index(i, x).expect("x in U_i")]
    }

    pub fn v_at(&self, i: usize, j: usize, x: usize) -> usize {
        self.v[self.cover.pair_index(i, j, x).expect("x in U_ij")]
    }

    /// The first point with `v_ii ≠ e`, if any.
    pub fn check_normalized(&self) -> Result<()> {
        for o in 0..self.cover.n_objects() {
            let (i, x) = self.cover.object(o);
            if self.v_at(i, i, x) != 0 {
                return Err(Error::UnnormalizedCoboundary { i, x });
            }
        }
        Ok(())
    }
}

fn same_domain(cm: &CrossedModule, cover: &Cover, c: &Cocycle) -> Result<()> {
    if *c.cm != *cm || *c.cover != *cover {
        return Err(Error::DomainMismatch(
            "crossed module or cover differs".into(),
        ));
    }
    Ok(())
}

/// `λ'_ij = ρ(v_ij)·r_i·λ_ij·r_j⁻¹` and
/// `g'_ijk = λ'_ij(v_jk)·v_ij·r_i(g_ijk)·v_ik⁻¹`.
///
/// Only normalised coboundaries (`v_ii = e`) carry cocycles to cocycles.
pub fn apply_coboundary(c: &Cocycle, cb: &Coboundary) -> Result<Cocycle> {
    same_domain(&cb.cm, &cb.cover, c)?;
    cb.check_normalized()?;
    let (cov, cm) = (&*c.cover, &*c.cm);
    let (g, h) = (cm.g(), cm.h());
    let lam: Vec<usize> = (0..cov.n_pairs())
        .map(|p| {
            let (i, j, x) = cov.pair(p);
            let t = h.mul(h.mul(cm.rho(cb.v[p]), cb.r_at(i, x)), c.lam[p]);
            h.mul(t, h.inv(cb.r_at(j, x)))
        })
        .collect();
    let gg = (0..cov.n_triples())
        .map(|t| {
            let [i, j, k, x] = cov.triple(t);
            let lij = lam[cov.pair_index(i, j, x).unwrap()];
            let a = g.mul(cm.act(lij, cb.v_at(j, k, x)), cb.v_at(i, j, x));
            let b = g.mul(cm.act(cb.r_at(i, x), c.g[t]), g.inv(cb.v_at(i, k, x)));
            g.mul(a, b)
        })
        .collect();
    let out = Cocycle {
        cm: c.cm.clone(),
        cover: c.cover.clone(),
        lam,
        g: gg,
    };
    out.validate()?;
    Ok(out)
}

/// Checks the defining relations of `c ~ c2` via `cb` directly, in the form
/// `λ2_ij = ρ(v_ij)·r_i·λ_ij·r_j⁻¹` and `g2_ijk·v_ik = λ2_ij(v_jk)·v_ij·r_i(g_ijk)`.
pub fn coboundary_relates(c: &Cocycle, c2: &Cocycle, cb: &Coboundary) -> bool {
    if same_domain(&cb.cm, &cb.cover, c).is_err() || same_domain(&cb.cm, &cb.cover, c2).is_err() {
        return false;
    }
    (0..cb.cover.base_size()).all(|x| relates_at(c, c2, &cb.r, &cb.v, x, true))
}

/// Relations at the point `x`. With `global` the tables are indexed by the
/// cover; otherwise `r` and `v` hold only the entries over `x`.
fn relates_at(c: &Cocycle, c2: &Cocycle, r: &[usize], v: &[usize], x: usize, global: bool) -> bool {
    let (cov, cm) = (&*c.cover, &*c.cm);
    let (g, h) = (cm.g(), cm.h());
    let s = cov.sets_at(x);
    let d = s.len();
    let (obase, pbase) = if global {
        (cov.objects_at(x).start, cov.pairs_at(x).start)
    } else {
        (0, 0)
    };
    let rr = |a: usize| r[obase + a];
    let vv = |a: usize, b: usize| v[pbase + a * d + b];
    for a in 0..d {
        for b in 0..d {
            let p = cov.pairs_at(x).start + a * d + b;
            let rhs = h.mul(
                h.mul(h.mul(cm.rho(vv(a, b)), rr(a)), c.lam[p]),
                h.inv(rr(b)),
            );
            if c2.lam[p] != rhs {
                return false;
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            let l2 = c2.lam[cov.pairs_at(x).start + a * d + b];
            for k in 0..d {
                let t = cov.triples_at(x).start + (a * d + b) * d + k;
                let lhs = g.mul(c2.g[t], vv(a, k));
                let rhs = g.mul(g.mul(cm.act(l2, vv(b, k)), vv(a, b)), cm.act(rr(a), c.g[t]));
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

fn pow_sat(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

fn check_bound(size: u128, bound: u64) -> Result<()> {
    if size > bound as u128 {
        Err(Error::SearchSpaceTooLarge { size, bound })
    } else {
        Ok(())
    }
}

/// Size of the space of all candidate cocycle tables.
pub fn cocycle_search_size(cm: &CrossedModule, cover: &Cover) -> u128 {
    pow_sat(cm.h().order(), cover.n_pairs())
        .saturating_mul(pow_sat(cm.g().order(), cover.n_triples()))
}

/// Size of the space of normalised coboundaries.
pub fn coboundary_search_size(cm: &CrossedModule, cover: &Cover) -> u128 {
    pow_sat(cm.h().order(), cover.n_objects())
        .saturating_mul(pow_sat(cm.g().order(), cover.n_pairs() - cover.n_objects()))
}

/// Backtracking over variables with per-variable finite domains. Each
/// constraint is checked as soon as its last variable is assigned.
struct Search<'a, C> {
    domains: Vec<Vec<usize>>,
    checks_at: Vec<Vec<C>>,
    holds: &'a dyn Fn(&C, &[usize]) -> bool,
}

impl<C> Search<'_, C> {
    /// Calls `emit` on every solution in lexicographic order until it
    /// returns `false`.
    fn run(&self, emit: &mut dyn FnMut(&[usize]) -> bool) {
        let mut assignment = vec![0; self.domains.len()];
        self.descend(0, &mut assignment, emit);
    }

    fn descend(
        &self,
        k: usize,
        a: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == self.domains.len() {
            return emit(a);
        }
        for &val in &self.domains[k] {
            a[k] = val;
            if self.checks_at[k].iter().all(|c| (self.holds)(c, &a[..=k]))
                && !self.descend(k + 1, a, emit)
            {
                return false;
            }
        }
        true
    }
}

enum LocalRel {
    One(usize, usize, usize),
    Two(usize, usize, usize, usize),
}

/// All cocycles at the single point `x`, as `(λ, g)` over the local pairs
/// and triples.
fn local_cocycles(cm: &CrossedModule, cover: &Cover, x: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let d = cover.sets_at(x).len();
    let (nl, ng) = (d * d, d * d * d);
    let lv = |a: usize, b: usize| a * d + b;
    let gv = |a: usize, b: usize, c: usize| nl + (a * d + b) * d + c;
    let mut domains = Vec::with_capacity(nl + ng);
    for a in 0..d {
        for b in 0..d {
            // λ_ii = e follows from the relations at (i, i, j).
            domains.push(if a == b {
                vec![0]
            } else {
                (0..cm.h().order()).collect()
            });
        }
    }
    for a in 0..d {
        for b in 0..d {
            for _ in 0..d {
                domains.push(if a == b {
                    vec![0]
                } else {
                    (0..cm.g().order()).collect()
                });
            }
        }
    }
    let mut checks_at: Vec<Vec<LocalRel>> = (0..nl + ng).map(|_| Vec::new()).collect();
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                checks_at[gv(a, b, c)].push(LocalRel::One(a, b, c));
                for e in 0..d {
                    let last = gv(a, b, c)
                        .max(gv(a, c, e))
                        .max(gv(b, c, e))
                        .max(gv(a, b, e));
                    checks_at[last].push(LocalRel::Two(a, b, c, e));
                }
            }
        }
    }
    let holds = |rel: &LocalRel, s: &[usize]| match *rel {
        LocalRel::One(a, b, c) => {
            relation_one(cm, s[lv(a, b)], s[lv(b, c)], s[lv(a, c)], s[gv(a, b, c)])
        }
        LocalRel::Two(a, b, c, e) => relation_two(
            cm,
            s[lv(a, b)],
            s[gv(a, b, c)],
            s[gv(a, c, e)],
            s[gv(b, c, e)],
            s[gv(a, b, e)],
        ),
    };
    let search = Search {
        domains,
        checks_at,
        holds: &holds,
    };
    let mut out = Vec::new();
    search.run(&mut |s| {
        out.push((s[..nl].to_vec(), s[nl..].to_vec()));
        true
    });
    out
}

/// Every cocycle on the cover, in lexicographic table order.
pub fn enumerate_cocycles(
    cm: &Arc<CrossedModule>,
    cover: &Arc<Cover>,
    bound: u64,
) -> Result<Vec<Cocycle>> {
    check_bound(cocycle_search_size(cm, cover), bound)?;
    let locals: Vec<_> = (0..cover.base_size())
        .map(|x| local_cocycles(cm, cover, x))
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0; cover.base_size()];
    if locals.iter().any(|l| l.is_empty()) {
        return Ok(out);
    }
    loop {
        let mut lam = Vec::with_capacity(cover.n_pairs());
        let mut g = Vec::with_capacity(cover.n_triples());
        for (x, &k) in choice.iter().enumerate() {
            lam.extend_from_slice(&locals[x][k].0);
            g.extend_from_slice(&locals[x][k].1);
        }
        out.push(Cocycle {
            cm: cm.clone(),
            cover: cover.clone(),
            lam,
            g,
        });
        if !advance(&mut choice, |x| locals[x].len()) {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// Mixed-radix increment; `false` once every digit has wrapped.
fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for (k, d) in digits.iter_mut().enumerate().rev() {
        *d += 1;
        if *d < radix(k) {
            return true;
        }
        *d = 0;
    }
    false
}

/// Iterates over all normalised coboundaries.
pub struct Coboundaries {
    cm: Arc<CrossedModule>,
    cover: Arc<Cover>,
    digits: Vec<usize>,
    free: Vec<bool>,
    done: bool,
}

impl Iterator for Coboundaries {
    type Item = Coboundary;

    fn next(&mut self) -> Option<Coboundary> {
        if self.done {
            return None;
        }
        let no = self.cover.n_objects();
        let cb = Coboundary {
            cm: self.cm.clone(),
            cover: self.cover.clone(),
            r: self.digits[..no].to_vec(),
            v: self.digits[no..].to_vec(),
        };
        let (hn, gn) = (self.cm.h().order(), self.cm.g().order());
        let free = &self.free;
        self.done = !advance(&mut self.digits, |k| {
            if k < no {
                hn
            } else if free[k - no] {
                gn
            } else {
                1
            }
        });
        Some(cb)
    }
}

pub fn enumerate_coboundaries(
    cm: &Arc<CrossedModule>,
    cover: &Arc<Cover>,
    bound: u64,
) -> Result<Coboundaries> {
    check_bound(coboundary_search_size(cm, cover), bound)?;
    let free = (0..cover.n_pairs()).map(|p| {
        let (i, j, _) = cover.pair(p);
        i != j
    });
    Ok(Coboundaries {
        cm: cm.clone(),
        cover: cover.clone(),
        digits: vec![0; cover.n_objects() + cover.n_pairs()],
        free: free.collect(),
        done: false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    pub representative: Cocycle,
    pub members: Vec<Cocycle>,
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Partition of the cocycles into cohomology classes. Classes are sorted by
/// representative, which is the least member.
pub fn h1_classes(
    cm: &Arc<CrossedModule>,
    cover: &Arc<Cover>,
    bound: u64,
) -> Result<Vec<CohomologyClass>> {
    let all = enumerate_cocycles(cm, cover, bound)?;
    check_bound(
        coboundary_search_size(cm, cover).saturating_mul(all.len() as u128),
        bound,
    )?;
    let index: HashMap<(Vec<usize>, Vec<usize>), usize> = all
        .iter()
        .enumerate()
        .map(|(k, c)| ((c.lam.clone(), c.g.clone()), k))
        .collect();
    let mut parent: Vec<usize> = (0..all.len()).collect();
    for cb in enumerate_coboundaries(cm, cover, bound)? {
        for (k, c) in all.iter().enumerate() {
            let d = apply_coboundary(c, &cb)?;
            let k2 = index[&(d.lam, d.g)];
            let (a, b) = (find(&mut parent, k), find(&mut parent, k2));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut classes: Vec<CohomologyClass> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (k, c) in all.into_iter().enumerate() {
        let root = find(&mut parent, k);
        match slot.get(&root) {
            Some(&s) => classes[s].members.push(c),
            None => {
                slot.insert(root, classes.len());
                classes.push(CohomologyClass {
                    representative: c.clone(),
                    members: vec![c],
                });
            }
        }
    }
    Ok(classes)
}

/// The least member of the class of `c`.
pub fn class_representative(c: &Cocycle, bound: u64) -> Result<Cocycle> {
    c.validate()?;
    let cbs: Vec<Coboundary> = enumerate_coboundaries(&c.cm, &c.cover, bound)?.collect();
    let mut seen: HashSet<(Vec<usize>, Vec<usize>)> = HashSet::new();
    let mut queue = VecDeque::from([c.clone()]);
    seen.insert((c.lam.clone(), c.g.clone()));
    let mut best = c.clone();
    while let Some(d) = queue.pop_front() {
        if d < best {
            best = d.clone();
        }
        for cb in &cbs {
            let e = apply_coboundary(&d, cb)?;
            if seen.insert((e.lam.clone(), e.g.clone())) {
                check_bound(seen.len() as u128 * cbs.len() as u128, bound)?;
                queue.push_back(e);
            }
        }
    }
    Ok(best)
}

/// `(σ*λ)_ij = λ_σ(i)σ(j)` and `(σ*g)_ijk = g_σ(i)σ(j)σ(k)` on the fine cover.
pub fn pullback_cocycle(refinement: &Refinement, c: &Cocycle) -> Result<Cocycle> {
    if *refinement.coarse != *c.cover {
        return Err(Error::DomainMismatch(
            "cocycle is not on the coarse cover".into(),
        ));
    }
    let (f, s) = (&*refinement.fine, &refinement.sigma);
    let lam = (0..f.n_pairs()).map(|p| {
        let (i, j, x) = f.pair(p);
        c.lam_at(s[i], s[j], x)
    });
    let g = (0..f.n_triples()).map(|t| {
        let [i, j, k, x] = f.triple(t);
        c.g_at(s[i], s[j], s[k], x)
    });
    Ok(Cocycle {
        cm: c.cm.clone(),
        cover: refinement.fine.clone(),
        lam: lam.collect(),
        g: g.collect(),
    })
}

/// A normalised coboundary carrying `c` to `c2`, found point by point;
/// `None` when the cocycles are not cohomologous.
pub fn find_relating_coboundary(
    c: &Cocycle,
    c2: &Cocycle,
    bound: u64,
) -> Result<Option<Coboundary>> {
    same_domain(&c.cm, &c.cover, c2)?;
    let (cov, cm) = (&*c.cover, &*c.cm);
    let mut work: u128 = 0;
    for x in 0..cov.base_size() {
        let d = cov.sets_at(x).len();
        work = work.saturating_add(
            pow_sat(cm.h().order(), d).saturating_mul(pow_sat(cm.g().order(), d * d - d)),
        );
    }
    check_bound(work, bound)?;
    let mut r = Vec::with_capacity(cov.n_objects());
    let mut v = Vec::with_capacity(cov.n_pairs());
    for x in 0..cov.base_size() {
        match local_relating(c, c2, x) {
            Some((rx, vx)) => {
                r.extend(rx);
                v.extend(vx);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(Coboundary {
        cm: c.cm.clone(),
        cover: c.cover.clone(),
        r,
        v,
    }))
}

fn local_relating(c: &Cocycle, c2: &Cocycle, x: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let cm = &*c.cm;
    let d = c.cover.sets_at(x).len();
    let mut domains: Vec<Vec<usize>> = (0..d).map(|_| (0..cm.h().order()).collect()).collect();
    for a in 0..d {
        for b in 0..d {
            domains.push(if a == b {
                vec![0]
            } else {
                (0..cm.g().order()).collect()
            });
        }
    }
    let mut checks_at: Vec<Vec<()>> = vec![Vec::new(); d + d * d];
    checks_at[d + d * d - 1].push(());
    let holds = |_: &(), s: &[usize]| relates_at(c, c2, &s[..d], &s[d..], x, false);
    let search = Search {
        domains,
        checks_at,
        holds: &holds,
    };
    let mut found = None;
    search.run(&mut |s| {
        found = Some((s[..d].to_vec(), s[d..].to_vec()));
        false
    });
    found
}

/// Pulls both cocycles to the common refinement and searches for a
/// relating coboundary there.
pub fn same_class_after_refinement(
    c1: &Cocycle,
    c2: &Cocycle,
    common: &CommonRefinement,
    bound: u64,
) -> Result<Option<Coboundary>> {
    let a = pullback_cocycle(&common.to_first, c1)?;
    let b = pullback_cocycle(&common.to_second, c2)?;
    find_relating_coboundary(&a, &b, bound)
}
