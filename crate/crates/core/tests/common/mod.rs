//! Brute-force oracles. They only read tables through public accessors and
//! re-derive every law from scratch, so they share no search or
//! validation code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use gerbelab::cech::{Cover, FiniteGroupoid};
use gerbelab::cocycle::Cocycle;
use gerbelab::extension::{ExtIso, GHExtension};
use gerbelab::fingroup::FiniteGroup;
use gerbelab::format::Document;
use gerbelab::xmod::CrossedModule;

pub const BOUND: u64 = 1 << 24;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> Document {
    let text = std::fs::read_to_string(fixture_dir().join(name)).unwrap();
    Document::parse(&text).unwrap()
}

/// Every `.txt` file directly in the fixture directory.
pub fn fixture_files() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    v.sort();
    v
}

pub fn z(n: usize) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(n))
}

pub fn one_to(n: usize) -> Arc<CrossedModule> {
    Arc::new(CrossedModule::from_group_h(z(n)))
}

pub fn to_one(n: usize) -> Arc<CrossedModule> {
    Arc::new(CrossedModule::from_abelian_g(z(n)).unwrap())
}

pub fn circ3() -> Arc<Cover> {
    Arc::new(Cover::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap())
}

pub fn pt2() -> Arc<Cover> {
    Arc::new(Cover::new(1, vec![vec![0], vec![0]]).unwrap())
}

/// Closure, identity at 0, inverses and associativity on every triple.
pub fn naive_is_group(t: &[Vec<usize>]) -> bool {
    let n = t.len();
    if n == 0 || t.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return false;
    }
    if (0..n).any(|a| t[0][a] != a || t[a][0] != a) {
        return false;
    }
    if (0..n).any(|a| !(0..n).any(|b| t[a][b] == 0 && t[b][a] == 0)) {
        return false;
    }
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] == t[a][t[b][c]])))
}

pub fn group_table(g: &FiniteGroup) -> Vec<Vec<usize>> {
    (0..g.order())
        .map(|a| (0..g.order()).map(|b| g.mul(a, b)).collect())
        .collect()
}

/// The cocycle laws read straight off the tables.
pub fn naive_is_cocycle(cm: &CrossedModule, cover: &Cover, lam: &[usize], g: &[usize]) -> bool {
    let (gg, hh) = (cm.g(), cm.h());
    let l = |i, j, x| lam[cover.pair_index(i, j, x).unwrap()];
    let c = |i, j, k, x| g[cover.triple_index(i, j, k, x).unwrap()];
    for x in 0..cover.base_size() {
        let at: Vec<usize> = (0..cover.n_sets())
            .filter(|&i| cover.contains(i, x))
            .collect();
        for &i in &at {
            for &j in &at {
                if c(i, i, j, x) != 0 {
                    return false;
                }
                for &k in &at {
                    if hh.mul(cm.rho(c(i, j, k, x)), l(i, k, x)) != hh.mul(l(i, j, x), l(j, k, x)) {
                        return false;
                    }
                    for &m in &at {
                        let lhs = gg.mul(c(i, j, k, x), c(i, k, m, x));
                        let rhs = gg.mul(cm.act(l(i, j, x), c(j, k, m, x)), c(i, j, m, x));
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// All tables in `H^pairs × G^triples`, scanned as one odometer.
pub fn naive_cocycles(cm: &CrossedModule, cover: &Cover) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let (np, nt) = (cover.n_pairs(), cover.n_triples());
    let (nh, ng) = (cm.h().order(), cm.g().order());
    let radix: Vec<usize> = std::iter::repeat_n(nh, np)
        .chain(std::iter::repeat_n(ng, nt))
        .collect();
    let mut digits = vec![0usize; np + nt];
    let mut out = BTreeSet::new();
    loop {
        let (lam, g) = digits.split_at(np);
        if naive_is_cocycle(cm, cover, lam, g) {
            out.insert((lam.to_vec(), g.to_vec()));
        }
        let mut k = 0;
        loop {
            if k == digits.len() {
                return out;
            }
            digits[k] += 1;
            if digits[k] < radix[k] {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// The coboundary action written out from its defining formulas.
pub fn naive_act(
    cm: &CrossedModule,
    cover: &Cover,
    lam: &[usize],
    g: &[usize],
    r: &[usize],
    v: &[usize],
) -> (Vec<usize>, Vec<usize>) {
    let (gg, hh) = (cm.g(), cm.h());
    let ri = |i, x| r[cover.object_index(i, x).unwrap()];
    let vi = |i, j, x| v[cover.pair_index(i, j, x).unwrap()];
    let lam2: Vec<usize> = (0..cover.n_pairs())
        .map(|p| {
            let (i, j, x) = cover.pair(p);
            hh.mul(
                hh.mul(hh.mul(cm.rho(vi(i, j, x)), ri(i, x)), lam[p]),
                hh.inv(ri(j, x)),
            )
        })
        .collect();
    let g2 = (0..cover.n_triples())
        .map(|t| {
            let [i, j, k, x] = cover.triple(t);
            let l2 = lam2[cover.pair_index(i, j, x).unwrap()];
            let a = gg.mul(cm.act(l2, vi(j, k, x)), vi(i, j, x));
            gg.mul(gg.mul(a, cm.act(ri(i, x), g[t])), gg.inv(vi(i, k, x)))
        })
        .collect();
    (lam2, g2)
}

/// Normalised coboundaries as raw `(r, v)` tables.
pub fn naive_coboundaries(cm: &CrossedModule, cover: &Cover) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (no, np) = (cover.n_objects(), cover.n_pairs());
    let (nh, ng) = (cm.h().order(), cm.g().order());
    let diag: Vec<bool> = (0..np)
        .map(|p| cover.pair(p).0 == cover.pair(p).1)
        .collect();
    let radix: Vec<usize> = std::iter::repeat_n(nh, no)
        .chain(diag.iter().map(|&d| if d { 1 } else { ng }))
        .collect();
    let mut digits = vec![0usize; no + np];
    let mut out = Vec::new();
    loop {
        out.push((digits[..no].to_vec(), digits[no..].to_vec()));
        let mut k = 0;
        loop {
            if k == digits.len() {
                return out;
            }
            digits[k] += 1;
            if digits[k] < radix[k] {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Number of classes of the naive cocycles under the naive coboundary
/// action, by flood fill.
pub fn naive_class_count(cm: &CrossedModule, cover: &Cover) -> usize {
    let all: Vec<(Vec<usize>, Vec<usize>)> = naive_cocycles(cm, cover).into_iter().collect();
    let cbs = naive_coboundaries(cm, cover);
    let mut seen = vec![false; all.len()];
    let mut classes = 0;
    for s in 0..all.len() {
        if seen[s] {
            continue;
        }
        classes += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(a) = stack.pop() {
            for (r, v) in &cbs {
                let img = naive_act(cm, cover, &all[a].0, &all[a].1, r, v);
                let b = all
                    .iter()
                    .position(|c| *c == img)
                    .expect("coboundary leaves the cocycle set");
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    classes
}

/// Units, inverses and associativity on every composable triple.
pub fn naive_groupoid_ok(r: &FiniteGroupoid) -> bool {
    let n = r.n_arrows();
    for a in 0..n {
        let (s, t) = (r.src(a), r.tgt(a));
        if r.compose(r.unit(s), a) != Some(a) || r.compose(a, r.unit(t)) != Some(a) {
            return false;
        }
        let i = r.inv(a);
        if r.compose(a, i) != Some(r.unit(s)) || r.compose(i, a) != Some(r.unit(t)) {
            return false;
        }
        for b in 0..n {
            let Some(ab) = r.compose(a, b) else { continue };
            if r.src(ab) != s || r.tgt(ab) != r.tgt(b) {
                return false;
            }
            for c in 0..n {
                let Some(bc) = r.compose(b, c) else { continue };
                if r.compose(ab, c) != r.compose(a, bc) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every isomorphism of extensions over the identity, by backtracking
/// over arrow images with matching ends and base image, then over element
/// images with matching projection. All laws are checked at the leaves.
pub fn naive_isos(e1: &GHExtension, e2: &GHExtension) -> Vec<ExtIso> {
    let (r1, r2) = (e1.r(), e2.r());
    let n = r1.n_arrows();
    if n != r2.n_arrows() || e1.n_elements() != e2.n_elements() {
        return Vec::new();
    }
    let cands: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| {
                    r2.src(b) == r1.src(a) && r2.tgt(b) == r1.tgt(a) && e2.phi(b) == e1.phi(a)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut phi_r = Vec::new();
    let mut used = vec![false; n];
    arrows(e1, e2, &cands, &mut phi_r, &mut used, &mut out);
    out
}

fn arrows(
    e1: &GHExtension,
    e2: &GHExtension,
    cands: &[Vec<usize>],
    phi_r: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<ExtIso>,
) {
    let a = phi_r.len();
    if a == cands.len() {
        let (r1, r2) = (e1.r(), e2.r());
        let functor = (0..a).all(|x| {
            (0..a).all(|y| {
                r1.compose(x, y).map(|c| phi_r[c])
                    == r1.compose(x, y).map(|_| r2.mul(phi_r[x], phi_r[y]))
            })
        });
        if functor {
            let np = e1.n_elements();
            let mut phi_p = Vec::new();
            let mut usedp = vec![false; np];
            elements(e1, e2, phi_r, &mut phi_p, &mut usedp, out);
        }
        return;
    }
    for &b in &cands[a] {
        if !used[b] {
            used[b] = true;
            phi_r.push(b);
            arrows(e1, e2, cands, phi_r, used, out);
            phi_r.pop();
            used[b] = false;
        }
    }
}

fn elements(
    e1: &GHExtension,
    e2: &GHExtension,
    phi_r: &[usize],
    phi_p: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<ExtIso>,
) {
    let p = phi_p.len();
    if p == e1.n_elements() {
        let nh = e1.cm().h().order();
        let ng = e1.cm().g().order();
        let r1 = e1.r();
        let ok = (0..p).all(|x| {
            (0..nh).all(|h| phi_p[e1.hmul(x, h)] == e2.hmul(phi_p[x], h))
                && (0..ng).all(|g| phi_r[e1.chi(x, g)] == e2.chi(phi_p[x], g))
        }) && (0..r1.n_arrows()).all(|a| {
            (0..p).all(|x| match e1.act(a, x) {
                Some(y) => e2.act(phi_r[a], phi_p[x]) == Some(phi_p[y]),
                None => true,
            })
        });
        if ok {
            out.push(ExtIso {
                phi_r: phi_r.to_vec(),
                phi_p: phi_p.clone(),
            });
        }
        return;
    }
    for q in 0..e2.n_elements() {
        if !used[q] && e2.proj(q) == e1.proj(p) {
            used[q] = true;
            phi_p.push(q);
            elements(e1, e2, phi_r, phi_p, used, out);
            phi_p.pop();
            used[q] = false;
        }
    }
}

/// Relation `(e, x_ij)•(g, x_jj) = (act[λ_ij](g), x_ij)` on every arrow
/// of an adapted extension.
pub fn key_lemma_holds(e: &GHExtension, c: &Cocycle) -> bool {
    let cover = c.cover();
    let cm = c.cm();
    let ng = cm.g().order();
    (0..cover.n_pairs()).all(|p| {
        let (_, j, x) = cover.pair(p);
        let jj = cover.pair_index(j, j, x).unwrap();
        (0..ng).all(|g| e.r().compose(p * ng, jj * ng + g) == Some(p * ng + cm.act(c.lam[p], g)))
    })
}

/// `(g, x_ii)⋆(x_i, h) = (x_i, ρ(g)·h)` on every element.
pub fn kernel_action_holds(e: &GHExtension, c: &Cocycle) -> bool {
    let cover = c.cover();
    let cm = c.cm();
    let (ng, nh) = (cm.g().order(), cm.h().order());
    (0..cover.n_objects()).all(|o| {
        let (i, x) = cover.object(o);
        let ii = cover.pair_index(i, i, x).unwrap();
        (0..ng).all(|g| {
            (0..nh)
                .all(|h| e.act(ii * ng + g, o * nh + h) == Some(o * nh + cm.h().mul(cm.rho(g), h)))
        })
    })
}
