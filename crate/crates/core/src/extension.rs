//! Extensions of finite groupoids by crossed modules.
//!
//! An extension of `𝒢 ⇉ M` by `G → H` is a groupoid `R ⇉ M` with a
//! surjective functor `φ: R → 𝒢` over the identity, a principal right
//! `H`-bundle `P → M` carrying a left `R`-action, and a map `χ` from `P`
//! to the band of `R`. An arrow with target `π(p)` acts on `p` and the
//! result lies over its source.
//!
//! Adapted extensions live over a Čech groupoid and use fixed carriers:
//! arrow `a·|G| + g` of `R` is `(g, x_ij)` for Čech arrow `a = x_ij`, and
//! element `o·|H| + h` of `P` is `(x_i, h)` for object `o = x_i`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cech::{
    cech_groupoid, invert_permutation, is_permutation, pullback_groupoid, Cover, FiniteGroupoid,
    GroupoidMorphism, GroupoidParts, Label,
};
use crate::cocycle::{coboundary_relates, Coboundary, Cocycle};
use crate::error::{check_index, Error, Result};
use crate::fingroup::{enumerate_isomorphisms, FiniteGroup, GroupHom};
use crate::xmod::{CrossedModule, TwoGroupArrow};

#[derive(Debug, Clone)]
pub struct GHExtension {
    cm: Arc<CrossedModule>,
    base: Arc<FiniteGroupoid>,
    r: FiniteGroupoid,
    phi: Vec<usize>,
    p_labels: Vec<Label>,
    p_index: HashMap<Label, usize>,
    proj: Vec<usize>,
    hact: Vec<Vec<usize>>,
    fibre: Vec<Vec<usize>>,
    fpos: Vec<usize>,
    gact: Vec<Vec<usize>>,
    chi: Vec<Vec<usize>>,
}

impl PartialEq for GHExtension {
    fn eq(&self, o: &Self) -> bool {
        self.cm == o.cm
            && self.base.same_structure(&o.base)
            && self.r.same_structure(&o.r)
            && self.phi == o.phi
            && self.proj == o.proj
            && self.hact == o.hact
            && self.gact == o.gact
            && self.chi == o.chi
    }
}

impl Eq for GHExtension {}

/// The principal bundle part of an extension: element labels, projection
/// and right `H`-action table (`hact[p][h] = p·h`).
pub struct BundleParts {
    pub labels: Vec<Label>,
    pub proj: Vec<usize>,
    pub hact: Vec<Vec<usize>>,
}

impl GHExtension {
    /// Assembles and validates an extension. `gact(a, p)` is `a•p` and is
    /// asked for every `p` over `tgt(a)`; `chi[p][g]` is an arrow of `R`.
    pub fn new(
        cm: Arc<CrossedModule>,
        base: Arc<FiniteGroupoid>,
        r: FiniteGroupoid,
        phi: Vec<usize>,
        bundle: BundleParts,
        gact: impl Fn(usize, usize) -> Option<usize>,
        chi: Vec<Vec<usize>>,
    ) -> Result<GHExtension> {
        let BundleParts { labels, proj, hact } = bundle;
        let n = r.n_objects();
        if base.n_objects() != n {
            return Err(Error::ShapeMismatch(
                "R and the base have different objects".into(),
            ));
        }
        if phi.len() != r.n_arrows()
            || proj.len() != labels.len()
            || hact.len() != labels.len()
            || chi.len() != labels.len()
        {
            return Err(Error::ShapeMismatch(
                "extension tables have inconsistent lengths".into(),
            ));
        }
        let mut fibre = vec![Vec::new(); n];
        let mut fpos = vec![0; labels.len()];
        for (p, &m) in proj.iter().enumerate() {
            check_index("projection", m, n)?;
            fpos[p] = fibre[m].len();
            fibre[m].push(p);
        }
        let mut gtab = Vec::with_capacity(r.n_arrows());
        for a in 0..r.n_arrows() {
            let row = fibre[r.tgt(a)]
                .iter()
                .map(|&p| {
                    gact(a, p).ok_or_else(|| {
                        Error::BundleAxiomViolation(format!("action of {a} on {p} is undefined"))
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            gtab.push(row);
        }
        let mut p_index = HashMap::with_capacity(labels.len());
        for (p, l) in labels.iter().enumerate() {
            if p_index.insert(l.clone(), p).is_some() {
                return Err(Error::BundleAxiomViolation(format!(
                    "duplicate element label {l:?}"
                )));
            }
        }
        let e = GHExtension {
            cm,
            base,
            r,
            phi,
            p_labels: labels,
            p_index,
            proj,
            hact,
            fibre,
            fpos,
            gact: gtab,
            chi,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn cm(&self) -> &Arc<CrossedModule> {
        &self.cm
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn r(&self) -> &FiniteGroupoid {
        &self.r
    }

    pub fn phi(&self, a: usize) -> usize {
        self.phi[a]
    }

    pub fn phi_table(&self) -> &[usize] {
        &self.phi
    }

    pub fn n_elements(&self) -> usize {
        self.proj.len()
    }

    pub fn proj(&self, p: usize) -> usize {
        self.proj[p]
    }

    pub fn p_label(&self, p: usize) -> &Label {
        &self.p_labels[p]
    }

    pub fn element_by_label(&self, l: &[usize]) -> Option<usize> {
        self.p_index.get(l).copied()
    }

    /// Elements over `m`, increasing.
    pub fn fibre(&self, m: usize) -> &[usize] {
        &self.fibre[m]
    }

    /// `p·h`.
    pub fn hmul(&self, p: usize, h: usize) -> usize {
        self.hact[p][h]
    }

    /// `a•p`, defined when `tgt(a) = π(p)`.
    pub fn act(&self, a: usize, p: usize) -> Option<usize> {
        (self.r.tgt(a) == self.proj[p]).then(|| self.gact[a][self.fpos[p]])
    }

    fn act_unchecked(&self, a: usize, p: usize) -> usize {
        self.gact[a][self.fpos[p]]
    }

    /// `χ(p)(g)`.
    pub fn chi(&self, p: usize, g: usize) -> usize {
        self.chi[p][g]
    }

    pub fn chi_table(&self) -> &[Vec<usize>] {
        &self.chi
    }

    /// Kernel arrows over `m`, the unit first.
    pub fn kernel(&self, m: usize) -> Vec<usize> {
        let e = self.base.unit(m);
        let u = self.r.unit(m);
        let mut k = vec![u];
        k.extend(
            self.r
                .out(m)
                .iter()
                .copied()
                .filter(|&a| a != u && self.phi[a] == e),
        );
        k
    }

    fn kernel_group(&self, m: usize) -> (Vec<usize>, Option<FiniteGroup>) {
        let k = self.kernel(m);
        let at: HashMap<usize, usize> = k.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let table: Option<Vec<Vec<usize>>> = k
            .iter()
            .map(|&a| {
                k.iter()
                    .map(|&b| self.r.compose(a, b).and_then(|c| at.get(&c).copied()))
                    .collect()
            })
            .collect();
        let group = table.and_then(|t| FiniteGroup::from_table(&format!("K{m}"), t).ok());
        (k, group)
    }

    fn validate(&self) -> Result<()> {
        let (r, base, cm) = (&self.r, &*self.base, &*self.cm);
        let (g, h) = (cm.g(), cm.h());
        for &b in &self.phi {
            check_index("phi value", b, base.n_arrows())?;
        }
        GroupoidMorphism {
            obj_map: (0..r.n_objects()).collect(),
            arrow_map: self.phi.clone(),
        }
        .validate(r, base)?;
        let mut hit = vec![false; base.n_arrows()];
        for &b in &self.phi {
            hit[b] = true;
        }
        if let Some(b) = hit.iter().position(|&x| !x) {
            return Err(Error::NotSurjective(format!(
                "base arrow {b} is not in the image of phi"
            )));
        }
        for m in 0..r.n_objects() {
            let (_, group) = self.kernel_group(m);
            match group {
                Some(k) if !enumerate_isomorphisms(g, &k).is_empty() => {}
                _ => return Err(Error::KernelFiberMismatch(m)),
            }
        }
        self.validate_bundle()?;
        for p in 0..self.n_elements() {
            let m = self.proj[p];
            let row = &self.chi[p];
            let k = self.kernel(m);
            if row.len() != g.order() || row.iter().any(|a| !k.contains(a)) {
                return Err(Error::ChiNotInBand(p));
            }
            let mut seen = vec![false; r.n_arrows()];
            if row.iter().any(|&a| std::mem::replace(&mut seen[a], true)) {
                return Err(Error::ChiNotInBand(p));
            }
            for x in 0..g.order() {
                for y in 0..g.order() {
                    if row[g.mul(x, y)] != r.mul(row[x], row[y]) {
                        return Err(Error::ChiNotInBand(p));
                    }
                }
            }
        }
        for p in 0..self.n_elements() {
            for x in 0..g.order() {
                if self.hmul(p, cm.rho(x)) != self.act_unchecked(self.chi[p][x], p) {
                    return Err(Error::ChiRhoViolation { p, g: x });
                }
            }
        }
        for p in 0..self.n_elements() {
            for k in 0..h.order() {
                let q = self.hmul(p, k);
                if (0..g.order()).any(|x| self.chi[q][x] != self.chi[p][cm.act(k, x)]) {
                    return Err(Error::ChiNotEquivariant(format!("χ({p}·{k}) ≠ χ({p})∘{k}")));
                }
            }
        }
        for a in 0..r.n_arrows() {
            for &p in &self.fibre[r.tgt(a)] {
                let q = self.act_unchecked(a, p);
                let ok = (0..g.order())
                    .all(|x| self.chi[q][x] == r.mul(r.mul(a, self.chi[p][x]), r.inv(a)));
                if !ok {
                    return Err(Error::ChiNotEquivariant(format!("χ({a}•{p}) ≠ {a}•χ({p})")));
                }
            }
        }
        Ok(())
    }

    fn validate_bundle(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BundleAxiomViolation(m));
        let (r, h) = (&self.r, self.cm.h());
        for p in 0..self.n_elements() {
            if self.hact[p].len() != h.order() {
                return bad(format!("H-action row of {p} has the wrong length"));
            }
            for &q in &self.hact[p] {
                check_index("H-action value", q, self.n_elements())?;
            }
        }
        for p in 0..self.n_elements() {
            let fib = &self.fibre[self.proj[p]];
            if fib.len() != h.order() {
                return bad(format!("fibre of {p} does not have |H| elements"));
            }
            if self.hmul(p, 0) != p {
                return bad(format!("identity does not fix {p}"));
            }
            let mut seen = vec![false; self.n_elements()];
            for k in 0..h.order() {
                let q = self.hmul(p, k);
                if self.proj[q] != self.proj[p] || std::mem::replace(&mut seen[q], true) {
                    return bad(format!("H does not act freely within the fibre of {p}"));
                }
                for l in 0..h.order() {
                    if self.hmul(q, l) != self.hmul(p, h.mul(k, l)) {
                        return bad(format!("(p·h)·h' ≠ p·(hh') at {p}"));
                    }
                }
            }
        }
        for a in 0..r.n_arrows() {
            for &p in &self.fibre[r.tgt(a)] {
                let q = self.act_unchecked(a, p);
                check_index("R-action value", q, self.n_elements())?;
                if self.proj[q] != r.src(a) {
                    return bad(format!("{a}•{p} does not lie over the source of {a}"));
                }
                if (0..h.order()).any(|k| self.hmul(q, k) != self.act_unchecked(a, self.hmul(p, k)))
                {
                    return bad(format!("R- and H-actions do not commute at ({a}, {p})"));
                }
            }
        }
        for m in 0..r.n_objects() {
            if self.fibre[m]
                .iter()
                .any(|&p| self.act_unchecked(r.unit(m), p) != p)
            {
                return bad(format!("unit of {m} acts nontrivially"));
            }
        }
        for (a, b) in r.composable_pairs() {
            for &p in &self.fibre[r.tgt(b)] {
                if self.act_unchecked(r.mul(a, b), p)
                    != self.act_unchecked(a, self.act_unchecked(b, p))
                {
                    return bad(format!("(a•b)•p ≠ a•(b•p) at ({a}, {b}, {p})"));
                }
            }
        }
        Ok(())
    }

    /// The same extension with arrow `a` renamed `perm_r[a]` and element
    /// `p` renamed `perm_p[p]`.
    pub fn relabeled(&self, perm_r: &[usize], perm_p: &[usize]) -> Result<GHExtension> {
        if !is_permutation(perm_r)
            || perm_r.len() != self.r.n_arrows()
            || !is_permutation(perm_p)
            || perm_p.len() != self.n_elements()
        {
            return Err(Error::ShapeMismatch(
                "relabeling is not a permutation".into(),
            ));
        }
        let (ir, ip) = (invert_permutation(perm_r), invert_permutation(perm_p));
        let r = &self.r;
        let parts = GroupoidParts {
            obj_labels: (0..r.n_objects()).map(|o| r.obj_label(o).clone()).collect(),
            arrow_labels: ir.iter().map(|&a| r.arrow_label(a).clone()).collect(),
            src: ir.iter().map(|&a| r.src(a)).collect(),
            tgt: ir.iter().map(|&a| r.tgt(a)).collect(),
            unit: (0..r.n_objects()).map(|o| perm_r[r.unit(o)]).collect(),
            inv: ir.iter().map(|&a| perm_r[r.inv(a)]).collect(),
        };
        let r2 = FiniteGroupoid::new(parts, |a, b| perm_r[r.mul(ir[a], ir[b])])?;
        let bundle = BundleParts {
            labels: ip.iter().map(|&p| self.p_labels[p].clone()).collect(),
            proj: ip.iter().map(|&p| self.proj[p]).collect(),
            hact: ip
                .iter()
                .map(|&p| self.hact[p].iter().map(|&q| perm_p[q]).collect())
                .collect(),
        };
        GHExtension::new(
            self.cm.clone(),
            self.base.clone(),
            r2,
            ir.iter().map(|&a| self.phi[a]).collect(),
            bundle,
            |a, p| self.act(ir[a], ip[p]).map(|q| perm_p[q]),
            ip.iter()
                .map(|&p| self.chi[p].iter().map(|&a| perm_r[a]).collect())
                .collect(),
        )
    }

    /// Replaces the base by an isomorphic groupoid on the same objects;
    /// `arrow_map` sends old base arrows to new ones.
    pub fn rebased(&self, base: Arc<FiniteGroupoid>, arrow_map: &[usize]) -> Result<GHExtension> {
        let f = GroupoidMorphism {
            obj_map: (0..self.base.n_objects()).collect(),
            arrow_map: arrow_map.to_vec(),
        };
        f.validate(&self.base, &base)?;
        if !f.is_bijective(&self.base, &base) {
            return Err(Error::NotAnIsomorphism("base map is not bijective".into()));
        }
        let mut e = self.clone();
        e.phi = self.phi.iter().map(|&b| arrow_map[b]).collect();
        e.base = base;
        e.validate()?;
        Ok(e)
    }
}

/// The pull-back along `p: M' → M`: arrows `(n, r, n')` of `R[p]`, elements
/// `(x, n)` of `P ×_M M'` labelled `[x, n]`, over the base `𝒢[p]`.
pub fn pullback_extension(e: &GHExtension, p: &[usize]) -> Result<GHExtension> {
    let r = pullback_groupoid(&e.r, p)?;
    let base = pullback_groupoid(&e.base, p)?;
    let phi = (0..r.n_arrows())
        .map(|k| {
            let l = r.arrow_label(k);
            base.arrow_by_label(&[l[0], e.phi[l[1]], l[2]])
                .expect("φ respects ends")
        })
        .collect();
    let mut labels = Vec::new();
    for x in 0..e.n_elements() {
        for (n, _) in p.iter().enumerate().filter(|&(_, &m)| m == e.proj[x]) {
            labels.push(vec![x, n]);
        }
    }
    let index: HashMap<Label, usize> = labels
        .iter()
        .enumerate()
        .map(|(k, l)| (l.clone(), k))
        .collect();
    let at = |x: usize, n: usize| index[&vec![x, n]];
    let h = e.cm.h().order();
    let bundle = BundleParts {
        proj: labels.iter().map(|l| l[1]).collect(),
        hact: labels
            .iter()
            .map(|l| (0..h).map(|k| at(e.hmul(l[0], k), l[1])).collect())
            .collect(),
        labels: labels.clone(),
    };
    let chi = labels
        .iter()
        .map(|l| {
            e.chi[l[0]]
                .iter()
                .map(|&a| r.arrow_by_label(&[l[1], a, l[1]]).expect("kernel arrow"))
                .collect()
        })
        .collect();
    let gact = |k: usize, y: usize| {
        let (a, l) = (r.arrow_label(k), &labels[y]);
        e.act(a[1], l[0]).map(|x| at(x, a[0]))
    };
    let gact_table: Vec<Vec<Option<usize>>> = (0..r.n_arrows())
        .map(|k| (0..labels.len()).map(|y| gact(k, y)).collect())
        .collect();
    GHExtension::new(
        e.cm.clone(),
        Arc::new(base),
        r,
        phi,
        bundle,
        |k, y| gact_table[k][y],
        chi,
    )
}

/// An isomorphism of extensions of the same groupoid, over its identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtIso {
    pub phi_r: Vec<usize>,
    pub phi_p: Vec<usize>,
}

impl ExtIso {
    pub fn identity(e: &GHExtension) -> ExtIso {
        ExtIso {
            phi_r: (0..e.r.n_arrows()).collect(),
            phi_p: (0..e.n_elements()).collect(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ExtIso) -> ExtIso {
        ExtIso {
            phi_r: self.phi_r.iter().map(|&a| next.phi_r[a]).collect(),
            phi_p: self.phi_p.iter().map(|&p| next.phi_p[p]).collect(),
        }
    }

    pub fn inverse(&self) -> ExtIso {
        ExtIso {
            phi_r: invert_permutation(&self.phi_r),
            phi_p: invert_permutation(&self.phi_p),
        }
    }

    /// Checks `Φ` is a groupoid isomorphism over the base, `Ψ` an
    /// equivariant bundle isomorphism, and `χ'∘Ψ = Φ∘χ`.
    pub fn validate(&self, e1: &GHExtension, e2: &GHExtension) -> Result<()> {
        let bad = |m: String| Err(Error::NotAnIsomorphism(m));
        if e1.cm != e2.cm || !e1.base.same_structure(&e2.base) {
            return bad("extensions of different groupoids or crossed modules".into());
        }
        if self.phi_r.len() != e1.r.n_arrows()
            || self.phi_p.len() != e1.n_elements()
            || e2.r.n_arrows() != e1.r.n_arrows()
            || e2.n_elements() != e1.n_elements()
            || !is_permutation(&self.phi_r)
            || !is_permutation(&self.phi_p)
        {
            return bad("maps are not bijections".into());
        }
        GroupoidMorphism {
            obj_map: (0..e1.r.n_objects()).collect(),
            arrow_map: self.phi_r.clone(),
        }
        .validate(&e1.r, &e2.r)?;
        if let Some(a) = (0..e1.r.n_arrows()).find(|&a| e2.phi[self.phi_r[a]] != e1.phi[a]) {
            return bad(format!("arrow {a} changes its image in the base"));
        }
        let h = e1.cm.h().order();
        for p in 0..e1.n_elements() {
            let q = self.phi_p[p];
            if e2.proj[q] != e1.proj[p] {
                return bad(format!("element {p} changes its projection"));
            }
            if (0..h).any(|k| self.phi_p[e1.hmul(p, k)] != e2.hmul(q, k)) {
                return bad(format!("Ψ is not H-equivariant at {p}"));
            }
            if (0..e1.cm.g().order()).any(|x| e2.chi[q][x] != self.phi_r[e1.chi[p][x]]) {
                return bad(format!("band maps disagree at {p}"));
            }
        }
        for a in 0..e1.r.n_arrows() {
            for &p in &e1.fibre[e1.r.tgt(a)] {
                if self.phi_p[e1.act_unchecked(a, p)]
                    != e2.act_unchecked(self.phi_r[a], self.phi_p[p])
                {
                    return bad(format!("Ψ is not R-equivariant at ({a}, {p})"));
                }
            }
        }
        Ok(())
    }
}

/// The band: for each object `m`, the isomorphisms `G → K_m` as arrays of
/// kernel arrows, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    pub fibres: Vec<Vec<Vec<usize>>>,
}

pub fn band_of(e: &GHExtension) -> Band {
    let fibres = (0..e.r.n_objects())
        .map(|m| {
            let (k, group) = e.kernel_group(m);
            let group = group.expect("validated kernel");
            let mut isos: Vec<Vec<usize>> = enumerate_isomorphisms(e.cm.g(), &group)
                .into_iter()
                .map(|f| f.map.iter().map(|&i| k[i]).collect())
                .collect();
            isos.sort();
            isos
        })
        .collect();
    Band { fibres }
}

impl Band {
    /// `b·f = b∘f` for an automorphism `f` of `G`.
    pub fn aut_act(b: &[usize], f: &GroupHom) -> Vec<usize> {
        f.map.iter().map(|&x| b[x]).collect()
    }

    /// `a•b = (g ↦ a•b(g)•a⁻¹)`, a band element over `src(a)`.
    pub fn arrow_act(e: &GHExtension, a: usize, b: &[usize]) -> Vec<usize> {
        let r = &e.r;
        b.iter().map(|&k| r.mul(r.mul(a, k), r.inv(a))).collect()
    }
}

/// Cocycle data read off a section `σ` of `P`: arrows map to `ψ(r)` with
/// `r•σ(t(r)) = σ(s(r))·ψ(r)`, and pairs `(r1, r2)` over the same base
/// arrow map to 2-group arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoGroupCocycle {
    pub psi: Vec<usize>,
    pub cells: HashMap<(usize, usize), TwoGroupArrow>,
}

pub fn two_group_cocycle(e: &GHExtension, sigma: &[usize]) -> Result<TwoGroupCocycle> {
    let r = &e.r;
    if sigma.len() != r.n_objects() {
        return Err(Error::ShapeMismatch(
            "section must have one entry per object".into(),
        ));
    }
    for (m, &p) in sigma.iter().enumerate() {
        if p >= e.n_elements() || e.proj[p] != m {
            return Err(Error::NotASection(m));
        }
    }
    let h = e.cm.h().order();
    let psi: Vec<usize> = (0..r.n_arrows())
        .map(|a| {
            let y = e.act_unchecked(a, sigma[r.tgt(a)]);
            (0..h)
                .find(|&k| e.hmul(sigma[r.src(a)], k) == y)
                .expect("free transitive fibre")
        })
        .collect();
    let chi_inv: Vec<HashMap<usize, usize>> = sigma
        .iter()
        .map(|&p| e.chi[p].iter().enumerate().map(|(x, &a)| (a, x)).collect())
        .collect();
    let mut cells = HashMap::new();
    for a in 0..r.n_arrows() {
        for &b in r.out(r.src(a)) {
            if r.tgt(b) == r.tgt(a) && e.phi[a] == e.phi[b] {
                let k = r.mul(a, r.inv(b));
                let g = chi_inv[r.src(a)][&k];
                cells.insert(
                    (a, b),
                    TwoGroupArrow {
                        h1: psi[a],
                        g,
                        h2: psi[b],
                    },
                );
            }
        }
    }
    Ok(TwoGroupCocycle { psi, cells })
}

/// The adapted extension of a cocycle: `(g, x_ij)•(g', x_jk) =
/// (g·λ_ij(g')·g_ijk, x_ik)` and `(g, x_ij)•(x_j, h) = (x_i, ρ(g)·λ_ij·h)`.
pub fn extension_from_cocycle(c: &Cocycle) -> Result<GHExtension> {
    c.validate()?;
    let (cov, cm) = (&**c.cover(), &**c.cm());
    let (g, h) = (cm.g(), cm.h());
    let (ng, nh) = (g.order(), h.order());
    let base = cech_groupoid(cov);
    let pair = |k: usize| (k / ng, k % ng);
    let n_r = cov.n_pairs() * ng;
    let parts = GroupoidParts {
        obj_labels: (0..base.n_objects())
            .map(|o| base.obj_label(o).clone())
            .collect(),
        arrow_labels: (0..n_r)
            .map(|k| {
                let (p, x) = pair(k);
                let (i, j, y) = cov.pair(p);
                vec![x, i, j, y]
            })
            .collect(),
        src: (0..n_r).map(|k| base.src(k / ng)).collect(),
        tgt: (0..n_r).map(|k| base.tgt(k / ng)).collect(),
        unit: (0..base.n_objects()).map(|o| base.unit(o) * ng).collect(),
        inv: (0..n_r)
            .map(|k| {
                let (p, x) = pair(k);
                let (i, j, y) = cov.pair(p);
                let l = c.lam_at(i, j, y);
                let t = g.mul(g.inv(x), g.inv(c.g_at(i, j, i, y)));
                cov.pair_index(j, i, y).unwrap() * ng + cm.act(h.inv(l), t)
            })
            .collect(),
    };
    let r = FiniteGroupoid::new(parts, |a, b| {
        let ((p1, x1), (p2, x2)) = (pair(a), pair(b));
        let ((i, j, y), (_, k, _)) = (cov.pair(p1), cov.pair(p2));
        let v = g.mul(g.mul(x1, cm.act(c.lam_at(i, j, y), x2)), c.g_at(i, j, k, y));
        cov.pair_index(i, k, y).unwrap() * ng + v
    })?;
    let n_p = cov.n_objects() * nh;
    let bundle = BundleParts {
        labels: (0..n_p)
            .map(|q| {
                let (i, y) = cov.object(q / nh);
                vec![i, y, q % nh]
            })
            .collect(),
        proj: (0..n_p).map(|q| q / nh).collect(),
        hact: (0..n_p)
            .map(|q| (0..nh).map(|k| (q / nh) * nh + h.mul(q % nh, k)).collect())
            .collect(),
    };
    let chi = (0..n_p)
        .map(|q| {
            let unit = base.unit(q / nh);
            (0..ng).map(|x| unit * ng + cm.act(q % nh, x)).collect()
        })
        .collect();
    GHExtension::new(
        c.cm().clone(),
        Arc::new(base),
        r,
        (0..n_r).map(|k| k / ng).collect(),
        bundle,
        |a, q| {
            let (p, x) = pair(a);
            let (i, j, y) = cov.pair(p);
            let lam = c.lam_at(i, j, y);
            let src = cov.object_index(i, y).unwrap();
            Some(src * nh + h.mul(h.mul(cm.rho(x), lam), q % nh))
        },
        chi,
    )
}

fn check_cech_base(e: &GHExtension, cover: &Cover) -> Result<FiniteGroupoid> {
    let c = cech_groupoid(cover);
    if !e.base.same_structure(&c) {
        return Err(Error::BaseNotCech);
    }
    Ok(c)
}

/// Whether `e` uses the fixed carriers and the standard `H`-action, band
/// map and kernel multiplication of an adapted extension.
pub fn is_adapted(e: &GHExtension, cover: &Cover) -> Result<bool> {
    let base = check_cech_base(e, cover)?;
    let (g, h) = (e.cm.g(), e.cm.h());
    let (ng, nh) = (g.order(), h.order());
    if e.r.n_arrows() != base.n_arrows() * ng || e.n_elements() != base.n_objects() * nh {
        return Ok(false);
    }
    for k in 0..e.r.n_arrows() {
        let p = k / ng;
        if e.phi[k] != p || e.r.src(k) != base.src(p) || e.r.tgt(k) != base.tgt(p) {
            return Ok(false);
        }
    }
    for q in 0..e.n_elements() {
        let (o, y) = (q / nh, q % nh);
        if e.proj[q] != o || (0..nh).any(|k| e.hmul(q, k) != o * nh + h.mul(y, k)) {
            return Ok(false);
        }
        let unit = base.unit(o);
        if (0..ng).any(|x| e.chi[q][x] != unit * ng + e.cm.act(y, x)) {
            return Ok(false);
        }
    }
    for o in 0..base.n_objects() {
        let unit = base.unit(o);
        for &p in base.out(o) {
            for x in 0..ng {
                for y in 0..ng {
                    if e.r.mul(unit * ng + x, p * ng + y) != p * ng + g.mul(x, y) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Reads `λ` from `(e, x_ij)•(x_j, e) = (x_i, λ_ij)` and `g` from
/// `(e, x_ij)•(e, x_jk) = (g_ijk, x_ik)`.
pub fn cocycle_from_adapted(e: &GHExtension, cover: &Arc<Cover>) -> Result<Cocycle> {
    if !is_adapted(e, cover)? {
        return Err(Error::NotAdapted(
            "carriers or structure maps differ from the adapted form".into(),
        ));
    }
    let (ng, nh) = (e.cm.g().order(), e.cm.h().order());
    let lam = (0..cover.n_pairs())
        .map(|p| {
            let (_, j, x) = cover.pair(p);
            e.act_unchecked(p * ng, cover.object_index(j, x).unwrap() * nh) % nh
        })
        .collect();
    let g = (0..cover.n_triples())
        .map(|t| {
            let [i, j, k, x] = cover.triple(t);
            let a = cover.pair_index(i, j, x).unwrap() * ng;
            let b = cover.pair_index(j, k, x).unwrap() * ng;
            e.r.mul(a, b) % ng
        })
        .collect();
    let c = Cocycle::from_tables(e.cm.clone(), cover.clone(), lam, g)?;
    c.validate()?;
    Ok(c)
}

/// `Φ_R(g, x_ij) = (r_i(g)·v_ij⁻¹, x_ij)` and `Φ_P(x_i, h) = (x_i, r_i·h)`.
pub fn iso_from_coboundary(cb: &Coboundary, e1: &GHExtension, e2: &GHExtension) -> Result<ExtIso> {
    let cover = cb.cover();
    let c1 = cocycle_from_adapted(e1, cover)?;
    let c2 = cocycle_from_adapted(e2, cover)?;
    if !coboundary_relates(&c1, &c2, cb) {
        return Err(Error::NotRelating);
    }
    let cm = &*e1.cm;
    let (g, h) = (cm.g(), cm.h());
    let (ng, nh) = (g.order(), h.order());
    let phi_r = (0..e1.r.n_arrows())
        .map(|k| {
            let (p, x) = (k / ng, k % ng);
            let (i, _, y) = cover.pair(p);
            p * ng + g.mul(cm.act(cb.r_at(i, y), x), g.inv(cb.v[p]))
        })
        .collect();
    let phi_p = (0..e1.n_elements())
        .map(|q| (q / nh) * nh + h.mul(cb.r[q / nh], q % nh))
        .collect();
    let iso = ExtIso { phi_r, phi_p };
    iso.validate(e1, e2)?;
    Ok(iso)
}

/// Reads `(x_i, r_i) = Φ_P(x_i, e)` and `(v_ij⁻¹, x_ij) = Φ_R(e, x_ij)`.
pub fn coboundary_from_iso(
    iso: &ExtIso,
    e1: &GHExtension,
    e2: &GHExtension,
    cover: &Arc<Cover>,
) -> Result<Coboundary> {
    iso.validate(e1, e2)?;
    let c1 = cocycle_from_adapted(e1, cover)?;
    let c2 = cocycle_from_adapted(e2, cover)?;
    let g = e1.cm.g();
    let (ng, nh) = (g.order(), e1.cm.h().order());
    let r = (0..cover.n_objects())
        .map(|o| iso.phi_p[o * nh] % nh)
        .collect();
    let v = (0..cover.n_pairs())
        .map(|p| g.inv(iso.phi_r[p * ng] % ng))
        .collect();
    let cb = Coboundary::from_tables(e1.cm.clone(), cover.clone(), r, v)?;
    if !coboundary_relates(&c1, &c2, &cb) {
        return Err(Error::NotRelating);
    }
    Ok(cb)
}

/// Transports `e` onto the adapted carriers: `σ` picks the least element
/// of each fibre, `τ(g, x_ii) = χ(σ(x_i))(g)` and off the diagonal
/// `τ(g, x_ij) = τ(g, x_ii)•σ₁(x_ij)` with `σ₁` the least arrow over
/// `x_ij`; `Ψ(x_i, h) = σ(x_i)·h`. Returns the adapted extension and the
/// isomorphism `(τ, Ψ)` from it to `e`.
pub fn adapt(e: &GHExtension, cover: &Cover) -> Result<(GHExtension, ExtIso)> {
    let base = check_cech_base(e, cover)?;
    let cm = &*e.cm;
    let (ng, nh) = (cm.g().order(), cm.h().order());
    let sigma: Vec<usize> = (0..base.n_objects()).map(|o| e.fibre[o][0]).collect();
    let mut least_over = vec![usize::MAX; base.n_arrows()];
    for a in (0..e.r.n_arrows()).rev() {
        least_over[e.phi[a]] = a;
    }
    let tau: Vec<usize> = (0..base.n_arrows() * ng)
        .map(|k| {
            let (p, x) = (k / ng, k % ng);
            let kx = e.chi[sigma[base.src(p)]][x];
            if base.is_unit(p) {
                kx
            } else {
                e.r.mul(kx, least_over[p])
            }
        })
        .collect();
    if tau.len() != e.r.n_arrows() || !is_permutation(&tau) {
        return Err(Error::NotAnIsomorphism(
            "τ is not a bijection onto R".into(),
        ));
    }
    let psi: Vec<usize> = (0..base.n_objects() * nh)
        .map(|q| e.hmul(sigma[q / nh], q % nh))
        .collect();
    if psi.len() != e.n_elements() || !is_permutation(&psi) {
        return Err(Error::NotAnIsomorphism(
            "Ψ is not a bijection onto P".into(),
        ));
    }
    let (tau_inv, psi_inv) = (invert_permutation(&tau), invert_permutation(&psi));
    let parts = GroupoidParts {
        obj_labels: (0..base.n_objects())
            .map(|o| base.obj_label(o).clone())
            .collect(),
        arrow_labels: (0..tau.len())
            .map(|k| {
                let mut l = vec![k % ng];
                l.extend(base.arrow_label(k / ng));
                l
            })
            .collect(),
        src: (0..tau.len()).map(|k| base.src(k / ng)).collect(),
        tgt: (0..tau.len()).map(|k| base.tgt(k / ng)).collect(),
        unit: (0..base.n_objects())
            .map(|o| tau_inv[e.r.unit(o)])
            .collect(),
        inv: (0..tau.len()).map(|k| tau_inv[e.r.inv(tau[k])]).collect(),
    };
    let r = FiniteGroupoid::new(parts, |a, b| tau_inv[e.r.mul(tau[a], tau[b])])?;
    let bundle = BundleParts {
        labels: (0..psi.len())
            .map(|q| {
                let mut l = base.obj_label(q / nh).clone();
                l.push(q % nh);
                l
            })
            .collect(),
        proj: (0..psi.len()).map(|q| q / nh).collect(),
        hact: (0..psi.len())
            .map(|q| (0..nh).map(|k| psi_inv[e.hmul(psi[q], k)]).collect())
            .collect(),
    };
    let chi = (0..psi.len())
        .map(|q| e.chi[psi[q]].iter().map(|&a| tau_inv[a]).collect())
        .collect();
    let adapted = GHExtension::new(
        e.cm.clone(),
        e.base.clone(),
        r,
        (0..tau.len()).map(|k| k / ng).collect(),
        bundle,
        |a, q| e.act(tau[a], psi[q]).map(|y| psi_inv[y]),
        chi,
    )?;
    let iso = ExtIso {
        phi_r: tau,
        phi_p: psi,
    };
    iso.validate(&adapted, e)?;
    if !is_adapted(&adapted, cover)? {
        return Err(Error::NotAdapted(
            "transported structure is not adapted".into(),
        ));
    }
    Ok((adapted, iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{apply_coboundary, enumerate_coboundaries, enumerate_cocycles};
    use crate::testutil::{circ3, one_to, pt2, to_one, z};
    use crate::DEFAULT_MAX_SEARCH as B;

    fn suites() -> Vec<(Arc<CrossedModule>, Arc<Cover>)> {
        vec![
            (one_to(2), Arc::new(pt2())),
            (to_one(2), Arc::new(pt2())),
            (one_to(2), Arc::new(circ3())),
            (Arc::new(CrossedModule::inner(z(3))), Arc::new(pt2())),
        ]
    }

    #[test]
    fn cocycle_round_trip() {
        for (cm, cov) in suites() {
            for c in enumerate_cocycles(&cm, &cov, B).unwrap() {
                let e = extension_from_cocycle(&c).unwrap();
                assert!(is_adapted(&e, &cov).unwrap());
                assert_eq!(cocycle_from_adapted(&e, &cov).unwrap(), c);
            }
        }
    }

    #[test]
    fn adapt_fixes_adapted_extensions_up_to_cocycle() {
        for (cm, cov) in suites() {
            for c in enumerate_cocycles(&cm, &cov, B).unwrap() {
                let e = extension_from_cocycle(&c).unwrap();
                let (a, iso) = adapt(&e, &cov).unwrap();
                iso.validate(&a, &e).unwrap();
                let c2 = cocycle_from_adapted(&a, &cov).unwrap();
                assert!(crate::cocycle::find_relating_coboundary(&c, &c2, B)
                    .unwrap()
                    .is_some());
            }
        }
    }

    #[test]
    fn relabeled_extension_is_not_adapted_but_adapts() {
        let (cm, cov) = (one_to(2), Arc::new(circ3()));
        let c = enumerate_cocycles(&cm, &cov, B).unwrap().pop().unwrap();
        let e = extension_from_cocycle(&c).unwrap();
        let n = e.r().n_arrows();
        let perm_r: Vec<usize> = (0..n).map(|a| (a + 1) % n).collect();
        let perm_p: Vec<usize> = (0..e.n_elements()).rev().collect();
        let f = e.relabeled(&perm_r, &perm_p).unwrap();
        assert!(!is_adapted(&f, &cov).unwrap());
        let (a, iso) = adapt(&f, &cov).unwrap();
        iso.validate(&a, &f).unwrap();
        assert!(is_adapted(&a, &cov).unwrap());
    }

    #[test]
    fn coboundaries_give_isomorphisms_and_back() {
        for (cm, cov) in suites().into_iter().take(2) {
            for c in enumerate_cocycles(&cm, &cov, B).unwrap() {
                let e1 = extension_from_cocycle(&c).unwrap();
                for cb in enumerate_coboundaries(&cm, &cov, B).unwrap() {
                    let c2 = apply_coboundary(&c, &cb).unwrap();
                    let e2 = extension_from_cocycle(&c2).unwrap();
                    let iso = iso_from_coboundary(&cb, &e1, &e2).unwrap();
                    assert_eq!(coboundary_from_iso(&iso, &e1, &e2, &cov).unwrap(), cb);
                }
            }
        }
    }

    #[test]
    fn base_must_be_cech() {
        let c = Cocycle::trivial(one_to(2), Arc::new(circ3()));
        let e = extension_from_cocycle(&c).unwrap();
        assert!(matches!(is_adapted(&e, &pt2()), Err(Error::BaseNotCech)));
    }

    #[test]
    fn band_fibres_are_aut_torsors() {
        let (cm, cov) = (Arc::new(CrossedModule::inner(z(3))), Arc::new(pt2()));
        let e = extension_from_cocycle(&Cocycle::trivial(cm.clone(), cov)).unwrap();
        let band = band_of(&e);
        let auts = crate::fingroup::enumerate_isomorphisms(cm.g(), cm.g());
        for fib in &band.fibres {
            assert_eq!(fib.len(), auts.len());
            let b = &fib[0];
            let mut orbit: Vec<_> = auts.iter().map(|f| Band::aut_act(b, f)).collect();
            orbit.sort();
            assert_eq!(&orbit, fib);
        }
        for a in 0..e.r().n_arrows() {
            let src = e.r().src(a);
            for b in &band.fibres[e.r().tgt(a)] {
                assert!(band.fibres[src].contains(&Band::arrow_act(&e, a, b)));
            }
        }
    }

    #[test]
    fn perturbed_chi_is_rejected() {
        let (cm, cov) = (Arc::new(CrossedModule::inner(z(3))), Arc::new(pt2()));
        let e = extension_from_cocycle(&Cocycle::trivial(cm.clone(), cov)).unwrap();
        let mut chi = e.chi_table().to_vec();
        chi[0] = vec![chi[0][0], chi[0][2], chi[0][1]];
        let bundle = BundleParts {
            labels: (0..e.n_elements()).map(|p| e.p_label(p).clone()).collect(),
            proj: (0..e.n_elements()).map(|p| e.proj(p)).collect(),
            hact: (0..e.n_elements())
                .map(|p| (0..cm.h().order()).map(|k| e.hmul(p, k)).collect())
                .collect(),
        };
        let err = GHExtension::new(
            cm,
            e.base().clone(),
            e.r().clone(),
            e.phi_table().to_vec(),
            bundle,
            |a, p| e.act(a, p),
            chi,
        )
        .unwrap_err();
        assert!(
            matches!(
                err,
                Error::ChiNotEquivariant(_) | Error::ChiRhoViolation { .. }
            ),
            "{err}"
        );
    }

    #[test]
    fn two_group_cocycle_is_a_two_functor() {
        let (cm, cov) = (Arc::new(CrossedModule::inner(z(3))), Arc::new(pt2()));
        for c in enumerate_cocycles(&cm, &cov, B)
            .unwrap()
            .into_iter()
            .take(4)
        {
            let e = extension_from_cocycle(&c).unwrap();
            let r = e.r();
            let sigma: Vec<usize> = (0..r.n_objects()).map(|m| e.fibre(m)[1]).collect();
            let tg = two_group_cocycle(&e, &sigma).unwrap();
            for (&(a, b), cell) in &tg.cells {
                cm.check_arrow(cell).unwrap();
                for (&(b2, c2), cell2) in &tg.cells {
                    if b2 == b {
                        assert_eq!(tg.cells[&(a, c2)], cm.vcomp(cell, cell2).unwrap());
                    }
                    if r.tgt(a) == r.src(b2) {
                        let ac = (r.mul(a, b2), r.mul(b, c2));
                        assert_eq!(tg.cells[&ac], cm.hcomp(cell, cell2));
                    }
                }
            }
            for (a, b) in r.composable_pairs() {
                assert_eq!(tg.psi[r.mul(a, b)], cm.h().mul(tg.psi[a], tg.psi[b]));
            }
        }
        let e = extension_from_cocycle(&Cocycle::trivial(cm, cov)).unwrap();
        assert!(matches!(
            two_group_cocycle(&e, &[0, 0]),
            Err(Error::NotASection(1))
        ));
    }
}
