//! Extensions over a base groupoid `B ⇉ B₀` via a surjection `q: M → B₀`,
//! Morita equivalences between them, gerbe classes over a discrete base
//! and transport along Morita equivalences of bases.

use std::sync::Arc;

use crate::cech::{
    common_refinement, invert_permutation, pullback_groupoid, Cover, FiniteGroupoid,
    GroupoidMorphism,
};
use crate::cocycle::{class_representative, same_class_after_refinement, Cocycle};
use crate::error::{check_index, Error, Result};
use crate::extension::{adapt, cocycle_from_adapted, pullback_extension, ExtIso, GHExtension};

/// An extension of `B[q]` for `q: M → B₀` onto.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtOverBase {
    base: Arc<FiniteGroupoid>,
    q: Vec<usize>,
    ext: GHExtension,
}

fn check_onto(map: &[usize], n: usize, what: &str) -> Result<()> {
    let mut hit = vec![false; n];
    for &y in map {
        check_index("map value", y, n)?;
        hit[y] = true;
    }
    match hit.iter().position(|&h| !h) {
        Some(y) => Err(Error::NotSurjective(format!("{what} misses {y}"))),
        None => Ok(()),
    }
}

impl ExtOverBase {
    /// `ext` must be an extension of a groupoid with the structure of
    /// `B[q]`; it is re-based onto `B[q]` itself.
    pub fn new(base: Arc<FiniteGroupoid>, q: Vec<usize>, ext: GHExtension) -> Result<ExtOverBase> {
        check_onto(&q, base.n_objects(), "q")?;
        let bq = pullback_groupoid(&base, &q)?;
        if !ext.base().same_structure(&bq) {
            return Err(Error::DomainMismatch("extension is not over B[q]".into()));
        }
        let ids: Vec<usize> = (0..bq.n_arrows()).collect();
        let ext = ext.rebased(Arc::new(bq), &ids)?;
        Ok(ExtOverBase { base, q, ext })
    }

    /// An extension of the Čech groupoid of `cover`, seen over the discrete
    /// base through the inclusion of `⊔U_i`.
    pub fn from_cech(ext: GHExtension, cover: &Cover) -> Result<ExtOverBase> {
        ExtOverBase::new(
            Arc::new(FiniteGroupoid::trivial(cover.base_size())),
            cover.inclusion(),
            ext,
        )
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn q(&self) -> &[usize] {
        &self.q
    }

    pub fn ext(&self) -> &GHExtension {
        &self.ext
    }

    /// Pulls back along `p: M' → M` with `q∘p` onto, re-based on `B[q∘p]`.
    pub fn pullback(&self, p: &[usize]) -> Result<ExtOverBase> {
        for &m in p {
            check_index("pull-back map value", m, self.q.len())?;
        }
        let qp: Vec<usize> = p.iter().map(|&m| self.q[m]).collect();
        check_onto(&qp, self.base.n_objects(), "q∘p")?;
        let raw = pullback_extension(&self.ext, p)?;
        let target = Arc::new(pullback_groupoid(&self.base, &qp)?);
        let bq = self.ext.base();
        let map: Vec<usize> = (0..raw.base().n_arrows())
            .map(|k| {
                let l = raw.base().arrow_label(k);
                let b = bq.arrow_label(l[1])[1];
                target
                    .arrow_by_label(&[l[0], b, l[2]])
                    .expect("canonical identification")
            })
            .collect();
        Ok(ExtOverBase {
            base: self.base.clone(),
            q: qp,
            ext: raw.rebased(target, &map)?,
        })
    }
}

fn identity_map(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn compose_maps(first: &[usize], then: &[usize]) -> Vec<usize> {
    first.iter().map(|&x| then[x]).collect()
}

/// The isomorphism `E → E[id]`.
pub fn identity_pullback_iso(e: &ExtOverBase) -> Result<ExtIso> {
    let id = identity_map(e.q.len());
    let f = e.pullback(&id)?;
    let (r, rf) = (e.ext.r(), f.ext.r());
    let phi_r = (0..r.n_arrows())
        .map(|a| rf.arrow_by_label(&[r.src(a), a, r.tgt(a)]).unwrap())
        .collect();
    let phi_p = (0..e.ext.n_elements())
        .map(|x| f.ext.element_by_label(&[x, e.ext.proj(x)]).unwrap())
        .collect();
    let iso = ExtIso { phi_r, phi_p };
    iso.validate(&e.ext, &f.ext)?;
    Ok(iso)
}

/// The isomorphism `E[p][f] → E[p∘f]`.
pub fn double_pullback_iso(e: &ExtOverBase, p: &[usize], f: &[usize]) -> Result<ExtIso> {
    let ep = e.pullback(p)?;
    let epf = ep.pullback(f)?;
    let direct = e.pullback(&compose_maps(f, p))?;
    let (r, rp, rd) = (epf.ext.r(), ep.ext.r(), direct.ext.r());
    let phi_r = (0..r.n_arrows())
        .map(|k| {
            let l = r.arrow_label(k);
            let inner = rp.arrow_label(l[1]);
            rd.arrow_by_label(&[l[0], inner[1], l[2]]).unwrap()
        })
        .collect();
    let phi_p = (0..epf.ext.n_elements())
        .map(|y| {
            let l = epf.ext.p_label(y);
            let x = ep.ext.p_label(l[0])[0];
            direct.ext.element_by_label(&[x, l[1]]).unwrap()
        })
        .collect();
    let iso = ExtIso { phi_r, phi_p };
    iso.validate(&epf.ext, &direct.ext)?;
    Ok(iso)
}

/// `Φ[f](n, r, n') = (n, Φ(r), n')` and `Ψ[f](x, n) = (Ψ(x), n)`.
pub fn pullback_iso(
    iso: &ExtIso,
    e1: &ExtOverBase,
    e2: &ExtOverBase,
    f: &[usize],
) -> Result<ExtIso> {
    let (a, b) = (e1.pullback(f)?, e2.pullback(f)?);
    let (ra, rb) = (a.ext.r(), b.ext.r());
    let phi_r = (0..ra.n_arrows())
        .map(|k| {
            let l = ra.arrow_label(k);
            rb.arrow_by_label(&[l[0], iso.phi_r[l[1]], l[2]]).unwrap()
        })
        .collect();
    let phi_p = (0..a.ext.n_elements())
        .map(|y| {
            let l = a.ext.p_label(y);
            b.ext.element_by_label(&[iso.phi_p[l[0]], l[1]]).unwrap()
        })
        .collect();
    let out = ExtIso { phi_r, phi_p };
    out.validate(&a.ext, &b.ext)?;
    Ok(out)
}

/// For `f1, f2: T → M` and arrows `r_w: f1(w) → f2(w)` lying over units
/// of `B`, the isomorphism `E[f1] → E[f2]` given by
/// `(w, ρ, w') ↦ (w, r_w⁻¹•ρ•r_w', w')` and `(x, w) ↦ (r_w⁻¹•x, w)`.
pub fn transformation_iso(
    e: &ExtOverBase,
    f1: &[usize],
    f2: &[usize],
    rw: &[usize],
) -> Result<ExtIso> {
    let (a, b) = (e.pullback(f1)?, e.pullback(f2)?);
    let r = e.ext.r();
    for (w, &x) in rw.iter().enumerate() {
        if r.src(x) != f1[w] || r.tgt(x) != f2[w] {
            return Err(Error::DomainMismatch(format!(
                "arrow for {w} has the wrong ends"
            )));
        }
    }
    let (ra, rb) = (a.ext.r(), b.ext.r());
    let phi_r = (0..ra.n_arrows())
        .map(|k| {
            let l = ra.arrow_label(k);
            let moved = r.mul(r.mul(r.inv(rw[l[0]]), l[1]), rw[l[2]]);
            rb.arrow_by_label(&[l[0], moved, l[2]]).unwrap()
        })
        .collect();
    let phi_p = (0..a.ext.n_elements())
        .map(|y| {
            let l = a.ext.p_label(y);
            let x = e.ext.act(r.inv(rw[l[1]]), l[0]).unwrap();
            b.ext.element_by_label(&[x, l[1]]).unwrap()
        })
        .collect();
    let out = ExtIso { phi_r, phi_p };
    out.validate(&a.ext, &b.ext)?;
    Ok(out)
}

/// A Morita equivalence of extensions over the same base: onto legs
/// `p: M₂ → M` and `p2: M₂ → M'` with `q∘p = q'∘p2`, and an isomorphism
/// from the pull-back along `p` to the pull-back along `p2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoritaWitness {
    pub p: Vec<usize>,
    pub p2: Vec<usize>,
    pub iso: ExtIso,
}

impl MoritaWitness {
    pub fn carrier(&self) -> usize {
        self.p.len()
    }

    pub fn reversed(&self) -> MoritaWitness {
        MoritaWitness {
            p: self.p2.clone(),
            p2: self.p.clone(),
            iso: self.iso.inverse(),
        }
    }
}

/// Checks the witness, naming the failing part.
pub fn validate_morita_witness(
    e1: &ExtOverBase,
    e2: &ExtOverBase,
    w: &MoritaWitness,
) -> Result<()> {
    let fail = |m: String| Err(Error::WitnessFailure(m));
    if !e1.base.same_structure(&e2.base) || e1.ext.cm() != e2.ext.cm() {
        return fail("extensions over different bases or crossed modules".into());
    }
    if w.p2.len() != w.p.len() {
        return fail("legs have different domains".into());
    }
    if check_onto(&w.p, e1.q.len(), "p").is_err() {
        return fail("leg p is not onto".into());
    }
    if check_onto(&w.p2, e2.q.len(), "p2").is_err() {
        return fail("leg p2 is not onto".into());
    }
    if let Some(k) = (0..w.p.len()).find(|&k| e1.q[w.p[k]] != e2.q[w.p2[k]]) {
        return fail(format!("q∘p and q'∘p2 differ at {k}"));
    }
    let (a, b) = (e1.pullback(&w.p)?, e2.pullback(&w.p2)?);
    w.iso
        .validate(&a.ext, &b.ext)
        .map_err(|e| Error::WitnessFailure(format!("iso: {e}")))
}

/// The witness for isomorphic extensions over the same `M`.
pub fn iso_witness(e1: &ExtOverBase, e2: &ExtOverBase, iso: &ExtIso) -> Result<MoritaWitness> {
    if e1.q != e2.q {
        return Err(Error::DomainMismatch(
            "isomorphic extensions must share q".into(),
        ));
    }
    iso.validate(&e1.ext, &e2.ext)?;
    let c1 = identity_pullback_iso(e1)?;
    let c2 = identity_pullback_iso(e2)?;
    let id = identity_map(e1.q.len());
    Ok(MoritaWitness {
        p: id.clone(),
        p2: id,
        iso: c1.inverse().then(iso).then(&c2),
    })
}

/// The pull-back along `p` and the witness relating it to `e`.
pub fn pullback_witness(e: &ExtOverBase, p: &[usize]) -> Result<(ExtOverBase, MoritaWitness)> {
    let f = e.pullback(p)?;
    let iso = identity_pullback_iso(&f)?;
    check_onto(p, e.q.len(), "p")?;
    Ok((
        f.clone(),
        MoritaWitness {
            p: p.to_vec(),
            p2: identity_map(f.q.len()),
            iso,
        },
    ))
}

/// For `τ: M' → M` with `q∘τ` onto, the pull-back along `τ` and a witness
/// with carrier the pairs `(m', r)` where `r` ends at `τ(m')` and lies
/// over a unit of `B`; the legs are `s(r)` and `m'`.
pub fn generalized_pullback_witness(
    e: &ExtOverBase,
    tau: &[usize],
) -> Result<(ExtOverBase, MoritaWitness)> {
    let f = e.pullback(tau)?;
    let (r, bq) = (e.ext.r(), e.ext.base());
    let mut carrier = Vec::new();
    for (m2, &m) in tau.iter().enumerate() {
        for a in 0..r.n_arrows() {
            if r.tgt(a) == m && e.base.is_unit(bq.arrow_label(e.ext.phi(a))[1]) {
                carrier.push((m2, a));
            }
        }
    }
    let p: Vec<usize> = carrier.iter().map(|&(_, a)| r.src(a)).collect();
    let p2: Vec<usize> = carrier.iter().map(|&(m2, _)| m2).collect();
    let via_tau: Vec<usize> = p2.iter().map(|&m2| tau[m2]).collect();
    let arrows: Vec<usize> = carrier.iter().map(|&(_, a)| a).collect();
    let step = transformation_iso(e, &p, &via_tau, &arrows)?;
    let back = double_pullback_iso(e, tau, &p2)?.inverse();
    Ok((
        f,
        MoritaWitness {
            p,
            p2,
            iso: step.then(&back),
        },
    ))
}

/// Composes `e1 ~ e2` and `e2 ~ e3` over the fibred product of the two
/// carriers over `e2`'s `M`.
pub fn compose_morita(
    e1: &ExtOverBase,
    e2: &ExtOverBase,
    e3: &ExtOverBase,
    w1: &MoritaWitness,
    w2: &MoritaWitness,
) -> Result<MoritaWitness> {
    let mut pairs = Vec::new();
    for a in 0..w1.carrier() {
        for b in 0..w2.carrier() {
            if w1.p2[a] == w2.p[b] {
                pairs.push((a, b));
            }
        }
    }
    let pi1: Vec<usize> = pairs.iter().map(|x| x.0).collect();
    let pi2: Vec<usize> = pairs.iter().map(|x| x.1).collect();
    let e1a = e1.pullback(&w1.p)?;
    let e2a = e2.pullback(&w1.p2)?;
    let e2b = e2.pullback(&w2.p)?;
    let e3b = e3.pullback(&w2.p2)?;
    let iso = double_pullback_iso(e1, &w1.p, &pi1)?
        .inverse()
        .then(&pullback_iso(&w1.iso, &e1a, &e2a, &pi1)?)
        .then(&double_pullback_iso(e2, &w1.p2, &pi1)?)
        .then(&double_pullback_iso(e2, &w2.p, &pi2)?.inverse())
        .then(&pullback_iso(&w2.iso, &e2b, &e3b, &pi2)?)
        .then(&double_pullback_iso(e3, &w2.p2, &pi2)?);
    Ok(MoritaWitness {
        p: compose_maps(&pi1, &w1.p),
        p2: compose_maps(&pi2, &w2.p2),
        iso,
    })
}

/// The class of an extension over a discrete base: pull back along the
/// least preimage of each point to the cover by points, adapt, extract the
/// cocycle and take the least member of its class.
pub fn gerbe_class(e: &ExtOverBase, bound: u64) -> Result<Cocycle> {
    let b = &e.base;
    if b.n_arrows() != b.n_objects() {
        return Err(Error::BaseNotTrivial);
    }
    let n = b.n_objects();
    let cover = Arc::new(Cover::singletons(n));
    let sigma: Vec<usize> = (0..n)
        .map(|x| e.q.iter().position(|&y| y == x).expect("q is onto"))
        .collect();
    let f = e.pullback(&sigma)?;
    let (adapted, _) = adapt(&f.ext, &cover)?;
    let c = cocycle_from_adapted(&adapted, &cover)?;
    class_representative(&c, bound)
}

/// Compares gerbe classes on the common refinement of the two point covers.
pub fn extensions_morita_equivalent(
    e1: &ExtOverBase,
    e2: &ExtOverBase,
    bound: u64,
) -> Result<bool> {
    if !e1.base.same_structure(&e2.base) || e1.ext.cm() != e2.ext.cm() {
        return Err(Error::DomainMismatch(
            "extensions over different bases or crossed modules".into(),
        ));
    }
    let (c1, c2) = (gerbe_class(e1, bound)?, gerbe_class(e2, bound)?);
    let w = common_refinement(c1.cover(), c2.cover())?;
    Ok(same_class_after_refinement(&c1, &c2, &w, bound)?.is_some())
}

/// A Morita equivalence of bases `B ~ B'`: onto `f: T → B₀`, `g: T → B'₀`
/// and an isomorphism `B[f] → B'[g]` over the identity of `T`, given on
/// arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseMorita {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub phi: Vec<usize>,
}

impl BaseMorita {
    pub fn validate(&self, b: &FiniteGroupoid, b2: &FiniteGroupoid) -> Result<()> {
        if self.f.len() != self.g.len() {
            return Err(Error::ShapeMismatch(
                "f and g have different domains".into(),
            ));
        }
        check_onto(&self.f, b.n_objects(), "f")?;
        check_onto(&self.g, b2.n_objects(), "g")?;
        let (bf, bg) = (
            pullback_groupoid(b, &self.f)?,
            pullback_groupoid(b2, &self.g)?,
        );
        let m = GroupoidMorphism {
            obj_map: identity_map(self.f.len()),
            arrow_map: self.phi.clone(),
        };
        m.validate(&bf, &bg)?;
        if !m.is_bijective(&bf, &bg) {
            return Err(Error::NotAnIsomorphism(
                "B[f] → B'[g] is not bijective".into(),
            ));
        }
        Ok(())
    }

    pub fn reversed(&self) -> BaseMorita {
        BaseMorita {
            f: self.g.clone(),
            g: self.f.clone(),
            phi: invert_permutation(&self.phi),
        }
    }
}

/// Composes `B ~ B'` and `B' ~ B''` over `T ×_{B'₀} T'`.
pub fn compose_base_morita(
    b: &FiniteGroupoid,
    b2: &FiniteGroupoid,
    b3: &FiniteGroupoid,
    m1: &BaseMorita,
    m2: &BaseMorita,
) -> Result<BaseMorita> {
    m1.validate(b, b2)?;
    m2.validate(b2, b3)?;
    let mut pairs = Vec::new();
    for t in 0..m1.g.len() {
        for s in 0..m2.f.len() {
            if m1.g[t] == m2.f[s] {
                pairs.push((t, s));
            }
        }
    }
    let f: Vec<usize> = pairs.iter().map(|&(t, _)| m1.f[t]).collect();
    let g: Vec<usize> = pairs.iter().map(|&(_, s)| m2.g[s]).collect();
    let (b1f, b2g) = (pullback_groupoid(b, &m1.f)?, pullback_groupoid(b2, &m1.g)?);
    let (b2f, b3g) = (pullback_groupoid(b2, &m2.f)?, pullback_groupoid(b3, &m2.g)?);
    let (bf, bg) = (pullback_groupoid(b, &f)?, pullback_groupoid(b3, &g)?);
    let phi = (0..bf.n_arrows())
        .map(|k| {
            let l = bf.arrow_label(k);
            let ((t1, s1), (t2, s2)) = (pairs[l[0]], pairs[l[2]]);
            let mid = b2g.arrow_label(m1.phi[b1f.arrow_by_label(&[t1, l[1], t2]).unwrap()])[1];
            let last = b3g.arrow_label(m2.phi[b2f.arrow_by_label(&[s1, mid, s2]).unwrap()])[1];
            bg.arrow_by_label(&[l[0], last, l[2]]).unwrap()
        })
        .collect();
    let out = BaseMorita { f, g, phi };
    out.validate(b, b3)?;
    Ok(out)
}

/// Pulls `e` back to `M' = M ×_{B₀} T` and re-bases it on `B'` through
/// the base equivalence; the new `q` is `g` on the `T` component.
pub fn transport(
    bm: &BaseMorita,
    b2: &Arc<FiniteGroupoid>,
    e: &ExtOverBase,
) -> Result<ExtOverBase> {
    bm.validate(&e.base, b2)?;
    let mut pairs = Vec::new();
    for (m, &x) in e.q.iter().enumerate() {
        for (t, &y) in bm.f.iter().enumerate() {
            if x == y {
                pairs.push((m, t));
            }
        }
    }
    let alpha: Vec<usize> = pairs.iter().map(|x| x.0).collect();
    let q2: Vec<usize> = pairs.iter().map(|&(_, t)| bm.g[t]).collect();
    let ea = e.pullback(&alpha)?;
    let (bf, bg) = (
        pullback_groupoid(&e.base, &bm.f)?,
        pullback_groupoid(b2, &bm.g)?,
    );
    let target = Arc::new(pullback_groupoid(b2, &q2)?);
    let src = ea.ext.base();
    let map: Vec<usize> = (0..src.n_arrows())
        .map(|k| {
            let l = src.arrow_label(k);
            let (t1, t2) = (pairs[l[0]].1, pairs[l[2]].1);
            let moved = bg.arrow_label(bm.phi[bf.arrow_by_label(&[t1, l[1], t2]).unwrap()])[1];
            target.arrow_by_label(&[l[0], moved, l[2]]).unwrap()
        })
        .collect();
    let ext = ea.ext.rebased(target, &map)?;
    Ok(ExtOverBase {
        base: b2.clone(),
        q: q2,
        ext,
    })
}
