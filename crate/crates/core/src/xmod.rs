//! Finite crossed modules `ρ: G → H` with a left action of `H` on `G`,
//! and the arrows of the strict 2-group they define.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fingroup::{automorphism_group, check_hom, is_bijective, FiniteGroup, GroupHom};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    g: Arc<FiniteGroup>,
    h: Arc<FiniteGroup>,
    rho: Vec<usize>,
    act: Vec<Vec<usize>>,
}

impl CrossedModule {
    /// `act[h][g]` is `h` applied to `g`.
    pub fn new(
        g: Arc<FiniteGroup>,
        h: Arc<FiniteGroup>,
        rho: Vec<usize>,
        act: Vec<Vec<usize>>,
    ) -> Result<CrossedModule> {
        let cm = CrossedModule { g, h, rho, act };
        cm.validate()?;
        Ok(cm)
    }

    fn validate(&self) -> Result<()> {
        let (g, h) = (&*self.g, &*self.h);
        if self.rho.len() != g.order() {
            return Err(Error::ShapeMismatch(format!(
                "rho has {} entries, G has order {}",
                self.rho.len(),
                g.order()
            )));
        }
        if self.act.len() != h.order() || self.act.iter().any(|row| row.len() != g.order()) {
            return Err(Error::ShapeMismatch(
                "act must be |H| rows of |G| entries".into(),
            ));
        }
        check_hom(
            g,
            h,
            &GroupHom {
                map: self.rho.clone(),
            },
        )?;
        for (x, row) in self.act.iter().enumerate() {
            let f = GroupHom { map: row.clone() };
            if !is_bijective(&f, g.order()) || check_hom(g, g, &f).is_err() {
                return Err(Error::NotAnAction(format!(
                    "act[{x}] is not an automorphism"
                )));
            }
        }
        for x in 0..h.order() {
            for y in 0..h.order() {
                let xy = h.mul(x, y);
                if (0..g.order()).any(|a| self.act[xy][a] != self.act[x][self.act[y][a]]) {
                    return Err(Error::NotAnAction(format!(
                        "act[{x}·{y}] ≠ act[{x}]∘act[{y}]"
                    )));
                }
            }
        }
        if (0..g.order()).any(|a| self.act[0][a] != a) {
            return Err(Error::NotAnAction("act[e] is not the identity".into()));
        }
        for x in 0..h.order() {
            for a in 0..g.order() {
                if self.rho[self.act[x][a]] != h.conj(x, self.rho[a]) {
                    return Err(Error::Peiffer1Violation { h: x, g: a });
                }
            }
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if self.act[self.rho[a]][b] != g.conj(a, b) {
                    return Err(Error::Peiffer2Violation { g: a, g2: b });
                }
            }
        }
        Ok(())
    }

    /// `G → Aut(G)` sending `g` to conjugation by `g`.
    pub fn inner(g: Arc<FiniteGroup>) -> CrossedModule {
        let aut = automorphism_group(&g);
        let rho = (0..g.order())
            .map(|a| {
                let c = GroupHom {
                    map: (0..g.order()).map(|b| g.conj(a, b)).collect(),
                };
                aut.index_of(&c).expect("inner automorphism")
            })
            .collect();
        let act = aut.elements.iter().map(|f| f.map.clone()).collect();
        CrossedModule::new(g, Arc::new(aut.group), rho, act).expect("inner crossed module")
    }

    /// `1 → H`.
    pub fn from_group_h(h: Arc<FiniteGroup>) -> CrossedModule {
        let act = vec![vec![0]; h.order()];
        CrossedModule::new(Arc::new(FiniteGroup::trivial()), h, vec![0], act).expect("trivial G")
    }

    /// `A → 1` for abelian `A`.
    pub fn from_abelian_g(a: Arc<FiniteGroup>) -> Result<CrossedModule> {
        let rho = vec![0; a.order()];
        let act = vec![(0..a.order()).collect()];
        CrossedModule::new(a, Arc::new(FiniteGroup::trivial()), rho, act)
    }

    pub fn g(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn g_arc(&self) -> &Arc<FiniteGroup> {
        &self.g
    }

    pub fn h_arc(&self) -> &Arc<FiniteGroup> {
        &self.h
    }

    pub fn rho(&self, g: usize) -> usize {
        self.rho[g]
    }

    pub fn rho_table(&self) -> &[usize] {
        &self.rho
    }

    pub fn act(&self, h: usize, g: usize) -> usize {
        self.act[h][g]
    }

    pub fn act_table(&self) -> &[Vec<usize>] {
        &self.act
    }

    /// Checks `h1 = ρ(g)·h2`.
    pub fn check_arrow(&self, a: &TwoGroupArrow) -> Result<()> {
        if a.h1 >= self.h.order() || a.h2 >= self.h.order() || a.g >= self.g.order() {
            return Err(Error::IndexOutOfRange {
                what: "2-group arrow",
                index: a.h1.max(a.h2).max(a.g),
                bound: self.h.order().min(self.g.order()),
            });
        }
        if a.h1 != self.h.mul(self.rho[a.g], a.h2) {
            return Err(Error::ShapeMismatch(format!("h1 ≠ ρ(g)·h2 in {a:?}")));
        }
        Ok(())
    }

    /// `(h1,g1,h2)∘(h2,g2,h3) = (h1, g1·g2, h3)`.
    pub fn vcomp(&self, a: &TwoGroupArrow, b: &TwoGroupArrow) -> Result<TwoGroupArrow> {
        if a.h2 != b.h1 {
            return Err(Error::DomainMismatch(
                "vertical composition needs a.h2 = b.h1".into(),
            ));
        }
        Ok(TwoGroupArrow {
            h1: a.h1,
            g: self.g.mul(a.g, b.g),
            h2: b.h2,
        })
    }

    /// `(h1,g1,h2)·(h3,g2,h4) = (h1·h3, g1·h2(g2), h2·h4)`.
    pub fn hcomp(&self, a: &TwoGroupArrow, b: &TwoGroupArrow) -> TwoGroupArrow {
        TwoGroupArrow {
            h1: self.h.mul(a.h1, b.h1),
            g: self.g.mul(a.g, self.act[a.h2][b.g]),
            h2: self.h.mul(a.h2, b.h2),
        }
    }
}

/// An arrow `h2 ⇒ h1` labelled by `g` with `h1 = ρ(g)·h2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoGroupArrow {
    pub h1: usize,
    pub g: usize,
    pub h2: usize,
}

impl TwoGroupArrow {
    pub fn new(cm: &CrossedModule, g: usize, h2: usize) -> TwoGroupArrow {
        TwoGroupArrow {
            h1: cm.h().mul(cm.rho(g), h2),
            g,
            h2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    #[test]
    fn basic_crossed_modules_validate() {
        CrossedModule::from_group_h(z(2));
        CrossedModule::from_group_h(z(3));
        CrossedModule::from_abelian_g(z(2)).unwrap();
        let inner = CrossedModule::inner(z(3));
        assert_eq!(inner.h().order(), 2);
        assert!(inner.rho_table().iter().all(|&r| r == 0));
    }

    #[test]
    fn non_abelian_to_trivial_breaks_peiffer2() {
        assert!(matches!(
            CrossedModule::from_abelian_g(Arc::new(crate::testutil::s3())),
            Err(Error::Peiffer2Violation { .. })
        ));
    }

    #[test]
    fn bad_rho_is_not_a_hom() {
        let err = CrossedModule::new(z(3), z(2), vec![0, 1, 1], vec![vec![0, 1, 2]; 2]);
        assert!(matches!(err, Err(Error::NotAHom(_, _))));
    }

    #[test]
    fn identity_z2_with_trivial_action() {
        let cm = CrossedModule::new(z(2), z(2), vec![0, 1], vec![vec![0, 1]; 2]).unwrap();
        let a = TwoGroupArrow::new(&cm, 1, 0);
        assert_eq!(a, TwoGroupArrow { h1: 1, g: 1, h2: 0 });
        cm.check_arrow(&a).unwrap();
    }

    #[test]
    fn interchange_law_on_inner_z3() {
        let cm = CrossedModule::inner(z(3));
        let arrows: Vec<_> = (0..3)
            .flat_map(|g| (0..2).map(move |h| (g, h)))
            .map(|(g, h)| TwoGroupArrow::new(&cm, g, h))
            .collect();
        for a in &arrows {
            for b in arrows.iter().filter(|b| b.h1 == a.h2) {
                for c in &arrows {
                    for d in arrows.iter().filter(|d| d.h1 == c.h2) {
                        let lhs = cm.hcomp(&cm.vcomp(a, b).unwrap(), &cm.vcomp(c, d).unwrap());
                        let rhs = cm.vcomp(&cm.hcomp(a, c), &cm.hcomp(b, d)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
