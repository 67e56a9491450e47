mod common;

use std::sync::Arc;

use common::*;
use gerbelab::cech::{Cover, FiniteGroupoid};
use gerbelab::cocycle::{
    apply_coboundary, class_representative, coboundary_relates, enumerate_cocycles,
    find_relating_coboundary, Coboundary, Cocycle,
};
use gerbelab::extension::{adapt, cocycle_from_adapted, extension_from_cocycle, is_adapted};
use gerbelab::fingroup::{automorphism_group, FiniteGroup};
use gerbelab::format::{BaseRef, Document, Item};
use gerbelab::morita::{gerbe_class, pullback_witness, validate_morita_witness, ExtOverBase};
use gerbelab::xmod::CrossedModule;
use proptest::prelude::*;
use proptest::sample::Index;

fn suites() -> Vec<(Arc<CrossedModule>, Arc<Cover>)> {
    vec![
        (one_to(2), circ3()),
        (one_to(2), pt2()),
        (to_one(2), pt2()),
        (one_to(3), pt2()),
        (Arc::new(CrossedModule::inner(z(2))), pt2()),
    ]
}

/// A cocycle picked from the enumeration of a suite.
fn pick(suite: Index, which: Index) -> Cocycle {
    let s = suites();
    let (cm, cover) = &s[suite.index(s.len())];
    let all = enumerate_cocycles(cm, cover, BOUND).unwrap();
    all[which.index(all.len())].clone()
}

fn normalized(c: &Cocycle, seed: &[usize]) -> Coboundary {
    let cover = c.cover();
    let (nh, ng) = (c.cm().h().order(), c.cm().g().order());
    let (no, np) = (cover.n_objects(), cover.n_pairs());
    let r = (0..no).map(|o| seed[o % seed.len()] % nh).collect();
    let v = (0..np)
        .map(|p| {
            let (i, j, _) = cover.pair(p);
            if i == j {
                0
            } else {
                seed[(no + p) % seed.len()] % ng
            }
        })
        .collect();
    Coboundary::from_tables(c.cm().clone(), cover.clone(), r, v).unwrap()
}

fn permutation(n: usize, keys: &[u32]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&k| (keys[k % keys.len()].wrapping_mul(k as u32 + 7), k));
    idx
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cyclic_aut_group_is_a_group(n in 1usize..9) {
        let g = FiniteGroup::cyclic(n);
        let aut = automorphism_group(&g);
        prop_assert!(naive_is_group(&group_table(&aut.group)));
        let fact: usize = (1..=n).product();
        prop_assert_eq!(fact % aut.elements.len(), 0);
        let units = (1..=n).filter(|&k| (1..=n).all(|d| !(k % d == 0 && n % d == 0) || d == 1)).count().max(1);
        prop_assert_eq!(aut.elements.len(), units);
    }

    #[test]
    fn coboundaries_move_cocycles_within_the_class(s in any::<Index>(), w in any::<Index>(), seed in prop::collection::vec(0usize..6, 1..40)) {
        let c = pick(s, w);
        let cb = normalized(&c, &seed);
        let c2 = apply_coboundary(&c, &cb).unwrap();
        prop_assert!(c2.is_valid());
        prop_assert!(coboundary_relates(&c, &c2, &cb));
        prop_assert!(find_relating_coboundary(&c, &c2, BOUND).unwrap().is_some());
        prop_assert_eq!(class_representative(&c, BOUND).unwrap(), class_representative(&c2, BOUND).unwrap());
    }

    #[test]
    fn build_then_extract_is_the_identity(s in any::<Index>(), w in any::<Index>()) {
        let c = pick(s, w);
        let e = extension_from_cocycle(&c).unwrap();
        prop_assert!(is_adapted(&e, c.cover()).unwrap());
        prop_assert_eq!(cocycle_from_adapted(&e, c.cover()).unwrap(), c);
    }

    #[test]
    fn relabeled_extensions_adapt_to_the_same_class(s in any::<Index>(), w in any::<Index>(), kr in prop::collection::vec(any::<u32>(), 1..16), kp in prop::collection::vec(any::<u32>(), 1..16)) {
        let c = pick(s, w);
        let cover = c.cover().clone();
        let e = extension_from_cocycle(&c).unwrap();
        let moved = e.relabeled(&permutation(e.r().n_arrows(), &kr), &permutation(e.n_elements(), &kp)).unwrap();
        let (adapted, iso) = adapt(&moved, &cover).unwrap();
        prop_assert!(is_adapted(&adapted, &cover).unwrap());
        prop_assert!(iso.validate(&adapted, &moved).is_ok());
        let before = gerbe_class(&ExtOverBase::from_cech(e, &cover).unwrap(), BOUND).unwrap();
        let after = gerbe_class(&ExtOverBase::from_cech(moved, &cover).unwrap(), BOUND).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn onto_pullbacks_are_witnessed(s in any::<Index>(), w in any::<Index>(), extra in prop::collection::vec(any::<Index>(), 0..3)) {
        let c = pick(s, w);
        let e = ExtOverBase::from_cech(extension_from_cocycle(&c).unwrap(), c.cover()).unwrap();
        let n = e.q().len();
        let mut p: Vec<usize> = (0..n).collect();
        p.extend(extra.iter().map(|i| i.index(n)));
        let (f, wit) = pullback_witness(&e, &p).unwrap();
        prop_assert!(validate_morita_witness(&e, &f, &wit).is_ok());
    }

    #[test]
    fn serialization_is_idempotent(s in any::<Index>(), w in any::<Index>()) {
        let c = pick(s, w);
        let cover = c.cover().clone();
        let cm = c.cm().clone();
        let mut doc = Document::new();
        doc.insert("g", Item::Group(cm.g_arc().clone()));
        doc.insert("h", Item::Group(cm.h_arc().clone()));
        doc.insert("x", Item::Xmod { g: "g".into(), h: "h".into(), cm: cm.clone() });
        doc.insert("u", Item::Cover(cover.clone()));
        let e = ExtOverBase::from_cech(extension_from_cocycle(&c).unwrap(), &cover).unwrap();
        doc.insert("c", Item::Cocycle { xmod: "x".into(), cover: "u".into(), cocycle: c });
        doc.insert("e", Item::Extension { xmod: "x".into(), base: BaseRef::Cover("u".into()), ext: e });
        let t = doc.to_text();
        let back = Document::parse(&t).unwrap();
        prop_assert_eq!(back.to_text(), t);
        let (a, b) = (back.cocycle("c").unwrap(), doc.cocycle("c").unwrap());
        prop_assert_eq!((&a.lam, &a.g), (&b.lam, &b.g));
        prop_assert_eq!(a.cover(), b.cover());
    }

    #[test]
    fn pair_groupoids_satisfy_the_axioms(n in 1usize..5) {
        prop_assert!(naive_groupoid_ok(&FiniteGroupoid::pair(n)));
    }
}
