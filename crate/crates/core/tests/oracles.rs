mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use gerbelab::cocycle::{
    coboundary_relates, enumerate_coboundaries, enumerate_cocycles, h1_classes,
};
use gerbelab::extension::{coboundary_from_iso, extension_from_cocycle, iso_from_coboundary};
use gerbelab::fingroup::{automorphism_group, FiniteGroup};
use gerbelab::xmod::CrossedModule;

#[test]
fn fixture_groups_satisfy_the_axioms() {
    let doc = fixture("groups.txt");
    for name in ["one", "Z2", "Z3", "Z4", "S3"] {
        assert!(
            naive_is_group(&group_table(doc.group(name).unwrap())),
            "{name}"
        );
    }
}

#[test]
fn aut_tables_satisfy_the_axioms() {
    let doc = fixture("groups.txt");
    for name in ["Z2", "Z3", "Z4", "S3"] {
        let aut = automorphism_group(doc.group(name).unwrap());
        assert!(naive_is_group(&group_table(&aut.group)), "{name}");
    }
}

#[test]
fn oracle_rejects_non_groups() {
    assert!(!naive_is_group(&[vec![0, 1], vec![1, 1]]));
    assert!(!naive_is_group(&[vec![1, 0], vec![0, 1]]));
    assert!(FiniteGroup::from_table("x", vec![vec![0, 1], vec![1, 1]]).is_err());
}

fn suites() -> Vec<(&'static str, Arc<CrossedModule>, Arc<gerbelab::cech::Cover>)> {
    vec![
        ("1->Z2 on CIRC3", one_to(2), circ3()),
        ("1->Z2 on PT2", one_to(2), pt2()),
        ("Z2->1 on PT2", to_one(2), pt2()),
        ("1->Z3 on PT2", one_to(3), pt2()),
        (
            "inner Z2 on PT2",
            Arc::new(CrossedModule::inner(z(2))),
            pt2(),
        ),
    ]
}

#[test]
fn enumeration_matches_the_naive_scan() {
    for (name, cm, cover) in suites() {
        let lib: BTreeSet<_> = enumerate_cocycles(&cm, &cover, BOUND)
            .unwrap()
            .into_iter()
            .map(|c| (c.lam.clone(), c.g.clone()))
            .collect();
        assert_eq!(lib, naive_cocycles(&cm, &cover), "{name}");
    }
}

#[test]
fn class_counts_match_the_naive_flood_fill() {
    for (name, cm, cover) in suites() {
        let lib = h1_classes(&cm, &cover, BOUND).unwrap().len();
        assert_eq!(lib, naive_class_count(&cm, &cover), "{name}");
    }
}

#[test]
fn circ3_census() {
    let (cm, cover) = (one_to(2), circ3());
    assert_eq!(naive_cocycles(&cm, &cover).len(), 8);
    assert_eq!(naive_class_count(&cm, &cover), 1);
    assert_eq!(naive_coboundaries(&cm, &cover).len(), 64);
}

#[test]
fn coboundary_action_matches_the_formula() {
    for (name, cm, cover) in suites() {
        let cbs: Vec<_> = enumerate_coboundaries(&cm, &cover, BOUND)
            .unwrap()
            .collect();
        assert_eq!(cbs.len(), naive_coboundaries(&cm, &cover).len(), "{name}");
        for c in enumerate_cocycles(&cm, &cover, BOUND).unwrap() {
            for cb in &cbs {
                let c2 = gerbelab::cocycle::apply_coboundary(&c, cb).unwrap();
                assert_eq!(
                    (c2.lam.clone(), c2.g.clone()),
                    naive_act(&cm, &cover, &c.lam, &c.g, &cb.r, &cb.v),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn built_groupoids_pass_the_axiom_scan() {
    for (name, cm, cover) in suites() {
        for c in enumerate_cocycles(&cm, &cover, BOUND).unwrap() {
            let e = extension_from_cocycle(&c).unwrap();
            assert!(naive_groupoid_ok(e.r()), "{name}");
            assert!(key_lemma_holds(&e, &c), "{name}");
            assert!(kernel_action_holds(&e, &c), "{name}");
        }
    }
}

#[test]
fn isomorphisms_correspond_to_relating_coboundaries() {
    for (name, cm, cover) in suites().into_iter().skip(1).take(2) {
        let cocycles = enumerate_cocycles(&cm, &cover, BOUND).unwrap();
        let cbs: Vec<_> = enumerate_coboundaries(&cm, &cover, BOUND)
            .unwrap()
            .collect();
        for c1 in &cocycles {
            for c2 in &cocycles {
                let (e1, e2) = (
                    extension_from_cocycle(c1).unwrap(),
                    extension_from_cocycle(c2).unwrap(),
                );
                let isos = naive_isos(&e1, &e2);
                let relating: Vec<_> = cbs
                    .iter()
                    .filter(|cb| coboundary_relates(c1, c2, cb))
                    .collect();
                assert_eq!(isos.len(), relating.len(), "{name}");
                for cb in relating {
                    let iso = iso_from_coboundary(cb, &e1, &e2).unwrap();
                    assert!(isos.contains(&iso));
                    assert_eq!(&coboundary_from_iso(&iso, &e1, &e2, &cover).unwrap(), cb);
                }
            }
        }
    }
}
