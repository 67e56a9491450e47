use std::sync::Arc;

use crate::cech::Cover;
use crate::fingroup::FiniteGroup;
use crate::xmod::CrossedModule;

/// Permutations of {0,1,2} as e, (01), (02), (12), (012), (021).
pub fn s3() -> FiniteGroup {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 0, 2],
        [2, 1, 0],
        [0, 2, 1],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let table = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| idx([a[b[0]], a[b[1]], a[b[2]]]))
                .collect()
        })
        .collect();
    FiniteGroup::from_table("S3", table).unwrap()
}

pub fn circ3() -> Cover {
    Cover::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
}

pub fn pt2() -> Cover {
    Cover::new(1, vec![vec![0], vec![0]]).unwrap()
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
