use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::group::FiniteGroup;
use crate::partition::Partition;

/// Automorphism invariants of an element. Fields beyond `order` are zero or
/// empty below the level that computes them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature {
    pub order: u64,
    pub cent_order: usize,
    pub cent_abelian: bool,
    /// `(k, |class of g^k|)` for every divisor `k` of the order.
    pub power_profile: Vec<(u64, usize)>,
}

pub const MIN_LEVEL: u8 = 1;
pub const MAX_LEVEL: u8 = 3;

/// Signature of each conjugacy-class representative, in representative
/// order. Computed in parallel over classes.
pub fn class_signatures(group: &FiniteGroup, level: u8) -> Vec<(u32, Signature)> {
    let classes = group.conjugacy_classes();
    let reps = classes.representatives();
    let sizes = classes.block_sizes();
    reps.par_iter()
        .map(|&r| {
            let order = group.elem_order(r);
            let mut sig = Signature {
                order,
                cent_order: 0,
                cent_abelian: false,
                power_profile: Vec::new(),
            };
            if level >= 2 {
                let c = group.class_centralizer(r);
                sig.cent_order = c.order();
                sig.cent_abelian = group.subgroup_is_abelian(&c);
            }
            if level >= 3 {
                sig.power_profile = (1..=order)
                    .filter(|k| order % k == 0)
                    .map(|k| (k, sizes[classes.block_of(group.pow(r, k)) as usize]))
                    .collect();
            }
            (r, sig)
        })
        .collect()
}

/// Signature of every element, indexed by id.
pub fn element_signatures(group: &FiniteGroup, level: u8) -> Vec<Signature> {
    let classes = group.conjugacy_classes();
    let by_class = class_signatures(group, level);
    let by_block: Vec<&Signature> = by_class.iter().map(|(_, s)| s).collect();
    group
        .ids()
        .map(|x| by_block[classes.block_of(x) as usize].clone())
        .collect()
}

/// Elements grouped by signature at `level` (clamped to 1..=3). Every
/// automorphism orbit lies inside one block.
pub fn signature_partition(group: &FiniteGroup, level: u8) -> Partition {
    let level = level.clamp(MIN_LEVEL, MAX_LEVEL);
    let classes = group.conjugacy_classes();
    let by_class = class_signatures(group, level);
    let mut ids: HashMap<&Signature, u32> = HashMap::new();
    let class_label: Vec<u32> = by_class
        .iter()
        .map(|(_, s)| {
            let next = ids.len() as u32;
            *ids.entry(s).or_insert(next)
        })
        .collect();
    let labels: Vec<u32> = group
        .ids()
        .map(|x| class_label[classes.block_of(x) as usize])
        .collect();
    Partition::from_labels(&labels, format!("signature level {level}"))
}
