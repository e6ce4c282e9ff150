use std::collections::{BTreeSet, HashMap};

use super::finite::FiniteGroup;
use super::subgroup::{Subgroup, SubgroupBuilder};
use crate::partition::{Partition, UnionFind};

impl FiniteGroup {
    /// Conjugacy classes as orbits of conjugation by the generators.
    /// Computed once and cached.
    pub fn conjugacy_classes(&self) -> &Partition {
        self.classes.get_or_init(|| {
            let mut uf = UnionFind::new(self.order());
            for x in self.ids() {
                for i in 0..self.generators().len() {
                    uf.union(x, self.conj_gen(x, i));
                }
            }
            uf.into_partition("conjugacy classes")
        })
    }

    /// Distinct element orders.
    pub fn order_census(&self) -> BTreeSet<u64> {
        self.conjugacy_classes()
            .representatives()
            .into_iter()
            .map(|r| self.elem_order(r))
            .collect()
    }

    /// Centralizer of `g` from the Schreier generators of its conjugation
    /// orbit: if `u_x` conjugates `g` to `x`, every `u_x s u_{x^s}^-1` fixes
    /// `g`, and these generate the stabilizer.
    pub fn class_centralizer(&self, g: u32) -> Subgroup {
        let ngens = self.generators().len();
        let mut transversal: HashMap<u32, u32> = HashMap::new();
        let mut orbit = vec![g];
        transversal.insert(g, 0);
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            let ux = transversal[&x];
            for i in 0..ngens {
                let y = self.conj_gen(x, i);
                if let std::collections::hash_map::Entry::Vacant(e) = transversal.entry(y) {
                    e.insert(self.right_gen(ux, i));
                    orbit.push(y);
                }
            }
            k += 1;
        }
        if orbit.len() == 1 {
            return self.whole();
        }
        let target = self.order() / orbit.len();
        let mut b = SubgroupBuilder::new(self);
        'outer: for &x in &orbit {
            let ux = transversal[&x];
            for i in 0..ngens {
                if b.order() == target {
                    break 'outer;
                }
                let y = self.conj_gen(x, i);
                let h = self.mul(self.right_gen(ux, i), self.inv(transversal[&y]));
                b.add_generator(h);
            }
        }
        let c = b.finish();
        debug_assert_eq!(c.order(), target);
        c
    }
}
