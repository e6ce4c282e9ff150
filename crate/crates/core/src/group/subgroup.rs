use super::finite::{FiniteGroup, GroupError};

/// Default largest group order for [`FiniteGroup::socle`].
pub const DEFAULT_SOCLE_CAP: usize = 100_000;

/// A subgroup of a [`FiniteGroup`], as sorted member ids plus a generating set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<u32>,
    mask: Vec<u64>,
    gens: Vec<u32>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent_order == other.parent_order && self.members == other.members
    }
}

impl Eq for Subgroup {}

fn bit(mask: &[u64], x: u32) -> bool {
    mask[(x / 64) as usize] >> (x % 64) & 1 == 1
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn contains(&self, x: u32) -> bool {
        bit(&self.mask, x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.members.iter().all(|&x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent_order
    }
}

/// Incremental subgroup closure (Dimino): adding a generator appends the
/// right cosets of the current subgroup that the new subgroup needs.
pub struct SubgroupBuilder<'g> {
    group: &'g FiniteGroup,
    mask: Vec<u64>,
    members: Vec<u32>,
    gens: Vec<u32>,
}

impl<'g> SubgroupBuilder<'g> {
    pub fn new(group: &'g FiniteGroup) -> Self {
        let mut mask = vec![0u64; group.order().div_ceil(64)];
        mask[0] |= 1;
        SubgroupBuilder {
            group,
            mask,
            members: vec![0],
            gens: Vec::new(),
        }
    }

    pub fn contains(&self, x: u32) -> bool {
        bit(&self.mask, x)
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    fn insert(&mut self, x: u32) {
        self.mask[(x / 64) as usize] |= 1 << (x % 64);
        self.members.push(x);
    }

    fn add_coset(&mut self, base: usize, rep: u32) {
        let word = self.group.word(rep);
        for i in 0..base {
            let y = self.group.right_mul_word(self.members[i], &word);
            self.insert(y);
        }
    }

    /// Extends the subgroup by `h`. Returns false if `h` was already a member.
    pub fn add_generator(&mut self, h: u32) -> bool {
        if self.contains(h) {
            return false;
        }
        self.gens.push(h);
        let base = self.members.len();
        let mut reps = vec![0u32];
        let mut r = 0;
        while r < reps.len() {
            for gi in 0..self.gens.len() {
                let t = self.group.mul(reps[r], self.gens[gi]);
                if !self.contains(t) {
                    self.add_coset(base, t);
                    reps.push(t);
                }
            }
            r += 1;
        }
        true
    }

    pub fn finish(mut self) -> Subgroup {
        self.members.sort_unstable();
        Subgroup {
            parent_order: self.group.order(),
            members: self.members,
            mask: self.mask,
            gens: self.gens,
        }
    }
}

impl FiniteGroup {
    pub fn subgroup(&self, gens: &[u32]) -> Subgroup {
        let mut b = SubgroupBuilder::new(self);
        for &g in gens {
            b.add_generator(g);
        }
        b.finish()
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup(self.generators())
    }

    pub fn trivial(&self) -> Subgroup {
        self.subgroup(&[])
    }

    /// Subgroup from an explicit member list; the list must be closed.
    /// A generating set is chosen greedily in ascending id order.
    pub fn subgroup_from_members(&self, members: &[u32]) -> Subgroup {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut b = SubgroupBuilder::new(self);
        for &x in &sorted {
            if b.order() == sorted.len() {
                break;
            }
            b.add_generator(x);
        }
        let h = b.finish();
        assert_eq!(h.members, sorted, "member list is not a subgroup");
        h
    }

    pub fn subgroup_is_abelian(&self, h: &Subgroup) -> bool {
        let g = h.generators();
        g.iter()
            .enumerate()
            .all(|(i, &a)| g[i + 1..].iter().all(|&b| self.commute(a, b)))
    }

    /// Checks conjugates of the subgroup generators by the group generators.
    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.generators()
            .iter()
            .all(|&x| (0..self.generators().len()).all(|i| h.contains(self.conj_gen(x, i))))
    }

    /// Smallest normal subgroup containing `set`.
    pub fn normal_closure(&self, set: &[u32]) -> Subgroup {
        let mut b = SubgroupBuilder::new(self);
        for &x in set {
            b.add_generator(x);
        }
        let mut k = 0;
        while k < b.generators().len() {
            let x = b.generators()[k];
            for i in 0..self.generators().len() {
                b.add_generator(self.conj_gen(x, i));
            }
            k += 1;
        }
        b.finish()
    }

    /// `{x : xg = gx}` by scanning the whole group.
    pub fn centralizer(&self, g: u32) -> Subgroup {
        let members: Vec<u32> = self.ids().filter(|&x| self.commute(x, g)).collect();
        self.subgroup_from_members(&members)
    }

    pub fn center(&self) -> Subgroup {
        let members: Vec<u32> = self
            .ids()
            .filter(|&x| (0..self.generators().len()).all(|i| self.conj_gen(x, i) == x))
            .collect();
        self.subgroup_from_members(&members)
    }

    /// Normal closure of the commutators of the generators.
    pub fn derived_subgroup(&self) -> Subgroup {
        let gens = self.generators();
        let mut comms = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                if c != 0 {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup().is_whole()
    }

    /// Elements centralizing every member of `h`.
    pub fn centralizer_of_subgroup(&self, h: &Subgroup) -> Subgroup {
        let members: Vec<u32> = self
            .ids()
            .filter(|&x| h.generators().iter().all(|&y| self.commute(x, y)))
            .collect();
        self.subgroup_from_members(&members)
    }

    /// All minimal normal subgroups, ordered by smallest non-identity member.
    pub fn minimal_normal_subgroups(&self) -> Vec<Subgroup> {
        let classes = self.conjugacy_classes();
        let closures: Vec<Subgroup> = classes
            .representatives()
            .into_iter()
            .filter(|&r| r != 0)
            .map(|r| self.normal_closure(&[r]))
            .collect();
        let mut minimal: Vec<Subgroup> = Vec::new();
        for n in &closures {
            let has_smaller = closures
                .iter()
                .any(|m| m.order() < n.order() && m.is_subgroup_of(n));
            if !has_smaller && !minimal.contains(n) {
                minimal.push(n.clone());
            }
        }
        minimal.sort_by_key(|n| n.members()[1]);
        minimal
    }

    /// Subgroup generated by the minimal normal subgroups.
    pub fn socle(&self, cap: usize) -> Result<Subgroup, GroupError> {
        if self.order() > cap {
            return Err(GroupError::TooLarge {
                order: self.order(),
                limit: cap,
            });
        }
        let gens: Vec<u32> = self
            .minimal_normal_subgroups()
            .iter()
            .flat_map(|n| n.generators().to_vec())
            .collect();
        Ok(self.subgroup(&gens))
    }

    /// Generators of the group chosen greedily from `candidates` until they
    /// generate everything.
    pub fn greedy_generators(&self, candidates: &[u32]) -> Vec<u32> {
        let mut b = SubgroupBuilder::new(self);
        for &c in candidates {
            if b.order() == self.order() {
                break;
            }
            b.add_generator(c);
        }
        let gens = b.generators().to_vec();
        assert_eq!(
            b.order(),
            self.order(),
            "candidates do not generate the group"
        );
        gens
    }

    /// The subgroup `h` as a group in its own right, generated by the
    /// elements of `h`'s generating set.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<FiniteGroup, GroupError> {
        let gens: Vec<_> = h
            .generators()
            .iter()
            .map(|&x| self.element(x).clone())
            .collect();
        FiniteGroup::closure(self.element(0).clone(), &gens, h.order().max(1))
    }
}
