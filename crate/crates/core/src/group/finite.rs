use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use super::elem::GroupElem;
use crate::partition::Partition;

/// Default maximum number of elements a closure may enumerate.
pub const DEFAULT_ORDER_CAP: usize = 2_000_000;

/// Groups up to this order get a full Cayley table on first use.
pub const CAYLEY_LIMIT: usize = 4096;

/// Environment variable overriding [`DEFAULT_ORDER_CAP`].
pub const ORDER_CAP_ENV: &str = "AUTORBIT_ORDER_CAP";

pub fn default_order_cap() -> usize {
    std::env::var(ORDER_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORDER_CAP)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order exceeds the cap of {0} elements")]
    CapExceeded(usize),
    #[error("generators have incompatible element types")]
    Incompatible,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group of order {order} exceeds the limit {limit} for this operation")]
    TooLarge { order: usize, limit: usize },
}

/// A finite group with every element enumerated.
///
/// Elements get integer ids in breadth-first discovery order from the
/// identity (id 0), right-multiplying by the generators in their fixed
/// order. Each non-identity element remembers the BFS edge that found it,
/// so any product reduces to a walk of right-multiplication tables.
pub struct FiniteGroup {
    elements: Vec<GroupElem>,
    index: HashMap<GroupElem, u32>,
    gens: Vec<u32>,
    /// `right[i][x]` = id of `x * gens[i]`.
    right: Vec<Vec<u32>>,
    parent: Vec<u32>,
    parent_gen: Vec<u8>,
    inverse: Vec<u32>,
    cayley: OnceLock<Option<Vec<u16>>>,
    pub(super) classes: OnceLock<Partition>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("generators", &self.gens.len())
            .finish()
    }
}

impl FiniteGroup {
    /// Breadth-first closure of `gens`. Identity and repeated generators are
    /// dropped; the remaining order is kept.
    pub fn closure(
        identity: GroupElem,
        gens: &[GroupElem],
        cap: usize,
    ) -> Result<FiniteGroup, GroupError> {
        let shape = identity.shape();
        if gens.iter().any(|g| g.shape() != shape) {
            return Err(GroupError::Incompatible);
        }
        let mut gen_elems: Vec<GroupElem> = Vec::new();
        for g in gens {
            if *g != identity && !gen_elems.contains(g) {
                gen_elems.push(g.clone());
            }
        }
        assert!(gen_elems.len() < 256, "too many generators");

        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0u32);
        let mut right: Vec<Vec<u32>> = vec![Vec::new(); gen_elems.len()];
        let mut parent = vec![0u32];
        let mut parent_gen = vec![0u8];

        let mut x = 0usize;
        while x < elements.len() {
            for (i, g) in gen_elems.iter().enumerate() {
                let y = elements[x].mul(g);
                let id = match index.get(&y) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= cap {
                            return Err(GroupError::CapExceeded(cap));
                        }
                        let id = elements.len() as u32;
                        index.insert(y.clone(), id);
                        elements.push(y);
                        parent.push(x as u32);
                        parent_gen.push(i as u8);
                        id
                    }
                };
                right[i].push(id);
            }
            x += 1;
        }

        let gens: Vec<u32> = gen_elems.iter().map(|g| index[g]).collect();
        let inverse = elements.iter().map(|e| index[&e.inverse()]).collect();
        Ok(FiniteGroup {
            elements,
            index,
            gens,
            right,
            parent,
            parent_gen,
            inverse,
            cayley: OnceLock::new(),
            classes: OnceLock::new(),
        })
    }

    /// Closure with the default cap; `gens` must be non-empty unless an
    /// identity is supplied through [`FiniteGroup::closure`].
    pub fn generated(gens: &[GroupElem]) -> Result<FiniteGroup, GroupError> {
        let identity = gens
            .first()
            .ok_or(GroupError::Incompatible)?
            .identity_like();
        FiniteGroup::closure(identity, gens, default_order_cap())
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn element(&self, id: u32) -> &GroupElem {
        &self.elements[id as usize]
    }

    pub fn elements(&self) -> &[GroupElem] {
        &self.elements
    }

    pub fn id_of(&self, e: &GroupElem) -> Option<u32> {
        self.index.get(e).copied()
    }

    pub fn ids(&self) -> std::ops::Range<u32> {
        0..self.elements.len() as u32
    }

    /// Generator ids in their fixed order.
    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn generator_elements(&self) -> Vec<GroupElem> {
        self.gens.iter().map(|&g| self.element(g).clone()).collect()
    }

    #[inline]
    pub fn right_gen(&self, x: u32, gen_index: usize) -> u32 {
        self.right[gen_index][x as usize]
    }

    #[inline]
    pub fn inv(&self, x: u32) -> u32 {
        self.inverse[x as usize]
    }

    /// Generator-index word `w` with `element(x) = g_{w0} g_{w1} ...`.
    pub fn word(&self, mut x: u32) -> Vec<u8> {
        let mut w = Vec::new();
        while x != 0 {
            w.push(self.parent_gen[x as usize]);
            x = self.parent[x as usize];
        }
        w.reverse();
        w
    }

    /// BFS parent and generator index of a non-identity element.
    pub fn tree_edge(&self, x: u32) -> (u32, usize) {
        (
            self.parent[x as usize],
            self.parent_gen[x as usize] as usize,
        )
    }

    #[inline]
    pub fn right_mul_word(&self, mut x: u32, word: &[u8]) -> u32 {
        for &g in word {
            x = self.right[g as usize][x as usize];
        }
        x
    }

    fn cayley(&self) -> Option<&[u16]> {
        self.cayley
            .get_or_init(|| {
                let n = self.order();
                if n > CAYLEY_LIMIT {
                    return None;
                }
                let mut table = vec![0u16; n * n];
                for a in 0..n {
                    let row = &mut table[a * n..(a + 1) * n];
                    row[0] = a as u16;
                    for b in 1..n {
                        let (p, g) = (self.parent[b] as usize, self.parent_gen[b] as usize);
                        row[b] = self.right[g][row[p] as usize] as u16;
                    }
                }
                Some(table)
            })
            .as_deref()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = self.cayley() {
            return t[a as usize * self.order() + b as usize] as u32;
        }
        if b == 0 {
            return a;
        }
        let mut stack = [0u8; 64];
        let mut len = 0;
        let mut y = b;
        while y != 0 {
            if len == stack.len() {
                return self.right_mul_word(a, &self.word(b));
            }
            stack[len] = self.parent_gen[y as usize];
            len += 1;
            y = self.parent[y as usize];
        }
        let mut x = a;
        for &g in stack[..len].iter().rev() {
            x = self.right[g as usize][x as usize];
        }
        x
    }

    /// `g_i^-1 x g_i` for generator index `i`, via table lookups only.
    #[inline]
    pub fn conj_gen(&self, x: u32, gen_index: usize) -> u32 {
        let r = &self.right[gen_index];
        self.inverse[r[self.inverse[r[x as usize] as usize] as usize] as usize]
    }

    /// `g^-1 x g`.
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn commute(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn pow(&self, x: u32, mut e: u64) -> u32 {
        let mut base = x;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Least `n >= 1` with `x^n = 1`.
    pub fn elem_order(&self, x: u32) -> u64 {
        let mut y = x;
        let mut n = 1;
        while y != 0 {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gens;
        g.iter()
            .enumerate()
            .all(|(i, &a)| g[i + 1..].iter().all(|&b| self.commute(a, b)))
    }
}
