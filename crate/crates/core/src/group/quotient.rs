use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::elem::GroupElem;
use super::finite::{FiniteGroup, GroupError};
use super::subgroup::Subgroup;

/// Shared data for the cosets of one normal subgroup.
pub struct QuotientContext {
    parent: Arc<FiniteGroup>,
    /// Smallest id in the coset of each parent element.
    coset_rep: Vec<u32>,
}

impl QuotientContext {
    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn coset_rep(&self, x: u32) -> u32 {
        self.coset_rep[x as usize]
    }
}

/// A coset `xN`, identified by its smallest member id in the parent group.
#[derive(Clone)]
pub struct Coset {
    ctx: Arc<QuotientContext>,
    rep: u32,
}

impl Coset {
    pub fn rep(&self) -> u32 {
        self.rep
    }

    pub fn context(&self) -> &Arc<QuotientContext> {
        &self.ctx
    }

    pub(crate) fn context_id(&self) -> usize {
        Arc::as_ptr(&self.ctx) as usize
    }

    fn wrap(&self, x: u32) -> Coset {
        Coset {
            ctx: self.ctx.clone(),
            rep: self.ctx.coset_rep(x),
        }
    }

    pub fn mul(&self, other: &Coset) -> Coset {
        self.wrap(self.ctx.parent.mul(self.rep, other.rep))
    }

    pub fn inverse(&self) -> Coset {
        self.wrap(self.ctx.parent.inv(self.rep))
    }

    pub fn identity(&self) -> Coset {
        self.wrap(0)
    }
}

impl PartialEq for Coset {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep && Arc::ptr_eq(&self.ctx, &other.ctx)
    }
}

impl Eq for Coset {}

impl Hash for Coset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rep.hash(state);
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}N", self.ctx.parent.element(self.rep))
    }
}

/// `G/N` as a group of [`Coset`] elements.
pub fn quotient(group: &Arc<FiniteGroup>, normal: &Subgroup) -> Result<FiniteGroup, GroupError> {
    if !group.is_normal(normal) {
        return Err(GroupError::NotNormal);
    }
    let mut coset_rep = vec![u32::MAX; group.order()];
    for x in group.ids() {
        if coset_rep[x as usize] != u32::MAX {
            continue;
        }
        for &n in normal.members() {
            coset_rep[group.mul(x, n) as usize] = x;
        }
    }
    let ctx = Arc::new(QuotientContext {
        parent: group.clone(),
        coset_rep,
    });
    let mk = |x: u32| {
        GroupElem::Coset(Coset {
            ctx: ctx.clone(),
            rep: ctx.coset_rep(x),
        })
    };
    let gens: Vec<GroupElem> = group.generators().iter().map(|&g| mk(g)).collect();
    FiniteGroup::closure(mk(0), &gens, group.order() / normal.order())
}
