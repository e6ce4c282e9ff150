//! Enumerated finite groups: closure, orders, classes, centralizers,
//! normal structure and quotients.

mod classes;
mod elem;
mod finite;
mod quotient;
mod subgroup;

pub use elem::{AffinePair, GroupElem, Shape};
pub use finite::{
    default_order_cap, FiniteGroup, GroupError, CAYLEY_LIMIT, DEFAULT_ORDER_CAP, ORDER_CAP_ENV,
};
pub use quotient::{quotient, Coset, QuotientContext};
pub use subgroup::{Subgroup, SubgroupBuilder, DEFAULT_SOCLE_CAP};
