//! Named group families: parsing, enumeration with order checks, and the
//! automorphism generators used to bound orbit counts from above.

mod auto;
mod families;
pub mod gmf;
mod spec;

use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::group::{FiniteGroup, GroupError};

pub use auto::{
    autogens_for, extend_generator_images, AutError, AutoDescriptor, AutoGenSet, AutoMap,
};
pub use families::{build, build_with_cap, expected_order, gl_order, sl_order};
pub use spec::{parse_spec, GroupSpec, SpecError, SUPPORTED_Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{spec}: closure has {got} elements but the order formula gives {expected}")]
    OrderMismatch {
        spec: String,
        expected: u128,
        got: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearKind {
    Sl,
    Gl,
    Psl,
    Pgl,
}

impl LinearKind {
    pub fn is_projective(self) -> bool {
        matches!(self, LinearKind::Psl | LinearKind::Pgl)
    }
}

/// What a construction was built from, kept for choosing automorphisms.
#[derive(Clone, Debug)]
pub enum Family {
    Linear {
        kind: LinearKind,
        n: usize,
        field: Field,
    },
    /// `GMF(m,q)`; `m = 1` is `ASL(2,q)`.
    Affine {
        m: usize,
        field: Field,
    },
    Elementary {
        p: u32,
        k: usize,
    },
    Cyclic {
        n: u32,
    },
    Alternating {
        n: usize,
    },
    Symmetric {
        n: usize,
    },
    Product {
        factors: Vec<Construction>,
    },
}

/// An enumerated group together with the spec it came from.
#[derive(Clone, Debug)]
pub struct Construction {
    pub spec: GroupSpec,
    pub group: Arc<FiniteGroup>,
    pub family: Family,
}

impl Construction {
    pub fn name(&self) -> String {
        self.spec.to_string()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}
