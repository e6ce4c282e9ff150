//! Automorphism orbit counts. A lower bound comes from partitioning by
//! automorphism invariants, an upper bound from closing under verified
//! automorphisms; when the two partitions coincide the count is certified.

mod brute;
pub mod canonical;
mod quotient_bound;
mod signature;

use serde::Serialize;

use crate::constructions::AutoGenSet;
use crate::group::FiniteGroup;
use crate::partition::{Partition, UnionFind};

pub use brute::{
    abstract_autogens, brute_force_aut, BruteError, ExactAut, DEFAULT_AUT_LIMIT, MAX_ENUMERATED,
};
pub use canonical::{
    canonical_form_gmf, CanonError, CanonicalCase, CanonicalForm, ChainStep, GmfCanonicalizer,
};
pub use quotient_bound::{
    verify_quotient_bound, OmegaSummary, QuotientBoundError, QuotientBoundReport,
};
pub use signature::{
    class_signatures, element_signatures, signature_partition, Signature, MAX_LEVEL, MIN_LEVEL,
};

pub const DEFAULT_LEVEL: u8 = 2;

/// Orbits of the group generated by `autos`. Only the supplied maps are
/// used; pass the inner automorphisms explicitly if wanted.
pub fn orbit_closure(group: &FiniteGroup, autos: &AutoGenSet) -> Partition {
    let mut uf = UnionFind::new(group.order());
    for m in &autos.maps {
        debug_assert_eq!(m.images().len(), group.order());
        for x in group.ids() {
            uf.union(x, m.apply(x));
        }
    }
    uf.into_partition("automorphism closure")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaStatus {
    /// Orbits of the full automorphism group, found by exhaustive search.
    Exact,
    /// Lower and upper partitions coincide.
    Certified,
    /// Only `lo <= omega <= hi` is known.
    Bounds,
}

impl std::fmt::Display for OmegaStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OmegaStatus::Exact => "exact",
            OmegaStatus::Certified => "certified",
            OmegaStatus::Bounds => "bounds",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CertifiedOmega {
    pub lo: usize,
    pub hi: usize,
    pub status: OmegaStatus,
    /// Signature level the lower bound was taken at.
    pub level: u8,
    pub trusted: Vec<String>,
    pub lower: Partition,
    pub upper: Partition,
}

impl CertifiedOmega {
    /// The orbit count when known.
    pub fn value(&self) -> Option<usize> {
        (self.status != OmegaStatus::Bounds).then_some(self.hi)
    }

    /// The partition the reported orbits come from.
    pub fn orbits(&self) -> &Partition {
        &self.upper
    }
}

fn sandwich(lower: Partition, upper: Partition, level: u8, trusted: Vec<String>) -> CertifiedOmega {
    assert!(
        upper.refines(&lower),
        "closure block crosses signature blocks: an automorphism changed an invariant"
    );
    let (lo, hi) = (lower.block_count(), upper.block_count());
    // with upper refining lower, equal counts means equal partitions
    let status = if lo == hi {
        assert_eq!(lower, upper);
        OmegaStatus::Certified
    } else {
        OmegaStatus::Bounds
    };
    CertifiedOmega {
        lo,
        hi,
        status,
        level,
        trusted,
        lower,
        upper,
    }
}

/// Certified sandwich at `level`, escalating to the top level when the
/// bounds differ.
pub fn omega(group: &FiniteGroup, autos: &AutoGenSet, level: u8) -> CertifiedOmega {
    let level = level.clamp(MIN_LEVEL, MAX_LEVEL);
    let upper = orbit_closure(group, autos);
    let mut result = sandwich(
        signature_partition(group, level),
        upper.clone(),
        level,
        autos.trusted.clone(),
    );
    if result.status == OmegaStatus::Bounds && level < MAX_LEVEL {
        result = sandwich(
            signature_partition(group, MAX_LEVEL),
            upper,
            MAX_LEVEL,
            autos.trusted.clone(),
        );
    }
    result
}

/// Orbits of the full automorphism group from [`brute_force_aut`].
pub fn omega_exact(
    group: &FiniteGroup,
    aut_limit: usize,
    level: u8,
) -> Result<(CertifiedOmega, ExactAut), BruteError> {
    let exact = brute_force_aut(group, aut_limit)?;
    let level = level.clamp(MIN_LEVEL, MAX_LEVEL);
    let upper = orbit_closure(group, &exact.autos);
    let lower = signature_partition(group, level);
    assert!(upper.refines(&lower));
    let n = upper.block_count();
    Ok((
        CertifiedOmega {
            lo: n,
            hi: n,
            status: OmegaStatus::Exact,
            level,
            trusted: Vec::new(),
            lower,
            upper,
        },
        exact,
    ))
}

/// `binomial(m + omega_s - 1, omega_s - 1)`: the orbit count of a direct
/// power `S^m` when `S` has `omega_s` orbits and automorphisms of `S^m`
/// are exactly those of `Aut(S) wr Sym(m)`.
pub fn direct_power_orbit_count(omega_s: u64, m: u64) -> u128 {
    assert!(omega_s >= 1 && m >= 1);
    let (n, k) = ((m + omega_s - 1) as u128, (omega_s - 1) as u128);
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}
