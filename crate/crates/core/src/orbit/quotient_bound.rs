use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::brute::{abstract_autogens, BruteError};
use super::{omega, CertifiedOmega, OmegaStatus};
use crate::constructions::AutoGenSet;
use crate::group::{quotient, FiniteGroup, GroupError, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientBoundError {
    #[error("the subgroup is not invariant under the automorphism generators")]
    NotInvariant,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Brute(#[from] BruteError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaSummary {
    pub lo: usize,
    pub hi: usize,
    pub status: OmegaStatus,
}

impl From<&CertifiedOmega> for OmegaSummary {
    fn from(o: &CertifiedOmega) -> Self {
        OmegaSummary {
            lo: o.lo,
            hi: o.hi,
            status: o.status,
        }
    }
}

/// Outcome of checking `omega(G) >= omega(N) + omega(G/N) - 1` for an
/// automorphism-invariant normal subgroup `N`.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientBoundReport {
    pub group: OmegaSummary,
    pub normal: OmegaSummary,
    pub quotient: OmegaSummary,
    pub normal_order: usize,
    /// All three counts are certified or exact.
    pub determined: bool,
    /// The inequality follows from the bounds: `lo(G) >= hi(N) + hi(G/N) - 1`.
    pub holds: bool,
    /// Equality with all three counts determined.
    pub equality: bool,
    /// On equality: every non-trivial coset of `N` lies in one orbit of `G`.
    pub coset_fusion: Option<bool>,
    pub trusted: Vec<String>,
}

impl QuotientBoundReport {
    /// The inequality holds and, on equality, so does coset fusion.
    pub fn passed(&self) -> bool {
        self.holds && self.coset_fusion != Some(false)
    }
}

/// Checks the orbit-count inequality for `n` in `group`, where `autos`
/// generates the automorphisms used for `group`. `N` and `G/N` are treated
/// as abstract groups with automorphisms from [`abstract_autogens`].
pub fn verify_quotient_bound(
    group: &Arc<FiniteGroup>,
    autos: &AutoGenSet,
    n: &Subgroup,
    aut_limit: usize,
    level: u8,
) -> Result<QuotientBoundReport, QuotientBoundError> {
    if !autos
        .maps
        .iter()
        .all(|m| n.members().iter().all(|&x| n.contains(m.apply(x))))
    {
        return Err(QuotientBoundError::NotInvariant);
    }
    if !group.is_normal(n) {
        return Err(QuotientBoundError::Group(GroupError::NotNormal));
    }
    let og = omega(group, autos, level);

    let ngroup = group.subgroup_as_group(n)?;
    let (nautos, ncomplete) = abstract_autogens(&ngroup, aut_limit)?;
    let on = omega(&ngroup, &nautos, level);

    let qgroup = quotient(group, n)?;
    let (qautos, qcomplete) = abstract_autogens(&qgroup, aut_limit)?;
    let oq = omega(&qgroup, &qautos, level);

    let mut trusted = og.trusted.clone();
    if !ncomplete || !qcomplete {
        trusted.push("abstract automorphism set incomplete for N or G/N".to_string());
    }

    let determined = [&og, &on, &oq]
        .iter()
        .all(|o| o.status != OmegaStatus::Bounds);
    let holds = og.lo + 1 >= on.hi + oq.hi;
    let equality = determined && og.hi + 1 == on.hi + oq.hi;
    let coset_fusion = equality.then(|| {
        let orbits = og.orbits();
        let mut seen = vec![false; group.order()];
        group.ids().all(|x| {
            if n.contains(x) || seen[x as usize] {
                return true;
            }
            let block = orbits.block_of(x);
            n.members().iter().all(|&y| {
                let z = group.mul(x, y);
                seen[z as usize] = true;
                orbits.block_of(z) == block
            })
        })
    });
    Ok(QuotientBoundReport {
        group: (&og).into(),
        normal: (&on).into(),
        quotient: (&oq).into(),
        normal_order: n.order(),
        determined,
        holds,
        equality,
        coset_fusion,
        trusted,
    })
}
