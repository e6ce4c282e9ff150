use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use super::signature::signature_partition;
use crate::constructions::{AutoDescriptor, AutoGenSet, AutoMap};
use crate::field::{is_prime, Field};
use crate::group::FiniteGroup;
use crate::linalg::gl_generators;

/// Largest group order searched by default.
pub const DEFAULT_AUT_LIMIT: usize = 512;

/// The search stops with an error after finding this many automorphisms.
pub const MAX_ENUMERATED: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BruteError {
    #[error("group of order {order} exceeds the automorphism search limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("automorphism group has more than {0} elements")]
    TooMany(usize),
}

/// The full automorphism group of a small group.
#[derive(Clone, Debug)]
pub struct ExactAut {
    /// `|Aut(G)|`.
    pub order: usize,
    /// The generating tuple whose images determine each automorphism.
    pub tuple: Vec<u32>,
    /// Images of `tuple` under every automorphism, sorted.
    pub tuple_images: Vec<Vec<u32>>,
    /// Generators of `Aut(G)`, chosen greedily from the sorted list.
    pub autos: AutoGenSet,
}

/// Breadth-first extension of `tuple[i] -> images[i]` over the subgroup the
/// first `images.len()` tuple entries generate. `None` if the assignment is
/// not injective or not multiplicative on that subgroup.
fn extend_partial(group: &FiniteGroup, tuple: &[u32], images: &[u32]) -> Option<Vec<u32>> {
    let n = group.order();
    let mut phi = vec![u32::MAX; n];
    let mut used = vec![false; n];
    phi[0] = 0;
    used[0] = true;
    let mut queue = vec![0u32];
    let mut k = 0;
    while k < queue.len() {
        let x = queue[k];
        for (t, &im) in tuple.iter().zip(images) {
            let y = group.mul(x, *t) as usize;
            let z = group.mul(phi[x as usize], im);
            if phi[y] == u32::MAX {
                if std::mem::replace(&mut used[z as usize], true) {
                    return None;
                }
                phi[y] = z;
                queue.push(y as u32);
            } else if phi[y] != z {
                return None;
            }
        }
        k += 1;
    }
    Some(phi)
}

struct Search<'a> {
    group: &'a FiniteGroup,
    tuple: &'a [u32],
    candidates: Vec<Vec<u32>>,
    found: &'a AtomicUsize,
}

impl Search<'_> {
    fn run(&self, images: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) -> Result<(), BruteError> {
        let depth = images.len();
        if depth == self.tuple.len() {
            if self.found.fetch_add(1, Ordering::Relaxed) >= MAX_ENUMERATED {
                return Err(BruteError::TooMany(MAX_ENUMERATED));
            }
            out.push(images.clone());
            return Ok(());
        }
        for &c in &self.candidates[depth] {
            images.push(c);
            if extend_partial(self.group, self.tuple, images).is_some() {
                self.run(images, out)?;
            }
            images.pop();
        }
        Ok(())
    }
}

/// Every automorphism of `group`, by backtracking over images of a greedy
/// generating tuple drawn from the group's generators. Candidates for each
/// image share the element's level-3 signature and are tried in ascending
/// id; top-level choices run in parallel and results are sorted.
pub fn brute_force_aut(group: &FiniteGroup, limit: usize) -> Result<ExactAut, BruteError> {
    if group.order() > limit {
        return Err(BruteError::TooLarge {
            order: group.order(),
            limit,
        });
    }
    let tuple = group.greedy_generators(group.generators());
    let sig = signature_partition(group, 3);
    let candidates: Vec<Vec<u32>> = tuple
        .iter()
        .map(|&t| {
            group
                .ids()
                .filter(|&y| sig.block_of(y) == sig.block_of(t))
                .collect()
        })
        .collect();
    let found = AtomicUsize::new(0);

    let mut tuple_images: Vec<Vec<u32>> = if tuple.is_empty() {
        vec![Vec::new()]
    } else {
        let search = Search {
            group,
            tuple: &tuple,
            candidates: candidates.clone(),
            found: &found,
        };
        let parts = candidates[0]
            .par_iter()
            .map(|&c| {
                let mut out = Vec::new();
                let mut images = vec![c];
                if extend_partial(group, &tuple, &images).is_some() {
                    search.run(&mut images, &mut out)?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>, BruteError>>()?;
        parts.into_iter().flatten().collect()
    };
    tuple_images.sort();

    let full = |images: &[u32]| extend_partial(group, &tuple, images).expect("found maps extend");
    // greedy generators: add a map when it is not yet generated
    let mut gens: Vec<Vec<u32>> = Vec::new();
    let mut generated: HashSet<Vec<u32>> = HashSet::from([tuple.clone()]);
    for images in &tuple_images {
        if generated.len() == tuple_images.len() {
            break;
        }
        if generated.contains(images) {
            continue;
        }
        gens.push(full(images));
        let mut frontier: Vec<Vec<u32>> = generated.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            for g in &gens {
                let t: Vec<u32> = s.iter().map(|&y| g[y as usize]).collect();
                if generated.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
    }
    assert_eq!(
        generated.len(),
        tuple_images.len(),
        "automorphisms form a group"
    );

    let maps = gens
        .into_iter()
        .map(|g| AutoMap::new(group, AutoDescriptor::ExplicitImages(Arc::new(g))))
        .collect::<Result<Vec<_>, _>>()
        .expect("found maps are automorphisms");
    Ok(ExactAut {
        order: tuple_images.len(),
        tuple,
        tuple_images,
        autos: AutoGenSet {
            maps,
            trusted: Vec::new(),
        },
    })
}

/// `Some(p)` when every non-identity element has the same prime order `p`
/// and the group is abelian.
fn elementary_prime(group: &FiniteGroup) -> Option<u32> {
    if group.order() == 1 || !group.is_abelian() {
        return None;
    }
    let p = group.elem_order(group.generators()[0]);
    (p <= u32::MAX as u64
        && is_prime(p as u32)
        && group.ids().skip(1).all(|x| group.elem_order(x) == p))
    .then_some(p as u32)
}

/// Automorphism generators for a group known only by its multiplication.
/// Elementary abelian groups get GL(k,p) on a basis; other groups up to
/// `aut_limit` are searched exhaustively; larger ones get inner
/// automorphisms only. The flag is true when the set generates `Aut(G)`.
pub fn abstract_autogens(
    group: &FiniteGroup,
    aut_limit: usize,
) -> Result<(AutoGenSet, bool), BruteError> {
    if group.order() == 1 {
        return Ok((AutoGenSet::default(), true));
    }
    if let Some(p) = elementary_prime(group) {
        let basis = group.greedy_generators(&group.ids().collect::<Vec<_>>());
        let k = basis.len();
        // coordinates: element id of every vector of exponents
        let mut of_coords = vec![0u32; group.order()];
        let mut coords = vec![vec![0u16; k]; group.order()];
        for idx in 0..group.order() {
            let mut rest = idx;
            let mut x = 0u32;
            let mut v = vec![0u16; k];
            for (j, &b) in basis.iter().enumerate() {
                let e = rest % p as usize;
                rest /= p as usize;
                v[j] = e as u16;
                x = group.mul(x, group.pow(b, e as u64));
            }
            of_coords[idx] = x;
            coords[x as usize] = v;
        }
        let index = |v: &[u16]| {
            v.iter()
                .rev()
                .fold(0usize, |acc, &e| acc * p as usize + e as usize)
        };
        let field = Field::new(p, 1).expect("p is prime");
        let descriptors = gl_generators(&field, k)
            .into_iter()
            .map(|m| {
                let images = group
                    .ids()
                    .map(|x| {
                        let v = &coords[x as usize];
                        let w: Vec<u16> = (0..k)
                            .map(|r| {
                                (0..k).fold(0u16, |acc, c| {
                                    field.add(acc, field.mul(m.get(r, c), v[c]))
                                })
                            })
                            .collect();
                        of_coords[index(&w)]
                    })
                    .collect();
                AutoDescriptor::ExplicitImages(Arc::new(images))
            })
            .collect();
        let mut set = AutoGenSet::default();
        set.extend(group, descriptors)
            .expect("linear maps are automorphisms");
        return Ok((set, true));
    }
    if group.order() <= aut_limit {
        return Ok((brute_force_aut(group, aut_limit)?.autos, true));
    }
    Ok((AutoGenSet::inner(group), false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{autogens_for, build, parse_spec};
    use crate::orbit::{element_signatures, orbit_closure};

    fn group(text: &str) -> Arc<FiniteGroup> {
        build(&parse_spec(text).unwrap()).unwrap().group
    }

    #[test]
    fn aut_orders() {
        assert_eq!(brute_force_aut(&group("C(1)"), 10).unwrap().order, 1);
        assert_eq!(brute_force_aut(&group("EA(2,2)"), 10).unwrap().order, 6);
        assert_eq!(brute_force_aut(&group("EA(2,3)"), 10).unwrap().order, 168);
        assert_eq!(brute_force_aut(&group("C(12)"), 20).unwrap().order, 4);
        assert_eq!(brute_force_aut(&group("S(4)"), 30).unwrap().order, 24);
        assert_eq!(brute_force_aut(&group("A(5)"), 60).unwrap().order, 120);
        assert_eq!(brute_force_aut(&group("SL(2,3)"), 60).unwrap().order, 24);
        assert!(matches!(
            brute_force_aut(&group("A(5)"), 59),
            Err(BruteError::TooLarge { .. })
        ));
    }

    // every S5-conjugation of A5 is among the maps found
    #[test]
    fn finds_formula_automorphisms() {
        let c = build(&parse_spec("A(5)").unwrap()).unwrap();
        let exact = brute_force_aut(&c.group, 60).unwrap();
        for m in autogens_for(&c).unwrap().maps {
            let t: Vec<u32> = exact.tuple.iter().map(|&x| m.apply(x)).collect();
            assert!(exact.tuple_images.binary_search(&t).is_ok());
        }
    }

    #[test]
    fn found_maps_preserve_signatures() {
        for text in ["A(5)", "PSL(2,7)", "SL(2,3)", "DP(C(2),S(3))"] {
            let g = group(text);
            let sig = element_signatures(&g, 3);
            let exact = brute_force_aut(&g, 200).unwrap();
            for m in &exact.autos.maps {
                assert!(
                    g.ids().all(|x| sig[x as usize] == sig[m.apply(x) as usize]),
                    "{text}"
                );
            }
        }
    }

    #[test]
    fn elementary_abelian_is_transitive_on_nonidentity() {
        let g = group("EA(2,6)");
        let (set, complete) = abstract_autogens(&g, 0).unwrap();
        assert!(complete);
        assert_eq!(orbit_closure(&g, &set).block_count(), 2);
        let g = group("EA(3,3)");
        let (set, _) = abstract_autogens(&g, 0).unwrap();
        assert_eq!(orbit_closure(&g, &set).block_count(), 2);
    }
}
