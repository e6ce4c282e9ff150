use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use super::families::{alternating_generators, symmetric_generators};
use super::gmf::gamma_conj;
use super::{Construction, Family, LinearKind};
use crate::field::Field;
use crate::group::{AffinePair, FiniteGroup, GroupElem};
use crate::linalg::{gl_generators, Mat};
use crate::perm::Perm;

/// How many random elements a formula is re-evaluated on after the map has
/// been extended from generator images.
const SPOT_CHECKS: usize = 64;

/// A recipe for one automorphism.
#[derive(Clone)]
pub enum AutoDescriptor {
    /// Conjugation by the group element with this id.
    InnerConj(u32),
    /// Conjugation by an element of a larger group of the same shape.
    AmbientConj(GroupElem),
    /// A matrix acting on tuples of residues mod p as a column vector.
    Linear(Mat),
    /// `x -> u x` on `Z/n`.
    UnitMul(u32),
    /// Entrywise `x -> x^(p^k)`.
    FieldAuto(u32),
    /// Inverse transpose.
    GraphAuto,
    /// Conjugation by `[[A, B], [0, C]]`.
    GammaConj { a: Mat, b: Mat, c: Mat },
    /// Images of the group's generators, in generator order.
    GeneratorImages(Vec<GroupElem>),
    /// The image id of every element.
    ExplicitImages(Arc<Vec<u32>>),
    /// An automorphism of one direct factor.
    Lifted {
        factor: usize,
        base: Arc<FiniteGroup>,
        inner: Box<AutoDescriptor>,
    },
    /// Moves factor `i` to position `perm[i]`.
    FactorPermutation(Vec<usize>),
}

impl fmt::Display for AutoDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutoDescriptor::InnerConj(g) => write!(f, "inner(#{g})"),
            AutoDescriptor::AmbientConj(a) => write!(f, "conj({a})"),
            AutoDescriptor::Linear(m) => write!(f, "linear({m})"),
            AutoDescriptor::UnitMul(u) => write!(f, "mul({u})"),
            AutoDescriptor::FieldAuto(k) => write!(f, "frobenius^{k}"),
            AutoDescriptor::GraphAuto => write!(f, "inverse-transpose"),
            AutoDescriptor::GammaConj { a, b, c } => write!(f, "gamma({a}, {b}, {c})"),
            AutoDescriptor::GeneratorImages(imgs) => {
                write!(f, "images[")?;
                for (i, x) in imgs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            AutoDescriptor::ExplicitImages(v) => write!(f, "table({} elements)", v.len()),
            AutoDescriptor::Lifted { factor, inner, .. } => write!(f, "factor{factor}:{inner}"),
            AutoDescriptor::FactorPermutation(p) => write!(f, "permute{p:?}"),
        }
    }
}

impl fmt::Debug for AutoDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("{0}: image of a generator lies outside the group")]
    NotClosed(String),
    #[error("{0}: map is not a bijection")]
    NotBijective(String),
    #[error("{0}: map is not a homomorphism")]
    NotHomomorphism(String),
    #[error("{0}: formula disagrees with the map extended from generator images")]
    FormulaMismatch(String),
    #[error("{0}: descriptor does not apply to elements of this shape")]
    WrongShape(String),
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
}

fn tuple_parts(x: &GroupElem) -> Option<&[GroupElem]> {
    match x {
        GroupElem::Tuple(p) => Some(p),
        _ => None,
    }
}

impl AutoDescriptor {
    /// The image of one element by the descriptor's own formula. `None`
    /// when the formula does not apply to `x`.
    pub fn apply(&self, group: &FiniteGroup, x: &GroupElem) -> Option<GroupElem> {
        match self {
            AutoDescriptor::InnerConj(g) => Some(x.conjugate_by(group.element(*g))),
            AutoDescriptor::AmbientConj(a) => (a.shape() == x.shape()).then(|| x.conjugate_by(a)),
            AutoDescriptor::Linear(m) => {
                let parts = tuple_parts(x)?;
                let p = m.field().order();
                if parts.len() != m.cols() {
                    return None;
                }
                let v: Vec<u16> = parts
                    .iter()
                    .map(|e| match e {
                        GroupElem::Zn { value, modulus } if *modulus == p => Some(*value as u16),
                        _ => None,
                    })
                    .collect::<Option<_>>()?;
                let col = Mat::from_vec(m.field(), v.len(), 1, v);
                let out = m.mul(&col).ok()?;
                Some(GroupElem::Tuple(
                    out.data()
                        .iter()
                        .map(|&value| GroupElem::Zn {
                            value: value as u32,
                            modulus: p,
                        })
                        .collect(),
                ))
            }
            AutoDescriptor::UnitMul(u) => match x {
                GroupElem::Zn { value, modulus } => Some(GroupElem::Zn {
                    value: ((*value as u64 * *u as u64) % *modulus as u64) as u32,
                    modulus: *modulus,
                }),
                _ => None,
            },
            AutoDescriptor::FieldAuto(k) => match x {
                GroupElem::Mat { mat, projective } => Some(GroupElem::Mat {
                    mat: mat.frobenius(*k),
                    projective: *projective,
                }),
                GroupElem::Affine(a) => Some(GroupElem::Affine(AffinePair {
                    x: a.x.frobenius(*k),
                    y: a.y.frobenius(*k),
                })),
                _ => None,
            },
            AutoDescriptor::GraphAuto => match x {
                GroupElem::Mat { mat, projective } => {
                    let m = mat.inv().ok()?.transpose();
                    Some(if *projective {
                        GroupElem::projective(m)
                    } else {
                        GroupElem::matrix(m)
                    })
                }
                _ => None,
            },
            AutoDescriptor::GammaConj { a, b, c } => match x {
                GroupElem::Affine(p) if p.width() == c.rows() => {
                    Some(GroupElem::Affine(gamma_conj(p, a, b, c)))
                }
                _ => None,
            },
            AutoDescriptor::GeneratorImages(imgs) => {
                let id = group.id_of(x)?;
                let mut acc = imgs
                    .first()
                    .map_or_else(|| x.clone(), |g| g.identity_like());
                for &i in &group.word(id) {
                    acc = acc.mul(imgs.get(i as usize)?);
                }
                Some(acc)
            }
            AutoDescriptor::ExplicitImages(v) => {
                let id = group.id_of(x)?;
                Some(group.element(*v.get(id as usize)?).clone())
            }
            AutoDescriptor::Lifted {
                factor,
                base,
                inner,
            } => {
                let parts = tuple_parts(x)?;
                let mut out = parts.to_vec();
                out[*factor] = inner.apply(base, parts.get(*factor)?)?;
                Some(GroupElem::Tuple(out))
            }
            AutoDescriptor::FactorPermutation(perm) => {
                let parts = tuple_parts(x)?;
                if parts.len() != perm.len() {
                    return None;
                }
                let mut out = parts.to_vec();
                for (i, &j) in perm.iter().enumerate() {
                    out[j] = parts[i].clone();
                }
                Some(GroupElem::Tuple(out))
            }
        }
    }
}

/// Extends generator images (in generator order) along the breadth-first
/// tree: `phi(x g_i) = phi(x) phi(g_i)`.
pub fn extend_generator_images(group: &FiniteGroup, gen_images: &[u32]) -> Vec<u32> {
    let words: Vec<Vec<u8>> = gen_images.iter().map(|&y| group.word(y)).collect();
    let mut images = vec![0u32; group.order()];
    for x in 1..group.order() as u32 {
        let (p, i) = group.tree_edge(x);
        images[x as usize] = group.right_mul_word(images[p as usize], &words[i]);
    }
    images
}

/// Checks that `images` is a bijection with
/// `images[x g_i] = images[x] images[g_i]` for every element and generator.
fn check_automorphism(group: &FiniteGroup, images: &[u32], label: &str) -> Result<(), AutError> {
    let n = group.order();
    let mut seen = vec![false; n];
    for &y in images {
        if std::mem::replace(&mut seen[y as usize], true) {
            return Err(AutError::NotBijective(label.to_string()));
        }
    }
    for (i, &g) in group.generators().iter().enumerate() {
        let word = group.word(images[g as usize]);
        let ok = (0..n as u32).into_par_iter().all(|x| {
            images[group.right_gen(x, i) as usize]
                == group.right_mul_word(images[x as usize], &word)
        });
        if !ok {
            return Err(AutError::NotHomomorphism(label.to_string()));
        }
    }
    Ok(())
}

/// A verified automorphism, stored as the image id of every element.
#[derive(Clone, Debug)]
pub struct AutoMap {
    descriptor: AutoDescriptor,
    images: Vec<u32>,
}

impl AutoMap {
    /// Evaluates the descriptor on the generators, extends to the whole
    /// group, checks the automorphism property exhaustively and re-checks
    /// the formula on a sample of elements.
    pub fn new(group: &FiniteGroup, descriptor: AutoDescriptor) -> Result<AutoMap, AutError> {
        let label = descriptor.to_string();
        if let AutoDescriptor::InnerConj(g) = descriptor {
            let images = match group.generators().iter().position(|&s| s == g) {
                Some(i) => group.ids().map(|x| group.conj_gen(x, i)).collect(),
                None => group.ids().map(|x| group.conj(x, g)).collect(),
            };
            return Ok(AutoMap { descriptor, images });
        }
        if let AutoDescriptor::ExplicitImages(v) = &descriptor {
            if v.len() != group.order() || v.iter().any(|&y| y as usize >= group.order()) {
                return Err(AutError::NotBijective(label));
            }
            let images = v.as_ref().clone();
            check_automorphism(group, &images, &label)?;
            return Ok(AutoMap { descriptor, images });
        }
        if let AutoDescriptor::GeneratorImages(imgs) = &descriptor {
            if imgs.len() != group.generators().len() {
                return Err(AutError::ImageCount {
                    expected: group.generators().len(),
                    got: imgs.len(),
                });
            }
        }
        let gen_images = group
            .generator_elements()
            .iter()
            .map(|g| {
                let y = descriptor
                    .apply(group, g)
                    .ok_or_else(|| AutError::WrongShape(label.clone()))?;
                group
                    .id_of(&y)
                    .ok_or_else(|| AutError::NotClosed(label.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let images = extend_generator_images(group, &gen_images);
        check_automorphism(group, &images, &label)?;

        let mut rng = ChaCha8Rng::seed_from_u64(group.order() as u64);
        for _ in 0..SPOT_CHECKS.min(group.order()) {
            let x = rng.gen_range(0..group.order() as u32);
            let y = descriptor.apply(group, group.element(x));
            if y.as_ref() != Some(group.element(images[x as usize])) {
                return Err(AutError::FormulaMismatch(label));
            }
        }
        Ok(AutoMap { descriptor, images })
    }

    pub fn descriptor(&self) -> &AutoDescriptor {
        &self.descriptor
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i as u32 == y)
    }
}

/// Verified automorphisms together with the external facts needed to read
/// their orbits as the full automorphism orbits.
#[derive(Clone, Debug, Default)]
pub struct AutoGenSet {
    pub maps: Vec<AutoMap>,
    /// Each entry names a result the generator set relies on for
    /// completeness. Empty means no claim beyond what was verified.
    pub trusted: Vec<String>,
}

impl AutoGenSet {
    /// Conjugation by each generator.
    pub fn inner(group: &FiniteGroup) -> AutoGenSet {
        AutoGenSet {
            maps: group
                .generators()
                .iter()
                .map(|&g| AutoMap::new(group, AutoDescriptor::InnerConj(g)).unwrap())
                .collect(),
            trusted: Vec::new(),
        }
    }

    /// Verifies and appends the descriptors.
    pub fn extend(
        &mut self,
        group: &FiniteGroup,
        descriptors: Vec<AutoDescriptor>,
    ) -> Result<(), AutError> {
        let maps = descriptors
            .into_par_iter()
            .map(|d| AutoMap::new(group, d))
            .collect::<Result<Vec<_>, _>>()?;
        self.maps.extend(maps);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// The outer automorphism of S6 and A6 as images of the standard
/// generators, 0-based point images.
fn exceptional_six(alternating: bool) -> Vec<GroupElem> {
    let imgs: [[u8; 6]; 2] = if alternating {
        [[1, 3, 5, 0, 2, 4], [1, 4, 0, 2, 3, 5]]
    } else {
        [[2, 3, 5, 1, 4, 0], [5, 2, 1, 4, 3, 0]]
    };
    imgs.iter()
        .map(|v| GroupElem::Perm(Perm::from_images(v.to_vec()).unwrap()))
        .collect()
}

/// Non-inner automorphism descriptors and completeness assumptions for a
/// construction.
fn outer_descriptors(c: &Construction) -> (Vec<AutoDescriptor>, Vec<String>) {
    let mut out = Vec::new();
    let mut trusted = Vec::new();
    match &c.family {
        Family::Linear { kind, n, field } => {
            let w = field.primitive();
            if w != 1 {
                let mut d = vec![1u16; *n];
                d[0] = w;
                let m = Mat::diag(field, &d);
                out.push(AutoDescriptor::AmbientConj(if kind.is_projective() {
                    GroupElem::projective(m)
                } else {
                    GroupElem::matrix(m)
                }));
            }
            if field.degree() > 1 {
                out.push(AutoDescriptor::FieldAuto(1));
            }
            if *n >= 3 {
                out.push(AutoDescriptor::GraphAuto);
            }
            match kind {
                LinearKind::Psl | LinearKind::Sl => trusted.push(format!(
                    "Aut({}) is generated by inner, diagonal, field{} automorphisms",
                    c.spec,
                    if *n >= 3 { " and graph" } else { "" }
                )),
                LinearKind::Pgl => trusted.push(format!(
                    "Aut({}) is generated by inner, field{} automorphisms",
                    c.spec,
                    if *n >= 3 { " and graph" } else { "" }
                )),
                // central automorphisms are not generated; hi may exceed omega
                LinearKind::Gl => {}
            }
        }
        Family::Affine { m, field } => {
            let id2 = Mat::identity(field, 2);
            let idm = Mat::identity(field, *m);
            let zero = Mat::zero(field, 2, *m);
            for a in gl_generators(field, 2) {
                out.push(AutoDescriptor::GammaConj {
                    a,
                    b: zero.clone(),
                    c: idm.clone(),
                });
            }
            for cm in gl_generators(field, *m) {
                out.push(AutoDescriptor::GammaConj {
                    a: id2.clone(),
                    b: zero.clone(),
                    c: cm,
                });
            }
            for r in 0..2 {
                for j in 0..*m {
                    let mut b = zero.clone();
                    b.set(r, j, 1);
                    out.push(AutoDescriptor::GammaConj {
                        a: id2.clone(),
                        b,
                        c: idm.clone(),
                    });
                }
            }
            if field.degree() > 1 {
                out.push(AutoDescriptor::FieldAuto(1));
            }
            trusted.push(format!(
                "Aut({}) is induced by the upper-triangular block group and field automorphisms",
                c.spec
            ));
        }
        Family::Elementary { p, k } => {
            let f = Field::new(*p, 1).expect("p is prime");
            out.extend(
                gl_generators(&f, *k)
                    .into_iter()
                    .map(AutoDescriptor::Linear),
            );
        }
        Family::Cyclic { n } => {
            // a generating set of the unit group
            let n = *n as u64;
            let mut reached = vec![false; n as usize];
            reached[1 % n as usize] = true;
            let mut elems = vec![1 % n];
            for u in 2..n {
                if gcd(u, n) != 1 || reached[u as usize] {
                    continue;
                }
                out.push(AutoDescriptor::UnitMul(u as u32));
                let mut k = 0;
                while k < elems.len() {
                    let y = elems[k] * u % n;
                    if !reached[y as usize] {
                        reached[y as usize] = true;
                        elems.push(y);
                    }
                    k += 1;
                }
            }
        }
        Family::Alternating { n } => {
            if *n >= 3 {
                let t = Perm::from_cycles(*n, &[&[1, 2]]);
                out.push(AutoDescriptor::AmbientConj(GroupElem::Perm(t)));
            }
            if *n == 6 {
                debug_assert_eq!(c.group.generator_elements(), alternating_generators(6));
                out.push(AutoDescriptor::GeneratorImages(exceptional_six(true)));
            }
            if *n >= 4 {
                trusted.push(format!(
                    "Aut(A{n}) is generated by S{n}-conjugation{}",
                    if *n == 6 {
                        " and one exceptional outer automorphism"
                    } else {
                        ""
                    }
                ));
            }
        }
        Family::Symmetric { n } => {
            if *n == 6 {
                debug_assert_eq!(c.group.generator_elements(), symmetric_generators(6));
                out.push(AutoDescriptor::GeneratorImages(exceptional_six(false)));
            }
            if *n >= 3 {
                trusted.push(format!(
                    "Aut(S{n}) is generated by inner{} automorphisms",
                    if *n == 6 {
                        " and one exceptional outer"
                    } else {
                        ""
                    }
                ));
            }
        }
        Family::Product { factors } => {
            for (i, f) in factors.iter().enumerate() {
                let (inner, t) = outer_descriptors(f);
                out.extend(inner.into_iter().map(|d| AutoDescriptor::Lifted {
                    factor: i,
                    base: f.group.clone(),
                    inner: Box::new(d),
                }));
                for s in t {
                    if !trusted.contains(&s) {
                        trusted.push(s);
                    }
                }
            }
            let k = factors.len();
            // transpositions of adjacent equal factors and, within each run
            // of equal factors, the full cycle
            let mut start = 0;
            while start < k {
                let mut end = start + 1;
                while end < k && factors[end].spec == factors[start].spec {
                    end += 1;
                }
                if end - start >= 2 {
                    let mut swap: Vec<usize> = (0..k).collect();
                    swap.swap(start, start + 1);
                    out.push(AutoDescriptor::FactorPermutation(swap));
                    if end - start >= 3 {
                        let mut cyc: Vec<usize> = (0..k).collect();
                        for (i, slot) in cyc.iter_mut().enumerate().take(end).skip(start) {
                            *slot = if i + 1 == end { start } else { i + 1 };
                        }
                        out.push(AutoDescriptor::FactorPermutation(cyc));
                    }
                }
                start = end;
            }
            if k > 1 {
                trusted.push(
                    "automorphisms of a product of non-abelian simple factors permute the factors"
                        .to_string(),
                );
            }
        }
    }
    (out, trusted)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Inner automorphisms plus the family-specific outer generators, each
/// verified on the enumerated group.
pub fn autogens_for(c: &Construction) -> Result<AutoGenSet, AutError> {
    let mut set = AutoGenSet::inner(&c.group);
    let (outer, trusted) = outer_descriptors(c);
    set.extend(&c.group, outer)?;
    set.trusted = trusted;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build, parse_spec};

    fn gens(text: &str) -> (Construction, AutoGenSet) {
        let c = build(&parse_spec(text).unwrap()).unwrap();
        let a = autogens_for(&c).unwrap();
        (c, a)
    }

    #[test]
    fn families_verify() {
        for text in [
            "PSL(2,4)",
            "PSL(2,8)",
            "SL(2,4)",
            "GL(2,3)",
            "PGL(2,5)",
            "PSL(3,2)",
            "ASL(2,4)",
            "EA(2,3)",
            "EA(3,2)",
            "C(12)",
            "A(5)",
            "A(6)",
            "S(6)",
            "S(4)",
            "POW(A(5),2)",
            "DP(A(5),A(5),A(5))",
            "DP(C(3),S(3))",
        ] {
            let (c, a) = gens(text);
            assert!(a.len() >= c.group.generators().len(), "{text}");
        }
    }

    #[test]
    fn exceptional_six_is_outer() {
        // an inner automorphism of S6 preserves cycle type; the exceptional
        // one sends a transposition to a triple transposition
        let (c, a) = gens("S(6)");
        let outer = a
            .maps
            .iter()
            .find(|m| matches!(m.descriptor(), AutoDescriptor::GeneratorImages(_)))
            .unwrap();
        let t = c
            .group
            .id_of(&GroupElem::Perm(Perm::from_cycles(6, &[&[1, 2]])))
            .unwrap();
        let image = c.group.element(outer.apply(t)).as_perm().unwrap().cycles();
        assert_eq!(image.len(), 3);
    }

    #[test]
    fn rejects_non_automorphisms() {
        let c = build(&parse_spec("S(4)").unwrap()).unwrap();
        let bad = AutoDescriptor::GeneratorImages(vec![
            GroupElem::Perm(Perm::from_cycles(4, &[&[1, 2]])),
            GroupElem::Perm(Perm::from_cycles(4, &[&[1, 2]])),
        ]);
        assert!(AutoMap::new(&c.group, bad).is_err());
        let wrong_count = AutoDescriptor::GeneratorImages(vec![]);
        assert!(matches!(
            AutoMap::new(&c.group, wrong_count),
            Err(AutError::ImageCount { .. })
        ));
        let not_bijective = AutoDescriptor::ExplicitImages(Arc::new(vec![0; 24]));
        assert!(matches!(
            AutoMap::new(&c.group, not_bijective),
            Err(AutError::NotBijective(_))
        ));
    }
}
