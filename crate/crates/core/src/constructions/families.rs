use std::sync::Arc;

use super::{Construction, ConstructionError, Family, GroupSpec, LinearKind};
use crate::field::Field;
use crate::group::{default_order_cap, AffinePair, FiniteGroup, GroupElem, GroupError};
use crate::linalg::{gl_generators, sl_generators, Mat};
use crate::perm::Perm;

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `|SL(n,q)| = q^(n(n-1)/2) * prod_{i=2..n} (q^i - 1)`.
pub fn sl_order(n: u32, q: u32) -> u128 {
    let q = q as u128;
    let mut order = q.pow(n * (n - 1) / 2);
    for i in 2..=n {
        order *= q.pow(i) - 1;
    }
    order
}

pub fn gl_order(n: u32, q: u32) -> u128 {
    sl_order(n, q) * (q as u128 - 1)
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Order predicted by the standard formula for each family, saturating.
pub fn expected_order(spec: &GroupSpec) -> u128 {
    match spec {
        GroupSpec::Sl { n, q } => sl_order(*n, *q),
        GroupSpec::Gl { n, q } => gl_order(*n, *q),
        GroupSpec::Psl { n, q } => sl_order(*n, *q) / gcd(*n as u128, *q as u128 - 1),
        GroupSpec::Pgl { n, q } => sl_order(*n, *q),
        GroupSpec::Gmf { m, q } => sl_order(2, *q).saturating_mul((*q as u128).pow(2 * m)),
        GroupSpec::Asl { q } => sl_order(2, *q) * (*q as u128).pow(2),
        GroupSpec::Ea { p, k } => (*p as u128).pow(*k),
        GroupSpec::Cyclic { n } => *n as u128,
        GroupSpec::Alternating { n } => (factorial(*n) / 2).max(1),
        GroupSpec::Symmetric { n } => factorial(*n),
        GroupSpec::Pow { base, m } => {
            let b = expected_order(base);
            (0..*m).fold(1u128, |acc, _| acc.saturating_mul(b))
        }
        GroupSpec::Dp(specs) => specs
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(expected_order(s))),
    }
}

pub fn build(spec: &GroupSpec) -> Result<Construction, ConstructionError> {
    build_with_cap(spec, default_order_cap())
}

/// Enumerates the group and checks its order against [`expected_order`].
/// Groups predicted to exceed `cap` fail before any enumeration.
pub fn build_with_cap(spec: &GroupSpec, cap: usize) -> Result<Construction, ConstructionError> {
    let expected = expected_order(spec);
    if expected > cap as u128 {
        return Err(GroupError::CapExceeded(cap).into());
    }
    let (group, family) = match spec {
        GroupSpec::Sl { n, q } => linear(LinearKind::Sl, *n, *q, cap)?,
        GroupSpec::Gl { n, q } => linear(LinearKind::Gl, *n, *q, cap)?,
        GroupSpec::Psl { n, q } => linear(LinearKind::Psl, *n, *q, cap)?,
        GroupSpec::Pgl { n, q } => linear(LinearKind::Pgl, *n, *q, cap)?,
        GroupSpec::Gmf { m, q } => affine(*m as usize, *q, cap)?,
        GroupSpec::Asl { q } => affine(1, *q, cap)?,
        GroupSpec::Ea { p, k } => elementary(*p, *k as usize, cap)?,
        GroupSpec::Cyclic { n } => cyclic(*n, cap)?,
        GroupSpec::Alternating { n } => {
            let g = FiniteGroup::closure(perm_id(*n), &alternating_generators(*n as usize), cap)?;
            (g, Family::Alternating { n: *n as usize })
        }
        GroupSpec::Symmetric { n } => {
            let g = FiniteGroup::closure(perm_id(*n), &symmetric_generators(*n as usize), cap)?;
            (g, Family::Symmetric { n: *n as usize })
        }
        GroupSpec::Pow { base, m } => {
            let factor = build_with_cap(base, cap)?;
            product(vec![factor; *m as usize], cap)?
        }
        GroupSpec::Dp(specs) => {
            let factors = specs
                .iter()
                .map(|s| build_with_cap(s, cap))
                .collect::<Result<Vec<_>, _>>()?;
            product(factors, cap)?
        }
    };
    if group.order() as u128 != expected {
        return Err(ConstructionError::OrderMismatch {
            spec: spec.to_string(),
            expected,
            got: group.order(),
        });
    }
    Ok(Construction {
        spec: spec.clone(),
        group: Arc::new(group),
        family,
    })
}

fn linear(
    kind: LinearKind,
    n: u32,
    q: u32,
    cap: usize,
) -> Result<(FiniteGroup, Family), ConstructionError> {
    let field = Field::of_order(q)?;
    let n = n as usize;
    let mats = match kind {
        LinearKind::Sl | LinearKind::Psl => sl_generators(&field, n),
        LinearKind::Gl | LinearKind::Pgl => gl_generators(&field, n),
    };
    let wrap = |m: Mat| {
        if kind.is_projective() {
            GroupElem::projective(m)
        } else {
            GroupElem::matrix(m)
        }
    };
    let identity = wrap(Mat::identity(&field, n));
    let gens: Vec<GroupElem> = mats.into_iter().map(wrap).collect();
    let g = FiniteGroup::closure(identity, &gens, cap)?;
    Ok((g, Family::Linear { kind, n, field }))
}

/// `{(X, Y) : X in SL(2,q), Y in M(2 x m, q)}` generated by `(X, 0)` for
/// the SL generators and `(I, E_{1j})` for each column `j`.
fn affine(m: usize, q: u32, cap: usize) -> Result<(FiniteGroup, Family), ConstructionError> {
    let field = Field::of_order(q)?;
    let id2 = Mat::identity(&field, 2);
    let zero = Mat::zero(&field, 2, m);
    let mut gens: Vec<GroupElem> = sl_generators(&field, 2)
        .into_iter()
        .map(|x| GroupElem::Affine(AffinePair::new(x, zero.clone())))
        .collect();
    for j in 0..m {
        let mut y = zero.clone();
        y.set(0, j, 1);
        gens.push(GroupElem::Affine(AffinePair::new(id2.clone(), y)));
    }
    let identity = GroupElem::Affine(AffinePair::new(id2, zero));
    let g = FiniteGroup::closure(identity, &gens, cap)?;
    Ok((g, Family::Affine { m, field }))
}

fn elementary(p: u32, k: usize, cap: usize) -> Result<(FiniteGroup, Family), ConstructionError> {
    let zero = GroupElem::Zn {
        value: 0,
        modulus: p,
    };
    let identity = GroupElem::Tuple(vec![zero.clone(); k]);
    let gens: Vec<GroupElem> = (0..k)
        .map(|i| {
            let mut parts = vec![zero.clone(); k];
            parts[i] = GroupElem::Zn {
                value: 1,
                modulus: p,
            };
            GroupElem::Tuple(parts)
        })
        .collect();
    let g = FiniteGroup::closure(identity, &gens, cap)?;
    Ok((g, Family::Elementary { p, k }))
}

fn cyclic(n: u32, cap: usize) -> Result<(FiniteGroup, Family), ConstructionError> {
    let identity = GroupElem::Zn {
        value: 0,
        modulus: n,
    };
    let gen = GroupElem::Zn {
        value: 1 % n,
        modulus: n,
    };
    let g = FiniteGroup::closure(identity, &[gen], cap)?;
    Ok((g, Family::Cyclic { n }))
}

fn perm_id(n: u32) -> GroupElem {
    GroupElem::Perm(Perm::identity(n as usize))
}

fn cycle(n: usize, points: &[u8]) -> GroupElem {
    GroupElem::Perm(Perm::from_cycles(n, &[points]))
}

/// `(1 2 ... n)` and `(n-2 n-1 n)` for odd `n`; `(1 2 3)` and
/// `(2 3 ... n)` for even `n`.
pub(crate) fn alternating_generators(n: usize) -> Vec<GroupElem> {
    if n < 3 {
        return Vec::new();
    }
    let all: Vec<u8> = (1..=n as u8).collect();
    if n % 2 == 1 {
        let mut gens = vec![cycle(n, &all)];
        if n > 3 {
            gens.push(cycle(n, &all[n - 3..]));
        }
        gens
    } else {
        vec![cycle(n, &[1, 2, 3]), cycle(n, &all[1..])]
    }
}

/// `(1 2 ... n)` and `(1 2)`.
pub(crate) fn symmetric_generators(n: usize) -> Vec<GroupElem> {
    if n < 2 {
        return Vec::new();
    }
    let all: Vec<u8> = (1..=n as u8).collect();
    vec![cycle(n, &all), cycle(n, &[1, 2])]
}

fn product(
    factors: Vec<Construction>,
    cap: usize,
) -> Result<(FiniteGroup, Family), ConstructionError> {
    let identities: Vec<GroupElem> = factors.iter().map(|f| f.group.element(0).clone()).collect();
    let mut gens = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        for g in f.group.generator_elements() {
            let mut parts = identities.clone();
            parts[i] = g;
            gens.push(GroupElem::Tuple(parts));
        }
    }
    let g = FiniteGroup::closure(GroupElem::Tuple(identities), &gens, cap)?;
    Ok((g, Family::Product { factors }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::parse_spec;

    fn order_of(text: &str) -> usize {
        build(&parse_spec(text).unwrap()).unwrap().order()
    }

    #[test]
    fn order_formulas() {
        assert_eq!(sl_order(2, 4), 60);
        assert_eq!(sl_order(3, 4), 60480);
        assert_eq!(gl_order(2, 3), 48);
        assert_eq!(expected_order(&parse_spec("PSL(3,4)").unwrap()), 20160);
        assert_eq!(expected_order(&parse_spec("PSL(2,9)").unwrap()), 360);
        assert_eq!(expected_order(&parse_spec("GMF(2,4)").unwrap()), 15360);
        assert_eq!(expected_order(&parse_spec("GMF(3,4)").unwrap()), 245760);
        assert_eq!(expected_order(&parse_spec("A(1)").unwrap()), 1);
    }

    #[test]
    fn small_closures_match_formulas() {
        for (text, order) in [
            ("PSL(2,4)", 60),
            ("PSL(2,7)", 168),
            ("SL(2,3)", 24),
            ("GL(2,3)", 48),
            ("PGL(2,5)", 120),
            ("ASL(2,4)", 960),
            ("EA(2,3)", 8),
            ("EA(3,2)", 9),
            ("C(12)", 12),
            ("C(1)", 1),
            ("A(5)", 60),
            ("A(6)", 360),
            ("A(3)", 3),
            ("A(2)", 1),
            ("S(4)", 24),
            ("S(1)", 1),
            ("POW(A(5),2)", 3600),
            ("DP(C(2),S(3))", 12),
        ] {
            assert_eq!(order_of(text), order, "{text}");
        }
    }

    #[test]
    fn cap_is_checked_before_enumeration() {
        let spec = parse_spec("PSL(3,4)").unwrap();
        assert!(matches!(
            build_with_cap(&spec, 1000),
            Err(ConstructionError::Group(GroupError::CapExceeded(1000)))
        ));
    }
}
