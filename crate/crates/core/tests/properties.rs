use std::sync::OnceLock;

use autorbit::constructions::{autogens_for, build, gmf, parse_spec, AutoGenSet, Construction};
use autorbit::field::Field;
use autorbit::group::quotient;
use autorbit::orbit::canonical::apply_chain;
use autorbit::orbit::{
    element_signatures, omega, omega_exact, orbit_closure, signature_partition, GmfCanonicalizer,
    OmegaStatus,
};
use proptest::prelude::*;

const SPECS: &[&str] = &[
    "A(4)",
    "A(5)",
    "S(4)",
    "S(5)",
    "SL(2,3)",
    "PSL(2,7)",
    "ASL(2,4)",
    "GL(2,3)",
    "EA(3,2)",
    "C(12)",
    "DP(S(3),C(4))",
];

struct Sample {
    c: Construction,
    autos: AutoGenSet,
}

fn samples() -> &'static [Sample] {
    static CELL: OnceLock<Vec<Sample>> = OnceLock::new();
    CELL.get_or_init(|| {
        SPECS
            .iter()
            .map(|s| {
                let c = build(&parse_spec(s).unwrap()).unwrap();
                let autos = autogens_for(&c).unwrap();
                Sample { c, autos }
            })
            .collect()
    })
}

fn gmf24() -> &'static Construction {
    static CELL: OnceLock<Construction> = OnceLock::new();
    CELL.get_or_init(|| build(&parse_spec("GMF(2,4)").unwrap()).unwrap())
}

fn divisor_count(n: u32) -> usize {
    (1..=n).filter(|d| n % d == 0).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orbits_refine_signatures(i in 0..SPECS.len()) {
        let s = &samples()[i];
        let o = omega(&s.c.group, &s.autos, 2);
        prop_assert!(o.lo <= o.hi);
        prop_assert!(o.upper.refines(&o.lower));
        let l1 = signature_partition(&s.c.group, 1);
        let l2 = signature_partition(&s.c.group, 2);
        let l3 = signature_partition(&s.c.group, 3);
        prop_assert!(l3.refines(&l2) && l2.refines(&l1));
        prop_assert!(s.c.group.conjugacy_classes().refines(&orbit_closure(&s.c.group, &s.autos)));
    }

    #[test]
    fn automorphisms_preserve_structure(i in 0..SPECS.len(), picks in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<prop::sample::Index>()), 16)) {
        let s = &samples()[i];
        let g = &s.c.group;
        let sig = element_signatures(g, 3);
        for (m, a, b) in picks {
            let m = &s.autos.maps[m.index(s.autos.len())];
            let a = a.index(g.order()) as u32;
            let b = b.index(g.order()) as u32;
            prop_assert_eq!(m.apply(g.mul(a, b)), g.mul(m.apply(a), m.apply(b)));
            prop_assert_eq!(&sig[a as usize], &sig[m.apply(a) as usize]);
        }
    }

    #[test]
    fn class_size_times_centralizer(i in 0..SPECS.len(), x in any::<prop::sample::Index>()) {
        let g = &samples()[i].c.group;
        let x = x.index(g.order()) as u32;
        let classes = g.conjugacy_classes();
        let size = classes.blocks()[classes.block_of(x) as usize].len();
        prop_assert_eq!(size * g.class_centralizer(x).order(), g.order());
        prop_assert_eq!(g.class_centralizer(x).order(), g.centralizer(x).order());
    }

    #[test]
    fn group_axioms(i in 0..SPECS.len(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
        let g = &samples()[i].c.group;
        let [a, b, c] = [a, b, c].map(|x| x.index(g.order()) as u32);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        prop_assert_eq!(g.pow(a, g.elem_order(a)), g.identity());
    }

    #[test]
    fn cosets_multiply_independently_of_representatives(i in 0..SPECS.len(), picks in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<prop::sample::Index>()), 16)) {
        let g = &samples()[i].c.group;
        let n = g.derived_subgroup();
        let q = quotient(g, &n).unwrap();
        prop_assert_eq!(q.order() * n.order(), g.order());
        for (a, x, m) in picks {
            let a = a.index(g.order()) as u32;
            let x = x.index(g.order()) as u32;
            let m = n.members()[m.index(n.order())];
            // (a m) x and a x lie in the same coset
            let lhs = g.mul(g.mul(a, m), x);
            let rhs = g.mul(a, x);
            prop_assert!(n.contains(g.mul(g.inv(rhs), lhs)));
        }
    }

    #[test]
    fn frobenius_is_a_field_automorphism(q in prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81, 128, 256]), a in any::<u16>(), b in any::<u16>()) {
        let f = Field::of_order(q).unwrap();
        let a = a % q as u16;
        let b = b % q as u16;
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius_pow(a, f.degree()), a);
    }

    #[test]
    fn canonical_form_is_idempotent_and_in_orbit(g in 0u32..15360) {
        let c = gmf24();
        let mut canon = GmfCanonicalizer::new(c).unwrap();
        let form = canon.canonical(g);
        prop_assert_eq!(canon.canonical(form.representative).representative, form.representative);
        let p = c.group.element(g).as_affine().unwrap();
        let image = apply_chain(p, &form.chain);
        prop_assert_eq!(c.group.id_of(&autorbit::group::GroupElem::Affine(image)), Some(form.representative));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cyclic_orbits_are_divisors(n in 1u32..=120) {
        let c = build(&parse_spec(&format!("C({n})")).unwrap()).unwrap();
        let o = omega(&c.group, &autogens_for(&c).unwrap(), 2);
        prop_assert_eq!(o.status, OmegaStatus::Certified);
        prop_assert_eq!(o.hi, divisor_count(n));
        let (e, aut) = omega_exact(&c.group, 512, 2).unwrap();
        prop_assert_eq!(e.hi, o.hi);
        prop_assert_eq!(aut.order, (1..=n).filter(|&k| gcd(k, n) == 1).count());
    }

    #[test]
    fn elementary_abelian_has_two_orbits(p in prop::sample::select(vec![2u32, 3, 5, 7]), k in 1u32..=6) {
        prop_assume!(p.pow(k) <= 4096);
        let c = build(&parse_spec(&format!("EA({p},{k})")).unwrap()).unwrap();
        let o = omega(&c.group, &autogens_for(&c).unwrap(), 2);
        prop_assert_eq!(o.value(), Some(2));
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn translations_form_a_normal_abelian_subgroup() {
    let c = gmf24();
    let m = gmf::translations(&c.group);
    assert_eq!(m.order(), 256);
    assert!(c.group.is_normal(&m) && c.group.subgroup_is_abelian(&m));
}
