//! Named batches of checks with a machine-readable report.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::gmf::{gamma_conj, translations};
use crate::constructions::{autogens_for, build, parse_spec, Construction};
use crate::field::Field;
use crate::group::{AffinePair, GroupElem};
use crate::linalg::Mat;
use crate::orbit::{
    canonical::apply_chain, direct_power_orbit_count, omega, omega_exact, signature_partition,
    verify_quotient_bound, CertifiedOmega, GmfCanonicalizer, OmegaStatus, DEFAULT_LEVEL,
};

/// Group order limit used by exhaustive automorphism searches in checks.
const CHECK_AUT_LIMIT: usize = 512;
const EXTENDED_AUT_LIMIT: usize = 1500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The statement being checked, in words.
    pub claim: String,
    pub expected: String,
    pub computed: String,
    pub status: CheckStatus,
    pub trusted: Vec<String>,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub status: CheckStatus,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    /// Fixed-width table, one row per check.
    pub fn table(&self) -> String {
        let w = self
            .checks
            .iter()
            .map(|c| c.id.len())
            .max()
            .unwrap_or(2)
            .max(2);
        let mut out = format!(
            "{:<w$}  {:<7}  {:>8}  {:<24}  computed\n",
            "id", "status", "ms", "expected"
        );
        for c in &self.checks {
            out += &format!(
                "{:<w$}  {:<7}  {:>8}  {:<24}  {}\n",
                c.id,
                c.status.to_string(),
                c.wall_ms,
                c.expected,
                c.computed
            );
        }
        out += &format!("suite {}: {}\n", self.suite, self.status);
        out
    }
}

/// What a check returns: computed value, pass flag, trusted assumptions.
pub struct Outcome {
    pub computed: String,
    pub pass: bool,
    pub trusted: Vec<String>,
}

impl Outcome {
    fn new(computed: impl Into<String>, pass: bool) -> Outcome {
        Outcome {
            computed: computed.into(),
            pass,
            trusted: Vec::new(),
        }
    }

    fn trusting(mut self, trusted: Vec<String>) -> Outcome {
        self.trusted = trusted;
        self
    }
}

type Runner = Box<dyn Fn() -> Result<Outcome, String> + Send + Sync>;

pub struct Check {
    pub id: &'static str,
    pub claim: String,
    pub expected: String,
    run: Runner,
}

impl Check {
    fn new(
        id: &'static str,
        claim: impl Into<String>,
        expected: impl Into<String>,
        run: impl Fn() -> Result<Outcome, String> + Send + Sync + 'static,
    ) -> Check {
        Check {
            id,
            claim: claim.into(),
            expected: expected.into(),
            run: Box::new(run),
        }
    }

    pub fn execute(&self) -> CheckRecord {
        let start = Instant::now();
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (self.run)()))
            .unwrap_or_else(|_| Err("check panicked".to_string()));
        let (computed, status, trusted) = match result {
            Ok(o) => (
                o.computed,
                if o.pass {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
                o.trusted,
            ),
            Err(e) => (format!("error: {e}"), CheckStatus::Fail, Vec::new()),
        };
        CheckRecord {
            id: self.id.to_string(),
            claim: self.claim.clone(),
            expected: self.expected.clone(),
            computed,
            status,
            trusted,
            wall_ms: start.elapsed().as_millis() as u64,
        }
    }
}

/// Suites run by `all`, in order.
pub const GATING_SUITES: [&str; 7] = [
    "omega-table",
    "census",
    "affine-family",
    "quotient-bound",
    "direct-power",
    "exact",
    "properties",
];

/// Every suite name accepted by [`suite_checks`].
pub const SUITE_NAMES: [&str; 9] = [
    "omega-table",
    "census",
    "affine-family",
    "quotient-bound",
    "direct-power",
    "exact",
    "properties",
    "extended",
    "all",
];

fn make(text: &str) -> Result<Construction, String> {
    build(&parse_spec(text).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn certified(text: &str) -> Result<(Construction, CertifiedOmega), String> {
    let c = make(text)?;
    let autos = autogens_for(&c).map_err(|e| e.to_string())?;
    let o = omega(&c.group, &autos, DEFAULT_LEVEL);
    Ok((c, o))
}

fn describe(o: &CertifiedOmega) -> String {
    match o.status {
        OmegaStatus::Bounds => format!("bounds [{}, {}]", o.lo, o.hi),
        s => format!("{s} {}", o.hi),
    }
}

fn omega_check(id: &'static str, spec: &'static str, expected: usize) -> Check {
    Check::new(
        id,
        format!("{spec} has exactly {expected} automorphism orbits"),
        format!("certified {expected}"),
        move || {
            let (_, o) = certified(spec)?;
            let pass = o.status == OmegaStatus::Certified && o.hi == expected;
            Ok(Outcome::new(describe(&o), pass).trusting(o.trusted))
        },
    )
}

fn omega_table() -> Vec<Check> {
    vec![
        omega_check("omega-psl-2-4", "PSL(2,4)", 4),
        omega_check("omega-psl-2-7", "PSL(2,7)", 5),
        omega_check("omega-psl-2-8", "PSL(2,8)", 5),
        omega_check("omega-psl-2-9", "PSL(2,9)", 5),
        omega_check("omega-psl-3-4", "PSL(3,4)", 6),
        omega_check("omega-asl-2-4", "ASL(2,4)", 6),
    ]
}

fn census() -> Vec<Check> {
    vec![
        Check::new(
            "census-asl-2-4",
            "elements of ASL(2,4) have orders 1, 2, 3, 4, 5",
            "{1,2,3,4,5}",
            || {
                let c = make("ASL(2,4)")?;
                let orders: Vec<u64> = c.group.order_census().into_iter().collect();
                Ok(Outcome::new(
                    format!("{orders:?}"),
                    orders == [1, 2, 3, 4, 5],
                ))
            },
        ),
        Check::new(
            "census-insufficient",
            "the order census of ASL(2,4) bounds omega by 5 while signatures reach 6",
            "level1 5 < level2 6 = omega",
            || {
                let (c, o) = certified("ASL(2,4)")?;
                let l1 = signature_partition(&c.group, 1).block_count();
                let l2 = signature_partition(&c.group, 2).block_count();
                Ok(Outcome::new(
                    format!("level1 {l1}, level2 {l2}, omega {}", describe(&o)),
                    l1 == 5 && l2 == 6 && o.status == OmegaStatus::Certified && o.hi == 6,
                ))
            },
        ),
    ]
}

fn affine_family() -> Vec<Check> {
    vec![
        omega_check("omega-gmf-2-4", "GMF(2,4)", 7),
        Check::new(
            "gamma-identity",
            "block conjugation formula agrees with matrix conjugation on 1000 random tuples",
            "1000/1000",
            || {
                let f = Field::of_order(4).map_err(|e| e.to_string())?;
                let mut rng = ChaCha8Rng::seed_from_u64(1000);
                let mut ok = 0;
                let rand_mat = |rng: &mut ChaCha8Rng, r: usize, c: usize| {
                    let data = (0..r * c).map(|_| rng.gen_range(0..4u16)).collect();
                    Mat::from_vec(&f, r, c, data)
                };
                let rand_inv = |rng: &mut ChaCha8Rng, n: usize, det_one: bool| loop {
                    let m = rand_mat(rng, n, n);
                    if m.rank() == n && (!det_one || m.det().unwrap() == 1) {
                        return m;
                    }
                };
                for i in 0..1000 {
                    let m = 1 + i % 3;
                    let p = AffinePair::new(rand_inv(&mut rng, 2, true), rand_mat(&mut rng, 2, m));
                    let (a, b, c) = (
                        rand_inv(&mut rng, 2, false),
                        rand_mat(&mut rng, 2, m),
                        rand_inv(&mut rng, m, false),
                    );
                    let mut g = Mat::identity(&f, 2 + m);
                    g.put(0, 0, &a);
                    g.put(0, 2, &b);
                    g.put(2, 2, &c);
                    let direct = g
                        .inv()
                        .unwrap()
                        .mul_unchecked(&p.to_block())
                        .mul_unchecked(&g);
                    if gamma_conj(&p, &a, &b, &c).to_block() == direct {
                        ok += 1;
                    }
                }
                Ok(Outcome::new(format!("{ok}/1000"), ok == 1000))
            },
        ),
        Check::new(
            "translations-maximal-abelian",
            "every abelian normal subgroup of ASL(2,4) lies in the translation subgroup",
            "all normal closures of elements outside M are non-abelian",
            || {
                let c = make("ASL(2,4)")?;
                let g = &c.group;
                let m = translations(g);
                let bad = g
                    .ids()
                    .filter(|&x| {
                        let n = g.normal_closure(&[x]);
                        g.subgroup_is_abelian(&n) && !n.is_subgroup_of(&m)
                    })
                    .count();
                let normal = g.is_normal(&m) && g.subgroup_is_abelian(&m) && m.order() == 16;
                Ok(Outcome::new(
                    format!(
                        "|M| = {}, abelian normal closures outside M: {bad}",
                        m.order()
                    ),
                    bad == 0 && normal,
                ))
            },
        ),
        Check::new(
            "one-minus-x-invertible",
            "1 - X is invertible for every X in SL(2,q) with X^2 != 1, q in {4,8,16}",
            "no singular 1 - X",
            || {
                let mut report = Vec::new();
                let mut pass = true;
                for q in [4u32, 8, 16] {
                    let f = Field::of_order(q).map_err(|e| e.to_string())?;
                    let one = Mat::identity(&f, 2);
                    let (mut tested, mut singular) = (0, 0);
                    for d in 0..(q as usize).pow(4) {
                        let data = (0..4)
                            .map(|i| ((d / (q as usize).pow(i)) % q as usize) as u16)
                            .collect();
                        let x = Mat::from_vec(&f, 2, 2, data);
                        if x.det().unwrap() != 1 || x.mul_unchecked(&x).is_identity() {
                            continue;
                        }
                        tested += 1;
                        if one.sub(&x).unwrap().rank() < 2 {
                            singular += 1;
                        }
                    }
                    pass &= singular == 0;
                    report.push(format!("q={q}: {tested} tested, {singular} singular"));
                }
                Ok(Outcome::new(report.join("; "), pass))
            },
        ),
        Check::new(
            "canonical-forms-gmf-2-4",
            "canonical forms of GMF(2,4) are idempotent, orbit-consistent and number 7",
            "7 forms in 7 orbits",
            || {
                let (c, o) = certified("GMF(2,4)")?;
                let mut canon = GmfCanonicalizer::new(&c).map_err(|e| e.to_string())?;
                let orbits = o.orbits();
                let mut forms = BTreeSet::new();
                let mut problems = 0usize;
                for g in c.group.ids() {
                    let f = canon.canonical(g);
                    let p = c.group.element(g).as_affine().unwrap();
                    let replay = c.group.id_of(&GroupElem::Affine(apply_chain(p, &f.chain)));
                    if replay != Some(f.representative)
                        || canon.canonical(f.representative).representative != f.representative
                        || orbits.block_of(g) != orbits.block_of(f.representative)
                    {
                        problems += 1;
                    }
                    forms.insert(f.representative);
                }
                let blocks: BTreeSet<u32> = forms.iter().map(|&r| orbits.block_of(r)).collect();
                Ok(Outcome::new(
                    format!(
                        "{} forms in {} orbits, {problems} violations",
                        forms.len(),
                        blocks.len()
                    ),
                    forms.len() == 7 && blocks.len() == 7 && problems == 0,
                )
                .trusting(o.trusted))
            },
        ),
    ]
}

fn quotient_bound_check(
    id: &'static str,
    spec: &'static str,
    label: &'static str,
    expected: &'static str,
    want_equality: bool,
    pick: fn(&Construction) -> crate::group::Subgroup,
) -> Check {
    Check::new(
        id,
        format!("omega(G) >= omega(N) + omega(G/N) - 1 for G = {spec}, N = {label}"),
        expected,
        move || {
            let c = make(spec)?;
            let autos = autogens_for(&c).map_err(|e| e.to_string())?;
            let n = pick(&c);
            let r = verify_quotient_bound(&c.group, &autos, &n, CHECK_AUT_LIMIT, DEFAULT_LEVEL)
                .map_err(|e| e.to_string())?;
            let fusion = match r.coset_fusion {
                Some(true) => ", cosets fused",
                Some(false) => ", cosets NOT fused",
                None => "",
            };
            Ok(Outcome::new(
                format!(
                    "{} >= {} + {} - 1{}{fusion}",
                    r.group.hi,
                    r.normal.hi,
                    r.quotient.hi,
                    if r.equality { " (equality)" } else { "" }
                ),
                r.passed() && r.determined && r.equality == want_equality,
            )
            .trusting(r.trusted))
        },
    )
}

fn quotient_bound() -> Vec<Check> {
    vec![
        quotient_bound_check(
            "bound-asl-translations",
            "ASL(2,4)",
            "translations",
            "6 >= 2 + 4 - 1",
            false,
            |c| translations(&c.group),
        ),
        quotient_bound_check(
            "bound-gmf-translations",
            "GMF(2,4)",
            "translations",
            "7 >= 2 + 4 - 1",
            false,
            |c| translations(&c.group),
        ),
        quotient_bound_check(
            "bound-equality-sl-2-2",
            "SL(2,2)",
            "derived subgroup",
            "3 = 2 + 2 - 1 with fused cosets",
            true,
            |c| c.group.derived_subgroup(),
        ),
        quotient_bound_check(
            "bound-equality-a4",
            "A(4)",
            "Klein four-group",
            "3 = 2 + 2 - 1 with fused cosets",
            true,
            |c| c.group.derived_subgroup(),
        ),
        quotient_bound_check(
            "bound-whole-group",
            "A(5)",
            "G",
            "4 = 4 + 1 - 1",
            true,
            |c| c.group.whole(),
        ),
    ]
}

fn direct_power() -> Vec<Check> {
    vec![Check::new(
        "direct-power-a5-squared",
        "A5 x A5 has binomial(2+4-1, 4-1) automorphism orbits",
        "certified 10 = formula 10",
        || {
            let (_, o) = certified("POW(A(5),2)")?;
            let formula = direct_power_orbit_count(4, 2);
            let pass = o.status == OmegaStatus::Certified
                && o.hi as u128 == formula
                && !o.trusted.is_empty();
            Ok(
                Outcome::new(format!("{}, formula {formula}", describe(&o)), pass)
                    .trusting(o.trusted),
            )
        },
    )]
}

fn exact() -> Vec<Check> {
    [
        "EA(2,1)", "EA(2,2)", "EA(2,3)", "A(5)", "SL(2,2)", "PSL(2,5)",
    ]
    .into_iter()
    .map(|spec| {
        let id: &'static str = Box::leak(format!("exact-{}", slug(spec)).into_boxed_str());
        Check::new(
            id,
            format!("exhaustive automorphism search on {spec} agrees with the certified count"),
            "exact = certified",
            move || {
                let (c, o) = certified(spec)?;
                let (e, aut) = omega_exact(&c.group, CHECK_AUT_LIMIT, DEFAULT_LEVEL)
                    .map_err(|e| e.to_string())?;
                let pass = o.status == OmegaStatus::Certified && e.hi == o.hi && e.upper == o.upper;
                Ok(Outcome::new(
                    format!("exact {} (|Aut| = {}), {}", e.hi, aut.order, describe(&o)),
                    pass,
                ))
            },
        )
    })
    .collect()
}

fn slug(spec: &str) -> String {
    spec.to_ascii_lowercase()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect::<String>()
        .trim_matches('-')
        .replace("--", "-")
}

fn properties() -> Vec<Check> {
    vec![
        Check::new(
            "elementary-abelian-two-orbits",
            "EA(2,k) has exactly 2 automorphism orbits for k = 1..6",
            "certified 2 for each k",
            || {
                let mut seen = Vec::new();
                let mut pass = true;
                for k in 1..=6 {
                    let (_, o) = certified(&format!("EA(2,{k})"))?;
                    pass &= o.status == OmegaStatus::Certified && o.hi == 2;
                    seen.push(o.hi.to_string());
                }
                Ok(Outcome::new(seen.join(","), pass))
            },
        ),
        Check::new(
            "sandwich-soundness",
            "closure partitions refine signature partitions and bracket exact counts",
            "lo <= exact <= hi for every group",
            || {
                let mut bad = Vec::new();
                for spec in [
                    "S(4)",
                    "A(4)",
                    "SL(2,3)",
                    "GL(2,3)",
                    "C(12)",
                    "DP(C(2),S(3))",
                    "A(5)",
                    "PSL(2,7)",
                ] {
                    let (c, o) = certified(spec)?;
                    let (e, _) = omega_exact(&c.group, CHECK_AUT_LIMIT, DEFAULT_LEVEL)
                        .map_err(|e| e.to_string())?;
                    if !(o.lo <= e.hi
                        && e.hi <= o.hi
                        && o.upper.refines(&e.upper)
                        && e.upper.refines(&o.lower))
                    {
                        bad.push(spec);
                    }
                }
                Ok(Outcome::new(format!("violations: {bad:?}"), bad.is_empty()))
            },
        ),
    ]
}

fn extended() -> Vec<Check> {
    let exact_check = |id: &'static str, spec: &'static str, expected: usize| {
        Check::new(
            id,
            format!("{spec} has exactly {expected} automorphism orbits (exhaustive search)"),
            format!("exact {expected}"),
            move || {
                let c = make(spec)?;
                let (e, aut) = omega_exact(&c.group, EXTENDED_AUT_LIMIT, DEFAULT_LEVEL)
                    .map_err(|e| e.to_string())?;
                Ok(Outcome::new(
                    format!("exact {} (|Aut| = {})", e.hi, aut.order),
                    e.hi == expected,
                ))
            },
        )
    };
    vec![
        omega_check("omega-gmf-3-4", "GMF(3,4)", 7),
        exact_check("exact-s6", "S(6)", 8),
        exact_check("exact-pgl-2-9", "PGL(2,9)", 8),
        Check::new(
            "almost-simple-assignment",
            "Aut(PSL(2,4)) = S5 and Aut(PSL(2,7)) = PGL(2,7) take distinct values in {7, 9, 11}",
            "distinct values in {7,9,11}",
            || {
                let mut vals = Vec::new();
                for spec in ["S(5)", "PGL(2,7)"] {
                    let c = make(spec)?;
                    let (e, _) = omega_exact(&c.group, EXTENDED_AUT_LIMIT, DEFAULT_LEVEL)
                        .map_err(|e| e.to_string())?;
                    vals.push((spec, e.hi));
                }
                let pass =
                    vals.iter().all(|(_, v)| [7, 9, 11].contains(v)) && vals[0].1 != vals[1].1;
                let text = vals
                    .iter()
                    .map(|(s, v)| format!("{s} -> {v}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                Ok(Outcome::new(
                    format!("{text}; PGammaL(2,8) not constructed, 11 by elimination"),
                    pass,
                ))
            },
        ),
    ]
}

/// The checks of one suite, or `None` for an unknown name.
pub fn suite_checks(name: &str) -> Option<Vec<Check>> {
    Some(match name {
        "omega-table" => omega_table(),
        "census" => census(),
        "affine-family" => affine_family(),
        "quotient-bound" => quotient_bound(),
        "direct-power" => direct_power(),
        "exact" => exact(),
        "properties" => properties(),
        "extended" => extended(),
        "all" => GATING_SUITES
            .iter()
            .flat_map(|s| suite_checks(s).unwrap())
            .collect(),
        _ => return None,
    })
}

/// Runs a suite; with `parallel` the checks are spread over threads and
/// reported in their fixed order.
pub fn run_suite(name: &str, parallel: bool) -> Option<SuiteReport> {
    let checks = suite_checks(name)?;
    let records: Vec<CheckRecord> = if parallel {
        checks.par_iter().map(Check::execute).collect()
    } else {
        checks.iter().map(Check::execute).collect()
    };
    let status = if records.iter().any(|r| r.status == CheckStatus::Fail) {
        CheckStatus::Fail
    } else {
        CheckStatus::Pass
    };
    Some(SuiteReport {
        suite: name.to_string(),
        status,
        checks: records,
    })
}

/// Shared for callers that already hold a construction.
pub fn certified_omega(c: &Construction) -> Result<CertifiedOmega, String> {
    let autos = autogens_for(c).map_err(|e| e.to_string())?;
    Ok(omega(&c.group, &autos, DEFAULT_LEVEL))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_ids_are_unique() {
        let mut ids = BTreeSet::new();
        for name in SUITE_NAMES.iter().filter(|n| **n != "all") {
            for c in suite_checks(name).unwrap() {
                assert!(ids.insert(c.id), "duplicate id {}", c.id);
            }
        }
        assert!(suite_checks("nope").is_none());
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("PSL(2,5)"), "psl-2-5");
        assert_eq!(slug("EA(2,1)"), "ea-2-1");
    }
}
