use std::path::PathBuf;
use std::process::ExitCode;

use autorbit::constructions::{autogens_for, build, parse_spec, Construction, ConstructionError};
use autorbit::group::GroupError;
use autorbit::orbit::{
    omega, omega_exact, BruteError, CertifiedOmega, DEFAULT_AUT_LIMIT, DEFAULT_LEVEL,
};
use autorbit::suite::{run_suite, SUITE_NAMES};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "autorbit",
    version,
    about = "Automorphism orbit counts of finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of automorphism orbits, with lower and upper bounds
    Omega {
        spec: String,
        #[command(flatten)]
        opts: OmegaOpts,
    },
    /// One row per orbit: representative, size, element order, centralizer order
    Orbits {
        spec: String,
        #[command(flatten)]
        opts: OmegaOpts,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Run a named batch of checks and report pass/fail per check
    Verify {
        #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        suite: String,
        /// Also write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct OmegaOpts {
    /// Signature level for the lower bound
    #[arg(long, default_value_t = DEFAULT_LEVEL, value_parser = clap::value_parser!(u8).range(1..=3))]
    level: u8,
    /// Largest group order for exhaustive automorphism search
    #[arg(long, default_value_t = DEFAULT_AUT_LIMIT)]
    aut_limit: usize,
    /// Use exhaustive automorphism search instead of the generator sets
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    json: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        let code = match &e {
            ConstructionError::Spec(_) => EXIT_USAGE,
            ConstructionError::Group(GroupError::CapExceeded(_)) => EXIT_CAP,
            _ => EXIT_FAIL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<BruteError> for Failure {
    fn from(e: BruteError) -> Self {
        Failure {
            code: EXIT_CAP,
            message: e.to_string(),
        }
    }
}

fn compute(spec: &str, opts: &OmegaOpts) -> Result<(Construction, CertifiedOmega), Failure> {
    let c = build(&parse_spec(spec).map_err(ConstructionError::from)?)?;
    let o = if opts.exact {
        omega_exact(&c.group, opts.aut_limit, opts.level)?.0
    } else {
        let autos = autogens_for(&c).map_err(|e| Failure {
            code: EXIT_FAIL,
            message: e.to_string(),
        })?;
        omega(&c.group, &autos, opts.level)
    };
    Ok((c, o))
}

fn omega_json(c: &Construction, o: &CertifiedOmega) -> Value {
    json!({
        "group": c.name(),
        "order": c.order(),
        "omega": {"lo": o.lo, "hi": o.hi, "status": o.status.to_string()},
        "trusted": o.trusted,
        "orbit_sizes": o.orbits().block_sizes(),
    })
}

struct OrbitRow {
    representative: String,
    size: usize,
    elem_order: u64,
    cent_order: usize,
}

fn orbit_rows(c: &Construction, o: &CertifiedOmega) -> Vec<OrbitRow> {
    let orbits = o.orbits();
    orbits
        .representatives()
        .into_iter()
        .zip(orbits.block_sizes())
        .map(|(r, size)| OrbitRow {
            representative: c.group.element(r).to_string(),
            size,
            elem_order: c.group.elem_order(r),
            cent_order: c.group.class_centralizer(r).order(),
        })
        .collect()
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Omega { spec, opts } => {
            let (c, o) = compute(&spec, &opts)?;
            if opts.json {
                println!("{}", omega_json(&c, &o));
            } else {
                let value = match o.value() {
                    Some(v) => format!("{v} ({})", o.status),
                    None => format!("between {} and {} (bounds)", o.lo, o.hi),
                };
                println!("{}: order {}, omega {value}", c.name(), c.order());
                for t in &o.trusted {
                    println!("trusted: {t}");
                }
            }
            Ok(0)
        }
        Command::Orbits { spec, opts, csv } => {
            let (c, o) = compute(&spec, &opts)?;
            let rows = orbit_rows(&c, &o);
            if csv {
                let mut w = csv::Writer::from_writer(std::io::stdout().lock());
                let header = [
                    "group",
                    "order",
                    "orbit_index",
                    "size",
                    "elem_order",
                    "cent_order",
                ];
                let io = |e: csv::Error| Failure {
                    code: EXIT_FAIL,
                    message: e.to_string(),
                };
                w.write_record(header).map_err(io)?;
                for (i, r) in rows.iter().enumerate() {
                    let record = [
                        c.name(),
                        c.order().to_string(),
                        i.to_string(),
                        r.size.to_string(),
                        r.elem_order.to_string(),
                        r.cent_order.to_string(),
                    ];
                    w.write_record(&record).map_err(io)?;
                }
                w.flush().map_err(|e| io(e.into()))?;
            } else if opts.json {
                let mut v = omega_json(&c, &o);
                v["orbits"] = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        json!({
                            "index": i,
                            "representative": r.representative,
                            "size": r.size,
                            "elem_order": r.elem_order,
                            "cent_order": r.cent_order,
                        })
                    })
                    .collect();
                println!("{v}");
            } else {
                println!(
                    "{}: order {}, {} orbits ({})",
                    c.name(),
                    c.order(),
                    rows.len(),
                    o.status
                );
                println!(
                    "{:>5}  {:>8}  {:>5}  {:>10}  representative",
                    "index", "size", "order", "centralizer"
                );
                for (i, r) in rows.iter().enumerate() {
                    println!(
                        "{i:>5}  {:>8}  {:>5}  {:>10}  {}",
                        r.size, r.elem_order, r.cent_order, r.representative
                    );
                }
            }
            Ok(0)
        }
        Command::Verify {
            suite,
            out,
            parallel,
            json,
        } => {
            let report =
                run_suite(&suite, parallel).expect("suite names are validated by the parser");
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Some(path) = out {
                std::fs::write(&path, format!("{text}\n")).map_err(|e| Failure {
                    code: EXIT_FAIL,
                    message: format!("writing {}: {e}", path.display()),
                })?;
            }
            if json {
                println!("{text}");
            } else {
                print!("{}", report.table());
            }
            Ok(if report.passed() { 0 } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
