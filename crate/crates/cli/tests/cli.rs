use std::process::{Command, Output};

use serde_json::Value;

fn autorbit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autorbit"))
        .args(args)
        .env_remove("AUTORBIT_ORDER_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn omega_json_reports_certified_value() {
    let o = autorbit(&["omega", "ASL(2,4)", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["group"], "ASL(2,4)");
    assert_eq!(v["order"], 960);
    assert_eq!(v["omega"]["lo"], 6);
    assert_eq!(v["omega"]["hi"], 6);
    assert_eq!(v["omega"]["status"], "certified");
    assert!(v["trusted"].is_array());
    let sizes: Vec<u64> = v["orbit_sizes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(sizes.len(), 6);
    assert_eq!(sizes.iter().sum::<u64>(), 960);
}

#[test]
fn exact_mode_reports_exact_status() {
    let o = autorbit(&["omega", "A(5)", "--exact", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["omega"]["status"], "exact");
    assert_eq!(v["omega"]["hi"], 4);
}

#[test]
fn orbits_csv_has_one_row_per_orbit() {
    let o = autorbit(&["orbits", "PSL(2,7)", "--csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("group,order,orbit_index,size,elem_order,cent_order\n"));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(&r[0], "PSL(2,7)");
        assert_eq!(&r[1], "168");
        assert_eq!(&r[2], i.to_string());
    }
    let total: usize = rows.iter().map(|r| r[3].parse::<usize>().unwrap()).sum();
    assert_eq!(total, 168);
}

#[test]
fn orbits_json_lists_representatives() {
    let o = autorbit(&["orbits", "A(4)", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let orbits = v["orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), v["omega"]["hi"].as_u64().unwrap() as usize);
    for key in [
        "index",
        "representative",
        "size",
        "elem_order",
        "cent_order",
    ] {
        assert!(orbits[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = autorbit(&["orbits", "GL(2,3)", "--json"]);
    let b = autorbit(&["orbits", "GL(2,3)", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_spec_exits_with_usage_code() {
    for spec in ["PSL(2,6)", "FOO(1)", "PSL(2", "GMF(2,3)"] {
        let o = autorbit(&["omega", spec]);
        assert_eq!(o.status.code(), Some(2), "{spec}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(
        autorbit(&["omega", "A(5)", "--level", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn order_cap_exits_with_cap_code() {
    let o = Command::new(env!("CARGO_BIN_EXE_autorbit"))
        .args(["omega", "PSL(3,4)"])
        .env("AUTORBIT_ORDER_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = autorbit(&["omega", "S(6)", "--exact", "--aut-limit", "100"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_writes_report() {
    let path = std::env::temp_dir().join(format!("autorbit-verify-{}.json", std::process::id()));
    let o = autorbit(&[
        "verify",
        "--suite",
        "census",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("census-asl-2-4"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["suite"], "census");
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert_eq!(c["status"], "pass");
        for key in ["id", "claim", "expected", "computed", "trusted", "wall_ms"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn verify_rejects_unknown_suite() {
    assert_eq!(
        autorbit(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
}
