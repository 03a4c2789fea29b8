use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hecke(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn cm_files(dir: &Path) {
    assert_eq!(code(&hecke(dir, &["char-make", "--field", "gaussian", "--preset", "cm", "-o", "cm.json"])), 0);
    assert_eq!(code(&hecke(dir, &["system-gen", "cm.json", "-o", "cm_sys.json"])), 0);
}

#[test]
fn field_info_reports_catalog_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = hecke(dir.path(), &["field-info", "gaussian", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["degree"], 2);
    assert_eq!(v["discriminant"], "-4");
    assert_eq!(v["torsion_order"], 4);
    assert_eq!(json(&hecke(dir.path(), &["field-info", "rationals", "--format", "json"]))["degree"], 1);
    assert_eq!(code(&hecke(dir.path(), &["field-info", "nowhere"])), 2);
}

#[test]
fn cm_system_entries() {
    let dir = tempfile::tempdir().unwrap();
    cm_files(dir.path());
    let sys: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("cm_sys.json")).unwrap()).unwrap();
    let chars: Vec<u64> = sys["frobenius_data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["residue_char"].as_u64().unwrap())
        .collect();
    for p in [5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97] {
        assert_eq!(chars.iter().filter(|&&q| q == p).count(), 2, "two primes above {p}");
    }
    for p in [3, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83] {
        assert_eq!(chars.iter().filter(|&&q| q == p).count(), 1, "one prime above {p}");
    }
    assert!(!chars.contains(&2));
}

#[test]
fn trivial_system_and_empty_bound() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&hecke(d, &["char-make", "--field", "rationals", "--value-field", "rationals", "--preset", "trivial", "-o", "t.json"])), 0);
    assert_eq!(code(&hecke(d, &["--bound-primes", "10", "system-gen", "t.json", "-o", "s.json"])), 0);
    let sys: Value = serde_json::from_str(&std::fs::read_to_string(d.join("s.json")).unwrap()).unwrap();
    let entries = sys["frobenius_data"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    for e in entries {
        assert_eq!(e["poly"], serde_json::json!([["-1"], ["1"]]));
    }
    let o = hecke(d, &["--bound-primes", "0", "system-gen", "t.json", "-o", "e.json"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    cm_files(d);
    let all = ["verify", "cm_sys.json", "--character", "cm.json", "--purity", "--conductor", "--integrality", "--artin"];
    let o = hecke(d, &[&all[..], &["--format", "json"]].concat());
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["purity"]["t"], 0.5);
    assert_eq!(code(&hecke(d, &["verify", "cm_sys.json", "--conductor"])), 3);
    assert_eq!(code(&hecke(d, &["verify", "cm_sys.json", "--purity"])), 0);

    let text = std::fs::read_to_string(d.join("cm_sys.json")).unwrap();
    let mut sys: Value = serde_json::from_str(&text).unwrap();
    sys["frobenius_data"][4]["poly"][0][0] = Value::String("17".into());
    std::fs::write(d.join("bad.json"), serde_json::to_string(&sys).unwrap()).unwrap();
    let o = hecke(d, &["verify", "bad.json", "--character", "cm.json", "--format", "json"]);
    assert_eq!(code(&o), 1);
    assert!(!json(&o)["failures"].as_array().unwrap().is_empty());
    assert_eq!(code(&hecke(d, &["reconstruct", "bad.json"])), 4);
}

#[test]
fn reconstruct_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    cm_files(d);
    let o = hecke(d, &["reconstruct", "cm_sys.json", "-o", "back.json", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["character"]["infinity_type"], serde_json::json!([1, 0]));
    assert_eq!(std::fs::read(d.join("back.json")).unwrap(), std::fs::read(d.join("cm.json")).unwrap());

    assert_eq!(code(&hecke(d, &["char-make", "--field", "rationals", "--preset", "legendre", "-o", "leg.json"])), 0);
    assert_eq!(code(&hecke(d, &["system-gen", "leg.json", "-o", "leg_sys.json"])), 0);
    let o = hecke(d, &["reconstruct", "leg_sys.json", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["character"]["infinity_type"], serde_json::json!([0]));
}

#[test]
fn reconstruct_refuses_thin_data() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&hecke(d, &["char-make", "--field", "gaussian", "--preset", "cm", "-o", "cm.json"])), 0);
    assert_eq!(code(&hecke(d, &["--bound-primes", "6", "system-gen", "cm.json", "-o", "thin.json"])), 0);
    assert_eq!(code(&hecke(d, &["reconstruct", "thin.json"])), 3);
}

#[test]
fn multdep_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let v = json(&hecke(d, &["multdep", "rationals", "8", "2", "--format", "json"]));
    assert_eq!(v["relation"]["t"], 1);
    assert_eq!(v["relation"]["m"], serde_json::json!([3]));
    let v = json(&hecke(d, &["multdep", "gaussian", "-1+2i", "2+i", "2-i", "--format", "json"]));
    assert_eq!(v["relation"]["m"], serde_json::json!([1, 0]));
    assert_eq!(v["relation"]["zeta_coords"], serde_json::json!(["0", "1"]));
    let v = json(&hecke(d, &["multdep", "rationals", "3", "2", "--probe", "20", "--format", "json"]));
    assert!(v["relation"].is_null());
    assert_eq!(v["witnesses"][0]["residue_char"], 7);
}

#[test]
fn same_seed_same_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for name in ["a.json", "b.json"] {
        let o = hecke(d, &["--seed", "11", "char-make", "--field", "qsqrt5", "--random", "-o", name]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(d.join("a.json")).unwrap(), std::fs::read(d.join("b.json")).unwrap());
    for (c, s) in [("a.json", "sa.json"), ("b.json", "sb.json")] {
        assert_eq!(code(&hecke(d, &["--jobs", "2", "system-gen", c, "-o", s])), 0);
    }
    assert_eq!(std::fs::read(d.join("sa.json")).unwrap(), std::fs::read(d.join("sb.json")).unwrap());
}
