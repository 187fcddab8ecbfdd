use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use wittstone::condensed::{Cover, FiniteSite, PresheafApprox, Representable, SiteMap, SiteObject};

fn wittstone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittstone"))
        .args(args)
        .env_remove("WSTONE_P")
        .env_remove("WSTONE_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wittstone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn witt_arithmetic_matches_integers_mod_four() {
    // W_2(F_2) = Z/4, where digits (a0, a1) in {0, 1} stand for a0 + 2 a1
    let digits = |x: u64| format!("[{}, {}]", x % 2, x / 2);
    let value = |v: &Value| {
        let d: Vec<u64> = v["result"].as_array().unwrap().iter().map(|c| c[0].as_u64().unwrap()).collect();
        d[0] + 2 * d[1]
    };
    for a in 0..4u64 {
        for b in 0..4u64 {
            for (op, expected) in [("add", (a + b) % 4), ("mul", a * b % 4)] {
                let out = wittstone(&["witt", op, "--p", "2", "--len", "2", "--lhs", &digits(a), "--rhs", &digits(b)]);
                assert!(out.status.success());
                assert_eq!(value(&json(&out)), expected, "{a} {op} {b}");
            }
        }
    }
}

#[test]
fn polys_are_json() {
    let out = wittstone(&["witt", "polys", "--p", "3", "--len", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["sums"].as_array().unwrap().len(), 2);
    assert_eq!(v["products"].as_array().unwrap().len(), 2);
}

#[test]
fn explain_known_and_unknown() {
    let out = wittstone(&["explain", "witt.ghost-hom", "--format", "text"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("acceptance criterion: 1"));
    let out = wittstone(&["explain", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

#[test]
fn verify_reports_and_exit_status() {
    let path = scratch("report.json");
    let args = ["verify", "--criteria", "3,6", "--max-level-size", "2", "--out", path.to_str().unwrap()];
    let out = wittstone(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = std::fs::read(&path).unwrap();
    assert!(wittstone(&args).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap(), "same config and seed must give identical bytes");
    let report: Value = serde_json::from_slice(&first).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert!(checks.iter().all(|c| c["criterion"] == 3 || c["criterion"] == 6));

    let out = wittstone(&["verify", "--criteria", "2", "--inject-mutation", "delta"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let failed: Vec<&Value> = report["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["check_id"], "delta.axioms");
    assert!(failed[0]["witness"].is_string());
}

#[test]
fn verify_config_file_and_overrides() {
    let cfg = scratch("config.json");
    std::fs::write(&cfg, r#"{"criteria": [5], "samples": 10, "seed": 3}"#).unwrap();
    let out = wittstone(&["verify", "--config", cfg.to_str().unwrap(), "--seed", "9"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["samples"], 10);
    std::fs::write(&cfg, r#"{"prime": 3}"#).unwrap();
    assert_eq!(wittstone(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn environment_overrides_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_wittstone"))
        .args(["stone", "dual", "--set-size", "2"])
        .env("WSTONE_P", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json(&out)["algebra"]["p"], 3);
    let out = Command::new(env!("CARGO_BIN_EXE_wittstone"))
        .args(["stone", "dual", "--set-size", "2"])
        .env("WSTONE_P", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stone_spec_separates_p_boolean_algebras() {
    // F_2[e]/e^2: one character, not p-Boolean
    let dual_numbers = r#"{"p":2,"dim":2,"unit":[1,0],"sc":[[[1,0],[0,1]],[[0,1],[0,0]]]}"#;
    let v = json(&wittstone(&["stone", "spec", "--algebra", dual_numbers]));
    assert_eq!(v["characters"].as_array().unwrap().len(), 1);
    assert_eq!(v["p_boolean"], false);
    let f2sq = r#"{"p":2,"dim":2,"unit":[1,1],"sc":[[[1,0],[0,0]],[[0,0],[0,1]]]}"#;
    let v = json(&wittstone(&["stone", "spec", "--algebra", f2sq]));
    assert_eq!(v["characters"].as_array().unwrap().len(), 2);
    assert_eq!(v["evaluation_iso"], true);
}

#[test]
fn flatness_record_shape() {
    let map = r#"{"matrix":{"p":2,"rows":3,"cols":2,"data":[[1,0],[0,1],[0,1]]}}"#;
    let v = json(&wittstone(&["flatness", "check", "--map", map]));
    assert_eq!(v["check"], "flatness.ff-correspondence");
    assert_eq!(v["passed"], true);
    assert_eq!(v["faithfully_flat"], true);
    assert_eq!(v["dual"], serde_json::json!([0, 1, 1]));
    assert!(v["instance_key"].is_string());
}

#[test]
fn sheaf_check_on_listed_cover() {
    let mut site = FiniteSite::standard();
    let t = site.object("ntilde").unwrap().clone();
    let two = site.object("two").unwrap().clone();
    let cover = Cover::new(
        t.clone(),
        vec![SiteMap::new(two.clone(), t.clone(), vec![0, 2]).unwrap(), SiteMap::new(two, t, vec![1, 2]).unwrap()],
    )
    .unwrap();
    site.covers = vec![cover.clone()];
    let mut table = PresheafApprox::tabulate_for_cover(&Representable::new(SiteObject::new("K", 2)), &cover).unwrap();
    let site_path = scratch("site.json");
    let sheaf_path = scratch("sheaf.json");
    std::fs::write(&site_path, serde_json::to_string(&site).unwrap()).unwrap();
    std::fs::write(&sheaf_path, table.to_json()).unwrap();
    let args = ["condensed", "sheaf-check", "--site", site_path.to_str().unwrap(), "--presheaf", sheaf_path.to_str().unwrap()];
    let out = wittstone(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["covers"], 1);

    // a section of the first member that no longer restricts compatibly
    let r = table.restrictions.iter_mut().find(|r| r.map == cover.members[0]).unwrap();
    r.table[0] = r.table[1];
    std::fs::write(&sheaf_path, table.to_json()).unwrap();
    let out = wittstone(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["failure"].is_array());
}

#[test]
fn betti_and_witt_cont_on_canonical_towers() {
    let out = wittstone(&["condensed", "betti", "--canonical", "ntilde", "--depth", "2", "--precision", "2"]);
    assert!(out.status.success());
    let records = json(&out);
    assert_eq!(records.as_array().unwrap().len(), 3);
    assert!(records.as_array().unwrap().iter().all(|r| r["check"] == "condensed.betti" && r["passed"] == true));

    let out = wittstone(&["duality", "witt-cont", "--canonical", "cantor", "--depth", "1", "--precision", "2"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["check"], "duality.witt-cont-exhaustive");
}

#[test]
fn replete_rejects_a_non_surjective_tower() {
    let tower = r#"{"depth":1,"levels":[["a","b"],["c"]],"transitions":[[0]]}"#;
    let out = wittstone(&["profinite", "replete", "--tower", tower, "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("misses point 1"));
    assert!(wittstone(&["profinite", "replete", "--canonical", "cantor", "--depth", "4"]).status.success());
}
