use std::path::Path;
use std::process::{Command, Output};

use qk_core::builtins::{builtin_algebra, builtin_group, builtin_group_spec, builtin_presentation, BUILTIN_ALGEBRAS, BUILTIN_GROUPS};
use qk_core::groups::{make_group, GroupSpec};
use qk_core::algebras::{AlgebraSpec, CommRingSpec};
use serde_json::Value;

fn qk(args: &[&str]) -> Output {
    qk_env(args, &[])
}

fn qk_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qk"));
    cmd.args(args).env_remove("QK_ENTRY_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("qk runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn coinvariants_shift_example() {
    let out = qk(&["verify", "coinvariants-shift", "--group", "builtin:C2", "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let ls = lines(&out);
    assert_eq!(ls[0]["tool"], "qk");
    let r = &ls[1];
    let expected: Value = serde_json::json!(["Z/2", "0", "Z/2"]);
    assert_eq!(r["left"], expected);
    assert_eq!(r["right"], expected);
    assert_eq!(r["verdict"], "equal");
}

#[test]
fn trivial_group_homology_example() {
    let out = qk(&["compute", "group-homology", "--group", "builtin:trivial", "--coeffs", "trivial", "--no-banner"]);
    assert_eq!(out.status.code(), Some(0));
    let ls = lines(&out);
    assert_eq!(ls.len(), 1);
    assert_eq!(ls[0]["values"], serde_json::json!(["Z", "0", "0", "0"]));
}

#[test]
fn hochschild_shift_example() {
    let out = qk(&["verify", "hochschild-shift", "--algebra", "builtin:dual-numbers-Q", "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(lines(&out)[1]["verdict"], "equal");
}

#[test]
fn default_battery_passes() {
    let out = qk(&["battery", "--no-banner"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let ls = lines(&out);
    let summary = ls.last().unwrap();
    assert_eq!(summary["name"], "battery-summary");
    assert_eq!(summary["failed"], 0);
    assert_eq!(summary["passed"], summary["total"]);
    assert!(ls[..ls.len() - 1].iter().all(|r| r["verdict"] == "equal"));
}

#[test]
fn tiny_entry_cap_exits_3() {
    let out = qk(&["battery", "--no-banner", "--entry-cap", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let ls = lines(&out);
    assert!(ls.iter().any(|r| r["error"]["kind"] == "size-cap"));
    let out = qk_env(&["battery", "--no-banner"], &[("QK_ENTRY_CAP", "10")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn corrupted_group_table_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // (1*2)*2 = 0 but 1*(2*2) = 1
    std::fs::write(&path, r#"{"kind":"table","table":[[0,1,2],[1,0,2],[2,2,0]]}"#).unwrap();
    let out = qk(&["battery", "--no-banner", "--group-fixture", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("group axiom violated"), "{msg}");
    assert!(msg.contains("associativity fails on ("), "{msg}");
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, r#"{"kind":"table","tabel":[[0]]}"#).unwrap();
    let out = qk(&["verify", "coinvariants-shift", "--group", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("tabel"));
    let path = dir.path().join("a.json");
    std::fs::write(&path, r#"{"field":"Q","dim":1,"mul":[[[1]]]}"#).unwrap();
    let out = qk(&["verify", "hochschild-shift", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unit"));
    let out = qk(&["verify", "coinvariants-shift"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--group"));
    let out = qk(&["battery", "--entry-cap", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn user_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("c3.json");
    std::fs::write(&g, r#"{"kind":"table","table":[[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
    let out = qk(&["verify", "coinvariants-shift", "--group", g.to_str().unwrap(), "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = dir.path().join("r.json");
    std::fs::write(&r, r#"{"field":{"Fp":2},"vars":["x"],"relations":["x^2"]}"#).unwrap();
    let out = qk(&["verify", "comparison-map", "--algebra", r.to_str().unwrap(), "--no-banner"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(lines(&out)[0]["left"], serde_json::json!([2]));
}

#[test]
fn output_is_deterministic() {
    let a = qk(&["battery"]);
    let b = qk(&["battery", "--sequential"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.jsonl");
    let c = qk(&["battery", "--output", path.to_str().unwrap()]);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn csv_format() {
    let out = qk(&["verify", "torsionfree-beck", "--format", "csv", "--no-banner"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().collect::<Vec<_>>(), ["kind", "name", "verdict", "left", "right", "extra"]);
    let recs: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert!(recs.len() >= 10);
    assert!(recs.iter().all(|r| &r[0] == "report" && &r[2] == "equal"));
}

#[test]
fn every_verb_runs() {
    for what in [
        "commutativization",
        "square-zero",
        "torsionfree-beck",
        "quillen-pair",
        "factor-epi-mono",
        "module-adjunction",
        "comparison-map",
    ] {
        let out = qk(&["verify", what, "--no-banner"]);
        assert_eq!(out.status.code(), Some(0), "{what}: {}", stderr(&out));
    }
    let out = qk(&["verify", "module-adjunction", "--group", "builtin:C2", "--coeffs", "augmentation", "--module", "Z/4"]);
    assert_eq!(lines(&out)[1]["left"], serde_json::json!([2]));
    let out = qk(&["verify", "module-adjunction", "--group", "builtin:C2", "--module", "Z"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("finite coefficients"));
    for (what, obj) in [
        ("group-cohomology", "--group=builtin:S3"),
        ("abelianization", "--group=builtin:Q8"),
        ("coinvariants", "--group=builtin:D4"),
        ("hochschild-homology", "--algebra=builtin:M2(Q)"),
        ("central-quotient", "--algebra=builtin:upper-triangular-2"),
        ("kaehler-differentials", "--algebra=builtin:Q[x]/(x^3)"),
    ] {
        let out = qk(&["compute", what, obj, "--max-degree", "2", "--no-banner"]);
        assert_eq!(out.status.code(), Some(0), "{what}: {}", stderr(&out));
    }
    let out = qk(&["compute", "abelianization", "--group=builtin:Q8", "--no-banner"]);
    assert_eq!(lines(&out)[0]["values"], serde_json::json!(["(Z/2)^2"]));
}

fn schema_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schemas"))
}

fn validator(name: &str) -> jsonschema::Validator {
    let mut opts = jsonschema::options();
    for entry in std::fs::read_dir(schema_dir()).unwrap() {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(entry.unwrap().path()).unwrap()).unwrap();
        let id = v["$id"].as_str().unwrap().to_string();
        opts = opts.with_resource(id, jsonschema::Resource::from_contents(v).unwrap());
    }
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_dir().join(format!("{name}.v1.schema.json"))).unwrap())
            .unwrap();
    opts.build(&schema).unwrap()
}

#[test]
fn output_lines_match_record_schema() {
    let v = validator("record");
    let out = qk(&["battery"]);
    for line in lines(&out) {
        assert!(v.is_valid(&line), "{line}");
    }
    let out = qk(&["battery", "--entry-cap", "10"]);
    for line in lines(&out) {
        assert!(v.is_valid(&line), "{line}");
    }
}

#[test]
fn builtins_round_trip_through_schemas() {
    let gv = validator("group");
    for name in BUILTIN_GROUPS {
        let json = serde_json::to_value(builtin_group_spec(name).unwrap()).unwrap();
        assert!(gv.is_valid(&json), "{name}: {json}");
        let back: GroupSpec = serde_json::from_value(json).unwrap();
        assert_eq!(make_group(&back).unwrap(), builtin_group(name).unwrap());
    }
    let av = validator("algebra");
    let rv = validator("commring");
    for name in BUILTIN_ALGEBRAS {
        let a = builtin_algebra(name).unwrap();
        let json = serde_json::to_value(a.spec()).unwrap();
        assert!(av.is_valid(&json), "{name}");
        let back: AlgebraSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back.build().unwrap(), a);
        if let Some(p) = builtin_presentation(name).unwrap() {
            let json = serde_json::to_value(p.spec()).unwrap();
            assert!(rv.is_valid(&json), "{name}: {json}");
            let back: CommRingSpec = serde_json::from_value(json).unwrap();
            assert_eq!(back.build().unwrap().to_algebra().unwrap(), a);
        }
    }
}
