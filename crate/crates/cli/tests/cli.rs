use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn verlinde(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verlinde"))
        .args(args)
        .env("VERLINDE_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn info_reports_dual_coxeter_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = verlinde(dir.path(), &["info", "A1"]);
    assert_eq!(a1.status.code(), Some(0));
    assert!(stdout(&a1).contains("h^v = 2\n"));
    // G2: h^v = 1 + comarks (1 + 2)
    let g2 = json(&verlinde(dir.path(), &["info", "G2", "--format", "json"]));
    assert_eq!(g2["dual_coxeter"], 4);
    assert_eq!(g2["weyl_order"], 12);
    assert_eq!(g2["comarks"], serde_json::json!([1, 2]));
    let bad = verlinde(dir.path(), &["info", "Z9"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("Z9"));
}

#[test]
fn fusion_products_and_range_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(stdout(&verlinde(dir.path(), &["fusion", "A1", "1", "1", "1"])), "0:1\n");
    assert_eq!(stdout(&verlinde(dir.path(), &["fusion", "A1", "2", "1", "1"])), "0:1 2:1\n");
    let out = verlinde(dir.path(), &["fusion", "A1", "1", "2", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("valid labels: 0 1"), "{}", stderr(&out));
    let out = verlinde(dir.path(), &["fusion", "A2", "1", "1", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

/// `|a − b| ≤ c ≤ min(a + b, 2k − a − b)` with `a + b + c` even.
fn su2(a: i64, b: i64, c: i64, k: i64) -> u64 {
    u64::from((a - b).abs() <= c && c <= (a + b).min(2 * k - a - b) && (a + b + c) % 2 == 0)
}

#[test]
fn fusion_table_schema_and_values() {
    let dir = tempfile::tempdir().unwrap();
    let k = 4i64;
    let out = verlinde(dir.path(), &["fusion-table", "A1", "4", "--format", "json", "--no-cache"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.ends_with("}\n"));
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["type", "rank", "level", "labels", "products"]);
    assert_eq!(v["labels"], serde_json::json!(["0", "1", "2", "3", "4"]));
    for a in 0..=k {
        for b in 0..=k {
            let entry = &v["products"][format!("{a}|{b}")];
            for c in 0..=k {
                let got = entry.get(c.to_string()).and_then(Value::as_u64).unwrap_or(0);
                assert_eq!(got, su2(a, b, c, k), "{a} {b} {c}");
            }
        }
    }
    let csv = stdout(&verlinde(dir.path(), &["fusion-table", "A2", "1", "--format", "csv", "--no-cache"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("lambda,mu,nu,N"));
    assert_eq!(lines.next(), Some("\"0,0\",\"0,0\",\"0,0\",1"));
    assert_eq!(csv.lines().count(), 1 + 9);
    let verified = verlinde(dir.path(), &["fusion-table", "G2", "2", "--verify", "--no-cache"]);
    assert_eq!(verified.status.code(), Some(0));
    assert!(stderr(&verified).contains("PASS"));
}

#[test]
fn cache_hits_are_byte_identical_and_corruption_recovers() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fusion-table", "A2", "2", "--format", "json"];
    let first = verlinde(dir.path(), &args);
    let entry = dir.path().join("fusion-table-v1-A2-k2.json");
    assert_eq!(fs::read(&entry).unwrap(), first.stdout);
    let second = verlinde(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    assert!(stderr(&second).is_empty());

    fs::write(&entry, "{\"labels\": [").unwrap();
    let third = verlinde(dir.path(), &args);
    assert!(stderr(&third).contains("warning"), "{}", stderr(&third));
    assert_eq!(third.stdout, first.stdout);
    assert_eq!(fs::read(&entry).unwrap(), first.stdout);

    let h = ["homology", "A1", "2", "--trunc", "3", "--format", "json"];
    let a = verlinde(dir.path(), &h);
    assert!(dir.path().join("homology-v1-A1-k2-L3.json").exists());
    assert_eq!(a.stdout, verlinde(dir.path(), &h).stdout);
}

#[test]
fn cache_location_and_bypass() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let flag = flag_dir.path().to_str().unwrap();
    verlinde(env_dir.path(), &["fusion-table", "A1", "3", "--cache-dir", flag]);
    assert!(flag_dir.path().join("fusion-table-v1-A1-k3.json").exists());
    assert!(fs::read_dir(env_dir.path()).unwrap().next().is_none());
    verlinde(env_dir.path(), &["fusion-table", "A1", "3", "--no-cache"]);
    assert!(fs::read_dir(env_dir.path()).unwrap().next().is_none());
    verlinde(env_dir.path(), &["fusion-table", "A1", "3"]);
    assert!(env_dir.path().join("fusion-table-v1-A1-k3.json").exists());
}

#[test]
fn homology_runs_match_alcove_sizes() {
    let dir = tempfile::tempdir().unwrap();
    // (type, k, L, |alcove|); A1 has k + 1 labels, A2 has (k + 1)(k + 2)/2
    for (ty, k, l, size) in [("A1", "1", "4", 2), ("A2", "1", "3", 3), ("A1", "0", "2", 1)] {
        let out = verlinde(dir.path(), &["homology", ty, k, "--trunc", l, "--format", "json", "--no-cache"]);
        assert_eq!(out.status.code(), Some(0), "{ty} {k}");
        let v = json(&out);
        assert_eq!(v["expected"], "PASS");
        let degrees = v["degrees"].as_array().unwrap();
        assert_eq!(degrees.len(), ty[1..].parse::<usize>().unwrap() + 1);
        assert_eq!(degrees[0]["rank"], size);
        assert!(degrees[1..].iter().all(|d| d["rank"] == 0 && d["torsion"] == serde_json::json!([])));
    }
    let plain = stdout(&verlinde(dir.path(), &["homology", "A1", "1", "--trunc", "4", "--no-cache"]));
    assert!(plain.contains("degree 0: chains 30, rank 2, torsion []\n"));
    assert!(plain.ends_with("PASS\n"));
    let limited = verlinde(dir.path(), &["homology", "A2", "2", "--trunc", "3", "--max-basis", "10", "--no-cache"]);
    assert_eq!(limited.status.code(), Some(3));
    assert!(stderr(&limited).contains("resource limit"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["homology", "B2", "1", "--trunc", "2", "--format", "json", "--no-cache"][..],
        &["reduce", "A2", "1", "1*0/3,3", "--trace", "--format", "json"][..],
    ] {
        assert_eq!(verlinde(dir.path(), args).stdout, verlinde(dir.path(), args).stdout);
    }
}

#[test]
fn reduce_prints_canonical_forms_and_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let same = json(&verlinde(dir.path(), &["reduce", "A1", "1", "1*0/1", "--format", "json"]));
    assert_eq!(same["canonical"], serde_json::json!(["1*0/1"]));
    assert_eq!(same["witness"]["z"], serde_json::json!([]));

    // (4) = s_0 ⋆ (0) at level 1 is one reflection from the alcove.
    let out = verlinde(dir.path(), &["reduce", "A1", "1", "1*0/4", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("canonical: -1*0/0\n"), "{text}");
    assert!(text.contains("witness verified: yes\n"));
    let steps: Vec<&str> = text.lines().filter(|l| l.starts_with("  distance")).collect();
    assert_eq!(steps.len(), 2, "{text}");
    assert!(steps[0].contains("distance 1") && steps[0].contains("via s_1"));

    let broken = verlinde(dir.path(), &["reduce", "A1", "1", "1*0,1/4"]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(stderr(&broken).contains("not a cycle; its boundary is"), "{}", stderr(&broken));
    let garbled = verlinde(dir.path(), &["reduce", "A1", "1", "1*0/"]);
    assert_eq!(garbled.status.code(), Some(1));
}

#[test]
fn csv_is_only_for_tables() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(verlinde(dir.path(), &["info", "A1", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(verlinde(dir.path(), &["nonsense"]).status.code(), Some(1));
    assert_eq!(verlinde(dir.path(), &["--help"]).status.code(), Some(0));
}

/// Every `$ verlinde ...` block in the schema document is followed by the
/// exact output of that command.
#[test]
fn documented_examples_are_current() {
    let doc = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/json-schema.md")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut checked = 0;
    let mut lines = doc.lines();
    while let Some(line) = lines.next() {
        let Some(cmd) = line.strip_prefix("$ verlinde ") else { continue };
        assert_eq!(lines.next(), Some("```"), "{cmd}");
        assert_eq!(lines.next(), Some("```json"), "{cmd}");
        let mut expected = String::new();
        for l in lines.by_ref().take_while(|l| *l != "```") {
            expected.push_str(l);
            expected.push('\n');
        }
        let args: Vec<&str> = cmd.split_whitespace().map(|a| a.trim_matches('\'')).collect();
        let out = verlinde(dir.path(), &args);
        assert_eq!(stdout(&out), expected, "{cmd}");
        checked += 1;
    }
    assert_eq!(checked, 5);
}
