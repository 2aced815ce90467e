use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn liepi(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liepi"))
        .args(args)
        .arg("--cache")
        .arg(cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn catalog_lists_eight_algebras() {
    let dir = tempfile::tempdir().unwrap();
    let out = liepi(&["catalog"], &dir.path().join("c"));
    assert!(out.status.success());
    let v = json(&out);
    let names: Vec<&str> = v["result"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 8);
    assert!(names.contains(&"sl2_natural"));
}

#[test]
fn exponent_and_codim_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let out = liepi(&["exponent", "sl2"], &cache);
    assert!(out.status.success());
    assert_eq!(json(&out)["result"]["d"], 3);

    let out = liepi(&["codim", "heisenberg3", "--n", "4"], &cache);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("\"c_4\": 0"), "{text}");
    assert_eq!(json(&out)["provenance"]["config"]["mode"], "exact");
}

#[test]
fn loads_algebra_files() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let file = dir.path().join("solvable.json");
    std::fs::write(&file, r#"{"dim": 2, "brackets": {"1,2": [["1", 2]]}}"#).unwrap();
    let out = liepi(&["validate", file.to_str().unwrap()], &cache);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["dim"], 2);
    assert_eq!(v["result"]["abelian"], false);

    let out = liepi(&["exponent", file.to_str().unwrap()], &cache);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "hypothesis-failure");

    // [b1,b2] = b3, [b1,b3] = b1 and nothing else: Jacobi fails on (1,2,3)
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 3, "brackets": {"1,2": [["1", 3]], "1,3": [["1", 1]]}}"#).unwrap();
    let out = liepi(&["validate", bad.to_str().unwrap()], &cache);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "jacobi-violation");
    assert_eq!(v["error"]["triple"], serde_json::json!([1, 2, 3]));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"dim\": 2,\n \"brackets\": {\"1,2\": [[1, 2]]}}").unwrap();
    let out = liepi(&["validate", broken.to_str().unwrap()], &cache);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("line 2"));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    assert_eq!(liepi(&["analyze", "nonexistent"], &cache).status.code(), Some(2));
    assert_eq!(liepi(&["codim"], &cache).status.code(), Some(2));
    assert_eq!(liepi(&["analyze", "sl2", "--format", "csv"], &cache).status.code(), Some(2));
    let out = liepi(&["capelli", "sl2", "--rank", "3", "--n", "5", "--budget", "100"], &cache);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["error"]["kind"], "budget-exceeded");
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["cocharacter", "sl2_natural", "--no-cache"],
        vec!["codim", "gl2", "--mode", "modular", "--seed", "7", "--no-cache"],
        vec!["verify-upper", "sl2_natural", "--n", "8", "--samples", "3", "--seed", "11", "--no-cache"],
        vec!["growth", "sl2", "--max-n", "4", "--format", "csv", "--no-cache"],
    ] {
        let a = liepi(&args, &dir.path().join("c"));
        let b = liepi(&args, &dir.path().join("c"));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.csv");
    let out = liepi(
        &["codim", "sl2", "--max-n", "4", "--format", "csv", "--out", target.to_str().unwrap()],
        &dir.path().join("c"),
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(target).unwrap();
    assert_eq!(text, "n,c_n,certainty,failure_bound\n1,1,exact,\n2,1,exact,\n3,2,exact,\n4,6,exact,\n");
}

#[test]
fn cached_results_match_fresh_ones() {
    use rand::{Rng, SeedableRng};
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let names = ["abelian3", "heisenberg3", "sl2", "gl2", "sl2_natural", "sl2_adjoint", "sl2_plus_sl2", "solvable2"];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut hits = 0;
    for _ in 0..20 {
        let name = names[rng.gen_range(0..names.len())];
        let n = rng.gen_range(1..=5).to_string();
        let op = if rng.gen_bool(0.5) { "codim" } else { "cocharacter" };
        let first = liepi(&[op, name, "--n", &n], &cache);
        let cached = liepi(&[op, name, "--n", &n], &cache);
        let fresh = liepi(&[op, name, "--n", &n, "--no-cache"], &cache);
        assert!(first.status.success());
        assert_eq!(cached.stdout, fresh.stdout, "{op} {name} {n}");
        assert_eq!(first.stdout, fresh.stdout, "{op} {name} {n}");
        hits += String::from_utf8_lossy(&cached.stderr).contains("hit") as usize;
    }
    assert_eq!(hits, 20);
}
