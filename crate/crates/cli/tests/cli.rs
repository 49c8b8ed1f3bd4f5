use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("misere-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Runs the binary; returns (exit code, stdout, stderr).
fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_misere"))
        .args(args)
        .env("MISERE_JOBS", "1")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn enumerate_text() {
    let (code, out, _) = run(&["enumerate", "--max-order", "8"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "order 2: 1 class\norder 3: 0 classes\norder 4: 0 classes\norder 5: 0 classes\n\
         order 6: 1 class\norder 7: 0 classes\norder 8: 1 class\ncensus complete\n"
    );
}

#[test]
fn enumerate_json_file() {
    let f = tmp("census.json");
    let (code, out, _) = run(&["--format", "json", "enumerate", "--max-order", "10", "--out", path(&f)]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(doc, file);
    assert_eq!(doc["counts"]["10"], 1);
    assert_eq!(doc["classes"]["6"][0]["monoid"]["size"], 6);
    assert!(doc.get("complete").is_none());
}

#[test]
fn enumerate_deep_gate_and_partial() {
    let (code, _, err) = run(&["enumerate", "--max-order", "16"]);
    assert_eq!(code, 64);
    assert!(err.contains("--deep"));
    let (code, out, _) = run(&["enumerate", "--max-order", "10", "--max-worklist", "1"]);
    assert_eq!(code, 2);
    assert!(out.ends_with("census partial: a search limit was hit, counts are lower bounds\n"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).0, 64);
    assert_eq!(run(&["enumerate"]).0, 64);
    assert_eq!(run(&["enumerate", "--max-order", "0"]).0, 64);
    assert_eq!(run(&["--jobs", "0", "grundy", "--code", "0.7", "--to", "3"]).0, 64);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn verify_table_golden() {
    let (code, out, _) = run(&["verify-table", "--input", path(&data("t2_minimex.json"))]);
    assert_eq!(code, 0);
    assert_eq!(out, "parity: ok\ncompleteness: ok\nclosure: ok\nwell-foundedness: ok\nvalid\n");

    let (code, out, _) = run(&["verify-table", "--input", path(&data("t2_bad.json"))]);
    assert_eq!(code, 1);
    assert!(out.starts_with("parity: FAILED\n"));
    assert!(out.contains("  parity fails at (4, {3})\n"));
    assert!(out.ends_with("not valid\n"));
}

#[test]
fn verify_table_json() {
    let (_, out, _) = run(&["--format", "json", "verify-table", "--input", path(&data("t2_minimex.json"))]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["pairs"], 12);
    assert_eq!(doc["rank"].as_array().unwrap().len(), 6);
}

#[test]
fn is_quotient_verdicts() {
    let (code, out, _) = run(&["is-quotient", "--input", path(&data("r8.json"))]);
    assert_eq!(code, 0);
    assert!(out.starts_with("quotient: construction sequence ["));

    // T2 with P moved onto a non-generator: reduced but not a quotient
    let (code, out, _) = run(&["is-quotient", "--input", path(&data("t2_wrong_p.json"))]);
    assert_eq!((code, out.as_str()), (1, "not a quotient\n"));

    let (code, _, err) = run(&["is-quotient", "--input", path(&data("unreduced.json"))]);
    assert_eq!(code, 65);
    assert!(err.contains("not reduced"));
}

#[test]
fn reduce_writes_monoid() {
    let f = tmp("reduced.json");
    let (code, out, _) = run(&["reduce", "--input", path(&data("unreduced.json")), "--out", path(&f)]);
    assert_eq!((code, out.as_str()), (0, "order 4 reduces to order 2\n"));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(m["size"], 2);
}

#[test]
fn tame_ladder() {
    let (code, out, _) = run(&["tame", "--base", "t2", "--steps", "2"]);
    assert_eq!((code, out.as_str()), (0, "order 6 after 2 steps gives order 18\n"));
    let (_, out, _) = run(&["tame", "--base", "r8", "--steps", "1"]);
    assert_eq!(out, "order 8 after 1 steps gives order 12\n");
    let (_, out, _) = run(&["tame", "--base", path(&data("t2.txt")), "--steps", "0"]);
    assert_eq!(out, "order 6 after 0 steps gives order 6\n");
    assert_eq!(run(&["tame", "--base", "t2", "--steps", "9"]).0, 64);
}

#[test]
fn classify_golden() {
    let (_, out, _) = run(&["classify", "--input", path(&data("r8.json"))]);
    assert_eq!(out, "R family, n=2 (order 8)\n");
    let (_, out, _) = run(&["classify", "--input", path(&data("t3.json"))]);
    assert_eq!(out, "T family, n=3 (order 10)\n");
    let (_, out, _) = run(&["--format", "json", "classify", "--input", path(&data("t2.txt"))]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["order"], 6);
    assert_eq!(doc["anomaly"], false);
}

#[test]
fn realize_then_outcome() {
    let f = tmp("games.json");
    let (code, out, _) = run(&["realize", "--input", path(&data("t2_minimex.json")), "--out", path(&f)]);
    assert_eq!((code, out.as_str()), (0, "realized 6 elements and 12 pairs with 12 games\n"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(doc["elements"].as_array().unwrap().len(), 6);

    let g = path(&f);
    let ask = |pos: &str, conv: &str| run(&["outcome", "--games", g, "--position", pos, conv]).1;
    // ∗ is element a; ∗2 is z_2
    assert_eq!(ask("0", "--misere"), "N\n");
    assert_eq!(ask("g1", "--misere"), "P\n");
    assert_eq!(ask("2*g1", "--misere"), "N\n");
    assert_eq!(ask("2*g1", "--normal"), "P\n");
    assert_eq!(ask("g2", "--normal"), "N\n");

    assert_eq!(run(&["realize", "--input", path(&data("t2_bad.json"))]).0, 65);
    assert_eq!(run(&["outcome", "--games", g, "--position", "g999"]).0, 65);
    assert_eq!(run(&["outcome", "--games", g, "--position", "g1+"]).0, 64);
}

#[test]
fn grundy_golden() {
    let (code, out, _) = run(&["grundy", "--code", "0.137", "--to", "20"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0 1 1 2 0 3 1 1 0 3 3 2 2 4 0 5 2 2 3 3 0\n");
    let (_, out, _) = run(&["--format", "json", "grundy", "--code", "0.07", "--to", "6"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["values"], serde_json::json!([0, 0, 1, 1, 2, 0, 3]));
    assert_eq!(run(&["grundy", "--code", "0.9x", "--to", "3"]).0, 64);
}

#[test]
fn almost_tame_golden() {
    let q = data("t2.json");
    let phi = data("phi_033.json");
    let (code, out, _) =
        run(&["almost-tame", "--code", "0.33", "--n0", "2", "--quotient", path(&q), "--phi", path(&phi)]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "Q(Γ) ≅ T^k(Q) for some k ∈ ℕ ∪ {∞}, where Q has order 6\n  heap 2 -> element 4\n  \
         heap 3 -> element 2\n  heap 4 -> element 3\n  heap 5 -> element 4\n"
    );
    let (code, out, _) =
        run(&["almost-tame", "--code", "0.33", "--n0", "1", "--quotient", path(&q), "--phi", path(&phi)]);
    assert_eq!(code, 1);
    assert!(out.starts_with("inapplicable: "));
}

#[test]
fn iso_golden() {
    let (code, out, _) = run(&["iso", "--a", path(&data("t2.txt")), "--b", path(&data("t2.json"))]);
    assert_eq!((code, out.as_str()), (0, "isomorphic\n"));
    let (code, out, _) = run(&["iso", "--a", path(&data("t2.json")), "--b", path(&data("r8.json"))]);
    assert_eq!((code, out.as_str()), (1, "not isomorphic\n"));
}

#[test]
fn bad_inputs() {
    let junk = tmp("junk.json");
    std::fs::write(&junk, "{\"size\": 2}").unwrap();
    assert_eq!(run(&["classify", "--input", path(&junk)]).0, 65);
    std::fs::write(&junk, "gens: a\nrels: a2=\n").unwrap();
    assert_eq!(run(&["classify", "--input", path(&junk)]).0, 65);
    assert_eq!(run(&["classify", "--input", "/nonexistent/x.json"]).0, 74);
}

#[test]
fn census_file_ignores_jobs() {
    let (a, b) = (tmp("jobs1.json"), tmp("jobs2.json"));
    assert_eq!(run(&["--jobs", "1", "enumerate", "--max-order", "12", "--out", path(&a)]).0, 0);
    assert_eq!(run(&["--jobs", "2", "enumerate", "--max-order", "12", "--out", path(&b)]).0, 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
