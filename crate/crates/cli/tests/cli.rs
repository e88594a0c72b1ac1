use std::path::PathBuf;
use std::process::{Command, Output};

fn vrpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vrpf")).args(args).output().expect("run vrpf")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", &format!("{name}.json")].iter().collect();
    p.to_string_lossy().into_owned()
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const TWO_LOOPS: &str = r#"{
  "name": "two-loops",
  "vertices": [0],
  "edges": [
    { "id": 0, "bar": 1, "tau": 0 }, { "id": 1, "bar": 0, "tau": 0 },
    { "id": 2, "bar": 3, "tau": 0 }, { "id": 3, "bar": 2, "tau": 0 }
  ],
  "vertex_ranks": { "0": 2 },
  "edge_factors": {
    "0": { "selected": [1, 2] }, "1": { "selected": [1, 2] },
    "2": { "selected": [1] }, "3": { "selected": [1] }
  },
  "edge_maps": {
    "0": { "source_rank": 2, "images": [[2], [1]] },
    "2": { "source_rank": 1, "images": [[1]] }
  }
}"#;

#[test]
fn validate_fixtures_and_broken_graphs() {
    for name in ["swap", "fibonacci", "partial-hnn", "amalgam"] {
        assert_eq!(code(&vrpf(&["validate", &fixture(name)])), 0, "{name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let bad_bar = std::fs::read_to_string(fixture("swap"))
        .unwrap()
        .replace(r#"{ "id": 1, "bar": 0, "tau": 0 }"#, r#"{ "id": 1, "bar": 1, "tau": 0 }"#);
    let o = vrpf(&["validate", &write_tmp(&dir, "bar.json", &bad_bar)]);
    assert_eq!(code(&o), 4);
    assert!(!stderr(&o).is_empty());

    let non_basis = std::fs::read_to_string(fixture("amalgam")).unwrap().replace("[[1]]", "[[1, 1]]");
    let o = vrpf(&["validate", &write_tmp(&dir, "nb.json", &non_basis)]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("NotABasisOfFactor"), "{}", stderr(&o));

    let o = vrpf(&["validate", &write_tmp(&dir, "junk.json", "{ not json")]);
    assert_eq!(code(&o), 4);
    assert_eq!(code(&vrpf(&["validate", "/nonexistent/graph.json"])), 4);
}

#[test]
fn separate_spec_examples() {
    let swap = fixture("swap");
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("x1.json");
    let cert_s = cert.to_string_lossy().into_owned();

    let o = vrpf(&["separate", &swap, "x1", "--cert-out", &cert_s]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&vrpf(&["verify", &cert_s, &swap, "x1"])), 0);

    let o = vrpf(&["separate", &swap, ""]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).is_empty());

    let o = vrpf(&["separate", &swap, "t1"]);
    assert_eq!(code(&o), 2);
    assert!(!stdout(&o).contains("generator_images"));

    assert_eq!(code(&vrpf(&["separate", &swap, "x7"])), 4);
    assert_eq!(code(&vrpf(&["--p", "7", "separate", &swap, "x1"])), 4);
    assert_eq!(code(&vrpf(&["--order-cap", "0", "separate", &swap, "x1"])), 4);
}

#[test]
fn verify_rejects_wrong_word_and_mutations() {
    let fib = fixture("fibonacci");
    let o = vrpf(&["separate", &fib, "x1 x2 x1^-1 x2^-1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let json = stdout(&o);
    let dir = tempfile::tempdir().unwrap();
    let good = write_tmp(&dir, "good.json", &json);
    assert_eq!(code(&vrpf(&["verify", &good, &fib, "x1 x2 x1^-1 x2^-1"])), 0);
    // the trivial word has identity image
    assert_eq!(code(&vrpf(&["verify", &good, &fib, "x1 x1^-1"])), 1);

    let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
    v["order_exp"] = serde_json::json!(v["order_exp"].as_u64().unwrap() + 1);
    let bad = write_tmp(&dir, "bad.json", &v.to_string());
    assert_ne!(code(&vrpf(&["verify", &bad, &fib, "x1 x2 x1^-1 x2^-1"])), 0);

    let junk = write_tmp(&dir, "junk.json", "[]");
    assert_eq!(code(&vrpf(&["verify", &junk, &fib, "x1"])), 4);
}

#[test]
fn separate_is_deterministic_across_jobs() {
    let amalgam = fixture("amalgam");
    let one = vrpf(&["--p", "3", "separate", &amalgam, "x1 x3 x1^-1 x3^-1"]);
    let four = vrpf(&["--p", "3", "--jobs", "4", "separate", &amalgam, "x1 x3 x1^-1 x3^-1"]);
    assert_eq!(code(&one), 0, "{}", stderr(&one));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn depth_cap_exit_code() {
    // a deep commutator needs more than one filtration level
    let o = vrpf(&["--depth-cap", "1", "separate", &fixture("swap"), "x1 x2 x1^-1 x2^-1"]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn reduce_and_collapse() {
    let fib = fixture("fibonacci");
    let o = vrpf(&["reduce", &fib, "t1 x1 t1^-1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "x2");
    assert_eq!(stdout(&vrpf(&["reduce", &fib, "t1 x1 x1^-1 t1^-1"])).trim(), "1");

    let o = vrpf(&["collapse", &fixture("amalgam")]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 3);
}

#[test]
fn info_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = vrpf(&["info", &write_tmp(&dir, "two.json", TWO_LOOPS)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("quotient rank 2"), "{}", stdout(&o));

    let o = vrpf(&["info", &fixture("amalgam")]);
    assert!(stdout(&o).contains("collapsed rank: 3"));
    assert!(stdout(&o).contains("[3, "), "dim L_1 = rank: {}", stdout(&o));
}

#[test]
fn pfilt_commands() {
    assert_eq!(stdout(&vrpf(&["pfilt", "dims", "--rank", "1", "--depth", "4"])).trim(), "[1, 1, 1]");
    assert_eq!(stdout(&vrpf(&["pfilt", "dims", "--depth", "3"])).trim(), "[2, 3]");
    assert_eq!(stdout(&vrpf(&["pfilt", "member", "x1^2", "--level", "2"])).trim(), "true");
    assert_eq!(stdout(&vrpf(&["--p", "3", "pfilt", "member", "x1^2", "--level", "2"])).trim(), "false");
    assert_eq!(code(&vrpf(&["pfilt", "dims", "--depth", "9"])), 3);
}

#[test]
fn lemmalab_suites() {
    let o = vrpf(&["lemmalab", "sigma-order", "--samples", "20"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failures"));
    assert_eq!(code(&vrpf(&["--p", "3", "lemmalab", "theta-propagation", "--samples", "10"])), 0);
    assert_eq!(code(&vrpf(&["lemmalab", "filtration-laws", "--depth", "9"])), 3);
    assert_eq!(code(&vrpf(&["lemmalab", "no-such-suite"])), 4);
}

#[test]
fn fixture_scheme_and_byte_identical_output() {
    let a = vrpf(&["--p", "3", "separate", "fixture:fibonacci", "x1 x2^-1"]);
    let b = vrpf(&["--p", "3", "separate", &fixture("fibonacci"), "x1 x2^-1"]);
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
}
