//! End-to-end runs of the `modchain` binary on the fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

use modchain::io;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modchain")).args(args).arg("--no-timing").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn modular_labeling_of_n5() {
    let out = run(&["label", "modular", "--poset", &fixture("n5.json"), "--chain", "0,b,c,1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["command"], "label modular");
    assert_eq!(r["results"]["r"], 3);
    assert_eq!(r["results"]["quasi_el"], true);
    // min{i : y ∨ (m_i ∧ z) = z} evaluated by hand on N5 with m = 0 < b < c < 1
    let expected = [("0", "a", 3), ("0", "b", 1), ("a", "1", 1), ("b", "c", 2), ("c", "1", 3)];
    let edges = r["results"]["labeling"]["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 5);
    for (from, to, label) in expected {
        let e = edges.iter().find(|e| e["from"] == from && e["to"] == to).unwrap();
        assert_eq!(e["label"], label, "{from} -> {to}");
    }
    assert_eq!(r["element_order"], serde_json::json!(["0", "a", "b", "c", "1"]));
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn s4_solvable_by_depth() {
    let out = run(&["group", "solvable", "--method", "depth", &fixture("s4.grp")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["results"]["solvable"], true);
    assert_eq!(r["results"]["depth"], 1);
    assert_eq!(r["results"]["r"], 3);
}

#[test]
fn a5_nonsolvable_by_both_methods() {
    for method in ["depth", "skeleton"] {
        let out = run(&["group", "solvable", "--method", method, &fixture("a5.grp")]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert_eq!(report(&out)["results"]["solvable"], false, "{method}");
    }
}

#[test]
fn cyclic_poset_is_an_input_error() {
    let out = run(&["poset", "check", &fixture("cyclic.json")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("CycleDetected"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_inputs_are_rejected() {
    let out = run(&["poset", "check", &fixture("extra_key.json")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown field"));

    let dir = tempfile::tempdir().unwrap();
    let bom = dir.path().join("bom.json");
    let body = std::fs::read(fixture("n5.json")).unwrap();
    std::fs::write(&bom, [b"\xef\xbb\xbf".as_slice(), &body].concat()).unwrap();
    let out = run(&["poset", "check", bom.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("ByteOrderMark"));

    let out = run(&["poset", "check", "/nonexistent/poset.json"]);
    assert_eq!(code(&out), 2);

    let out = run(&["group", "lattice", &fixture("s4.grp"), "--order-limit", "10"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("exceeds the limit"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["poset"])), 2);
    assert_eq!(code(&run(&["group", "solvable", "--method", "guess", &fixture("s3.grp")])), 2);
    assert_eq!(code(&run(&["complex", "vd", "--complex", &fixture("two_edges.json"), "--poset", &fixture("n5.json")])), 2);
}

#[test]
fn poset_check_reports_grading_witness() {
    let out = run(&["poset", "check", &fixture("n5.json")]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["results"]["lattice"], true);
    assert_eq!(r["results"]["graded"], false);
    assert_eq!(r["results"]["shorter_chain"], serde_json::json!(["0", "a", "1"]));
    let out = run(&["poset", "check", &fixture("b2.json")]);
    assert_eq!(report(&out)["results"]["rank"], serde_json::json!([0, 1, 1, 2]));
}

#[test]
fn failed_verification_exits_1() {
    let out = run(&["label", "verify", "--poset", &fixture("b2.json"), "--labeling", &fixture("b2_descending.json")]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["status"], "verification_failed");
    assert_eq!(r["results"]["quasi_el"], false);

    let out = run(&["label", "modular", "--poset", &fixture("n5.json"), "--chain", "0,a,1"]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["results"]["left_modular"], false);
}

#[test]
fn disjoint_edges_have_no_shelling() {
    let c = fixture("two_edges.json");
    let out = run(&["complex", "shell", "--complex", &c, "--verify", &fixture("two_edges_order.json")]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["results"]["fails_at"], 1);
    let out = run(&["complex", "shell", "--complex", &c]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["shellable"], false);
    let out = run(&["complex", "vd", "--complex", &c]);
    assert_eq!(report(&out)["results"]["decomposable"], false);
}

#[test]
fn emitted_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let lab_path = dir.path().join("lab.json");
    let n5 = fixture("n5.json");
    let out = run(&["label", "modular", "--poset", &n5, "--chain", "0,b,c,1", "--output", lab_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let from_file = io::labeling_from_json(&std::fs::read_to_string(&lab_path).unwrap()).unwrap();
    let from_report = io::labeling_from_json(&report(&out)["results"]["labeling"].to_string()).unwrap();
    assert_eq!(from_file, from_report);
    assert_eq!(io::labeling_from_json(&io::labeling_to_json(&from_file)).unwrap(), from_file);

    let cert_path = dir.path().join("cert.json");
    let out = run(&["complex", "vd", "--poset", &n5, "--labeling", lab_path.to_str().unwrap(), "--output", cert_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(report(&out)["results"]["skeleton"], 0);
    let cert = io::certificate_from_json(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    let poset = io::poset_from_json(&std::fs::read_to_string(&n5).unwrap()).unwrap();
    modchain::validate_certificate(&modchain::order_complex(&poset).unwrap().skeleton(0), &cert).unwrap();

    let lattice_path = dir.path().join("ls4.json");
    let out = run(&["group", "lattice", &fixture("s4.grp"), "--output", lattice_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["results"]["subgroup_count"], 30);
    let lattice = io::poset_from_json(&std::fs::read_to_string(&lattice_path).unwrap()).unwrap();
    let embedded = io::poset_from_json(&r["results"]["lattice"].to_string()).unwrap();
    assert_eq!(lattice, embedded);
    let check = run(&["poset", "check", lattice_path.to_str().unwrap()]);
    assert_eq!(report(&check)["results"]["lattice"], true);

    let reparsed: Value = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(reparsed, r);
}

#[test]
fn reports_are_deterministic() {
    let args = ["morse", "report", "--poset", &fixture("b2.json"), "--labeling", &fixture("b2_descending.json")];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["group", "thevenaz", &fixture("s4.grp")];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, run(&args).stdout);
    let r = report(&a);
    assert_eq!(r["results"]["verdict"]["refinement_count"], 12);
}

#[test]
fn thevenaz_needs_a_solvable_group() {
    let out = run(&["group", "thevenaz", &fixture("a5.grp")]);
    assert_eq!(code(&out), 2);
}

#[test]
fn text_format() {
    let out = Command::new(env!("CARGO_BIN_EXE_modchain"))
        .args(["complex", "depth", "--poset", &fixture("n5.json"), "--format", "text"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: complex depth\nstatus: ok\n"));
    assert!(text.contains("depth: 0"));
    assert!(text.contains("time: "));
}
