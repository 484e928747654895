use std::path::PathBuf;
use std::process::{Command, Output};

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "specs", name].iter().collect();
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commtop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn moore_h2_of_z3() {
    let o = run(&["moore-h2", "--group", "Z3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[3]");
}

#[test]
fn torus_analyze_o2_spec() {
    let o = run(&["torus-analyze", "--ext", &spec("o2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("psi_star(a) = (2)"), "{s}");
    assert!(s.contains("sum = 2Z"));
    assert!(s.contains("subtorus = Z"));
}

#[test]
fn quotient_extension_spec_matches_catalog() {
    let a = stdout(&run(&["torus-analyze", "--ext", &spec("nt_su2.json"), "--output", "machine"]));
    let b = stdout(&run(&["torus-analyze", "--ext", "NT_SU2", "--output", "machine"]));
    assert_eq!(a, b);
    let o = run(&["single-comm", "--ext", &spec("nt_su2.json"), "--denominator", "12"]);
    assert!(stdout(&o).contains("12 targets, covered = true"));
}

#[test]
fn homology_and_coset_poset_agree_for_perm_s3() {
    let e = stdout(&run(&["homology-e2g", "--group", &spec("s3_perm.json")]));
    let p = stdout(&run(&["coset-poset", "--group", &spec("s3_perm.json")]));
    assert!(e.contains("~H1: Z^8"), "{e}");
    assert!(p.contains("5 abelian subgroups, 17 cosets"), "{p}");
    assert!(p.contains("~H1: Z^8"));
}

#[test]
fn other_commands() {
    assert_eq!(stdout(&run(&["pi2-e2", "--factors", "2,2"])).trim(), "[2,2]");
    assert_eq!(stdout(&run(&["coinvariants", "--group", "D8"])).trim(), "[2,2]");
    let b = stdout(&run(&["homology-b2g", "--group", "Z2", "--max-dim", "3"]));
    assert_eq!(b.lines().collect::<Vec<_>>(), vec!["H0: Z", "H1: [2]", "H2: 0", "H3: [2]"]);
}

#[test]
fn clutch_o2() {
    let o = run(&["clutch", "--ext", "O2", "--alpha", "1,a", "--x-dir", "1", "--invert"]);
    let s = stdout(&o);
    assert!(s.contains("cocycle: winding (0)"), "{s}");
    assert!(s.contains("inverse: winding (2)"));
    let f = run(&["clutch", "--ext", &spec("o2.json"), "--cocycle", &spec("o2_alpha.json"), "--invert"]);
    assert_eq!(stdout(&f), s);
}

#[test]
fn machine_output_is_versioned_and_stable() {
    let args = ["homology-e2g", "--group", "Q8", "--output", "machine"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["version"], 1);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["provenance"].is_string()));
    assert_eq!(rows[1]["homology"]["text"], "Z^3");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["moore-h2", "--group", "Nope"]).status.code(), Some(2));
    assert_eq!(run(&["moore-h2"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"format\": \"table\", \"table\": [[0, 1], [1, 1]]}").unwrap();
    assert_eq!(run(&["coinvariants", "--group", bad.to_str().unwrap()]).status.code(), Some(2));
    let o = run(&["homology-e2g", "--group", "S4", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    // arcs that disagree at the back point
    let open = dir.path().join("open.json");
    std::fs::write(
        &open,
        r#"{"a12": [{"time": "0", "t": ["0"], "f": "1"}, {"time": "1", "t": ["1/3"], "f": "1"}],
            "a13": [{"time": "0", "t": ["0"], "f": "1"}, {"time": "1", "t": ["0"], "f": "1"}],
            "a23": [{"time": "0", "t": ["0"], "f": "1"}, {"time": "1", "t": ["0"], "f": "1"}]}"#,
    )
    .unwrap();
    let o = run(&["clutch", "--ext", "O2", "--cocycle", open.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_all_with_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let fx = dir.path().join("fixtures.json");
    let fx = fx.to_str().unwrap();
    let first = run(&["verify-all", "--fixtures", fx]);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    assert!(stdout(&first).contains("12/12 criteria passed"));
    let second = run(&["verify-all", "--fixtures", fx]);
    assert!(stdout(&second).contains("fixtures match"));
    std::fs::write(fx, "[]").unwrap();
    assert_eq!(run(&["verify-all", "--fixtures", fx]).status.code(), Some(4));
}
