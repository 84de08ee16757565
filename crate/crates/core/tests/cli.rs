use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn bratteli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bratteli"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().expect("exited normally"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn pascal_depth_8() {
    let (code, out, err) = bratteli(&["pascal", "--depth", "8", "--t", "1/3"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "path\tk\tq");
    let rows: Vec<Vec<&str>> = lines[1..257].iter().map(|l| l.split('\t').collect()).collect();
    for row in &rows {
        let k = row[0].chars().filter(|&c| c == '1').count() as u64;
        assert_eq!(row[1], k.to_string());
        assert_eq!(row[2], format!("1/{}", binomial(8, k)));
    }
    assert_eq!(lines.last(), Some(&"D == 1: OK"));
    assert!(out.contains("closed-form q: OK\n"));
}

#[test]
fn validate_chain_is_clean() {
    let (code, out, _) = bratteli(&["validate", &fixture("chain.json")]);
    assert_eq!(code, 0);
    assert_eq!(out, "level\titem\trule\n");
}

#[test]
fn validate_reports_violations() {
    let (code, out, err) = bratteli(&["validate", &fixture("invalid.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("lonely\treceives no edge"));
    assert!(err.contains("valid diagram"));
}

#[test]
fn rn_needs_tail_equivalent_paths() {
    let walk = fixture("walk.json");
    let (code, _, err) = bratteli(&["rn", &walk, "--a", "ra,au", "--b", "rb,bw"]);
    assert_eq!(code, 1);
    assert!(err.contains("paths not tail equivalent"), "{err}");
    assert_eq!(err.lines().count(), 1);

    // q(ra,aw) / q(rb,bw) = (1/4) / (3/4)
    let (code, out, _) = bratteli(&["rn", &walk, "--a", "ra,aw", "--b", "rb,bw"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().nth(1), Some("ra,aw\trb,bw\t1/3"));
}

#[test]
fn walk_tables() {
    let walk = fixture("walk.json");
    let (_, out, _) = bratteli(&["measure", &walk]);
    assert_eq!(
        out,
        "level\tpath\tvalue\n2\tra,au\t1/6\n2\tra,aw\t1/6\n2\trb,bu\t1/6\n2\trb,bw\t1/2\n"
    );
    let (_, out, _) = bratteli(&["measure", &walk, "--depth", "0"]);
    assert_eq!(out, "level\tpath\tvalue\n0\t@r\t1/1\n");
    let (_, out, _) = bratteli(&["distributions", &walk]);
    assert!(out.ends_with("2\tu\t1/3\n2\tw\t2/3\n"));
    let (_, out, _) = bratteli(&["cotransition", &walk]);
    // q(bw) = ν₁(b) p(bw) / ν₂(w) = (2/3)(3/4) / (2/3)
    assert!(out.contains("2\tbw\t3/4\n"));
    let (_, out, _) = bratteli(&["harmonic", &walk, "--terminal", &fixture("terminal.json")]);
    // h₁(b) = 1/4 · 1 + 3/4 · (−2)
    assert!(out.contains("1\tb\t-5/4\n"));
    let (_, out, _) = bratteli(&["decompose", &walk]);
    assert_eq!(out, "component\tweight\tterminal\n0\t1/3\tu\n1\t2/3\tw\n");
}

#[test]
fn qcheck_verdicts() {
    let walk = fixture("walk.json");
    let (code, out, _) = bratteli(&["qcheck", &walk, "--measure", &fixture("measure_own.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("holds"));
    let (code, out, err) = bratteli(&["qcheck", &walk, "--measure", &fixture("measure_perturbed.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("fails\tra,au"));
    assert!(err.contains("q-measure"));
}

#[test]
fn expectation_report_and_extraction() {
    let (code, out, _) = bratteli(&["expect", "--graph", &fixture("graph.json")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 9);
    assert!(out.lines().skip(1).all(|l| l.split('\t').nth(1) == Some("ok")));
    let (code, out, _) = bratteli(&["extractp", "--graph", &fixture("graph.json")]);
    assert_eq!(code, 0);
    assert_eq!(out, "edge\tp\nc1\t1/3\nc2\t2/3\nc3\t1/4\nc4\t3/4\nround trip: OK\n");
    let (code, _, err) = bratteli(&["extractp", "--graph", &fixture("bad_graph.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("transition probability"));
}

#[test]
fn skew_window() {
    let (code, out, _) = bratteli(&["skew", &fixture("walk.json"), "--rho-window", "0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("level\tvertex\tbase\tg\n0\tr@0\tr\t0\n1\ta@1\ta\t1\n"));
    assert!(out.ends_with("laws: OK\n"));
    let (code, _, _) = bratteli(&["skew", &fixture("walk.json"), "--window", "x"]);
    assert_eq!(code, 2);
}

#[test]
fn json_rationals() {
    let (code, out, _) = bratteli(&["--format", "json", "measure", &fixture("walk.json")]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][3]["value"], serde_json::json!({"num": 1, "den": 2}));
    assert_eq!(v["rows"][3]["path"], "rb,bw");
}

#[test]
fn output_is_byte_identical() {
    for args in [
        vec!["pascal", "--depth", "6", "--t", "2/5"],
        vec!["expect", "--graph", "GRAPH"],
        vec!["skew", "WALK", "--window", "0,1,5"],
    ] {
        let args: Vec<String> = args
            .iter()
            .map(|a| match *a {
                "GRAPH" => fixture("graph.json"),
                "WALK" => fixture("walk.json"),
                other => other.to_string(),
            })
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(bratteli(&args), bratteli(&args));
    }
}

#[test]
fn parse_errors_exit_2() {
    let dir = std::env::temp_dir().join(format!("bratteli-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let garbage = [
        "",
        "{",
        "[]",
        r#"{"vertices": [["r"]], "edges": [], "extra": 1}"#,
        r#"{"vertices": [["r"], ["a"]], "edges": [[{"id": "x", "src": "r", "rng": "a", "p": "one"}]]}"#,
        r#"{"vertices": [["r"], ["a"]], "edges": [[{"id": "x", "src": "r", "rng": "a", "p": "1/0"}]]}"#,
    ];
    for (i, text) in garbage.iter().enumerate() {
        let path = dir.join(format!("g{i}.json"));
        std::fs::write(&path, text).unwrap();
        let (code, _, err) = bratteli(&["measure", path.to_str().unwrap()]);
        assert_eq!(code, 2, "input {text:?}: {err}");
        assert!(!err.contains("panicked"));
    }
    assert_eq!(bratteli(&["measure", "/no/such/file.json"]).0, 2);
    assert_eq!(bratteli(&["frobnicate"]).0, 2);
    assert_eq!(bratteli(&["pascal", "--depth", "3"]).0, 2);
    assert_eq!(bratteli(&["--help"]).0, 0);
}

#[test]
fn domain_errors_exit_1() {
    let dir = std::env::temp_dir().join(format!("bratteli-cli-dom-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        // weights out of r do not sum to one
        r#"{"vertices": [["r"], ["a"]], "edges": [[{"id": "x", "src": "r", "rng": "a", "p": "1/2"}]]}"#,
        // zero-probability edge
        r#"{"vertices": [["r"], ["a"]], "edges": [[{"id": "x", "src": "r", "rng": "a", "p": "1/1"}, {"id": "y", "src": "r", "rng": "a", "p": "0/1"}]]}"#,
        // edge to an unknown vertex
        r#"{"vertices": [["r"], ["a"]], "edges": [[{"id": "x", "src": "r", "rng": "z", "p": "1/1"}]]}"#,
    ];
    for (i, text) in cases.iter().enumerate() {
        let path = dir.join(format!("d{i}.json"));
        std::fs::write(&path, text).unwrap();
        let (code, _, err) = bratteli(&["distributions", path.to_str().unwrap()]);
        assert_eq!(code, 1, "input {text:?}: {err}");
        assert!(err.contains("(violated: "), "{err}");
        assert_eq!(err.lines().count(), 1);
    }
    assert_eq!(bratteli(&["pascal", "--depth", "3", "--t", "0"]).0, 1);
    assert_eq!(bratteli(&["measure", &fixture("walk.json"), "--depth", "9"]).0, 1);
}
