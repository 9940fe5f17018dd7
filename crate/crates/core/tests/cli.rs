use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

const RUNNING: &str = r#"
[surface]
n = 1
A = [0, 1]
B = [0, 1]

[cover]
type = "abstract"
genus = 0
group = { kind = "cyclic", m = 2 }
branch = [{ point = "1", inertia = 1 }, { point = "2", inertia = 1 }]
"#;

fn run(args: &[&str], config: &str) -> Output {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(config.as_bytes()).unwrap();
    Command::new(env!("CARGO_BIN_EXE_eqhodge"))
        .args(args)
        .arg(file.path())
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_reports_invariants() {
    let v = json(&run(&["analyze"], RUNNING));
    let s = &v["surface"];
    assert_eq!(
        (s["d_E"].as_u64(), s["c_E"].as_u64(), s["mu"].as_u64()),
        (Some(12), Some(5), Some(7))
    );
    let types: Vec<&str> = s["fibers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["type"].as_str().unwrap())
        .collect();
    assert_eq!(types.len(), 3);
    for t in ["II", "I1", "IIIstar"] {
        assert!(types.contains(&t), "{types:?}");
    }
}

#[test]
fn mwbound_running_example() {
    let v = json(&run(&["mwbound"], RUNNING));
    assert_eq!(v["rank_bound_dim"], 4);
    assert_eq!(v["pal_bound"], 6);
    assert_eq!(v["M"], serde_json::json!([1, 3]));
    assert_eq!(v["trivial_lattice"], serde_json::json!([9, 7]));
}

#[test]
fn engine_weierstrass_h11() {
    for n in 1..=3i64 {
        let cfg = format!("[surface]\nn = {n}\nA = [1]\nB = [1]\n[engine]\np = 1\nq = 1\n");
        let v = json(&run(&["engine"], &cfg));
        let c = &v["classes"][0]["class"];
        assert_eq!(
            (
                c["a"].as_i64(),
                c["b"].as_i64(),
                c["c"].as_i64(),
                c["delta"].as_i64()
            ),
            (Some(10 * n), Some(-2), Some(2), Some(0))
        );
    }
}

#[test]
fn basechange_and_hodge_with_full_checks() {
    let v = json(&run(&["basechange", "--check"], RUNNING));
    assert_eq!(v["hypothesis"], "smooth_branch");
    assert_eq!(v["tjurina"], serde_json::json!([7, 7]));
    assert!(v["checks"].as_array().unwrap().len() >= 4);
    let v = json(&run(&["hodge"], RUNNING));
    let h11 = v["diamond"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["p"] == 1 && s["q"] == 1)
        .unwrap();
    assert_eq!(h11["dim"], 20);
}

#[test]
fn oracle_superelliptic() {
    let cfg = "check_level = \"full\"\n[cover]\ntype = \"superelliptic\"\nm = 4\nf = [0, -2, 1]\n";
    let v = json(&run(&["oracle"], cfg));
    assert_eq!(v["agree"], true);
    assert_eq!(v["oracle"], v["h0_canonical"]);
}

#[test]
fn json_round_trip_is_idempotent() {
    for cmd in ["analyze", "basechange", "hodge", "mwbound", "engine"] {
        let out = run(&[cmd, "--json"], RUNNING);
        let first = String::from_utf8(out.stdout).unwrap();
        let v: Value = serde_json::from_str(&first).unwrap();
        let again = serde_json::to_string_pretty(&v).unwrap();
        assert_eq!(first.trim_end(), again, "{cmd}");
    }
}

#[test]
fn text_output() {
    let cfg = format!("output = \"text\"\n{RUNNING}");
    let out = run(&["mwbound"], &cfg);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rank_bound_dim: 4"), "{text}");
    let out = run(&["mwbound", "--json"], &cfg);
    json(&out);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["analyze"], "bogus = 1").status.code(), Some(2));
    assert_eq!(
        run(&["mwbound"], "[surface]\nn = 1\nA = [0]\nB = [0]\n")
            .status
            .code(),
        Some(2)
    );
    let nonminimal = "[surface]\nn = 2\nA = [0, 0, 0, 0, 1]\nB = [0, 0, 0, 0, 0, 0, 1]\n";
    let out = run(&["analyze"], nonminimal);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["class"], "hypothesis");
    let additive_branch = RUNNING.replace("\"2\"", "\"0\"");
    assert_eq!(run(&["mwbound"], &additive_branch).status.code(), Some(3));
    let isotrivial = "[surface]\nn = 1\nA = [0]\nB = [-1, 0, 0, 0, 0, 1]\n";
    let v = json(&run(&["analyze"], isotrivial));
    assert_eq!(v["surface"]["isotrivial"], true);
    assert_eq!(run(&["mwbound"], isotrivial).status.code(), Some(3));
    assert_eq!(run(&["oracle"], RUNNING).status.code(), Some(2));
}
