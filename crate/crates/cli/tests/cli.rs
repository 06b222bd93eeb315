use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cotorsion_lab::{CategoryFile, Report};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cotorsion-lab"))
        .args(args)
        .env_remove("COTORSION_LAB_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    if o.stdout.is_empty() {
        return Value::Null;
    }
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not json ({e}):\n{}\n{}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

/// Runs a check on a fixture pair file and returns (exit code, json report).
fn check(cmd: &str, pairs: &str, extra: &[&str]) -> (i32, Value) {
    let cat = fixture("nakayama6.json");
    let pairs = fixture(pairs);
    let mut args = vec![
        cmd,
        "--format",
        "json",
        "--category",
        cat.to_str().unwrap(),
        "--pairs",
        pairs.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = run(&args);
    (code(&o), json(&o))
}

#[test]
fn generate_counts_indecomposables() {
    for (n, rels, count) in [
        ("6", "1-5,2-6", 18),
        ("2", "", 3),
        ("3", "1-3", 5),
        ("4", "", 10),
    ] {
        let o = run(&[
            "generate",
            "--format",
            "json",
            "--n",
            n,
            "--relations",
            rels,
        ]);
        assert_eq!(code(&o), 0);
        let r = json(&o);
        assert_eq!(
            r["data"]["indecomposable_count"], count,
            "n={n} rels={rels}"
        );
        assert_eq!(
            r["data"]["indecomposables"].as_array().unwrap().len(),
            count
        );
    }
}

#[test]
fn generated_category_file_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cat.json");
    let o = run(&[
        "generate",
        "--n",
        "6",
        "--relations",
        "2-6, 1-5",
        "--char",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let written = CategoryFile::load(&out).unwrap();
    assert_eq!(
        written,
        CategoryFile::load(&fixture("nakayama6.json")).unwrap()
    );
}

#[test]
fn exit_codes_follow_verdicts() {
    let cases = [
        ("check-twin", "nonintegral.json", 0),
        ("check-integral", "nonintegral.json", 1),
        ("check-abelian", "nonintegral.json", 1),
        ("probe", "nonintegral.json", 1),
        ("check-integral", "abelian.json", 0),
        ("check-abelian", "abelian.json", 0),
        ("check-integral", "w_equals_t.json", 0),
        ("check-abelian", "w_equals_t.json", 1),
        ("check-integral", "zero_heart.json", 0),
        ("check-abelian", "zero_heart.json", 0),
        ("check-twin", "corrupted.json", 1),
        ("check-integral", "corrupted.json", 1),
    ];
    for (cmd, pairs, want) in cases {
        let (got, r) = check(cmd, pairs, &[]);
        assert_eq!(got, want, "{cmd} {pairs}: {r}");
        let verdict = ["holds", "fails"][want as usize];
        assert_eq!(r["verdict"], verdict, "{cmd} {pairs}");
    }
}

#[test]
fn routes_and_notes() {
    let (_, r) = check("check-integral", "abelian.json", &[]);
    assert_eq!(r["route"], "semisimple");
    let (_, r) = check("check-integral", "w_equals_t.json", &[]);
    assert_eq!(r["route"], "u_in_star");
    let (_, r) = check("check-abelian", "zero_heart.json", &[]);
    assert_eq!(r["route"], "zero_heart");
    let (_, r) = check("check-twin", "w_equals_t.json", &[]);
    assert!(
        r["notes"]
            .as_array()
            .unwrap()
            .iter()
            .any(|n| n == "W = U = T"),
        "{r}"
    );
    let (_, r) = check("check-abelian", "w_equals_t.json", &[]);
    assert_eq!(r["data"]["epi_triangles"]["verdict"], "holds");
    assert_eq!(r["data"]["mono_triangles"]["verdict"], "holds");
}

#[test]
fn heart_tables() {
    let (c, r) = check("heart", "nonintegral.json", &["--witnesses"]);
    assert_eq!(c, 0);
    assert_eq!(
        r["data"]["H minus W"],
        serde_json::json!(["[3,4]", "[3,5]", "[4,4]"])
    );
    assert_eq!(r["data"]["witnesses"].as_array().unwrap().len(), 3);
    let (_, r) = check("heart", "zero_heart.json", &[]);
    assert_eq!(r["data"]["H minus W"], serde_json::json!([]));
}

#[test]
fn corrupted_pairs_name_an_indecomposable() {
    let (c, r) = check("check-twin", "corrupted.json", &[]);
    assert_eq!(c, 1);
    let detail = r["detail"].as_str().unwrap();
    assert!(detail.contains('[') && detail.contains(']'), "{detail}");
}

#[test]
fn in_star_evaluates_expressions() {
    let (c, _) = check(
        "in-star",
        "abelian.json",
        &["--class", "rperp(S)", "--left", "T", "--right", "T"],
    );
    assert_eq!(c, 0);
    let (c, _) = check(
        "in-star",
        "abelian.json",
        &["--class", "all", "--left", "S", "--right", "T"],
    );
    assert_eq!(c, 1);
    let (c, _) = check(
        "in-star",
        "abelian.json",
        &["--class", "rperp(", "--left", "S", "--right", "T"],
    );
    assert_eq!(c, 2);
}

#[test]
fn usage_errors_exit_two() {
    let cat = fixture("nakayama6.json");
    let pairs = fixture("abelian.json");
    let (cat, pairs) = (cat.to_str().unwrap(), pairs.to_str().unwrap());
    assert_eq!(code(&run(&["check-twin", "--category", cat])), 2);
    assert_eq!(
        code(&run(&[
            "check-twin",
            "--category",
            "/nonexistent.json",
            "--pairs",
            pairs
        ])),
        2
    );
    assert_eq!(
        code(&run(&["generate", "--n", "3", "--relations", "1-x"])),
        2
    );
    assert_eq!(code(&run(&["generate", "--n", "3", "--char", "4"])), 2);
    assert_eq!(
        code(&run(&[
            "check-twin",
            "--category",
            cat,
            "--pairs",
            pairs,
            "--bound-mult",
            "0"
        ])),
        2
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"S": ["[1,9]"], "T": "all", "U": "proj", "V": "all"}"#,
    )
    .unwrap();
    assert_eq!(
        code(&run(&[
            "check-twin",
            "--category",
            cat,
            "--pairs",
            bad.to_str().unwrap()
        ])),
        2
    );
    std::fs::write(&bad, r#"{"S": "T", "T": "S", "U": "proj", "V": "all"}"#).unwrap();
    assert_eq!(
        code(&run(&[
            "check-twin",
            "--category",
            cat,
            "--pairs",
            bad.to_str().unwrap()
        ])),
        2
    );
}

fn write_report(dir: &Path, cmd: &str, pairs: &str) -> PathBuf {
    let path = dir.join(format!("{cmd}-{pairs}"));
    let (_, _) = check(cmd, pairs, &["--report", path.to_str().unwrap()]);
    path
}

fn replay(report: &Path, pairs: &str) -> (i32, Value) {
    check(
        "replay",
        pairs,
        &["--certificate", report.to_str().unwrap()],
    )
}

#[test]
fn reports_replay() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, pairs) in [
        ("check-integral", "nonintegral.json"),
        ("check-abelian", "nonintegral.json"),
        ("probe", "nonintegral.json"),
        ("check-abelian", "w_equals_t.json"),
        ("check-integral", "abelian.json"),
        ("check-twin", "abelian.json"),
        ("heart", "abelian.json"),
        ("check-abelian", "zero_heart.json"),
        ("check-twin", "corrupted.json"),
    ] {
        let path = write_report(dir.path(), cmd, pairs);
        let stored: Report =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let (c, r) = replay(&path, pairs);
        assert_eq!(c, 0, "{cmd} {pairs}: {r}");
        assert_eq!(
            r["data"]["stored_verdict"],
            serde_json::to_value(stored.verdict).unwrap()
        );
    }
}

#[test]
fn tampered_reports_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_report(dir.path(), "check-integral", "nonintegral.json");
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();

    let tamper = |f: &dyn Fn(&mut Value)| {
        let mut v = original.clone();
        f(&mut v);
        let p = dir.path().join("tampered.json");
        std::fs::write(&p, serde_json::to_string(&v).unwrap()).unwrap();
        replay(&p, "nonintegral.json").0
    };
    assert_eq!(
        tamper(&|v| v["certificate"]["offending"] = "[4,4]".into()),
        4
    );
    assert_eq!(
        tamper(&|v| v["certificate"]["conflation"]["inflation"]["source"][0] = "[3,4]".into()),
        4
    );
    assert_eq!(tamper(&|v| v["certificate"]["side"] = "mono".into()), 4);
    assert_eq!(tamper(&|v| v["field_char"] = 3.into()), 4);
    // A verdict that is recomputed rather than replayed must match as well.
    let path = write_report(dir.path(), "check-integral", "abelian.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["route"] = "u_in_star".into();
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(replay(&path, "abelian.json").0, 4);
}

#[test]
fn text_and_json_agree() {
    let cat = fixture("nakayama6.json");
    let pairs = fixture("nonintegral.json");
    let base = [
        "check-abelian",
        "--category",
        cat.to_str().unwrap(),
        "--pairs",
        pairs.to_str().unwrap(),
    ];
    let text = String::from_utf8(run(&base).stdout).unwrap();
    let mut with_json = base.to_vec();
    with_json.extend(["--format", "json"]);
    let r = json(&run(&with_json));
    assert!(text.contains(&format!("verdict: {}", r["verdict"].as_str().unwrap())));
    assert!(text.contains(&format!("detail: {}", r["detail"].as_str().unwrap())));
    let cert = serde_json::to_string_pretty(&r["certificate"]).unwrap();
    for line in cert.lines() {
        assert!(text.contains(line), "missing from text output: {line}");
    }
}

#[test]
fn seed_comes_from_environment() {
    let cat = fixture("nakayama6.json");
    let pairs = fixture("abelian.json");
    let o = Command::new(env!("CARGO_BIN_EXE_cotorsion-lab"))
        .args([
            "check-twin",
            "--format",
            "json",
            "--category",
            cat.to_str().unwrap(),
            "--pairs",
            pairs.to_str().unwrap(),
        ])
        .env("COTORSION_LAB_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(json(&o)["seed"], 17);
}
