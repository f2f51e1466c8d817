use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn model(name: &str) -> String {
    models().join(format!("{name}.json")).display().to_string()
}

fn hilbfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbfock"))
        .args(args)
        .env_remove("HILBFOCK_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn validate_builtin_models() {
    for name in [
        "c2",
        "toy_b2=1",
        "k3_like",
        "ale_1",
        "ale_2",
        "cotangent_g1",
    ] {
        let out = hilbfock(&["validate", "--model", &model(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let r = report(&out);
        assert_eq!(r["status"], "pass");
        assert_eq!(r["model_hash"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn malformed_json_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "bad.json", "{\"basis\": [");
    let out = hilbfock(&["validate", "--model", &p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(report(&out)["error"].as_str().unwrap().contains("parse"));
}

#[test]
fn non_associative_table_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "nonassoc.json",
        r#"{"basis":[{"name":"1","degree":0},{"name":"a","degree":2},{"name":"b","degree":2},{"name":"x","degree":4}],
            "products":[{"left":"a","right":"a","result":[{"name":"b","coeff":"1"}]},
                        {"left":"a","right":"b","result":[{"name":"x","coeff":"1"}]},
                        {"left":"b","right":"b","result":[{"name":"x","coeff":"1"}]}],
            "unit":"1","point":"x","euler":[{"name":"x","coeff":"4"}]}"#,
    );
    let out = hilbfock(&["validate", "--model", &p]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    let w: Vec<&str> = r["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w.as_str().unwrap())
        .collect();
    assert!(
        w.iter()
            .any(|w| w.starts_with("associativity") && w.contains("[a, a, b]")),
        "{w:?}"
    );
}

#[test]
fn products() {
    let c2 = model("c2");
    let out = hilbfock(&[
        "product",
        "--model",
        &c2,
        "--n",
        "2",
        "--rho",
        r#"{"1":[1]}"#,
        "--sigma",
        r#"{"1":[1]}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["entries"], serde_json::json!([]));

    let out = hilbfock(&[
        "product",
        "--model",
        &c2,
        "--n",
        "3",
        "--rho",
        "{}",
        "--sigma",
        r#"{"1":[2]}"#,
    ]);
    let r = report(&out);
    assert_eq!(
        r["result"]["entries"],
        serde_json::json!([{"nu": {"1": [2]}, "coeff": "1/1"}])
    );

    let args = [
        "product",
        "--model",
        &model("ale_2"),
        "--n",
        "3",
        "--rho",
        r#"{"E1":[1]}"#,
        "--sigma",
        r#"{"E1":[1],"1":[1]}"#,
    ];
    let hil = report(&hilbfock(&args));
    let mut orb_args = args.to_vec();
    orb_args.extend(["--side", "orbifold", "--s", "-1"]);
    let orb = report(&hilbfock(&orb_args));
    assert_eq!(hil["result"]["entries"], orb["result"]["entries"]);
    assert_ne!(hil["result"]["entries"], serde_json::json!([]));
}

#[test]
fn unknown_names_and_levels_are_usage_errors() {
    let c2 = model("c2");
    let out = hilbfock(&[
        "product",
        "--model",
        &c2,
        "--n",
        "2",
        "--rho",
        r#"{"q":[1]}"#,
        "--sigma",
        "{}",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = hilbfock(&[
        "product",
        "--model",
        &c2,
        "--n",
        "1",
        "--rho",
        r#"{"1":[2]}"#,
        "--sigma",
        "{}",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = hilbfock(&["verify", "no-such-theorem", "--model", &c2]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gate_rejection_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let mut m: Value =
        serde_json::from_str(&std::fs::read_to_string(model("c2")).unwrap()).unwrap();
    m["ideal"] = serde_json::json!([]);
    m["name"] = "p2".into();
    let p = write(&dir, "p2.json", &m.to_string());
    let out = hilbfock(&["structure-constants", "--model", &p, "--n", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(report(&out)["error"].as_str().unwrap().contains("K = "));
}

#[test]
fn tables_are_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out_file = dir.path().join("table.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hilbfock"))
            .args([
                "orb-structure-constants",
                "--model",
                &model("ale_2"),
                "--n",
                "2",
                "--s",
                "1/2",
            ])
            .arg("--out")
            .arg(&out_file)
            .env("HILBFOCK_CACHE_DIR", &cache)
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    let table_first = std::fs::read(&out_file).unwrap();
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache"));
    assert_eq!(table_first, std::fs::read(&out_file).unwrap());
    let t: Value = serde_json::from_slice(&table_first).unwrap();
    assert_eq!(t["side"], "orbifold");
    assert_eq!(t["s"], "1/2");
    assert_eq!(t["rows"].as_array().unwrap().len(), 81);

    let plain =
        |n: &str| hilbfock(&["structure-constants", "--model", &model("c2"), "--n", n]).stdout;
    assert_eq!(plain("3"), plain("3"));
}

#[test]
fn verify_examples() {
    let out = hilbfock(&[
        "verify",
        "n-independence",
        "--model",
        &model("c2"),
        "--n",
        "2..6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert!(r["checks"]["equal-constants"]["checked"].as_u64().unwrap() > 0);

    let out = hilbfock(&[
        "verify",
        "ring-isom",
        "--model",
        &model("ale_2"),
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let triples = write(
        &dir,
        "t.json",
        r#"[{"rho":{"1":[1]},"sigma":{"1":[1]},"nu":{"x":[1]}}]"#,
    );
    let out = hilbfock(&[
        "verify",
        "polynomiality",
        "--model",
        &model("k3_like"),
        "--n",
        "3..9",
        "--triple",
        &triples,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["checks"]["polynomial"]["checked"], 1);
    assert_eq!(
        r["result"]["interpolants"],
        serde_json::json!([{"rho": "1:(1)", "sigma": "1:(1)", "nu": "x:(1)", "bound": 3, "coefficients": ["1/1", "-1/1"]}])
    );
}

#[test]
fn verify_small_instances_of_every_check() {
    let cases: &[(&str, &str, &[&str])] = &[
        ("heisenberg", "toy_b2=1", &["--n", "3", "--max-index", "2"]),
        (
            "lemma-ks",
            "toy_b2=1",
            &["--n", "3", "--k", "3", "--samples", "5"],
        ),
        (
            "nonsense1",
            "cotangent_g1",
            &["--n", "2", "--k", "1", "--len", "2"],
        ),
        ("ideal", "ale_2", &["--n", "1..2"]),
        ("ideal-generators", "cotangent_g1", &["--n", "2"]),
        ("mod-h4-independence", "k3_like", &["--n", "2..3"]),
        ("fh-ring", "c2", &["--n", "3", "--norm", "3"]),
        ("c2-quotient", "k3_like", &["--n", "3"]),
        ("a-homomorphism", "cotangent_g1", &["--n", "1..2"]),
        ("orb-n-independence", "ale_2", &["--n", "2..3", "--s", "1"]),
    ];
    for (id, m, extra) in cases {
        let mm = model(m);
        let mut args = vec!["verify", id, "--model", mm.as_str()];
        args.extend_from_slice(extra);
        let out = hilbfock(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{id}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let r = report(&out);
        let checks = r["checks"].as_object().unwrap();
        assert!(
            checks.values().all(|c| c["checked"].as_u64().unwrap() > 0),
            "{id}"
        );
    }
}

#[test]
fn verify_preconditions() {
    // projective model without an ideal
    let out = hilbfock(&[
        "verify",
        "n-independence",
        "--model",
        &model("k3_like"),
        "--n",
        "2..3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // K ≠ 0 and no ideal to absorb it
    let dir = tempfile::tempdir().unwrap();
    let mut m: Value =
        serde_json::from_str(&std::fs::read_to_string(model("c2")).unwrap()).unwrap();
    m["ideal"] = serde_json::json!([]);
    let p = write(&dir, "p2.json", &m.to_string());
    let out = hilbfock(&[
        "verify",
        "mod-h4-independence",
        "--model",
        &p,
        "--n",
        "2..3",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn lehn_apply() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "p.json",
        r#"{"terms":[{"coeff":"1/1","monomial":{"1":2}}]}"#,
    );
    let out = hilbfock(&["lehn-apply", "--k", "1", "--poly", &p]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        report(&out)["result"],
        serde_json::json!({"terms": [{"coeff": "-1/1", "monomial": {"2": 1}}]})
    );
}

#[test]
fn pretty_output_is_text() {
    let out = hilbfock(&["validate", "--model", &model("c2"), "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("validate: pass"));
}
