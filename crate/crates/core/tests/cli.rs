use std::process::{Command, Output};

use serde_json::Value;

fn lcp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcpforms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn stab_g2_reports_fourteen() {
    let o = lcp(&["stab", "--form", "g2"]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o), serde_json::json!({ "stabilizer_dim": 14 }));
}

#[test]
fn stab_reads_form_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.json");
    let o = lcp(&[
        "form",
        "--form",
        "spin7-oct",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = lcp(&["stab", "--in", path.to_str().unwrap()]);
    assert_eq!(stdout_json(&o)["stabilizer_dim"], 21);
}

#[test]
fn form_prints_the_g2_terms() {
    let j = stdout_json(&lcp(&["form", "--form", "g2"]));
    assert_eq!(j["dim"], 7);
    assert_eq!(j["degree"], 3);
    assert_eq!(j["terms"].as_array().unwrap().len(), 7);
    assert_eq!(
        j["terms"][0],
        serde_json::json!({ "idx": [1, 2, 7], "coef": "1" })
    );
}

#[test]
fn group_gen_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let o = lcp(&[
        "group",
        "gen",
        "--frame",
        "e1,e2,e3,e4",
        "--out",
        g.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(file["order"], 32);
    assert_eq!(file["elements"].as_array().unwrap().len(), 32);
    let o = lcp(&["group", "classify", "--in", g.to_str().unwrap()]);
    assert!(o.status.success());
    let r = stdout_json(&o);
    assert_eq!(r["order"], 32);
    assert_eq!(r["preserves_spin7"], true);
    assert_eq!(r["is_free_on_sphere"], false);
}

#[test]
fn group_gen_from_generators_file() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("gens.json");
    let minus: Vec<Vec<String>> = (0..8)
        .map(|i| {
            (0..8)
                .map(|j| {
                    if i == j {
                        "-1".to_string()
                    } else {
                        "0".to_string()
                    }
                })
                .collect()
        })
        .collect();
    let body = serde_json::json!({ "generators": [{ "dim": 8, "rows": minus }] });
    std::fs::write(&gens, body.to_string()).unwrap();
    let o = lcp(&["group", "gen", "--generators", gens.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["order"], 2);
}

#[test]
fn cap_exceeded_is_a_json_error() {
    let o = lcp(&["group", "gen", "--frame", "e1,e2,e3", "--cap", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "cap_exceeded");
}

#[test]
fn malformed_input_is_a_json_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = lcp(&["stab", "--in", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "json");
    let o = lcp(&["group", "gen", "--frame", "e1,e9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lee_from_derivative_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    // (3/4) e1 ^ omega
    let omega = lcpforms::structures::g2_form();
    let beta = lcpforms::Form::covector(7, 0);
    let dw = lcpforms::exterior::wedge(&beta, &omega)
        .unwrap()
        .scale(&lcpforms::ratio(3, 4));
    std::fs::write(
        &d,
        serde_json::to_string(&lcpforms::json::FormJson::from(&dw)).unwrap(),
    )
    .unwrap();
    let j = stdout_json(&lcp(&["lee", "--case", "g2", "--d", d.to_str().unwrap()]));
    assert_eq!(j["terms"], serde_json::json!([{ "idx": [1], "coef": "1" }]));
}

#[test]
fn lee_recover_and_check() {
    let j = stdout_json(&lcp(&["lee", "recover", "--case", "spin7"]));
    assert_eq!(j["constant"], "1");
    let o = lcp(&["lee", "check", "--case", "g2", "--samples", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["passed"], true);
}

#[test]
fn torsion_command() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("theta.json");
    std::fs::write(
        &t,
        r#"{"dim":7,"degree":1,"terms":[{"idx":[3],"coef":"2"}]}"#,
    )
    .unwrap();
    let j = stdout_json(&lcp(&["torsion", "--theta", t.to_str().unwrap()]));
    assert_eq!(j["degree"], 3);
}

#[test]
fn numeric_checks_pass_and_are_reproducible() {
    for args in [
        vec!["cone", "verify", "--form", "spin7", "--samples", "8"],
        vec!["nk", "check", "--samples", "5"],
        vec!["dilation", "check", "--samples", "20"],
    ] {
        let a = lcp(&args);
        assert!(
            a.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        assert!(String::from_utf8_lossy(&a.stderr).starts_with("PASS"));
        let b = lcp(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?} is not byte-identical");
    }
    let a = lcp(&["nk", "check", "--samples", "3", "--seed", "7"]);
    let b = lcp(&["nk", "check", "--samples", "3", "--seed", "8"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn invalid_numeric_parameters_are_rejected() {
    let o = lcp(&["cone", "verify", "--h", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lcp(&["stab", "--form", "e8"]);
    assert_ne!(o.status.code(), Some(0));
}
