use std::path::PathBuf;
use std::process::{Command, Output};

use wmk_core::engine::Fingerprint;
use wmk_core::symbolic::WitnessReport;
use wmk_core::{AbelianGroupInvariants, Decision, MonoidPresentation};

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .display()
        .to_string()
}

fn wmk_with_env(args: &[&str], env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wmk"));
    cmd.args(args).env_remove("WMK_DEFAULT_BOUNDS");
    if let Some(spec) = env {
        cmd.env("WMK_DEFAULT_BOUNDS", spec);
    }
    cmd.output().expect("binary runs")
}

fn wmk(args: &[&str]) -> Output {
    wmk_with_env(args, None)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn present_prints_generators_and_relations() {
    let o = wmk(&["present", &example("pair_lprime.json")]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("generators: u, v, q:v:1, x"), "{text}");
    assert!(text.contains("v = q:v:1 + u"), "{text}");
    assert!(text.contains("q:v:1 + v = x"), "{text}");
}

#[test]
fn k0_json_is_the_documented_schema() {
    let o = wmk(&["k0", &example("pair_l.json"), "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({"free_rank": 2, "torsion": []}));
    let inv: AbelianGroupInvariants = serde_json::from_value(v).unwrap();
    assert_eq!(inv, AbelianGroupInvariants::free(2));
}

#[test]
fn module_type_of_the_roses() {
    let o = wmk(&["module-type", &example("rose_3333.json"), "--vertex", "v"]);
    assert_eq!(
        (code(&o), stdout(&o).trim().to_string()),
        (0, "(3,1)".to_string())
    );
    let o = wmk(&["module-type", &example("rose_2333.json")]);
    assert_eq!(stdout(&o).trim(), "(2,1)");
}

#[test]
fn json_round_trips() {
    let o = wmk(&["present", &example("pair_lprime.json"), "--json"]);
    let p: MonoidPresentation = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(p.generators().len(), 4);
    assert_eq!(p.relations().len(), 2);

    let o = wmk(&[
        "equal",
        &example("two_weights.json"),
        "u=1",
        "u=1,q:v:1=2",
        "--json",
    ]);
    let d: Decision = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(d.verdict(), wmk_core::Verdict::Equal);

    let o = wmk(&[
        "fingerprint",
        &example("pair_l.json"),
        "--json",
        "--bound-degree",
        "2",
    ]);
    let f: Fingerprint = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(f.atom_count(), Some(3));

    let o = wmk(&["verify-witnesses", &example("rose_2333.json"), "--json"]);
    let r: Vec<WitnessReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.iter().all(WitnessReport::all_verified));
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        vec!["fingerprint", "pair_lprime.json", "--bound-degree", "4"],
        vec!["equal", "loops_12.json", "v=1", "v=1,q:v:1=7"],
        vec!["verify-witnesses", "rose_3333.json"],
        vec!["consistency", "two_weights.json"],
        vec!["infinite-check", "pair_lprime.json"],
    ] {
        let path = example(args[1]);
        let mut full: Vec<&str> = vec![args[0], &path, "--json"];
        full.extend(&args[2..]);
        let a = wmk(&full);
        let b = wmk(&full);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn assertions_set_the_exit_code() {
    let g = example("two_weights.json");
    assert_eq!(
        code(&wmk(&["equal", &g, "u=1", "u=1,q:v:1=4", "--assert-equal"])),
        0
    );
    assert_eq!(
        code(&wmk(&[
            "equal",
            &g,
            "u=1",
            "u=1,q:v:1=4",
            "--assert-not-equal"
        ])),
        1
    );
    assert_eq!(
        code(&wmk(&["equal", &g, "u=1", "q:v:1=2", "--assert-equal"])),
        1
    );
    assert_eq!(
        code(&wmk(&["equal", &g, "u=1", "q:v:1=2", "--assert-not-equal"])),
        0
    );
}

#[test]
fn exhausted_bounds_give_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(
        &path,
        r#"{"generators":["a","b","c"],"relations":[
            {"lhs":{"a":2},"rhs":{"b":1,"c":1}},
            {"lhs":{"a":1,"b":1},"rhs":{"c":2}}]}"#,
    )
    .unwrap();
    let p = path.display().to_string();
    let capped = ["--bound-pairs", "0", "--bound-nodes", "2"];
    let o = wmk(&[&["equal", &p, "a=2,b=2", "c=4"][..], &capped[..]].concat());
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    let o = wmk(&["equal", &p, "a=2,b=2", "c=4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn environment_bounds_and_flag_precedence() {
    let g = example("rose_3333.json");
    let o = wmk_with_env(&["module-type", &g, "--json"], Some("n=2,k=1"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"], "none_found");
    let o = wmk_with_env(
        &["module-type", &g, "--json", "--bound-n", "3"],
        Some("n=2,k=1"),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["n"].as_u64(), v["k"].as_u64()), (Some(3), Some(1)));
    assert_eq!(code(&wmk_with_env(&["k0", &g], Some("depth=3"))), 3);
}

#[test]
fn input_errors_name_the_offender() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"vertices":["v"],"edges":[{"id":"loop","source":"v","range":"v","weight":0}]}"#,
    )
    .unwrap();
    let o = wmk(&["k0", &bad.display().to_string()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("`loop`"));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"vertices\": [\"v\"],\n \"edges\": [}").unwrap();
    let o = wmk(&["k0", &broken.display().to_string()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(code(&wmk(&["k0", "/nonexistent/graph.json"])), 3);
    assert_eq!(
        code(&wmk(&["equal", &example("pair_l.json"), "u=x", "u=1"])),
        3
    );
    assert_eq!(code(&wmk(&["frobnicate"])), 3);
    assert_eq!(code(&wmk(&["--help"])), 0);
}
