use std::process::{Command, Output};

fn wordlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wordlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn version_names_grammar() {
    let out = wordlab(&["--version"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        format!("wordlab {} (spec grammar v1)", env!("CARGO_PKG_VERSION"))
    );
}

#[test]
fn gen_prints_raw_symbols() {
    let out = wordlab(&["gen", "--spec", "fixed:0=01,1=0@0", "--len", "13"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0100101001001");
}

#[test]
fn zero_length_gen_is_empty() {
    let out = wordlab(&["gen", "--spec", "lit:01", "--len", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn file_round_trip_reproduces_analyses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fib.txt");
    let path = path.to_str().unwrap();
    assert!(
        wordlab(&["gen", "--spec", "fixed:0=01,1=0@0", "--len", "5000", "--out", path])
            .status
            .success()
    );
    let file_spec = format!("file:{path}");
    for args in [
        vec!["ace", "--len", "5000", "--k", "1", "--m", "1..300", "--format", "csv"],
        vec!["scan", "--len", "5000", "--k", "2", "--m", "1..100", "--format", "json"],
        vec!["exp", "--len", "5000", "--m", "1..50"],
    ] {
        let mut direct = args.clone();
        direct.extend(["--spec", "fixed:0=01,1=0@0"]);
        let mut from_file = args.clone();
        from_file.extend(["--spec", &file_spec]);
        let (a, b) = (wordlab(&direct), wordlab(&from_file));
        assert!(a.status.success() && b.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let past_end = wordlab(&["gen", "--spec", &file_spec, "--len", "5001"]);
    assert_eq!(past_end.status.code(), Some(2));
}

#[test]
fn ace_json_has_summary_fields() {
    let out = wordlab(&[
        "ace",
        "--spec",
        "fixed:0=01,1=0@0",
        "--len",
        "100000",
        "--k",
        "1",
        "--m",
        "5..500",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for field in ["n", "k", "m_lo", "m_hi", "running_max", "argmax_m"] {
        assert!(v.get(field).is_some(), "missing {field}");
    }
    let rm = v["running_max"].as_f64().unwrap();
    assert!((rm - 5f64.sqrt()).abs() < 0.1, "{rm}");
    assert_eq!(v["rows"].as_array().unwrap().len(), 496);
}

#[test]
fn ace_csv_format() {
    let out = wordlab(&["ace", "--spec", "lit:0", "--len", "10", "--k", "1", "--m", "1..2"]);
    assert_eq!(stdout(&out), "m,exponent,ratio\n1,10,10.00000000\n2,5,2.500000000\n");
}

#[test]
fn scan_csv_columns() {
    let out = wordlab(&[
        "scan",
        "--spec",
        "fixed:0=01,1=10@0",
        "--len",
        "8",
        "--k",
        "1",
        "--m",
        "2..2",
    ]);
    assert_eq!(stdout(&out), "m,max_exponent,ratio,position\n2,4,2.000000000,0\n");
}

#[test]
fn subst_prints_images_then_word() {
    let out = wordlab(&["subst", "--kind", "sigma", "--N", "4", "--spec", "lit:01", "--len", "2"]);
    assert_eq!(stdout(&out), "0=#000\n1=#111\n#000#111\n");
    let out = wordlab(&[
        "subst",
        "--kind",
        "tau",
        "--N",
        "4",
        "--k",
        "2",
        "--spec",
        "lit:#110#110#000",
        "--len",
        "12",
        "--decode",
    ]);
    assert_eq!(stdout(&out), "0=#000\n1=#110\n110\n");
    let out = wordlab(&[
        "subst", "--kind", "tau", "--N", "3", "--k", "3", "--spec", "lit:0", "--len", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("N >= 2k - 1"));
}

#[test]
fn lagrange_and_scale_outputs() {
    assert_eq!(
        stdout(&wordlab(&["lagrange", "--cf", ";1", "--depth", "100"])),
        "2.236067977\n"
    );
    assert_eq!(stdout(&wordlab(&["lagrange", "--cf", "7,3;1"])), "2.236067977\n");
    assert_eq!(stdout(&wordlab(&["lagrange", "--cf", ";2"])), "2.828427125\n");
    for (theta, n) in [("5", 2), ("1", 6), ("0.1", 46)] {
        let v = json(&wordlab(&["scale", "--theta", theta]));
        assert_eq!(v["n"], n, "theta {theta}");
    }
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = [
        "verify", "--suite", "all", "--kind", "sigma", "--N", "4", "--seed", "7", "--format", "json",
    ];
    let a = wordlab(&args);
    assert_eq!(a.status.code(), Some(0));
    let v = json(&a);
    let verdicts = v.as_array().unwrap();
    assert_eq!(verdicts.len(), 3);
    assert!(verdicts.iter().all(|x| x["status"] == "pass"));
    assert_eq!(wordlab(&args).stdout, a.stdout);
}

#[test]
fn recorded_suites_exit_zero_with_warning() {
    let out = wordlab(&[
        "verify",
        "--suite",
        "property-ii",
        "--kind",
        "sigma",
        "--N",
        "3",
        "--exhaustive",
        "8",
        "--random",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)[0]["status"], "recorded");
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn marked_morphism_divisibility() {
    let out = wordlab(&[
        "verify",
        "--suite",
        "div",
        "--kind",
        "marked",
        "--u",
        "0",
        "--v",
        "1",
        "--u2",
        "1",
        "--v2",
        "0",
        "--exhaustive",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)[0]["status"], "pass");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["gen", "--spec", "lit:01"],
        vec!["gen", "--spec", "fixed:0=10@0", "--len", "5"],
        vec!["ace", "--spec", "lit:01", "--len", "10", "--k", "1", "--m", "3..1"],
        vec!["ace", "--spec", "lit:01", "--len", "10", "--k", "1", "--m", "1..6"],
        vec!["scale", "--theta", "-1"],
        vec!["verify", "--suite", "nope", "--kind", "sigma", "--N", "2"],
        vec!["gen", "--spec", "lit:01", "--len", "3", "--unknown-flag"],
    ] {
        let out = wordlab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn resource_caps_exit_three() {
    let out = wordlab(&["gen", "--spec", "lit:01", "--len", "1000", "--max-len", "100"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-len"));
    let out = wordlab(&[
        "ace",
        "--spec",
        "fixed:0=01,1=0@0",
        "--len",
        "200000",
        "--k",
        "1",
        "--m",
        "1..2",
        "--max-mem-mb",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-mem-mb"));
}
