use std::process::{Command, Output};

fn enclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = enclab(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_str(&stdout(&o)).expect("valid JSON")
}

#[test]
fn enclose_reports_lost_inclusion_with_exit_zero() {
    let v = json(&[
        "enclose",
        "--poly",
        "-12,0,1,1",
        "--x0",
        "[0.5, 2.1]",
        "--method",
        "king-like",
        "--zero",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(v["outcome"]["kind"], "inclusion_lost");
    let step = &v["steps"][0];
    assert_eq!(step["x"], "[0.5, 2.1]");
    assert_eq!(step["stages"][1]["stage"], "king");
    assert_eq!(step["stages"][1]["known_zero_inside"], false);
}

#[test]
fn enclose_moore_newton_converges_in_each_mode() {
    for mode in [&["--mode", "exact"][..], &["--precision", "60"][..]] {
        let mut args = vec![
            "enclose",
            "--poly",
            "-8,0,0,1",
            "--x0",
            "[1.5,2.3]",
            "--tol",
            "1e-30",
            "--format",
            "json",
        ];
        args.extend_from_slice(mode);
        let v = json(&args);
        assert_eq!(v["outcome"]["kind"], "converged");
        let last = v["final"].as_str().unwrap();
        assert!(
            last.starts_with("[1.99999") || last.starts_with("[2"),
            "{last}"
        );
    }
}

#[test]
fn enclose_csv_and_text() {
    let base = [
        "enclose",
        "--poly",
        "-4,0,1",
        "--x0",
        "[1,3]",
        "--method",
        "three-point",
        "--beta",
        "1",
    ];
    let csv = enclab(&[&base[..], &["--format", "csv"]].concat());
    assert_eq!(csv.status.code(), Some(0));
    assert!(stdout(&csv).starts_with(
        "k,x,derivative,t,c,stage,candidate,interval,sign_change_ok,known_zero_inside\n"
    ));
    let text = enclab(&base);
    assert_eq!(text.status.code(), Some(0));
    assert!(stdout(&text).contains("outcome"));
}

#[test]
fn examples_pass() {
    for which in ["1", "2"] {
        let v = json(&["example", which, "--format", "json"]);
        assert_eq!(v["pass"], true, "example {which}");
    }
    let text = stdout(&enclab(&["example", "1"]));
    assert!(!text.contains("FAIL"));
}

#[test]
fn small_study_csv_has_one_row_per_trial() {
    let o = enclab(&[
        "study",
        "--experiments",
        "2",
        "--polys",
        "3",
        "--betas",
        "0,1",
        "--seed",
        "7",
        "--precision",
        "60",
        "--tol",
        "1e-30",
        "--format",
        "csv",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout(&o).lines().count(), 1 + 2 * 3 * 2);
}

#[test]
fn study_writes_to_out_and_is_reproducible() {
    let dir = std::env::temp_dir().join(format!("enclab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.join(name);
        let o = enclab(&[
            "study",
            "--experiments",
            "1",
            "--polys",
            "4",
            "--seed",
            "3",
            "--precision",
            "60",
            "--tol",
            "1e-30",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
        reports.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let v: serde_json::Value = serde_json::from_str(&reports[0]).unwrap();
    assert_eq!(v["aggregate"]["trials"], 40);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn coc_single_beta() {
    let v = json(&["coc", "--betas", "0", "--format", "json"]);
    let king = v["summaries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["method"] == "king-like")
        .unwrap();
    let median = king["median"].as_f64().unwrap();
    assert!((3.3..3.7).contains(&median), "{median}");
}

#[test]
fn figures() {
    let f1 = json(&["figure", "1", "--format", "json"]);
    assert_eq!(f1["lines"].as_array().unwrap().len(), 2);
    let f2 = json(&["figure", "2", "--format", "json"]);
    assert!(f2["c"].is_string());
    assert_eq!(
        enclab(&["figure", "2", "--format", "csv"]).status.code(),
        Some(0)
    );
}

#[test]
fn configuration_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["example", "1", "--mode", "exact", "--precision", "5"],
        &["example", "3"],
        &["enclose", "--poly", "-12,0,1,1", "--x0", "[2,3]"],
        &["enclose", "--poly", "-12,x,1", "--x0", "[0.5,2.1]"],
        &["enclose", "--poly", "-12,0,1,1", "--x0", "[2.1,0.5]"],
        &[
            "enclose",
            "--poly",
            "-12,0,1,1",
            "--x0",
            "[0.5,2.1]",
            "--zero",
            "3",
        ],
        &["study", "--experiments", "0"],
        &["study", "--x0", "[2,3]"],
        &["study", "--tol", "-1"],
        &["study", "--precision", "0"],
        &["coc", "--max-iter", "0"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = enclab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}
