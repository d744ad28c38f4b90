use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BOX_X: &str = r#"kind=box expr="x" domain=[0.5,8]"#;
const BOX_1: &str = r#"kind=box expr="1" domain=[0.5,8]"#;
const BOX_0: &str = r#"kind=box expr="0" domain=[0.5,8]"#;

fn hmsvf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmsvf"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn check_pass_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = hmsvf(&[
        "check",
        "--property",
        "m-concave",
        "--svf",
        BOX_X,
        "--m",
        "0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&out);
    assert_eq!(r["verdict"], "PASS");
    assert_eq!(r["config_echo"]["m"].as_f64(), Some(0.5));
    assert_eq!(r["config_echo"]["property"], "m-concave");
    for key in ["worst_margin", "witness", "links", "stats"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn check_fail_exits_one_with_witness() {
    let o = hmsvf(&[
        "check",
        "--property",
        "m-concave",
        "--svf",
        BOX_1,
        "--m",
        "0.5",
    ]);
    assert_eq!(code(&o), 1);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["verdict"], "FAIL");
    assert!(r["witness"]["x"].is_f64());
    assert!(r["worst_margin"].as_f64().unwrap() > 1e-9);
}

#[test]
fn invalid_settings_exit_two() {
    assert_eq!(
        code(&hmsvf(&[
            "check",
            "--property",
            "m-concave",
            "--svf",
            BOX_X
        ])),
        2
    );
    assert_eq!(
        code(&hmsvf(&[
            "check",
            "--property",
            "convex",
            "--svf",
            BOX_X,
            "--m",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&hmsvf(&[
            "check",
            "--property",
            "m-concave",
            "--svf",
            BOX_X,
            "--m",
            "1.5"
        ])),
        2
    );
    assert_eq!(
        code(&hmsvf(&[
            "check",
            "--property",
            "m-concave",
            "--svf",
            "kind=box",
            "--m",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&hmsvf(&[
            "check",
            "--property",
            "closure",
            "--svf",
            BOX_X,
            "--m",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&hmsvf(&[
            "check",
            "--property",
            "m-concave",
            "--m",
            "1",
            "--grid",
            "3,3"
        ])),
        2
    );
}

#[test]
fn config_file_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"property": "m-concave", "m": 0.5, "sample_size": 3}"#,
    )
    .unwrap();
    let o = hmsvf(&["check", "--svf", BOX_X, "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("sample_size"));
}

#[test]
fn config_file_supplies_settings_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"property": "m-concave", "m": 0.5, "svf": [{}], "grid": "9,9,5"}}"#,
            serde_json::to_string(BOX_1).unwrap()
        ),
    )
    .unwrap();
    let o = hmsvf(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["stats"]["grid"], serde_json::json!([9, 9, 5]));
    let o = hmsvf(&["check", "--config", cfg.to_str().unwrap(), "--svf", BOX_X]);
    assert_eq!(code(&o), 0);
}

#[test]
fn tabulated_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f.csv");
    let mut text = String::from("x,lo,hi\n");
    for i in 0..=16 {
        let x = 0.5 + i as f64 * 0.5;
        text.push_str(&format!("{x},0,{x}\n"));
    }
    fs::write(&csv, text).unwrap();
    let spec = format!("kind=tabulated file={}", csv.display());
    let o = hmsvf(&[
        "check",
        "--property",
        "m-midconcave",
        "--svf",
        &spec,
        "--m",
        "1",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn falsify_exit_codes_and_determinism() {
    let run = |svf: &str, seed: &str| {
        hmsvf(&[
            "falsify",
            "--property",
            "m-concave",
            "--svf",
            svf,
            "--m",
            "0.5",
            "--seed",
            seed,
        ])
    };
    let found = run(BOX_1, "3");
    assert_eq!(code(&found), 1);
    assert_eq!(found.stdout, run(BOX_1, "3").stdout);
    assert_eq!(code(&run(BOX_0, "3")), 0);
    let o = hmsvf(&[
        "falsify",
        "--property",
        "kuhn",
        "--svf",
        BOX_0,
        "--m",
        "0.5",
        "--t",
        "0.3",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn suite_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let small = ["--grid", "9,9,5", "--depth", "3"];

    let mut args = vec!["suite"];
    args.extend_from_slice(&small);
    let o = hmsvf(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let wrong = dir.path().join("wrong.json");
    fs::write(
        &wrong,
        r#"{"expectations": [{"family": "box(x)", "property": "m-concave", "m": 0.5, "verdict": "FAIL"}]}"#,
    )
    .unwrap();
    let mut args = vec!["suite", "--config", wrong.to_str().unwrap()];
    args.extend_from_slice(&small);
    let o = hmsvf(&args);
    assert_eq!(code(&o), 1);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r["note"]
        .as_str()
        .unwrap()
        .contains("box(x) m=0.5 c=0 m-concave"));

    let empty = dir.path().join("empty.json");
    fs::write(&empty, r#"{"families": []}"#).unwrap();
    assert_eq!(
        code(&hmsvf(&["suite", "--config", empty.to_str().unwrap()])),
        2
    );
}

#[test]
fn report_summarises_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let pass = dir.path().join("pass.json");
    let fail = dir.path().join("fail.json");
    let p = pass.to_str().unwrap();
    let f = fail.to_str().unwrap();
    assert_eq!(
        code(&hmsvf(&[
            "check",
            "--property",
            "m-concave",
            "--svf",
            BOX_X,
            "--m",
            "0.5",
            "--out",
            p
        ])),
        0
    );
    assert_eq!(
        code(&hmsvf(&[
            "check",
            "--property",
            "m-concave",
            "--svf",
            BOX_1,
            "--m",
            "0.5",
            "--out",
            f
        ])),
        1
    );

    let o = hmsvf(&["report", p]);
    assert_eq!(code(&o), 0);
    let rows = fs::read_to_string(dir.path().join("pass.csv")).unwrap();
    let mut lines = rows.lines();
    assert_eq!(lines.next(), Some("x,y,margin"));
    let over = lines
        .filter_map(|l| l.rsplit(',').next().unwrap().parse::<f64>().ok())
        .filter(|&m| m > 1e-9)
        .count();
    assert_eq!(over, 0);

    let csv = dir.path().join("plot.csv");
    let o = hmsvf(&["report", f, "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let summary = String::from_utf8_lossy(&o.stdout);
    assert!(summary.contains("FAIL"));
    let r = read_json(&fail);
    let (wx, wy) = (
        r["witness"]["x"].as_f64().unwrap(),
        r["witness"]["y"].as_f64().unwrap(),
    );
    let worst = r["worst_margin"].as_f64().unwrap();
    let witness_row = fs::read_to_string(&csv).unwrap().lines().skip(1).any(|l| {
        let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
        v[0] == wx && v[1] == wy && v[2] == worst
    });
    assert!(witness_row, "witness cell missing from plot data");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&hmsvf(&["report", bad.to_str().unwrap()])), 2);
    fs::write(&bad, r#"{"verdict": "PASS"}"#).unwrap();
    assert_eq!(code(&hmsvf(&["report", bad.to_str().unwrap()])), 2);
    assert_eq!(
        code(&hmsvf(&[
            "report",
            dir.path().join("missing.json").to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn csv_format_emits_plot_rows() {
    let o = hmsvf(&[
        "check",
        "--property",
        "m-midconcave",
        "--svf",
        BOX_X,
        "--m",
        "1",
        "--grid",
        "4,4,1",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 17);
    assert!(text.starts_with("x,y,margin\n"));
}
