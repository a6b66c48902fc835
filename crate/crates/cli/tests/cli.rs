use std::fs;
use std::process::{Command, Output};

use ghtensor_cli::render::BOUNDS_HEADER;
use ghtensor_cli::ResultRecord;
use serde_json::Value;

fn ghtensor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghtensor"))
        .args(args)
        .env_remove("GHTENSOR_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn entry_of_hilbert_matrix() {
    let o = ghtensor(&["entry", "--m", "2", "--n", "3", "--a", "1", "--idx", "1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["result"]["value"], 1.0);

    let o = ghtensor(&[
        "entry", "--m", "2", "--n", "3", "--a", "1", "--idx", "2,3", "--format", "human",
    ]);
    assert_eq!(stdout(&o), "entry = 0.25\n");
}

#[test]
fn classical_bounds_json() {
    let o = ghtensor(&["bounds", "--m", "2", "--n", "3", "--a", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let r = &v["result"];
    assert_eq!(r["kind"], "bounds");
    assert_eq!(r["h"]["bound_value"], 3.0);
    assert_eq!(r["z"]["bound_value"], 3.0);
    assert_eq!(r["h"]["bound_name"], "H_bound_Cor35");
    let observed = r["h"]["observed"].as_f64().unwrap();
    assert!((observed - 1.408_318_9).abs() < 1e-6);
    assert!((r["z"]["observed"].as_f64().unwrap() - 1.408_318_9).abs() < 1e-6);
    assert_eq!(r["holds"], true);
}

#[test]
fn human_bound_chain() {
    let o = ghtensor(&[
        "bounds", "--m", "2", "--n", "3", "--a", "1", "--format", "human",
    ]);
    let text = stdout(&o);
    assert!(
        text.contains("H_bound_Cor35: observed 1.40832 <= bound 3  margin 1.59168  holds"),
        "{text}"
    );
    assert!(
        text.contains("Z_bound_Cor35: observed 1.40832 <= bound 3"),
        "{text}"
    );
    assert!(text.contains("all bounds hold: true"));
}

#[test]
fn bounds_sweep_csv() {
    let o = ghtensor(&[
        "sweep", "--m", "2,4", "--n", "2..8", "--a", "0.5,1,2", "--mode", "bounds",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(BOUNDS_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2 * 7 * 3);
    let mut expected = Vec::new();
    for m in ["2", "4"] {
        for n in 2..=8 {
            for a in ["0.5", "1", "2"] {
                expected.push((m.to_string(), n.to_string(), a.to_string()));
            }
        }
    }
    for (row, (m, n, a)) in rows.iter().zip(expected) {
        assert_eq!(
            (row[0], row[1], row[2]),
            (m.as_str(), n.as_str(), a.as_str())
        );
        assert_eq!(row.len(), 13);
        assert_eq!(row[12], "true", "{row:?}");
    }
}

#[test]
fn negative_shift_sweep() {
    let o = ghtensor(&[
        "sweep",
        "--m",
        "2",
        "--n",
        "2..8",
        "--a",
        "-0.5,-1.25,-6.5",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = json(&o)["result"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 21);
    assert!(rows
        .iter()
        .all(|r| r["outcome"]["h_source"] == "dense_oracle"));
}

#[test]
fn pdcheck_sweep_csv() {
    let o = ghtensor(&[
        "sweep", "--m", "2,4", "--n", "2,4", "--a", "1,5", "--mode", "pdcheck", "--trials", "200",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("m,n,a,regime,trials,min_rayleigh,consistent\n"));
    assert_eq!(text.lines().count(), 9);
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.ends_with(",true") && l.contains("theorem_backed")));
}

#[test]
fn excluded_shift_exit_two() {
    for args in [
        vec!["entry", "--m", "2", "--n", "3", "--a", "-1", "--idx", "1,1"],
        vec!["bounds", "--m", "2", "--n", "3", "--a", "0"],
        vec!["sweep", "--m", "2", "--n", "2", "--a", "0.5,-4"],
    ] {
        let o = ghtensor(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("ℝ∖ℤ⁻"), "{}", stderr(&o));
    }
}

#[test]
fn other_validation_errors_exit_two() {
    assert_eq!(
        ghtensor(&["hspec", "--m", "2", "--n", "3", "--a", "-0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ghtensor(&["pdcheck", "--m", "3", "--n", "3", "--a", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ghtensor(&["entry", "--m", "2", "--n", "3", "--a", "1", "--idx", "4,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ghtensor(&["sweep", "--m", "2", "--n", "8..2", "--a", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ghtensor(&["bounds", "--m", "2"]).status.code(), Some(2));
}

#[test]
fn vector_files() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("lines.txt");
    fs::write(&lines, "# x\n1\n0\n\n2\n").unwrap();
    let o = ghtensor(&[
        "apply",
        "--m",
        "2",
        "--n",
        "3",
        "--a",
        "1",
        "--x-file",
        lines.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    // H (1,0,2) for the 3×3 Hilbert matrix
    let h: Vec<f64> = v["result"]["vector"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let expected = [1.0 + 2.0 / 3.0, 0.5 + 0.5, 1.0 / 3.0 + 0.4];
    for (a, b) in h.iter().zip(expected) {
        assert!((a - b).abs() < 1e-15);
    }
    assert_eq!(v["config"]["x"], serde_json::json!([1.0, 0.0, 2.0]));

    let comma = dir.path().join("comma.txt");
    fs::write(&comma, "1, -0.5").unwrap();
    let o = ghtensor(&[
        "apply",
        "--m",
        "2",
        "--n",
        "2",
        "--a",
        "1",
        "--x-file",
        comma.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["config"]["x"], serde_json::json!([1.0, -0.5]));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1\nabc\n").unwrap();
    let o = ghtensor(&[
        "apply",
        "--m",
        "2",
        "--n",
        "2",
        "--a",
        "1",
        "--x-file",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let missing = dir.path().join("missing.txt");
    let o = ghtensor(&[
        "apply",
        "--m",
        "2",
        "--n",
        "2",
        "--a",
        "1",
        "--x-file",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn inline_vector_with_negative_entries() {
    let o = ghtensor(&[
        "apply", "--m", "3", "--n", "2", "--a", "0.5", "--x", "-1,1", "--method", "naive",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["result"]["method"], "naive");
    let o = ghtensor(&["apply", "--m", "3", "--n", "2", "--a", "0.5", "--x", "1,x"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn quadrature_method() {
    let o = ghtensor(&[
        "apply",
        "--m",
        "2",
        "--n",
        "2",
        "--a",
        "1",
        "--x",
        "1,-1",
        "--method",
        "quadrature",
    ]);
    let v = json(&o);
    assert!((v["result"]["scalar"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-14);
    assert_eq!(v["result"]["method"], "quadrature");
}

fn without_wall_time(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("\"wall_time_s\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn json_output_deterministic() {
    let args = [
        "zspec", "--m", "3", "--n", "4", "--a", "-0.5", "--seed", "42",
    ];
    let first = stdout(&ghtensor(&args));
    let second = stdout(&ghtensor(&args));
    assert_eq!(without_wall_time(&first), without_wall_time(&second));
    let args = [
        "sweep",
        "--m",
        "4",
        "--n",
        "2..5",
        "--a",
        "0.5,-1.25",
        "--format",
        "json",
    ];
    assert_eq!(
        without_wall_time(&stdout(&ghtensor(&args))),
        without_wall_time(&stdout(&ghtensor(&args)))
    );
}

#[test]
fn records_round_trip() {
    for args in [
        vec![
            "bounds",
            "--m",
            "4",
            "--n",
            "3",
            "--a",
            "-1.25",
            "--samples",
            "100",
        ],
        vec![
            "pdcheck", "--m", "2", "--n", "3", "--a", "-0.5", "--trials", "300",
        ],
        vec![
            "opnorm",
            "--m",
            "2",
            "--a",
            "1",
            "--operator",
            "t",
            "--samples",
            "20",
            "--truncation",
            "500",
        ],
        vec![
            "apply",
            "--m",
            "4",
            "--n",
            "3",
            "--a",
            "0.3",
            "--x",
            "0.1,0.2,-0.7",
        ],
    ] {
        let o = ghtensor(&args);
        let text = stdout(&o);
        let record: ResultRecord =
            serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
        assert_eq!(serde_json::to_string_pretty(&record).unwrap() + "\n", text);
    }
}

#[test]
fn seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_ghtensor"))
        .args([
            "pdcheck", "--m", "2", "--n", "2", "--a", "1", "--trials", "10",
        ])
        .env("GHTENSOR_SEED", "1234")
        .output()
        .unwrap();
    assert_eq!(json(&o)["config"]["seed"], 1234);
    let o = Command::new(env!("CARGO_BIN_EXE_ghtensor"))
        .args([
            "pdcheck", "--m", "2", "--n", "2", "--a", "1", "--trials", "10", "--seed", "5",
        ])
        .env("GHTENSOR_SEED", "1234")
        .output()
        .unwrap();
    assert_eq!(json(&o)["config"]["seed"], 5);
}

#[test]
fn config_file_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# shared defaults\nm = 4\nn = 3\na = 1.5\ntrials = 50\nformat = human\n",
    )
    .unwrap();
    let path = cfg.to_str().unwrap();

    let o = ghtensor(&["pdcheck", "--config", path]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).starts_with("50 trials (theorem_backed)"),
        "{}",
        stdout(&o)
    );

    // explicit flags win; trials is ignored by hspec
    let o = ghtensor(&["hspec", "--config", path, "--a", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["config"]["spec"]["a"], 2.0);

    fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(
        ghtensor(&["hspec", "--config", path]).status.code(),
        Some(3)
    );
}

#[test]
fn operator_norm_estimate() {
    let o = ghtensor(&[
        "opnorm",
        "--m",
        "2",
        "--a",
        "1",
        "--operator",
        "f",
        "--samples",
        "50",
        "--truncation",
        "2000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = &json(&o)["result"];
    assert!(r["value"].as_f64().unwrap() <= r["bound"].as_f64().unwrap() + 1e-9);
    assert_eq!(r["within_bound"], true);
    assert_eq!(
        ghtensor(&["opnorm", "--m", "2", "--a", "-0.5", "--operator", "t"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn help_exits_zero() {
    let o = ghtensor(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sweep"));
}
