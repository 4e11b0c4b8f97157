use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fermion-magic"));
    cmd.env_remove("FERMION_MAGIC_WORKERS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn ipr_table_reports_three_tenths() {
    let out = run(&["ipr-table", "--L", "4", "--N", "2", "--alpha", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("L,N,alpha,ipr_exact,pre_annealed,pre_asymptotic\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let ipr: f64 = rows[0][3].parse().unwrap();
    assert!((ipr - 0.3).abs() < 1e-14);
}

#[test]
fn kitaev_vacuum_row_is_zero() {
    let out = run(&[
        "kitaev2d",
        "--ell",
        "4",
        "--t",
        "1",
        "--delta",
        "0",
        "--mu",
        "-1",
        "--alpha",
        "1",
        "--samples",
        "2000",
        "--seed",
        "1",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.starts_with(
        "model,L_or_ell,N_or_blank,t,mu,delta,alpha,m_filtered_mean,m_filtered_stderr,realizations,samples,seed\n"
    ));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][7].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows[0][8].parse::<f64>().unwrap(), 0.0);
    assert_eq!(&rows[0][10], "2000");
    assert_eq!(&rows[0][11], "1");
}

#[test]
fn validate_passes() {
    let out = run(&["validate", "--max-modes", "5", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().count() > 5);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let args = [
        "random-sre",
        "--L",
        "4,6",
        "--alpha",
        "1",
        "--alpha",
        "2",
        "--realizations",
        "4",
        "--samples",
        "300",
        "--seed",
        "11",
    ];
    let one = run(&[&args[..], &["--workers", "1"]].concat());
    let four = run(&[&args[..], &["--workers", "4"]].concat());
    let env = bin()
        .args(args)
        .env("FERMION_MAGIC_WORKERS", "3")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);
    assert_eq!(csv_rows(&stdout(&one)).len(), 4);
}

#[test]
fn fixed_n_is_reproducible_and_has_ipr_columns() {
    let args = [
        "fixed-n",
        "--L",
        "6",
        "--N",
        "2,3",
        "--alpha",
        "2",
        "--realizations",
        "3",
        "--samples",
        "200",
        "--seed",
        "5",
    ];
    let a = run(&[&args[..], &["--workers", "1"]].concat());
    let b = run(&[&args[..], &["--workers", "2"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let header = text.lines().next().unwrap();
    assert!(header.contains("ipr_exact") && header.contains("pre_annealed"));
}

#[test]
fn kitaev_mu_range_expands_inclusively() {
    let out = run(&[
        "kitaev2d",
        "--ell",
        "2",
        "--delta",
        "0.1",
        "--mu-range",
        "-1:1:0.5",
        "--alpha",
        "2",
        "--samples",
        "50",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    let mus: Vec<f64> = csv_rows(&stdout(&out))
        .iter()
        .map(|r| r[4].parse().unwrap())
        .collect();
    assert_eq!(mus, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
}

#[test]
fn json_format_is_an_array_of_records() {
    let out = run(&[
        "ipr-table",
        "--L",
        "8",
        "--N",
        "2,4",
        "--alpha",
        "2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["N"], 4);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        run(&["random-sre", "--L", "4", "--alpha", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run(&[
            "random-sre",
            "--L",
            "4",
            "--alpha",
            "2",
            "--seed",
            "1",
            "--workers",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["ipr-table", "--L", "4", "--N", "5", "--alpha", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["kitaev2d", "--ell", "4", "--alpha", "1", "--seed", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sample_then_estimate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("vacuum.json");
    let samples = dir.path().join("samples.csv");
    std::fs::write(
        &state,
        r#"{"L":2,"gamma":[0,1,0,0,-1,0,0,0,0,0,0,1,0,0,-1,0]}"#,
    )
    .unwrap();
    let out = run(&[
        "sample",
        "--input",
        state.to_str().unwrap(),
        "--samples",
        "100",
        "--seed",
        "9",
        "--output",
        samples.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let written = std::fs::read_to_string(&samples).unwrap();
    assert!(written.starts_with("sample_index,x,log_prob\n"));
    assert_eq!(csv_rows(&written).len(), 100);

    let out = run(&[
        "estimate",
        "--input",
        samples.to_str().unwrap(),
        "--alpha",
        "2",
        "--seed",
        "9",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn malformed_covariance_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("bad.json");
    std::fs::write(&state, r#"{"L":1,"gamma":[0,1,1,0]}"#).unwrap();
    let out = run(&[
        "sample",
        "--input",
        state.to_str().unwrap(),
        "--samples",
        "5",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
