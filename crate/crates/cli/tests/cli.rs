use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lrdresid(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrdresid"))
        .args(args)
        .arg("--out-dir")
        .arg(out_dir)
        .env_remove("LRDRESID_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], out_dir: &Path) -> Output {
    let out = lrdresid(args, out_dir);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn write_input(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn table1_writes_thirty_rows_and_is_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = ["table1", "--n", "100", "--reps", "100", "--seed", "1"];
    ok(&args, a.path());
    ok(&args, b.path());
    let text = read(a.path(), "table1.csv");
    let rows = csv_rows(&text);
    assert_eq!(
        rows[0].join(","),
        "scenario,statistic,q1,q3,sd,mean,reps,n,seed,backend"
    );
    assert_eq!(rows.len(), 31);
    assert_eq!(text, read(b.path(), "table1.csv"));

    let manifest: serde_json::Value =
        serde_json::from_str(&read(a.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["master_seed"], 1);
    assert_eq!(manifest["command"], "table1");
    assert!(manifest["wall_time_secs"].as_f64().unwrap() >= 0.0);
}

#[test]
fn table1_raw_and_json_outputs() {
    let dir = TempDir::new().unwrap();
    ok(
        &[
            "table1", "--reps", "5", "--alphas", "0.4", "--raw", "--json",
        ],
        dir.path(),
    );
    let raw = csv_rows(&read(dir.path(), "raw.csv"));
    assert_eq!(
        raw[0].join(","),
        "scenario,rep,statistic,sup_value,argmax_x,theta_hat,n,alpha,backend"
    );
    assert_eq!(raw.len(), 1 + 2 * 5 * 6);
    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "table1.json")).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 12);
    assert_eq!(json[0]["scenario"], "iid");
}

#[test]
fn table1_rejects_single_replication() {
    let dir = TempDir::new().unwrap();
    let out = lrdresid(&["table1", "--reps", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reps must be ≥ 2"));
}

#[test]
fn replay_reproduces_outputs_byte_exactly() {
    let first = TempDir::new().unwrap();
    let second = TempDir::new().unwrap();
    ok(
        &[
            "rates",
            "--alpha",
            "0.3",
            "--n-grid",
            "64,128,256",
            "--reps",
            "10",
            "--statistics",
            "Kn,KnHatNw",
        ],
        first.path(),
    );
    let manifest = first.path().join("manifest.json");
    ok(&["replay", manifest.to_str().unwrap()], second.path());
    assert_eq!(
        read(first.path(), "rates.csv"),
        read(second.path(), "rates.csv")
    );
}

#[test]
fn rates_output_slope_matches_dispersions() {
    let dir = TempDir::new().unwrap();
    ok(
        &[
            "rates",
            "--alpha",
            "0.3",
            "--n-grid",
            "64,128,256,512",
            "--reps",
            "20",
        ],
        dir.path(),
    );
    let rows = csv_rows(&read(dir.path(), "rates.csv"));
    assert_eq!(
        rows[0].join(","),
        "n,reps,statistic,dispersion,slope,slope_se,alpha,backend,seed"
    );
    let kn: Vec<&Vec<String>> = rows[1..].iter().filter(|r| r[2] == "Kn").collect();
    assert_eq!(kn.len(), 4);
    let pts: Vec<(f64, f64)> = kn
        .iter()
        .map(|r| {
            (
                r[0].parse::<f64>().unwrap().ln(),
                r[3].parse::<f64>().unwrap().ln(),
            )
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 4.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 4.0;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope: f64 = kn[0][4].parse().unwrap();
    assert!((sxy / sxx - slope).abs() < 1e-12);
}

#[test]
fn rates_validation() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        lrdresid(&["rates", "--alpha", "1.2"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        lrdresid(
            &["rates", "--alpha", "0.3", "--n-grid", "512,1024"],
            dir.path()
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        lrdresid(
            &["rates", "--alpha", "0.3", "--statistics", "Zn"],
            dir.path()
        )
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn gof_reports_exact_sup() {
    let dir = TempDir::new().unwrap();
    let input = write_input(dir.path(), "r.csv", "residual\n-1\n0\n1\n");
    let out = ok(
        &["gof", "--input", &input, "--theta", "1", "--json"],
        dir.path(),
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["sup"].as_f64().unwrap() - 0.17468).abs() < 1e-5);
    assert_eq!(report["argmax_x"], 1.0);

    let out = ok(
        &[
            "gof",
            "--input",
            &input,
            "--estimate-theta",
            "--alpha",
            "0.4",
            "--json",
        ],
        dir.path(),
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["theta_hat_sq"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert!(report["sigma_scaled_sup"].as_f64().is_some());
}

#[test]
fn gof_data_errors_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let empty = write_input(dir.path(), "empty.csv", "");
    let out = lrdresid(&["gof", "--input", &empty, "--theta", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no observations"));

    let bad = write_input(dir.path(), "bad.csv", "1\n2\nthree\n");
    assert_eq!(
        lrdresid(&["gof", "--input", &bad, "--theta", "1"], dir.path())
            .status
            .code(),
        Some(2)
    );

    let missing = dir.path().join("missing.csv");
    let out = lrdresid(
        &["gof", "--input", missing.to_str().unwrap(), "--theta", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_schema_and_determinism() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let fgn = [
        "simulate",
        "--alpha",
        "0.2",
        "--n",
        "1000",
        "--backend",
        "fgn",
        "--seed",
        "3",
    ];
    ok(&fgn, a.path());
    ok(&fgn, b.path());
    let text = read(a.path(), "path.csv");
    assert_eq!(text, read(b.path(), "path.csv"));
    let rows = csv_rows(&text);
    assert_eq!(rows[0], vec!["epsilon"]);
    assert_eq!(rows.len(), 1001);

    ok(
        &[
            "simulate",
            "--alpha",
            "0.4",
            "--n",
            "50",
            "--backend",
            "ma",
            "--truncation",
            "100",
        ],
        a.path(),
    );
    let rows = csv_rows(&read(a.path(), "path.csv"));
    assert_eq!(rows[0], vec!["epsilon", "eta"]);
    assert_eq!(rows.len(), 51);
}

#[test]
fn simulated_path_feeds_gof() {
    let dir = TempDir::new().unwrap();
    ok(
        &["simulate", "--n", "200", "--backend", "iid", "--seed", "9"],
        dir.path(),
    );
    let path = dir.path().join("path.csv");
    let out = ok(
        &[
            "gof",
            "--input",
            path.to_str().unwrap(),
            "--theta",
            "1",
            "--json",
        ],
        dir.path(),
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["n"], 200);
}

#[test]
fn fit_and_density_commands() {
    let dir = TempDir::new().unwrap();
    let input = write_input(dir.path(), "xy.csv", "x,y\n0,1\n1,3\n2,2\n3,5\n4,4\n");
    ok(&["fit", "--input", &input], dir.path());
    let rows = csv_rows(&read(dir.path(), "fit.csv"));
    assert_eq!(
        rows[0].join(","),
        "kind,beta0_hat,beta1_hat,bandwidth,n,excluded_points"
    );
    assert!((rows[1][1].parse::<f64>().unwrap() - 1.4).abs() < 1e-12);
    assert!((rows[1][2].parse::<f64>().unwrap() - 0.8).abs() < 1e-12);
    assert_eq!(csv_rows(&read(dir.path(), "residuals.csv")).len(), 6);

    assert_eq!(
        lrdresid(
            &["fit", "--input", &input, "--method", "known-intercept"],
            dir.path()
        )
        .status
        .code(),
        Some(1)
    );
    ok(
        &[
            "fit",
            "--input",
            &input,
            "--method",
            "nw",
            "--bandwidth",
            "1.5",
        ],
        dir.path(),
    );

    let sample = write_input(dir.path(), "s.csv", "-1\n0\n1\n0.5\n");
    ok(
        &[
            "density",
            "--input",
            &sample,
            "--bandwidth",
            "0.5",
            "--points",
            "64",
        ],
        dir.path(),
    );
    let rows = csv_rows(&read(dir.path(), "density.csv"));
    assert_eq!(rows[0].join(","), "x,fhat,h,n,kernel");
    assert_eq!(rows.len(), 65);
}

#[test]
fn conjecture_and_reduction_commands() {
    let dir = TempDir::new().unwrap();
    ok(
        &[
            "conjecture",
            "--alpha",
            "0.3",
            "--n-grid",
            "128,256",
            "--reps",
            "5",
        ],
        dir.path(),
    );
    let rows = csv_rows(&read(dir.path(), "conjecture.csv"));
    assert_eq!(
        rows[0].join(","),
        "n,h,dispersion,feasible_bias,feasible_lrd"
    );
    let manifest = read(dir.path(), "manifest.json");
    assert!(manifest.contains("exploratory"));

    ok(
        &[
            "reduction",
            "--alpha",
            "0.2",
            "--n-grid",
            "64,128",
            "--reps",
            "5",
            "--truncation",
            "256",
        ],
        dir.path(),
    );
    assert_eq!(csv_rows(&read(dir.path(), "reduction.csv")).len(), 3);
}

#[test]
fn out_dir_defaults_to_environment() {
    let dir = TempDir::new().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_lrdresid"))
        .args(["simulate", "--n", "10", "--backend", "iid"])
        .env("LRDRESID_OUT_DIR", dir.path())
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert!(dir.path().join("path.csv").exists());
}

#[test]
fn results_do_not_depend_on_thread_cap() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    ok(&["table1", "--reps", "20", "--threads", "1"], a.path());
    ok(&["table1", "--reps", "20", "--threads", "4"], b.path());
    assert_eq!(read(a.path(), "table1.csv"), read(b.path(), "table1.csv"));
}
