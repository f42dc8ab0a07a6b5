//! End-to-end checks of the command-line binary.

use std::path::PathBuf;
use std::process::Command;

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lpsharp"))
}

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/peirce1872.csv")
}

fn read(dir: &std::path::Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn model_field(model: &str, key: &str) -> String {
    model
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("missing field {key}"))
        .to_string()
}

#[test]
fn ica_outputs_and_rerun_determinism() {
    let dir = tempfile::tempdir().unwrap();
    for _ in 0..2 {
        let status = exe()
            .args(["ica", "--input"])
            .arg(corpus())
            .args(["--family", "both", "--output-dir"])
            .arg(dir.path())
            .status()
            .unwrap();
        assert!(status.success());
    }
    let surprisal = read(dir.path(), "surprisal.csv");
    let mut lines = surprisal.lines();
    assert_eq!(lines.next(), Some("day,si_gauss,si_laplace"));
    assert_eq!(lines.count(), 24);
    let gmap = read(dir.path(), "lp_map_gaussian.csv");
    assert!(gmap.starts_with("day,lp1,lp2,lp3,lp4,si,location,scale\n"));
    assert_eq!(gmap.lines().count(), 25);
    let svg = read(dir.path(), "lp_map_laplace.svg");
    assert!(svg.starts_with("<svg"));
}

#[test]
fn sharpen_day_11_model_report() {
    let dir = tempfile::tempdir().unwrap();
    let status = exe()
        .args(["sharpen", "--day", "11", "--input"])
        .arg(corpus())
        .args(["--output-dir"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let model = read(dir.path(), "model_11.txt");
    assert_eq!(model_field(&model, "family"), "laplace");
    assert_eq!(model_field(&model, "selected"), "{3,4}");
    let loc: f64 = model_field(&model, "location").parse().unwrap();
    let scale: f64 = model_field(&model, "scale").parse().unwrap();
    assert!((loc - 213.0).abs() <= 0.5, "location {loc}");
    assert!((scale - 25.7).abs() <= 0.5, "scale {scale}");
    let th3: f64 = model_field(&model, "theta3").parse().unwrap();
    let th4: f64 = model_field(&model, "theta4").parse().unwrap();
    let psi: f64 = model_field(&model, "psi").parse().unwrap();
    assert!((th3 - 0.098).abs() <= 0.01, "theta3 {th3}");
    assert!((th4 + 0.153).abs() <= 0.01, "theta4 {th4}");
    assert!((psi - 0.0152).abs() <= 0.005, "psi {psi}");

    let d_csv = read(dir.path(), "d_11.csv");
    assert!(d_csv.starts_with("u,d_l2,d_maxent\n"));
    assert_eq!(d_csv.lines().count(), 513);
    let density = read(dir.path(), "density_11.csv");
    assert!(density.starts_with("x,f0,ds_l2,ds_maxent\n"));
    assert_eq!(density.lines().count(), 513);
}

#[test]
fn sharpen_day_13_selects_fourth_order() {
    let dir = tempfile::tempdir().unwrap();
    let status = exe()
        .args(["sharpen", "--day", "13", "--input"])
        .arg(corpus())
        .args(["--output-dir"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let model = read(dir.path(), "model_13.txt");
    assert_eq!(model_field(&model, "selected"), "{4}");
    let smoothed = model_field(&model, "smoothed_lp");
    let lp4: f64 = smoothed.split(',').nth(3).unwrap().parse().unwrap();
    assert!((lp4 + 0.256).abs() <= 0.03, "lp4 {lp4}");
}

#[test]
fn sharpen_unknown_day_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = exe()
        .args(["sharpen", "--day", "99", "--input"])
        .arg(corpus())
        .args(["--output-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("99"), "stderr: {err}");
}

#[test]
fn parse_error_names_line_and_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "day,value\n1,5\n1,6\n1,7\n1,8\n1,9\n1,oops\n").unwrap();
    let out = exe()
        .args(["ica", "--input"])
        .arg(&bad)
        .args(["--output-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 7"), "stderr: {err}");
}

#[test]
fn synth_round_trip_and_determinism() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let status = exe()
            .args([
                "synth", "--family", "laplace", "--n-per-day", "120", "--k-days", "3", "--seed",
                "5", "--output-dir",
            ])
            .arg(dir.path())
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = read(dir_a.path(), "synth.csv");
    let b = read(dir_b.path(), "synth.csv");
    assert_eq!(a, b, "same seed must give identical bytes");
    assert_eq!(a.lines().count(), 1 + 3 * 120);

    // the output re-ingests and runs through the pipeline
    let out_dir = tempfile::tempdir().unwrap();
    let status = exe()
        .args(["ica", "--input"])
        .arg(dir_a.path().join("synth.csv"))
        .args(["--family", "laplace", "--output-dir"])
        .arg(out_dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let map = read(out_dir.path(), "lp_map_laplace.csv");
    assert_eq!(map.lines().count(), 4);
}

/// Run-once pinned fixture: seed 11 produces three base-consistent series
/// whose Laplace ICA rows are all zero (seed-dependent; roughly four in five
/// null series keep an empty retained set under plain OPEN).
#[test]
fn synth_null_fixture_all_zero_rows() {
    let dir = tempfile::tempdir().unwrap();
    let status = exe()
        .args([
            "synth", "--family", "laplace", "--n-per-day", "500", "--k-days", "3", "--seed", "11",
            "--output-dir",
        ])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let status = exe()
        .args(["ica", "--input"])
        .arg(dir.path().join("synth.csv"))
        .args(["--family", "laplace", "--output-dir"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let map = read(dir.path(), "lp_map_laplace.csv");
    for line in map.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        for lp in &fields[1..6] {
            assert_eq!(*lp, "0.000000", "row {line}");
        }
    }
}

#[test]
fn synth_rejects_zero_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = exe()
        .args(["synth", "--n-per-day", "0", "--output-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("n-per-day"));
}

#[test]
fn basis_prints_coefficient_table() {
    let out = exe().args(["basis", "--max-order", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("order,power,coefficient"));
    // S_1 = sqrt(12) u - sqrt(12)/2
    assert_eq!(lines.next(), Some("1,0,-1.732051"));
    assert_eq!(lines.next(), Some("1,1,3.464102"));
    assert_eq!(text.lines().count(), 1 + 2 + 3);
}

#[test]
fn base_consistent_grid_sharpen_is_flat() {
    // quantile grid written as a synthetic day: both forms stay at 1
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("grid.csv");
    let mut csv = String::from("day,value\n");
    for i in 1..=500 {
        let u = (i as f64 - 0.5) / 500.0;
        let x = if u < 0.5 {
            (2.0 * u).ln()
        } else {
            -(2.0 * (1.0 - u)).ln()
        };
        csv.push_str(&format!("1,{:.9}\n", 50.0 + 4.0 * x));
    }
    std::fs::write(&input, csv).unwrap();
    let status = exe()
        .args(["sharpen", "--day", "1", "--input"])
        .arg(&input)
        .args(["--output-dir"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let d_csv = read(dir.path(), "d_1.csv");
    for line in d_csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[1], "1.000000", "{line}");
        assert_eq!(fields[2], "1.000000", "{line}");
    }
}
