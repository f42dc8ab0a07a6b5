//! Acceptance gate: the six release criteria, one pass/fail line each.
//!
//! Criteria 1-4 and 6 run against the bundled reaction-time corpus; criterion
//! 5 is the dataset-free property suite. Every criterion also carries a
//! runtime bound.

use lpsharp::io::ingest_csv;
use lpsharp::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/peirce1872.csv")
}

fn close(label: &str, got: f64, want: f64, tol: f64) {
    assert!(
        (got - want).abs() <= tol,
        "{label}: got {got}, want {want} +/- {tol}"
    );
}

fn day_series(day: u32) -> ExperimentSeries {
    ingest_csv(&corpus_path())
        .unwrap()
        .into_iter()
        .find(|s| s.series_id == day)
        .unwrap_or_else(|| panic!("day {day} missing from corpus"))
}

fn criterion_1() {
    let series = day_series(11);
    let base = fit_laplace_mle(&series.values).unwrap();
    close("day-11 location", base.location(), 213.0, 0.5);
    close("day-11 scale", base.scale(), 25.7, 0.5);
    let basis = LPBasis::build(6).unwrap();
    let profile = fit_profile(&series.values, &base, &basis, Penalty::Aic, ScreenMode::Open).unwrap();
    assert_eq!(profile.selected, vec![3, 4], "day-11 selected set");
    close("day-11 lp3", profile.smoothed[2], 0.095, 0.03);
    close("day-11 lp4", profile.smoothed[3], -0.148, 0.03);
    let constraints: Vec<(usize, f64)> = profile
        .selected
        .iter()
        .map(|&j| (j, profile.smoothed[j - 1]))
        .collect();
    let tilt = maxent_fit(&constraints, &basis, basis.quadrature()).unwrap();
    close("day-11 theta3", tilt.terms()[0].1, 0.098, 0.01);
    close("day-11 theta4", tilt.terms()[1].1, -0.153, 0.01);
    close("day-11 psi", tilt.log_partition(), 0.0152, 0.005);
}

fn criterion_2() {
    let series = day_series(13);
    let base = fit_laplace_mle(&series.values).unwrap();
    close("day-13 location", base.location(), 244.0, 0.5);
    close("day-13 scale", base.scale(), 20.0, 0.5);
    let basis = LPBasis::build(6).unwrap();
    let profile = fit_profile(&series.values, &base, &basis, Penalty::Aic, ScreenMode::Open).unwrap();
    assert_eq!(profile.selected, vec![4], "day-13 selected set");
    close("day-13 lp4", profile.smoothed[3], -0.256, 0.03);
}

fn criterion_3() {
    let dataset = ingest_csv(&corpus_path()).unwrap();
    assert_eq!(dataset.len(), 24, "corpus day count");
    let basis = LPBasis::build(4).unwrap();
    let cfg = IcaConfig::default();
    let table = compare_surprisal(&dataset, &cfg, &basis).unwrap();
    let wins = table.iter().filter(|r| r.si_laplace < r.si_gauss).count();
    assert!(wins >= 16, "laplace SI below gauss SI on {wins}/24 days, need >= 16");
}

fn criterion_4() {
    let dataset = ingest_csv(&corpus_path()).unwrap();
    let basis = LPBasis::build(4).unwrap();
    let cfg = IcaConfig::default();
    let map = build_lp_map(&dataset, Family::Gaussian, &cfg, &basis).unwrap();
    let rows: Vec<(u32, Vec<f64>)> = map
        .rows
        .iter()
        .map(|r| match r {
            ica::MapRow::Fitted(r) => (r.series_id, r.smoothed.clone()),
            _ => panic!("degenerate row in corpus"),
        })
        .collect();
    let lp2_pos = rows.iter().filter(|(_, s)| s[1] > 0.0).count();
    assert!(lp2_pos > 12, "lp2 > 0 on {lp2_pos}/24 days, need majority");
    let lp4_pos = rows.iter().filter(|(_, s)| s[3] > 0.0).count();
    assert!(lp4_pos > 12, "lp4 > 0 on {lp4_pos}/24 days, need majority");
    let early_pos = rows
        .iter()
        .filter(|(d, s)| (2..=14).contains(d) && s[2] > 0.0)
        .count();
    let early_neg = rows
        .iter()
        .filter(|(d, s)| (2..=14).contains(d) && s[2] < 0.0)
        .count();
    assert!(early_pos > early_neg, "lp3 days 2-14: {early_pos} pos vs {early_neg} neg");
    let late_pos = rows
        .iter()
        .filter(|(d, s)| (16..=24).contains(d) && s[2] > 0.0)
        .count();
    let late_neg = rows
        .iter()
        .filter(|(d, s)| (16..=24).contains(d) && s[2] < 0.0)
        .count();
    assert!(late_neg > late_pos, "lp3 days 16-24: {late_pos} pos vs {late_neg} neg");
}

fn criterion_5() {
    // orthonormality under the default quadrature
    let basis = LPBasis::build(8).unwrap();
    let quad = basis.quadrature();
    for j in 1..=8 {
        for k in 1..=8 {
            let ip = quad.integrate(|u| basis.eval_s(j, u).unwrap() * basis.eval_s(k, u).unwrap());
            let expect = if j == k { 1.0 } else { 0.0 };
            assert!((ip - expect).abs() <= 1e-8, "<S_{j},S_{k}> = {ip}");
        }
    }

    // numeric Gram-Schmidt coefficients match the printed closed forms
    let r5 = 5f64.sqrt();
    let r7 = 7f64.sqrt();
    let r12 = 12f64.sqrt();
    let printed: Vec<Vec<f64>> = vec![
        vec![-r12 / 2.0, r12],
        vec![r5, -6.0 * r5, 6.0 * r5],
        vec![-r7, 12.0 * r7, -30.0 * r7, 20.0 * r7],
        vec![3.0, -60.0, 270.0, -420.0, 210.0],
    ];
    for (j, expected) in printed.iter().enumerate() {
        let got = basis.coefficients(j + 1).unwrap();
        for (g, e) in got.iter().zip(expected) {
            close("printed polynomial coefficient", *g, *e, 1e-10);
        }
    }

    // MaxEnt moment matching and normalization on seeded feasible targets
    let basis6 = LPBasis::build(6).unwrap();
    let quad6 = basis6.quadrature();
    let fine = gauss_legendre(256).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..50 {
        let k = rng.gen_range(1..=3);
        let mut orders: Vec<usize> = Vec::new();
        while orders.len() < k {
            let j = rng.gen_range(1..=6);
            if !orders.contains(&j) {
                orders.push(j);
            }
        }
        // targets are exact moments of a random exponential tilt, hence feasible
        let theta: Vec<f64> = (0..k).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let z = fine.integrate(|u| {
            orders
                .iter()
                .zip(&theta)
                .map(|(&j, t)| t * basis6.eval_s(j, u).unwrap())
                .sum::<f64>()
                .exp()
        });
        let constraints: Vec<(usize, f64)> = orders
            .iter()
            .map(|&j| {
                let m = fine.integrate(|u| {
                    basis6.eval_s(j, u).unwrap()
                        * orders
                            .iter()
                            .zip(&theta)
                            .map(|(&jj, t)| t * basis6.eval_s(jj, u).unwrap())
                            .sum::<f64>()
                            .exp()
                }) / z;
                (j, m)
            })
            .collect();
        let d = maxent_fit(&constraints, &basis6, quad6).unwrap();
        for &(j, target) in &constraints {
            let m = fine.integrate(|u| d.eval(u) * basis6.eval_s(j, u).unwrap());
            close("maxent moment", m, target, 1e-8);
        }
        close("maxent mass", fine.integrate(|u| d.eval(u)), 1.0, 1e-8);
        // kl identity: quadrature value equals sum(theta * lp) - psi
        let by_quad = kl_surprise(&d, &fine).unwrap();
        let by_identity: f64 = d
            .terms()
            .iter()
            .zip(&constraints)
            .map(|(&(_, th), &(_, lp))| th * lp)
            .sum::<f64>()
            - d.log_partition();
        close("kl identity", by_quad, by_identity, 1e-8);
    }

    // OPEN equals the exhaustive argmax over prefix sizes
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let raw: Vec<f64> = (0..6).map(|_| rng.gen_range(-0.3..0.3)).collect();
        let n = rng.gen_range(20..1200usize);
        for penalty in [Penalty::Aic, Penalty::Bic] {
            let (sel, _) = open_select(&raw, n, penalty);
            let mut mags: Vec<f64> = raw.iter().map(|c| c * c).collect();
            mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let rate = penalty.gamma(n) / n as f64;
            let mut best = (0usize, 0.0f64);
            let mut acc = 0.0;
            for (m, v) in mags.iter().enumerate() {
                acc += v;
                let val = acc - rate * (m + 1) as f64;
                if val > best.1 {
                    best = (m + 1, val);
                }
            }
            assert_eq!(sel.len(), best.0, "OPEN vs exhaustive argmax on {raw:?} n={n}");
        }
    }

    // monotone/scale invariance of LP coefficients
    let basis4 = LPBasis::build(4).unwrap();
    let lap = BaseModel::new(Family::Laplace, 5.0, 2.0).unwrap();
    let sample: Vec<f64> = {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        (0..300).map(|_| lap.quantile(rng.gen_range(0.001..0.999)).unwrap()).collect()
    };
    let raw = estimate_lp(&sample, &lap, &basis4).unwrap();
    let (a, b) = (3.25, -11.0);
    let mapped: Vec<f64> = sample.iter().map(|x| a * x + b).collect();
    let mapped_base = BaseModel::new(Family::Laplace, a * 5.0 + b, a * 2.0).unwrap();
    let raw2 = estimate_lp(&mapped, &mapped_base, &basis4).unwrap();
    for (c, d) in raw.iter().zip(&raw2) {
        close("affine invariance of raw lp", *c, *d, 1e-12);
    }

    // base-consistent quantile grids select nothing
    for family in [Family::Gaussian, Family::Laplace] {
        let base = BaseModel::new(family, 100.0, 7.0).unwrap();
        let grid: Vec<f64> = (1..=500)
            .map(|i| base.quantile((i as f64 - 0.5) / 500.0).unwrap())
            .collect();
        let profile = fit_profile(&grid, &base, &basis4, Penalty::Aic, ScreenMode::Open).unwrap();
        assert!(profile.selected.is_empty(), "{family:?} grid selected {:?}", profile.selected);
        assert_eq!(profile.surprisal, 0.0);
    }
}

fn criterion_6() {
    let exe = env!("CARGO_BIN_EXE_lpsharp");
    let input = corpus_path();
    let mut outputs: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let status = std::process::Command::new(exe)
            .args(["ica", "--input"])
            .arg(&input)
            .args(["--family", "both", "--output-dir"])
            .arg(dir.path())
            .status()
            .unwrap();
        assert!(status.success(), "ica run failed");
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().into_string().unwrap(),
                    std::fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        outputs.push(files);
    }
    let names: Vec<&String> = outputs[0].iter().map(|(n, _)| n).collect();
    assert!(names.contains(&&"lp_map_gaussian.csv".to_string()));
    assert!(names.contains(&&"lp_map_laplace.csv".to_string()));
    assert!(names.contains(&&"surprisal.csv".to_string()));
    assert_eq!(outputs[0], outputs[1], "reruns differ");
}

#[test]
fn acceptance_gate() {
    let criteria: [(&str, fn(), Duration); 6] = [
        ("study-11 reproduction", criterion_1, Duration::from_secs(1)),
        ("study-13 reproduction", criterion_2, Duration::from_secs(1)),
        ("surprisal comparison over corpus", criterion_3, Duration::from_secs(10)),
        ("gaussian lp-map structure", criterion_4, Duration::from_secs(10)),
        ("dataset-free property suite", criterion_5, Duration::from_secs(30)),
        ("deterministic ica outputs", criterion_6, Duration::from_secs(30)),
    ];
    let mut failed = false;
    for (idx, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| f()));
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let ok = result.is_ok() && in_time;
        println!(
            "criterion {}: {} - {} ({:.2?})",
            idx + 1,
            name,
            if ok { "pass" } else { "FAIL" },
            elapsed
        );
        if let Err(e) = result {
            if let Some(msg) = e.downcast_ref::<String>() {
                println!("  reason: {msg}");
            } else if let Some(msg) = e.downcast_ref::<&str>() {
                println!("  reason: {msg}");
            }
        } else if !in_time {
            println!("  reason: runtime {elapsed:.2?} exceeds {limit:.2?}");
        }
        failed |= !ok;
    }
    assert!(!failed, "acceptance criteria failed");
}
