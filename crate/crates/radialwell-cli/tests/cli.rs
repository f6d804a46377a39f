//! End-to-end tests of the installed binary: output contents, file
//! round-trips and the exit-code table.

use std::path::Path;
use std::process::{Command, Output};

use std::f64::consts::PI;

fn radialwell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radialwell"))
        .args(args)
        .env_remove("RADIALWELL_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// k column of a `n,k,E,nodes` CSV body.
fn csv_k_column(text: &str) -> Vec<f64> {
    text.lines()
        .skip(1)
        .map(|line| line.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn free_spectrum_lists_pi_multiples() {
    let out = radialwell(&[
        "spectrum",
        "--radius",
        "1",
        "--l",
        "0",
        "--family",
        "conventional",
        "-n",
        "3",
    ]);
    assert_eq!(exit_code(&out), 0);
    let ks = csv_k_column(&stdout(&out));
    assert_eq!(ks.len(), 3);
    for (i, k) in ks.iter().enumerate() {
        let expect = (i + 1) as f64 * PI;
        assert!((k - expect).abs() <= 1e-12 * expect, "k_{} = {k}", i + 1);
    }
}

#[test]
fn cosine_family_lists_half_integer_multiples() {
    let out = radialwell(&[
        "spectrum",
        "--radius",
        "1",
        "--l",
        "0",
        "--family",
        "huang-thomann",
        "-n",
        "2",
    ]);
    assert_eq!(exit_code(&out), 0);
    let ks = csv_k_column(&stdout(&out));
    assert!((ks[0] - PI / 2.0).abs() < 1e-14);
    assert!((ks[1] - 1.5 * PI).abs() < 1e-14);
}

#[test]
fn cosine_family_refuses_higher_channels() {
    let out = radialwell(&["spectrum", "--l", "1", "--family", "huang-thomann"]);
    assert_eq!(exit_code(&out), 3);
    assert!(stderr(&out).contains("square-integrable"));
}

#[test]
fn unreadable_potential_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"radius": 1.0, "kind": "morse"}"#).unwrap();
    let out = radialwell(&["spectrum", "--potential", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("unknown potential kind"));

    let out = radialwell(&["spectrum", "--potential", "/nonexistent/v.json"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("cannot read"));
}

/// The oracle file holds eigenvalues of the same Coulomb well computed
/// offline by a second-order finite-difference matrix on a 20000-point
/// Dirichlet grid, Richardson-extrapolated against the 10000-point grid.
#[test]
fn coulomb_spectrum_matches_the_difference_oracle() {
    let oracle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("coulomb_fd_oracle.json")).unwrap())
            .unwrap();
    for (l, key) in [("0", "l0"), ("1", "l1")] {
        let out = radialwell(&[
            "spectrum",
            "--potential",
            &fixture("coulomb.json"),
            "--l",
            l,
            "-n",
            "2",
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
        let ks = csv_k_column(&stdout(&out));
        for (k, reference) in ks.iter().zip(oracle[key].as_array().unwrap()) {
            let reference = reference.as_f64().unwrap();
            assert!(
                (k - reference).abs() <= 1e-5 * reference,
                "l={l}: k = {k} vs oracle {reference}"
            );
        }
    }
}

#[test]
fn audit_passes_conventional_and_flags_cosine() {
    let out = radialwell(&["audit", "--l", "0", "-n", "3"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).matches("\"verdict\": \"pass\"").count(), 3);

    let out = radialwell(&["audit", "--l", "2", "-n", "2"]);
    assert_eq!(exit_code(&out), 0);

    let out = radialwell(&["audit", "--l", "0", "--family", "huang-thomann", "-n", "2"]);
    assert_eq!(exit_code(&out), 4);
    let text = stdout(&out);
    assert!(text.contains("fail_endpoint_balance"));
    // Normalized cosine modes keep |chi| = sqrt(2) at the origin and 0 at
    // the wall.
    let origin: f64 = text
        .lines()
        .find_map(|l| l.split("\"chi_origin\": ").nth(1))
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((origin - 2.0_f64.sqrt()).abs() < 1e-12, "origin {origin}");
}

#[test]
fn audit_round_trips_spectrum_json_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let spectrum_path = dir.path().join("spectrum.json");
    let out = radialwell(&[
        "spectrum",
        "--l",
        "0",
        "-n",
        "3",
        "--format",
        "json",
        "-o",
        spectrum_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let spectrum_text = std::fs::read_to_string(&spectrum_path).unwrap();
    let written_ks: Vec<&str> = spectrum_text
        .lines()
        .filter_map(|l| l.split("\"k\": ").nth(1))
        .map(|rest| rest.split(',').next().unwrap())
        .collect();
    assert_eq!(written_ks.len(), 3);

    let out = radialwell(&[
        "audit",
        "--spectrum",
        spectrum_path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(exit_code(&out), 0);
    let audited = stdout(&out);
    let audited_ks: Vec<&str> = audited
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(written_ks, audited_ks);
}

#[test]
fn wavefn_grids_behave_at_both_ends() {
    let out = radialwell(&["wavefn", "--l", "0", "-n", "1", "--points", "5"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    let fields: Vec<f64> = last.split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields[0], 1.0);
    assert!(fields[1].abs() < 1e-14, "chi at the wall {}", fields[1]);

    let out = radialwell(&[
        "wavefn",
        "--l",
        "0",
        "--family",
        "huang-thomann",
        "-n",
        "2",
        "--points",
        "1001",
    ]);
    let text = stdout(&out);
    let first: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    assert!(
        (first[1] - 2.0_f64.sqrt()).abs() < 1e-4,
        "chi near the origin {}",
        first[1]
    );
}

#[test]
fn first_p_wave_state_has_no_interior_sign_changes() {
    let out = radialwell(&["wavefn", "--l", "1", "-n", "1", "--points", "1001"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let chis: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let peak = chis.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let mut flips = 0;
    let mut last_sign = 0.0;
    for chi in &chis[..chis.len() - 1] {
        if chi.abs() <= 1e-12 * peak {
            continue;
        }
        let sign = chi.signum();
        if last_sign != 0.0 && sign != last_sign {
            flips += 1;
        }
        last_sign = sign;
    }
    assert_eq!(flips, 0);
}

#[test]
fn deltatest_exit_codes_follow_the_weight() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("delta.json");

    let out = radialwell(&[
        "deltatest",
        "-A",
        "1",
        "-B",
        "0",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let est: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(est["extrapolated_weight"].as_f64().unwrap().abs() < 1e-8);

    let out = radialwell(&["deltatest", "-A", "0", "-B", "1", "--k", "1"]);
    assert_eq!(exit_code(&out), 5);
    let est: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let weight = est["extrapolated_weight"].as_f64().unwrap();
    assert!((weight + 3.5449).abs() < 1e-3, "weight {weight}");

    let out = radialwell(&["deltatest", "-A", "1", "-B", "1e-6", "--k", "1"]);
    assert_eq!(exit_code(&out), 0);
    let est: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let weight = est["extrapolated_weight"].as_f64().unwrap();
    assert!((weight + 3.5449e-6).abs() < 1e-9, "weight {weight}");

    let out = radialwell(&["deltatest", "--l", "1"]);
    assert_eq!(exit_code(&out), 3);
    assert!(stderr(&out).contains("square-integrable"));
}

#[test]
fn tolerance_precedence_is_flag_over_env_over_default() {
    let loose = Command::new(env!("CARGO_BIN_EXE_radialwell"))
        .args(["deltatest", "-A", "0", "-B", "1", "--k", "1"])
        .env("RADIALWELL_TOL", "10")
        .output()
        .unwrap();
    assert_eq!(loose.status.code().unwrap(), 0);

    let flag_wins = Command::new(env!("CARGO_BIN_EXE_radialwell"))
        .args([
            "deltatest",
            "-A",
            "0",
            "-B",
            "1",
            "--k",
            "1",
            "--tol",
            "1e-6",
        ])
        .env("RADIALWELL_TOL", "10")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code().unwrap(), 5);

    let junk = Command::new(env!("CARGO_BIN_EXE_radialwell"))
        .args(["deltatest", "-A", "0", "-B", "1", "--k", "1"])
        .env("RADIALWELL_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(junk.status.code().unwrap(), 2);
}
