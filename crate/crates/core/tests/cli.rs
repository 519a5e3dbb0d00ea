use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ibm-qds"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn be2_table() {
    let text = stdout(&["be2", "--N", "10", "--alpha", "0,0.75"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "N,alpha,be2_exact,be2_rpa,be2_harmonic,epsilon_rpa,omega_harmonic"
    );
    assert_eq!(lines[1], "10,0,100,100,,1,");
    let cells: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(cells.len(), 7);
    assert!(cells[3].is_empty() && cells[5].is_empty());
    assert!(!cells[4].is_empty() && !cells[6].is_empty());
}

#[test]
fn row_count_matches_grid() {
    let text = stdout(&["be2", "--N", "4,6", "--steps", "11"]);
    assert_eq!(text.lines().count(), 1 + 2 * 11);
    let alphas: Vec<&str> = text
        .lines()
        .skip(1)
        .take(11)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(alphas.first(), Some(&"0"));
    assert_eq!(alphas.last(), Some(&"1"));
}

#[test]
fn output_independent_of_thread_count() {
    let args = [
        "spectrum", "--N", "10,20,40", "--steps", "41", "--vmax", "3",
    ];
    let one = stdout(&[&args[..], &["--threads", "1"]].concat());
    let four = stdout(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
    let json1 = stdout(&[&args[..], &["--threads", "1", "--format", "json"]].concat());
    let json4 = stdout(&[&args[..], &["--threads", "4", "--format", "json"]].concat());
    assert_eq!(json1, json4);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let cfg = dir.join("sweep.cfg");
    std::fs::write(
        &cfg,
        "# small sweep\nN = 6\nalpha = 0.25, 0.5\nformat = csv\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&["be2", "--config", cfg]);
    assert_eq!(from_file.lines().count(), 3);
    assert!(from_file.lines().skip(1).all(|l| l.starts_with("6,")));
    let overridden = stdout(&["be2", "--config", cfg, "--N", "8"]);
    assert!(overridden.lines().skip(1).all(|l| l.starts_with("8,")));
}

#[test]
fn out_flag_writes_file() {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("potential.csv");
    let _ = std::fs::remove_file(&path);
    let out = run(&[
        "potential",
        "--N",
        "10",
        "--alpha",
        "1",
        "--steps",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("alpha,beta,potential"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["be2", "--steps", "1"],
        vec!["be2", "--alpha", "1.5"],
        vec!["be2", "--format", "xml"],
        vec!["be2", "--bogus"],
        vec!["nonsense"],
        vec!["oracle-check", "--N", "12"],
        vec!["be2", "--config", "/nonexistent/file.cfg"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn wavefunction_normalized_and_gaussian_domain() {
    let text = stdout(&["wavefunction", "--N", "60", "--alpha", "1"]);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    let norm: f64 = rows.iter().map(|r| r[1] * r[1]).sum();
    assert!((norm - 1.0).abs() < 1e-10);
    let peak = rows
        .iter()
        .max_by(|a, b| a[1].abs().total_cmp(&b[1].abs()))
        .unwrap()[0];
    assert!((28.0..=32.0).contains(&peak));

    let below = stdout(&["wavefunction", "--N", "20", "--alpha", "0.3"]);
    assert!(below.lines().skip(1).all(|l| l.ends_with(',')));
}

#[test]
fn oracle_check_passes() {
    let text = stdout(&["oracle-check", "--N", "1,2,3,4"]);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn classify_tables() {
    let widths = stdout(&["classify", "--N", "20"]);
    assert_eq!(
        widths.lines().next(),
        Some("N,alpha_lo,alpha_hi,width,tolerance")
    );
    assert_eq!(widths.lines().count(), 2);
    let verdicts = stdout(&["classify", "--N", "20", "--verdicts"]);
    assert_eq!(verdicts.lines().count(), 1 + 101);
    assert!(verdicts
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("20,0,U5-phase,"));
    assert!(verdicts
        .lines()
        .last()
        .unwrap()
        .starts_with("20,1,O6-phase,"));
}

#[test]
fn json_matches_schema() {
    let validator = schema();
    for args in [
        vec!["spectrum", "--N", "4,10", "--alpha", "0,0.5,0.9"],
        vec!["be2", "--N", "10", "--alpha", "0.2,0.8"],
        vec!["wavefunction", "--N", "20", "--alpha", "0.3"],
        vec!["wavefunction", "--N", "20", "--alpha", "0.9", "--k", "1"],
        vec!["potential", "--N", "10", "--steps", "4"],
        vec!["classify", "--N", "10"],
        vec!["oracle-check", "--N", "2"],
    ] {
        let text = stdout(&[&args[..], &["--format", "json"]].concat());
        let doc: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["command"], args[0]);
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    // a malformed document is rejected
    let bad: Value = serde_json::json!({"command": "be2", "rows": [{"N": 10}]});
    assert!(!validator.is_valid(&bad));
}
