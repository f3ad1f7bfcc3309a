//! End-to-end checks on the installed binary: exit codes, CSV layout, and
//! reproducibility, driven through std::process.

use std::path::Path;
use std::process::{Command, Output};

use hubbard_ucc::cli::{ANGLES_HEADER, ENERGY_HEADER, VQE_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hubbard-ucc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary spawns")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

/// One CSV cell in the fixed scientific format: sign, one leading digit,
/// seventeen fractional digits, a signed exponent of at least two digits.
fn is_e17(cell: &str) -> bool {
    let b = cell.strip_prefix('-').unwrap_or(cell).as_bytes();
    b.len() >= 23
        && b[0].is_ascii_digit()
        && b[1] == b'.'
        && b[2..19].iter().all(u8::is_ascii_digit)
        && b[19] == b'e'
        && (b[20] == b'+' || b[20] == b'-')
        && b[21..].len() >= 2
        && b[21..].iter().all(u8::is_ascii_digit)
}

fn read_rows(path: &Path, header: &str) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).expect("output file exists");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header), "header line");
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    assert!(text.ends_with('\n'), "file ends with a newline");
    assert!(!text.contains('\r'), "line endings are LF only");
    rows
}

#[test]
fn fast_verification_exits_clean() {
    let out = run(&["verify", "--level", "fast"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("9/9 checks passed"), "got:\n{text}");
    assert!(!text.contains("FAIL"), "got:\n{text}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--level", "thorough"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["sweep-angles"]).status.code(), Some(2), "--out is required");
}

#[test]
fn a_reversed_grid_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("angles.csv");
    let out = run(&[
        "sweep-angles",
        "--u-min",
        "4",
        "--u-max",
        "1",
        "--steps",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error"), "got: {}", stderr(&out));
    assert!(!out_path.exists(), "no partial file on a rejected config");
}

#[test]
fn an_unwritable_output_path_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("missing").join("angles.csv");
    let out = run(&[
        "sweep-angles",
        "--steps",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn angle_sweep_writes_formatted_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("angles.csv");
    let out = run(&[
        "sweep-angles",
        "--u-min",
        "1",
        "--u-max",
        "4",
        "--steps",
        "4",
        "--scale",
        "linear",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("wrote 4 rows, skipped 0"));

    let rows = read_rows(&out_path, ANGLES_HEADER);
    assert_eq!(rows.len(), 4);
    for (row, expected_u) in rows.iter().zip([1.0, 2.0, 3.0, 4.0]) {
        assert_eq!(row.len(), 5);
        for cell in row {
            assert!(is_e17(cell), "cell {cell:?} breaks the format");
        }
        assert_eq!(row[0].parse::<f64>().unwrap(), expected_u);
    }
}

#[test]
fn energy_sweep_covers_a_log_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("energies.csv");
    let out = run(&[
        "sweep-energy",
        "--u-min",
        "0.01",
        "--u-max",
        "100",
        "--steps",
        "5",
        "--scale",
        "log",
        "--mode",
        "doubles",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let rows = read_rows(&out_path, ENERGY_HEADER);
    assert_eq!(rows.len(), 5);
    let us: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(us[0], 0.01, "grid endpoints are exact");
    assert_eq!(us[4], 100.0, "grid endpoints are exact");
    for w in us.windows(2) {
        assert!((w[1] / w[0] - 10.0).abs() < 1e-12, "uneven log spacing: {us:?}");
    }
    for row in &rows {
        assert_eq!(row.len(), 5);
        let e_ed: f64 = row[2].parse().unwrap();
        let e_prepared: f64 = row[3].parse().unwrap();
        let fidelity: f64 = row[4].parse().unwrap();
        assert!(e_prepared >= e_ed - 1e-12, "variational bound broken");
        assert!(fidelity < 1.0, "truncated sequence cannot be exact");
        assert!(fidelity > 0.99, "fidelity collapsed: {fidelity}");
    }
}

#[test]
fn optimization_runs_reproduce_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for path in [&first, &second] {
        let out = run(&[
            "vqe",
            "--u",
            "4",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(stdout(&out).contains("best energy"));
    }
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert_eq!(a, b, "same seed, same bytes");

    let rows = read_rows(&first, VQE_HEADER);
    assert!(!rows.is_empty());
    let mut previous_best = f64::INFINITY;
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 3);
        assert_eq!(row[0], (i + 1).to_string(), "evaluations count from one");
        let best: f64 = row[2].parse().unwrap();
        assert!(best <= previous_best, "running best must not rise");
        previous_best = best;
    }
}

#[test]
fn help_prints_and_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["sweep-angles", "sweep-energy", "verify", "vqe"] {
        assert!(text.contains(name), "help omits {name}");
    }
}
