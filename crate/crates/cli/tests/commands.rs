use std::fs;
use std::process::{Command, Output};

use hodirac::grid::{make_grid, SampledFunction};
use hodirac_cli::io::{read_function_csv, write_function_csv};

fn hodirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodirac"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn kernel_dump_has_one_row_per_pair() {
    let out = hodirac(&[
        "kernel",
        "--variant",
        "mehler",
        "--a",
        "1",
        "--t",
        "0.5",
        "--grid=-5,5,256",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,xp,value"));
    assert_eq!(lines.count(), 256 * 256);
}

#[test]
fn heat_dirac_shifts_input_data() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let output = dir.path().join("out.csv");
    let g = make_grid(-20.0, 20.0, 512).unwrap();
    let f = SampledFunction::from_real_fn(g, |x| (-x * x).exp()).unwrap();
    write_function_csv(&f, fs::File::create(&input).unwrap()).unwrap();
    let out = hodirac(&[
        "heat-dirac",
        "--t",
        "1.5",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let u = read_function_csv(&output).unwrap();
    // e^{t d/dX} u0 (X) = u0(X + t)
    let want = SampledFunction::from_real_fn(g, |x| (-(x + 1.5) * (x + 1.5)).exp()).unwrap();
    assert!(u.sub(&want).unwrap().sup_norm() <= 1e-10);
}

#[test]
fn exit_codes() {
    assert_eq!(hodirac(&["--help"]).status.code(), Some(0));
    assert_eq!(hodirac(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        hodirac(&["heat-ho", "--a", "-1", "--t", "1"]).status.code(),
        Some(1)
    );
    // the window at t = 1 needs spectrum the grid does not resolve
    assert_eq!(
        hodirac(&["wave-ho", "--t", "1", "--grid=-12,12,256"])
            .status
            .code(),
        Some(1)
    );
    let missing = hodirac(&["heat-ho", "--t", "1", "--input", "/nonexistent/data.csv"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn verify_writes_a_passing_report() {
    let out = hodirac(&["verify", "--suite", "special"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(hodirac::report::REPORT_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| !r.contains(",fail,")));
}

#[test]
fn verify_reports_the_literal_kernel() {
    let out = hodirac(&["verify", "--suite", "kernels"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.lines()
            .any(|l| l.contains("literal") && l.contains(",informational,")),
        "{text}"
    );
}
