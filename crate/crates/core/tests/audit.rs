use std::process::Command;

use repro_interval::audit::{emit_report, parse_report, run_audit, InputData, Kernel, ReportFormat, TrialConfig};
use repro_interval::interval::EndpointInterval;
use repro_interval::io::format_hex;

fn audit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_audit"))
}

#[test]
fn naive_triple_spreads_over_zero_and_one() {
    let p = 2f64.powi(100);
    let mut cfg = TrialConfig::new(Kernel::SumNaive, 3);
    cfg.input = InputData::Values(vec![1.0, p, -p]);
    cfg.trials = 6;
    let r = run_audit(&cfg).unwrap();
    assert!(!r.bitwise_reproducible);
    let mut heads: Vec<f64> = r.records.iter().map(|t| t.head).collect();
    heads.sort_by(f64::total_cmp);
    heads.dedup();
    assert_eq!(heads, vec![0.0, 1.0]);
}

#[test]
fn interval_associations_both_enclose() {
    let e = |k| 2f64.powi(k);
    let iv = |a, b| EndpointInterval::new(a, b).unwrap();
    let mut cfg = TrialConfig::new(Kernel::SumIntervals, 3);
    cfg.input = InputData::Intervals(vec![iv(-e(-53), e(-52)), iv(-1.0, e(-52)), iv(1.0, 2.0)]);
    cfg.trials = 6;
    let r = run_audit(&cfg).unwrap();
    assert_eq!(r.inclusion_held, Some(true));
    assert!(r.width_min.unwrap() < r.width_max.unwrap());
    assert!(r.contract_held());
}

#[test]
fn reports_round_trip_through_both_formats() {
    let mut cfg = TrialConfig::new(Kernel::Imm3, 4);
    cfg.trials = 3;
    let r = run_audit(&cfg).unwrap();
    for fmt in [ReportFormat::Json, ReportFormat::Csv] {
        assert_eq!(parse_report(&emit_report(&r, fmt).unwrap(), fmt).unwrap(), r);
    }
}

#[test]
fn cli_reads_input_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("triple.txt");
    let p = 2f64.powi(100);
    std::fs::write(&path, format!("# the classic triple\n{}\n{}\n{}\n", format_hex(1.0), format_hex(p), format_hex(-p))).unwrap();
    let out = audit()
        .args(["sum", "--method", "naive", "--trials", "6", "--input", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = parse_report(&String::from_utf8(out.stdout).unwrap(), ReportFormat::Json).unwrap();
    assert_eq!(report.n, 3);
    assert!(!report.bitwise_reproducible);
}

#[test]
fn cli_exit_codes() {
    let code = |args: &[&str]| audit().args(args).output().unwrap().status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["probe"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["sum", "--input", "/nonexistent/values.txt"]), Some(1));
    assert_eq!(code(&["sum", "--method", "prerounded", "--n", "200", "--trials", "4", "--fault", "jitter"]), Some(2));
    assert_eq!(code(&["sum", "--method", "naive", "--n", "200", "--trials", "4", "--fault", "jitter"]), Some(0));
    assert_eq!(code(&["linsolve", "--n", "5", "--trials", "3", "--fault", "displace"]), Some(2));
}

#[test]
fn cli_backend_selection() {
    let run = |backend: &str| {
        audit()
            .env("AUDIT_BACKEND", backend)
            .args(["sum", "--method", "interval", "--n", "100", "--trials", "3"])
            .output()
            .unwrap()
    };
    let eft = run("eft");
    assert_eq!(eft.status.code(), Some(0));
    let fenv = run("fenv");
    if fenv.status.code() == Some(0) {
        assert_eq!(eft.stdout, fenv.stdout);
    }
    assert_eq!(run("x87").status.code(), Some(1));
}
