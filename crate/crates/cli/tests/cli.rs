use std::process::Command;

use qclone_cli::machines::{evaluate, MachineId, Params};
use qclone_cli::sweep::{run_sweep, SweepConfig};
use qclone_cli::tables::{run_table, TableName};
use qclone_cli::verify::{run_verify, run_verify_with};
use qclone_core::cloner::{build_machine, pauli_line_fidelities, CloningIsometry, MachineSpec};
use qclone_core::hybrid::{pair_fidelities, HybridKind};
use qclone_core::matrix::ComplexMatrix;
use qclone_core::Result;

fn qclone(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qclone")).args(args).output().unwrap()
}

fn row(table: &str, prefix: &str) -> String {
    table.lines().find(|l| l.starts_with(prefix)).unwrap().to_string()
}

#[test]
fn table_examples() {
    assert_eq!(
        row(&run_table(TableName::Pauli).unwrap(), "0.50,"),
        "0.50,0.83,0.83,0.00"
    );
    assert_eq!(
        row(&run_table(TableName::BhAnti).unwrap(), "0.00,"),
        "0.00,0.67,0.33,0.34"
    );
    let statedep = run_table(TableName::Statedep).unwrap();
    let r = row(&statedep, "0.30,");
    let cells: Vec<&str> = r.split(',').collect();
    assert_eq!((cells[5], cells[6]), ("0.22", "0.84"));
}

#[test]
fn table_schemas() {
    let headers = [
        (TableName::Pauli, "p,F1,F2,diff", 11),
        (
            TableName::Statedep,
            "alpha2,lambda_low,lambda_high,xi_low,xi_high,D_min,F,flag",
            5,
        ),
        (TableName::BhPauli, "p,lambda,F1,F2,diff", 121),
        (TableName::BhAnti, "lambda,Fa,Fb,diff", 11),
    ];
    for (name, header, n) in headers {
        let t = run_table(name).unwrap();
        let mut lines = t.lines();
        assert_eq!(lines.next().unwrap(), header);
        let columns = header.split(',').count();
        let body: Vec<&str> = lines.collect();
        assert_eq!(body.len(), n);
        assert!(body.iter().all(|l| l.split(',').count() == columns));
        assert!(!t.contains('\r'));
        assert_eq!(t, run_table(name).unwrap());
    }
}

#[test]
fn statedep_flags_clamped_rows_only() {
    let t = run_table(TableName::Statedep).unwrap();
    let flagged: Vec<&str> = t.lines().filter(|l| l.ends_with("paper-discrepancy")).collect();
    assert_eq!(flagged.len(), 2);
    assert!(flagged[0].starts_with("0.40,") && flagged[1].starts_with("0.50,"));
}

#[test]
fn default_verify_passes() {
    let report = run_verify(1e-10, 42);
    assert!(report.passed(), "{report}");
    assert_eq!(report.exit_code(), 0);
    assert_eq!(report.groups.len(), 8);
}

fn perturbed(spec: &MachineSpec) -> Result<CloningIsometry> {
    let v = build_machine(spec)?;
    if !matches!(spec, MachineSpec::BhType { .. }) {
        return Ok(v);
    }
    let mut m: ComplexMatrix = v.matrix().clone();
    let z = m.get(0, 0);
    m.set(0, 0, z + 1e-3);
    CloningIsometry::new_unchecked(m, v.machine_dim())
}

#[test]
fn perturbed_builder_fails_isometry_first() {
    let report = run_verify_with(1e-10, 42, &perturbed);
    assert_eq!(report.exit_code(), 1);
    let first = report.first_failure().unwrap();
    assert_eq!(first.name, "isometry");
    assert!(first.failure.as_ref().unwrap().contains("bh("));
}

#[test]
fn impossible_tolerance_fails() {
    assert_eq!(run_verify(1e-30, 42).exit_code(), 1);
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    assert_eq!(run_verify(1e-10, 7), run_verify(1e-10, 7));
}

fn config(text: &str) -> SweepConfig {
    SweepConfig::parse(text).unwrap()
}

#[test]
fn sweep_bh_anti_matches_closed_form() {
    let c = config("machine=bh-anti\nsweep=lambda\nstart=0\nstop=1\nstep=0.1\noutputs=F_a,F_b\n");
    let csv = run_sweep(&c);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "lambda,F_a,F_b,flag");
    assert_eq!(lines.len(), 12);
    for (i, l) in lines[1..].iter().enumerate() {
        let (fa, fb) = pair_fidelities(HybridKind::BhAnti, i as f64 / 10.0, None, None).unwrap();
        assert_eq!(*l, format!("{:.6},{fa:.6},{fb:.6},", i as f64 / 10.0));
    }
}

#[test]
fn sweep_pauli_reproduces_table_columns() {
    let csv = run_sweep(&config(
        "machine=pauli\nsweep=p\nstart=0\nstop=1\nstep=0.1\noutputs=F_a,F_b",
    ));
    for (i, l) in csv.lines().skip(1).enumerate() {
        let (f1, f2) = pauli_line_fidelities(i as f64 / 10.0);
        let cells: Vec<f64> = l.split(',').take(3).map(|c| c.parse().unwrap()).collect();
        assert!((cells[1] - f1).abs() < 1e-6 && (cells[2] - f2).abs() < 1e-6);
    }
}

#[test]
fn sweep_wz_distortion() {
    let csv = run_sweep(&config(
        "# wz\nmachine=wz\nsweep=alpha2\nstart=0\nstop=1\nstep=0.5\noutputs=D_a\n",
    ));
    assert_eq!(
        csv,
        "alpha2,D_a,flag\n0.000000,0.000000,\n0.500000,0.500000,\n1.000000,0.000000,\n"
    );
}

#[test]
fn sweep_marks_infeasible_rows() {
    let csv = run_sweep(&config(
        "machine=bh\nsweep=eta\nstart=0.5\nstop=0.7\nstep=0.1\nxi=0.1\noutputs=F_a,D_ab",
    ));
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[1].ends_with(','));
    assert_eq!(lines[2], "0.600000,nan,nan,infeasible");
}

#[test]
fn malformed_configs_are_rejected() {
    let bad = [
        "machine=nope\nsweep=p\nstart=0\nstop=1\nstep=0.1\noutputs=F_a",
        "machine=pauli\nsweep=p\nstart=0\nstop=1\nstep=0\noutputs=F_a",
        "machine=pauli\nsweep=p\nstart=1\nstop=0\nstep=0.1\noutputs=F_a",
        "machine=pauli\nsweep=p\nstart=0\nstop=1\nstep=0.1\np=0.2\noutputs=F_a",
        "machine=pauli\nsweep=p\nstart=0\nstop=1\nstep=0.1\noutputs=G",
        "machine=pauli\nsweep=lambda\nstart=0\nstop=1\nstep=0.1\noutputs=F_a",
        "machine=bh-anti\nsweep=alpha2\nstart=0\nstop=1\nstep=0.1\noutputs=F_a",
        "machine=pauli\nsweep=p\nstart=zero\nstop=1\nstep=0.1\noutputs=F_a",
        "machine=pauli\nsweep p\n",
    ];
    for text in bad {
        let e = SweepConfig::parse(text).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{text}");
    }
}

#[test]
fn evaluate_defaults() {
    let mut p = Params::new();
    p.insert("alpha2".into(), 0.3);
    let e = evaluate(MachineId::Bh, &p).unwrap();
    assert!((e.f_a - 5.0 / 6.0).abs() < 1e-12);
    assert!((e.d_ab - 2.0 / 9.0).abs() < 1e-12);
}

#[test]
fn binary_exit_codes() {
    let out = qclone(&["table", "pauli"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        run_table(TableName::Pauli).unwrap()
    );
    assert_eq!(qclone(&["table", "nope"]).status.code(), Some(2));
    assert_eq!(qclone(&["verify", "--tol", "1e-30"]).status.code(), Some(1));
    assert_eq!(
        qclone(&["fidelity", "--machine", "bh-anti", "--alpha2", "0.3"])
            .status
            .code(),
        Some(2)
    );
    let out = qclone(&["fidelity", "--machine", "anti", "--alpha2", "0.3"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("F_a=0.666667\n"));
}

#[test]
fn binary_sweep_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    let out = dir.path().join("s.csv");
    std::fs::write(
        &cfg,
        "machine=wz\nsweep=alpha2\nstart=0\nstop=1\nstep=0.5\noutputs=D_a\n",
    )
    .unwrap();
    let status = qclone(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
    .status;
    assert!(status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 4);
    std::fs::write(&cfg, "machine=wz\n").unwrap();
    let status = qclone(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
    .status;
    assert_eq!(status.code(), Some(2));
}
