//! CSV renderings of the printed comparison tables.

use std::fmt::Write;

use qclone_core::analysis::{optimal_xi, xi_interval};
use qclone_core::cloner::pauli_line_fidelities;
use qclone_core::hybrid::{pair_fidelities, HybridKind};
use qclone_core::Result;

use crate::round2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TableName {
    Pauli,
    Statedep,
    BhPauli,
    BhAnti,
}

pub const DISCREPANCY_FLAG: &str = "paper-discrepancy";

const STATEDEP_ROWS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];

fn tenths() -> impl Iterator<Item = f64> {
    (0..=10).map(|i| i as f64 / 10.0)
}

/// Two-decimal cell; the difference column is taken between rounded values.
fn cells(f1: f64, f2: f64) -> String {
    let (r1, r2) = (round2(f1), round2(f2));
    format!("{r1:.2},{r2:.2},{:.2}", round2((r1 - r2).abs()))
}

pub fn run_table(name: TableName) -> Result<String> {
    let mut out = String::new();
    match name {
        TableName::Pauli => {
            out.push_str("p,F1,F2,diff\n");
            for p in tenths() {
                let (f1, f2) = pauli_line_fidelities(p);
                writeln!(out, "{p:.2},{}", cells(f1, f2)).unwrap();
            }
        }
        TableName::Statedep => {
            out.push_str("alpha2,lambda_low,lambda_high,xi_low,xi_high,D_min,F,flag\n");
            for alpha_sq in STATEDEP_ROWS {
                let r = optimal_xi(alpha_sq, 1.0)?;
                let i = xi_interval(alpha_sq)?;
                let flag = if i.clamped { DISCREPANCY_FLAG } else { "" };
                writeln!(
                    out,
                    "{alpha_sq:.2},{:.3},{:.3},{:.4},{:.4},{:.2},{:.2},{flag}",
                    i.lambda_low,
                    i.lambda_high,
                    i.xi_low,
                    i.xi_high,
                    round2(r.d_min),
                    round2(r.fidelity)
                )
                .unwrap();
            }
        }
        TableName::BhPauli => {
            out.push_str("p,lambda,F1,F2,diff\n");
            for p in tenths() {
                for lambda in tenths() {
                    let (f1, f2) = pair_fidelities(HybridKind::BhPauli, lambda, Some(p), None)?;
                    writeln!(out, "{p:.2},{lambda:.2},{}", cells(f1, f2)).unwrap();
                }
            }
        }
        TableName::BhAnti => {
            out.push_str("lambda,Fa,Fb,diff\n");
            for lambda in tenths() {
                let (fa, fb) = pair_fidelities(HybridKind::BhAnti, lambda, None, None)?;
                writeln!(out, "{lambda:.2},{}", cells(fa, fb)).unwrap();
            }
        }
    }
    Ok(out)
}
