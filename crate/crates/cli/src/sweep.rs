//! Parameter sweeps driven by a flat `key=value` config file.
//!
//! ```text
//! # bh-anti fidelities against the weight
//! machine=bh-anti
//! sweep=lambda
//! start=0
//! stop=1
//! step=0.1
//! outputs=F_a,F_b
//! alpha2=0.3
//! ```
//!
//! Every other key is a fixed machine parameter.

use std::fmt::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::machines::{evaluate, MachineId, Params, OUTPUTS};
use crate::CliError;

const RESERVED: [&str; 6] = ["machine", "sweep", "start", "stop", "step", "outputs"];
const INPUT_PARAMS: [&str; 2] = ["alpha2", "phase"];
pub const INFEASIBLE_FLAG: &str = "infeasible";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub machine: MachineId,
    pub fixed_params: Params,
    pub sweep_param: String,
    pub grid: (f64, f64, f64),
    pub outputs: Vec<String>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw = std::collections::BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {}: expected key=value", n + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if raw.insert(k.clone(), v).is_some() {
                return Err(config_err(format!("line {}: duplicate key '{k}'", n + 1)));
            }
        }
        let take = |k: &str| raw.get(k).ok_or_else(|| config_err(format!("missing key '{k}'")));
        let number = |k: &str| -> Result<f64, CliError> {
            let v = take(k)?;
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| config_err(format!("'{k}' is not a finite number: '{v}'")))
        };

        let machine: MachineId = take("machine")?.parse()?;
        let sweep_param = take("sweep")?.clone();
        let grid = (number("start")?, number("stop")?, number("step")?);
        let outputs: Vec<String> = take("outputs")?
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();

        let mut fixed_params = Params::new();
        for k in raw.keys().filter(|k| !RESERVED.contains(&k.as_str())) {
            fixed_params.insert(k.clone(), number(k)?);
        }
        let config = SweepConfig {
            machine,
            fixed_params,
            sweep_param,
            grid,
            outputs,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let (start, stop, step) = self.grid;
        if step <= 0.0 {
            return Err(config_err("step must be positive"));
        }
        if start > stop {
            return Err(config_err("start must not exceed stop"));
        }
        if self.fixed_params.contains_key(&self.sweep_param) {
            return Err(config_err(format!("'{}' is both swept and fixed", self.sweep_param)));
        }
        let known = |k: &str| INPUT_PARAMS.contains(&k) || self.machine.params().contains(&k);
        if !known(&self.sweep_param) {
            return Err(config_err(format!(
                "machine {} has no parameter '{}'",
                self.machine.name(),
                self.sweep_param
            )));
        }
        if let Some(k) = self.fixed_params.keys().find(|k| !known(k)) {
            return Err(config_err(format!(
                "machine {} has no parameter '{k}'",
                self.machine.name()
            )));
        }
        for k in self.machine.required() {
            if *k != self.sweep_param && !self.fixed_params.contains_key(*k) {
                return Err(config_err(format!("machine {} needs '{k}'", self.machine.name())));
            }
        }
        if self.outputs.is_empty() {
            return Err(config_err("no outputs requested"));
        }
        if let Some(o) = self.outputs.iter().find(|o| !OUTPUTS.contains(&o.as_str())) {
            return Err(config_err(format!(
                "unknown output '{o}' (expected one of {})",
                OUTPUTS.join(",")
            )));
        }
        Ok(())
    }

    /// `start + i·step` up to `stop`, with a small allowance for rounding in
    /// the point count.
    pub fn grid_points(&self) -> Vec<f64> {
        let (start, stop, step) = self.grid;
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| start + i as f64 * step).collect()
    }
}

/// CSV with one row per grid point, in grid order.
pub fn run_sweep(config: &SweepConfig) -> String {
    let rows: Vec<String> = config
        .grid_points()
        .par_iter()
        .map(|&x| {
            let mut params = config.fixed_params.clone();
            params.insert(config.sweep_param.clone(), x);
            let mut row = format!("{x:.6}");
            match evaluate(config.machine, &params) {
                Ok(e) => {
                    for o in &config.outputs {
                        write!(row, ",{:.6}", e.get(o).unwrap()).unwrap();
                    }
                    row.push(',');
                }
                Err(_) => {
                    for _ in &config.outputs {
                        row.push_str(",nan");
                    }
                    write!(row, ",{INFEASIBLE_FLAG}").unwrap();
                }
            }
            row
        })
        .collect();
    let mut out = format!("{},{},flag\n", config.sweep_param, config.outputs.join(","));
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

pub fn run_sweep_file(config_path: &Path, out_path: &Path) -> Result<usize, CliError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", config_path.display())))?;
    let config = SweepConfig::parse(&text)?;
    let csv = run_sweep(&config);
    std::fs::write(out_path, &csv)?;
    Ok(csv.lines().count() - 1)
}
