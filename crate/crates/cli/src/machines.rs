//! Machine identifiers and parameter maps shared by `sweep` and `fidelity`.

use std::collections::BTreeMap;
use std::str::FromStr;

use qclone_core::analysis::phasecov_hybrid_xi;
use qclone_core::cloner::{apply, build_machine, marginals, CloningIsometry, MachineSpec};
use qclone_core::hybrid::{combine, eta_pair, HybridFamily};
use qclone_core::state::{density_of, fidelity, hs_distance, product_density, PureQubit};
use qclone_core::Result;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MachineId {
    Wz,
    Bh,
    Pc,
    Pauli,
    Anti,
    BhPc,
    BhPauli,
    BhAnti,
    BhPair,
}

impl MachineId {
    pub const ALL: [MachineId; 9] = [
        MachineId::Wz,
        MachineId::Bh,
        MachineId::Pc,
        MachineId::Pauli,
        MachineId::Anti,
        MachineId::BhPc,
        MachineId::BhPauli,
        MachineId::BhAnti,
        MachineId::BhPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MachineId::Wz => "wz",
            MachineId::Bh => "bh",
            MachineId::Pc => "pc",
            MachineId::Pauli => "pauli",
            MachineId::Anti => "anti",
            MachineId::BhPc => "bh-pc",
            MachineId::BhPauli => "bh-pauli",
            MachineId::BhAnti => "bh-anti",
            MachineId::BhPair => "bh-pair",
        }
    }

    /// Parameters the machine reads besides `alpha2` and `phase`.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            MachineId::Wz | MachineId::Pc | MachineId::Anti => &[],
            MachineId::Bh => &["xi", "eta"],
            MachineId::Pauli => &["p", "q"],
            MachineId::BhPc => &["lambda", "xi"],
            MachineId::BhPauli => &["lambda", "p"],
            MachineId::BhAnti => &["lambda"],
            MachineId::BhPair => &["lambda", "xi", "xi_prime", "eta", "eta_prime"],
        }
    }

    /// Parameters without a default.
    pub fn required(self) -> &'static [&'static str] {
        match self {
            MachineId::Pauli => &["p"],
            MachineId::BhPc | MachineId::BhAnti => &["lambda"],
            MachineId::BhPauli => &["lambda", "p"],
            MachineId::BhPair => &["lambda", "xi", "xi_prime"],
            _ => &[],
        }
    }
}

impl FromStr for MachineId {
    type Err = CliError;

    fn from_str(s: &str) -> std::result::Result<Self, CliError> {
        MachineId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown machine '{s}'")))
    }
}

pub type Params = BTreeMap<String, f64>;

/// Output columns a sweep can request.
pub const OUTPUTS: [&str; 5] = ["F_a", "F_b", "D_a", "D_b", "D_ab"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub f_a: f64,
    pub f_b: f64,
    pub d_a: f64,
    pub d_b: f64,
    pub d_ab: f64,
}

impl Evaluation {
    pub fn get(&self, column: &str) -> Option<f64> {
        match column {
            "F_a" => Some(self.f_a),
            "F_b" => Some(self.f_b),
            "D_a" => Some(self.d_a),
            "D_b" => Some(self.d_b),
            "D_ab" => Some(self.d_ab),
            _ => None,
        }
    }
}

fn param(params: &Params, key: &str) -> f64 {
    params[key]
}

/// Builds the isometry for `id`; missing required keys are a caller bug
/// (checked when the config is validated).
pub fn build(id: MachineId, params: &Params) -> Result<CloningIsometry> {
    let get = |k: &str, default: f64| params.get(k).copied().unwrap_or(default);
    let alpha_sq = get("alpha2", 0.5);
    match id {
        MachineId::Wz => build_machine(&MachineSpec::WoottersZurek),
        MachineId::Bh => build_machine(&MachineSpec::bh(get("xi", 1.0 / 6.0), get("eta", 2.0 / 3.0))?),
        MachineId::Pc => build_machine(&MachineSpec::PhaseCovariant),
        MachineId::Pauli => {
            let p = param(params, "p");
            build_machine(&MachineSpec::pauli(p, get("q", 1.0 - p))?)
        }
        MachineId::Anti => build_machine(&MachineSpec::AntiClone),
        MachineId::BhPc => {
            let xi = get("xi", phasecov_hybrid_xi(alpha_sq));
            combine(&HybridFamily::BhPhaseCov { xi }.hybrid_spec(param(params, "lambda"))?)
        }
        MachineId::BhPauli => {
            let p = param(params, "p");
            combine(&HybridFamily::BhPauli { p }.hybrid_spec(param(params, "lambda"))?)
        }
        MachineId::BhAnti => combine(&HybridFamily::BhAnti.hybrid_spec(param(params, "lambda"))?),
        MachineId::BhPair => {
            let (lambda, xi, xi_prime) = (param(params, "lambda"), param(params, "xi"), param(params, "xi_prime"));
            let (eta, eta_prime) = match (params.get("eta"), params.get("eta_prime")) {
                (Some(&e), Some(&ep)) => (e, ep),
                _ => eta_pair(xi, xi_prime, lambda)?,
            };
            combine(
                &HybridFamily::BhPair {
                    xi,
                    xi_prime,
                    eta,
                    eta_prime,
                }
                .hybrid_spec(lambda)?,
            )
        }
    }
}

/// Fidelities and distortions of both copies for the input
/// `√α²|0⟩ + e^{iφ}√(1-α²)|1⟩`.
pub fn evaluate(id: MachineId, params: &Params) -> Result<Evaluation> {
    let alpha_sq = params.get("alpha2").copied().unwrap_or(0.5);
    let psi = PureQubit::from_alpha_sq_phase(alpha_sq, params.get("phase").copied().unwrap_or(0.0))?;
    let m = marginals(&apply(&build(id, params)?, &psi)?)?;
    let chi = density_of(&psi);
    Ok(Evaluation {
        f_a: fidelity(&psi, &m.a)?,
        f_b: fidelity(&psi, &m.b)?,
        d_a: hs_distance(&m.a, &chi)?,
        d_b: hs_distance(&m.b, &chi)?,
        d_ab: hs_distance(&m.ab, &product_density(&psi))?,
    })
}
