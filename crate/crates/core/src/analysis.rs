//! Optimisation and scans over machine parameters.

use crate::cloner::{apply, build_machine, marginals, CloningIsometry, MachineSpec};
use crate::error::{CloneError, Result};
use crate::hybrid::{combine, eta_pair, HybridSpec};
use crate::state::{density_of, fidelity, hs_distance, product_density, PureQubit};

/// The universal partner machine in the state-dependent construction.
pub const UNIVERSAL_XI: f64 = 1.0 / 6.0;

fn check_alpha_sq(alpha_sq: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha_sq) {
        return Err(CloneError::InvalidParameter(format!(
            "alpha^2 = {alpha_sq} outside [0, 1]"
        )));
    }
    Ok(())
}

fn product(alpha_sq: f64) -> f64 {
    alpha_sq * (1.0 - alpha_sq)
}

/// Distortion-minimising `ξ` for a hybrid with the universal machine.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimumReport {
    pub xi_star: f64,
    pub lambda_range: (f64, f64),
    pub d_min: f64,
    pub fidelity: f64,
    pub feasible: bool,
    /// Why the optimum is not realizable, when it is not.
    pub note: Option<String>,
}

/// `ξ = (9α²β² - 2(1-λ)) / (12λ)`, with `(D_ab)_min = 2α²β² - 9α⁴β⁴/2` and
/// `F = 1 - 3α²β²/4`.
pub fn optimal_xi(alpha_sq: f64, lambda: f64) -> Result<OptimumReport> {
    check_alpha_sq(alpha_sq)?;
    if lambda == 0.0 {
        return Err(CloneError::DivisionDomain);
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(CloneError::InvalidParameter(format!(
            "lambda = {lambda} outside (0, 1]"
        )));
    }
    let a = product(alpha_sq);
    let xi_star = (9.0 * a - 2.0 * (1.0 - lambda)) / (12.0 * lambda);
    let note = if !(0.0..=0.5).contains(&xi_star) {
        Some(format!("xi* = {xi_star} outside [0, 1/2]"))
    } else {
        eta_pair(xi_star, UNIVERSAL_XI, lambda).err().map(|e| e.to_string())
    };
    Ok(OptimumReport {
        xi_star,
        lambda_range: ((1.0 - 4.5 * a).max(0.0), 1.0),
        d_min: 2.0 * a - 4.5 * a * a,
        fidelity: 1.0 - 0.75 * a,
        feasible: note.is_none(),
        note,
    })
}

/// Range of the optimal `ξ` as `λ` runs over its admissible interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XiInterval {
    pub lambda_low: f64,
    pub lambda_high: f64,
    pub xi_low: f64,
    pub xi_high: f64,
    /// Set when `9α²β² > 2`: the optimum then never drops below `3α²β²/4`
    /// and the upper end is capped at `ξ = 1/2`.
    pub clamped: bool,
}

pub fn xi_interval(alpha_sq: f64) -> Result<XiInterval> {
    check_alpha_sq(alpha_sq)?;
    let a = product(alpha_sq);
    let at_one = 0.75 * a;
    let clamped = 9.0 * a > 2.0;
    let (xi_low, xi_high) = if clamped { (at_one, 0.5) } else { (0.0, at_one) };
    Ok(XiInterval {
        lambda_low: (1.0 - 4.5 * a).max(0.0),
        lambda_high: 1.0,
        xi_low,
        xi_high,
        clamped,
    })
}

/// `ξ(α²) = 3α²(1-α²)/4`.
pub fn phasecov_hybrid_xi(alpha_sq: f64) -> f64 {
    0.75 * product(alpha_sq)
}

/// Weight that makes a hybrid of two Buzek-Hillery type machines universal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniversalityLambda {
    pub lambda: f64,
    pub in_unit_interval: bool,
}

/// `λ = (6ξ' - 1) / (6(ξ' - ξ))`.
pub fn universality_lambda(xi: f64, xi_prime: f64) -> Result<UniversalityLambda> {
    if (xi - xi_prime).abs() <= 1e-12 {
        return Err(CloneError::Degenerate);
    }
    let lambda = (6.0 * xi_prime - 1.0) / (6.0 * (xi_prime - xi));
    Ok(UniversalityLambda {
        lambda,
        in_unit_interval: (0.0..=1.0).contains(&lambda),
    })
}

/// Trapezoidal average of `D_a = Tr[(ρ_a - |χ⟩⟨χ|)²]` over `α² ∈ [0, 1]`,
/// real amplitudes.
pub fn average_distortion(spec: &MachineSpec, n_points: usize) -> Result<f64> {
    if n_points < 2 {
        return Err(CloneError::InvalidParameter(
            "at least two quadrature points are needed".into(),
        ));
    }
    let machine = build_machine(spec)?;
    let h = 1.0 / (n_points - 1) as f64;
    let mut total = 0.0;
    for i in 0..n_points {
        let psi = PureQubit::from_alpha_sq(i as f64 * h)?;
        let m = marginals(&apply(&machine, &psi)?)?;
        let d = hs_distance(&m.a, &density_of(&psi))?;
        let w = if i == 0 || i == n_points - 1 { 0.5 } else { 1.0 };
        total += w * d;
    }
    Ok(total * h)
}

/// Where the machine under scan comes from.
pub enum MachineSource<'a> {
    Spec(MachineSpec),
    Hybrid(HybridSpec),
    /// Called with `α²` of each input, for state-dependent machines.
    Builder(&'a dyn Fn(f64) -> Result<CloningIsometry>),
}

impl MachineSource<'_> {
    fn fixed(&self) -> Result<Option<CloningIsometry>> {
        match self {
            MachineSource::Spec(s) => build_machine(s).map(Some),
            MachineSource::Hybrid(h) => combine(h).map(Some),
            MachineSource::Builder(_) => Ok(None),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniversalityReport {
    /// Largest max-min spread of `F_a` or `F_b`.
    pub fidelity_spread: f64,
    /// Max-min spread of `D_ab` against `|χ⟩⟨χ| ⊗ |χ⟩⟨χ|`.
    pub distortion_spread: f64,
    pub grid_size: usize,
}

/// Per-state quantities gathered by a scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub fidelity_a: f64,
    pub fidelity_b: f64,
    pub d_ab: f64,
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}

/// Evaluates the source on each state, constructively.
pub fn scan_states(source: &MachineSource, states: &[PureQubit]) -> Result<Vec<ScanPoint>> {
    let fixed = source.fixed()?;
    states
        .iter()
        .map(|psi| {
            let built;
            let machine = match (&fixed, source) {
                (Some(m), _) => m,
                (None, MachineSource::Builder(f)) => {
                    built = f(psi.alpha_sq())?;
                    &built
                }
                (None, _) => unreachable!("only builders are state dependent"),
            };
            let m = marginals(&apply(machine, psi)?)?;
            Ok(ScanPoint {
                fidelity_a: fidelity(psi, &m.a)?,
                fidelity_b: fidelity(psi, &m.b)?,
                d_ab: hs_distance(&m.ab, &product_density(psi))?,
            })
        })
        .collect()
}

/// Spreads of fidelity and `D_ab` over arbitrary input states.
pub fn universality_scan_states(source: &MachineSource, states: &[PureQubit]) -> Result<UniversalityReport> {
    if states.is_empty() {
        return Err(CloneError::InvalidParameter("empty state grid".into()));
    }
    let points = scan_states(source, states)?;
    let fa = spread(points.iter().map(|p| p.fidelity_a));
    let fb = spread(points.iter().map(|p| p.fidelity_b));
    Ok(UniversalityReport {
        fidelity_spread: fa.max(fb),
        distortion_spread: spread(points.iter().map(|p| p.d_ab)),
        grid_size: states.len(),
    })
}

/// Spreads over real-amplitude inputs `√α²|0⟩ + √(1-α²)|1⟩`.
pub fn universality_scan(source: &MachineSource, grid: &[f64]) -> Result<UniversalityReport> {
    let states = grid
        .iter()
        .map(|&a| PureQubit::from_alpha_sq(a))
        .collect::<Result<Vec<_>>>()?;
    universality_scan_states(source, &states)
}

/// `n` points spread evenly over the Bloch sphere (Fibonacci lattice),
/// so the inputs carry complex relative phases.
pub fn bloch_grid(n: usize) -> Result<Vec<PureQubit>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            PureQubit::bloch(z.clamp(-1.0, 1.0).acos(), golden * i as f64)
        })
        .collect()
}

/// `n` evenly spaced `α²` values on `[0, 1]`.
pub fn alpha_sq_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// `α|0⟩ ± β|1⟩` and `α|1⟩ ± β|0⟩` with real `α = √α²`, `β = √(1-α²)`.
pub fn four_state_family(alpha_sq: f64) -> Result<[PureQubit; 4]> {
    check_alpha_sq(alpha_sq)?;
    let (a, b) = (alpha_sq.sqrt(), (1.0 - alpha_sq).sqrt());
    let real = |x: f64, y: f64| PureQubit::new(x.into(), y.into());
    Ok([real(a, b)?, real(a, -b)?, real(b, a)?, real(b, -a)?])
}
