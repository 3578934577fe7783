//! Hybrid machines: `√λ V₁ ⊕ √(1-λ) V₂`, two base machines tagged by
//! orthogonal flag states.
//!
//! The flag is realized as a direct sum of the two machine spaces, so
//! `V†V = λ V₁†V₁ + (1-λ) V₂†V₂ = I` and the single-mode marginals are the
//! `λ`-weighted mixtures of the constituents' marginals.

use num_complex::Complex64;

use crate::cloner::{
    build_machine, has_real_relative_phase, mix_with_orthogonal, phase_covariant_major, phase_covariant_minor,
    qubit_density, schwarz_bound, CloningIsometry, MachineSpec,
};
use crate::error::{CloneError, Result};
use crate::matrix::ComplexMatrix;
use crate::state::{density_of, DensityOperator, PureQubit};

/// Tolerance on the coefficient constraint tying `(ξ, ξ', η, η', λ)`.
pub const CONSTRAINT_TOL: f64 = 1e-12;

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(CloneError::InvalidParameter(format!(
            "lambda = {lambda} outside [0, 1]"
        )));
    }
    Ok(())
}

fn check_xi(name: &str, xi: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&xi) {
        return Err(CloneError::InvalidParameter(format!("{name} = {xi} outside [0, 1/2]")));
    }
    Ok(())
}

/// Two machines and the weight `λ` of the first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HybridSpec {
    pub lambda: f64,
    pub first: MachineSpec,
    pub second: MachineSpec,
}

impl HybridSpec {
    pub fn new(lambda: f64, first: MachineSpec, second: MachineSpec) -> Result<Self> {
        check_lambda(lambda)?;
        first.validate()?;
        second.validate()?;
        Ok(HybridSpec { lambda, first, second })
    }
}

/// Direct-sum combination of the two constituents.
pub fn combine(spec: &HybridSpec) -> Result<CloningIsometry> {
    check_lambda(spec.lambda)?;
    let v1 = build_machine(&spec.first)?;
    let v2 = build_machine(&spec.second)?;
    direct_sum(spec.lambda, &v1, &v2)
}

/// `√λ v1 ⊕ √(1-λ) v2` over the machine factor.
pub fn direct_sum(lambda: f64, v1: &CloningIsometry, v2: &CloningIsometry) -> Result<CloningIsometry> {
    check_lambda(lambda)?;
    let (m1, m2) = (v1.machine_dim(), v2.machine_dim());
    let m = m1 + m2;
    let (w1, w2) = (lambda.sqrt(), (1.0 - lambda).sqrt());
    let matrix = ComplexMatrix::from_fn(4 * m, 2, |row, col| {
        let (ab, k) = (row / m, row % m);
        if k < m1 {
            v1.matrix().get(ab * m1 + k, col) * w1
        } else {
            v2.matrix().get(ab * m2 + (k - m1), col) * w2
        }
    });
    CloningIsometry::new(matrix, m)
}

/// Parameters of a hybrid of two Buzek-Hillery type machines.
///
/// `(xi, eta)` belong to the machine with weight `lambda`, the primed pair to
/// the other one. Construction only checks ranges; the Schwarz bounds are
/// enforced when a machine is actually built (see [`BhPairParams::check_realizable`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BhPairParams {
    pub xi: f64,
    pub xi_prime: f64,
    pub eta: f64,
    pub eta_prime: f64,
    pub lambda: f64,
}

impl BhPairParams {
    pub fn new(xi: f64, xi_prime: f64, eta: f64, eta_prime: f64, lambda: f64) -> Result<Self> {
        check_xi("xi", xi)?;
        check_xi("xi'", xi_prime)?;
        check_lambda(lambda)?;
        if !(eta.is_finite() && eta_prime.is_finite()) {
            return Err(CloneError::InvalidParameter("eta values must be finite".into()));
        }
        Ok(BhPairParams {
            xi,
            xi_prime,
            eta,
            eta_prime,
            lambda,
        })
    }

    /// `η = 1 - 2ξ`, `η' = 1 - 2ξ'`, which satisfies the constraint for every `λ`.
    pub fn proportional(xi: f64, xi_prime: f64, lambda: f64) -> Result<Self> {
        Self::new(xi, xi_prime, 1.0 - 2.0 * xi, 1.0 - 2.0 * xi_prime, lambda)
    }

    /// Constrained parameters whose `η` pair comes from [`eta_pair`].
    pub fn feasible(xi: f64, xi_prime: f64, lambda: f64) -> Result<Self> {
        let (eta, eta_prime) = eta_pair(xi, xi_prime, lambda)?;
        Self::new(xi, xi_prime, eta, eta_prime, lambda)
    }

    /// Effective `ξ` of the mixture, `ξ' + λ(ξ - ξ')`.
    pub fn xi_eff(&self) -> f64 {
        self.xi_prime + self.lambda * (self.xi - self.xi_prime)
    }

    /// Effective `η` of the mixture, `η' + λ(η - η')`.
    pub fn eta_eff(&self) -> f64 {
        self.eta_prime + self.lambda * (self.eta - self.eta_prime)
    }

    /// `η'(1-λ) + ηλ - (1 - 2ξ' - 2λ(ξ - ξ'))`; zero on the state-independent fidelity family.
    pub fn constraint_residual(&self) -> f64 {
        let lhs = self.eta_prime * (1.0 - self.lambda) + self.eta * self.lambda;
        let rhs = 1.0 - 2.0 * self.xi_prime - 2.0 * self.lambda * (self.xi - self.xi_prime);
        lhs - rhs
    }

    pub fn is_constrained(&self) -> bool {
        self.constraint_residual().abs() <= CONSTRAINT_TOL
    }

    /// Both `(ξ, η)` and `(ξ', η')` within their Schwarz bounds.
    pub fn check_realizable(&self) -> Result<()> {
        MachineSpec::bh(self.xi, self.eta)?;
        MachineSpec::bh(self.xi_prime, self.eta_prime)?;
        Ok(())
    }

    pub fn hybrid_spec(&self) -> Result<HybridSpec> {
        HybridSpec::new(
            self.lambda,
            MachineSpec::bh(self.xi, self.eta)?,
            MachineSpec::bh(self.xi_prime, self.eta_prime)?,
        )
    }
}

/// `(1 - ξ') - λ(ξ - ξ')` for constrained parameters.
pub fn hcm_fidelity(params: &BhPairParams) -> Result<f64> {
    let residual = params.constraint_residual();
    if residual.abs() > CONSTRAINT_TOL {
        return Err(CloneError::Constraint { residual });
    }
    Ok((1.0 - params.xi_prime) - params.lambda * (params.xi - params.xi_prime))
}

/// `Tr[(ρ_ab^out - ρ_ab^id)²]` for real amplitudes, summed over the six
/// independent entries of the difference in the `{|00⟩, |+⟩, |11⟩}` block.
pub fn hcm_distortion(alpha_sq: f64, params: &BhPairParams) -> f64 {
    let BhPairParams {
        xi,
        xi_prime,
        eta,
        eta_prime,
        lambda,
    } = *params;
    let keep = lambda * (1.0 - 2.0 * xi) + (1.0 - lambda) * (1.0 - 2.0 * xi_prime);
    let coherence = eta * lambda / 2.0 + (1.0 - lambda) * eta_prime / 2.0;
    let swap = 2.0 * xi * lambda + 2.0 * xi_prime * (1.0 - lambda);
    distortion_terms(alpha_sq, keep, coherence, swap)
}

/// [`hcm_distortion`] with `ξ' = 1/6` and the `η` pair eliminated through the
/// constraint, leaving a function of `(α², ξ, λ)` only.
pub fn hcm_distortion_universal_partner(alpha_sq: f64, xi: f64, lambda: f64) -> f64 {
    let keep = lambda * (1.0 - 2.0 * xi) + (1.0 - lambda) * (2.0 / 3.0);
    let coherence = 1.0 / 3.0 - lambda * (xi - 1.0 / 6.0);
    let swap = 2.0 * xi * lambda + (1.0 / 3.0) * (1.0 - lambda);
    distortion_terms(alpha_sq, keep, coherence, swap)
}

fn distortion_terms(alpha_sq: f64, keep: f64, coherence: f64, swap: f64) -> f64 {
    let a2 = alpha_sq;
    let b2 = 1.0 - alpha_sq;
    let ab = (a2 * b2).max(0.0).sqrt();
    let s2 = std::f64::consts::SQRT_2;
    let u11 = a2 * a2 - a2 * keep;
    let u12 = s2 * a2 * ab - s2 * ab * coherence;
    let u13 = a2 * b2;
    let u22 = 2.0 * a2 * b2 - swap;
    let u23 = s2 * ab * b2 - s2 * ab * coherence;
    let u33 = b2 * b2 - b2 * keep;
    u11 * u11 + 2.0 * u12 * u12 + 2.0 * u13 * u13 + u22 * u22 + 2.0 * u23 * u23 + u33 * u33
}

/// An `(η, η')` pair satisfying the constraint with each component inside its
/// Schwarz bound.
///
/// Starts from `(1 - 2ξ, 1 - 2ξ')`. If a component exceeds its bound it is
/// clamped there and the constraint is re-solved for the other one (which is
/// clamped at zero in turn if it would go negative).
pub fn eta_pair(xi: f64, xi_prime: f64, lambda: f64) -> Result<(f64, f64)> {
    check_xi("xi", xi)?;
    check_xi("xi'", xi_prime)?;
    check_lambda(lambda)?;
    let rhs = 1.0 - 2.0 * xi_prime - 2.0 * lambda * (xi - xi_prime);
    let (b, b_prime) = (schwarz_bound(xi), schwarz_bound(xi_prime));
    let achievable = lambda * b + (1.0 - lambda) * b_prime;
    if rhs > achievable + CONSTRAINT_TOL || rhs < -CONSTRAINT_TOL {
        return Err(CloneError::Infeasible {
            required: rhs,
            achievable,
        });
    }

    let (mut eta, mut eta_prime) = (1.0 - 2.0 * xi, 1.0 - 2.0 * xi_prime);
    if lambda == 0.0 {
        eta = eta.min(b);
        eta_prime = rhs;
    } else if lambda == 1.0 {
        eta_prime = eta_prime.min(b_prime);
        eta = rhs;
    } else if eta > b {
        eta = b;
        eta_prime = (rhs - lambda * eta) / (1.0 - lambda);
        if eta_prime < 0.0 {
            eta_prime = 0.0;
            eta = rhs / lambda;
        }
    } else if eta_prime > b_prime {
        eta_prime = b_prime;
        eta = (rhs - (1.0 - lambda) * eta_prime) / lambda;
        if eta < 0.0 {
            eta = 0.0;
            eta_prime = rhs / (1.0 - lambda);
        }
    }
    Ok((eta.clamp(0.0, b), eta_prime.clamp(0.0, b_prime)))
}

/// Hybrid families with printed closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HybridKind {
    /// Buzek-Hillery type (`η = 1 - 2ξ`, weight `λ`) with the phase-covariant machine.
    BhPhaseCov,
    /// Pauli machine on `q = 1 - p` (weight `λ`) with the optimal Buzek-Hillery machine.
    BhPauli,
    /// Optimal Buzek-Hillery machine (weight `λ`) with the anti-cloner.
    BhAnti,
}

/// Closed-form `(F₁, F₂)` of a hybrid family.
///
/// `p` is required for [`HybridKind::BhPauli`], `xi` for [`HybridKind::BhPhaseCov`].
pub fn pair_fidelities(kind: HybridKind, lambda: f64, p: Option<f64>, xi: Option<f64>) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    match kind {
        HybridKind::BhPhaseCov => {
            let xi = xi.ok_or_else(|| CloneError::InvalidParameter("xi is required for bh-pc".into()))?;
            let f = phase_covariant_major() + lambda * (phase_covariant_minor() - xi);
            Ok((f, f))
        }
        HybridKind::BhPauli => {
            let p = p.ok_or_else(|| CloneError::InvalidParameter("p is required for bh-pauli".into()))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(CloneError::InvalidParameter(format!("p = {p} outside [0, 1]")));
            }
            let den = p * p - p + 1.0;
            let f1 = 5.0 / 6.0 + (lambda / 2.0) * ((p * p + 1.0) / den - 5.0 / 3.0);
            let f2 = 5.0 / 6.0 + (lambda / 2.0) * ((p * p - 2.0 * p + 2.0) / den - 5.0 / 3.0);
            Ok((f1, f2))
        }
        HybridKind::BhAnti => Ok((
            5.0 * lambda / 6.0 + 2.0 * (1.0 - lambda) / 3.0,
            5.0 * lambda / 6.0 + (1.0 - lambda) / 3.0,
        )),
    }
}

/// A concrete hybrid family together with its machine parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HybridFamily {
    BhPhaseCov {
        xi: f64,
    },
    BhPauli {
        p: f64,
    },
    BhAnti,
    BhPair {
        xi: f64,
        xi_prime: f64,
        eta: f64,
        eta_prime: f64,
    },
}

impl HybridFamily {
    /// The two constituents in combination order (first one carries `λ`).
    pub fn hybrid_spec(&self, lambda: f64) -> Result<HybridSpec> {
        match *self {
            HybridFamily::BhPhaseCov { xi } => {
                HybridSpec::new(lambda, MachineSpec::bh_balanced(xi)?, MachineSpec::PhaseCovariant)
            }
            HybridFamily::BhPauli { p } => {
                HybridSpec::new(lambda, MachineSpec::pauli_line(p)?, MachineSpec::bh_optimal())
            }
            HybridFamily::BhAnti => HybridSpec::new(lambda, MachineSpec::bh_optimal(), MachineSpec::AntiClone),
            HybridFamily::BhPair {
                xi,
                xi_prime,
                eta,
                eta_prime,
            } => HybridSpec::new(lambda, MachineSpec::bh(xi, eta)?, MachineSpec::bh(xi_prime, eta_prime)?),
        }
    }

    pub fn kind(&self) -> Option<HybridKind> {
        match self {
            HybridFamily::BhPhaseCov { .. } => Some(HybridKind::BhPhaseCov),
            HybridFamily::BhPauli { .. } => Some(HybridKind::BhPauli),
            HybridFamily::BhAnti => Some(HybridKind::BhAnti),
            HybridFamily::BhPair { .. } => None,
        }
    }
}

/// Printed closed-form marginals `(ρ₁, ρ₂)` of a hybrid family.
///
/// The phase-covariant family needs an input with a real relative phase.
pub fn hybrid_closed_form_marginal(
    family: &HybridFamily,
    lambda: f64,
    psi: &PureQubit,
) -> Result<(DensityOperator, DensityOperator)> {
    check_lambda(lambda)?;
    let [a, b] = psi.amplitudes();
    let (a2, b2) = (a.norm_sqr(), b.norm_sqr());
    let coh: Complex64 = a * b.conj();
    let mu = 1.0 - lambda;
    match *family {
        HybridFamily::BhPhaseCov { xi } => {
            if !has_real_relative_phase(psi) {
                return Err(CloneError::Domain(
                    "bh-pc closed form needs a real relative phase between the amplitudes".into(),
                ));
            }
            let w = lambda * (1.0 - xi) + mu * phase_covariant_major();
            let v = lambda * xi + mu * phase_covariant_minor();
            let r = mix_with_orthogonal(psi, w, v)?;
            Ok((r.clone(), r))
        }
        HybridFamily::BhPauli { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(CloneError::InvalidParameter(format!("p = {p} outside [0, 1]")));
            }
            let q = 1.0 - p;
            let n2 = 1.0 / (1.0 + p * p + q * q);
            let chi = density_of(psi);
            let bh = mix_with_orthogonal(psi, 5.0 / 6.0, 1.0 / 6.0)?;
            let one_mode = |keep: f64, lose: f64| -> Result<DensityOperator> {
                let pauli = &chi.matrix().scale_real(n2 * (1.0 - lose * lose + keep * keep))
                    + &ComplexMatrix::identity(2).scale_real(n2 * lose * lose);
                DensityOperator::from_matrix(&pauli.scale_real(lambda) + &bh.matrix().scale_real(mu))
            };
            Ok((one_mode(p, q)?, one_mode(q, p)?))
        }
        HybridFamily::BhAnti => {
            let ra = qubit_density(
                lambda * (5.0 * a2 / 6.0 + b2 / 6.0) + mu * (2.0 * a2 / 3.0 + b2 / 3.0),
                lambda * (5.0 * b2 / 6.0 + a2 / 6.0) + mu * (a2 / 3.0 + 2.0 * b2 / 3.0),
                coh * (lambda * 2.0 / 3.0 + mu / 3.0),
            )?;
            let rb = qubit_density(
                lambda * (5.0 * a2 / 6.0 + b2 / 6.0) + mu * (a2 / 3.0 + 2.0 * b2 / 3.0),
                lambda * (5.0 * b2 / 6.0 + a2 / 6.0) + mu * (2.0 * a2 / 3.0 + b2 / 3.0),
                coh * (lambda * 2.0 / 3.0 - mu / 3.0),
            )?;
            Ok((ra, rb))
        }
        HybridFamily::BhPair {
            xi,
            xi_prime,
            eta,
            eta_prime,
        } => {
            let params = BhPairParams::new(xi, xi_prime, eta, eta_prime, lambda)?;
            let shift = params.xi_eff() * (b2 - a2);
            let r = qubit_density(a2 + shift, b2 - shift, coh * params.eta_eff())?;
            Ok((r.clone(), r))
        }
    }
}

/// `λ`-weighted mixture of two single-mode density operators.
pub fn mix(lambda: f64, first: &DensityOperator, second: &DensityOperator) -> Result<DensityOperator> {
    DensityOperator::from_matrix(&first.matrix().scale_real(lambda) + &second.matrix().scale_real(1.0 - lambda))
}
