//! The five base 1 → 2 cloning machines, built as explicit isometries from
//! the input qubit into `mode a ⊗ mode b ⊗ machine`.
//!
//! Machine states are realized concretely. Where the transformation declares
//! them orthonormal they are standard basis vectors; for the Buzek-Hillery
//! type machine they come from [`gram_vectors`] applied to the inner products
//! fixed by `(ξ, η)`.
//!
//! Every machine also has a closed-form expression for its two single-mode
//! marginals, which the constructive path ([`apply`] + [`marginals`]) is
//! checked against.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{CloneError, Result};
use crate::matrix::{
    gram_vectors, is_isometry, partial_trace, ComplexMatrix, GramMatrix, SubsystemLayout, GRAM_TOL, ZERO,
};
use crate::state::{density_of, fidelity, DensityOperator, PureQubit};

/// Isometry tolerance enforced on every built machine.
pub const ISOMETRY_TOL: f64 = 1e-12;

/// Larger coefficient of the phase-covariant machine, `1/2 + 1/√8`.
pub fn phase_covariant_major() -> f64 {
    0.5 + 1.0 / 8f64.sqrt()
}

/// Smaller coefficient of the phase-covariant machine, `1/2 - 1/√8`.
pub fn phase_covariant_minor() -> f64 {
    0.5 - 1.0 / 8f64.sqrt()
}

/// Upper bound on `η` for a Buzek-Hillery type machine with parameter `ξ`.
pub fn schwarz_bound(xi: f64) -> f64 {
    2.0 * (xi * (1.0 - 2.0 * xi)).max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MachineKind {
    WoottersZurek,
    BhType,
    PhaseCovariant,
    Pauli,
    AntiClone,
}

/// One base cloning machine and its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MachineSpec {
    WoottersZurek,
    /// `ξ = ⟨Y_i|Y_i⟩`, `η/2 = ⟨Q_1|Y_0⟩ = ⟨Q_0|Y_1⟩`.
    BhType {
        xi: f64,
        eta: f64,
    },
    PhaseCovariant,
    /// Amplitudes of the two error branches, normalized by `1/√(1+p²+q²)`.
    Pauli {
        p: f64,
        q: f64,
    },
    AntiClone,
}

impl MachineSpec {
    pub fn bh(xi: f64, eta: f64) -> Result<Self> {
        let spec = MachineSpec::BhType { xi, eta };
        spec.validate()?;
        Ok(spec)
    }

    /// The universal machine, `ξ = 1/6`, `η = 2/3`.
    pub fn bh_optimal() -> Self {
        MachineSpec::BhType {
            xi: 1.0 / 6.0,
            eta: 2.0 / 3.0,
        }
    }

    /// `η = 1 - 2ξ`, the input-independent marginal family.
    pub fn bh_balanced(xi: f64) -> Result<Self> {
        Self::bh(xi, 1.0 - 2.0 * xi)
    }

    pub fn pauli(p: f64, q: f64) -> Result<Self> {
        let spec = MachineSpec::Pauli { p, q };
        spec.validate()?;
        Ok(spec)
    }

    /// Pauli machine on the `p + q = 1` line.
    pub fn pauli_line(p: f64) -> Result<Self> {
        Self::pauli(p, 1.0 - p)
    }

    pub fn kind(&self) -> MachineKind {
        match self {
            MachineSpec::WoottersZurek => MachineKind::WoottersZurek,
            MachineSpec::BhType { .. } => MachineKind::BhType,
            MachineSpec::PhaseCovariant => MachineKind::PhaseCovariant,
            MachineSpec::Pauli { .. } => MachineKind::Pauli,
            MachineSpec::AntiClone => MachineKind::AntiClone,
        }
    }

    /// Parameter-range checks. The Schwarz bound on `η` is allowed a slack of
    /// 1e-12 so the boundary itself stays usable.
    pub fn validate(&self) -> Result<()> {
        match *self {
            MachineSpec::BhType { xi, eta } => {
                if !(xi.is_finite() && eta.is_finite()) {
                    return Err(CloneError::InvalidParameter("xi and eta must be finite".into()));
                }
                if !(0.0..=0.5).contains(&xi) {
                    return Err(CloneError::InvalidParameter(format!("xi = {xi} outside [0, 1/2]")));
                }
                let bound = schwarz_bound(xi);
                if eta < 0.0 || eta > bound + 1e-12 {
                    return Err(CloneError::InvalidParameter(format!(
                        "eta = {eta} outside [0, {bound}] for xi = {xi}"
                    )));
                }
                Ok(())
            }
            MachineSpec::Pauli { p, q } => {
                if !(p.is_finite() && q.is_finite()) || p < 0.0 || q < 0.0 || p + q <= 0.0 {
                    return Err(CloneError::InvalidParameter(format!(
                        "pauli parameters need p, q >= 0 and p + q > 0, got p = {p}, q = {q}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match *self {
            MachineSpec::WoottersZurek => "wz".into(),
            MachineSpec::BhType { xi, eta } => format!("bh(xi={xi}, eta={eta})"),
            MachineSpec::PhaseCovariant => "pc".into(),
            MachineSpec::Pauli { p, q } => format!("pauli(p={p}, q={q})"),
            MachineSpec::AntiClone => "anti".into(),
        }
    }
}

/// Isometry `V` mapping the input qubit to `a ⊗ b ⊗ machine`.
#[derive(Clone, Debug, PartialEq)]
pub struct CloningIsometry {
    matrix: ComplexMatrix,
    layout: SubsystemLayout,
}

impl CloningIsometry {
    /// Checks `V†V = I` at [`ISOMETRY_TOL`].
    pub fn new(matrix: ComplexMatrix, machine_dim: usize) -> Result<Self> {
        let iso = Self::new_unchecked(matrix, machine_dim)?;
        if !is_isometry(&iso.matrix, ISOMETRY_TOL) {
            return Err(CloneError::InvalidParameter("transformation is not an isometry".into()));
        }
        Ok(iso)
    }

    /// Shape checks only. Used to feed deliberately broken machines to the
    /// verification suite.
    pub fn new_unchecked(matrix: ComplexMatrix, machine_dim: usize) -> Result<Self> {
        let layout = SubsystemLayout::new(vec![2, 2, machine_dim])?;
        if matrix.cols() != 2 || matrix.rows() != layout.total() {
            return Err(CloneError::Dimension(format!(
                "expected a {}x2 matrix, got {}x{}",
                layout.total(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(CloningIsometry { matrix, layout })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn machine_dim(&self) -> usize {
        self.layout.dims()[2]
    }

    /// Image of `|0⟩` (`input = 0`) or `|1⟩` (`input = 1`).
    pub fn image(&self, input: usize) -> Vec<Complex64> {
        self.matrix.column(input)
    }

    pub fn is_isometry(&self, tol: f64) -> bool {
        is_isometry(&self.matrix, tol)
    }
}

/// Joint output state on `a ⊗ b ⊗ machine`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointOutput {
    pub rho: DensityOperator,
}

impl JointOutput {
    pub fn layout(&self) -> &SubsystemLayout {
        self.rho.layout()
    }
}

/// Reduced states of the two copies and of the copy pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Marginals {
    pub a: DensityOperator,
    pub b: DensityOperator,
    pub ab: DensityOperator,
}

/// Accumulates `Σ amp |a⟩|b⟩|m⟩` for one column of an isometry.
struct Column {
    machine_dim: usize,
    amps: Vec<Complex64>,
}

impl Column {
    fn new(machine_dim: usize) -> Self {
        Column {
            machine_dim,
            amps: vec![ZERO; 4 * machine_dim],
        }
    }

    fn add(&mut self, a: usize, b: usize, amp: Complex64, machine: &[Complex64]) {
        let base = (2 * a + b) * self.machine_dim;
        for (k, &m) in machine.iter().enumerate() {
            self.amps[base + k] += amp * m;
        }
    }

    fn add_basis(&mut self, a: usize, b: usize, amp: f64, machine: usize) {
        self.amps[(2 * a + b) * self.machine_dim + machine] += Complex64::new(amp, 0.0);
    }

    fn add_basis_c(&mut self, a: usize, b: usize, amp: Complex64, machine: usize) {
        self.amps[(2 * a + b) * self.machine_dim + machine] += amp;
    }
}

fn assemble(c0: Column, c1: Column) -> Result<CloningIsometry> {
    let m = c0.machine_dim;
    let rows = 4 * m;
    let matrix = ComplexMatrix::from_fn(rows, 2, |i, j| if j == 0 { c0.amps[i] } else { c1.amps[i] });
    CloningIsometry::new(matrix, m)
}

/// Gram matrix of `(Q_0, Q_1, Y_0, Y_1)` for a Buzek-Hillery type machine.
pub fn bh_gram(xi: f64, eta: f64) -> GramMatrix {
    let q = 1.0 - 2.0 * xi;
    let h = eta / 2.0;
    #[rustfmt::skip]
    let g = [
        q,   0.0, 0.0, h,
        0.0, q,   h,   0.0,
        0.0, h,   xi,  0.0,
        h,   0.0, 0.0, xi,
    ];
    GramMatrix::new(ComplexMatrix::from_real(4, 4, &g).expect("static shape")).expect("real symmetric")
}

/// Builds the isometry for `spec`.
pub fn build_machine(spec: &MachineSpec) -> Result<CloningIsometry> {
    spec.validate()?;
    match *spec {
        MachineSpec::WoottersZurek => {
            let (mut c0, mut c1) = (Column::new(2), Column::new(2));
            c0.add_basis(0, 0, 1.0, 0);
            c1.add_basis(1, 1, 1.0, 1);
            assemble(c0, c1)
        }
        MachineSpec::BhType { xi, eta } => {
            let states = gram_vectors(&bh_gram(xi, eta), GRAM_TOL)?;
            let (q0, q1, y0, y1) = (&states[0], &states[1], &states[2], &states[3]);
            let m = q0.len();
            let one = Complex64::new(1.0, 0.0);
            let (mut c0, mut c1) = (Column::new(m), Column::new(m));
            // |0⟩ → |00⟩|Q0⟩ + (|01⟩ + |10⟩)|Y0⟩
            c0.add(0, 0, one, q0);
            c0.add(0, 1, one, y0);
            c0.add(1, 0, one, y0);
            // |1⟩ → |11⟩|Q1⟩ + (|01⟩ + |10⟩)|Y1⟩
            c1.add(1, 1, one, q1);
            c1.add(0, 1, one, y1);
            c1.add(1, 0, one, y1);
            assemble(c0, c1)
        }
        MachineSpec::PhaseCovariant => {
            let (up, down) = (0, 1);
            let (major, minor) = (phase_covariant_major(), phase_covariant_minor());
            // ½|+⟩ with |+⟩ = (|01⟩ + |10⟩)/√2
            let half_plus = 0.5 * FRAC_1_SQRT_2;
            let (mut c0, mut c1) = (Column::new(2), Column::new(2));
            c0.add_basis(0, 0, major, up);
            c0.add_basis(1, 1, minor, up);
            c0.add_basis(0, 1, half_plus, down);
            c0.add_basis(1, 0, half_plus, down);
            c1.add_basis(1, 1, major, down);
            c1.add_basis(0, 0, minor, down);
            c1.add_basis(0, 1, half_plus, up);
            c1.add_basis(1, 0, half_plus, up);
            assemble(c0, c1)
        }
        MachineSpec::Pauli { p, q } => {
            let (up, down) = (0, 1);
            let n = 1.0 / (1.0 + p * p + q * q).sqrt();
            let (mut c0, mut c1) = (Column::new(2), Column::new(2));
            c0.add_basis(0, 0, n, up);
            c0.add_basis(0, 1, n * p, down);
            c0.add_basis(1, 0, n * q, down);
            c1.add_basis(1, 1, n, down);
            c1.add_basis(1, 0, n * p, up);
            c1.add_basis(0, 1, n * q, up);
            assemble(c0, c1)
        }
        MachineSpec::AntiClone => {
            let (up, down, right, left) = (0, 1, 2, 3);
            let s6 = 1.0 / 6f64.sqrt();
            let phase = Complex64::from_polar(FRAC_1_SQRT_2, (1.0 / 3f64.sqrt()).acos());
            let (mut c0, mut c1) = (Column::new(4), Column::new(4));
            c0.add_basis(0, 0, s6, up);
            c0.add_basis_c(0, 1, phase, right);
            c0.add_basis(1, 0, -s6, right);
            c0.add_basis(1, 1, s6, left);
            c1.add_basis(1, 1, s6, right);
            c1.add_basis_c(1, 0, phase, up);
            c1.add_basis(0, 1, -s6, up);
            c1.add_basis(0, 0, s6, down);
            assemble(c0, c1)
        }
    }
}

/// `V|χ⟩⟨χ|V†`.
pub fn apply(machine: &CloningIsometry, psi: &PureQubit) -> Result<JointOutput> {
    let input = ComplexMatrix::column_vector(&psi.amplitudes());
    let out = machine.matrix().matmul(&input)?;
    let rho = DensityOperator::new(ComplexMatrix::outer(out.data()), machine.layout().clone())?;
    Ok(JointOutput { rho })
}

/// Traces the joint output down to mode `a`, mode `b`, and the pair `ab`.
pub fn marginals(joint: &JointOutput) -> Result<Marginals> {
    let layout = joint.layout();
    if layout.len() < 3 || layout.dims()[0] != 2 || layout.dims()[1] != 2 {
        return Err(CloneError::Dimension(format!(
            "expected layout (2, 2, M, ...), got {:?}",
            layout.dims()
        )));
    }
    let m = joint.rho.matrix();
    let a = partial_trace(m, layout, &[0])?;
    let b = partial_trace(m, layout, &[1])?;
    let ab = partial_trace(m, layout, &[0, 1])?;
    Ok(Marginals {
        a: DensityOperator::new(a, layout.restrict(&[0]))?,
        b: DensityOperator::new(b, layout.restrict(&[1]))?,
        ab: DensityOperator::new(ab, layout.restrict(&[0, 1]))?,
    })
}

/// Builds `spec`, applies it to `psi`, and returns the marginals.
pub fn constructive_marginals(spec: &MachineSpec, psi: &PureQubit) -> Result<Marginals> {
    marginals(&apply(&build_machine(spec)?, psi)?)
}

/// `|α|²`, `|β|²` and the coherence `αβ*`.
fn coefficients(psi: &PureQubit) -> (f64, f64, Complex64) {
    let [a, b] = psi.amplitudes();
    (a.norm_sqr(), b.norm_sqr(), a * b.conj())
}

/// 2x2 density matrix `[[d0, off], [off*, d1]]`.
pub(crate) fn qubit_density(d0: f64, d1: f64, off: Complex64) -> Result<DensityOperator> {
    let m = ComplexMatrix::new(
        2,
        2,
        vec![Complex64::new(d0, 0.0), off, off.conj(), Complex64::new(d1, 0.0)],
    )?;
    DensityOperator::from_matrix(m)
}

/// `w|χ⟩⟨χ| + v|χ̄⟩⟨χ̄|`
pub(crate) fn mix_with_orthogonal(psi: &PureQubit, w: f64, v: f64) -> Result<DensityOperator> {
    let p = density_of(psi);
    let o = density_of(&psi.orthogonal());
    DensityOperator::from_matrix(&p.matrix().scale_real(w) + &o.matrix().scale_real(v))
}

/// Whether `α*β` is real, i.e. the input lies on the real great circle of
/// the Bloch sphere (up to a global phase).
pub fn has_real_relative_phase(psi: &PureQubit) -> bool {
    (psi.alpha().conj() * psi.beta()).im.abs() <= 1e-12
}

/// Closed-form single-mode marginals `(ρ_a, ρ_b)`.
///
/// * Buzek-Hillery type: diagonal `|α|² ± ξ(|β|² - |α|²)` (trace preserving),
///   coherence `η αβ*`.
/// * Pauli: `N²[(1 - q² + p²)|χ⟩⟨χ| + q² I]` for mode `a` and the same with
///   `p ↔ q` for mode `b`, `N² = 1/(1+p²+q²)`. Off the `p + q = 1` line the
///   coherence picks up an extra `N²(q² - (1-p)²)αβ*` (resp. `p ↔ q`).
/// * Phase covariant: `c₊|χ⟩⟨χ| + c₋|χ̄⟩⟨χ̄|`, valid for inputs with a real
///   relative phase only; other inputs give [`CloneError::Domain`].
/// * Anti-cloner: `(1 ± η n·σ)/2` with shrinking factor `η = 1/3`.
pub fn closed_form_marginals(spec: &MachineSpec, psi: &PureQubit) -> Result<(DensityOperator, DensityOperator)> {
    spec.validate()?;
    let (a2, b2, coh) = coefficients(psi);
    match *spec {
        MachineSpec::WoottersZurek => {
            let r = qubit_density(a2, b2, ZERO)?;
            Ok((r.clone(), r))
        }
        MachineSpec::BhType { xi, eta } => {
            let shift = xi * (b2 - a2);
            let r = qubit_density(a2 + shift, b2 - shift, coh * eta)?;
            Ok((r.clone(), r))
        }
        MachineSpec::PhaseCovariant => {
            if !has_real_relative_phase(psi) {
                return Err(CloneError::Domain(
                    "phase-covariant closed form needs a real relative phase between the amplitudes".into(),
                ));
            }
            let r = mix_with_orthogonal(psi, phase_covariant_major(), phase_covariant_minor())?;
            Ok((r.clone(), r))
        }
        MachineSpec::Pauli { p, q } => {
            let n2 = 1.0 / (1.0 + p * p + q * q);
            let one_mode = |keep: f64, lose: f64| -> Result<DensityOperator> {
                let w = n2 * (1.0 - lose * lose + keep * keep);
                let noise = n2 * lose * lose;
                let extra = n2 * (lose * lose - (1.0 - keep) * (1.0 - keep));
                qubit_density(w * a2 + noise, w * b2 + noise, coh * (w + extra))
            };
            Ok((one_mode(p, q)?, one_mode(q, p)?))
        }
        MachineSpec::AntiClone => {
            let shrink = 1.0 / 3.0;
            let r_a = mix_with_orthogonal(psi, 0.5 * (1.0 + shrink), 0.5 * (1.0 - shrink))?;
            let r_b = mix_with_orthogonal(psi, 0.5 * (1.0 - shrink), 0.5 * (1.0 + shrink))?;
            Ok((r_a, r_b))
        }
    }
}

/// `(F_a, F_b)` from the constructive path.
pub fn machine_fidelities(spec: &MachineSpec, psi: &PureQubit) -> Result<(f64, f64)> {
    let m = constructive_marginals(spec, psi)?;
    Ok((fidelity(psi, &m.a)?, fidelity(psi, &m.b)?))
}

/// Pauli-line fidelities `((p²+1), (p²-2p+2)) / (2(p²-p+1))`.
pub fn pauli_line_fidelities(p: f64) -> (f64, f64) {
    let den = 2.0 * (p * p - p + 1.0);
    ((p * p + 1.0) / den, (p * p - 2.0 * p + 2.0) / den)
}
