//! Pure qubit inputs, density operators, and the two quality measures used
//! throughout: the fidelity `⟨χ|ρ|χ⟩` and the Hilbert-Schmidt distance
//! `Tr[(ρ - σ)²]`.

use num_complex::Complex64;

use crate::error::{CloneError, Result};
use crate::matrix::{ComplexMatrix, SubsystemLayout};

/// Tolerance for the Hermiticity and unit-trace checks on density operators.
pub const DENSITY_TOL: f64 = 1e-12;
/// Most negative eigenvalue a density operator may carry.
pub const EIGEN_FLOOR: f64 = -1e-10;

/// Normalized single-qubit state `α|0⟩ + β|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureQubit {
    alpha: Complex64,
    beta: Complex64,
    was_normalized: bool,
}

impl PureQubit {
    /// Normalizes `(alpha, beta)`; the zero vector is rejected.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let vals = [alpha.re, alpha.im, beta.re, beta.im];
        if vals.iter().any(|x| !x.is_finite()) {
            return Err(CloneError::InvalidState("amplitudes must be finite".into()));
        }
        let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
        if norm_sq <= 0.0 {
            return Err(CloneError::InvalidState("zero vector".into()));
        }
        let norm = norm_sq.sqrt();
        Ok(PureQubit {
            alpha: alpha / norm,
            beta: beta / norm,
            was_normalized: (norm_sq - 1.0).abs() <= 1e-12,
        })
    }

    /// Real-amplitude state `√a|0⟩ + √(1-a)|1⟩`.
    pub fn from_alpha_sq(alpha_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha_sq) {
            return Err(CloneError::InvalidState(format!("alpha^2 = {alpha_sq} outside [0, 1]")));
        }
        Self::new(
            Complex64::new(alpha_sq.sqrt(), 0.0),
            Complex64::new((1.0 - alpha_sq).sqrt(), 0.0),
        )
    }

    /// `√a|0⟩ + e^{iφ}√(1-a)|1⟩`.
    pub fn from_alpha_sq_phase(alpha_sq: f64, phase: f64) -> Result<Self> {
        let base = Self::from_alpha_sq(alpha_sq)?;
        Self::new(base.alpha, base.beta * Complex64::from_polar(1.0, phase))
    }

    /// Bloch-sphere point `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn bloch(theta: f64, phi: f64) -> Result<Self> {
        Self::new(
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        )
    }

    pub fn zero() -> Self {
        PureQubit {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
            was_normalized: true,
        }
    }

    pub fn one() -> Self {
        PureQubit {
            alpha: Complex64::new(0.0, 0.0),
            beta: Complex64::new(1.0, 0.0),
            was_normalized: true,
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.alpha, self.beta]
    }

    /// `|α|²`
    pub fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// Whether the amplitudes passed to [`PureQubit::new`] already had unit norm.
    pub fn was_normalized(&self) -> bool {
        self.was_normalized
    }

    /// `conj(β)|0⟩ - conj(α)|1⟩`.
    pub fn orthogonal(&self) -> PureQubit {
        PureQubit {
            alpha: self.beta.conj(),
            beta: -self.alpha.conj(),
            was_normalized: true,
        }
    }

    /// `⟨self|other⟩`
    pub fn overlap(&self, other: &PureQubit) -> Complex64 {
        self.alpha.conj() * other.alpha + self.beta.conj() * other.beta
    }
}

pub fn pure_state(alpha: Complex64, beta: Complex64) -> Result<PureQubit> {
    PureQubit::new(alpha, beta)
}

pub fn orthogonal_state(psi: &PureQubit) -> PureQubit {
    psi.orthogonal()
}

/// Hermitian, unit-trace, positive semidefinite matrix with a factor layout.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    layout: SubsystemLayout,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, layout: SubsystemLayout) -> Result<Self> {
        if !matrix.is_square() {
            return Err(CloneError::InvalidDensity(format!(
                "matrix is {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if layout.total() != matrix.rows() {
            return Err(CloneError::Dimension(format!(
                "layout {:?} does not span dimension {}",
                layout.dims(),
                matrix.rows()
            )));
        }
        if !matrix.is_hermitian(DENSITY_TOL) {
            return Err(CloneError::InvalidDensity("not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(CloneError::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = matrix.eigenvalues_hermitian()?.first().copied().unwrap_or(0.0);
        if min < EIGEN_FLOOR {
            return Err(CloneError::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityOperator { matrix, layout })
    }

    /// Single-factor density operator.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let layout = SubsystemLayout::single(matrix.rows());
        Self::new(matrix, layout)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .eigenvalues_hermitian()
            .expect("density operators are square")
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > tol).count()
    }
}

/// `|χ⟩⟨χ|`
pub fn density_of(psi: &PureQubit) -> DensityOperator {
    DensityOperator {
        matrix: ComplexMatrix::outer(&psi.amplitudes()),
        layout: SubsystemLayout::single(2),
    }
}

/// `|χ⟩⟨χ| ⊗ |χ⟩⟨χ|` on the two copy modes.
pub fn product_density(psi: &PureQubit) -> DensityOperator {
    let [a, b] = psi.amplitudes();
    DensityOperator {
        matrix: ComplexMatrix::outer(&[a * a, a * b, b * a, b * b]),
        layout: SubsystemLayout::new(vec![2, 2]).expect("static layout"),
    }
}

/// `⟨χ|ρ|χ⟩` for a single-qubit `ρ`.
pub fn fidelity(psi: &PureQubit, rho: &DensityOperator) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(CloneError::Dimension(format!(
            "fidelity needs a 2x2 density operator, got dimension {}",
            rho.dim()
        )));
    }
    let v = psi.amplitudes();
    let m = rho.matrix();
    let mut f = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            f += v[i].conj() * m.get(i, j) * v[j];
        }
    }
    debug_assert!(f.im.abs() <= 1e-12);
    Ok(f.re)
}

/// `Tr[(ρ - σ)²]`
pub fn hs_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let diff = rho.matrix().try_sub(sigma.matrix())?;
    Ok((&diff * &diff).trace().re.max(0.0))
}
