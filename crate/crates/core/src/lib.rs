//! Quantum cloning machines built as explicit isometries, with closed-form
//! marginals, hybrid combinations and parameter analysis.
//!
//! Every machine maps an input qubit to `a ⊗ b ⊗ machine`, with the joint
//! index `(2a + b)·M + m`.

pub mod analysis;
pub mod cloner;
pub mod error;
pub mod hybrid;
pub mod matrix;
pub mod state;

pub use analysis::{
    average_distortion, four_state_family, optimal_xi, phasecov_hybrid_xi, universality_lambda, universality_scan,
    xi_interval, MachineSource, OptimumReport, UniversalityReport,
};
pub use cloner::{
    apply, build_machine, closed_form_marginals, constructive_marginals, marginals, CloningIsometry, JointOutput,
    MachineKind, MachineSpec, Marginals,
};
pub use error::{CloneError, Result};
pub use hybrid::{combine, eta_pair, hcm_distortion, hcm_fidelity, BhPairParams, HybridFamily, HybridKind, HybridSpec};
pub use matrix::{gram_vectors, is_isometry, partial_trace, ComplexMatrix, GramMatrix, SubsystemLayout};
pub use state::{density_of, fidelity, hs_distance, product_density, DensityOperator, PureQubit};
