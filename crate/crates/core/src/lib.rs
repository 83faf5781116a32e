//! Conjugation symmetries of unitary matrices.
//!
//! For a unitary U, the conjugations C (antilinear, isometric, involutive
//! maps) with C U C = U* form a family parametrized by one symmetric unitary
//! block per eigenvalue cluster of U. This crate constructs, samples,
//! verifies, and decomposes that family, computes the hyperinvariant
//! subspace lattice it characterizes, and provides a discretized
//! bilateral-shift laboratory (multiplication by a power of the grid
//! variable, with its Wold transform and matrix-symbol conjugations).

pub mod antilinear;
pub mod decomp;
pub mod eigen;
pub mod error;
pub mod family;
pub mod haar;
pub mod hyperinv;
pub mod matrix;
pub mod shift;
pub mod spectral;
pub mod subspace;

pub use antilinear::{
    conjugation_check, csymmetry_residual, is_csymmetric, real_basis, takagi_symmetric_unitary,
    AntilinearOp, Conjugation, ConjugationCheck, CsymmetryCheck, Operator, TakagiFactor,
};
pub use decomp::{
    spectral_decompose_unitary, Cluster, UnitarySpectralDecomposition, DEFAULT_CLUSTER_TOL,
};
pub use error::{Error, Result};
pub use family::{
    check_spectral_commutation, commutant_conditions, factor_unitary, transport_family, BlockList,
    CommutantReport, ConjugationParametrization, MemberResiduals,
};
pub use haar::{haar_unitary, symmetric_unitary};
pub use hyperinv::{
    conjugation_invariance_test, equivalence_audit, hyperinvariant_lattice, AuditConfig,
    AuditReport, InvarianceVerdict,
};
pub use matrix::{Complex64, ComplexMatrix, UnitaryCheckReport};
pub use shift::{
    dft_matrix, dft_model, flip_example, lambda_drift_phi, sincos_phi, z2_family, CyclicShiftModel,
    DftReport, FlipFixture, PhiSymbol, PowerShiftModel,
};
pub use spectral::{
    abs_continuous, elementary_measure, h_mu_subspace, measure_join, measure_meet,
    spectral_projection, AtomicMeasure, SpectralSet,
};
pub use subspace::Subspace;
