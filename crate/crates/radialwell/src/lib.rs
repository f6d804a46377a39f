//! Bound states of a particle in a spherical box, with tools for auditing
//! which boundary conditions actually make the radial Hamiltonian hermitian.

// Validation guards are written `!(x > t)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigensolver;
pub mod error;
pub mod export;
pub mod guide;
pub mod hermiticity;
pub mod model;
pub mod quadrature;
pub mod singularity;
pub mod specfun;

pub use eigensolver::{
    bessel_zero, bessel_zeros, shooting_eigenfunction, shooting_solve, well_spectrum, Integrator,
    ShootingConfig,
};
pub use error::{Error, Result};
pub use export::{
    audit_to_csv, audit_to_json, delta_to_json, format_float, spectrum_from_json, spectrum_to_csv,
    spectrum_to_json, wavefn_to_csv,
};
pub use hermiticity::{
    audit, pr_defect, pr_identity_residual, wronskian_defect, AuditTolerances, AuditVerdict,
    HermiticityReport,
};
pub use model::{
    BoundaryConditionFamily, Interior, ModeForm, PotentialSpec, QuantumChannel, RadialMode,
    SampledMode, Spectrum, SpectrumEntry, Units,
};
pub use singularity::{
    ball_weight, default_epsilon_ladder, delta_weight, frobenius_indicial, regularity_filter,
    DeltaWeightEstimate, FrobeniusResult, ModeAdmissibility, RejectionReason,
    DELTA_SOURCE_TOLERANCE,
};
