//! Local-available quantum correlations (LAQC) of two-qubit X states and
//! their redistribution by correlation swapping.
//!
//! - [`qmat`]: small dense density matrices, tensor products, partial traces.
//! - [`xstate`]: real X states, Bloch parameters, the five state families.
//! - [`correlations`]: mutual information, LAQC (numerical and closed form),
//!   concurrence.
//! - [`swap`]: the swapping map and its 16x16 oracle.
//! - [`audit`]: printed closed forms checked against the oracle pipeline.

pub mod audit;
pub mod correlations;
pub mod error;
pub mod optimize;
pub mod qmat;
pub mod sampling;
pub mod swap;
pub mod xstate;

pub use audit::{audit_printed_formulas, AuditEntry, AuditGrid, AuditReport, Classification, DeviationProfile};
pub use correlations::{
    concurrence, concurrence_family, correlation_report, laqc_family, laqc_oracle, laqc_xstate, mutual_information,
    ComplementaryPhases, CorrelationReport, JointDistribution, LaqcClosedForm, LocalBasisAngles, OracleMode,
};
pub use error::{Error, Result};
pub use qmat::DensityMatrix;
pub use swap::{swap_bloch, swap_family, swap_oracle, MeasurementState, SwapFamilyResult, SwapOutcome};
pub use xstate::{make_family, BlochX, FamilyId, FamilyTag, XState};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
