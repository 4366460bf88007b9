//! Executable forms of the conditional Stam inequality, the conditional
//! entropy-power inequality and their companions.
//!
//! Every check returns an [`InequalityReport`] whose `margin` is nonnegative
//! exactly when the inequality holds. Fisher information may be `+∞`; in the
//! Stam checks its reciprocal is then `0`.

mod capacity;
mod checks;
mod classical;
mod fisher;
mod report;
mod scaling;
mod sharp;

pub use capacity::{capacity_bound, capacity_bound_for_env};
pub use checks::{
    entropy_triple, epi_check, epi_legendre, epi_linear_check, epi_linear_report, epi_report,
    fisher_triple, optimal_lambda_epi, optimal_lambda_stam, stam_check, stam_legendre,
    stam_linear_check, stam_linear_report, stam_report, CheckOptions, EntropyTriple, FisherTriple,
    LegendreComparison, Roles,
};
pub use classical::{
    classical_conditional_epi_check, gaussian_entropy, proportional_classical_ci,
    random_classical_ci, ClassicalEpiOutcome,
};
pub use fisher::{fisher_conditional, integral_fisher, FisherMethod, FisherValue};
pub use report::{InequalityReport, ReportParams};
pub use scaling::{is_non_increasing, lower_bound_scan, scaling_residual};
pub use sharp::{sharp_convergence, sharp_limits, sharp_output_covariance, SharpRow};
