//! Error estimation, closed-form oracles, diagnostics and scaling sweeps.

mod catalyst;
mod closed_form;
mod diagnostics;
mod estimate;
pub mod stats;
mod sweep;

pub use catalyst::{catalyst_closed_form_gap, CatalystGap};
pub use closed_form::{degree_error_closed_form, degree_error_exact, degree_survival_moment};
pub use diagnostics::{diagnostics, DiagnosticsConfig, DiagnosticsReport};
pub use estimate::{error_estimate, per_graph_mse, ErrorConfig, ErrorReport, Estimator, GraphSource};
pub use sweep::{density_for_degree, scaling_sweep, SlopeFit, SweepConfig, SweepMetric, SweepPoint, SweepResult};
