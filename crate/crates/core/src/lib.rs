//! Stochastic simulation and mean-field approximation of interaction
//! processes on stochastic block model graphs.
//!
//! The crate is organised by task:
//!
//! * [`graph`]: block model generation, the normalized adjacency `B`, its
//!   annealed surrogate `B_hat` and the spectral deviation `||B - B_hat||`.
//! * [`process`]: transition-rate tables and the SIR, catalyst and degree
//!   presets.
//! * [`initcond`]: initial-condition generators and the homogeneity statistic.
//! * [`simulate`]: Gillespie simulation and the exact master equation for tiny
//!   graphs.
//! * [`meanfield`]: the quenched, annealed and block-level ODE solvers.
//! * [`analysis`]: error estimation, closed forms, diagnostics and scaling
//!   sweeps.

pub mod analysis;
pub mod error;
pub mod graph;
pub mod grid;
pub mod initcond;
pub mod io;
pub mod meanfield;
pub mod parallel;
pub mod process;
pub mod rng;
pub mod simulate;

pub use analysis::{
    catalyst_closed_form_gap, degree_error_closed_form, diagnostics, error_estimate, scaling_sweep,
    CatalystGap, DiagnosticsConfig, DiagnosticsReport, ErrorConfig, ErrorReport, Estimator, GraphSource,
    SlopeFit, SweepConfig, SweepMetric, SweepPoint, SweepResult,
};
pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use graph::{
    annealed_matrix_apply, degree_stats, normalized_adjacency_apply, sbm_generate, spectral_deviation,
    BlockModel, DegreeStats, Graph, SbmParams, SpectralEstimate,
};
pub use initcond::{
    homogeneity_statistic, ic_bernoulli_sample, ic_block_constant, ic_degree_proportional, ic_modularity_set,
    ic_perron, HomogeneityReport, IcSpec, InitialCondition, ModularityObjective,
};
pub use meanfield::{annealed_nimfa_solve, bhmfa_solve, nimfa_solve, OdeSolution, SolverOptions, Variant};
pub use parallel::Parallelism;
pub use process::{preset_catalyst, preset_degree, preset_sir, ClosedFormTag, ProcessSpec};
pub use simulate::{
    gillespie_ensemble, gillespie_run, master_equation_solve, MasterSolution, TrajectorySample,
};
