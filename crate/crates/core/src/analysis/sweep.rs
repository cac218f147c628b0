use serde::{Deserialize, Serialize};

use super::catalyst::catalyst_closed_form_gap;
use super::estimate::{error_estimate, root_mean, Estimator, ErrorConfig, GraphSource};
use super::stats::{mean_sd, ols_slope, quantile_sorted, resample};
use crate::error::{invalid, Result};
use crate::graph::{largest_remainder_sizes, sbm_generate, SbmParams};
use crate::grid::TimeGrid;
use crate::initcond::IcSpec;
use crate::meanfield::SolverOptions;
use crate::parallel::{map_indexed, Parallelism};
use crate::process::ProcessSpec;
use crate::rng::{derive_seed, rng_from_seed, stream};

/// What is measured at each design point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepMetric {
    /// `summary` of [`error_estimate`].
    ApproximationError {
        #[serde(default)]
        estimator: Estimator,
    },
    /// Root mean square over graphs of the largest per-block catalyst gap at
    /// `t_end`.
    CatalystGap,
}

impl Default for SweepMetric {
    fn default() -> Self {
        SweepMetric::ApproximationError { estimator: Estimator::MonteCarlo }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    /// Density exponent: `d = ceil(N^alpha)`.
    pub alpha: f64,
    pub t_end: f64,
    pub n_points: usize,
    /// Block fractions and weights; the density is solved for per point.
    pub fractions: Vec<f64>,
    pub weights: Vec<Vec<f64>>,
    pub metric: SweepMetric,
    pub ic: IcSpec,
    pub n_graphs: usize,
    pub n_replicates: usize,
    pub seed: u64,
    pub bootstrap: usize,
    pub solver: SolverOptions,
    #[serde(skip)]
    pub parallelism: Parallelism,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_values: vec![],
            alpha: 0.5,
            t_end: 1.0,
            n_points: 41,
            fractions: vec![1.0],
            weights: vec![vec![1.0]],
            metric: SweepMetric::default(),
            ic: IcSpec::Pure { state: "a".into() },
            n_graphs: 10,
            n_replicates: 100,
            seed: 0,
            bootstrap: 1000,
            solver: SolverOptions::default(),
            parallelism: Parallelism::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    #[serde(rename = "N")]
    pub n: usize,
    pub d: usize,
    pub rho: f64,
    pub error: f64,
    pub se: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_held: Option<bool>,
    #[serde(skip)]
    pub per_graph: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub est: f64,
    pub lo: f64,
    pub hi: f64,
}

impl SlopeFit {
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.est >= lo && self.est <= hi
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub alpha: f64,
    pub t_end: f64,
    pub ic_kind: String,
    pub states: Vec<String>,
    pub metric: SweepMetric,
    pub points: Vec<SweepPoint>,
    pub slope_vs_d: SlopeFit,
    #[serde(rename = "slope_vs_N")]
    pub slope_vs_n: SlopeFit,
}

/// Density that gives expected average degree `d` on `n` vertices.
pub fn density_for_degree(n: usize, d: f64, fractions: &[f64], weights: &[Vec<f64>]) -> f64 {
    let sizes = largest_remainder_sizes(n, fractions);
    let mut pairs = 0.0;
    for (k, &nk) in sizes.iter().enumerate() {
        for (l, &nl) in sizes.iter().enumerate() {
            let others = if k == l { nl.saturating_sub(1) } else { nl };
            pairs += nk as f64 * others as f64 * weights[k][l];
        }
    }
    d * n as f64 / pairs
}

/// Error (or catalyst gap) against `N` and `d = ceil(N^alpha)` with
/// log-log slope fits.
///
/// Design point `i` runs under the master seed `derive_seed(seed, DESIGN, i)`.
/// The slope intervals are percentile bootstrap intervals obtained by
/// resampling graphs independently at every point.
pub fn scaling_sweep(spec: &ProcessSpec, config: &SweepConfig) -> Result<SweepResult> {
    if config.n_values.len() < 4 {
        return Err(invalid("a sweep needs at least 4 values of N"));
    }
    if !(config.alpha > 0.0 && config.alpha <= 1.0) {
        return Err(invalid("alpha must lie in (0, 1]"));
    }
    let grid = TimeGrid::uniform(config.t_end, config.n_points.max(2))?;
    let mut points = Vec::with_capacity(config.n_values.len());
    for (i, &n) in config.n_values.iter().enumerate() {
        let d = (n as f64).powf(config.alpha).ceil() as usize;
        let rho = density_for_degree(n, d as f64, &config.fractions, &config.weights);
        let params = SbmParams::new(n, config.fractions.clone(), rho, config.weights.clone());
        params.validate()?;
        let point_seed = derive_seed(config.seed, stream::DESIGN, i as u64);
        let (per_graph, bound_held) = match config.metric {
            SweepMetric::ApproximationError { estimator } => {
                let ec = ErrorConfig {
                    estimator,
                    n_graphs: config.n_graphs,
                    n_replicates: config.n_replicates,
                    master_seed: point_seed,
                    bootstrap: 0,
                    solver: config.solver,
                    parallelism: config.parallelism,
                };
                (error_estimate(&GraphSource::Sbm(params), spec, &config.ic, &grid, &ec)?.per_graph, None)
            }
            SweepMetric::CatalystGap => {
                if config.n_graphs == 0 {
                    return Err(invalid("n_graphs must be at least 1"));
                }
                let gaps = map_indexed(config.n_graphs, config.parallelism, |g| {
                    let graph = sbm_generate(&params, derive_seed(point_seed, stream::GRAPH, g as u64))?;
                    let ic = config.ic.build(&graph, spec, derive_seed(point_seed, stream::INITIAL, g as u64))?;
                    catalyst_closed_form_gap(&graph, spec, &ic, config.t_end)
                })?;
                let held = gaps.iter().all(|g| g.bound_holds);
                (gaps.iter().map(|g| vec![g.gap * g.gap]).collect(), Some(held))
            }
        };
        let error = point_summary(&per_graph, None);
        points.push(SweepPoint { n, d, rho, error, se: 0.0, bound_held, per_graph });
    }

    let log_d: Vec<f64> = points.iter().map(|p| (p.d as f64).ln()).collect();
    let log_n: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let log_e = |e: &[f64]| e.iter().map(|v| v.ln()).collect::<Vec<f64>>();
    let errors: Vec<f64> = points.iter().map(|p| p.error).collect();
    let (est_d, est_n) = (ols_slope(&log_d, &log_e(&errors)), ols_slope(&log_n, &log_e(&errors)));

    let mut rng = rng_from_seed(derive_seed(config.seed, stream::BOOTSTRAP, 0));
    let mut boot_errors: Vec<Vec<f64>> = vec![Vec::with_capacity(config.bootstrap); points.len()];
    let (mut slopes_d, mut slopes_n) = (vec![], vec![]);
    for _ in 0..config.bootstrap {
        let e: Vec<f64> = points
            .iter()
            .map(|p| {
                let idx = resample(&mut rng, p.per_graph.len());
                point_summary(&p.per_graph, Some(&idx))
            })
            .collect();
        for (b, v) in boot_errors.iter_mut().zip(&e) {
            b.push(*v);
        }
        slopes_d.push(ols_slope(&log_d, &log_e(&e)));
        slopes_n.push(ols_slope(&log_n, &log_e(&e)));
    }
    for (p, b) in points.iter_mut().zip(&boot_errors) {
        p.se = if b.len() > 1 { mean_sd(b).1 } else { 0.0 };
    }
    Ok(SweepResult {
        alpha: config.alpha,
        t_end: config.t_end,
        ic_kind: config.ic.kind().to_string(),
        states: spec.states().to_vec(),
        metric: config.metric,
        points,
        slope_vs_d: interval(est_d, slopes_d),
        slope_vs_n: interval(est_n, slopes_n),
    })
}

fn point_summary(per_graph: &[Vec<f64>], idx: Option<&[usize]>) -> f64 {
    root_mean(per_graph, idx).into_iter().fold(0.0, f64::max)
}

/// 95% percentile interval; degenerate at the estimate without resamples.
fn interval(est: f64, mut samples: Vec<f64>) -> SlopeFit {
    samples.retain(|v| v.is_finite());
    if samples.is_empty() {
        return SlopeFit { est, lo: est, hi: est };
    }
    samples.sort_unstable_by(f64::total_cmp);
    SlopeFit { est, lo: quantile_sorted(&samples, 0.025), hi: quantile_sorted(&samples, 0.975) }
}
