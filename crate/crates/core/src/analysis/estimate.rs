use serde::{Deserialize, Serialize};

use super::closed_form::degree_error_exact;
use super::stats::{canonical_sum, mean_sd, resample};
use crate::error::{check_len, invalid, Error, Result};
use crate::graph::{sbm_degrees, sbm_generate, BlockModel, Graph, SbmParams};
use crate::grid::TimeGrid;
use crate::initcond::IcSpec;
use crate::meanfield::{bhmfa_solve, SolverOptions};
use crate::parallel::{map_indexed, Parallelism};
use crate::process::{ClosedFormTag, ProcessSpec};
use crate::rng::{derive_seed, rng_from_seed, stream};
use crate::simulate::{gillespie_ensemble, TrajectorySample};

/// Where the graphs of an error estimate come from.
#[derive(Clone, Debug)]
pub enum GraphSource {
    /// A fresh block model sample per graph index.
    Sbm(SbmParams),
    /// The same graph every time; only initial states and dynamics vary.
    Fixed(Graph),
}

impl GraphSource {
    fn model(&self) -> Result<BlockModel> {
        match self {
            GraphSource::Sbm(p) => p.block_model(),
            GraphSource::Fixed(g) => Ok(g.model().clone()),
        }
    }

    fn graph(&self, seed: u64) -> Result<std::borrow::Cow<'_, Graph>> {
        match self {
            GraphSource::Sbm(p) => sbm_generate(p, seed).map(std::borrow::Cow::Owned),
            GraphSource::Fixed(g) => Ok(std::borrow::Cow::Borrowed(g)),
        }
    }
}

/// How the error on one graph is obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Gillespie replicates against the block-level ODE.
    #[default]
    MonteCarlo,
    /// Degree process only: given the graph, vertices are independent with
    /// known survival probabilities, so the conditional mean squared error
    /// is exact and only graphs are sampled.
    Conditional,
    /// Degree process from `z_a(0) = 1` on an Erdos-Renyi model: no sampling.
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ErrorConfig {
    pub estimator: Estimator,
    pub n_graphs: usize,
    pub n_replicates: usize,
    pub master_seed: u64,
    pub bootstrap: usize,
    pub solver: SolverOptions,
    #[serde(skip)]
    pub parallelism: Parallelism,
}

impl Default for ErrorConfig {
    fn default() -> Self {
        ErrorConfig {
            estimator: Estimator::MonteCarlo,
            n_graphs: 10,
            n_replicates: 100,
            master_seed: 0,
            bootstrap: 1000,
            solver: SolverOptions::default(),
            parallelism: Parallelism::default(),
        }
    }
}

/// Root mean squared deviation between the block averages and the
/// block-level solution, per grid time, block and state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub estimator: Estimator,
    pub time_grid: TimeGrid,
    pub n_blocks: usize,
    pub n_states: usize,
    /// `[g][k][s]`
    pub estimate: Vec<f64>,
    /// Graph-level bootstrap standard error, same layout.
    pub se: Vec<f64>,
    /// Largest estimate over the grid, blocks and states.
    pub summary: f64,
    /// Bootstrap standard error of `summary` as a statistic.
    pub summary_se: f64,
    /// `(g, k, s)` of the summary.
    pub summary_cell: (usize, usize, usize),
    pub n_graphs: usize,
    pub n_replicates: usize,
    /// Mean squared error of each graph in canonical order.
    #[serde(skip)]
    pub per_graph: Vec<Vec<f64>>,
}

impl ErrorReport {
    /// Aggregates per-graph mean squared errors.
    ///
    /// Graphs are sorted into a canonical order first, so the report does
    /// not depend on the order of `per_graph`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_per_graph(
        estimator: Estimator,
        time_grid: TimeGrid,
        n_blocks: usize,
        n_states: usize,
        mut per_graph: Vec<Vec<f64>>,
        n_replicates: usize,
        bootstrap: usize,
        seed: u64,
    ) -> Result<Self> {
        let width = time_grid.len() * n_blocks * n_states;
        if per_graph.is_empty() {
            return Err(invalid("no graphs to aggregate"));
        }
        for row in &per_graph {
            check_len(width, row.len())?;
        }
        per_graph.sort_by(|a, b| {
            a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        let estimate = root_mean(&per_graph, None);
        let (summary, cell) = argmax(&estimate);
        let n = per_graph.len();
        let mut se = vec![0.0; width];
        let mut summary_se = 0.0;
        if bootstrap > 1 && n > 1 {
            let mut rng = rng_from_seed(derive_seed(seed, stream::BOOTSTRAP, 0));
            let mut cells: Vec<Vec<f64>> = vec![Vec::with_capacity(bootstrap); width];
            let mut maxima = Vec::with_capacity(bootstrap);
            for _ in 0..bootstrap {
                let idx = resample(&mut rng, n);
                let est = root_mean(&per_graph, Some(&idx));
                maxima.push(argmax(&est).0);
                for (c, v) in cells.iter_mut().zip(est) {
                    c.push(v);
                }
            }
            se = cells.iter().map(|c| mean_sd(c).1).collect();
            summary_se = mean_sd(&maxima).1;
        }
        let (k, s) = (n_blocks, n_states);
        Ok(ErrorReport {
            estimator,
            time_grid,
            n_blocks,
            n_states,
            estimate,
            se,
            summary,
            summary_se,
            summary_cell: (cell / (k * s), (cell / s) % k, cell % s),
            n_graphs: n,
            n_replicates,
            per_graph,
        })
    }

    pub fn cell(&self, g: usize, k: usize, s: usize) -> (f64, f64) {
        let idx = (g * self.n_blocks + k) * self.n_states + s;
        (self.estimate[idx], self.se[idx])
    }

    /// `sup` over the grid of the estimate for block `k` and state `s`.
    pub fn sup_over_grid(&self, k: usize, s: usize) -> f64 {
        (0..self.time_grid.len()).map(|g| self.cell(g, k, s).0).fold(0.0, f64::max)
    }
}

/// `sqrt(mean over graphs)` per cell, optionally over a resample.
pub(crate) fn root_mean(per_graph: &[Vec<f64>], idx: Option<&[usize]>) -> Vec<f64> {
    let width = per_graph[0].len();
    let mut sum = vec![0.0; width];
    let count = match idx {
        Some(idx) => {
            for &i in idx {
                sum.iter_mut().zip(&per_graph[i]).for_each(|(a, b)| *a += b);
            }
            idx.len()
        }
        None => {
            for row in per_graph {
                sum.iter_mut().zip(row).for_each(|(a, b)| *a += b);
            }
            per_graph.len()
        }
    };
    sum.iter().map(|s| (s / count as f64).max(0.0).sqrt()).collect()
}

fn argmax(v: &[f64]) -> (f64, usize) {
    v.iter().enumerate().fold((f64::NEG_INFINITY, 0), |best, (i, &x)| if x > best.0 { (x, i) } else { best })
}

/// Mean over replicates of `(xbar - x)^2` per cell, summed in canonical
/// order so that the replicate order does not matter.
pub fn per_graph_mse(samples: &[TrajectorySample], x: &[f64]) -> Result<Vec<f64>> {
    let first = samples.first().ok_or_else(|| invalid("no replicates"))?;
    check_len(first.counts.len(), x.len())?;
    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(samples.len()); x.len()];
    for sample in samples {
        check_len(x.len(), sample.counts.len())?;
        for ((col, xbar), xv) in columns.iter_mut().zip(sample.block_averages()).zip(x) {
            col.push((xbar - xv).powi(2));
        }
    }
    Ok(columns.iter_mut().map(|c| canonical_sum(c) / samples.len() as f64).collect())
}

/// Estimates the approximation error over graphs, initial states and
/// dynamics.
///
/// Graph `g` is drawn from `derive_seed(master, GRAPH, g)`, its initial
/// condition generator gets `derive_seed(master, INITIAL, g)` and its
/// replicates derive from `derive_seed(master, DYNAMICS, g)`.
pub fn error_estimate(
    source: &GraphSource,
    spec: &ProcessSpec,
    ic: &IcSpec,
    grid: &TimeGrid,
    config: &ErrorConfig,
) -> Result<ErrorReport> {
    if config.n_graphs == 0 {
        return Err(invalid("n_graphs must be at least 1"));
    }
    let model = source.model()?;
    let (k, s) = (model.num_blocks(), spec.n_states());
    let master = config.master_seed;
    let per_graph = match config.estimator {
        Estimator::MonteCarlo => {
            if config.n_graphs * config.n_replicates < 2 {
                return Err(invalid("n_graphs * n_replicates must be at least 2"));
            }
            map_indexed(config.n_graphs, config.parallelism, |g| {
                let graph = source.graph(derive_seed(master, stream::GRAPH, g as u64))?;
                let ic = ic.build(&graph, spec, derive_seed(master, stream::INITIAL, g as u64))?;
                let x0 = ic.block_means(graph.model())?;
                let x = bhmfa_solve(graph.model(), spec, &x0, grid, &config.solver)?;
                let samples = gillespie_ensemble(
                    &graph,
                    spec,
                    &ic,
                    grid,
                    config.n_replicates,
                    derive_seed(master, stream::DYNAMICS, g as u64),
                    Parallelism::sequential(),
                )?;
                per_graph_mse(&samples, &x.values)
            })?
        }
        Estimator::Conditional => {
            let (a, rate) = match spec.closed_form_tag() {
                ClosedFormTag::Degree { a, rate, .. } => (a, rate),
                _ => return Err(Error::Unsupported("the conditional estimator needs the degree process".into())),
            };
            map_indexed(config.n_graphs, config.parallelism, |g| {
                let graph_seed = derive_seed(master, stream::GRAPH, g as u64);
                let (degrees, z_a) = match (source, ic.block_rows(k, spec)) {
                    (GraphSource::Sbm(params), Some(rows)) => {
                        let rows = rows?;
                        let z_a: Vec<f64> = model.sizes().iter().zip(&rows).flat_map(|(&n, r)| std::iter::repeat(r[a]).take(n)).collect();
                        (sbm_degrees(params, graph_seed)?, z_a)
                    }
                    _ => {
                        let graph = source.graph(graph_seed)?;
                        let ic = ic.build(&graph, spec, derive_seed(master, stream::INITIAL, g as u64))?;
                        ((0..graph.n()).map(|i| graph.degree(i) as u32).collect(), ic.column(a))
                    }
                };
                conditional_degree_mse(&model, &degrees, &z_a, a, s, rate, grid)
            })?
        }
        Estimator::ClosedForm => {
            let (a, rate) = match spec.closed_form_tag() {
                ClosedFormTag::Degree { a, rate, .. } => (a, rate),
                _ => return Err(Error::Unsupported("the closed form covers the degree process only".into())),
            };
            let rows = ic.block_rows(k, spec).transpose()?;
            if k != 1 || rows.as_ref().map_or(true, |r| r[0][a] != 1.0) {
                return Err(Error::Unsupported(
                    "the closed form needs a single block and every vertex starting in the leaving state".into(),
                ));
            }
            // same normalization as the simulator: rate delta / (N rho) against
            // x = exp(-rate w t), rather than the d = (N - 1) p convention
            let n = model.n();
            let p = model.edge_probability(0, 0);
            let w = model.weight(0, 0);
            let mut row = Vec::with_capacity(grid.len() * s);
            for &t in grid.times() {
                let e = degree_error_exact(n, p, rate * w * t, 1.0 / (n as f64 * p))?;
                row.extend(std::iter::repeat(e * e).take(s));
            }
            vec![row]
        }
    };
    let n_replicates = if config.estimator == Estimator::MonteCarlo { config.n_replicates } else { 0 };
    ErrorReport::from_per_graph(config.estimator, grid.clone(), k, s, per_graph, n_replicates, config.bootstrap, master)
}

/// Exact `E_G (xbar - x)^2` for the degree process given the degrees.
fn conditional_degree_mse(
    model: &BlockModel,
    degrees: &[u32],
    z_a: &[f64],
    a: usize,
    s: usize,
    rate: f64,
    grid: &TimeGrid,
) -> Result<Vec<f64>> {
    check_len(model.n(), degrees.len())?;
    let k_count = model.num_blocks();
    let scale = if model.rho() > 0.0 { 1.0 / (model.n() as f64 * model.rho()) } else { 0.0 };
    let mut out = Vec::with_capacity(grid.len() * k_count * s);
    for &t in grid.times() {
        for k in 0..k_count {
            let range = model.block_range(k);
            let size = range.len() as f64;
            let x0: f64 = z_a[range.clone()].iter().sum::<f64>() / size;
            let coupling: f64 = (0..k_count).map(|l| model.weight(k, l) * model.fraction(l)).sum();
            let x = x0 * (-rate * t * coupling).exp();
            let (mut mean, mut var) = (0.0, 0.0);
            for i in range {
                let e = z_a[i] * (-rate * degrees[i] as f64 * t * scale).exp();
                mean += e;
                var += e * (1.0 - e);
            }
            mean /= size;
            let mse = var / (size * size) + (mean - x).powi(2);
            // with two states the other block average is 1 - xbar
            out.extend((0..s).map(|st| if st == a || s == 2 { mse } else { 0.0 }));
        }
    }
    Ok(out)
}
