use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{default_max_iter, spectral_deviation, Graph, SpectralEstimate};
use crate::grid::TimeGrid;
use crate::initcond::InitialCondition;
use crate::meanfield::{annealed_nimfa_solve, bhmfa_solve, nimfa_solve, OdeSolution, SolverOptions};
use crate::process::ProcessSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    pub solver: SolverOptions,
    /// Degree event constant; by default `1 + D / d`, which is 2 on
    /// Erdos-Renyi graphs.
    pub c1_prime: Option<f64>,
    /// Spectral event constant.
    pub c1: f64,
    pub spectral_tol: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig { solver: SolverOptions::default(), c1_prime: None, c1: 3.0, spectral_tol: 1e-6 }
    }
}

/// Decomposition of the mean-field error on one graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub time_grid: TimeGrid,
    /// `(1/N) sum_i Dtilde_i(t)^2` where `Dtilde_i(t)` is the running sup
    /// over grid times `<= t` of `max_s |z_{i,s} - zhat_{i,s}|`.
    pub delta_rms: Vec<f64>,
    /// Same for `zhat - ztilde`, with `ztilde` the annealed solution from
    /// the block means.
    pub delta_star_rms: Vec<f64>,
    /// `|zbar_{k,s}(t) - x_{k,s}(t)|`, `[g][k][s]`.
    pub h: Vec<f64>,
    pub n_blocks: usize,
    pub n_states: usize,
    pub max_degree: usize,
    pub d: f64,
    pub c1_prime: f64,
    pub c1: f64,
    pub spectral: SpectralEstimate,
    /// `max_i delta_i <= c1' d`
    pub degree_event: bool,
    /// `||B - B_hat|| <= c1 / sqrt(d)`
    pub spectral_event: bool,
    /// Both of the above.
    pub joint_event: bool,
}

pub fn diagnostics(
    graph: &Graph,
    spec: &ProcessSpec,
    ic: &InitialCondition,
    grid: &TimeGrid,
    config: &DiagnosticsConfig,
) -> Result<DiagnosticsReport> {
    let model = graph.model();
    let z = nimfa_solve(graph, spec, ic, grid, &config.solver)?;
    let z_hat = annealed_nimfa_solve(model, spec, ic, grid, &config.solver)?;
    let x0 = ic.block_means(model)?;
    let flat = InitialCondition::new(
        ic.n_states(),
        (0..graph.n()).flat_map(|i| x0[graph.block_of(i) * ic.n_states()..][..ic.n_states()].to_vec()).collect(),
        "block means",
    )?;
    let z_tilde = annealed_nimfa_solve(model, spec, &flat, grid, &config.solver)?;
    let x = bhmfa_solve(model, spec, &x0, grid, &config.solver)?;

    let delta_rms = running_sup_rms(&z, &z_hat);
    let delta_star_rms = running_sup_rms(&z_hat, &z_tilde);
    let h: Vec<f64> = z.block_averages(model)?.iter().zip(&x.values).map(|(a, b)| (a - b).abs()).collect();

    let stats = graph.degree_stats();
    let d = stats.d;
    let c1_prime = config.c1_prime.unwrap_or(if d > 0.0 { 1.0 + stats.max_expected / d } else { 2.0 });
    let max_degree = graph.max_degree();
    let spectral = spectral_deviation(graph, config.spectral_tol, default_max_iter(graph.n(), config.spectral_tol))?;
    let degree_event = max_degree as f64 <= c1_prime * d;
    let spectral_event = d > 0.0 && spectral.value <= config.c1 / d.sqrt();
    Ok(DiagnosticsReport {
        time_grid: grid.clone(),
        delta_rms,
        delta_star_rms,
        h,
        n_blocks: graph.num_blocks(),
        n_states: ic.n_states(),
        max_degree,
        d,
        c1_prime,
        c1: config.c1,
        spectral,
        degree_event,
        spectral_event,
        joint_event: degree_event && spectral_event,
    })
}

fn running_sup_rms(a: &OdeSolution, b: &OdeSolution) -> Vec<f64> {
    let (n, s) = (a.n_units, a.n_states);
    let mut sup = vec![0.0f64; n];
    (0..a.time_grid.len())
        .map(|g| {
            for (i, (ra, rb)) in a.at(g).chunks(s).zip(b.at(g).chunks(s)).enumerate() {
                let m = ra.iter().zip(rb).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
                sup[i] = sup[i].max(m);
            }
            sup.iter().map(|v| v * v).sum::<f64>() / n as f64
        })
        .collect()
}
