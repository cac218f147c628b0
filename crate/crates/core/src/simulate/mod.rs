//! Stochastic simulation of the interaction process and the exact master
//! equation for tiny graphs.

mod gillespie;
mod master;
mod sumtree;

pub use gillespie::{gillespie_run, Simulator, REFRESH_INTERVAL};
pub use master::{master_equation_solve, MasterSolution, MASTER_CAPACITY};
pub use sumtree::SumTree;

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::grid::TimeGrid;
use crate::initcond::{sample_states, InitialCondition};
use crate::parallel::{map_indexed, Parallelism};
use crate::process::ProcessSpec;
use crate::rng::{derive_seed, rng_from_seed, stream};

/// Block counts of one simulated path at the grid times.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySample {
    pub time_grid: TimeGrid,
    pub block_sizes: Vec<usize>,
    pub n_states: usize,
    /// Row-major `[g][k][s]`.
    pub counts: Vec<u32>,
    pub seed: u64,
    pub replicate: usize,
}

impl TrajectorySample {
    pub fn new(
        time_grid: TimeGrid,
        block_sizes: Vec<usize>,
        n_states: usize,
        counts: Vec<u32>,
        seed: u64,
        replicate: usize,
    ) -> Self {
        debug_assert_eq!(counts.len(), time_grid.len() * block_sizes.len() * n_states);
        TrajectorySample { time_grid, block_sizes, n_states, counts, seed, replicate }
    }

    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    /// `xi_bar_{k,s}(t_g)`
    pub fn block_average(&self, g: usize, k: usize, s: usize) -> f64 {
        let width = self.num_blocks() * self.n_states;
        self.counts[g * width + k * self.n_states + s] as f64 / self.block_sizes[k] as f64
    }

    /// All block averages, row-major `[g][k][s]`.
    pub fn block_averages(&self) -> Vec<f64> {
        let s = self.n_states;
        let k_count = self.num_blocks();
        self.counts
            .iter()
            .enumerate()
            .map(|(idx, &c)| c as f64 / self.block_sizes[(idx / s) % k_count] as f64)
            .collect()
    }
}

/// Independent replicates on one graph; replicate `r` draws its initial
/// states and its dynamics from seeds derived from `(master_seed, r)`.
///
/// The output does not depend on `parallelism`.
pub fn gillespie_ensemble(
    graph: &Graph,
    spec: &ProcessSpec,
    ic: &InitialCondition,
    grid: &TimeGrid,
    n_replicates: usize,
    master_seed: u64,
    parallelism: Parallelism,
) -> Result<Vec<TrajectorySample>> {
    if n_replicates == 0 {
        return Err(invalid("n_replicates must be at least 1"));
    }
    if ic.n_states() != spec.n_states() {
        return Err(invalid(format!(
            "initial condition has {} states, process has {}",
            ic.n_states(),
            spec.n_states()
        )));
    }
    map_indexed(n_replicates, parallelism, |r| {
        let initial = sample_states(ic, &mut rng_from_seed(derive_seed(master_seed, stream::INITIAL, r as u64)));
        let seed = derive_seed(master_seed, stream::DYNAMICS, r as u64);
        let mut sample = gillespie_run(graph, spec, &initial, grid, seed)?;
        sample.replicate = r;
        Ok(sample)
    })
}

/// Mean and standard error of the block averages over replicates, each
/// row-major `[g][k][s]`.
pub fn ensemble_mean(samples: &[TrajectorySample]) -> (Vec<f64>, Vec<f64>) {
    let n = samples.len() as f64;
    let width = samples.first().map_or(0, |s| s.counts.len());
    let mut sum = vec![0.0; width];
    let mut sum_sq = vec![0.0; width];
    for sample in samples {
        for (idx, x) in sample.block_averages().into_iter().enumerate() {
            sum[idx] += x;
            sum_sq[idx] += x * x;
        }
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let se = sum_sq
        .iter()
        .zip(&mean)
        .map(|(sq, m)| {
            if n > 1.0 {
                ((sq / n - m * m).max(0.0) * n / (n - 1.0) / n).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    (mean, se)
}
