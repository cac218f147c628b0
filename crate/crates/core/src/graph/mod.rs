//! Stochastic block model graphs and the normalized operators built on them.
//!
//! Vertices are laid out block by block: block `k` occupies the contiguous
//! range `starts[k]..starts[k] + sizes[k]`. Edge probabilities are
//! `rho * w[k][l]`, the normalized adjacency is `B = A / (N rho)` and its
//! annealed counterpart `B_hat` has entries `w[k][l] / N` everywhere,
//! diagonal included.

mod edgelist;
mod generate;
mod spectral;

pub use edgelist::{read_edge_list, write_edge_list, EdgeListFile};
pub use generate::{sbm_degrees, sbm_generate};
pub use spectral::{default_max_iter, spectral_deviation, spectral_deviation_seeded, SpectralEstimate};

use serde::{Deserialize, Serialize};

use crate::error::{check_len, invalid, Error, Result};

pub const DEFAULT_C_BLOCK: f64 = 0.05;
const FRACTION_SUM_TOL: f64 = 1e-12;

fn default_c_block() -> f64 {
    DEFAULT_C_BLOCK
}

fn is_default_c_block(c: &f64) -> bool {
    *c == DEFAULT_C_BLOCK
}

/// Parameters of a stochastic block model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SbmParams {
    pub n: usize,
    pub fractions: Vec<f64>,
    pub rho: f64,
    pub weights: Vec<Vec<f64>>,
    /// Lower bound on every block fraction.
    #[serde(default = "default_c_block", skip_serializing_if = "is_default_c_block")]
    pub c_block: f64,
    /// Optional `[m, M]`: bounds on `sum_kl w_kl pi_k pi_l`, and `M` also
    /// bounds every weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density_bounds: Option<[f64; 2]>,
}

impl SbmParams {
    pub fn new(n: usize, fractions: Vec<f64>, rho: f64, weights: Vec<Vec<f64>>) -> Self {
        SbmParams { n, fractions, rho, weights, c_block: DEFAULT_C_BLOCK, density_bounds: None }
    }

    /// Erdős–Rényi graph `G(n, rho)`.
    pub fn erdos_renyi(n: usize, rho: f64) -> Self {
        SbmParams::new(n, vec![1.0], rho, vec![vec![1.0]])
    }

    pub fn num_blocks(&self) -> usize {
        self.fractions.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.fractions.len();
        if self.n == 0 {
            return Err(invalid("graph must have at least one vertex"));
        }
        if k == 0 {
            return Err(invalid("at least one block fraction is required"));
        }
        if !(self.c_block > 0.0 && self.c_block < 1.0) {
            return Err(invalid(format!("c_block must lie in (0,1), got {}", self.c_block)));
        }
        for (i, &f) in self.fractions.iter().enumerate() {
            if !f.is_finite() || f < self.c_block {
                return Err(invalid(format!(
                    "block fraction {i} = {f} is below c_block = {}",
                    self.c_block
                )));
            }
        }
        let total: f64 = self.fractions.iter().sum();
        if (total - 1.0).abs() > FRACTION_SUM_TOL {
            return Err(invalid(format!("block fractions sum to {total}, not 1")));
        }
        if self.weights.len() != k || self.weights.iter().any(|row| row.len() != k) {
            return Err(invalid(format!("weights must be a {k}x{k} matrix")));
        }
        let mut w_max = 0.0f64;
        for a in 0..k {
            for b in 0..k {
                let w = self.weights[a][b];
                if !w.is_finite() || w < 0.0 {
                    return Err(invalid(format!("weight w[{a}][{b}] = {w} must be finite and nonnegative")));
                }
                let other = self.weights[b][a];
                if (w - other).abs() > 1e-12 * w.abs().max(1.0) {
                    return Err(invalid(format!("weights are not symmetric at ({a},{b})")));
                }
                w_max = w_max.max(w);
            }
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(invalid(format!("rho must lie in [0,1], got {}", self.rho)));
        }
        if self.rho * w_max > 1.0 + 1e-12 {
            return Err(invalid(format!(
                "edge probability rho * max w = {} exceeds 1",
                self.rho * w_max
            )));
        }
        if let Some([m, big_m]) = self.density_bounds {
            let mass: f64 = (0..k)
                .flat_map(|a| (0..k).map(move |b| (a, b)))
                .map(|(a, b)| self.weights[a][b] * self.fractions[a] * self.fractions[b])
                .sum();
            if mass < m || mass > big_m {
                return Err(invalid(format!("weight mass {mass} outside density bounds [{m}, {big_m}]")));
            }
            if w_max > big_m {
                return Err(invalid(format!("weight {w_max} exceeds bound M = {big_m}")));
            }
        }
        Ok(())
    }

    /// Realized block layout for these parameters.
    pub fn block_model(&self) -> Result<BlockModel> {
        self.validate()?;
        let sizes = largest_remainder_sizes(self.n, &self.fractions);
        if let Some(k) = sizes.iter().position(|&s| s == 0) {
            return Err(invalid(format!("block {k} is empty for n = {}", self.n)));
        }
        BlockModel::new(sizes, self.flat_weights(), self.rho)
    }

    fn flat_weights(&self) -> Vec<f64> {
        self.weights.iter().flatten().copied().collect()
    }
}

/// Block sizes `round(pi_k n)` with largest-remainder correction so that they
/// sum to `n`. Ties go to the lower block index.
pub fn largest_remainder_sizes(n: usize, fractions: &[f64]) -> Vec<usize> {
    let raw: Vec<f64> = fractions.iter().map(|&f| f * n as f64).collect();
    let mut sizes: Vec<usize> = raw.iter().map(|&r| r.floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();
    let mut order: Vec<usize> = (0..fractions.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = raw[a] - raw[a].floor();
        let rb = raw[b] - raw[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    if assigned <= n {
        for &k in order.iter().cycle().take(n - assigned) {
            sizes[k] += 1;
        }
    } else {
        // only reachable through rounding noise in the fractions
        for &k in order.iter().rev().cycle().take(assigned - n) {
            sizes[k] -= 1;
        }
    }
    sizes
}

/// Realized block structure: sizes, weights and density.
///
/// Fractions used by the annealed operator and the block-level ODEs are the
/// realized ones, `N_k / N`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockModel {
    n: usize,
    sizes: Vec<usize>,
    starts: Vec<usize>,
    weights: Vec<f64>,
    rho: f64,
}

impl BlockModel {
    pub fn new(sizes: Vec<usize>, weights: Vec<f64>, rho: f64) -> Result<Self> {
        let k = sizes.len();
        if k == 0 {
            return Err(invalid("block model needs at least one block"));
        }
        check_len(k * k, weights.len())?;
        let mut starts = Vec::with_capacity(k);
        let mut acc = 0;
        for &s in &sizes {
            starts.push(acc);
            acc += s;
        }
        Ok(BlockModel { n: acc, sizes, starts, weights, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn weight(&self, k: usize, l: usize) -> f64 {
        self.weights[k * self.sizes.len() + l]
    }

    /// Realized fraction `pi_l = N_l / N`.
    pub fn fraction(&self, l: usize) -> f64 {
        self.sizes[l] as f64 / self.n as f64
    }

    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        self.starts[k]..self.starts[k] + self.sizes[k]
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.starts.partition_point(|&s| s <= i) - 1
    }

    /// Edge probability between blocks `k` and `l`.
    pub fn edge_probability(&self, k: usize, l: usize) -> f64 {
        (self.rho * self.weight(k, l)).min(1.0)
    }

    /// Expected degree `d_i = sum_{j != i} p_ij` of a vertex in block `k`.
    pub fn expected_degree(&self, k: usize) -> f64 {
        (0..self.num_blocks())
            .map(|l| {
                let others = self.sizes[l] - usize::from(k == l);
                self.rho * self.weight(k, l) * others as f64
            })
            .sum()
    }

    /// Expected average degree `d`.
    pub fn expected_average_degree(&self) -> f64 {
        (0..self.num_blocks())
            .map(|k| self.sizes[k] as f64 * self.expected_degree(k))
            .sum::<f64>()
            / self.n as f64
    }

    /// Largest row sum of `B_hat`, `max_k sum_l w_kl pi_l`.
    pub fn annealed_row_bound(&self) -> f64 {
        (0..self.num_blocks())
            .map(|k| (0..self.num_blocks()).map(|l| self.weight(k, l) * self.fraction(l)).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Block sums of `v`.
    pub fn block_sums(&self, v: &[f64]) -> Vec<f64> {
        (0..self.num_blocks()).map(|k| v[self.block_range(k)].iter().sum()).collect()
    }

    /// Writes `B_hat v` into `out` in `O(N + K^2)`.
    pub fn annealed_apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.n, v.len())?;
        check_len(self.n, out.len())?;
        let sums = self.block_sums(v);
        let inv_n = 1.0 / self.n as f64;
        for k in 0..self.num_blocks() {
            let value: f64 =
                (0..self.num_blocks()).map(|l| self.weight(k, l) * sums[l]).sum::<f64>() * inv_n;
            out[self.block_range(k)].fill(value);
        }
        Ok(())
    }
}

/// `B_hat v` where `(B_hat v)_i = sum_l w_kl pi_l mean_l(v)` for `i` in block `k`.
pub fn annealed_matrix_apply(model: &BlockModel, v: &[f64]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; model.n()];
    model.annealed_apply_into(v, &mut out)?;
    Ok(out)
}

/// A realized simple undirected graph with its block structure.
///
/// Adjacency is stored in compressed sparse rows with sorted neighbor lists.
#[derive(Clone, Debug)]
pub struct Graph {
    params: SbmParams,
    model: BlockModel,
    block_of: Vec<u32>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    seed: Option<u64>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model
            && self.offsets == other.offsets
            && self.neighbors == other.neighbors
            && self.params == other.params
    }
}

impl Graph {
    /// Builds a graph from an explicit edge list over the layout of `params`.
    pub fn from_edges(params: SbmParams, edges: &[(u32, u32)], seed: Option<u64>) -> Result<Self> {
        let model = params.block_model()?;
        Graph::from_model_edges(params, model, edges, seed)
    }

    pub(crate) fn from_model_edges(
        params: SbmParams,
        model: BlockModel,
        edges: &[(u32, u32)],
        seed: Option<u64>,
    ) -> Result<Self> {
        let n = model.n();
        if n > u32::MAX as usize {
            return Err(Error::Capacity(format!("{n} vertices exceed the u32 index range")));
        }
        let mut degree = vec![0usize; n];
        for &(i, j) in edges {
            let (i, j) = (i as usize, j as usize);
            if i >= n || j >= n {
                return Err(invalid(format!("edge ({i},{j}) references a vertex outside 0..{n}")));
            }
            if i == j {
                return Err(invalid(format!("self loop at vertex {i}")));
            }
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(i, j) in edges {
            neighbors[cursor[i as usize]] = j;
            cursor[i as usize] += 1;
            neighbors[cursor[j as usize]] = i;
            cursor[j as usize] += 1;
        }
        for i in 0..n {
            let row = &mut neighbors[offsets[i]..offsets[i + 1]];
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("duplicate edge at vertex {i}")));
            }
        }
        let mut block_of = vec![0u32; n];
        for k in 0..model.num_blocks() {
            block_of[model.block_range(k)].fill(k as u32);
        }
        Ok(Graph { params, model, block_of, offsets, neighbors, seed })
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn params(&self) -> &SbmParams {
        &self.params
    }

    pub fn model(&self) -> &BlockModel {
        &self.model
    }

    pub fn rho(&self) -> f64 {
        self.model.rho()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn num_blocks(&self) -> usize {
        self.model.num_blocks()
    }

    pub fn block_sizes(&self) -> &[usize] {
        self.model.sizes()
    }

    #[inline]
    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i] as usize
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.neighbors(i).iter().filter(move |&&j| (j as usize) > i).map(move |&j| (i as u32, j))
        })
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    /// `1 / (N rho)`, or zero for an edgeless model with `rho = 0`.
    pub fn interaction_scale(&self) -> f64 {
        let rho = self.rho();
        if rho > 0.0 {
            1.0 / (self.n() as f64 * rho)
        } else {
            0.0
        }
    }

    /// Writes `B v = A v / (N rho)` into `out`.
    pub fn normalized_apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        if self.rho() <= 0.0 {
            return Err(invalid("normalized adjacency requires rho > 0"));
        }
        check_len(self.n(), v.len())?;
        check_len(self.n(), out.len())?;
        let scale = self.interaction_scale();
        for (i, o) in out.iter_mut().enumerate() {
            let s: f64 = self.neighbors(i).iter().map(|&j| v[j as usize]).sum();
            *o = s * scale;
        }
        Ok(())
    }

    pub fn degree_stats(&self) -> DegreeStats {
        degree_stats(self)
    }
}

/// Realized and expected degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeStats {
    pub realized: Vec<usize>,
    pub expected: Vec<f64>,
    /// Expected average degree.
    pub d: f64,
    /// Maximal expected degree.
    pub max_expected: f64,
}

pub fn degree_stats(graph: &Graph) -> DegreeStats {
    let model = graph.model();
    let realized = (0..graph.n()).map(|i| graph.degree(i)).collect();
    let per_block: Vec<f64> = (0..model.num_blocks()).map(|k| model.expected_degree(k)).collect();
    let expected: Vec<f64> = (0..graph.n()).map(|i| per_block[graph.block_of(i)]).collect();
    let d = model.expected_average_degree();
    let max_expected = per_block.iter().copied().fold(0.0, f64::max);
    DegreeStats { realized, expected, d, max_expected }
}

/// `B v` without materializing `B`.
pub fn normalized_adjacency_apply(graph: &Graph, v: &[f64]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; graph.n()];
    graph.normalized_apply_into(v, &mut out)?;
    Ok(out)
}
