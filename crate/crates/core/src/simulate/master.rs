use crate::error::{check_len, invalid, Error, Result};
use crate::graph::Graph;
use crate::grid::TimeGrid;
use crate::initcond::InitialCondition;
use crate::process::ProcessSpec;

/// Largest configuration space `S^N` the master equation will enumerate.
pub const MASTER_CAPACITY: usize = 200_000;

/// Exact first and second moments of the block averages.
#[derive(Clone, Debug, PartialEq)]
pub struct MasterSolution {
    pub time_grid: TimeGrid,
    pub block_sizes: Vec<usize>,
    pub n_states: usize,
    /// `E[xi_bar_{k,s}(t_g)]`, row-major `[g][k][s]`.
    pub means: Vec<f64>,
    /// `E[xi_bar_{k,s}(t_g)^2]`, same layout.
    pub second_moments: Vec<f64>,
    pub step: f64,
    /// Largest deviation of the total probability from 1, or of a
    /// probability below 0, seen at the grid times.
    pub max_simplex_violation: f64,
}

impl MasterSolution {
    pub fn mean(&self, g: usize, k: usize, s: usize) -> f64 {
        self.means[(g * self.block_sizes.len() + k) * self.n_states + s]
    }

    pub fn variance(&self, g: usize, k: usize, s: usize) -> f64 {
        let idx = (g * self.block_sizes.len() + k) * self.n_states + s;
        (self.second_moments[idx] - self.means[idx].powi(2)).max(0.0)
    }

    /// `sqrt(E[(xi_bar - x)^2])` for a deterministic reference `x`, same layout.
    pub fn rms_error_against(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.means.len(), x.len())?;
        Ok(self
            .means
            .iter()
            .zip(&self.second_moments)
            .zip(x)
            .map(|((m, m2), x)| (m2 - 2.0 * x * m + x * x).max(0.0).sqrt())
            .collect())
    }
}

/// Sparse generator over the `S^N` configurations, base-`S` encoded with
/// vertex `i` as digit `i`.
struct Generator {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    rates: Vec<f64>,
    outflow: Vec<f64>,
}

impl Generator {
    fn build(graph: &Graph, spec: &ProcessSpec, configs: usize) -> Generator {
        let n = graph.n();
        let s = spec.n_states();
        let scale = graph.interaction_scale();
        let powers: Vec<usize> = (0..n).map(|i| s.pow(i as u32)).collect();
        let mut offsets = Vec::with_capacity(configs + 1);
        let mut targets = Vec::new();
        let mut rates = Vec::new();
        let mut outflow = Vec::with_capacity(configs);
        let mut digits = vec![0usize; n];
        offsets.push(0);
        for c in 0..configs {
            let mut rest = c;
            for d in digits.iter_mut() {
                *d = rest % s;
                rest /= s;
            }
            let mut out = 0.0;
            for i in 0..n {
                let own = digits[i];
                for to in (0..s).filter(|&to| to != own) {
                    let inter: f64 =
                        graph.neighbors(i).iter().map(|&j| spec.interaction(digits[j as usize], own, to)).sum();
                    let rate = spec.spontaneous(own, to) + scale * inter;
                    if rate > 0.0 {
                        let target = c + to * powers[i] - own * powers[i];
                        targets.push(target as u32);
                        rates.push(rate);
                        out += rate;
                    }
                }
            }
            outflow.push(out);
            offsets.push(targets.len());
        }
        Generator { offsets, targets, rates, outflow }
    }

    /// `dp = Q^T p`
    fn apply(&self, p: &[f64], dp: &mut [f64]) {
        dp.fill(0.0);
        for (c, &pc) in p.iter().enumerate() {
            if pc == 0.0 {
                continue;
            }
            dp[c] -= self.outflow[c] * pc;
            for e in self.offsets[c]..self.offsets[c + 1] {
                dp[self.targets[e] as usize] += self.rates[e] * pc;
            }
        }
    }
}

/// Integrates the forward equation over every configuration, starting from
/// the product law of `ic`, and returns exact block moments at the grid times.
pub fn master_equation_solve(
    graph: &Graph,
    spec: &ProcessSpec,
    ic: &InitialCondition,
    grid: &TimeGrid,
) -> Result<MasterSolution> {
    let n = graph.n();
    let s = spec.n_states();
    check_len(n, ic.n())?;
    if ic.n_states() != s {
        return Err(invalid(format!("initial condition has {} states, process has {s}", ic.n_states())));
    }
    let configs = (s as u128).checked_pow(n as u32).filter(|&c| c <= MASTER_CAPACITY as u128).ok_or_else(|| {
        Error::Capacity(format!("{s}^{n} configurations exceed the master-equation cap of {MASTER_CAPACITY}"))
    })? as usize;
    let generator = Generator::build(graph, spec, configs);

    let mut p = vec![1.0; configs];
    let mut digits = vec![0usize; n];
    for (c, pc) in p.iter_mut().enumerate() {
        let mut rest = c;
        for d in digits.iter_mut() {
            *d = rest % s;
            rest /= s;
        }
        for (i, &d) in digits.iter().enumerate() {
            *pc *= ic.row(i)[d];
        }
    }

    let max_out = generator.outflow.iter().copied().fold(0.0, f64::max);
    let k_count = graph.num_blocks();
    let width = k_count * s;
    let mut means = Vec::with_capacity(grid.len() * width);
    let mut second = Vec::with_capacity(grid.len() * width);
    let mut violation: f64 = 0.0;
    let mut step: f64 = 0.0;
    let mut ws = Rk4Workspace::new(configs);
    let times = grid.times();
    for g in 0..times.len() {
        if g > 0 {
            let span = times[g] - times[g - 1];
            if max_out > 0.0 {
                // h * max_out <= 0.1, and h <= 0.01 as for the mean-field solvers
                let steps = (span * (max_out / 0.1).max(100.0)).ceil().max(1.0) as usize;
                let h = span / steps as f64;
                step = step.max(h);
                for _ in 0..steps {
                    ws.step(&generator, &mut p, h);
                }
            }
        }
        let total: f64 = p.iter().sum();
        let negative = p.iter().copied().fold(0.0, f64::min);
        violation = violation.max((total - 1.0).abs()).max(-negative);
        let (m, m2) = block_moments(graph, s, &p, &mut digits);
        means.extend(m);
        second.extend(m2);
    }
    Ok(MasterSolution {
        time_grid: grid.clone(),
        block_sizes: graph.block_sizes().to_vec(),
        n_states: s,
        means,
        second_moments: second,
        step,
        max_simplex_violation: violation,
    })
}

fn block_moments(graph: &Graph, s: usize, p: &[f64], digits: &mut [usize]) -> (Vec<f64>, Vec<f64>) {
    let k_count = graph.num_blocks();
    let width = k_count * s;
    let mut m = vec![0.0; width];
    let mut m2 = vec![0.0; width];
    let mut frac = vec![0.0; width];
    for (c, &pc) in p.iter().enumerate() {
        if pc == 0.0 {
            continue;
        }
        let mut rest = c;
        for d in digits.iter_mut() {
            *d = rest % s;
            rest /= s;
        }
        frac.fill(0.0);
        for (i, &d) in digits.iter().enumerate() {
            frac[graph.block_of(i) * s + d] += 1.0;
        }
        for (idx, f) in frac.iter().enumerate() {
            let x = f / graph.block_sizes()[idx / s] as f64;
            m[idx] += pc * x;
            m2[idx] += pc * x * x;
        }
    }
    (m, m2)
}

struct Rk4Workspace {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4Workspace {
    fn new(n: usize) -> Self {
        Rk4Workspace { k1: vec![0.0; n], k2: vec![0.0; n], k3: vec![0.0; n], k4: vec![0.0; n], tmp: vec![0.0; n] }
    }

    fn step(&mut self, q: &Generator, p: &mut [f64], h: f64) {
        q.apply(p, &mut self.k1);
        axpy_into(&mut self.tmp, p, 0.5 * h, &self.k1);
        q.apply(&self.tmp, &mut self.k2);
        axpy_into(&mut self.tmp, p, 0.5 * h, &self.k2);
        q.apply(&self.tmp, &mut self.k3);
        axpy_into(&mut self.tmp, p, h, &self.k3);
        q.apply(&self.tmp, &mut self.k4);
        for i in 0..p.len() {
            p[i] += h / 6.0 * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

fn axpy_into(out: &mut [f64], x: &[f64], a: f64, y: &[f64]) {
    for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + a * yi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sbm_generate, SbmParams};
    use crate::process::{preset_catalyst, preset_sir};

    fn path(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(SbmParams::erdos_renyi(n, 1.0), &edges, None).unwrap()
    }

    #[test]
    fn two_vertex_si_matches_single_clock() {
        // K2 with rho = 1: the susceptible vertex is infected at rate 1/2
        let g = path(2);
        let spec = preset_sir(1.0, 0.0).unwrap();
        let ic = InitialCondition::from_states(3, &[1, 0]).unwrap();
        let grid = TimeGrid::uniform(3.0, 7).unwrap();
        let sol = master_equation_solve(&g, &spec, &ic, &grid).unwrap();
        for (gi, &t) in grid.times().iter().enumerate() {
            let infected = sol.mean(gi, 0, 1);
            let expect = 0.5 + 0.5 * (1.0 - (-t / 2.0).exp());
            assert!((infected - expect).abs() < 1e-9, "t={t}: {infected} vs {expect}");
        }
        assert!(sol.max_simplex_violation < 1e-12);
    }

    #[test]
    fn si_on_path_matches_hand_reduction() {
        // path 0-1-2 with rho = 1, N = 3: infection passes each edge at rate 1/3,
        // so vertex 2 is infected after a sum of two Exp(1/3) clocks
        let g = path(3);
        let spec = preset_sir(1.0, 0.0).unwrap();
        let ic = InitialCondition::from_states(3, &[1, 0, 0]).unwrap();
        let grid = TimeGrid::uniform(4.0, 9).unwrap();
        let sol = master_equation_solve(&g, &spec, &ic, &grid).unwrap();
        for (gi, &t) in grid.times().iter().enumerate() {
            let r: f64 = 1.0 / 3.0;
            let p1 = 1.0 - (-r * t).exp();
            let p2 = 1.0 - (-r * t).exp() * (1.0 + r * t);
            let expect = (1.0 + p1 + p2) / 3.0;
            assert!((sol.mean(gi, 0, 1) - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn catalyst_mean_is_constant() {
        let g = sbm_generate(&SbmParams::erdos_renyi(6, 0.6), 4).unwrap();
        let spec = preset_catalyst();
        let ic = InitialCondition::new(3, [0.5, 0.2, 0.3].repeat(6), "test").unwrap();
        let grid = TimeGrid::uniform(2.0, 5).unwrap();
        let sol = master_equation_solve(&g, &spec, &ic, &grid).unwrap();
        for gi in 0..5 {
            assert!((sol.mean(gi, 0, 2) - 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_rates_stay_put_and_capacity_is_enforced() {
        let g = path(4);
        let spec = preset_sir(0.0, 0.0).unwrap();
        let ic = InitialCondition::new(3, [0.2, 0.5, 0.3].repeat(4), "test").unwrap();
        let grid = TimeGrid::uniform(1.0, 3).unwrap();
        let sol = master_equation_solve(&g, &spec, &ic, &grid).unwrap();
        for gi in 0..3 {
            assert!((sol.mean(gi, 0, 1) - 0.5).abs() < 1e-12);
        }
        let big = sbm_generate(&SbmParams::erdos_renyi(12, 0.5), 0).unwrap();
        let ic = InitialCondition::new(3, [0.2, 0.5, 0.3].repeat(12), "test").unwrap();
        assert!(matches!(master_equation_solve(&big, &spec, &ic, &grid), Err(Error::Capacity(_))));
    }
}
