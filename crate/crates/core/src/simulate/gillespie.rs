use rand::Rng;
use rand_distr::Exp1;

use super::sumtree::SumTree;
use super::TrajectorySample;
use crate::error::{check_len, invalid, Result};
use crate::graph::Graph;
use crate::grid::TimeGrid;
use crate::process::ProcessSpec;

/// Cached rates are rebuilt from scratch after this many events.
pub const REFRESH_INTERVAL: u64 = 100_000;

/// Exact event-driven simulation of the interaction process on one graph.
///
/// Per vertex the simulator keeps its state, the number of neighbors in each
/// state and its total jump rate; the rates sit in a [`SumTree`] so that the
/// next jumping vertex is found in `O(log N)`. A jump of vertex `i` only
/// touches the counts and rates of `i` and its neighbors.
pub struct Simulator<'a> {
    graph: &'a Graph,
    spec: &'a ProcessSpec,
    n_states: usize,
    scale: f64,
    spont_out: Vec<f64>,
    /// `[neighbor * S + own]`
    inter_out: Vec<f64>,
    state: Vec<u8>,
    /// `[vertex * S + state]`: neighbors of `vertex` in `state`
    counts: Vec<u32>,
    rates: SumTree,
    time: f64,
    events: u64,
    since_refresh: u64,
    weights: Vec<f64>,
}

impl<'a> Simulator<'a> {
    pub fn new(graph: &'a Graph, spec: &'a ProcessSpec, initial: &[u8]) -> Result<Self> {
        let n = graph.n();
        let s = spec.n_states();
        check_len(n, initial.len())?;
        if let Some(i) = initial.iter().position(|&x| x as usize >= s) {
            return Err(invalid(format!("vertex {i} starts in state {} outside 0..{s}", initial[i])));
        }
        let spont_out = (0..s).map(|a| spec.spontaneous_outflow(a)).collect();
        let inter_out = (0..s * s).map(|x| spec.interaction_outflow(x / s, x % s)).collect();
        let mut counts = vec![0u32; n * s];
        for i in 0..n {
            for &j in graph.neighbors(i) {
                counts[i * s + initial[j as usize] as usize] += 1;
            }
        }
        let mut sim = Simulator {
            graph,
            spec,
            n_states: s,
            scale: graph.interaction_scale(),
            spont_out,
            inter_out,
            state: initial.to_vec(),
            counts,
            rates: SumTree::new(&[]),
            time: 0.0,
            events: 0,
            since_refresh: 0,
            weights: vec![0.0; s],
        };
        sim.refresh();
        Ok(sim)
    }

    pub fn state(&self) -> &[u8] {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn total_rate(&self) -> f64 {
        self.rates.total()
    }

    /// Total jump rate of vertex `i`, recomputed from its neighbor counts.
    fn vertex_rate(&self, i: usize) -> f64 {
        let s = self.n_states;
        let own = self.state[i] as usize;
        let row = &self.counts[i * s..(i + 1) * s];
        let mut inter = 0.0;
        for (nb, &c) in row.iter().enumerate() {
            if c != 0 {
                inter += c as f64 * self.inter_out[nb * s + own];
            }
        }
        self.spont_out[own] + self.scale * inter
    }

    /// Recomputes every cached rate.
    pub fn refresh(&mut self) {
        let rates: Vec<f64> = (0..self.graph.n()).map(|i| self.vertex_rate(i)).collect();
        self.rates.rebuild(&rates);
        self.since_refresh = 0;
    }

    /// Largest discrepancy between cached and recomputed rates, including
    /// the cached total against a plain sum.
    pub fn rate_drift(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut sum = 0.0;
        for i in 0..self.graph.n() {
            let fresh = self.vertex_rate(i);
            worst = worst.max((fresh - self.rates.get(i)).abs());
            sum += fresh;
        }
        worst.max((sum - self.rates.total()).abs())
    }

    /// Neighbor counts recomputed from the states, for consistency checks.
    pub fn counts_consistent(&self) -> bool {
        let s = self.n_states;
        (0..self.graph.n()).all(|i| {
            let mut fresh = vec![0u32; s];
            for &j in self.graph.neighbors(i) {
                fresh[self.state[j as usize] as usize] += 1;
            }
            fresh == self.counts[i * s..(i + 1) * s]
        })
    }

    /// Counts per block and state, `[k * S + s]`.
    pub fn block_counts(&self) -> Vec<u32> {
        let s = self.n_states;
        let mut out = vec![0u32; self.graph.num_blocks() * s];
        for (i, &x) in self.state.iter().enumerate() {
            out[self.graph.block_of(i) * s + x as usize] += 1;
        }
        out
    }

    /// Waiting time to the next event, or `None` when no vertex can move.
    fn draw_waiting_time(&self, rng: &mut impl Rng) -> Option<f64> {
        let total = self.rates.total();
        if total > 0.0 {
            let e: f64 = rng.sample(Exp1);
            Some(e / total)
        } else {
            None
        }
    }

    /// Moves the process to time `at` and performs one jump there.
    /// Returns `(vertex, from, to)`.
    fn jump(&mut self, at: f64, rng: &mut impl Rng) -> (usize, usize, usize) {
        let s = self.n_states;
        let i = self.rates.find(rng.random::<f64>() * self.rates.total());
        let own = self.state[i] as usize;
        let row = &self.counts[i * s..(i + 1) * s];
        let mut total = 0.0;
        for to in 0..s {
            let mut w = 0.0;
            if to != own {
                w = self.spec.spontaneous(own, to);
                let mut inter = 0.0;
                for (nb, &c) in row.iter().enumerate() {
                    if c != 0 {
                        inter += c as f64 * self.spec.interaction(nb, own, to);
                    }
                }
                w += self.scale * inter;
            }
            self.weights[to] = w;
            total += w;
        }
        let mut u = rng.random::<f64>() * total;
        let mut target = own;
        for to in 0..s {
            if self.weights[to] > 0.0 {
                target = to;
                if u < self.weights[to] {
                    break;
                }
                u -= self.weights[to];
            }
        }
        debug_assert_ne!(target, own, "a vertex with positive rate has a target");
        self.state[i] = target as u8;
        self.rates.set(i, self.vertex_rate(i));
        let graph = self.graph;
        for &j in graph.neighbors(i) {
            let j = j as usize;
            self.counts[j * s + own] -= 1;
            self.counts[j * s + target] += 1;
            let fresh = self.vertex_rate(j);
            if fresh != self.rates.get(j) {
                self.rates.set(j, fresh);
            }
        }
        self.time = at;
        self.events += 1;
        self.since_refresh += 1;
        if self.since_refresh >= REFRESH_INTERVAL {
            self.refresh();
        }
        (i, own, target)
    }

    /// Performs the next jump if it happens before `horizon`; otherwise
    /// advances the clock to `horizon` and returns `false`. Waiting times are
    /// memoryless, so discarding the overshooting draw is exact.
    pub fn step_until(&mut self, horizon: f64, rng: &mut impl Rng) -> bool {
        match self.draw_waiting_time(rng) {
            Some(dt) if self.time + dt <= horizon => {
                self.jump(self.time + dt, rng);
                true
            }
            _ => {
                self.time = self.time.max(horizon);
                false
            }
        }
    }

    /// Runs the process over `grid` and returns block counts at each grid
    /// time, row-major `[g][k][s]`. The state at grid time `t` includes every
    /// jump at times `<= t`.
    pub fn record(&mut self, grid: &TimeGrid, rng: &mut impl Rng) -> Vec<u32> {
        let times = grid.times();
        let width = self.graph.num_blocks() * self.n_states;
        let mut out = Vec::with_capacity(times.len() * width);
        let mut g = 0;
        let mut current = self.block_counts();
        while g < times.len() {
            let next = self.draw_waiting_time(rng).map(|dt| self.time + dt);
            while g < times.len() && next.map_or(true, |t| times[g] < t) {
                out.extend_from_slice(&current);
                g += 1;
            }
            if g == times.len() {
                break;
            }
            let at = next.expect("pending grid points imply a next event");
            let (i, from, to) = self.jump(at, rng);
            let k = self.graph.block_of(i);
            current[k * self.n_states + from] -= 1;
            current[k * self.n_states + to] += 1;
        }
        out
    }
}

/// One simulated path sampled on `grid`.
pub fn gillespie_run(
    graph: &Graph,
    spec: &ProcessSpec,
    initial: &[u8],
    grid: &TimeGrid,
    seed: u64,
) -> Result<TrajectorySample> {
    let mut sim = Simulator::new(graph, spec, initial)?;
    let mut rng = crate::rng::rng_from_seed(seed);
    let counts = sim.record(grid, &mut rng);
    Ok(TrajectorySample::new(grid.clone(), graph.block_sizes().to_vec(), spec.n_states(), counts, seed, 0))
}
