use rand::Rng;

use super::{BlockModel, Graph, SbmParams};
use crate::error::Result;
use crate::rng::{rng_from_seed, SimRng};

/// Draws an SBM graph. Each unordered pair `{i, j}` is an edge independently
/// with probability `rho * w[k(i)][k(j)]`.
///
/// Block pairs are visited in order `(0,0), (0,1), .., (1,1), ..` and within
/// each pair the successes are found by geometric skipping, so the cost is
/// proportional to the number of edges plus `K^2`.
pub fn sbm_generate(params: &SbmParams, seed: u64) -> Result<Graph> {
    let model = params.block_model()?;
    let mut edges = Vec::new();
    for_each_edge(&model, seed, |i, j| edges.push((i, j)));
    Graph::from_model_edges(params.clone(), model, &edges, Some(seed))
}

/// Degree sequence of `sbm_generate(params, seed)` without storing the edges.
pub fn sbm_degrees(params: &SbmParams, seed: u64) -> Result<Vec<u32>> {
    let model = params.block_model()?;
    let mut degree = vec![0u32; model.n()];
    for_each_edge(&model, seed, |i, j| {
        degree[i as usize] += 1;
        degree[j as usize] += 1;
    });
    Ok(degree)
}

/// Number of failures before the next success of a Bernoulli(p) sequence.
#[inline]
fn geometric_skip(rng: &mut SimRng, log_q: f64) -> u64 {
    let u: f64 = rng.random();
    // 1 - u lies in (0, 1]
    let s = ((1.0 - u).ln() / log_q).floor();
    if s >= u64::MAX as f64 {
        u64::MAX
    } else {
        s as u64
    }
}

pub(crate) fn for_each_edge(model: &BlockModel, seed: u64, mut emit: impl FnMut(u32, u32)) {
    let mut rng = rng_from_seed(seed);
    let k = model.num_blocks();
    for a in 0..k {
        for b in a..k {
            let p = model.edge_probability(a, b);
            if p <= 0.0 {
                continue;
            }
            let ra = model.block_range(a);
            let rb = model.block_range(b);
            let certain = p >= 1.0;
            let log_q = (-p).ln_1p();
            if a == b {
                // pairs (v, w) with w < v inside the block, enumerated row by row
                let size = ra.len() as u64;
                let base = ra.start as u64;
                let (mut v, mut w): (u64, u64) = (1, 0);
                let mut first = true;
                while v < size {
                    let step = if certain { 0 } else { geometric_skip(&mut rng, log_q) };
                    let advance = if first { step } else { step.saturating_add(1) };
                    first = false;
                    w = w.saturating_add(advance);
                    while w >= v && v < size {
                        w -= v;
                        v += 1;
                    }
                    if v < size {
                        emit((base + w) as u32, (base + v) as u32);
                    }
                }
            } else {
                let cols = rb.len() as u64;
                let total = ra.len() as u64 * cols;
                let mut idx: u64 = 0;
                let mut first = true;
                loop {
                    let step = if certain { 0 } else { geometric_skip(&mut rng, log_q) };
                    let advance = if first { step } else { step.saturating_add(1) };
                    first = false;
                    idx = idx.saturating_add(advance);
                    if idx >= total {
                        break;
                    }
                    let i = ra.start as u64 + idx / cols;
                    let j = rb.start as u64 + idx % cols;
                    emit(i as u32, j as u32);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_when_all_probabilities_are_one() {
        let g = sbm_generate(&SbmParams::erdos_renyi(5, 1.0), 3).unwrap();
        assert_eq!(g.num_edges(), 10);
        for i in 0..5 {
            assert_eq!(g.degree(i), 4);
        }
    }

    #[test]
    fn two_block_certain_edges() {
        let p = SbmParams::new(6, vec![0.5, 0.5], 1.0, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let g = sbm_generate(&p, 0).unwrap();
        // complete bipartite K_{3,3}
        assert_eq!(g.num_edges(), 9);
        for (i, j) in g.edges() {
            assert_ne!(g.block_of(i as usize), g.block_of(j as usize));
        }
    }

    #[test]
    fn zero_density_gives_empty_graph() {
        let p = SbmParams::new(20, vec![0.5, 0.5], 0.0, vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        let g = sbm_generate(&p, 11).unwrap();
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn generation_is_deterministic_and_seed_sensitive() {
        let p = SbmParams::new(300, vec![0.3, 0.7], 0.05, vec![vec![2.0, 0.5], vec![0.5, 1.0]]);
        let a = sbm_generate(&p, 5).unwrap();
        let b = sbm_generate(&p, 5).unwrap();
        let c = sbm_generate(&p, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.edges().collect::<Vec<_>>(), c.edges().collect::<Vec<_>>());
    }

    #[test]
    fn degree_stream_matches_generated_graph() {
        let p = SbmParams::new(500, vec![0.5, 0.5], 0.04, vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        let g = sbm_generate(&p, 42).unwrap();
        let deg = sbm_degrees(&p, 42).unwrap();
        let realized: Vec<u32> = (0..500).map(|i| g.degree(i) as u32).collect();
        assert_eq!(deg, realized);
    }

    #[test]
    fn edge_count_matches_binomial_mean() {
        // G(400, 0.1): edge count ~ Bin(79800, 0.1), mean 7980, sd ~ 84.7
        let p = SbmParams::erdos_renyi(400, 0.1);
        let seeds = 20;
        let mean: f64 =
            (0..seeds).map(|s| sbm_generate(&p, s).unwrap().num_edges() as f64).sum::<f64>() / seeds as f64;
        let sd = (79800.0f64 * 0.1 * 0.9).sqrt() / (seeds as f64).sqrt();
        assert!((mean - 7980.0).abs() < 4.0 * sd, "mean edges {mean}");
    }
}
