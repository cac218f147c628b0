use rand::Rng;
use serde::Serialize;

use super::Graph;
use crate::error::{invalid, Result};
use crate::rng::{derive_seed, rng_from_seed, stream};

/// Estimate of `||B - B_hat||_2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub value: f64,
    pub iterations: usize,
    /// `false` when `max_iter` was reached before the residual test passed;
    /// the value is then a lower estimate.
    pub converged: bool,
    /// Final relative residual of the Rayleigh quotient of `(B - B_hat)^2`.
    pub relative_residual: f64,
}

/// Iteration cap used when the caller has no preference:
/// `10 ln(N) log10(1/tol)`, clamped to `[100, 20000]`.
pub fn default_max_iter(n: usize, tol: f64) -> usize {
    let digits = (1.0 / tol).log10().max(1.0);
    let cap = 10.0 * (n.max(2) as f64).ln() * digits;
    (cap.ceil() as usize).clamp(100, 20_000)
}

/// Power iteration for `||B - B_hat||_2`, applied matrix-free.
///
/// The symmetric operator `M = B - B_hat` has spectral norm `max |lambda|`.
/// Iterating `M^2` avoids oscillation between eigenvalues of opposite sign;
/// the estimate is `sqrt(theta)` with `theta = ||M x||^2` for unit `x`, and
/// iteration stops when `||M^2 x - theta x|| <= tol * theta`.
pub fn spectral_deviation(graph: &Graph, tol: f64, max_iter: usize) -> Result<SpectralEstimate> {
    let seed = derive_seed(graph.seed().unwrap_or(0), stream::SPECTRAL, 0);
    spectral_deviation_seeded(graph, tol, max_iter, seed)
}

pub fn spectral_deviation_seeded(
    graph: &Graph,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<SpectralEstimate> {
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    if graph.rho() <= 0.0 {
        return Err(invalid("spectral deviation requires rho > 0"));
    }
    let n = graph.n();
    let mut rng = rng_from_seed(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    normalize(&mut x);
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut estimate = SpectralEstimate { value: 0.0, iterations: 0, converged: false, relative_residual: f64::INFINITY };
    for it in 1..=max_iter.max(1) {
        apply_deviation(graph, &x, &mut y, &mut tmp)?;
        let theta: f64 = y.iter().map(|v| v * v).sum();
        if theta == 0.0 {
            return Ok(SpectralEstimate { value: 0.0, iterations: it, converged: true, relative_residual: 0.0 });
        }
        apply_deviation(graph, &y, &mut z, &mut tmp)?;
        let residual: f64 = z.iter().zip(&x).map(|(zi, xi)| (zi - theta * xi).powi(2)).sum::<f64>().sqrt();
        estimate = SpectralEstimate {
            value: theta.sqrt(),
            iterations: it,
            converged: residual <= tol * theta,
            relative_residual: residual / theta,
        };
        if estimate.converged {
            break;
        }
        std::mem::swap(&mut x, &mut z);
        normalize(&mut x);
    }
    Ok(estimate)
}

fn apply_deviation(graph: &Graph, v: &[f64], out: &mut [f64], tmp: &mut [f64]) -> Result<()> {
    graph.normalized_apply_into(v, out)?;
    graph.model().annealed_apply_into(v, tmp)?;
    for (o, t) in out.iter_mut().zip(tmp.iter()) {
        *o -= t;
    }
    Ok(())
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sbm_generate, SbmParams};

    #[test]
    fn complete_graph_deviation_is_one_over_n() {
        // B = (J - I)/N and B_hat = J/N, so B - B_hat = -I/N
        let g = sbm_generate(&SbmParams::erdos_renyi(5, 1.0), 0).unwrap();
        let est = spectral_deviation(&g, 1e-10, 1000).unwrap();
        assert!(est.converged);
        assert!((est.value - 0.2).abs() < 1e-12, "{}", est.value);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let g = sbm_generate(&SbmParams::erdos_renyi(5, 1.0), 0).unwrap();
        assert!(spectral_deviation(&g, 0.0, 10).is_err());
    }

    #[test]
    fn non_convergence_is_flagged_not_fatal() {
        let g = sbm_generate(&SbmParams::erdos_renyi(200, 0.05), 1).unwrap();
        let est = spectral_deviation(&g, 1e-14, 2).unwrap();
        assert!(!est.converged);
        assert_eq!(est.iterations, 2);
        assert!(est.value > 0.0);
    }

    #[test]
    fn default_cap_grows_with_size_and_precision() {
        assert!(default_max_iter(4096, 1e-6) > default_max_iter(64, 1e-6));
        assert!(default_max_iter(4096, 1e-9) > default_max_iter(4096, 1e-3));
    }
}
