//! Mean-field ODE solvers.
//!
//! All three approximations share one vector field,
//!
//! ```text
//! dy_{u,s}/dt = sum_{s'} q[s' -> s] y_{u,s'} + sum_{s', n} q[n; s' -> s] y_{u,s'} (C y_{.,n})_u
//! ```
//!
//! and differ only in the coupling operator `C` and the units `u`: the
//! normalized adjacency `B` over vertices (quenched), the annealed surrogate
//! `B_hat` over vertices, or `w_kl pi_l` over blocks.
//!
//! Integration is classical RK4 with a fixed step aligned to the output grid.
//! Each transition is applied as a paired outflow and inflow, so row sums are
//! preserved up to rounding; nothing is clamped, and leaving the simplex by
//! more than the tolerance is an error.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, invalid, Error, Result};
use crate::graph::{BlockModel, Graph};
use crate::grid::TimeGrid;
use crate::initcond::InitialCondition;
use crate::process::ProcessSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Quenched, vertex level, coupling `B`.
    Nimfa,
    /// Annealed, vertex level, coupling `B_hat`.
    Annealed,
    /// Block level.
    Bhmfa,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Nimfa => "nimfa",
            Variant::Annealed => "annealed",
            Variant::Bhmfa => "bhmfa",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nimfa" => Ok(Variant::Nimfa),
            "annealed" | "annealed_nimfa" => Ok(Variant::Annealed),
            "bhmfa" => Ok(Variant::Bhmfa),
            other => Err(invalid(format!("unknown solver variant {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Allowed simplex violation.
    pub tol: f64,
    /// Fixed step; by default `min(0.01, 0.1 / rate_bound)`.
    pub step: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-8, step: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorReport {
    /// Largest step actually taken after grid alignment.
    pub step: f64,
    pub steps: usize,
    /// Bound on the total jump rate of any unit.
    pub rate_bound: f64,
    pub max_simplex_violation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OdeSolution {
    pub time_grid: TimeGrid,
    pub variant: Variant,
    pub n_units: usize,
    pub n_states: usize,
    /// Row-major `[g][unit][s]`.
    pub values: Vec<f64>,
    pub report: IntegratorReport,
}

impl OdeSolution {
    pub fn value(&self, g: usize, unit: usize, s: usize) -> f64 {
        self.values[(g * self.n_units + unit) * self.n_states + s]
    }

    /// Slice of all units at grid index `g`.
    pub fn at(&self, g: usize) -> &[f64] {
        let w = self.n_units * self.n_states;
        &self.values[g * w..(g + 1) * w]
    }

    /// Block means of a vertex-level solution, row-major `[g][k][s]`.
    pub fn block_averages(&self, model: &BlockModel) -> Result<Vec<f64>> {
        if self.variant == Variant::Bhmfa {
            return Ok(self.values.clone());
        }
        check_len(model.n(), self.n_units)?;
        let s = self.n_states;
        let k_count = model.num_blocks();
        let mut out = vec![0.0; self.time_grid.len() * k_count * s];
        for g in 0..self.time_grid.len() {
            let slice = self.at(g);
            for k in 0..k_count {
                let range = model.block_range(k);
                let size = range.len() as f64;
                for i in range {
                    for st in 0..s {
                        out[(g * k_count + k) * s + st] += slice[i * s + st];
                    }
                }
                for st in 0..s {
                    out[(g * k_count + k) * s + st] /= size;
                }
            }
        }
        Ok(out)
    }
}

enum Coupling<'a> {
    Quenched(&'a Graph),
    Annealed(&'a BlockModel),
    Block(&'a BlockModel),
}

impl Coupling<'_> {
    fn apply(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        match self {
            Coupling::Quenched(g) => g.normalized_apply_into(v, out),
            Coupling::Annealed(m) => m.annealed_apply_into(v, out),
            Coupling::Block(m) => {
                let k = m.num_blocks();
                for (a, o) in out.iter_mut().enumerate() {
                    *o = (0..k).map(|l| m.weight(a, l) * m.fraction(l) * v[l]).sum();
                }
                Ok(())
            }
        }
    }

    /// Largest row sum of the operator.
    fn row_bound(&self) -> f64 {
        match self {
            Coupling::Quenched(g) => g.max_degree() as f64 * g.interaction_scale(),
            Coupling::Annealed(m) | Coupling::Block(m) => m.annealed_row_bound(),
        }
    }
}

struct Field<'a> {
    coupling: Coupling<'a>,
    units: usize,
    n_states: usize,
    spontaneous: Vec<(usize, usize, f64)>,
    interaction: Vec<(usize, usize, usize, f64)>,
    /// States that act as neighbors in some interaction.
    drivers: Vec<usize>,
    column: Vec<f64>,
    /// `[driver_index][unit]`
    coupled: Vec<Vec<f64>>,
}

impl<'a> Field<'a> {
    fn new(coupling: Coupling<'a>, units: usize, spec: &ProcessSpec) -> Self {
        let interaction = spec.interaction_transitions();
        let mut drivers: Vec<usize> = interaction.iter().map(|t| t.0).collect();
        drivers.sort_unstable();
        drivers.dedup();
        let coupled = vec![vec![0.0; units]; drivers.len()];
        Field {
            coupling,
            units,
            n_states: spec.n_states(),
            spontaneous: spec.spontaneous_transitions(),
            interaction,
            drivers,
            column: vec![0.0; units],
            coupled,
        }
    }

    fn rate_bound(&self, spec: &ProcessSpec) -> f64 {
        let inter = if self.interaction.is_empty() { 0.0 } else { spec.max_interaction_outflow() * self.coupling.row_bound() };
        spec.max_spontaneous_outflow() + inter
    }

    fn eval(&mut self, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let s = self.n_states;
        for (slot, &nb) in self.drivers.iter().enumerate() {
            for (c, row) in self.column.iter_mut().zip(y.chunks(s)) {
                *c = row[nb];
            }
            self.coupling.apply(&self.column, &mut self.coupled[slot])?;
        }
        dy.fill(0.0);
        for u in 0..self.units {
            let row = &y[u * s..(u + 1) * s];
            let out = &mut dy[u * s..(u + 1) * s];
            for &(from, to, rate) in &self.spontaneous {
                let flow = rate * row[from];
                out[from] -= flow;
                out[to] += flow;
            }
            for &(nb, from, to, rate) in &self.interaction {
                let slot = self.drivers.binary_search(&nb).expect("driver registered");
                let flow = rate * row[from] * self.coupled[slot][u];
                out[from] -= flow;
                out[to] += flow;
            }
        }
        Ok(())
    }
}

fn integrate(
    mut field: Field<'_>,
    spec: &ProcessSpec,
    y0: Vec<f64>,
    grid: &TimeGrid,
    options: &SolverOptions,
    variant: Variant,
) -> Result<OdeSolution> {
    if !(options.tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {}", options.tol)));
    }
    let rate_bound = field.rate_bound(spec);
    let h_max = match options.step {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(invalid(format!("step must be positive, got {h}"))),
        None if rate_bound > 0.0 => (0.1 / rate_bound).min(0.01),
        None => 0.01,
    };
    let n = y0.len();
    let mut y = y0;
    let mut values = Vec::with_capacity(grid.len() * n);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut violation = simplex_violation(&y, field.n_states);
    let mut report = IntegratorReport { step: 0.0, steps: 0, rate_bound, max_simplex_violation: violation };
    let times = grid.times();
    values.extend_from_slice(&y);
    for g in 1..times.len() {
        let span = times[g] - times[g - 1];
        let steps = (span / h_max).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        report.step = report.step.max(h);
        for _ in 0..steps {
            field.eval(&y, &mut k1)?;
            axpy_into(&mut tmp, &y, 0.5 * h, &k1);
            field.eval(&tmp, &mut k2)?;
            axpy_into(&mut tmp, &y, 0.5 * h, &k2);
            field.eval(&tmp, &mut k3)?;
            axpy_into(&mut tmp, &y, h, &k3);
            field.eval(&tmp, &mut k4)?;
            for i in 0..n {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            report.steps += 1;
            violation = violation.max(simplex_violation(&y, field.n_states));
            if !(violation <= options.tol) {
                return Err(Error::Numerical(format!(
                    "{} solution left the simplex by {violation:e} (tol {:e}) near t = {}",
                    variant.name(),
                    options.tol,
                    times[g - 1] + h * report.steps as f64
                )));
            }
        }
        values.extend_from_slice(&y);
    }
    report.max_simplex_violation = violation;
    Ok(OdeSolution {
        time_grid: grid.clone(),
        variant,
        n_units: n / field.n_states,
        n_states: field.n_states,
        values,
        report,
    })
}

fn axpy_into(out: &mut [f64], x: &[f64], a: f64, y: &[f64]) {
    for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + a * yi;
    }
}

/// Largest distance of an entry from `[0, 1]` or of a row sum from 1.
fn simplex_violation(y: &[f64], s: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for row in y.chunks(s) {
        let mut sum = 0.0;
        for &v in row {
            worst = worst.max(-v).max(v - 1.0);
            sum += v;
        }
        worst = worst.max((sum - 1.0).abs());
    }
    if worst.is_nan() || y.iter().any(|v| !v.is_finite()) {
        f64::INFINITY
    } else {
        worst
    }
}

fn check_ic(ic: &InitialCondition, n: usize, spec: &ProcessSpec) -> Result<()> {
    check_len(n, ic.n())?;
    if ic.n_states() != spec.n_states() {
        return Err(invalid(format!("initial condition has {} states, process has {}", ic.n_states(), spec.n_states())));
    }
    Ok(())
}

/// Quenched mean field on the realized graph.
pub fn nimfa_solve(
    graph: &Graph,
    spec: &ProcessSpec,
    ic: &InitialCondition,
    grid: &TimeGrid,
    options: &SolverOptions,
) -> Result<OdeSolution> {
    check_ic(ic, graph.n(), spec)?;
    if graph.rho() <= 0.0 && !spec.interaction_transitions().is_empty() {
        return Err(invalid("quenched solver with interactions requires rho > 0"));
    }
    let field = Field::new(Coupling::Quenched(graph), graph.n(), spec);
    integrate(field, spec, ic.z0().to_vec(), grid, options, Variant::Nimfa)
}

/// Annealed mean field: the quenched equations with `B_hat` in place of `B`.
pub fn annealed_nimfa_solve(
    model: &BlockModel,
    spec: &ProcessSpec,
    ic: &InitialCondition,
    grid: &TimeGrid,
    options: &SolverOptions,
) -> Result<OdeSolution> {
    check_ic(ic, model.n(), spec)?;
    let field = Field::new(Coupling::Annealed(model), model.n(), spec);
    integrate(field, spec, ic.z0().to_vec(), grid, options, Variant::Annealed)
}

/// Block-homogeneous mean field from block initial values `x0` (`K x S`).
pub fn bhmfa_solve(
    model: &BlockModel,
    spec: &ProcessSpec,
    x0: &[f64],
    grid: &TimeGrid,
    options: &SolverOptions,
) -> Result<OdeSolution> {
    let s = spec.n_states();
    check_len(model.num_blocks() * s, x0.len())?;
    for (k, row) in x0.chunks(s).enumerate() {
        let sum: f64 = row.iter().sum();
        if row.iter().any(|v| !(0.0..=1.0).contains(v)) || (sum - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("block {k} initial row is not a probability vector")));
        }
    }
    let field = Field::new(Coupling::Block(model), model.num_blocks(), spec);
    integrate(field, spec, x0.to_vec(), grid, options, Variant::Bhmfa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sbm_generate, SbmParams};
    use crate::process::{preset_catalyst, preset_degree, preset_sir};

    #[test]
    fn degree_process_matches_exponential() {
        let g = sbm_generate(&SbmParams::erdos_renyi(100, 0.1), 3).unwrap();
        let ic = InitialCondition::from_states(2, &[0; 100]).unwrap();
        let grid = TimeGrid::uniform(2.0, 11).unwrap();
        let sol = nimfa_solve(&g, &preset_degree(), &ic, &grid, &SolverOptions::default()).unwrap();
        for (gi, &t) in grid.times().iter().enumerate() {
            for i in 0..100 {
                let exact = (-(g.degree(i) as f64) * t * g.interaction_scale()).exp();
                assert!((sol.value(gi, i, 0) - exact).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bhmfa_catalyst_and_degree_closed_forms() {
        let model = SbmParams::erdos_renyi(10, 0.5).block_model().unwrap();
        let grid = TimeGrid::uniform(2.0, 5).unwrap();
        let opts = SolverOptions::default();
        let cat = bhmfa_solve(&model, &preset_catalyst(), &[0.5, 0.0, 0.5], &grid, &opts).unwrap();
        let deg = bhmfa_solve(&model, &preset_degree(), &[1.0, 0.0], &grid, &opts).unwrap();
        for (gi, &t) in grid.times().iter().enumerate() {
            assert!((cat.value(gi, 0, 0) - 0.5 * (-t / 2.0).exp()).abs() < 1e-10);
            assert!((deg.value(gi, 0, 0) - (-t).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn sir_without_infection_is_constant() {
        let model = SbmParams::erdos_renyi(10, 0.5).block_model().unwrap();
        let grid = TimeGrid::uniform(3.0, 4).unwrap();
        let sol = bhmfa_solve(&model, &preset_sir(2.0, 0.0).unwrap(), &[0.6, 0.0, 0.4], &grid, &SolverOptions::default())
            .unwrap();
        for gi in 0..4 {
            assert_eq!(sol.at(gi), &[0.6, 0.0, 0.4]);
        }
    }

    #[test]
    fn zero_rates_are_constant() {
        let g = sbm_generate(&SbmParams::erdos_renyi(20, 0.3), 1).unwrap();
        let ic = InitialCondition::new(3, [0.2, 0.3, 0.5].repeat(20), "t").unwrap();
        let grid = TimeGrid::uniform(1.0, 3).unwrap();
        let spec = preset_sir(0.0, 0.0).unwrap();
        let sol = nimfa_solve(&g, &spec, &ic, &grid, &SolverOptions::default()).unwrap();
        assert_eq!(sol.at(2), ic.z0());
        let ann = annealed_nimfa_solve(g.model(), &spec, &ic, &grid, &SolverOptions::default()).unwrap();
        assert_eq!(ann.at(2), ic.z0());
    }

    #[test]
    fn oversized_step_is_caught() {
        let g = sbm_generate(&SbmParams::erdos_renyi(50, 1.0), 1).unwrap();
        let ic = InitialCondition::new(2, [0.9, 0.1].repeat(50), "t").unwrap();
        let grid = TimeGrid::uniform(5.0, 2).unwrap();
        let spec = ProcessSpec::from_json(
            r#"{"states":["a","b"],"spontaneous":[{"from":"a","to":"b","rate":40},{"from":"b","to":"a","rate":40}]}"#,
        )
        .unwrap();
        let r = nimfa_solve(&g, &spec, &ic, &grid, &SolverOptions { tol: 1e-8, step: Some(1.0) });
        assert!(matches!(r, Err(Error::Numerical(_))));
        assert!(nimfa_solve(&g, &spec, &ic, &grid, &SolverOptions::default()).is_ok());
    }
}
