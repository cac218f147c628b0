//! Initial-condition generators.
//!
//! An initial condition assigns each vertex a probability vector over the
//! states. Vertices start independently, conditionally on the graph, in a
//! state drawn from their own row.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, invalid, Error, Result};
use crate::graph::{BlockModel, Graph};
use crate::process::{ClosedFormTag, ProcessSpec};
use crate::rng::{derive_seed, rng_from_seed, stream};

/// Tolerance for the simplex check on every row.
pub const SIMPLEX_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct InitialCondition {
    n_states: usize,
    /// Row-major `N x S`.
    z0: Vec<f64>,
    provenance: String,
}

impl InitialCondition {
    pub fn new(n_states: usize, z0: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        if n_states == 0 {
            return Err(invalid("initial condition needs at least one state"));
        }
        if z0.len() % n_states != 0 {
            return Err(Error::DimensionMismatch { expected: z0.len() / n_states * n_states, got: z0.len() });
        }
        for (i, row) in z0.chunks(n_states).enumerate() {
            check_simplex(row).map_err(|e| invalid(format!("vertex {i}: {e}")))?;
        }
        Ok(InitialCondition { n_states, z0, provenance: provenance.into() })
    }

    /// Deterministic condition with vertex `i` in `states[i]`.
    pub fn from_states(n_states: usize, states: &[u8]) -> Result<Self> {
        let mut z0 = vec![0.0; states.len() * n_states];
        for (i, &s) in states.iter().enumerate() {
            if s as usize >= n_states {
                return Err(invalid(format!("vertex {i} has state {s} outside 0..{n_states}")));
            }
            z0[i * n_states + s as usize] = 1.0;
        }
        InitialCondition::new(n_states, z0, "deterministic")
    }

    pub fn n(&self) -> usize {
        self.z0.len() / self.n_states
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn z0(&self) -> &[f64] {
        &self.z0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.z0[i * self.n_states..(i + 1) * self.n_states]
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// `z_{., s}` as a vector over vertices.
    pub fn column(&self, s: usize) -> Vec<f64> {
        self.z0.chunks(self.n_states).map(|r| r[s]).collect()
    }

    /// Block means, row-major `K x S`. A block whose rows are all equal
    /// gets that row exactly.
    pub fn block_means(&self, model: &BlockModel) -> Result<Vec<f64>> {
        check_len(model.n(), self.n())?;
        let s = self.n_states;
        let mut out = vec![0.0; model.num_blocks() * s];
        for k in 0..model.num_blocks() {
            let range = model.block_range(k);
            let size = range.len() as f64;
            if let Some(first) = range.clone().next().map(|i| self.row(i)) {
                if range.clone().all(|i| self.row(i) == first) {
                    out[k * s..(k + 1) * s].copy_from_slice(first);
                    continue;
                }
            }
            for i in range {
                for (o, z) in out[k * s..(k + 1) * s].iter_mut().zip(self.row(i)) {
                    *o += z;
                }
            }
            out[k * s..(k + 1) * s].iter_mut().for_each(|o| *o /= size);
        }
        Ok(out)
    }

    /// True when every row is a point mass.
    pub fn is_deterministic(&self) -> bool {
        self.z0.iter().all(|&z| z == 0.0 || z == 1.0)
    }
}

fn check_simplex(row: &[f64]) -> std::result::Result<(), String> {
    if let Some(z) = row.iter().find(|z| !(**z >= 0.0 && **z <= 1.0)) {
        return Err(format!("probability {z} outside [0, 1]"));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(format!("row sums to {sum}, not 1"));
    }
    Ok(())
}

fn check_state(name: &str, s: usize, n_states: usize) -> Result<()> {
    if s >= n_states {
        return Err(invalid(format!("{name} state {s} outside 0..{n_states}")));
    }
    Ok(())
}

/// Every vertex of block `k` gets `values[k]`.
pub fn ic_block_constant(values: &[Vec<f64>], graph: &Graph) -> Result<InitialCondition> {
    check_len(graph.num_blocks(), values.len())?;
    let s = values.first().map_or(0, Vec::len);
    for (k, row) in values.iter().enumerate() {
        check_len(s, row.len())?;
        check_simplex(row).map_err(|e| invalid(format!("block {k}: {e}")))?;
    }
    let mut z0 = Vec::with_capacity(graph.n() * s);
    for i in 0..graph.n() {
        z0.extend_from_slice(&values[graph.block_of(i)]);
    }
    InitialCondition::new(s, z0, "block_constant")
}

/// `z_{i,infected} = kappa delta_i / d`, the rest in `susceptible`.
pub fn ic_degree_proportional(
    graph: &Graph,
    kappa: f64,
    n_states: usize,
    infected: usize,
    susceptible: usize,
) -> Result<InitialCondition> {
    check_state("infected", infected, n_states)?;
    check_state("susceptible", susceptible, n_states)?;
    if infected == susceptible {
        return Err(invalid("infected and susceptible states must differ"));
    }
    if !(kappa >= 0.0) {
        return Err(invalid(format!("kappa must be nonnegative, got {kappa}")));
    }
    let d = graph.model().expected_average_degree();
    let share: Vec<f64> = if kappa == 0.0 {
        vec![0.0; graph.n()]
    } else {
        if !(d > 0.0) {
            return Err(invalid("degree-proportional condition needs a positive expected degree"));
        }
        (0..graph.n()).map(|i| kappa * graph.degree(i) as f64 / d).collect()
    };
    let max = share.iter().copied().fold(0.0, f64::max);
    if max > 1.0 {
        return Err(invalid(format!(
            "kappa = {kappa} gives infection probability {max} > 1; refusing to clamp"
        )));
    }
    let z0 = two_state_rows(&share, n_states, infected, susceptible);
    InitialCondition::new(n_states, z0, format!("degree_proportional(kappa={kappa})"))
}

fn two_state_rows(share: &[f64], n_states: usize, infected: usize, susceptible: usize) -> Vec<f64> {
    let mut z0 = vec![0.0; share.len() * n_states];
    for (i, &p) in share.iter().enumerate() {
        z0[i * n_states + infected] = p;
        z0[i * n_states + susceptible] = 1.0 - p;
    }
    z0
}

/// Nonnegative top eigenvector of the adjacency matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PerronVector {
    pub vector: Vec<f64>,
    /// Top eigenvalue of `A`.
    pub eigenvalue: f64,
    pub iterations: usize,
    /// Connected components with at least one edge.
    pub nontrivial_components: usize,
}

/// Top eigenvector of `A` by shifted power iteration, per component.
///
/// On a disconnected graph the component with the largest eigenvalue wins
/// (ties go to the lower vertex index) and every other vertex gets zero.
pub fn perron_vector(graph: &Graph, tol: f64, max_iter: usize) -> Result<PerronVector> {
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    if graph.num_edges() == 0 {
        return Err(invalid("Perron vector needs a graph with at least one edge"));
    }
    let n = graph.n();
    let components = connected_components(graph);
    let mut best: Option<(f64, Vec<usize>, Vec<f64>, usize)> = None;
    let mut nontrivial = 0;
    for comp in components.into_iter().filter(|c| c.len() > 1) {
        nontrivial += 1;
        let (lambda, v, it) = component_power_iteration(graph, &comp, tol, max_iter)?;
        if best.as_ref().map_or(true, |b| lambda > b.0 * (1.0 + tol)) {
            best = Some((lambda, comp, v, it));
        }
    }
    let (eigenvalue, comp, v, iterations) = best.expect("some component has an edge");
    let mut vector = vec![0.0; n];
    for (&i, x) in comp.iter().zip(v) {
        vector[i] = x;
    }
    Ok(PerronVector { vector, eigenvalue, iterations, nontrivial_components: nontrivial })
}

fn connected_components(graph: &Graph) -> Vec<Vec<usize>> {
    let n = graph.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp = vec![root];
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for &j in graph.neighbors(v) {
                if !seen[j as usize] {
                    seen[j as usize] = true;
                    comp.push(j as usize);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn component_power_iteration(
    graph: &Graph,
    comp: &[usize],
    tol: f64,
    max_iter: usize,
) -> Result<(f64, Vec<f64>, usize)> {
    let m = comp.len();
    let mut local = vec![usize::MAX; graph.n()];
    for (li, &i) in comp.iter().enumerate() {
        local[i] = li;
    }
    // shifting by the max degree makes A + shift*I positive semidefinite,
    // which removes the oscillation on bipartite components
    let shift = comp.iter().map(|&i| graph.degree(i)).max().unwrap_or(0) as f64;
    let mut x = vec![1.0 / (m as f64).sqrt(); m];
    let mut y = vec![0.0; m];
    for it in 1..=max_iter {
        for (li, &i) in comp.iter().enumerate() {
            let s: f64 = graph.neighbors(i).iter().map(|&j| x[local[j as usize]]).sum();
            y[li] = s + shift * x[li];
        }
        let rayleigh: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        y.iter_mut().for_each(|v| *v /= norm);
        let change = y.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        std::mem::swap(&mut x, &mut y);
        if change <= tol {
            return Ok((rayleigh - shift, x, it));
        }
    }
    Err(Error::Numerical(format!("Perron power iteration did not reach tol {tol} within {max_iter} iterations")))
}

/// `z_{i,infected} = kappa (v_1)_i / ||v_1||_1` for the Perron vector `v_1`.
pub fn ic_perron(
    graph: &Graph,
    kappa: f64,
    n_states: usize,
    infected: usize,
    susceptible: usize,
    tol: f64,
) -> Result<InitialCondition> {
    check_state("infected", infected, n_states)?;
    check_state("susceptible", susceptible, n_states)?;
    if infected == susceptible {
        return Err(invalid("infected and susceptible states must differ"));
    }
    if !(0.0..=1.0).contains(&kappa) {
        return Err(invalid(format!("kappa must lie in [0, 1], got {kappa}")));
    }
    let pv = perron_vector(graph, tol, 1_000_000)?;
    let l1: f64 = pv.vector.iter().sum();
    let share: Vec<f64> = pv.vector.iter().map(|v| kappa * v / l1).collect();
    let mut provenance = format!("perron(kappa={kappa}, tol={tol}, eigenvalue={})", pv.eigenvalue);
    if pv.nontrivial_components > 1 || pv.vector.contains(&0.0) {
        provenance.push_str(&format!(
            "; disconnected graph: dominant component of {} used",
            pv.vector.iter().filter(|&&v| v > 0.0).count()
        ));
    }
    InitialCondition::new(n_states, two_state_rows(&share, n_states, infected, susceptible), provenance)
}

/// What the modularity search maximizes, with `dev = e(H) - (d/N)|H|^2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModularityObjective {
    /// `|dev|`
    #[default]
    Absolute,
    /// `dev`: a denser-than-expected set
    Dense,
    /// `-dev`: a sparser-than-expected set
    Sparse,
}

impl ModularityObjective {
    fn score(self, dev: f64) -> f64 {
        match self {
            ModularityObjective::Absolute => dev.abs(),
            ModularityObjective::Dense => dev,
            ModularityObjective::Sparse => -dev,
        }
    }
}

/// Vertex set found by [`modularity_search`].
#[derive(Clone, Debug, PartialEq)]
pub struct ModularitySet {
    pub members: Vec<bool>,
    /// Ordered-pair edge count `e(H) = sum_{i,j in H} a_ij`.
    pub internal: u64,
    /// `e(H) - (d/N) |H|^2`
    pub deviation: f64,
    /// Restart index that produced the set.
    pub restart: usize,
}

impl ModularitySet {
    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }
}

/// `e(H) - (d/N)|H|^2` for the indicator `members`.
pub fn modularity_deviation(graph: &Graph, members: &[bool]) -> Result<f64> {
    check_len(graph.n(), members.len())?;
    let d = graph.model().expected_average_degree();
    let size = members.iter().filter(|&&m| m).count() as f64;
    let internal: usize = (0..graph.n())
        .filter(|&i| members[i])
        .map(|i| graph.neighbors(i).iter().filter(|&&j| members[j as usize]).count())
        .sum();
    Ok(internal as f64 - d / graph.n() as f64 * size * size)
}

/// Greedy single-vertex-flip local search, best of `restarts` random starts.
///
/// Restart `r` is seeded from `(seed, r)` alone, so adding restarts never
/// lowers the result. Only a strict improvement replaces the incumbent.
pub fn modularity_search(
    graph: &Graph,
    restarts: usize,
    seed: u64,
    objective: ModularityObjective,
) -> Result<ModularitySet> {
    if graph.num_blocks() != 1 {
        return Err(Error::Unsupported(format!(
            "modularity-set condition is defined for a single block, got {}",
            graph.num_blocks()
        )));
    }
    if restarts == 0 {
        return Err(invalid("restarts must be at least 1"));
    }
    let n = graph.n();
    let ratio = graph.model().expected_average_degree() / n as f64;
    let mut best = ModularitySet { members: vec![false; n], internal: 0, deviation: 0.0, restart: 0 };
    let mut best_score = objective.score(0.0);
    if ratio == 0.0 && graph.num_edges() == 0 {
        return Ok(best);
    }
    for r in 0..restarts {
        let mut rng = rng_from_seed(derive_seed(seed, stream::MODULARITY, r as u64));
        let cand = local_search(graph, ratio, objective, &mut rng);
        let score = objective.score(cand.deviation);
        if score > best_score {
            best_score = score;
            best = ModularitySet { restart: r, ..cand };
        }
    }
    Ok(best)
}

fn local_search(
    graph: &Graph,
    ratio: f64,
    objective: ModularityObjective,
    rng: &mut impl Rng,
) -> ModularitySet {
    let n = graph.n();
    let members: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
    // nbr[i] = number of neighbors of i inside H
    let mut nbr = vec![0u32; n];
    let mut internal: i64 = 0;
    let mut size: i64 = 0;
    for i in 0..n {
        if members[i] {
            size += 1;
            for &j in graph.neighbors(i) {
                nbr[j as usize] += 1;
            }
        }
    }
    for i in 0..n {
        if members[i] {
            internal += nbr[i] as i64;
        }
    }
    let mut members = members;
    let dev = |internal: i64, size: i64| internal as f64 - ratio * (size * size) as f64;
    let mut current = objective.score(dev(internal, size));
    let mut order: Vec<usize> = (0..n).collect();
    for _pass in 0..1000 {
        order.shuffle(rng);
        let mut improved = false;
        for &v in &order {
            let (new_internal, new_size) = if members[v] {
                (internal - 2 * nbr[v] as i64, size - 1)
            } else {
                (internal + 2 * nbr[v] as i64, size + 1)
            };
            let score = objective.score(dev(new_internal, new_size));
            if score > current {
                let joining = !members[v];
                members[v] = joining;
                for &j in graph.neighbors(v) {
                    if joining {
                        nbr[j as usize] += 1;
                    } else {
                        nbr[j as usize] -= 1;
                    }
                }
                internal = new_internal;
                size = new_size;
                current = score;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    ModularitySet { members, internal: internal as u64, deviation: dev(internal, size), restart: 0 }
}

/// Catalyst condition from the indicator `u` of a high-deviation set `H`:
/// `z_a = z_c = u/2`, `z_b = 1 - u` over the states `(a, b, c)`.
pub fn ic_modularity_set(graph: &Graph, restarts: usize, seed: u64) -> Result<InitialCondition> {
    ic_modularity_set_with(graph, restarts, seed, ModularityObjective::Absolute, [0, 1, 2], 3).map(|(ic, _)| ic)
}

/// [`ic_modularity_set`] with an explicit objective and state layout; also
/// returns the set found.
pub fn ic_modularity_set_with(
    graph: &Graph,
    restarts: usize,
    seed: u64,
    objective: ModularityObjective,
    [a, b, c]: [usize; 3],
    n_states: usize,
) -> Result<(InitialCondition, ModularitySet)> {
    for (name, s) in [("a", a), ("b", b), ("c", c)] {
        check_state(name, s, n_states)?;
    }
    if a == b || b == c || a == c {
        return Err(invalid("states a, b, c must be distinct"));
    }
    let set = modularity_search(graph, restarts, seed, objective)?;
    let mut z0 = vec![0.0; graph.n() * n_states];
    for (i, &m) in set.members.iter().enumerate() {
        let row = &mut z0[i * n_states..(i + 1) * n_states];
        if m {
            row[a] = 0.5;
            row[c] = 0.5;
        } else {
            row[b] = 1.0;
        }
    }
    let provenance = format!(
        "modularity_set(restarts={restarts}, seed={seed}, objective={objective:?}, size={}, deviation={})",
        set.size(),
        set.deviation
    );
    Ok((InitialCondition::new(n_states, z0, provenance)?, set))
}

/// Draws each vertex's state independently from its row.
pub fn ic_bernoulli_sample(ic: &InitialCondition, seed: u64) -> Vec<u8> {
    let mut rng = rng_from_seed(seed);
    sample_states(ic, &mut rng)
}

pub(crate) fn sample_states(ic: &InitialCondition, rng: &mut impl Rng) -> Vec<u8> {
    let s = ic.n_states();
    (0..ic.n())
        .map(|i| {
            let row = ic.row(i);
            let u: f64 = rng.random();
            let mut acc = 0.0;
            for (state, &p) in row.iter().enumerate() {
                acc += p;
                if u < acc {
                    return state as u8;
                }
            }
            // rounding left u above the total; take the last state with mass
            row.iter().rposition(|&p| p > 0.0).unwrap_or(s - 1) as u8
        })
        .collect()
}

/// Within-block spread of the initial probabilities, per state.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneityReport {
    /// `(1/N) sum_k sum_{i in I_k} (z_{i,s} - zbar_{k,s})^2` for each `s`.
    pub per_state_statistic: Vec<f64>,
    /// `c0 / d`
    pub threshold: f64,
    pub satisfied: Vec<bool>,
}

impl HomogeneityReport {
    pub fn all_satisfied(&self) -> bool {
        self.satisfied.iter().all(|&s| s)
    }

    pub fn max_statistic(&self) -> f64 {
        self.per_state_statistic.iter().copied().fold(0.0, f64::max)
    }
}

pub fn homogeneity_statistic(ic: &InitialCondition, graph: &Graph, c0: f64) -> Result<HomogeneityReport> {
    let model = graph.model();
    let means = ic.block_means(model)?;
    let s = ic.n_states();
    let mut stat = vec![0.0; s];
    for i in 0..graph.n() {
        let k = graph.block_of(i);
        for (state, z) in ic.row(i).iter().enumerate() {
            stat[state] += (z - means[k * s + state]).powi(2);
        }
    }
    let n = graph.n() as f64;
    stat.iter_mut().for_each(|v| *v /= n);
    let d = model.expected_average_degree();
    let threshold = if d > 0.0 { c0 / d } else { f64::INFINITY };
    let satisfied = stat.iter().map(|&v| v <= threshold).collect();
    Ok(HomogeneityReport { per_state_statistic: stat, threshold, satisfied })
}

/// Degree fluctuation `(1/N) sum_i (delta_i / d - 1)^2`.
pub fn degree_fluctuation(graph: &Graph) -> f64 {
    let d = graph.model().expected_average_degree();
    if d <= 0.0 {
        return 0.0;
    }
    (0..graph.n()).map(|i| (graph.degree(i) as f64 / d - 1.0).powi(2)).sum::<f64>() / graph.n() as f64
}

/// Generator selection as it appears in configuration files, e.g.
/// `{"kind": "degree_proportional", "kappa": 0.1}`.
///
/// States are referred to by label. Where a generator needs an infected and
/// a susceptible state they default to the second and first state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IcSpec {
    /// Every vertex surely starts in `state`.
    Pure { state: String },
    /// The same row at every vertex.
    Homogeneous { values: Vec<f64> },
    /// One row per block.
    BlockConstant { values: Vec<Vec<f64>> },
    DegreeProportional {
        kappa: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        infected: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        susceptible: Option<String>,
    },
    Perron {
        kappa: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        infected: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        susceptible: Option<String>,
        #[serde(default = "default_perron_tol")]
        tol: f64,
    },
    /// Catalyst condition on a high-deviation vertex set; needs a process
    /// with catalyst structure or states labelled `a`, `b`, `c`.
    ModularitySet {
        #[serde(default = "default_restarts")]
        restarts: usize,
        #[serde(default)]
        objective: ModularityObjective,
    },
    /// Explicit rows, one per vertex.
    Vertices { rows: Vec<Vec<f64>> },
}

fn default_perron_tol() -> f64 {
    1e-10
}

fn default_restarts() -> usize {
    32
}

impl IcSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            IcSpec::Pure { .. } => "pure",
            IcSpec::Homogeneous { .. } => "homogeneous",
            IcSpec::BlockConstant { .. } => "block_constant",
            IcSpec::DegreeProportional { .. } => "degree_proportional",
            IcSpec::Perron { .. } => "perron",
            IcSpec::ModularitySet { .. } => "modularity_set",
            IcSpec::Vertices { .. } => "vertices",
        }
    }

    /// Per-block rows when the condition depends on block membership only.
    pub fn block_rows(&self, num_blocks: usize, spec: &ProcessSpec) -> Option<Result<Vec<Vec<f64>>>> {
        let s = spec.n_states();
        match self {
            IcSpec::Pure { state } => Some(spec.index(state).map(|x| {
                let mut row = vec![0.0; s];
                row[x] = 1.0;
                vec![row; num_blocks]
            })),
            IcSpec::Homogeneous { values } => Some(if values.len() == s {
                Ok(vec![values.clone(); num_blocks])
            } else {
                Err(Error::DimensionMismatch { expected: s, got: values.len() })
            }),
            IcSpec::BlockConstant { values } => Some(if values.len() == num_blocks {
                Ok(values.clone())
            } else {
                Err(Error::DimensionMismatch { expected: num_blocks, got: values.len() })
            }),
            _ => None,
        }
    }

    pub fn build(&self, graph: &Graph, spec: &ProcessSpec, seed: u64) -> Result<InitialCondition> {
        let s = spec.n_states();
        if let Some(rows) = self.block_rows(graph.num_blocks(), spec) {
            let rows = rows?;
            if let Some(r) = rows.iter().find(|r| r.len() != s) {
                return Err(Error::DimensionMismatch { expected: s, got: r.len() });
            }
            let mut ic = ic_block_constant(&rows, graph)?;
            ic.provenance = self.kind().to_string();
            return Ok(ic);
        }
        let pair = |infected: &Option<String>, susceptible: &Option<String>| -> Result<(usize, usize)> {
            if s < 2 {
                return Err(invalid("this initial condition needs at least two states"));
            }
            let inf = infected.as_deref().map_or(Ok(1), |l| spec.index(l))?;
            let sus = susceptible.as_deref().map_or(Ok(0), |l| spec.index(l))?;
            Ok((inf, sus))
        };
        match self {
            IcSpec::DegreeProportional { kappa, infected, susceptible } => {
                let (inf, sus) = pair(infected, susceptible)?;
                ic_degree_proportional(graph, *kappa, s, inf, sus)
            }
            IcSpec::Perron { kappa, infected, susceptible, tol } => {
                let (inf, sus) = pair(infected, susceptible)?;
                ic_perron(graph, *kappa, s, inf, sus, *tol)
            }
            IcSpec::ModularitySet { restarts, objective } => {
                let abc = match spec.closed_form_tag() {
                    ClosedFormTag::Catalyst { a, b, c, .. } => [a, b, c],
                    _ => [spec.index("a")?, spec.index("b")?, spec.index("c")?],
                };
                ic_modularity_set_with(graph, *restarts, seed, *objective, abc, s).map(|(ic, _)| ic)
            }
            IcSpec::Vertices { rows } => {
                check_len(graph.n(), rows.len())?;
                if let Some(r) = rows.iter().find(|r| r.len() != s) {
                    return Err(Error::DimensionMismatch { expected: s, got: r.len() });
                }
                InitialCondition::new(s, rows.concat(), "vertices")
            }
            IcSpec::Pure { .. } | IcSpec::Homogeneous { .. } | IcSpec::BlockConstant { .. } => {
                unreachable!("handled as block rows")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sbm_generate, SbmParams};

    fn complete(n: usize) -> Graph {
        sbm_generate(&SbmParams::erdos_renyi(n, 1.0), 0).unwrap()
    }

    fn star(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (1..n as u32).map(|j| (0, j)).collect();
        Graph::from_edges(SbmParams::erdos_renyi(n, 0.5), &edges, None).unwrap()
    }

    #[test]
    fn block_constant_has_zero_statistic() {
        let params = SbmParams::new(10, vec![0.5, 0.5], 0.5, vec![vec![1.0, 0.5], vec![0.5, 1.0]]);
        let g = sbm_generate(&params, 3).unwrap();
        let ic = ic_block_constant(&[vec![1.0, 0.0], vec![0.25, 0.75]], &g).unwrap();
        let rep = homogeneity_statistic(&ic, &g, 1.0).unwrap();
        assert_eq!(rep.per_state_statistic, vec![0.0, 0.0]);
        assert!(rep.all_satisfied());
        assert!(ic_block_constant(&[vec![1.0, 0.1], vec![0.5, 0.5]], &g).is_err());
    }

    #[test]
    fn two_point_spread_gives_one_quarter() {
        let g = complete(8);
        let states: Vec<u8> = (0..8).map(|i| (i % 2) as u8).collect();
        let ic = InitialCondition::from_states(2, &states).unwrap();
        let rep = homogeneity_statistic(&ic, &g, 1.0).unwrap();
        assert_eq!(rep.per_state_statistic, vec![0.25, 0.25]);
    }

    #[test]
    fn degree_proportional_on_regular_graph_is_homogeneous() {
        let g = complete(6);
        let ic = ic_degree_proportional(&g, 0.3, 2, 1, 0).unwrap();
        assert!(ic.z0().chunks(2).all(|r| (r[1] - 0.3).abs() < 1e-15));
        assert!(homogeneity_statistic(&ic, &g, 1.0).unwrap().max_statistic() < 1e-30);
        assert!(ic_degree_proportional(&g, 1.5, 2, 1, 0).is_err());
        let zero = ic_degree_proportional(&g, 0.0, 2, 1, 0).unwrap();
        assert!(zero.z0().chunks(2).all(|r| r == [1.0, 0.0]));
    }

    #[test]
    fn perron_on_star_has_ratio_two() {
        let pv = perron_vector(&star(5), 1e-13, 100_000).unwrap();
        assert!((pv.eigenvalue - 2.0).abs() < 1e-10);
        for leaf in 1..5 {
            assert!((pv.vector[0] / pv.vector[leaf] - 2.0).abs() < 1e-9);
        }
        let ic = ic_perron(&star(5), 0.5, 2, 1, 0, 1e-13).unwrap();
        assert!((ic.row(0)[1] / ic.row(3)[1] - 2.0).abs() < 1e-9);
        let total: f64 = ic.column(1).iter().sum();
        assert!((total - 0.5).abs() < 1e-12);
    }

    #[test]
    fn perron_on_complete_graph_is_uniform() {
        let ic = ic_perron(&complete(7), 0.7, 3, 1, 0, 1e-12).unwrap();
        for i in 0..7 {
            assert!((ic.row(i)[1] - 0.1).abs() < 1e-12);
        }
        assert!(!ic.provenance().contains("disconnected"));
    }

    #[test]
    fn perron_flags_disconnected_graphs() {
        // a triangle and a single edge: the triangle dominates
        let edges = [(0, 1), (1, 2), (0, 2), (3, 4)];
        let g = Graph::from_edges(SbmParams::erdos_renyi(5, 0.5), &edges, None).unwrap();
        let ic = ic_perron(&g, 0.3, 2, 1, 0, 1e-12).unwrap();
        assert!(ic.provenance().contains("disconnected"));
        assert_eq!(ic.row(3)[1], 0.0);
        assert!((ic.row(0)[1] - 0.1).abs() < 1e-12);
        let empty = sbm_generate(&SbmParams::erdos_renyi(5, 0.0), 0).unwrap();
        assert!(ic_perron(&empty, 0.1, 2, 1, 0, 1e-9).is_err());
    }

    #[test]
    fn modularity_on_empty_graph_is_degenerate() {
        let g = sbm_generate(&SbmParams::erdos_renyi(20, 0.0), 0).unwrap();
        let (ic, set) = ic_modularity_set_with(&g, 4, 1, ModularityObjective::Absolute, [0, 1, 2], 3).unwrap();
        assert_eq!(set.size(), 0);
        assert_eq!(set.deviation, 0.0);
        assert!(ic.z0().chunks(3).all(|r| r == [0.0, 1.0, 0.0]));
    }

    #[test]
    fn modularity_rejects_multiple_blocks() {
        let params = SbmParams::new(10, vec![0.5, 0.5], 0.5, vec![vec![1.0, 0.5], vec![0.5, 1.0]]);
        let g = sbm_generate(&params, 3).unwrap();
        assert!(matches!(ic_modularity_set(&g, 2, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn modularity_incremental_count_matches_recount() {
        let g = sbm_generate(&SbmParams::erdos_renyi(60, 0.2), 9).unwrap();
        let set = modularity_search(&g, 5, 2, ModularityObjective::Absolute).unwrap();
        let recount = modularity_deviation(&g, &set.members).unwrap();
        assert!((recount - set.deviation).abs() < 1e-9);
    }

    #[test]
    fn bernoulli_point_masses_are_deterministic() {
        let ic = InitialCondition::from_states(3, &[0, 2, 1, 1]).unwrap();
        assert_eq!(ic_bernoulli_sample(&ic, 5), vec![0, 2, 1, 1]);
        assert_eq!(ic_bernoulli_sample(&ic, 6), vec![0, 2, 1, 1]);
    }

    #[test]
    fn off_simplex_rows_are_rejected() {
        assert!(InitialCondition::new(2, vec![0.5, 0.6], "x").is_err());
        assert!(InitialCondition::new(2, vec![-0.1, 1.1], "x").is_err());
        assert!(InitialCondition::new(2, vec![0.5, 0.5, 1.0], "x").is_err());
    }
}
