//! Subcommand implementations.

use std::path::PathBuf;
use std::time::Instant;

use nimfa_core::analysis::{diagnostics, error_estimate, scaling_sweep, GraphSource};
use nimfa_core::graph::write_edge_list;
use nimfa_core::io::{
    write_diagnostics, write_error_report, write_initial_condition, write_master_solution, write_solution,
    write_sweep, write_trajectories,
};
use nimfa_core::rng::{derive_seed, stream};
use nimfa_core::{
    annealed_nimfa_solve, bhmfa_solve, gillespie_ensemble, master_equation_solve, nimfa_solve, sbm_generate,
    ErrorConfig, Graph, InitialCondition, Parallelism, ProcessSpec, Variant,
};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::manifest::{sha256_hex, Manifest, OutputDir};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Generate,
    Simulate,
    Solve(Variant),
    Compare,
    Sweep,
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Simulate => "simulate",
            Command::Solve(_) => "solve",
            Command::Compare => "compare",
            Command::Sweep => "sweep",
            Command::Oracle => "oracle",
        }
    }
}

/// Command-line values that take precedence over the configuration file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub parallelism: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
        if let Some(out) = &self.out {
            config.output_dir = Some(out.clone());
        }
        if let Some(p) = self.parallelism {
            config.parallelism = Some(p);
        }
    }
}

struct Context {
    config: ExperimentConfig,
    spec: ProcessSpec,
    parallelism: Parallelism,
}

impl Context {
    fn graph(&self, g: u64) -> Result<Graph, CliError> {
        Ok(sbm_generate(self.config.graph()?, derive_seed(self.config.master_seed, stream::GRAPH, g))?)
    }

    fn initial(&self, graph: &Graph, g: u64) -> Result<InitialCondition, CliError> {
        Ok(self.config.ic()?.build(graph, &self.spec, derive_seed(self.config.master_seed, stream::INITIAL, g))?)
    }
}

/// Runs `command` and writes its outputs plus a manifest.
///
/// Graph `g` and its initial condition use the same seeds as graph `g` of
/// the error estimate, so `simulate`, `solve`, `oracle` and the diagnostics
/// of `compare` all refer to graph 0 of `compare`.
pub fn run(command: Command, mut config: ExperimentConfig, overrides: &Overrides) -> Result<Manifest, CliError> {
    let started = Instant::now();
    overrides.apply(&mut config);
    let out_dir = config
        .output_dir
        .clone()
        .ok_or_else(|| CliError::Config("no output directory: pass --out or set `output_dir`".into()))?;
    let parallelism = config.parallelism.map(Parallelism::new).unwrap_or_else(Parallelism::available);
    let spec = config.process.build()?;
    let ctx = Context { config, spec, parallelism };
    let mut out = OutputDir::create(&out_dir)?;
    match command {
        Command::Generate => generate(&ctx, &mut out)?,
        Command::Simulate => simulate(&ctx, &mut out)?,
        Command::Solve(variant) => solve(&ctx, variant, &mut out)?,
        Command::Compare => compare(&ctx, &mut out)?,
        Command::Sweep => sweep(&ctx, &mut out)?,
        Command::Oracle => oracle(&ctx, &mut out)?,
    }
    let hashed = hashed_config(&ctx.config);
    let manifest = Manifest {
        artifact: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.name().to_string(),
        config_sha256: sha256_hex(hashed.as_bytes()),
        master_seed: ctx.config.master_seed,
        parallelism: ctx.parallelism.threads(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        outputs: vec![],
        config: serde_json::from_str(&hashed).expect("canonical configuration parses"),
    };
    out.finish(manifest)
}

/// Canonical configuration without the fields that cannot change results.
pub fn hashed_config(config: &ExperimentConfig) -> String {
    let mut c = config.clone();
    c.output_dir = None;
    c.parallelism = None;
    c.canonical_json()
}

fn generate(ctx: &Context, out: &mut OutputDir) -> Result<(), CliError> {
    let n_graphs = ctx.config.replication.n_graphs.max(1);
    for g in 0..n_graphs {
        let graph = ctx.graph(g as u64)?;
        out.write_with(&format!("graph_{g:03}.edges"), |w| write_edge_list(w, &graph))?;
        if ctx.config.ic.is_some() {
            let ic = ctx.initial(&graph, g as u64)?;
            out.write_with(&format!("ic_{g:03}.csv"), |w| write_initial_condition(w, &ic))?;
        }
    }
    Ok(())
}

fn simulate(ctx: &Context, out: &mut OutputDir) -> Result<(), CliError> {
    let graph = ctx.graph(0)?;
    let ic = ctx.initial(&graph, 0)?;
    let grid = ctx.config.grid()?;
    let samples = gillespie_ensemble(
        &graph,
        &ctx.spec,
        &ic,
        &grid,
        ctx.config.replication.n_replicates,
        derive_seed(ctx.config.master_seed, stream::DYNAMICS, 0),
        ctx.parallelism,
    )?;
    out.write_with("trajectories.csv", |w| write_trajectories(w, &samples))
}

fn solve(ctx: &Context, variant: Variant, out: &mut OutputDir) -> Result<(), CliError> {
    let graph = ctx.graph(0)?;
    let ic = ctx.initial(&graph, 0)?;
    let grid = ctx.config.grid()?;
    let opts = &ctx.config.solver;
    let sol = match variant {
        Variant::Nimfa => nimfa_solve(&graph, &ctx.spec, &ic, &grid, opts)?,
        Variant::Annealed => annealed_nimfa_solve(graph.model(), &ctx.spec, &ic, &grid, opts)?,
        Variant::Bhmfa => bhmfa_solve(graph.model(), &ctx.spec, &ic.block_means(graph.model())?, &grid, opts)?,
    };
    out.write_with(&format!("solution_{}.csv", variant.name()), |w| write_solution(w, &sol))
}

fn compare(ctx: &Context, out: &mut OutputDir) -> Result<(), CliError> {
    let cfg = &ctx.config;
    let grid = cfg.grid()?;
    let ec = ErrorConfig {
        estimator: cfg.estimator,
        n_graphs: cfg.replication.n_graphs,
        n_replicates: cfg.replication.n_replicates,
        master_seed: cfg.master_seed,
        bootstrap: cfg.bootstrap,
        solver: cfg.solver,
        parallelism: ctx.parallelism,
    };
    let report = error_estimate(&GraphSource::Sbm(cfg.graph()?.clone()), &ctx.spec, cfg.ic()?, &grid, &ec)?;
    out.write_json("error_report.json", &report)?;
    out.write_with("error_report.csv", |w| write_error_report(w, &report))?;
    let graph = ctx.graph(0)?;
    let ic = ctx.initial(&graph, 0)?;
    let diag = diagnostics(&graph, &ctx.spec, &ic, &grid, &cfg.diagnostics)?;
    out.write_json("diagnostics.json", &diag)?;
    out.write_with("diagnostics.csv", |w| write_diagnostics(w, &diag))
}

fn sweep(ctx: &Context, out: &mut OutputDir) -> Result<(), CliError> {
    let mut sc = ctx.config.sweep_config()?;
    sc.parallelism = ctx.parallelism;
    let result = scaling_sweep(&ctx.spec, &sc)?;
    out.write_json("sweep.json", &result)?;
    out.write_with("sweep.csv", |w| write_sweep(w, &result))
}

fn oracle(ctx: &Context, out: &mut OutputDir) -> Result<(), CliError> {
    let graph = ctx.graph(0)?;
    let ic = ctx.initial(&graph, 0)?;
    let sol = master_equation_solve(&graph, &ctx.spec, &ic, &ctx.config.grid()?)?;
    out.write_with("master_solution.csv", |w| write_master_solution(w, &sol))
}
