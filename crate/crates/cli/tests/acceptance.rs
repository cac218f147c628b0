//! End-to-end acceptance suite.
//!
//! Runs every check in sequence, prints one PASS/FAIL line per check and
//! exits non-zero if any failed. A check also fails when it overruns its
//! time budget.

use std::time::{Duration, Instant};

use nimfa_cli::{run, Command, ExperimentConfig, Overrides};
use nimfa_core::analysis::stats::ols_slope;
use nimfa_core::graph::default_max_iter;
use nimfa_core::initcond::modularity_deviation;
use nimfa_core::process::{InteractionEntry, SpontaneousEntry};
use nimfa_core::rng::{derive_seed, stream};
use nimfa_core::simulate::{ensemble_mean, Simulator};
use nimfa_core::{
    annealed_nimfa_solve, bhmfa_solve, degree_error_closed_form, error_estimate, gillespie_ensemble,
    homogeneity_statistic, ic_degree_proportional, ic_modularity_set, master_equation_solve, nimfa_solve,
    normalized_adjacency_apply, preset_catalyst, preset_degree, preset_sir, sbm_generate, scaling_sweep,
    spectral_deviation, ErrorConfig, ErrorReport, Estimator, Graph, GraphSource, IcSpec, InitialCondition,
    ModularityObjective, Parallelism, ProcessSpec, SbmParams, SolverOptions, SweepConfig, SweepMetric, TimeGrid,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRng, TestRunner};
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

struct Check {
    id: u32,
    title: &'static str,
    budget: Duration,
    body: fn() -> Outcome,
}

fn main() {
    let checks = [
        Check { id: 1, title: "closed-form solver checks", budget: secs(10), body: closed_form_solvers },
        Check { id: 2, title: "block-averaging identity", budget: secs(30), body: block_averaging },
        Check { id: 3, title: "ensemble vs master equation", budget: secs(300), body: exact_oracle },
        Check { id: 4, title: "degree error formula", budget: secs(600), body: degree_error_formula },
        Check { id: 5, title: "degree error scaling", budget: secs(1800), body: degree_scaling },
        Check { id: 6, title: "catalyst gap scaling", budget: secs(1200), body: catalyst_scaling },
        Check { id: 7, title: "homogeneity gate", budget: secs(300), body: homogeneity_gate },
        Check { id: 8, title: "spectral concentration", budget: secs(600), body: spectral_concentration },
        Check { id: 9, title: "property suites", budget: secs(300), body: property_suites },
    ];
    let only: Vec<u32> = std::env::var("ACCEPTANCE_ONLY")
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failed = 0;
    for check in checks.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let outcome = (check.body)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= check.budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{}] {}: {} ({:.1} s of {} s)",
            if ok { "PASS" } else { "FAIL" },
            check.id,
            check.title,
            detail,
            elapsed.as_secs_f64(),
            check.budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance check(s) failed");
        std::process::exit(1);
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_rows(n: usize, s: usize, seed: u64) -> Vec<f64> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .flat_map(|_| {
            let raw: Vec<f64> = (0..s).map(|_| rng.random::<f64>()).collect();
            let sum: f64 = raw.iter().sum();
            raw.into_iter().map(move |x| x / sum)
        })
        .collect()
}

fn ic(s: usize, rows: Vec<f64>) -> InitialCondition {
    InitialCondition::new(s, rows, "acceptance").unwrap()
}

fn closed_form_solvers() -> Outcome {
    let (n, d) = (1000usize, 50.0);
    let g = sbm_generate(&SbmParams::erdos_renyi(n, d / (n - 1) as f64), 1).unwrap();
    let grid = TimeGrid::uniform(2.0, 41).unwrap();
    let opts = SolverOptions::default();

    let start = ic(3, random_rows(n, 3, 2));
    let sol = nimfa_solve(&g, &preset_catalyst(), &start, &grid, &opts).unwrap();
    let field = normalized_adjacency_apply(&g, &start.column(2)).unwrap();
    let mut catalyst_err = 0.0f64;
    for (gi, &t) in grid.times().iter().enumerate() {
        for i in 0..n {
            let z = start.row(i);
            let a = z[0] * (-t * field[i]).exp();
            let expect = [a, z[1] + z[0] - a, z[2]];
            for (s, e) in expect.iter().enumerate() {
                catalyst_err = catalyst_err.max((sol.value(gi, i, s) - e).abs());
            }
        }
    }

    let sol = nimfa_solve(&g, &preset_degree(), &InitialCondition::from_states(2, &vec![0; n]).unwrap(), &grid, &opts)
        .unwrap();
    let scale = 1.0 / (n as f64 * g.rho());
    let mut degree_err = 0.0f64;
    for (gi, &t) in grid.times().iter().enumerate() {
        for i in 0..n {
            let a = (-(g.degree(i) as f64) * t * scale).exp();
            degree_err = degree_err.max((sol.value(gi, i, 0) - a).abs()).max((sol.value(gi, i, 1) - (1.0 - a)).abs());
        }
    }
    ensure(
        catalyst_err <= 1e-8 && degree_err <= 1e-8,
        format!("max abs error catalyst {catalyst_err:.2e}, degree {degree_err:.2e} (limit 1e-8)"),
    )
}

fn block_averaging() -> Outcome {
    let presets = [preset_sir(1.7, 0.6).unwrap(), preset_catalyst(), preset_degree()];
    let opts = SolverOptions::default();
    let mut worst = 0.0f64;
    for case in 0..20u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1000 + case);
        let spec = &presets[case as usize % 3];
        let k = rng.random_range(1..=4usize);
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.5..1.5)).collect();
        let total: f64 = raw.iter().sum();
        let fractions = raw.iter().map(|f| f / total).collect();
        let mut weights = vec![vec![0.0; k]; k];
        for a in 0..k {
            for b in a..k {
                let w = rng.random_range(0.1..1.0);
                weights[a][b] = w;
                weights[b][a] = w;
            }
        }
        let params = SbmParams::new(rng.random_range(40..200), fractions, rng.random_range(0.05..0.6), weights);
        let g = sbm_generate(&params, case).unwrap();
        let s = spec.n_states();
        let start = ic(s, random_rows(g.n(), s, 2000 + case));
        let grid = TimeGrid::uniform(2.0, 11).unwrap();
        let z_hat = annealed_nimfa_solve(g.model(), spec, &start, &grid, &opts).unwrap();
        let x = bhmfa_solve(g.model(), spec, &start.block_means(g.model()).unwrap(), &grid, &opts).unwrap();
        let avg = z_hat.block_averages(g.model()).unwrap();
        worst = avg.iter().zip(&x.values).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    ensure(worst <= 2.0 * opts.tol, format!("20 triples, worst deviation {worst:.2e} (limit {:.0e})", 2.0 * opts.tol))
}

fn two_state_spec(recovery: f64) -> ProcessSpec {
    let spont: Vec<SpontaneousEntry> = if recovery > 0.0 {
        vec![SpontaneousEntry { from: "I".into(), to: "S".into(), rate: recovery }]
    } else {
        vec![]
    };
    let inter = [InteractionEntry { neighbor: "I".into(), from: "S".into(), to: "I".into(), rate: 1.5 }];
    ProcessSpec::new(vec!["S".into(), "I".into()], &spont, &inter).unwrap()
}

fn exact_oracle() -> Outcome {
    let two_blocks = |n: usize, rho: f64| SbmParams::new(n, vec![0.5, 0.5], rho, vec![vec![1.0, 0.4], vec![0.4, 0.9]]);
    let instances: Vec<(&str, SbmParams, ProcessSpec, InitialCondition)> = vec![
        ("SI N=16", SbmParams::erdos_renyi(16, 0.3), two_state_spec(0.0), ic(2, [0.85, 0.15].repeat(16))),
        ("SIS N=16", two_blocks(16, 0.5), two_state_spec(1.0), ic(2, random_rows(16, 2, 31))),
        ("degree N=16", two_blocks(16, 0.6), preset_degree(), InitialCondition::from_states(2, &[0; 16]).unwrap()),
        ("catalyst N=10", SbmParams::erdos_renyi(10, 0.5), preset_catalyst(), ic(3, random_rows(10, 3, 32))),
        ("SIR N=10", two_blocks(10, 0.7), preset_sir(2.0, 0.8).unwrap(), ic(3, [0.8, 0.2, 0.0].repeat(10))),
    ];
    let grid = TimeGrid::uniform(2.0, 11).unwrap();
    let mut worst_z = 0.0f64;
    let mut cells = 0;
    let mut bad = vec![];
    for (seed, (name, params, spec, start)) in instances.iter().enumerate() {
        let g = sbm_generate(params, seed as u64).unwrap();
        let exact = master_equation_solve(&g, spec, start, &grid).unwrap();
        let samples =
            gillespie_ensemble(&g, spec, start, &grid, 10_000, 50 + seed as u64, Parallelism::available()).unwrap();
        let (mean, se) = ensemble_mean(&samples);
        for (idx, (m, s)) in mean.iter().zip(&se).enumerate() {
            let diff = (m - exact.means[idx]).abs();
            cells += 1;
            if diff > 4.0 * s + 1e-12 {
                bad.push(format!("{name} cell {idx}"));
            }
            if *s > 0.0 {
                worst_z = worst_z.max(diff / s);
            }
        }
    }
    ensure(
        bad.is_empty(),
        format!("{} instances, {cells} cells, worst |z| {worst_z:.2}{}", instances.len(), fmt_bad(&bad)),
    )
}

fn fmt_bad(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; outside 4 SE: {}", bad.join(", "))
    }
}

fn degree_error_formula() -> Outcome {
    let grid = TimeGrid::uniform(1.0, 2).unwrap();
    let mut parts = vec![];
    let mut bad = vec![];
    for (i, (n, d)) in [(1usize << 12, 16.0), (1 << 12, 64.0), (1 << 14, 32.0)].into_iter().enumerate() {
        let config = ErrorConfig {
            n_graphs: 30,
            n_replicates: 100,
            master_seed: 400 + i as u64,
            parallelism: Parallelism::available(),
            ..ErrorConfig::default()
        };
        let source = GraphSource::Sbm(SbmParams::erdos_renyi(n, d / (n - 1) as f64));
        let rep = error_estimate(&source, &preset_degree(), &IcSpec::Pure { state: "a".into() }, &grid, &config)
            .unwrap();
        let (e, se) = rep.cell(1, 0, 0);
        let exact = degree_error_closed_form(n, d, 1.0).unwrap();
        let z = (e - exact) / se;
        parts.push(format!("(N={n}, d={d}) {e:.5} vs {exact:.5} z={z:+.2}"));
        if z.abs() > 4.0 {
            bad.push(format!("N={n} d={d}"));
        }
    }
    ensure(bad.is_empty(), format!("{}{}", parts.join("; "), fmt_bad(&bad)))
}

fn degree_sweep(alpha: f64, t_end: f64, estimator: Estimator) -> nimfa_core::SweepResult {
    let config = SweepConfig {
        n_values: (10..=16).map(|e| 1usize << e).collect(),
        alpha,
        t_end,
        metric: SweepMetric::ApproximationError { estimator },
        n_graphs: 12,
        seed: 500,
        parallelism: Parallelism::available(),
        ..SweepConfig::default()
    };
    scaling_sweep(&preset_degree(), &config).unwrap()
}

fn degree_scaling() -> Outcome {
    // At t = 1 the 1/sqrt(N) term still tilts the alpha = 0.4 slope at these
    // sizes, so the fit uses t = 2 where the 1/d term dominates.
    let t_end = 2.0;
    let low = degree_sweep(0.4, t_end, Estimator::ClosedForm);
    let high = degree_sweep(0.8, t_end, Estimator::ClosedForm);
    let low_sampled = degree_sweep(0.4, t_end, Estimator::Conditional);
    let high_sampled = degree_sweep(0.8, t_end, Estimator::Conditional);
    let at_one = degree_sweep(0.4, 1.0, Estimator::ClosedForm).slope_vs_d.est;
    let ok = low.slope_vs_d.within(-1.15, -0.85)
        && high.slope_vs_n.within(-0.65, -0.35)
        && (-1.15..=-0.85).contains(&low_sampled.slope_vs_d.est)
        && (-0.65..=-0.35).contains(&high_sampled.slope_vs_n.est);
    ensure(
        ok,
        format!(
            "t={t_end}: slope vs d {:.3}, slope vs N {:.3}; sampled graphs {:.3} [{:.3}, {:.3}], {:.3} [{:.3}, {:.3}]; \
             slope vs d at t=1 {at_one:.3}",
            low.slope_vs_d.est,
            high.slope_vs_n.est,
            low_sampled.slope_vs_d.est,
            low_sampled.slope_vs_d.lo,
            low_sampled.slope_vs_d.hi,
            high_sampled.slope_vs_n.est,
            high_sampled.slope_vs_n.lo,
            high_sampled.slope_vs_n.hi,
        ),
    )
}

fn catalyst_scaling() -> Outcome {
    let config = SweepConfig {
        n_values: (10..=14).map(|e| 1usize << e).collect(),
        alpha: 0.4,
        t_end: 1.0,
        n_points: 2,
        metric: SweepMetric::CatalystGap,
        ic: IcSpec::ModularitySet { restarts: 8, objective: ModularityObjective::default() },
        n_graphs: 10,
        seed: 600,
        parallelism: Parallelism::available(),
        ..SweepConfig::default()
    };
    let res = scaling_sweep(&preset_catalyst(), &config).unwrap();
    let held = res.points.iter().all(|p| p.bound_held == Some(true));
    let slope = res.slope_vs_d;
    ensure(
        slope.within(-0.65, -0.35) && held,
        format!(
            "slope vs d {:.3} [{:.3}, {:.3}], lower bound held on all {} instances: {held}",
            slope.est,
            slope.lo,
            slope.hi,
            res.points.len() * config.n_graphs
        ),
    )
}

fn homogeneity_gate() -> Outcome {
    let (n, d) = (1usize << 12, 64.0);
    let params = SbmParams::erdos_renyi(n, d / (n - 1) as f64);
    let (mut degree_ok, mut modular_violates) = (0, 0);
    let mut largest = 0.0f64;
    for seed in 0..30u64 {
        let g = sbm_generate(&params, derive_seed(700, stream::GRAPH, seed)).unwrap();
        let proportional = ic_degree_proportional(&g, 0.1, 2, 1, 0).unwrap();
        let rep = homogeneity_statistic(&proportional, &g, 1.0).unwrap();
        largest = largest.max(rep.max_statistic());
        degree_ok += rep.all_satisfied() as usize;
        let modular = ic_modularity_set(&g, 4, derive_seed(700, stream::MODULARITY, seed)).unwrap();
        modular_violates += !homogeneity_statistic(&modular, &g, 1.0).unwrap().all_satisfied() as usize;
    }
    ensure(
        degree_ok >= 28 && modular_violates == 30,
        format!(
            "degree-proportional satisfied on {degree_ok}/30 (largest {largest:.2e} vs 1/d = {:.2e}), \
             modularity set violates on {modular_violates}/30",
            1.0 / d
        ),
    )
}

fn spectral_concentration() -> Outcome {
    let n = 1usize << 12;
    let mut log_d = vec![];
    let mut log_norm = vec![];
    let mut scaled = vec![];
    let mut unconverged = 0;
    for e in 4..=8 {
        let d = (1usize << e) as f64;
        let params = SbmParams::erdos_renyi(n, d / (n - 1) as f64);
        let values: Vec<f64> = (0..10u64)
            .map(|s| {
                let g = sbm_generate(&params, derive_seed(800 + e, stream::GRAPH, s)).unwrap();
                let est = spectral_deviation(&g, 1e-6, default_max_iter(n, 1e-6)).unwrap();
                unconverged += !est.converged as usize;
                est.value
            })
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        log_d.push(d.ln());
        log_norm.push(mean.ln());
        scaled.push(mean * d.sqrt());
    }
    let slope = ols_slope(&log_d, &log_norm);
    let width = scaled.iter().cloned().fold(f64::MIN, f64::max) - scaled.iter().cloned().fold(f64::MAX, f64::min);
    let shown: Vec<String> = scaled.iter().map(|v| format!("{v:.3}")).collect();
    ensure(
        width < 0.5 && (-0.6..=-0.4).contains(&slope),
        format!(
            "sqrt(d) * norm = [{}], band width {width:.3}, slope {slope:.3} ({unconverged}/50 hit the iteration cap)",
            shown.join(", ")
        ),
    )
}

fn random_spec(rates: &[f64]) -> ProcessSpec {
    let labels = ["x", "y", "z"];
    let mut spont = vec![];
    let mut inter = vec![];
    let mut it = rates.iter();
    for from in labels {
        for to in labels {
            if from == to {
                continue;
            }
            spont.push(SpontaneousEntry { from: from.into(), to: to.into(), rate: *it.next().unwrap() });
            for nb in labels {
                inter.push(InteractionEntry {
                    neighbor: nb.into(),
                    from: from.into(),
                    to: to.into(),
                    rate: *it.next().unwrap(),
                });
            }
        }
    }
    ProcessSpec::new(labels.iter().map(|s| s.to_string()).collect(), &spont, &inter).unwrap()
}

fn block_permutation(g: &Graph, seed: u64) -> Vec<u32> {
    use rand::seq::SliceRandom;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<u32> = (0..g.n() as u32).collect();
    for k in 0..g.num_blocks() {
        perm[g.model().block_range(k)].shuffle(&mut rng);
    }
    perm
}

fn suite<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let config = Config { cases: 1000, failure_persistence: None, ..Config::default() };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    let mut runner = TestRunner::new_with_rng(config, rng);
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Outcome {
    suite(
        "simplex",
        (2usize..40, 0.0f64..1.0, 0.0f64..5.0, 0.0f64..5.0, any::<u64>()),
        |(n, rho, beta, gamma, seed)| {
            let g = sbm_generate(&SbmParams::erdos_renyi(n, rho), seed).unwrap();
            let start = ic(3, random_rows(n, 3, seed));
            let grid = TimeGrid::uniform(3.0, 7).unwrap();
            let spec = preset_sir(beta, gamma).unwrap();
            let sol = nimfa_solve(&g, &spec, &start, &grid, &SolverOptions::default()).unwrap();
            for row in sol.values.chunks(3) {
                prop_assert!(row.iter().all(|&v| v >= -1e-8));
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-8);
            }
            Ok(())
        },
    )?;

    suite(
        "counts and drift",
        (
            2usize..40,
            0.0f64..1.0,
            proptest::collection::vec(0.0f64..2.0, 24),
            proptest::collection::vec(0u8..3, 40),
            any::<u64>(),
        ),
        |(n, rho, rates, states, seed)| {
            let g = sbm_generate(&SbmParams::erdos_renyi(n, rho), seed).unwrap();
            let spec = random_spec(&rates);
            let mut sim = Simulator::new(&g, &spec, &states[..n]).unwrap();
            let mut rng = nimfa_core::rng::rng_from_seed(seed);
            for _ in 0..400 {
                if !sim.step_until(f64::INFINITY, &mut rng) {
                    break;
                }
            }
            prop_assert!(sim.counts_consistent());
            prop_assert!(sim.rate_drift() <= 1e-9 * (1.0 + sim.total_rate()));
            prop_assert_eq!(sim.block_counts().iter().sum::<u32>() as usize, n);
            Ok(())
        },
    )?;

    let commands = [Command::Generate, Command::Simulate, Command::Compare];
    suite("cli determinism", (6usize..40, 0.1f64..0.9, any::<u64>(), 0usize..3, 2usize..5), |(n, rho, seed, c, threads)| {
        let dir = tempfile::tempdir().unwrap();
        let text = format!(
            r#"{{"graph": {{"n": {n}, "fractions": [0.5, 0.5], "rho": {rho}, "weights": [[1.0, 0.4], [0.4, 0.8]]}},
                "process": {{"preset": "sir", "beta": 1.5, "gamma": 0.7}},
                "ic": {{"kind": "homogeneous", "values": [0.8, 0.2, 0.0]}},
                "time": {{"t_end": 1.0, "n_points": 5}},
                "replication": {{"n_graphs": 3, "n_replicates": 6}},
                "bootstrap": 20, "master_seed": {seed}}}"#
        );
        let config = ExperimentConfig::from_json(&text, "case").unwrap();
        let hashes = |p: usize| {
            let overrides = Overrides { seed: None, out: Some(dir.path().join(p.to_string())), parallelism: Some(p) };
            let m = run(commands[c], config.clone(), &overrides).unwrap();
            (m.config_sha256, m.outputs.into_iter().map(|o| (o.file, o.sha256)).collect::<Vec<_>>())
        };
        prop_assert_eq!(hashes(1), hashes(threads));
        Ok(())
    })?;

    suite("relabeling", (4usize..60, 0.05f64..0.9, any::<u64>(), any::<u64>()), |(n, rho, seed, pseed)| {
        let params = SbmParams::new(n, vec![0.4, 0.6], rho, vec![vec![1.0, 0.3], vec![0.3, 0.8]]);
        let g = sbm_generate(&params, seed).unwrap();
        let perm = block_permutation(&g, pseed);
        let edges: Vec<(u32, u32)> = g.edges().map(|(i, j)| (perm[i as usize], perm[j as usize])).collect();
        let h = Graph::from_edges(params, &edges, None).unwrap();
        let kappa = 0.5 * g.model().expected_average_degree() / g.max_degree().max(1) as f64;
        let ic_g = ic_degree_proportional(&g, kappa, 2, 1, 0).unwrap();
        let ic_h = ic_degree_proportional(&h, kappa, 2, 1, 0).unwrap();
        for i in 0..n {
            prop_assert_eq!(ic_g.row(i), ic_h.row(perm[i] as usize));
        }
        let a = homogeneity_statistic(&ic_g, &g, 1.0).unwrap().per_state_statistic;
        let b = homogeneity_statistic(&ic_h, &h, 1.0).unwrap().per_state_statistic;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-15 * (1.0 + x.abs()));
        }
        let members: Vec<bool> = (0..n).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
        let mut moved = vec![false; n];
        for i in 0..n {
            moved[perm[i] as usize] = members[i];
        }
        prop_assert_eq!(modularity_deviation(&g, &members).unwrap(), modularity_deviation(&h, &moved).unwrap());
        Ok(())
    })?;

    suite(
        "report order",
        (proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 4), 2..12), 0usize..12),
        |(rows, shift)| {
            let grid = TimeGrid::uniform(1.0, 2).unwrap();
            let report = |pg: Vec<Vec<f64>>| {
                ErrorReport::from_per_graph(Estimator::MonteCarlo, grid.clone(), 1, 2, pg, 10, 200, 7).unwrap()
            };
            let mut rotated = rows.clone();
            rotated.rotate_left(shift % rows.len());
            rotated.reverse();
            prop_assert_eq!(report(rows), report(rotated));
            Ok(())
        },
    )?;

    Ok("5 suites x 1000 cases: simplex, counts and drift, cli determinism, relabeling, report order".into())
}
