use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tigris::bench::{generate_scenario, run_benchmark, BenchOptions};
use tigris::oracles;
use tigris::planner::{plan, plan_with_tree, PlannerKind, StopCondition, World};
use tigris::scenario::{ResultFile, Scenario, TrialsFile};
use tigris::Error;

#[derive(Parser)]
#[command(name = "tigris", about = "Informative path planning over belief grids", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StopArgs {
    /// Iteration-bounded planning (reproducible across machines).
    #[arg(long, conflicts_with = "seconds")]
    iterations: Option<u64>,
    /// Wall-clock-bounded planning in seconds.
    #[arg(long)]
    seconds: Option<f64>,
}

impl StopArgs {
    fn apply(&self, scenario: &mut Scenario) {
        if let Some(n) = self.iterations {
            scenario.planner.stop = StopCondition::Iterations(n);
        } else if let Some(t) = self.seconds {
            scenario.planner.stop = StopCondition::Seconds(t);
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one planner on one scenario and write the result.
    Plan {
        /// Scenario file; omitted: generate one from the desk template.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, default_value = "tigris", value_parser = parse_planner)]
        planner: PlannerKind,
        /// Overrides the scenario seed (and selects the generated scenario).
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        stop: StopArgs,
        /// Output directory; omitted: result TOML to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Paired Monte Carlo benchmark over generated scenarios.
    Bench {
        /// Template scenario; omitted: desk template.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        jobs: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Planners to compare, e.g. --planners tigris,rig
        #[arg(
            long,
            value_delimiter = ',',
            value_parser = parse_planner,
            default_values_t = [PlannerKind::Tigris, PlannerKind::Rig]
        )]
        planners: Vec<PlannerKind>,
        /// Disable bucket stratification of centroid counts.
        #[arg(long)]
        no_stratify: bool,
        #[command(flatten)]
        stop: StopArgs,
        #[arg(long, default_value = "bench-out")]
        out: PathBuf,
    },
    /// Render a stored result against its scenario.
    Render {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        result: PathBuf,
        #[arg(long, default_value = "render-out")]
        out: PathBuf,
    },
    /// Run the brute-force validation oracles and report agreement.
    Oracle {
        #[arg(long, default_value = "all")]
        which: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_planner(s: &str) -> Result<PlannerKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Parse(_) | Error::InvalidInput(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn load_or_generate(path: &Option<PathBuf>, seed: Option<u64>) -> Result<Scenario, Error> {
    let mut scenario = match path {
        Some(p) => Scenario::load(p)?,
        None => {
            let template = Scenario::desk_template();
            generate_scenario(seed.unwrap_or(0), &template)
        }
    };
    if let Some(s) = seed {
        scenario.seed = s;
        scenario.planner.seed = s;
    }
    Ok(scenario)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Plan {
            scenario,
            planner,
            seed,
            stop,
            out,
        } => {
            let mut sc = load_or_generate(&scenario, seed)?;
            stop.apply(&mut sc);
            sc.validate()?;
            let grid = sc.build_grid()?;
            let world = World {
                grid: &grid,
                sensor: &sc.sensor,
                weights: &sc.weights,
                zones: &sc.zones,
            };
            eprintln!(
                "planning: {} on {}x{} cells, budget {} m, seed {}",
                planner,
                grid.width_cells,
                grid.height_cells,
                sc.planner.budget,
                sc.planner.seed
            );
            let result = plan(&world, sc.start, &sc.planner, planner)?;
            eprintln!(
                "done: reward {:.3}, cost {:.1} m, {} nodes, {} iterations",
                result.info, result.cost, result.node_count, result.iterations
            );
            let file = ResultFile::new(result);
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    sc.save(&dir.join("scenario.toml"))?;
                    file.save(&dir.join("result.toml"))?;
                }
                None => println!("{}", file.to_toml()),
            }
            Ok(())
        }
        Command::Bench {
            scenario,
            trials,
            jobs,
            seed,
            planners,
            no_stratify,
            stop,
            out,
        } => {
            let mut template = load_or_generate(&scenario, seed)?;
            if let Some(s) = seed {
                template.seed = s;
            }
            stop.apply(&mut template);
            let opts = BenchOptions {
                trials,
                planners,
                jobs,
                stratify: !no_stratify,
            };
            eprintln!(
                "benchmark: {} paired trials, jobs {}, planners {:?}",
                trials,
                jobs,
                opts.planners.iter().map(|p| p.to_string()).collect::<Vec<_>>()
            );
            let (report, records) = run_benchmark(&template, &opts)?;
            std::fs::create_dir_all(&out)?;
            std::fs::write(
                out.join("trials.toml"),
                toml::to_string_pretty(&TrialsFile { trials: records })
                    .expect("records serialize"),
            )?;
            std::fs::write(
                out.join("report.toml"),
                toml::to_string_pretty(&report).expect("report serializes"),
            )?;
            for g in &report.groups {
                let means: Vec<String> = g
                    .stats
                    .iter()
                    .map(|s| format!("{} {:.2}±{:.2}", s.planner, s.mean, s.std))
                    .collect();
                println!(
                    "group {:>5} (n={:>3}): {}  diff {}  p {}",
                    g.label,
                    g.n,
                    means.join("  "),
                    g.percent_diff
                        .map_or("-".into(), |v| format!("{v:.1}%")),
                    g.p_value.map_or("-".into(), |v| format!("{v:.2e}")),
                );
            }
            if report.failed > 0 {
                eprintln!("{} trial(s) failed and were excluded", report.failed);
            }
            Ok(())
        }
        Command::Render {
            scenario,
            result,
            out,
        } => {
            let sc = Scenario::load(&scenario)?;
            let rf = ResultFile::load(&result)?;
            let files = tigris::render::render(&rf.result, &sc, &out)?;
            println!(
                "wrote {}, {}, {}",
                files.heatmap.display(),
                files.path_csv.display(),
                files.combined.display()
            );
            Ok(())
        }
        Command::Oracle { which, seed } => run_oracles(&which, seed),
    }
}

fn run_oracles(which: &str, seed: u64) -> Result<(), Error> {
    use rand::{Rng, SeedableRng};
    let mut ok = true;

    if which == "all" || which == "min-range" {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        let mut n = 0;
        while n < 200 {
            let cfg = oracles::random_sensor_config(&mut rng);
            let z = rng.random_range(50.0..150.0);
            let g = tigris::sensor::FrameGeometry::new(&cfg, z);
            let d = rng.random_range(0.0..g.far_half);
            let want = oracles::min_range_sliding(d, &cfg, z, 0.1);
            if !want.is_finite() {
                continue;
            }
            let got = tigris::sensor::min_range_to_edge(d, &cfg, z);
            worst = worst.max((got - want).abs() / want);
            n += 1;
        }
        let pass = worst < 0.01;
        ok &= pass;
        println!(
            "min-range oracle: {} (worst relative error {:.4}% over {n} configs)",
            if pass { "PASS" } else { "FAIL" },
            worst * 100.0
        );
    }

    if which == "all" || which == "edge-reward" {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed ^ 0xed9e);
        let template = Scenario::desk_template();
        let sc = generate_scenario(seed, &template);
        let grid = sc.build_grid()?;
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let a = tigris::VehicleState::new(
                rng.random_range(300.0..2200.0),
                rng.random_range(300.0..2200.0),
                rng.random_range(80.0..120.0),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            let len = rng.random_range(200.0..500.0);
            let b = tigris::VehicleState::new(
                a.x + len * a.psi.cos(),
                a.y + len * a.psi.sin(),
                a.z,
                a.psi,
            );
            let edge = tigris::dubins::connect(a, b, sc.planner.turn_radius);
            let overlay = tigris::information::BeliefOverlay::root();
            let (fast, _) =
                tigris::information::edge_reward(&edge, &overlay, &grid, &sc.sensor, &sc.weights);
            let dense = oracles::edge_reward_dense(&edge, &grid, &sc.sensor, &sc.weights, 1.0);
            if dense > 0.0 {
                worst = worst.max((fast - dense).abs() / dense);
            }
        }
        let pass = worst < 0.02;
        ok &= pass;
        println!(
            "edge-reward oracle: {} (worst relative error {:.3}% over 20 edges)",
            if pass { "PASS" } else { "FAIL" },
            worst * 100.0
        );
    }

    if which == "all" || which == "small-instance" {
        let toy = oracles::toy_instance(seed);
        let optimum = oracles::lattice_optimum(
            &toy.grid,
            &toy.sensor,
            &toy.weights,
            toy.start,
            toy.cfg.budget,
            toy.cfg.turn_radius,
            6,
        );
        let world = World {
            grid: &toy.grid,
            sensor: &toy.sensor,
            weights: &toy.weights,
            zones: &[],
        };
        let mut cfg = toy.cfg.clone();
        cfg.stop = StopCondition::Iterations(20_000);
        let (result, _) = plan_with_tree(&world, toy.start, &cfg, PlannerKind::Tigris)?;
        let ratio = result.info / optimum;
        let pass = ratio >= 0.9;
        ok &= pass;
        println!(
            "small-instance oracle: {} (planner {:.3} vs optimum {:.3}, ratio {:.3})",
            if pass { "PASS" } else { "FAIL" },
            result.info,
            optimum,
            ratio
        );
    }

    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput("oracle disagreement".into()))
    }
}
