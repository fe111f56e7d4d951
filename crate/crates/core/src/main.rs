use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use cohortcut::cohort::{apply_cohort_separation, partition_random, partition_recursive_maxcut, CohortAssignment};
use cohortcut::harness::{
    emit_outputs, emit_sweep_outputs, emit_sweep_point, run_cen_experiment, run_sin_experiment, run_sweep_with,
    ComparisonResult, ExperimentConfig, SweepSpec,
};
use cohortcut::netgen::{augment_sin, generate_cen, network_stats, CenConfig, SinConfig};
use cohortcut::qubomc::{export_qubo, SolverConfig, SolverKind};
use cohortcut::sir::{self, simulate, summarize, DiseaseParams};
use cohortcut::Graph;

#[derive(Parser)]
#[command(name = "cohortcut", version, about = "Max-Cut cohort partitioning and SIR outbreak comparison")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an enrollment network or a dormitory interaction network
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Print network statistics as JSON
    Stats {
        graph: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Assign nodes to cohorts
    Partition(PartitionArgs),
    /// Write the QUBO whose minimum is the negated maximum cut
    ExportQubo {
        graph: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run one outbreak and write its daily trace as CSV
    Simulate(SimulateArgs),
    /// Paired solver-vs-random comparison on enrollment networks
    CompareCen(ExperimentArgs),
    /// Paired comparison on dormitory interaction networks
    CompareSin(ExperimentArgs),
    /// Grid sweep over dormitory-network parameters
    Sweep(ExperimentArgs),
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Watts-Strogatz enrollment network
    Cen {
        #[arg(long)]
        nodes: usize,
        /// Ring degree; calibrated from --density when omitted
        #[arg(long, requires = "rewire")]
        k: Option<usize>,
        #[arg(long)]
        rewire: Option<f64>,
        #[arg(long, default_value_t = 0.040)]
        density: f64,
        #[arg(long, default_value_t = 0.465)]
        clustering: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Separate cohorts in an enrollment network and add floor/dorm/campus edges
    Sin {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long, default_value_t = 8)]
        dorms: usize,
        #[arg(long, default_value_t = 2)]
        floors: usize,
        #[arg(long, default_value_t = 0.2)]
        p_floor: f64,
        #[arg(long, default_value_t = 0.005)]
        p_dorm: f64,
        #[arg(long, default_value_t = 0.0001)]
        p_campus: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Maxcut,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Exact,
    SimulatedAnnealing,
    GreedyLocalSearch,
}

impl From<SolverArg> for SolverKind {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Exact => SolverKind::Exact,
            SolverArg::SimulatedAnnealing => SolverKind::SimulatedAnnealing,
            SolverArg::GreedyLocalSearch => SolverKind::GreedyLocalSearch,
        }
    }
}

#[derive(Args)]
struct PartitionArgs {
    graph: PathBuf,
    #[arg(long)]
    cohorts: usize,
    #[arg(long, value_enum, default_value_t = Method::Maxcut)]
    method: Method,
    #[arg(long, value_enum, default_value_t = SolverArg::SimulatedAnnealing)]
    solver: SolverArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    graph: PathBuf,
    /// Graph whose average degree calibrates the infection rate (defaults to the simulated graph)
    #[arg(long)]
    reference_graph: Option<PathBuf>,
    #[arg(long, conflicts_with = "infection_rate")]
    r0: Option<f64>,
    #[arg(long)]
    infection_rate: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    recovery_days: f64,
    #[arg(long, default_value_t = 0.05)]
    initial: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = sir::DEFAULT_MAX_DAYS)]
    max_days: usize,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment configuration (JSON)
    config: PathBuf,
    /// Overrides base_seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "COHORTCUT_OUT_DIR", default_value = "results")]
    out_dir: PathBuf,
}

#[derive(Deserialize)]
struct SweepConfigFile {
    #[serde(flatten)]
    experiment: ExperimentConfig,
    sweep: SweepSpec,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn print_comparison(res: &ComparisonResult, out_dir: &Path) {
    let a = &res.aggregates;
    println!(
        "solver total {:.4} (sd {:.4})  random total {:.4} (sd {:.4})  reduction {:.2}%",
        a.solver_total_pct.mean, a.solver_total_pct.stddev, a.random_total_pct.mean, a.random_total_pct.stddev,
        a.total_reduction_pct
    );
    println!(
        "solver peak  {:.4} (sd {:.4})  random peak  {:.4} (sd {:.4})  reduction {:.2}%",
        a.solver_peak_pct.mean, a.solver_peak_pct.stddev, a.random_peak_pct.mean, a.random_peak_pct.stddev,
        a.peak_reduction_pct
    );
    println!(
        "win rate total {:.2}  peak {:.2}  ({} replicates) -> {}",
        res.win_rate_total,
        res.win_rate_peak,
        res.records.len(),
        out_dir.display()
    );
}

fn load_experiment(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    let mut cfg: ExperimentConfig = read_json(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.base_seed = seed;
    }
    Ok(cfg)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Generate(GenerateCommand::Cen {
            nodes,
            k,
            rewire,
            density,
            clustering,
            seed,
            out,
        }) => {
            let config = match (k, rewire) {
                (Some(ring_degree_k), Some(rewire_probability)) => CenConfig {
                    node_count: nodes,
                    ring_degree_k,
                    rewire_probability,
                    seed,
                },
                (None, None) => CenConfig::calibrated(nodes, density, clustering, seed)?,
                _ => bail!("--k and --rewire must be given together"),
            };
            generate_cen(&config)?.write_json(&out)?;
            eprintln!(
                "k={} p={:.6} -> {}",
                config.ring_degree_k,
                config.rewire_probability,
                out.display()
            );
        }
        Command::Generate(GenerateCommand::Sin {
            graph,
            assignment,
            dorms,
            floors,
            p_floor,
            p_dorm,
            p_campus,
            seed,
            out,
        }) => {
            let g = Graph::read_json(&graph)?;
            let a = CohortAssignment::read_json(&assignment)?;
            let separated = apply_cohort_separation(&g, &a)?;
            let sin = SinConfig {
                dorm_count: dorms,
                floors_per_dorm: floors,
                p_floor,
                p_dorm,
                p_campus,
                seed,
            };
            augment_sin(&separated, &a, &sin)?.write_json(&out)?;
        }
        Command::Stats { graph, out } => {
            let stats = network_stats(&Graph::read_json(&graph)?);
            write_or_print(out.as_deref(), &serde_json::to_string_pretty(&stats)?)?;
        }
        Command::Partition(args) => {
            let g = Graph::read_json(&args.graph)?;
            let assignment = match args.method {
                Method::Maxcut => {
                    let solver = SolverConfig::with_kind(args.solver.into(), args.seed);
                    partition_recursive_maxcut(&g, args.cohorts, &solver)?
                }
                Method::Random => partition_random(&g, args.cohorts, args.seed)?,
            };
            write_or_print(args.out.as_deref(), &serde_json::to_string(&assignment)?)?;
            eprintln!(
                "cut edges removed {} of {}, cohort sizes {:?}",
                assignment.cut_edges_removed(),
                g.edge_count(),
                assignment.cohort_sizes()
            );
        }
        Command::ExportQubo { graph, out } => {
            export_qubo(&Graph::read_json(&graph)?, &out)?;
        }
        Command::Simulate(args) => {
            let g = Graph::read_json(&args.graph)?;
            let reference = match &args.reference_graph {
                Some(path) => Graph::read_json(path)?,
                None => g.clone(),
            };
            let params = match (args.r0, args.infection_rate) {
                (_, Some(ri)) => DiseaseParams::direct(ri, args.recovery_days, args.initial, sir::avg_degree(&reference))?,
                (Some(r0), None) => sir::derive_params(r0, args.recovery_days, args.initial, &reference)?,
                (None, None) => bail!("give either --r0 or --infection-rate"),
            };
            let trace = simulate(&g, &params, args.seed, args.max_days)?;
            trace.write_csv(&args.out)?;
            let s = summarize(&trace);
            eprintln!(
                "r_i={:.6} r_r={:.4} total {:.4} peak {:.4} over {} days",
                params.infection_rate, params.recovery_rate, s.total_infected_pct, s.peak_infected_pct, s.duration_days
            );
        }
        Command::CompareCen(args) => {
            let cfg = load_experiment(&args)?;
            let res = run_cen_experiment(&cfg)?;
            emit_outputs(&res, &cfg, &args.out_dir)?;
            print_comparison(&res, &args.out_dir);
        }
        Command::CompareSin(args) => {
            let cfg = load_experiment(&args)?;
            let res = run_sin_experiment(&cfg)?;
            emit_outputs(&res, &cfg, &args.out_dir)?;
            print_comparison(&res, &args.out_dir);
        }
        Command::Sweep(args) => {
            let file: SweepConfigFile = read_json(&args.config)?;
            let mut cfg = file.experiment;
            if let Some(seed) = args.seed {
                cfg.base_seed = seed;
            }
            let out_dir = &args.out_dir;
            fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            let log = out_dir.join("points.jsonl");
            if log.exists() {
                fs::remove_file(&log)?;
            }
            let total = file.sweep.point_count();
            let res = run_sweep_with(&file.sweep, &cfg, |point| {
                emit_sweep_point(point, &cfg, out_dir)?;
                eprintln!(
                    "point {}/{}: reduction total {:.2}% peak {:.2}% win {:.2}",
                    point.index + 1,
                    total,
                    point.result.aggregates.total_reduction_pct,
                    point.result.aggregates.peak_reduction_pct,
                    point.result.win_rate_total
                );
                Ok(())
            })?;
            emit_sweep_outputs(&res, &file.sweep, &cfg, out_dir)?;
            println!(
                "{} points: win rate {:.2} (records) {:.2} (points); mean reduction total {:.2}% peak {:.2}% -> {}",
                res.points.len(),
                res.global_win_rate_total,
                res.point_win_rate_total,
                res.mean_total_reduction_pct,
                res.mean_peak_reduction_pct,
                out_dir.display()
            );
        }
    }
    Ok(())
}
