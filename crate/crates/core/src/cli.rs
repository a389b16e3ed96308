//! The `sta` command line.
//!
//! Exit codes: 0 converged (or success), 2 cycle, 3 round limit, 64 usage
//! error, 65 invalid input data, 74 I/O error.

use std::ffi::OsString;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::busline::{build_lines, select_lines, tvot, DEFAULT_CAPACITY, DEFAULT_FREQ_PER_MIN, DEFAULT_WINDOW_MIN};
use crate::engine::{run_dynamics, DynamicsConfig, DynamicsResult, Outcome, Variant};
use crate::error::{Error, Result};
use crate::fixtures::{fig2_instance, fig3_instance, grid_instance, DemandPattern};
use crate::game::CostModel;
use crate::io;
use crate::metrics::{default_x_grid, flow_metrics, sharing_fraction_curve};
use crate::optima::{brute_force_optimum, reduce_sat, DEFAULT_PATH_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CYCLE: i32 = 2;
pub const EXIT_ROUND_LIMIT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "sta", version, about = "Synergistic traffic assignment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute an equilibrium flow by best-response dynamics.
    Assign {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        demand: PathBuf,
        /// Selfishness parameter of the shared-cost model.
        #[arg(long, conflicts_with = "model", required_unless_present = "model")]
        r: Option<f64>,
        /// Step-table model file (`edge_id,load,cost`).
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value = "sim-blind", value_parser = parse_variant)]
        variant: Variant,
        #[arg(long, default_value_t = 1000)]
        max_rounds: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stretch, sharing and sharing-distribution curves of a flow.
    Metrics {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        paths: PathBuf,
        /// Flow to normalize sharing against.
        #[arg(long)]
        baseline_paths: Option<PathBuf>,
        /// Co-rider threshold; one `curve_L.csv` per value.
        #[arg(long = "curve")]
        curves: Vec<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plan bus lines over a flow under an operation time budget.
    Buslines {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        paths: PathBuf,
        #[arg(long)]
        budget_h: f64,
        #[arg(long, default_value_t = DEFAULT_FREQ_PER_MIN)]
        freq_per_min: f64,
        #[arg(long, default_value_t = DEFAULT_WINDOW_MIN)]
        window_min: f64,
        #[arg(long, default_value_t = DEFAULT_CAPACITY, value_parser = clap::value_parser!(u32).range(1..))]
        capacity: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run best-response dynamics on a built-in cycle instance.
    Dynamics {
        #[arg(long, value_enum)]
        fixture: FixtureName,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        #[arg(long, default_value_t = 1000)]
        max_rounds: usize,
    },
    /// Turn a CNF formula into a routing instance.
    ReduceSat {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also enumerate the system optimum and report satisfiability.
        #[arg(long)]
        solve_optimum: bool,
        #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
        path_cap: usize,
    },
    /// Write a random grid instance (`network.csv`, `demand.csv`).
    Generate {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        agents: usize,
        #[arg(long, value_enum, default_value_t = Pattern::Uniform)]
        pattern: Pattern,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FixtureName {
    Fig2,
    Fig3,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Pattern {
    Uniform,
    Clustered,
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = Variant::ALL.iter().map(|v| v.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn threads_from_env() -> Result<usize> {
    match std::env::var("STA_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("STA_THREADS={v:?} is not a thread count"))),
        Err(_) => Ok(0),
    }
}

fn outcome_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Converged { .. } => EXIT_OK,
        Outcome::Cycle { .. } => EXIT_CYCLE,
        Outcome::RoundLimit => EXIT_ROUND_LIMIT,
    }
}

fn describe(outcome: Outcome) -> String {
    match outcome {
        Outcome::Converged { rounds } => format!("converged after {rounds} rounds"),
        Outcome::Cycle {
            period,
            first_repeat_round,
        } => format!("cycle with period {period} (repeat at round {first_repeat_round})"),
        Outcome::RoundLimit => "round limit reached".into(),
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Csv(c) if c.is_io_error() => EXIT_IO,
        _ => EXIT_DATA,
    }
}

fn create_dir(dir: &FsPath) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn print_trace(result: &DynamicsResult) {
    println!("round,phi,delta,switches,agent_costs");
    for r in &result.trace {
        let costs = r
            .agent_costs
            .as_ref()
            .map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        println!("{},{},{},{},{}", r.round, r.phi, r.delta, r.switches, costs);
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Assign {
            graph,
            demand,
            r,
            model,
            variant,
            max_rounds,
            out,
        } => {
            let network = io::load_network(&graph)?;
            let demand = io::load_demand(&demand, &network)?;
            let model = match (r, model) {
                (Some(r), _) => CostModel::selfish_share(r, &network)?,
                (None, Some(path)) => io::load_step_model(&path, &network)?,
                (None, None) => unreachable!("clap requires --r or --model"),
            };
            let config = DynamicsConfig {
                variant,
                max_rounds,
                record_trace: true,
                threads: threads_from_env()?,
            };
            let result = run_dynamics(&network, &demand, &model, config)?;
            create_dir(&out)?;
            io::save_loads(&out.join("loads.csv"), &result.loads)?;
            io::save_paths(&out.join("paths.csv"), &result.profile)?;
            io::save_trace(&out.join("trace.csv"), &result.trace)?;
            println!("{}", describe(result.outcome));
            Ok(outcome_code(result.outcome))
        }
        Command::Metrics {
            graph,
            paths,
            baseline_paths,
            curves,
            out,
        } => {
            let network = io::load_network(&graph)?;
            let profile = io::load_paths(&paths)?;
            let baseline = baseline_paths.map(|p| io::load_paths(&p)).transpose()?;
            let metrics = flow_metrics(&profile, &network, baseline.as_ref())?;
            create_dir(&out)?;
            io::save_metrics(&out.join("metrics.csv"), &metrics)?;
            let grid = default_x_grid();
            for l in curves {
                let curve = sharing_fraction_curve(&profile, &network, l, &grid)?;
                io::save_curve(&out.join(format!("curve_{l}.csv")), &curve)?;
            }
            println!(
                "average stretch {}, average sharing {}",
                metrics.average_stretch, metrics.average_sharing
            );
            Ok(EXIT_OK)
        }
        Command::Buslines {
            graph,
            paths,
            budget_h,
            freq_per_min,
            window_min,
            capacity,
            out,
        } => {
            let network = io::load_network(&graph)?;
            let profile = io::load_paths(&paths)?;
            for (i, p) in profile.paths().iter().enumerate() {
                if p.is_empty() {
                    continue;
                }
                let (s, t) = (network.tail(p[0]), network.head(p[p.len() - 1]));
                network
                    .check_path(p, s, t)
                    .map_err(|reason| Error::InvalidPath { agent: i as u32, reason })?;
            }
            let lines = build_lines(profile.paths(), &network, capacity);
            let plan = select_lines(lines, budget_h, freq_per_min, window_min)?;
            let t = tvot(&plan, profile.paths(), &network);
            create_dir(&out)?;
            io::save_lines(&out.join("lines.csv"), &plan)?;
            io::save_plan(&out.join("plan.csv"), &plan)?;
            io::save_tvot(&out.join("tvot.csv"), &t)?;
            println!(
                "{} candidate lines, {} selected, TVOT {} h (baseline {} h)",
                plan.lines.len(),
                plan.selected.iter().filter(|&&s| s).count(),
                t.tvot_h,
                t.baseline_h
            );
            Ok(EXIT_OK)
        }
        Command::Dynamics {
            fixture,
            epsilon,
            variant,
            max_rounds,
        } => {
            let instance = match fixture {
                FixtureName::Fig2 => fig2_instance(epsilon)?,
                FixtureName::Fig3 => fig3_instance(),
            };
            let config = DynamicsConfig {
                variant,
                max_rounds,
                record_trace: true,
                threads: threads_from_env()?,
            };
            let result = run_dynamics(&instance.network, &instance.demand, &instance.model, config)?;
            print_trace(&result);
            println!("{}", describe(result.outcome));
            Ok(outcome_code(result.outcome))
        }
        Command::ReduceSat {
            cnf,
            out,
            solve_optimum,
            path_cap,
        } => {
            let sat = io::load_cnf(&cnf)?;
            let reduced = reduce_sat(&sat)?;
            io::save_instance(&out, &reduced.network, &reduced.demand, &reduced.model)?;
            println!(
                "{} variables, {} clauses -> {} vertices, {} edges, {} agents",
                sat.num_vars(),
                sat.clauses().len(),
                reduced.network.num_vertices(),
                reduced.network.num_edges(),
                reduced.demand.len()
            );
            if solve_optimum {
                let (profile, total) = brute_force_optimum(&reduced.network, &reduced.demand, &reduced.model, path_cap)?;
                io::save_paths(&out.join("optimum_paths.csv"), &profile)?;
                let verdict = if total == reduced.target_cost { "SAT" } else { "UNSAT" };
                println!("optimum total {total} (3n = {}): {verdict}", reduced.target_cost);
            }
            Ok(EXIT_OK)
        }
        Command::Generate {
            width,
            height,
            agents,
            pattern,
            seed,
            out,
        } => {
            let pattern = match pattern {
                Pattern::Uniform => DemandPattern::Uniform,
                Pattern::Clustered => DemandPattern::Clustered,
            };
            let instance = grid_instance(width, height, agents, pattern, seed)?;
            create_dir(&out)?;
            io::save_network(&out.join("network.csv"), &instance.network)?;
            io::save_demand(&out.join("demand.csv"), &instance.demand)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line `argv` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}
