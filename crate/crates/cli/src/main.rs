use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use snsga::benchmarks;
use snsga::harness::{self, CampaignOptions, ReferenceTable};
use snsga::timetable::{self, TimetableInstance};
use snsga::SnsgaConfig;

#[derive(Parser)]
#[command(name = "snsga", version, about = "Simplex + non-dominated sorting genetic optimizer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmark registry and seeded trial campaigns.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Normalized convergence trace of one seeded run.
    Trace(TraceArgs),
    /// Remote-lab timetable scheduling.
    #[command(subcommand)]
    Schedule(ScheduleCommand),
}

#[derive(Subcommand)]
enum BenchCommand {
    /// List the registered benchmarks.
    List {
        /// Print the full registry as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run seeded trials and write records, reports and comparisons.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated benchmark names, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Seed of the first trial; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// TOML file overriding run parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: $SNSGA_OUT_DIR or ./snsga-out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip the extra no-early-stop run per trial.
    #[arg(long)]
    no_full_runs: bool,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    benchmark: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV file to write (generation,nof).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ScheduleCommand {
    /// Optimize a timetable instance file.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in three-rig-type, four-user scenario.
    Demo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config_from(path: Option<&Path>) -> Result<SnsgaConfig> {
    Ok(match path {
        Some(p) => harness::load_config(p)?,
        None => SnsgaConfig::default(),
    })
}

fn out_dir(out: Option<PathBuf>) -> Result<PathBuf> {
    let dir = out.unwrap_or_else(harness::default_output_dir);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn suite_names(suite: &str) -> Result<Vec<String>> {
    if suite.eq_ignore_ascii_case("all") {
        return Ok(benchmarks::registry().iter().map(|s| s.name.to_string()).collect());
    }
    let names: Vec<String> = suite
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    if names.is_empty() {
        bail!("empty benchmark suite");
    }
    Ok(names)
}

fn bench_list(json: bool) -> Result<()> {
    if json {
        println!("{}", benchmarks::export_registry()?);
        return Ok(());
    }
    println!("{:<5} {:<8} {:>3} {:>22}", "name", "label", "dim", "optimum");
    for s in benchmarks::registry() {
        println!(
            "{:<5} {:<8} {:>3} {:>22}",
            s.name,
            s.label,
            s.problem.dimension(),
            s.known_optimum_value
        );
    }
    Ok(())
}

fn bench_run(args: RunArgs) -> Result<()> {
    let config = config_from(args.config.as_deref())?;
    let names = suite_names(&args.suite)?;
    let options = CampaignOptions { full_runs: !args.no_full_runs };
    let campaign = harness::run_campaign(&names, args.trials, &config, args.seed, options)?;
    let dir = out_dir(args.out)?;

    harness::write_trials_jsonl(&dir.join("trials.jsonl"), &campaign.trials)?;
    harness::write_reports_csv(&dir.join("report.csv"), &campaign.reports)?;
    let table = ReferenceTable::published();
    let mut rows = Vec::new();
    for r in &campaign.reports {
        rows.extend(harness::compare_reference(r, &table)?);
    }
    harness::write_comparison_csv(&dir.join("comparison.csv"), &rows)?;

    println!("{:<5} {:>7} {:>10} {:>12} {:>10}", "name", "success", "mean evals", "mean gap", "full run");
    let fmt = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |v| format!("{v:.p$}"));
    for r in &campaign.reports {
        println!(
            "{:<5} {:>6.1}% {:>10} {:>12} {:>10}",
            r.benchmark,
            r.success_rate,
            fmt(r.mean_evaluations_successful, 1),
            r.mean_gap_successful.map_or("-".to_string(), |g| format!("{g:.2e}")),
            fmt(r.mean_full_run_evaluations, 0),
        );
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn trace(args: TraceArgs) -> Result<()> {
    let config = config_from(args.config.as_deref())?;
    let spec = benchmarks::lookup(&args.benchmark)?;
    let series = harness::convergence_trace(&spec, &config, args.seed)?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    harness::write_series_csv(&args.out, ["generation", "nof"], &series)?;
    println!("{} generations written to {}", series.len(), args.out.display());
    Ok(())
}

fn print_schedule(instance: &TimetableInstance, schedule: &timetable::Schedule) {
    println!("{:<6} {:<4} {:<8} {:>5} {:>5}", "user", "type", "rig", "start", "end");
    for row in schedule.rows(instance) {
        let slot = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        println!(
            "{:<6} {:<4} {:<8} {:>5} {:>5}",
            row.user,
            row.rig_type,
            row.rig.as_deref().unwrap_or("-"),
            slot(row.start),
            slot(row.end)
        );
    }
}

fn write_timetable(dir: &Path, prefix: &str, instance: &TimetableInstance, schedule: &timetable::Schedule) -> Result<()> {
    let trace = timetable::objective_trace(instance, schedule)?;
    harness::write_schedule_csv(&dir.join(format!("{prefix}schedule.csv")), &schedule.rows(instance))?;
    harness::write_series_csv(&dir.join(format!("{prefix}objective_trace.csv")), ["slot", "f"], &trace)?;
    Ok(())
}

fn schedule_solve(instance: &Path, seed: u64, config: Option<&Path>, out: Option<PathBuf>) -> Result<()> {
    let config = config_from(config)?;
    let instance = TimetableInstance::load(instance)?;
    let solution = harness::solve_timetable(&instance, &config, seed)?;
    let dir = out_dir(out)?;
    write_timetable(&dir, "", &instance, &solution.schedule)?;
    print_schedule(&instance, &solution.schedule);
    println!(
        "total objective {} ({} unassigned, {} evaluations)",
        solution.total_objective,
        solution.schedule.unassigned_count(),
        solution.run.evaluations_used
    );
    println!("wrote {}", dir.display());
    Ok(())
}

fn schedule_demo(seed: u64, out: Option<PathBuf>) -> Result<()> {
    let instance = timetable::builtin_scenario();
    let queued = timetable::first_come_first_served(&instance);
    println!("arrival-order schedule:");
    print_schedule(&instance, &queued);
    let trace = timetable::objective_trace(&instance, &queued)?;
    let series: Vec<String> = trace.iter().map(|(_, f)| f.to_string()).collect();
    println!("f(t): {}", series.join(" "));
    println!("total objective {}", timetable::total_objective(&instance, &queued)?);

    let solution = harness::solve_timetable(&instance, &SnsgaConfig::default(), seed)?;
    println!("optimized total objective {}", solution.total_objective);

    let dir = out_dir(out)?;
    write_timetable(&dir, "", &instance, &queued)?;
    write_timetable(&dir, "optimized_", &instance, &solution.schedule)?;
    println!("wrote {}", dir.display());
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Bench(BenchCommand::List { json }) => bench_list(json),
        Command::Bench(BenchCommand::Run(args)) => bench_run(args),
        Command::Trace(args) => trace(args),
        Command::Schedule(ScheduleCommand::Solve { instance, seed, config, out }) => {
            schedule_solve(&instance, seed, config.as_deref(), out)
        }
        Command::Schedule(ScheduleCommand::Demo { seed, out }) => schedule_demo(seed, out),
    }
}
