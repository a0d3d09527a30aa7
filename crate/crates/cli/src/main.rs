mod compare;
mod flags;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use offshoot_core::harness::RunRecord;
use offshoot_core::model::{generate_random, to_json, RandomProfile};
use offshoot_core::{read_problem, solve, SolveStatus};

use crate::compare::CompareArgs;
use crate::flags::{OutputFlags, SearchFlags};

/// Offshoot-based branch-and-bound for mixed-integer linear programs.
#[derive(Debug, Parser)]
#[command(name = "offshoot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance (MPS, or JSON by extension).
    ///
    /// Exit status: 0 optimal, 2 infeasible, 3 limit reached, 4 unbounded,
    /// 1 on errors.
    Solve {
        path: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
        #[command(flatten)]
        output: OutputFlags,
        /// Also print the nonzero solution values.
        #[arg(long)]
        show_solution: bool,
    },
    /// Run several configurations over a set of instances and build a
    /// performance profile.
    ///
    /// Exit status: 0 when all solved runs agree, 5 on an objective
    /// divergence, 1 on errors.
    Compare(CompareArgs),
    /// Write a random instance as JSON.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        vars: usize,
        #[arg(long, default_value_t = 6)]
        rows: usize,
        /// Trailing continuous variables.
        #[arg(long, default_value_t = 0)]
        continuous: usize,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            path,
            search,
            output,
            show_solution,
        } => run_solve(&path, &search, &output, show_solution),
        Command::Compare(args) => compare::run(&args),
        Command::Generate {
            seed,
            vars,
            rows,
            continuous,
            output,
        } => run_generate(seed, vars, rows, continuous, output.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn status_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Optimal => 0,
        SolveStatus::Infeasible => 2,
        SolveStatus::Limit => 3,
        SolveStatus::Unbounded => 4,
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v}"))
}

fn run_solve(
    path: &Path,
    flags: &SearchFlags,
    output: &OutputFlags,
    show_solution: bool,
) -> Result<ExitCode> {
    let problem = read_problem(path)?;
    let mut config = flags.to_config();
    config.record_events = output.trace.is_some();
    let result =
        solve(&problem, config.clone()).with_context(|| format!("solving {}", path.display()))?;

    let s = &result.stats;
    println!("instance   {}", problem.name());
    println!("config     {}", config.fingerprint());
    println!("status     {}", result.status);
    println!("objective  {}", fmt_opt(result.objective));
    println!("bound      {}", fmt_opt(result.best_bound));
    println!("nodes      {}", s.nodes);
    println!("offshoots  {}", s.offshoots);
    println!(
        "lp solves  {} ({} iterations)",
        s.lp_solves, s.lp_iterations
    );
    println!(
        "trimmed    {} changes in {} trims",
        s.changes_trimmed, s.trims
    );
    println!("pruned     {}", s.prunes_by_bound);
    println!("time       {:.3}s", s.wall_time.as_secs_f64());
    if show_solution {
        if let Some(x) = &result.point {
            for (name, v) in problem.var_names().iter().zip(x) {
                if *v != 0.0 {
                    println!("  {name} = {v}");
                }
            }
        }
    }

    if let Some(trace) = &output.trace {
        let mut f = std::io::BufWriter::new(
            fs::File::create(trace).with_context(|| format!("creating {}", trace.display()))?,
        );
        for e in &result.events {
            serde_json::to_writer(&mut f, e)?;
            f.write_all(b"\n")?;
        }
        f.flush()?;
    }
    if let Some(record) = &output.record {
        let r = RunRecord::from_result(&problem, "solve", &config, &result);
        fs::write(record, serde_json::to_string_pretty(&r)? + "\n")
            .with_context(|| format!("writing {}", record.display()))?;
    }
    Ok(ExitCode::from(status_code(result.status)))
}

fn run_generate(
    seed: u64,
    vars: usize,
    rows: usize,
    continuous: usize,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let profile = RandomProfile {
        continuous,
        ..RandomProfile::default()
    };
    let text = to_json(&generate_random(seed, vars, rows, &profile));
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}
