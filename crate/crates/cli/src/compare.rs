use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Args;
use offshoot_core::harness::{
    config_order, divergences, performance_profile, records_from_jsonl, records_to_jsonl, Metric,
    RunRecord,
};
use offshoot_core::model::{generate_random, RandomProfile};
use offshoot_core::{enumerate_optimum, read_problem, solve, MilpProblem, OracleStatus};
use rayon::prelude::*;

use crate::flags::{default_matrix, parse_named_config, NamedConfig};

/// Objective agreement tolerance between runs.
const OBJ_TOL: f64 = 1e-6;

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Instance files (MPS or JSON).
    pub instances: Vec<PathBuf>,
    /// Add this many random instances.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 12)]
    pub vars: usize,
    #[arg(long, default_value_t = 8)]
    pub rows: usize,
    /// Trailing continuous variables of random instances.
    #[arg(long, default_value_t = 0)]
    pub continuous: usize,
    /// Seed of the first random instance; the others follow consecutively.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// A configuration, written `NAME: <solve flags>`; repeat for each.
    /// Defaults to the four strategies plus depth-0 branch-and-bound.
    #[arg(long = "config", value_name = "SPEC", value_parser = parse_named_config)]
    pub configs: Vec<NamedConfig>,
    #[arg(long, default_value = "time")]
    pub metric: Metric,
    /// Write all run records as JSON lines.
    #[arg(long, value_name = "PATH")]
    pub records: Option<PathBuf>,
    /// Write the performance profile as CSV.
    #[arg(long, value_name = "PATH")]
    pub profile: Option<PathBuf>,
    /// Rebuild the profile from saved records instead of solving.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["instances", "random", "oracle"])]
    pub from_records: Option<PathBuf>,
    /// Check every solved objective against exhaustive enumeration.
    #[arg(long)]
    pub oracle: bool,
    /// Worker threads (all cores by default).
    #[arg(long)]
    pub threads: Option<usize>,
}

fn load_instances(args: &CompareArgs) -> Result<Vec<(String, MilpProblem)>> {
    let mut out = Vec::new();
    for path in &args.instances {
        let p = read_problem(path)?;
        out.push((instance_name(path), p));
    }
    let profile = RandomProfile {
        continuous: args.continuous,
        ..RandomProfile::default()
    };
    for k in 0..args.random as u64 {
        let p = generate_random(args.seed + k, args.vars, args.rows, &profile);
        out.push((p.name().to_string(), p));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    for w in out.windows(2) {
        if w[0].0 == w[1].0 {
            bail!("duplicate instance name {}", w[0].0);
        }
    }
    Ok(out)
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

struct Run {
    record: RunRecord,
    error: Option<String>,
}

fn run_all(instances: &[(String, MilpProblem)], configs: &[NamedConfig]) -> Vec<Run> {
    let jobs: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..configs.len()).map(move |c| (i, c)))
        .collect();
    // par_iter keeps the job order, so records come out sorted by
    // instance and then by configuration.
    jobs.par_iter()
        .map(|&(i, c)| {
            let (name, problem) = &instances[i];
            let nc = &configs[c];
            match solve(problem, nc.config.clone()) {
                Ok(res) => {
                    let mut record = RunRecord::from_result(problem, &nc.name, &nc.config, &res);
                    record.instance = name.clone();
                    Run {
                        record,
                        error: None,
                    }
                }
                Err(e) => Run {
                    record: RunRecord {
                        instance: name.clone(),
                        config: nc.name.clone(),
                        fingerprint: nc.config.fingerprint(),
                        status: offshoot_core::SolveStatus::Limit,
                        objective: None,
                        nodes: 0,
                        offshoots: 0,
                        lp_iterations: 0,
                        time_secs: 0.0,
                    },
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

fn oracle_mismatches(instances: &[(String, MilpProblem)], records: &[RunRecord]) -> Vec<String> {
    let results: Vec<_> = instances
        .par_iter()
        .map(|(name, p)| (name, enumerate_optimum(p)))
        .collect();
    let mut out = Vec::new();
    for (name, res) in results {
        let res = match res {
            Ok(r) => r,
            Err(e) => {
                eprintln!("warning: oracle skipped {name}: {e}");
                continue;
            }
        };
        for r in records.iter().filter(|r| &r.instance == name && r.solved()) {
            let ok = match (res.status, r.objective) {
                (OracleStatus::Optimal, Some(v)) => (v - res.objective).abs() <= OBJ_TOL,
                (OracleStatus::Infeasible, None) => true,
                _ => false,
            };
            if !ok {
                out.push(format!(
                    "{name} [{}]: got {:?}, enumeration gives {}",
                    r.config, r.objective, res.objective
                ));
            }
        }
    }
    out
}

fn print_table(records: &[RunRecord], configs: &[String], metric: Metric) {
    let width = records
        .iter()
        .map(|r| r.instance.len())
        .max()
        .unwrap_or(8)
        .max(8);
    print!("{:width$}", "instance");
    for c in configs {
        print!("  {c:>16}");
    }
    println!();
    for chunk in records.chunk_by(|a, b| a.instance == b.instance) {
        print!("{:width$}", chunk[0].instance);
        for c in configs {
            let cell = match chunk.iter().find(|r| &r.config == c) {
                Some(r) if r.solved() => match metric {
                    Metric::Time => format!("{:.4}s", r.time_secs),
                    Metric::Nodes => r.nodes.to_string(),
                },
                Some(r) => r.status.to_string(),
                None => "-".to_string(),
            };
            print!("  {cell:>16}");
        }
        println!();
    }
}

pub fn run(args: &CompareArgs) -> Result<ExitCode> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut failed = false;
    let mut oracle_bad = Vec::new();
    let (records, configs) = if let Some(path) = &args.from_records {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let records = records_from_jsonl(&text)?;
        let configs = config_order(&records);
        (records, configs)
    } else {
        let configs = if args.configs.is_empty() {
            default_matrix()
        } else {
            args.configs.clone()
        };
        let instances = load_instances(args)?;
        if instances.is_empty() {
            bail!("no instances given (pass files or --random N)");
        }
        let names: Vec<String> = configs.iter().map(|c| c.name.clone()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                bail!("duplicate configuration name {n}");
            }
        }
        let runs = run_all(&instances, &configs);
        for run in &runs {
            if let Some(e) = &run.error {
                failed = true;
                eprintln!(
                    "error: {} [{}]: {e}",
                    run.record.instance, run.record.config
                );
            }
        }
        let records: Vec<RunRecord> = runs.into_iter().map(|r| r.record).collect();
        if args.oracle {
            oracle_bad = oracle_mismatches(&instances, &records);
        }
        (records, names)
    };

    if let Some(path) = &args.records {
        fs::write(path, records_to_jsonl(&records))
            .with_context(|| format!("writing {}", path.display()))?;
    }

    print_table(&records, &configs, args.metric);
    let profile = performance_profile(&records, &configs, args.metric)?;
    for inst in &profile.excluded {
        eprintln!("warning: no configuration solved {inst}; left out of the profile");
    }
    println!();
    println!(
        "geometric mean of {} ratios over {} instances:",
        metric_name(args.metric),
        profile.instances.len()
    );
    for (c, g) in configs.iter().zip(profile.geometric_means()) {
        let solved = records
            .iter()
            .filter(|r| &r.config == c && r.solved())
            .count();
        println!("  {c:16} {g:>10.4}  solved {solved}");
    }
    if let Some(path) = &args.profile {
        fs::write(path, profile.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }

    let div = divergences(&records, OBJ_TOL);
    for (inst, runs) in &div {
        let parts: Vec<String> = runs
            .iter()
            .map(|(c, v)| format!("{c}={}", v.map_or("infeasible".into(), |v| v.to_string())))
            .collect();
        eprintln!("divergence: {inst}: {}", parts.join(" "));
    }
    for line in &oracle_bad {
        eprintln!("oracle mismatch: {line}");
    }
    println!(
        "divergences: {}{}",
        div.len(),
        if args.oracle {
            format!(", oracle mismatches: {}", oracle_bad.len())
        } else {
            String::new()
        }
    );

    Ok(if failed {
        ExitCode::from(1)
    } else if !div.is_empty() || !oracle_bad.is_empty() {
        ExitCode::from(5)
    } else {
        ExitCode::SUCCESS
    })
}

fn metric_name(m: Metric) -> &'static str {
    match m {
        Metric::Time => "time",
        Metric::Nodes => "node",
    }
}
