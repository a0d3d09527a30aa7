//! Run records and performance profiles for comparing configurations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::MilpProblem;
use crate::search::{SearchConfig, SolveResult, SolveStatus};

/// Smallest time value used in ratios, in seconds.
pub const TIME_FLOOR: f64 = 1e-6;

/// Outcome of one (instance, configuration) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub config: String,
    pub fingerprint: String,
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub nodes: u64,
    pub offshoots: u64,
    pub lp_iterations: u64,
    pub time_secs: f64,
}

impl RunRecord {
    pub fn from_result(
        problem: &MilpProblem,
        config_name: &str,
        config: &SearchConfig,
        result: &SolveResult,
    ) -> Self {
        Self {
            instance: problem.name().to_string(),
            config: config_name.to_string(),
            fingerprint: config.fingerprint(),
            status: result.status,
            objective: result.objective,
            nodes: result.stats.nodes,
            offshoots: result.stats.offshoots,
            lp_iterations: result.stats.lp_iterations,
            time_secs: result.stats.wall_time.as_secs_f64(),
        }
    }

    /// Finished with a proof (optimal or infeasible).
    pub fn solved(&self) -> bool {
        matches!(self.status, SolveStatus::Optimal | SolveStatus::Infeasible)
    }

    pub fn metric(&self, metric: Metric) -> f64 {
        if !self.solved() {
            return f64::INFINITY;
        }
        match metric {
            Metric::Time => self.time_secs.max(TIME_FLOOR),
            Metric::Nodes => (self.nodes as f64).max(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Time,
    Nodes,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "time" => Ok(Metric::Time),
            "nodes" => Ok(Metric::Nodes),
            _ => Err(format!("unknown metric {s:?} (expected time or nodes)")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum HarnessError {
    #[error("a comparison needs at least two configurations, got {0}")]
    TooFewConfigs(usize),
    #[error("no instance was solved by any configuration")]
    NothingSolved,
    #[error("record for {instance} uses unknown configuration {config:?}")]
    UnknownConfig { instance: String, config: String },
    #[error("{instance} has no record for configuration {config:?}")]
    MissingRecord { instance: String, config: String },
}

/// Dolan-Moré performance profile over a set of records.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub configs: Vec<String>,
    /// Instances used, sorted by name.
    pub instances: Vec<String>,
    /// Instances no configuration solved.
    pub excluded: Vec<String>,
    /// `ratios[i][c]` of instance `i` under configuration `c`.
    pub ratios: Vec<Vec<f64>>,
    /// Breakpoints: every distinct finite ratio, ascending.
    pub taus: Vec<f64>,
    /// `rho[t][c]`: fraction of instances with ratio at most `taus[t]`.
    pub rho: Vec<Vec<f64>>,
}

impl Profile {
    /// Geometric mean of the ratios per configuration (infinite if some
    /// instance was left unsolved).
    pub fn geometric_means(&self) -> Vec<f64> {
        (0..self.configs.len())
            .map(|c| {
                let n = self.ratios.len();
                if n == 0 {
                    return f64::NAN;
                }
                let s: f64 = self.ratios.iter().map(|r| r[c].ln()).sum();
                (s / n as f64).exp()
            })
            .collect()
    }

    /// CSV with header `tau,<config>,...` and one row per breakpoint.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau");
        for c in &self.configs {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (t, row) in self.taus.iter().zip(&self.rho) {
            write!(out, "{t}").unwrap();
            for v in row {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Configuration names in order of first appearance.
pub fn config_order(records: &[RunRecord]) -> Vec<String> {
    let mut seen = Vec::new();
    for r in records {
        if !seen.contains(&r.config) {
            seen.push(r.config.clone());
        }
    }
    seen
}

pub fn performance_profile(
    records: &[RunRecord],
    configs: &[String],
    metric: Metric,
) -> Result<Profile, HarnessError> {
    if configs.len() < 2 {
        return Err(HarnessError::TooFewConfigs(configs.len()));
    }
    let mut table: BTreeMap<&str, Vec<Option<f64>>> = BTreeMap::new();
    for r in records {
        let c = configs.iter().position(|c| *c == r.config).ok_or_else(|| {
            HarnessError::UnknownConfig {
                instance: r.instance.clone(),
                config: r.config.clone(),
            }
        })?;
        table
            .entry(&r.instance)
            .or_insert_with(|| vec![None; configs.len()])[c] = Some(r.metric(metric));
    }
    let mut instances = Vec::new();
    let mut excluded = Vec::new();
    let mut ratios = Vec::new();
    for (inst, vals) in &table {
        let mut row = Vec::with_capacity(vals.len());
        for (c, v) in vals.iter().enumerate() {
            row.push(v.ok_or_else(|| HarnessError::MissingRecord {
                instance: inst.to_string(),
                config: configs[c].clone(),
            })?);
        }
        let best = row.iter().copied().fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            excluded.push(inst.to_string());
            continue;
        }
        instances.push(inst.to_string());
        ratios.push(row.iter().map(|v| v / best).collect::<Vec<f64>>());
    }
    if instances.is_empty() {
        return Err(HarnessError::NothingSolved);
    }
    let mut breakpoints: BTreeSet<ordered_float::OrderedFloat<f64>> = BTreeSet::new();
    for row in &ratios {
        for &r in row {
            if r.is_finite() {
                breakpoints.insert(ordered_float::OrderedFloat(r));
            }
        }
    }
    let taus: Vec<f64> = breakpoints.into_iter().map(|t| t.0).collect();
    let n = instances.len() as f64;
    let rho = taus
        .iter()
        .map(|&t| {
            (0..configs.len())
                .map(|c| ratios.iter().filter(|r| r[c] <= t).count() as f64 / n)
                .collect()
        })
        .collect();
    Ok(Profile {
        configs: configs.to_vec(),
        instances,
        excluded,
        ratios,
        taus,
        rho,
    })
}

/// An instance and the `(config, objective)` pairs that disagree on it.
pub type Divergence = (String, Vec<(String, Option<f64>)>);

/// Instances on which solved runs disagree on the objective by more than
/// `tol`, with the disagreeing `(config, objective)` pairs.
pub fn divergences(records: &[RunRecord], tol: f64) -> Vec<Divergence> {
    let mut by_inst: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.solved()) {
        by_inst.entry(&r.instance).or_default().push(r);
    }
    let mut out = Vec::new();
    for (inst, rs) in by_inst {
        let first = rs[0].objective;
        let agree = rs.iter().all(|r| match (r.objective, first) {
            (Some(a), Some(b)) => (a - b).abs() <= tol,
            (None, None) => true,
            _ => false,
        });
        if !agree {
            out.push((
                inst.to_string(),
                rs.iter().map(|r| (r.config.clone(), r.objective)).collect(),
            ));
        }
    }
    out
}

pub fn records_to_jsonl(records: &[RunRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("records serialize"));
        s.push('\n');
    }
    s
}

pub fn records_from_jsonl(text: &str) -> Result<Vec<RunRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(instance: &str, config: &str, time: f64, status: SolveStatus) -> RunRecord {
        RunRecord {
            instance: instance.into(),
            config: config.into(),
            fingerprint: String::new(),
            status,
            objective: Some(1.0),
            nodes: (time * 10.0) as u64,
            offshoots: 0,
            lp_iterations: 0,
            time_secs: time,
        }
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identical_configs_are_one_at_tau_one() {
        let recs = vec![
            rec("a", "x", 1.0, SolveStatus::Optimal),
            rec("a", "y", 1.0, SolveStatus::Optimal),
            rec("b", "x", 3.0, SolveStatus::Optimal),
            rec("b", "y", 3.0, SolveStatus::Optimal),
        ];
        let p = performance_profile(&recs, &names(&["x", "y"]), Metric::Time).unwrap();
        assert_eq!(p.taus, vec![1.0]);
        assert_eq!(p.rho, vec![vec![1.0, 1.0]]);
        assert_eq!(p.geometric_means(), vec![1.0, 1.0]);
    }

    #[test]
    fn crossed_times_reach_half_then_one() {
        let recs = vec![
            rec("i1", "A", 1.0, SolveStatus::Optimal),
            rec("i1", "B", 2.0, SolveStatus::Optimal),
            rec("i2", "A", 2.0, SolveStatus::Optimal),
            rec("i2", "B", 1.0, SolveStatus::Optimal),
        ];
        let p = performance_profile(&recs, &config_order(&recs), Metric::Time).unwrap();
        assert_eq!(p.taus, vec![1.0, 2.0]);
        assert_eq!(p.rho, vec![vec![0.5, 0.5], vec![1.0, 1.0]]);
        assert_eq!(p.to_csv(), "tau,A,B\n1,0.5,0.5\n2,1,1\n");
    }

    #[test]
    fn unsolved_runs_and_excluded_instances() {
        let recs = vec![
            rec("i1", "A", 1.0, SolveStatus::Limit),
            rec("i1", "B", 2.0, SolveStatus::Optimal),
            rec("i2", "A", 2.0, SolveStatus::Limit),
            rec("i2", "B", 1.0, SolveStatus::Limit),
        ];
        let p = performance_profile(&recs, &names(&["A", "B"]), Metric::Nodes).unwrap();
        assert_eq!(p.excluded, vec!["i2".to_string()]);
        assert_eq!(p.rho, vec![vec![0.0, 1.0]]);
        assert!(p.geometric_means()[0].is_infinite());
    }

    #[test]
    fn errors() {
        let recs = vec![rec("i1", "A", 1.0, SolveStatus::Optimal)];
        assert_eq!(
            performance_profile(&recs, &names(&["A"]), Metric::Time),
            Err(HarnessError::TooFewConfigs(1))
        );
        assert!(matches!(
            performance_profile(&recs, &names(&["A", "B"]), Metric::Time),
            Err(HarnessError::MissingRecord { .. })
        ));
    }

    #[test]
    fn records_round_trip_and_divergence() {
        let mut recs = vec![
            rec("i1", "A", 0.123456789, SolveStatus::Optimal),
            rec("i1", "B", 2.0, SolveStatus::Optimal),
        ];
        recs[1].objective = Some(1.5);
        let back = records_from_jsonl(&records_to_jsonl(&recs)).unwrap();
        assert_eq!(back, recs);
        let div = divergences(&recs, 1e-6);
        assert_eq!(div.len(), 1);
        assert_eq!(div[0].0, "i1");
    }
}
