use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, ValueEnum};
use offshoot_core::search::{Bounding, NodeSelection, SearchConfig};
use offshoot_core::{DiveDirection, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Bottom,
    Top,
    Pseudo,
    Pseudodual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Round,
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectionArg {
    BestBound,
    DepthFirst,
}

/// Dive depth limit; `None` is unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiveDepth(pub Option<usize>);

fn parse_depth(s: &str) -> Result<DiveDepth, String> {
    match s {
        "unlimited" | "inf" | "none" => Ok(DiveDepth(None)),
        _ => s
            .parse::<usize>()
            .map(|d| DiveDepth(Some(d)))
            .map_err(|_| format!("expected a count or \"unlimited\", got {s:?}")),
    }
}

fn parse_seconds(s: &str) -> Result<Duration, String> {
    let v: f64 = s
        .parse()
        .map_err(|_| format!("invalid number of seconds {s:?}"))?;
    Duration::try_from_secs_f64(v).map_err(|e| e.to_string())
}

/// Search settings shared by `solve` and the `--config` specs of `compare`.
#[derive(Debug, Clone, Args)]
pub struct SearchFlags {
    /// Offshoot-variable selection strategy.
    #[arg(long, value_enum, default_value = "pseudodual")]
    pub strategy: StrategyArg,
    /// Bound changes per dive; 0 gives best-bound branch-and-bound.
    #[arg(long, value_name = "N", value_parser = parse_depth, default_value = "unlimited")]
    pub max_dive_depth: DiveDepth,
    #[arg(long, value_enum, default_value = "on")]
    pub trim: OnOff,
    /// Top-bound strengthening after branching from the top.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["off", "1", "2", "3"]), default_value = "1")]
    pub bounding: String,
    /// Dives longer than this are split at the midpoint.
    #[arg(long, value_name = "N", default_value_t = 64)]
    pub split_threshold: usize,
    #[arg(long, value_enum, default_value = "round")]
    pub dive_direction: DirectionArg,
    #[arg(long, value_name = "SECONDS", value_parser = parse_seconds)]
    pub time_limit: Option<Duration>,
    #[arg(long, value_name = "N")]
    pub node_limit: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "best-bound")]
    pub node_selection: SelectionArg,
    /// Fix all integer variables at once instead of diving step by step.
    #[arg(long)]
    pub plunge: bool,
    /// Score dive candidates by pseudocosts only.
    #[arg(long)]
    pub no_strong_branching: bool,
}

impl SearchFlags {
    pub fn to_config(&self) -> SearchConfig {
        SearchConfig {
            strategy: match self.strategy {
                StrategyArg::Bottom => Strategy::Bottom,
                StrategyArg::Top => Strategy::Top,
                StrategyArg::Pseudo => Strategy::Pseudo,
                StrategyArg::Pseudodual => Strategy::PseudoDual,
            },
            max_dive_depth: self.max_dive_depth.0,
            trim: self.trim == OnOff::On,
            bounding: self
                .bounding
                .parse::<Bounding>()
                .expect("restricted by clap"),
            split_threshold: self.split_threshold,
            dive_direction: match self.dive_direction {
                DirectionArg::Round => DiveDirection::Round,
                DirectionArg::Up => DiveDirection::Up,
                DirectionArg::Down => DiveDirection::Down,
            },
            node_selection: match self.node_selection {
                SelectionArg::BestBound => NodeSelection::BestBound,
                SelectionArg::DepthFirst => NodeSelection::DepthFirst,
            },
            plunge: self.plunge,
            strong_branching: !self.no_strong_branching,
            time_limit: self.time_limit,
            node_limit: self.node_limit,
            seed: self.seed,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug, Parser)]
#[command(no_binary_name = true)]
struct FlagsOnly {
    #[command(flatten)]
    flags: SearchFlags,
}

/// A named configuration for `compare`, written `NAME: <solve flags>`.
#[derive(Debug, Clone)]
pub struct NamedConfig {
    pub name: String,
    pub config: SearchConfig,
}

pub fn parse_named_config(text: &str) -> Result<NamedConfig, String> {
    let (name, rest) = text
        .split_once(':')
        .ok_or_else(|| format!("config {text:?} is not of the form \"NAME: flags\""))?;
    let name = name.trim();
    if name.is_empty() || name.contains(',') {
        return Err(format!("invalid config name {name:?}"));
    }
    let parsed = FlagsOnly::try_parse_from(rest.split_whitespace())
        .map_err(|e| format!("config {name:?}: {e}"))?;
    Ok(NamedConfig {
        name: name.to_string(),
        config: parsed.flags.to_config(),
    })
}

/// The four strategies plus the depth-0 branch-and-bound baseline.
pub fn default_matrix() -> Vec<NamedConfig> {
    [
        "bottom: --strategy bottom",
        "top: --strategy top",
        "pseudo: --strategy pseudo",
        "pseudodual: --strategy pseudodual",
        "bnb: --strategy pseudodual --max-dive-depth 0",
    ]
    .iter()
    .map(|s| parse_named_config(s).expect("built-in configs parse"))
    .collect()
}

#[derive(Debug, Clone, Args)]
pub struct OutputFlags {
    /// Write the event log as JSON lines.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    /// Write the run record as JSON.
    #[arg(long, value_name = "PATH")]
    pub record: Option<PathBuf>,
}
