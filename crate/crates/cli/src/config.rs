use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "slotq",
    version,
    about = "Time-slotted measurement schedules for 1D cluster-state networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a schedule and report T*.
    Schedule(Flags),
    /// Check a schedule file against both constraints.
    Validate(Flags),
    /// Schedule, simulate and verify one run.
    Simulate(Flags),
    /// T* over distances for fixed slot lengths (CSV).
    SweepDistance(Flags),
    /// T* over the breakpoints of each distance (CSV).
    SweepTq(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Schedule(f)
            | Command::Validate(f)
            | Command::Simulate(f)
            | Command::SweepDistance(f)
            | Command::SweepTq(f) => f,
        }
    }
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON config file; flags win over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Task as `s,r`.
    #[arg(long)]
    pub task: Option<String>,
    /// Network size; nodes are 1..=n.
    #[arg(long)]
    pub n: Option<usize>,
    /// Quantum slot length as `p/q` or an integer.
    #[arg(long)]
    pub tq: Option<String>,
    /// sequential, parallel or brute (simulate also accepts async).
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Distances, e.g. `2..12` or `2,3,5`.
    #[arg(long)]
    pub distances: Option<String>,
    /// Slot lengths for sweep-distance, e.g. `1,2,5,inf`.
    #[arg(long)]
    pub tq_list: Option<String>,
    /// Extra slot lengths added to the breakpoints in sweep-tq.
    #[arg(long)]
    pub extra_tq: Option<String>,
    /// Node profile fixture for simulate.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Schedule JSON for validate.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
}

/// Config file contents. Unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub task: Option<[usize; 2]>,
    pub n: Option<usize>,
    pub t_q: Option<String>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub distances: Option<Vec<usize>>,
    pub t_q_list: Option<Vec<String>>,
    pub extra_t_q: Option<Vec<String>>,
    pub profile: Option<PathBuf>,
    pub schedule: Option<PathBuf>,
    pub gnuplot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Merged configuration for one command.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub task: Option<(usize, usize)>,
    pub n: Option<usize>,
    pub t_q: Option<String>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub distances: Option<Vec<usize>>,
    pub t_q_list: Option<Vec<String>>,
    pub extra_t_q: Option<Vec<String>>,
    pub profile: Option<PathBuf>,
    pub schedule: Option<PathBuf>,
    pub gnuplot: Option<PathBuf>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn parse_task(text: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [s, r] => {
            let s = s.parse().map_err(|_| config_err(format!("bad task {text:?}")))?;
            let r = r.parse().map_err(|_| config_err(format!("bad task {text:?}")))?;
            Ok((s, r))
        }
        _ => Err(config_err(format!("task must be `s,r`, got {text:?}"))),
    }
}

/// `2..12` (inclusive), `2,3,5`, or a mix such as `2..4,8`.
pub fn parse_distances(text: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || config_err(format!("bad distance list {text:?}"));
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.parse().map_err(|_| bad())?;
            let b: usize = b.trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_format(text: &str) -> Result<Format, CliError> {
    match text {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(config_err(format!("unknown format {other:?}"))),
    }
}

pub fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

impl RunConfig {
    /// Config file first, then flags on top.
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => load_file(p)?,
            None => FileConfig::default(),
        };
        let task = match &flags.task {
            Some(t) => Some(parse_task(t)?),
            None => file.task.map(|[s, r]| (s, r)),
        };
        let format = match flags.format.as_deref().or(file.format.as_deref()) {
            Some(f) => Some(parse_format(f)?),
            None => None,
        };
        let distances = match &flags.distances {
            Some(d) => Some(parse_distances(d)?),
            None => file.distances,
        };
        Ok(RunConfig {
            task,
            n: flags.n.or(file.n),
            t_q: flags.tq.clone().or(file.t_q),
            mode: flags.mode.clone().or(file.mode),
            seed: flags.seed.or(file.seed),
            output: flags.output.clone().or(file.output),
            format,
            distances,
            t_q_list: flags.tq_list.as_deref().map(split_list).or(file.t_q_list),
            extra_t_q: flags.extra_tq.as_deref().map(split_list).or(file.extra_t_q),
            profile: flags.profile.clone().or(file.profile),
            schedule: flags.schedule.clone().or(file.schedule),
            gnuplot: flags.gnuplot.clone().or(file.gnuplot),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_distances("2..4,8").unwrap(), vec![2, 3, 4, 8]);
        assert_eq!(parse_distances("2..=3").unwrap(), vec![2, 3]);
        assert!(parse_distances("4..2").is_err());
        assert_eq!(parse_task("1, 5").unwrap(), (1, 5));
        assert!(parse_task("1").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"task":[1,5],"n":6,"t_q":"1","mode":"sequential"}"#).unwrap();
        let flags = Flags {
            config: Some(path.clone()),
            tq: Some("5".into()),
            ..Flags::default()
        };
        let cfg = RunConfig::resolve(&flags).unwrap();
        assert_eq!(cfg.task, Some((1, 5)));
        assert_eq!(cfg.t_q.as_deref(), Some("5"));
        assert_eq!(cfg.mode.as_deref(), Some("sequential"));
        std::fs::write(&path, r#"{"task":[1,5],"colour":"red"}"#).unwrap();
        assert!(RunConfig::resolve(&flags).is_err());
    }
}
