//! Command-line front end: schedules, validation, simulation and sweeps.
//!
//! Every command returns an [`Output`] instead of printing, so the binary
//! stays thin and tests can drive the commands directly.

pub mod config;

use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use slotq::scheduler::{self, Mode};
use slotq::simulator::{run_async, run_slotted, Outcomes, Profiles, Verdict};
use slotq::sweep::{self, SweepRow};
use slotq::temporal::{validate, Breakpoint, PathNetwork, ScheduleDoc, SlotModel, Task};

pub use config::{Cli, Command, Flags, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidSchedule(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Config(_) => 3,
        }
    }
}

impl From<slotq::Error> for CliError {
    fn from(e: slotq::Error) -> Self {
        use slotq::Error as E;
        match e {
            E::InvalidSchedule(_) | E::MeasuresDeletedNode { .. } | E::MissingAssignment(_) => {
                CliError::InvalidSchedule(e.to_string())
            }
            E::MissingFeedback { .. } | E::TraceIncomplete(_) | E::ContradictoryOutcome { .. } => {
                CliError::Verification(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

/// Result of a command: text for stdout (or the output file), notes for
/// stderr, and the process exit code.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub messages: Vec<String>,
    pub code: i32,
}

pub fn run(command: &Command) -> Result<Output, CliError> {
    let cfg = RunConfig::resolve(command.flags())?;
    let mut out = match command {
        Command::Schedule(_) => cmd_schedule(&cfg)?,
        Command::Validate(_) => cmd_validate(&cfg)?,
        Command::Simulate(_) => cmd_simulate(&cfg)?,
        Command::SweepDistance(_) => cmd_sweep_distance(&cfg)?,
        Command::SweepTq(_) => cmd_sweep_tq(&cfg)?,
    };
    if let Some(path) = &cfg.output {
        write_file(path, &out.stdout)?;
        out.messages.push(format!("wrote {}", path.display()));
        out.stdout.clear();
    }
    Ok(out)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn require<T: Clone>(v: &Option<T>, name: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Config(format!("missing {name}")))
}

fn task_and_net(cfg: &RunConfig) -> Result<(Task, PathNetwork), CliError> {
    let (s, r) = require(&cfg.task, "--task")?;
    let n = require(&cfg.n, "--n")?;
    let task = Task::new(s, r)?;
    let net = PathNetwork::new(n);
    net.check_task(&task)?;
    Ok((task, net))
}

fn mode(cfg: &RunConfig) -> Result<Mode, CliError> {
    Ok(Mode::from_str(cfg.mode.as_deref().unwrap_or("parallel"))?)
}

pub fn cmd_schedule(cfg: &RunConfig) -> Result<Output, CliError> {
    let (task, net) = task_and_net(cfg)?;
    let model = SlotModel::parse(&require(&cfg.t_q, "--tq")?)?;
    let mode = mode(cfg)?;
    let res = scheduler::schedule(mode, &task, &net, &model)?;
    let violations = validate(&res.schedule, &task, &net.graph(), &model)?;
    let mut messages = Vec::new();
    if res.t_star == 0 {
        messages.push("warning: no measuring nodes".to_string());
    }
    let outer = res.outer_slots.map(|o| o.to_string()).unwrap_or_else(|| "-".into());
    messages.push(format!(
        "T*={} inner={} outer={} mode={mode}",
        res.t_star, res.inner_slots, outer
    ));
    let stdout = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => ScheduleDoc::new(&task, &model, &res.schedule).to_json() + "\n",
        Format::Csv => {
            let mut s = String::from("node,slot,basis\n");
            for (node, a) in res.schedule.iter() {
                s.push_str(&format!("{node},{},{}\n", a.slot, a.basis));
            }
            s
        }
    };
    for v in &violations {
        messages.push(v.to_string());
    }
    Ok(Output {
        stdout,
        messages,
        code: if violations.is_empty() { 0 } else { 1 },
    })
}

pub fn cmd_validate(cfg: &RunConfig) -> Result<Output, CliError> {
    let path = require(&cfg.schedule, "--schedule")?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let doc = ScheduleDoc::from_json(&text)?;
    let task = doc.task()?;
    let model = doc.model()?;
    let sched = doc.schedule()?;
    let n = cfg
        .n
        .unwrap_or_else(|| sched.iter().map(|(i, _)| i).max().unwrap_or(0).max(task.s).max(task.r));
    let net = PathNetwork::new(n);
    net.check_task(&task)?;
    sched.check_complete(&task, &net)?;
    let violations = validate(&sched, &task, &net.graph(), &model)?;
    let stdout = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string(&violations).expect("violations serialise") + "\n",
        Format::Csv => {
            let mut s = String::from("kind,slot,nodes,detail\n");
            for v in &violations {
                let nodes: Vec<String> = v.nodes.iter().map(|n| n.to_string()).collect();
                s.push_str(&format!("{:?},{},{},{}\n", v.kind, v.slot, nodes.join(" "), v.detail));
            }
            s
        }
    };
    let verdict = if violations.is_empty() {
        "valid".to_string()
    } else {
        format!("{} violation(s)", violations.len())
    };
    Ok(Output {
        stdout,
        messages: vec![verdict],
        code: if violations.is_empty() { 0 } else { 1 },
    })
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Output, CliError> {
    let seed = cfg
        .seed
        .ok_or_else(|| CliError::Config("--seed is required for simulate".into()))?;
    let profiles = match &cfg.profile {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            Profiles::from_json(&text)?
        }
        None => Profiles::uniform(),
    };
    let (s, r) = cfg
        .task
        .or(profiles.task.map(|[s, r]| (s, r)))
        .ok_or_else(|| CliError::Config("missing --task".into()))?;
    let n = cfg
        .n
        .or(profiles.n)
        .ok_or_else(|| CliError::Config("missing --n".into()))?;
    let task = Task::new(s, r)?;
    let net = PathNetwork::new(n);
    net.check_task(&task)?;
    let trace = if cfg.mode.as_deref() == Some("async") {
        run_async(&task, &net, &profiles, &Outcomes::Seeded(seed))?
    } else {
        let model = SlotModel::parse(&require(&cfg.t_q, "--tq")?)?;
        let res = scheduler::schedule(mode(cfg)?, &task, &net, &model)?;
        run_slotted(&res.schedule, &task, &net, &model, &profiles, &Outcomes::Seeded(seed))?
    };
    let (message, code) = match &trace.verdict {
        Verdict::Verified => ("verdict: verified".to_string(), 0),
        Verdict::AmbiguityDetected(report) => {
            let pairs: Vec<String> = report
                .pairs
                .iter()
                .map(|p| format!("{}-{}", p.first, p.second))
                .collect();
            (format!("verdict: ambiguity detected between {}", pairs.join(", ")), 2)
        }
        Verdict::Failed(reason) => (format!("verdict: failed ({reason})"), 2),
    };
    Ok(Output {
        stdout: trace.to_json_lines(),
        messages: vec![message],
        code,
    })
}

fn parse_tqs(list: &[String]) -> Result<Vec<Breakpoint>, CliError> {
    list.iter().map(|t| Ok(sweep::parse_t_q(t)?)).collect()
}

fn sweep_output(cfg: &RunConfig, rows: &[SweepRow], x_axis: &str) -> Result<Output, CliError> {
    let stdout = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep::to_csv(rows),
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "D": r.d, "t_q": r.t_q.to_string(), "t_star_inner": r.inner,
                        "t_star_outer": r.outer, "t_star_total": r.total,
                        "lower_bound": r.lower, "upper_bound": r.upper, "mode": r.mode.to_string(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&v).expect("rows serialise") + "\n"
        }
    };
    let mut messages = vec![format!("{} rows", rows.len())];
    if let Some(script) = &cfg.gnuplot {
        let data = cfg
            .output
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "sweep.csv".into());
        write_file(script, &gnuplot_script(&data, x_axis))?;
        messages.push(format!("wrote {}", script.display()));
    }
    Ok(Output {
        stdout,
        messages,
        code: 0,
    })
}

/// Plot script for the CSV contract; `t_q` strings are turned into numbers
/// inside gnuplot.
pub fn gnuplot_script(data: &str, x_axis: &str) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key outside right\n");
    s.push_str("set ylabel 'T*'\n");
    s.push_str("num(t) = (t eq 'inf') ? NaN : real(t[1:strstrt(t,'/')-1]) / real(t[strstrt(t,'/')+1:])\n");
    if x_axis == "D" {
        s.push_str("set xlabel 'D'\n");
        s.push_str(&format!(
            "tqs = system(\"tail -n +2 '{data}' | cut -d, -f2 | sort -u | tr '\\n' ' '\")\n"
        ));
        s.push_str(&format!(
            "plot for [t in tqs] '{data}' using 1:(strcol(2) eq t ? $3 : 1/0) with linespoints title 'inner t_q='.t, \\\n     for [t in tqs] '{data}' using 1:(strcol(2) eq t ? $4 : 1/0) with points title 'outer t_q='.t\n"
        ));
    } else {
        s.push_str("set xlabel 't_q'\nset logscale x\n");
        s.push_str(&format!(
            "ds = system(\"tail -n +2 '{data}' | cut -d, -f1 | sort -un | tr '\\n' ' '\")\n"
        ));
        s.push_str(&format!(
            "plot for [d in ds] '{data}' using (num(strcol(2))):(strcol(1) eq d ? $5 : 1/0) with steps title 'D='.d\n"
        ));
    }
    s
}

fn run_sweep(points: &[(usize, Breakpoint)], mode: Mode) -> Result<Vec<SweepRow>, CliError> {
    let rows: Result<Vec<SweepRow>, slotq::Error> = points
        .par_iter()
        .map(|&(d, t)| sweep::sweep_point(d, t, mode))
        .collect();
    Ok(rows?)
}

pub fn cmd_sweep_distance(cfg: &RunConfig) -> Result<Output, CliError> {
    let ds = cfg.distances.clone().unwrap_or_else(|| (2..=16).collect());
    let tqs = parse_tqs(
        &cfg.t_q_list
            .clone()
            .unwrap_or_else(|| ["1", "2", "4", "8", "inf"].map(String::from).to_vec()),
    )?;
    let points = sweep::distance_points(&ds, &tqs)?;
    let rows = run_sweep(&points, mode(cfg)?)?;
    sweep_output(cfg, &rows, "D")
}

pub fn cmd_sweep_tq(cfg: &RunConfig) -> Result<Output, CliError> {
    let ds = cfg.distances.clone().unwrap_or_else(|| (2..=12).collect());
    let extra = parse_tqs(&cfg.extra_t_q.clone().unwrap_or_default())?;
    let points = sweep::tq_points(&ds, &extra)?;
    let rows = run_sweep(&points, mode(cfg)?)?;
    sweep_output(cfg, &rows, "t_q")
}
