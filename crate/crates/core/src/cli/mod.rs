//! Episode running, replay recording/verification and benchmarking, plus the
//! argument parser behind the `gridmmo` binary.

mod bench;
mod policy;
mod replay;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

pub use bench::{bench, BenchOutcome, ThroughputReport};
pub use policy::{act, legal_actions, random_action, scripted_action, PolicyKind};
pub use replay::{
    ReplayHeader, ReplayLog, ReplayWriter, TickRecord, REPLAY_FORMAT, REPLAY_VERSION,
};

use crate::config::Config;
use crate::env::{encode_action, Env};
use crate::error::{Error, Result};
use crate::tasks::{load_task_file, TaskSpec};
use crate::types::EntityId;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIVERGED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Format(_) => EXIT_FORMAT,
        _ => EXIT_USAGE,
    }
}

/// Tasks installed when no task file is given: per agent, travel 16 tiles
/// from spawn and harvest 5 items.
pub fn default_tasks(agents: &[EntityId]) -> Vec<TaskSpec> {
    let mut out = Vec::with_capacity(agents.len() * 2);
    for &a in agents {
        let p = |v: serde_json::Value| v.as_object().unwrap().clone();
        out.push(TaskSpec {
            predicate: "DistanceTraveled".into(),
            params: p(json!({"dist": 16})),
            subject: vec![a],
            assignee: vec![],
            multiplier: 1.0,
        });
        out.push(TaskSpec {
            predicate: "CountEvent".into(),
            params: p(json!({"event_type": "HARVEST_ITEM", "N": 5})),
            subject: vec![a],
            assignee: vec![],
            multiplier: 1.0,
        });
    }
    out
}

/// Summary of a finished episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeSummary {
    pub ticks: u64,
    pub final_digest: u64,
    pub digests: Vec<u64>,
    /// Completed and total task counts per assignee.
    pub completions: BTreeMap<EntityId, (usize, usize)>,
    pub alive: usize,
}

/// Run one episode with a built-in policy, optionally recording a replay.
pub fn run_episode(
    config: &Config,
    seed: u64,
    ticks: u64,
    policy: PolicyKind,
    tasks: Option<Vec<TaskSpec>>,
    mut replay: Option<&mut dyn Write>,
) -> Result<EpisodeSummary> {
    let tasks = tasks
        .unwrap_or_else(|| default_tasks(&(1..=config.num_agents as EntityId).collect::<Vec<_>>()));
    let mut env = Env::new(config.clone())?;
    env.reset(seed, &tasks)?;
    let mut writer = match replay.take() {
        Some(w) => Some(ReplayWriter::new(
            w,
            &ReplayHeader::new(seed, config, env.state().tiles(), &tasks),
        )?),
        None => None,
    };
    let mut digests = Vec::new();
    while !env.is_done() && (digests.len() as u64) < ticks {
        let gs = env.state();
        let tick = gs.current_tick();
        let first_event = gs.events().len();
        let actions: Vec<(EntityId, [i64; 4])> = act(policy, gs)
            .iter()
            .map(|(&a, x)| (a, encode_action(x)))
            .collect();
        let res = env.step_encoded(&actions.iter().copied().collect())?;
        digests.push(res.digest);
        if let Some(w) = writer.as_mut() {
            let events = env.state().events().since(first_event).collect();
            w.write(&TickRecord {
                tick,
                actions,
                events,
                digest: res.digest,
            })?;
        }
    }
    if let Some(w) = writer {
        w.finish()?;
    }
    let mut completions: BTreeMap<EntityId, (usize, usize)> = BTreeMap::new();
    for t in env.tasks() {
        for &a in t.assignee() {
            let e = completions.entry(a).or_default();
            e.0 += t.completed() as usize;
            e.1 += 1;
        }
    }
    let gs = env.state();
    Ok(EpisodeSummary {
        ticks: digests.len() as u64,
        final_digest: gs.state_digest(),
        digests,
        completions,
        alive: gs.agent_ids().iter().filter(|&&a| gs.is_alive(a)).count(),
    })
}

/// Result of re-simulating a replay log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Match { ticks: usize },
    Diverged { tick: u64, reason: String },
}

/// Re-simulate `log` and compare events and digests tick by tick.
pub fn verify_replay(log: &ReplayLog) -> Result<Verdict> {
    let h = &log.header;
    let map = h.tile_map()?;
    let mut env = Env::new(h.config.clone()).map_err(|e| Error::Format(e.to_string()))?;
    env.reset_with_map(h.seed, map, &h.tasks)
        .map_err(|e| Error::Format(e.to_string()))?;
    for (i, rec) in log.records.iter().enumerate() {
        let tick = env.state().current_tick();
        if env.is_done() {
            return Ok(Verdict::Diverged {
                tick,
                reason: "episode ended before the log did".into(),
            });
        }
        if rec.tick != tick {
            return Ok(Verdict::Diverged {
                tick: rec.tick,
                reason: format!(
                    "record {i} is for tick {} but simulation is at {tick}",
                    rec.tick
                ),
            });
        }
        let first_event = env.state().events().len();
        let res = env.step_encoded(&rec.actions.iter().copied().collect())?;
        let events: Vec<_> = env.state().events().since(first_event).collect();
        if events != rec.events {
            return Ok(Verdict::Diverged {
                tick,
                reason: "event records differ".into(),
            });
        }
        if res.digest != rec.digest {
            return Ok(Verdict::Diverged {
                tick,
                reason: format!("digest {:016x} != logged {:016x}", res.digest, rec.digest),
            });
        }
    }
    Ok(Verdict::Match {
        ticks: log.records.len(),
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "gridmmo",
    version,
    about = "Deterministic multi-agent grid world"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one episode and write a replay.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        ticks: Option<u64>,
        #[arg(long, value_enum, default_value = "random")]
        policy: PolicyKind,
        #[arg(long)]
        replay: PathBuf,
        /// JSON task file; defaults to two tasks per agent.
        #[arg(long)]
        tasks: Option<PathBuf>,
    },
    /// Measure agent-steps per second with random actions.
    Bench {
        #[arg(long, default_value_t = 128)]
        agents: usize,
        #[arg(long, default_value_t = 1000)]
        ticks: u64,
        #[arg(long)]
        no_mortality: bool,
        /// Independent environments, one thread each.
        #[arg(long, default_value_t = 1)]
        envs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check a replay log.
    Replay {
        #[arg(long)]
        replay: PathBuf,
        /// Re-simulate and compare per-tick digests.
        #[arg(long)]
        verify: bool,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

/// Execute a parsed command, writing human-readable output to `out`.
pub fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Run {
            config,
            seed,
            ticks,
            policy,
            replay,
            tasks,
        } => {
            let cfg = load_config(&config)?;
            let tasks = tasks.map(load_task_file).transpose()?;
            let ticks = ticks.unwrap_or(cfg.horizon);
            let mut file = BufWriter::new(File::create(&replay)?);
            let s = run_episode(&cfg, seed, ticks, policy, tasks, Some(&mut file))?;
            file.flush()?;
            writeln!(
                out,
                "ticks {} alive {} digest {:016x}",
                s.ticks, s.alive, s.final_digest
            )?;
            for (a, (done, total)) in &s.completions {
                writeln!(out, "agent {a}: {done}/{total} tasks completed")?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench {
            agents,
            ticks,
            no_mortality,
            envs,
            seed,
            config,
        } => {
            let cfg = load_config(&config)?;
            let b = bench(&cfg, agents, ticks, envs, !no_mortality, seed)?;
            let r = &b.report;
            writeln!(
                out,
                "{}",
                serde_json::to_string(&b).expect("report serializes")
            )?;
            writeln!(
                out,
                "{} agents x {} ticks x {} envs in {:.3}s on {} core(s): {:.0} agent-steps/s, {:.0} agent-steps/core/s",
                r.agents, r.ticks, r.envs, r.wall_seconds, r.cores, r.agent_steps_per_sec, r.agent_steps_per_core_sec
            )?;
            Ok(EXIT_OK)
        }
        Command::Replay { replay, verify } => {
            let log = ReplayLog::load(&replay)?;
            if !verify {
                writeln!(out, "seed {} ticks {}", log.header.seed, log.records.len())?;
                return Ok(EXIT_OK);
            }
            match verify_replay(&log)? {
                Verdict::Match { ticks } => {
                    writeln!(out, "ok: {ticks} ticks verified")?;
                    Ok(EXIT_OK)
                }
                Verdict::Diverged { tick, reason } => {
                    writeln!(out, "diverged at tick {tick}: {reason}")?;
                    Ok(EXIT_DIVERGED)
                }
            }
        }
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
