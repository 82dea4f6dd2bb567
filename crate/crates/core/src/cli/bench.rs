//! Throughput measurement.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use super::policy::{act, PolicyKind};
use crate::config::Config;
use crate::env::{encode_action, Env};
use crate::error::Result;

/// Agent-step throughput, computed only from the logged raw numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThroughputReport {
    pub agents: usize,
    pub ticks: u64,
    pub envs: usize,
    pub cores: usize,
    pub wall_seconds: f64,
    pub agent_steps: u64,
    pub agent_steps_per_sec: f64,
    pub agent_steps_per_core_sec: f64,
}

impl ThroughputReport {
    pub fn new(agents: usize, ticks: u64, envs: usize, cores: usize, wall_seconds: f64) -> Self {
        let agent_steps = agents as u64 * ticks * envs as u64;
        let per_sec = agent_steps as f64 / wall_seconds;
        Self {
            agents,
            ticks,
            envs,
            cores,
            wall_seconds,
            agent_steps,
            agent_steps_per_sec: per_sec,
            agent_steps_per_core_sec: per_sec / cores as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchOutcome {
    pub report: ThroughputReport,
    /// Live agents at the end of each environment's run.
    pub alive_at_end: Vec<usize>,
    pub final_digests: Vec<u64>,
}

fn run_one(cfg: &Config, seed: u64, ticks: u64) -> Result<(usize, u64)> {
    let mut env = Env::new(cfg.clone())?;
    env.reset(seed, &[])?;
    for _ in 0..ticks {
        if env.is_done() {
            break;
        }
        let actions: BTreeMap<_, _> = act(PolicyKind::Random, env.state())
            .iter()
            .map(|(&a, act)| (a, encode_action(act)))
            .collect();
        env.step_encoded(&actions)?;
    }
    let gs = env.state();
    let alive = gs.agent_ids().iter().filter(|&&a| gs.is_alive(a)).count();
    Ok((alive, gs.state_digest()))
}

/// Run `envs` independent random-policy environments, one thread each.
pub fn bench(
    base: &Config,
    agents: usize,
    ticks: u64,
    envs: usize,
    mortality: bool,
    seed: u64,
) -> Result<BenchOutcome> {
    let mut cfg = base.clone();
    cfg.num_agents = agents;
    cfg.max_agents = cfg.max_agents.max(agents);
    cfg.horizon = cfg.horizon.max(ticks);
    cfg.mortality = mortality;
    cfg.validate()?;
    let envs = envs.max(1);
    let cores = envs.min(std::thread::available_parallelism().map_or(1, |n| n.get()));

    let start = Instant::now();
    let results: Vec<Result<(usize, u64)>> = if envs == 1 {
        vec![run_one(&cfg, seed, ticks)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..envs)
                .map(|e| {
                    let cfg = &cfg;
                    s.spawn(move || run_one(cfg, seed + e as u64, ticks))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("bench thread"))
                .collect()
        })
    };
    let wall = start.elapsed().as_secs_f64();
    let mut alive_at_end = Vec::new();
    let mut final_digests = Vec::new();
    for r in results {
        let (a, d) = r?;
        alive_at_end.push(a);
        final_digests.push(d);
    }
    Ok(BenchOutcome {
        report: ThroughputReport::new(agents, ticks, envs, cores, wall),
        alive_at_end,
        final_digests,
    })
}
