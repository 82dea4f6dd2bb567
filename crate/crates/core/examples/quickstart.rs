//! Reset an environment, drive it with the scripted policy and print rewards.
//!
//! cargo run --example quickstart

use std::collections::BTreeMap;

use gridmmo::cli::{act, default_tasks, PolicyKind};
use gridmmo::env::Env;
use gridmmo::types::EntityId;
use gridmmo::Config;

fn main() -> gridmmo::Result<()> {
    let cfg = Config {
        num_agents: 16,
        num_npcs: 16,
        horizon: 200,
        ..Config::default()
    };
    let agents: Vec<EntityId> = (1..=cfg.num_agents as EntityId).collect();
    let mut env = Env::new(cfg)?;
    let obs = env.reset(42, &default_tasks(&agents))?;
    println!(
        "{} agents, {} floats per observation",
        obs.len(),
        env.layout().len()
    );

    let mut totals: BTreeMap<EntityId, f64> = BTreeMap::new();
    while !env.is_done() {
        let actions = act(PolicyKind::Scripted, env.state());
        let res = env.step(&actions)?;
        for (a, r) in res.rewards {
            *totals.entry(a).or_default() += r;
        }
    }
    let gs = env.state();
    println!(
        "finished at tick {} with digest {:016x}",
        gs.current_tick(),
        gs.state_digest()
    );
    for (a, r) in totals.iter().take(5) {
        println!("agent {a}: reward {r:.3}");
    }
    Ok(())
}
