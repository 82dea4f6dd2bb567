//! Write a predicate as a plain function, wrap it with `make_predicate` and
//! hand out one task per agent, plus a team task and a routed one.
//!
//! cargo run --example custom_predicate

use gridmmo::cli::{act, PolicyKind};
use gridmmo::datastore::{event_query, GameState, GroupView};
use gridmmo::env::Env;
use gridmmo::tasks::{make_predicate, per_agent, Params, Registry, TaskSpec};
use gridmmo::types::EventType;
use gridmmo::Config;

/// Rewards the first and third kill heavily, then 0.06 per kill.
fn kill_predicate(_gs: &GameState, subject: &GroupView, _p: &Params) -> gridmmo::Result<f64> {
    let kills = event_query(subject, EventType::PlayerKill, &[])?.len() as f64;
    let mut progress = kills * 0.06;
    if kills >= 1.0 {
        progress += 0.1;
    }
    if kills >= 3.0 {
        progress += 0.3;
    }
    Ok(progress.min(1.0))
}

fn main() -> gridmmo::Result<()> {
    let kill = make_predicate("Kills", kill_predicate);
    let agents: Vec<i64> = (1..=8).collect();
    println!(
        "{} per-agent tasks",
        per_agent(&kill, &Params::new(), &agents)?.len()
    );

    let mut registry = Registry::new();
    registry.register(kill);
    let mut specs: Vec<TaskSpec> = agents
        .iter()
        .map(|&a| TaskSpec {
            predicate: "Kills".into(),
            params: Params::new(),
            subject: vec![a],
            assignee: vec![],
            multiplier: 1.0,
        })
        .collect();
    // the whole group as one subject
    specs.push(TaskSpec {
        predicate: "Kills".into(),
        params: Params::new(),
        subject: agents.clone(),
        assignee: vec![],
        multiplier: 1.0,
    });
    // agent 1 is paid for agent 2's kills
    specs.push(TaskSpec {
        predicate: "Kills".into(),
        params: Params::new(),
        subject: vec![2],
        assignee: vec![1],
        multiplier: 1.0,
    });

    let cfg = Config {
        map_size: 32,
        border: 4,
        num_agents: 8,
        max_agents: 8,
        num_npcs: 32,
        horizon: 400,
        ..Config::default()
    };
    let mut env = Env::new(cfg)?.with_registry(registry);
    env.reset(3, &specs)?;
    while !env.is_done() {
        let actions = act(PolicyKind::Scripted, env.state());
        env.step(&actions)?;
    }
    for t in env.tasks() {
        println!(
            "subject {:?} -> assignee {:?}: progress {:.2}",
            t.subject(),
            t.assignee(),
            t.progress()
        );
    }
    Ok(())
}
