//! Record an episode, reload the log and re-simulate it.
//!
//! cargo run --example replay_roundtrip

use gridmmo::cli::{run_episode, verify_replay, PolicyKind, ReplayLog, Verdict};
use gridmmo::Config;

fn main() -> gridmmo::Result<()> {
    let cfg = Config {
        map_size: 48,
        num_agents: 32,
        max_agents: 32,
        num_npcs: 32,
        ..Config::default()
    };
    let mut buf = Vec::new();
    let summary = run_episode(&cfg, 7, 256, PolicyKind::Random, None, Some(&mut buf))?;
    println!(
        "recorded {} ticks, {} bytes, final digest {:016x}",
        summary.ticks,
        buf.len(),
        summary.final_digest
    );

    let log = ReplayLog::read(&buf[..])?;
    println!(
        "header: seed {} engine {} config digest {}",
        log.header.seed, log.header.engine, log.header.config_digest
    );
    println!("{:?}", verify_replay(&log)?);

    // turn the first recorded gather into a no-op
    let mut tampered = log.clone();
    let gather = tampered
        .records
        .iter_mut()
        .flat_map(|r| r.actions.iter_mut())
        .find(|(_, a)| a[0] == 4);
    if let Some((agent, a)) = gather {
        println!("dropping a gather by agent {agent}");
        *a = [0, 0, 0, 0];
    }
    match verify_replay(&tampered)? {
        Verdict::Match { .. } => println!("tampered log still matches"),
        Verdict::Diverged { tick, reason } => {
            println!("tampered log diverged at tick {tick}: {reason}")
        }
    }
    Ok(())
}
