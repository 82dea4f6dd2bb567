//! Random-action throughput with mortality off.
//!
//! cargo run --release --example throughput -- [agents] [ticks] [envs]

use gridmmo::cli::bench;
use gridmmo::Config;

fn main() -> gridmmo::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let agents = args.next().flatten().unwrap_or(128) as usize;
    let ticks = args.next().flatten().unwrap_or(1000);
    let envs = args.next().flatten().unwrap_or(1) as usize;
    let out = bench(&Config::default(), agents, ticks, envs, false, 0)?;
    let r = &out.report;
    println!(
        "{} agent-steps in {:.2}s on {} core(s): {:.0}/s, {:.0}/core/s",
        r.agent_steps, r.wall_seconds, r.cores, r.agent_steps_per_sec, r.agent_steps_per_core_sec
    );
    println!("alive at end: {:?}", out.alive_at_end);
    Ok(())
}
