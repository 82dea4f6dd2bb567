//! Column views over a group of agents and filtered event queries.
//!
//! cargo run --example datastore_queries

use std::collections::BTreeMap;

use gridmmo::cli::{act, PolicyKind};
use gridmmo::datastore::{event_query, GameState, GroupView};
use gridmmo::sim::{spawn_agents, spawn_npcs, tick};
use gridmmo::types::{CombatStyle, EventType, Skill};
use gridmmo::Config;

fn main() -> gridmmo::Result<()> {
    let cfg = Config {
        map_size: 48,
        num_agents: 12,
        max_agents: 12,
        num_npcs: 24,
        ..Config::default()
    };
    let mut gs = GameState::new(cfg, 5)?;
    spawn_agents(&mut gs, 12)?;
    spawn_npcs(&mut gs, 24)?;
    for _ in 0..300 {
        let actions = act(PolicyKind::Scripted, &gs);
        tick(&mut gs, &actions);
    }

    let team = [1, 5, 9];
    let view = GroupView::new(&gs, &team)?;
    println!("members present: {:?} of {:?}", view.entity_ids(), team);
    println!("health {:?} gold {:?}", view.health(), view.gold());
    println!("melee levels {:?}", view.level(Skill::Melee));
    println!("items held: {}", view.items().len());

    let melee = event_query(
        &view,
        EventType::ScoreHit,
        &[("combat_style", CombatStyle::Melee.code())],
    )?;
    let harvests = event_query(&view, EventType::HarvestItem, &[])?;
    println!("melee hits {} harvests {}", melee.len(), harvests.len());

    let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
    for e in gs.events().iter() {
        *by_kind
            .entry(e.kind().map(|k| k.label()).unwrap_or("?"))
            .or_default() += 1;
    }
    println!("event log: {by_kind:?}");
    println!("state digest {:016x}", gs.state_digest());
    Ok(())
}
