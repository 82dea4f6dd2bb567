//! List an item on the global market and buy it with another agent.
//!
//! cargo run --example market_trade

use std::collections::BTreeMap;

use gridmmo::datastore::schema::entity as ecol;
use gridmmo::datastore::GameState;
use gridmmo::sim::{spawn_agents, tick, Action};
use gridmmo::types::{EventType, ItemType};
use gridmmo::Config;

fn main() -> gridmmo::Result<()> {
    let cfg = Config {
        map_size: 32,
        border: 4,
        num_agents: 2,
        max_agents: 2,
        num_npcs: 0,
        ..Config::default()
    };
    let mut gs = GameState::new(cfg, 1)?;
    spawn_agents(&mut gs, 2)?;
    let hat = gs.create_item(1, ItemType::Hat, 3, 1);
    gs.set_ent(2, ecol::GOLD, 20);

    let out = tick(
        &mut gs,
        &BTreeMap::from([(
            1,
            Action::Sell {
                item: hat,
                price: 12,
            },
        )]),
    );
    println!("sell flagged: {:?}", out.invalid);
    let listing = gs.listings()[0];
    println!(
        "listing {} by {} at {}",
        listing.id, listing.seller, listing.price
    );

    // buying your own listing is refused
    let out = tick(&mut gs, &BTreeMap::from([(1, Action::Buy(listing.id))]));
    println!("self-buy flagged: {:?}", out.invalid);

    let before = gs.ent(1, ecol::GOLD) + gs.ent(2, ecol::GOLD);
    tick(&mut gs, &BTreeMap::from([(2, Action::Buy(listing.id))]));
    let after = gs.ent(1, ecol::GOLD) + gs.ent(2, ecol::GOLD);
    println!(
        "seller gold {} buyer gold {} (total {before} -> {after})",
        gs.ent(1, ecol::GOLD),
        gs.ent(2, ecol::GOLD)
    );
    println!(
        "hat now in inventory of agent 2: {}",
        gs.inventory(2).contains(&hat)
    );
    for e in gs
        .events()
        .iter()
        .filter(|e| e.event_type != EventType::DrinkWater.code())
    {
        println!(
            "tick {} {:?} actor {} price {} gold {}",
            e.tick,
            e.kind().unwrap(),
            e.actor,
            e.price,
            e.gold
        );
    }
    Ok(())
}
