mod common;

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use common::*;
use gridmmo::cli::{act, PolicyKind};
use gridmmo::datastore::schema::{entity as ecol, item as icol};
use gridmmo::datastore::{GameState, GroupView};
use gridmmo::sim::{
    gather, market_buy, market_sell, npc_policy, progression_check, resolve_attack, spawn_agents,
    spawn_npcs, tick, use_item, Action, Invalid,
};
use gridmmo::types::{
    CombatStyle, Direction, Disposition, EntityId, EntityKind, EventType, ItemType, Skill, Slot,
};
use gridmmo::worldgen::{Material, TileMap};
use gridmmo::{Config, Error};
use proptest::prelude::*;

fn cfg() -> Config {
    Config {
        map_size: 32,
        border: 4,
        ..Config::default()
    }
}

/// Grass map with some tiles overwritten.
fn map_with(cfg: &Config, tiles: &[(i64, i64, Material)]) -> TileMap {
    let size = cfg.world_size();
    let mut b = grass_map(size, cfg.border).to_bytes();
    for &(r, c, m) in tiles {
        b[12 + 3 * (r as usize * size + c as usize)] = m as u8;
    }
    TileMap::from_bytes(&b).unwrap()
}

fn state_with(cfg: Config, tiles: &[(i64, i64, Material)]) -> GameState {
    let map = map_with(&cfg, tiles);
    GameState::with_map(cfg, 0, map)
}

fn agent(gs: &mut GameState, id: EntityId, pos: (i64, i64)) {
    gs.insert_entity(id, EntityKind::Agent, Disposition::None, pos)
        .unwrap();
    gs.set_spawn_pos(id, pos).unwrap();
}

fn npc(gs: &mut GameState, d: Disposition, pos: (i64, i64)) -> EntityId {
    let id = gs.next_npc_id();
    gs.insert_entity(id, EntityKind::Npc, d, pos).unwrap();
    id
}

fn noop() -> BTreeMap<EntityId, Action> {
    BTreeMap::new()
}

fn count(gs: &GameState, kind: EventType) -> usize {
    gs.events()
        .iter()
        .filter(|e| e.event_type == kind.code())
        .count()
}

// ── spawning ────────────────────────────────────────────────────

#[test]
fn spawn_128_agents() {
    let mut gs = GameState::new(Config::default(), 3).unwrap();
    let ids = spawn_agents(&mut gs, 128).unwrap();
    assert_eq!(ids, (1..=128).collect::<Vec<_>>());
    let tiles: HashSet<_> = ids.iter().map(|&a| gs.position(a).unwrap()).collect();
    assert_eq!(tiles.len(), 128);
    let v = GroupView::new(&gs, &ids).unwrap();
    assert_eq!(v.health().iter().sum::<i64>(), 12800);
    for &a in &ids {
        assert_eq!(gs.spawn_pos(a), gs.position(a));
        assert_eq!(
            (
                gs.ent(a, ecol::FOOD),
                gs.ent(a, ecol::WATER),
                gs.ent(a, ecol::GOLD)
            ),
            (100, 100, 0)
        );
        assert!(Skill::ALL.iter().all(|&s| gs.level(a, s) == 1));
    }
}

#[test]
fn spawn_limits() {
    let mut gs = GameState::new(Config::default(), 3).unwrap();
    assert!(matches!(spawn_agents(&mut gs, 129), Err(Error::Config(_))));
    let tiny = Config {
        map_size: 20,
        border: 6,
        max_agents: 200,
        num_agents: 0,
        ..Config::default()
    };
    let mut gs = GameState::new(tiny, 3).unwrap();
    assert!(matches!(spawn_agents(&mut gs, 200), Err(Error::Config(_))));
    assert!(spawn_npcs(&mut gs, 0).unwrap().is_empty());
    assert!(gs.npc_ids().is_empty());
}

#[test]
fn npc_dispositions_follow_ratios() {
    let mut gs = GameState::new(Config::default(), 11).unwrap();
    let ids = spawn_npcs(&mut gs, 1000).unwrap();
    let share = |d: Disposition| {
        ids.iter()
            .filter(|&&n| gs.ent(n, ecol::DISPOSITION) == d as i64)
            .count() as f64
            / 1000.0
    };
    assert!((share(Disposition::Passive) - 0.5).abs() <= 0.05);
    assert!((share(Disposition::Neutral) - 0.3).abs() <= 0.05);
    assert!((share(Disposition::Hostile) - 0.2).abs() <= 0.05);
    for &n in &ids {
        let (r, c) = gs.position(n).unwrap();
        assert!(gs.tiles().passable(r, c));
        assert!(gs.ent(n, ecol::LEVEL_BASE) >= 1);
    }
}

#[test]
fn npc_levels_fall_off_with_distance() {
    let mut gs = GameState::new(Config::default(), 2).unwrap();
    let ids = spawn_npcs(&mut gs, 200).unwrap();
    let center = gs.tiles().center();
    let mut by_dist: Vec<(i64, i64)> = ids
        .iter()
        .map(|&n| {
            (
                gridmmo::types::linf(gs.position(n).unwrap(), center),
                gs.level(n, Skill::Melee),
            )
        })
        .collect();
    by_dist.sort();
    assert!(by_dist.windows(2).all(|w| w[0].1 >= w[1].1));
}

// ── combat ──────────────────────────────────────────────────────

fn duel() -> GameState {
    let mut gs = grass_state(cfg());
    agent(&mut gs, 1, (10, 10));
    agent(&mut gs, 2, (10, 11));
    gs
}

#[test]
fn bare_melee_hits_for_seven() {
    let mut gs = duel();
    assert_eq!(resolve_attack(&mut gs, 1, CombatStyle::Melee, 2), Ok(7));
    assert_eq!(gs.ent(2, ecol::HEALTH), 93);
    let hit = gs.events().iter().last().unwrap();
    assert_eq!(
        (hit.event_type, hit.actor, hit.target, hit.damage),
        (EventType::ScoreHit.code(), 1, 2, 7)
    );
    assert_eq!(hit.combat_style, CombatStyle::Melee.code());
    assert_eq!(gs.ent(1, ecol::XP_BASE + Skill::Melee.index()), 1);
}

#[test]
fn ranged_without_ammo_is_flagged() {
    let mut gs = duel();
    assert_eq!(
        resolve_attack(&mut gs, 1, CombatStyle::Range, 2),
        Err(Invalid::MissingAmmo)
    );
    assert_eq!(gs.events().len(), 0);
    assert_eq!(gs.ent(2, ecol::HEALTH), 100);
}

#[test]
fn ranged_consumes_ammo_and_adds_its_level() {
    let mut gs = duel();
    let arrows = gs.create_item(1, ItemType::Arrows, 2, 2);
    let bow = gs.create_item(1, ItemType::Bow, 1, 1);
    gs.equip(1, arrows).unwrap();
    gs.equip(1, bow).unwrap();
    // 5 + 2*1 + (1*2 + 2)
    assert_eq!(resolve_attack(&mut gs, 1, CombatStyle::Range, 2), Ok(11));
    assert_eq!(gs.item(arrows, icol::QUANTITY), Some(1));
    resolve_attack(&mut gs, 1, CombatStyle::Range, 2).unwrap();
    assert_eq!(gs.item_row(arrows), None);
    assert_eq!(gs.slot(1, Slot::Ammo), 0);
    assert_eq!(
        resolve_attack(&mut gs, 1, CombatStyle::Range, 2),
        Err(Invalid::MissingAmmo)
    );
}

#[test]
fn triangle_and_defense() {
    let mut gs = duel();
    gs.set_ent(2, ecol::LAST_STYLE, CombatStyle::Range.code());
    // floor(1.5 * 7)
    assert_eq!(resolve_attack(&mut gs, 1, CombatStyle::Melee, 2), Ok(10));
    gs.set_ent(2, ecol::LAST_STYLE, CombatStyle::Mage.code());
    assert_eq!(resolve_attack(&mut gs, 1, CombatStyle::Melee, 2), Ok(7));
    let hat = gs.create_item(2, ItemType::Hat, 4, 1);
    let top = gs.create_item(2, ItemType::Top, 5, 1);
    gs.equip(2, hat).unwrap();
    gs.equip(2, top).unwrap();
    assert_eq!(resolve_attack(&mut gs, 1, CombatStyle::Melee, 2), Ok(1));
}

#[test]
fn attack_range_and_targets() {
    let mut gs = duel();
    agent(&mut gs, 3, (10, 13));
    assert_eq!(
        resolve_attack(&mut gs, 1, CombatStyle::Melee, 3),
        Err(Invalid::OutOfRange)
    );
    assert_eq!(
        resolve_attack(&mut gs, 1, CombatStyle::Melee, 1),
        Err(Invalid::SelfTarget)
    );
    gs.set_ent(2, ecol::HEALTH, 0);
    assert_eq!(
        resolve_attack(&mut gs, 1, CombatStyle::Melee, 2),
        Err(Invalid::DeadTarget)
    );
}

#[test]
fn kill_moves_gold_and_logs() {
    let mut gs = duel();
    gs.set_ent(2, ecol::HEALTH, 5);
    gs.set_ent(2, ecol::GOLD, 9);
    gs.set_ent(1, ecol::GOLD, 1);
    resolve_attack(&mut gs, 1, CombatStyle::Melee, 2).unwrap();
    assert_eq!(gs.ent(2, ecol::HEALTH), 0);
    assert_eq!((gs.ent(1, ecol::GOLD), gs.ent(2, ecol::GOLD)), (10, 0));
    let kill = gs.events().iter().last().unwrap();
    assert_eq!(
        (kill.event_type, kill.target, kill.gold),
        (EventType::PlayerKill.code(), 2, 9)
    );
    // the hit records the health actually removed
    let hit = gs.events().get(0);
    assert_eq!(hit.damage, 5);
}

#[test]
fn agent_death_drops_unequipped_and_destroys_equipped() {
    let mut gs = duel();
    let hat = gs.create_item(2, ItemType::Hat, 1, 1);
    let ration = gs.create_item(2, ItemType::Ration, 1, 1);
    let potion = gs.create_item(2, ItemType::Potion, 1, 1);
    gs.equip(2, hat).unwrap();
    gs.add_listing(2, potion, 3);
    gs.set_ent(2, ecol::HEALTH, 1);
    let out = tick(
        &mut gs,
        &BTreeMap::from([(
            1,
            Action::Attack {
                style: CombatStyle::Melee,
                target: 2,
            },
        )]),
    );
    assert_eq!(out.deaths, vec![2]);
    assert!(!gs.is_alive(2));
    assert_eq!(gs.occupant(10, 11), 0);
    assert_eq!(gs.item_row(hat), None);
    assert_eq!(gs.item_row(potion), None);
    assert!(gs.listings().is_empty());
    assert_eq!(gs.item(ration, icol::OWNER_ID), Some(0));
    assert_eq!(gs.items_on_tile(10, 11), 1);
    // the row is freed on the next tick
    assert!(gs.entity_row(2).is_some());
    tick(&mut gs, &noop());
    assert!(gs.entity_row(2).is_none());
}

#[test]
fn npc_loot_goes_to_the_killer() {
    let mut gs = duel();
    let n = npc(&mut gs, Disposition::Passive, (11, 10));
    let spear = gs.create_item(n, ItemType::Spear, 2, 1);
    gs.set_ent(n, ecol::HEALTH, 1);
    gs.set_ent(n, ecol::GOLD, 2);
    tick(
        &mut gs,
        &BTreeMap::from([(
            1,
            Action::Attack {
                style: CombatStyle::Melee,
                target: n,
            },
        )]),
    );
    assert_eq!(gs.item(spear, icol::OWNER_ID), Some(1));
    assert_eq!(gs.ent(1, ecol::GOLD), 2);
}

// ── movement ────────────────────────────────────────────────────

#[test]
fn lower_id_wins_contested_tile() {
    let mut gs = grass_state(cfg());
    agent(&mut gs, 1, (10, 10));
    agent(&mut gs, 2, (10, 12));
    let acts = BTreeMap::from([
        (2, Action::Move(Some(Direction::West))),
        (1, Action::Move(Some(Direction::East))),
    ]);
    let out = tick(&mut gs, &acts);
    assert_eq!(gs.position(1), Some((10, 11)));
    assert_eq!(gs.position(2), Some((10, 12)));
    assert!(out.invalid.is_empty());
}

#[test]
fn moving_into_water_is_blocked() {
    let c = cfg();
    let mut gs = state_with(c, &[(10, 11, Material::Water)]);
    agent(&mut gs, 1, (10, 10));
    let out = tick(
        &mut gs,
        &BTreeMap::from([(1, Action::Move(Some(Direction::East)))]),
    );
    assert_eq!(out.invalid.get(&1), Some(&Invalid::Blocked));
    assert_eq!(gs.position(1), Some((10, 10)));
    // the void border blocks too
    let mut gs = grass_state(cfg());
    agent(&mut gs, 1, (4, 4));
    let out = tick(
        &mut gs,
        &BTreeMap::from([(1, Action::Move(Some(Direction::North)))]),
    );
    assert_eq!(out.invalid.get(&1), Some(&Invalid::Blocked));
}

#[test]
fn empty_actions_only_advance_time() {
    let mut gs = duel();
    let before = gs.current_tick();
    tick(&mut gs, &noop());
    assert_eq!(gs.current_tick(), before + 1);
    assert_eq!(gs.position(1), Some((10, 10)));
    assert_eq!(gs.events().len(), 0);
}

#[test]
fn actions_for_dead_or_unknown_agents_are_ignored() {
    let mut gs = duel();
    gs.set_ent(2, ecol::HEALTH, 0);
    gs.set_ent(2, ecol::ALIVE, 0);
    let acts = BTreeMap::from([
        (2, Action::Move(Some(Direction::South))),
        (7, Action::Gather),
    ]);
    let out = tick(&mut gs, &acts);
    assert_eq!(out.ignored, vec![2, 7]);
    assert_eq!(gs.position(2), Some((10, 11)));
}

// ── survival ────────────────────────────────────────────────────

#[test]
fn idle_agent_starves_after_200_ticks() {
    let mut gs = grass_state(cfg());
    agent(&mut gs, 1, (10, 10));
    for _ in 0..199 {
        tick(&mut gs, &noop());
    }
    assert_eq!(gs.ent(1, ecol::FOOD), 1);
    tick(&mut gs, &noop());
    assert_eq!(gs.ent(1, ecol::FOOD), 0);
    assert_eq!(gs.ent(1, ecol::WATER), 0);
}

#[test]
fn empty_stores_kill_in_ten_ticks() {
    let mut gs = grass_state(cfg());
    agent(&mut gs, 1, (10, 10));
    let ration = gs.create_item(1, ItemType::Ration, 1, 1);
    gs.set_ent(1, ecol::FOOD, 0);
    gs.set_ent(1, ecol::WATER, 0);
    for _ in 0..9 {
        tick(&mut gs, &noop());
    }
    assert_eq!(gs.ent(1, ecol::HEALTH), 10);
    assert!(gs.is_alive(1));
    let out = tick(&mut gs, &noop());
    assert_eq!(out.deaths, vec![1]);
    assert_eq!(gs.ent(1, ecol::HEALTH), 0);
    assert_eq!(gs.item(ration, icol::OWNER_ID), Some(0));
}

#[test]
fn forest_feeds_and_water_quenches() {
    let mut gs = state_with(
        cfg(),
        &[(10, 10, Material::Forest), (11, 11, Material::Water)],
    );
    agent(&mut gs, 1, (10, 10));
    agent(&mut gs, 2, (10, 11));
    for a in [1, 2] {
        gs.set_ent(a, ecol::FOOD, 20);
        gs.set_ent(a, ecol::WATER, 20);
    }
    tick(&mut gs, &noop());
    assert_eq!(gs.ent(1, ecol::FOOD), 100);
    assert_eq!(gs.ent(1, ecol::WATER), 20);
    assert_eq!(gs.ent(2, ecol::WATER), 100);
    assert_eq!(count(&gs, EventType::EatFood), 1);
    assert_eq!(count(&gs, EventType::DrinkWater), 1);
    assert!(!gs.tiles().is_available(10, 10));
}

#[test]
fn regeneration_needs_both_stores() {
    let mut gs = duel();
    gs.set_ent(1, ecol::HEALTH, 50);
    gs.set_ent(2, ecol::HEALTH, 50);
    gs.set_ent(2, ecol::FOOD, 50);
    tick(&mut gs, &noop());
    assert_eq!(gs.ent(1, ecol::HEALTH), 51);
    assert_eq!(gs.ent(2, ecol::HEALTH), 50);
}

// ── professions ─────────────────────────────────────────────────

#[test]
fn herbalism_level_sets_potion_level() {
    let mut gs = state_with(cfg(), &[(10, 10, Material::Herb)]);
    agent(&mut gs, 1, (10, 10));
    gs.set_ent(1, ecol::LEVEL_BASE + Skill::Herbalism.index(), 3);
    let item = gather(&mut gs, 1).unwrap();
    assert_eq!(gs.item_type(item), Some(ItemType::Potion));
    assert_eq!(gs.item(item, icol::LEVEL), Some(3));
    assert_eq!(count(&gs, EventType::HarvestItem), 1);
    assert_eq!(gather(&mut gs, 1), Err(Invalid::NoResource));
}

#[test]
fn gather_on_grass_is_flagged() {
    let mut gs = duel();
    let out = tick(&mut gs, &BTreeMap::from([(1, Action::Gather)]));
    assert_eq!(out.invalid.get(&1), Some(&Invalid::NoResource));
}

#[test]
fn fish_is_gathered_from_the_shore() {
    let mut gs = state_with(cfg(), &[(10, 11, Material::Fish)]);
    agent(&mut gs, 1, (10, 10));
    let item = gather(&mut gs, 1).unwrap();
    assert_eq!(gs.item_type(item), Some(ItemType::Ration));
    assert!(!gs.tiles().is_available(10, 11));
}

#[test]
fn ten_gathers_reach_level_two() {
    let c = Config {
        respawn_delay: 0,
        ..cfg()
    };
    let mut gs = state_with(c, &[(10, 10, Material::Ore)]);
    agent(&mut gs, 1, (10, 10));
    for i in 0..10 {
        assert_eq!(gs.level(1, Skill::Prospecting), 1, "gather {i}");
        gather(&mut gs, 1).unwrap();
    }
    assert_eq!(gs.level(1, Skill::Prospecting), 2);
    assert_eq!(count(&gs, EventType::LevelUp), 1);
}

#[test]
fn ammo_gathers_stack() {
    let c = Config {
        respawn_delay: 0,
        ..cfg()
    };
    let mut gs = state_with(c, &[(10, 10, Material::Tree)]);
    agent(&mut gs, 1, (10, 10));
    let first = gather(&mut gs, 1).unwrap();
    assert_eq!(gather(&mut gs, 1), Ok(first));
    assert_eq!(gs.item(first, icol::QUANTITY), Some(2));
    assert_eq!(gs.inventory(1).len(), 1);
}

#[test]
fn matching_tool_adds_experience() {
    let mut gs = state_with(cfg(), &[(10, 10, Material::Crystal)]);
    agent(&mut gs, 1, (10, 10));
    let chisel = gs.create_item(1, ItemType::Chisel, 3, 1);
    gs.equip(1, chisel).unwrap();
    gather(&mut gs, 1).unwrap();
    assert_eq!(gs.ent(1, ecol::XP_BASE + Skill::Alchemy.index()), 4);
}

#[test]
fn full_inventory_blocks_gathering() {
    let mut gs = state_with(cfg(), &[(10, 10, Material::Herb)]);
    agent(&mut gs, 1, (10, 10));
    for _ in 0..12 {
        gs.create_item(1, ItemType::Hat, 1, 1);
    }
    assert_eq!(gather(&mut gs, 1), Err(Invalid::InventoryFull));
    assert!(gs.tiles().is_available(10, 10));
}

#[test]
fn progression_thresholds() {
    let mut gs = duel();
    let xp = ecol::XP_BASE + Skill::Melee.index();
    gs.set_ent(1, xp, 9);
    assert_eq!(progression_check(&mut gs, 1, Skill::Melee), 1);
    gs.set_ent(1, xp, 10);
    assert_eq!(progression_check(&mut gs, 1, Skill::Melee), 2);
    gs.set_ent(1, xp, 30);
    assert_eq!(progression_check(&mut gs, 1, Skill::Melee), 4);
    assert_eq!(count(&gs, EventType::LevelUp), 3);
    gs.set_ent(2, ecol::LEVEL_BASE + Skill::Melee.index(), 10);
    gs.set_ent(2, xp, 10_000);
    assert_eq!(progression_check(&mut gs, 2, Skill::Melee), 10);
}

// ── items ───────────────────────────────────────────────────────

#[test]
fn use_item_rules() {
    let mut gs = duel();
    let spear = gs.create_item(1, ItemType::Spear, 3, 1);
    gs.set_ent(1, ecol::LEVEL_BASE + Skill::Melee.index(), 2);
    assert_eq!(use_item(&mut gs, 1, spear), Err(Invalid::LevelGate));
    assert_eq!(use_item(&mut gs, 2, spear), Err(Invalid::NotOwner));

    let potion = gs.create_item(1, ItemType::Potion, 1, 1);
    gs.set_ent(1, ecol::HEALTH, 80);
    use_item(&mut gs, 1, potion).unwrap();
    assert_eq!(gs.ent(1, ecol::HEALTH), 100);
    assert_eq!(gs.item_row(potion), None);

    let ration = gs.create_item(1, ItemType::Ration, 1, 1);
    gs.set_ent(1, ecol::FOOD, 30);
    use_item(&mut gs, 1, ration).unwrap();
    assert_eq!(gs.ent(1, ecol::FOOD), 80);
    assert_eq!(count(&gs, EventType::ConsumeItem), 2);
}

#[test]
fn equipping_replaces_the_previous_item() {
    let mut gs = duel();
    let old = gs.create_item(1, ItemType::Hat, 1, 1);
    let new = gs.create_item(1, ItemType::Hat, 1, 1);
    use_item(&mut gs, 1, old).unwrap();
    assert_eq!(gs.slot(1, Slot::Hat), old);
    assert_eq!(gs.item(old, icol::EQUIPPED), Some(1));
    assert_eq!(use_item(&mut gs, 1, old), Err(Invalid::AlreadyEquipped));
    use_item(&mut gs, 1, new).unwrap();
    assert_eq!(gs.slot(1, Slot::Hat), new);
    assert_eq!(gs.item(old, icol::EQUIPPED), Some(0));
    assert_eq!(gs.item(old, icol::OWNER_ID), Some(1));
    assert_eq!(count(&gs, EventType::EquipItem), 2);
}

// ── market ──────────────────────────────────────────────────────

#[test]
fn sell_then_buy_conserves_gold() {
    let mut gs = duel();
    let hat = gs.create_item(1, ItemType::Hat, 2, 1);
    gs.set_ent(2, ecol::GOLD, 10);
    let listing = market_sell(&mut gs, 1, hat, 4).unwrap();
    assert_eq!(gs.item(hat, icol::LISTED), Some(1));
    market_buy(&mut gs, 2, listing).unwrap();
    assert_eq!((gs.ent(1, ecol::GOLD), gs.ent(2, ecol::GOLD)), (4, 6));
    assert_eq!(gs.item(hat, icol::OWNER_ID), Some(2));
    assert_eq!(gs.item(hat, icol::LISTED), Some(0));
    assert!(gs.listings().is_empty());
    let kinds: Vec<i64> = gs.events().iter().map(|e| e.event_type).collect();
    assert_eq!(
        kinds,
        [EventType::ListItem, EventType::BuyItem, EventType::EarnGold].map(|k| k.code())
    );
}

#[test]
fn market_rejections() {
    let mut gs = duel();
    let hat = gs.create_item(1, ItemType::Hat, 2, 1);
    let top = gs.create_item(1, ItemType::Top, 1, 1);
    gs.equip(1, top).unwrap();
    assert_eq!(market_sell(&mut gs, 1, top, 3), Err(Invalid::Equipped));
    assert_eq!(market_sell(&mut gs, 2, hat, 3), Err(Invalid::NotOwner));
    assert_eq!(market_sell(&mut gs, 1, hat, 0), Err(Invalid::BadPrice));
    let listing = market_sell(&mut gs, 1, hat, 3).unwrap();
    assert_eq!(market_sell(&mut gs, 1, hat, 3), Err(Invalid::Listed));
    assert_eq!(market_buy(&mut gs, 1, listing), Err(Invalid::OwnListing));
    gs.set_ent(2, ecol::GOLD, 2);
    assert_eq!(
        market_buy(&mut gs, 2, listing),
        Err(Invalid::InsufficientGold)
    );
    assert_eq!(gs.listings().len(), 1);
    assert_eq!(market_buy(&mut gs, 2, listing + 1), Err(Invalid::NoListing));
    assert_eq!(use_item(&mut gs, 1, hat), Err(Invalid::Listed));
}

#[test]
fn sells_resolve_before_buys() {
    let mut gs = duel();
    let hat = gs.create_item(2, ItemType::Hat, 1, 1);
    gs.set_ent(1, ecol::GOLD, 5);
    // listing ids start at 1
    let acts = BTreeMap::from([
        (1, Action::Buy(1)),
        (
            2,
            Action::Sell {
                item: hat,
                price: 5,
            },
        ),
    ]);
    let out = tick(&mut gs, &acts);
    assert!(out.invalid.is_empty(), "{:?}", out.invalid);
    assert_eq!(gs.item(hat, icol::OWNER_ID), Some(1));
}

// ── npcs ────────────────────────────────────────────────────────

#[test]
fn hostile_npc_attacks_nearby_agent() {
    let mut gs = grass_state(cfg());
    agent(&mut gs, 1, (10, 10));
    let n = npc(&mut gs, Disposition::Hostile, (12, 10));
    assert_eq!(
        npc_policy(&gs, n),
        Action::Attack {
            style: CombatStyle::Melee,
            target: 1
        }
    );
    // it closes the gap during the move phase and hits in the same tick
    tick(&mut gs, &noop());
    assert_eq!(gs.position(n), Some((11, 10)));
    assert!(gs.ent(1, ecol::HEALTH) < 100);
}

#[test]
fn hostile_npc_ignores_far_agents() {
    let mut gs = grass_state(cfg());
    agent(&mut gs, 1, (10, 10));
    let n = npc(&mut gs, Disposition::Hostile, (15, 10));
    assert!(matches!(npc_policy(&gs, n), Action::Move(_)));
}

#[test]
fn passive_npc_never_fights_back() {
    let mut gs = grass_state(cfg());
    agent(&mut gs, 1, (10, 10));
    let n = npc(&mut gs, Disposition::Passive, (10, 11));
    for _ in 0..5 {
        let mut acts = BTreeMap::new();
        if let Some(p) = gs.position(n) {
            if gridmmo::types::linf(p, (10, 10)) <= 1 {
                acts.insert(
                    1,
                    Action::Attack {
                        style: CombatStyle::Melee,
                        target: n,
                    },
                );
            }
        }
        tick(&mut gs, &acts);
        if gs.is_alive(n) {
            assert!(matches!(npc_policy(&gs, n), Action::Move(_)));
        }
    }
    assert_eq!(gs.ent(1, ecol::HEALTH), 100);
}

#[test]
fn neutral_npc_retaliates() {
    let mut gs = grass_state(cfg());
    agent(&mut gs, 1, (10, 10));
    let n = npc(&mut gs, Disposition::Neutral, (10, 11));
    assert!(matches!(npc_policy(&gs, n), Action::Move(_)));
    resolve_attack(&mut gs, 1, CombatStyle::Melee, n).unwrap();
    assert_eq!(
        npc_policy(&gs, n),
        Action::Attack {
            style: CombatStyle::Melee,
            target: 1
        }
    );
    gs.move_entity(1, (10, 15));
    assert!(matches!(npc_policy(&gs, n), Action::Move(_)));
}

// ── reference runs ──────────────────────────────────────────────

fn scripted_run(ticks: u64) -> u64 {
    let mut gs = spawned(Config::default(), 7);
    for _ in 0..ticks {
        let a = act(PolicyKind::Scripted, &gs);
        tick(&mut gs, &a);
    }
    gs.state_digest()
}

#[test]
fn seed_7_scripted_digests() {
    assert_eq!(scripted_run(100), 0xa234_8c69_3241_58cc);
    assert_eq!(scripted_run(1000), 0x5b57_6e53_846d_b293);
}

#[test]
fn identical_inputs_give_identical_trajectories() {
    let mut a = spawned(small_config(), 4);
    let mut b = spawned(small_config(), 4);
    for _ in 0..200 {
        let acts = act(PolicyKind::Random, &a);
        tick(&mut a, &acts);
        tick(&mut b, &acts);
        assert_eq!(a.state_digest(), b.state_digest());
    }
}

#[test]
fn dead_agents_cost_almost_nothing() {
    let c = Config {
        num_npcs: 0,
        mortality: false,
        ..Config::default()
    };
    let mut live = spawned(c.clone(), 5);
    let mut empty = spawned(c, 5);
    for a in empty.agent_ids().to_vec() {
        empty.remove_entity(a).unwrap();
    }
    let time = |gs: &mut GameState| {
        let mut spent = std::time::Duration::ZERO;
        for _ in 0..100 {
            let acts = act(PolicyKind::Random, gs);
            let t = Instant::now();
            tick(gs, &acts);
            spent += t.elapsed();
        }
        spent
    };
    let full = time(&mut live);
    let none = time(&mut empty);
    assert!(
        none.as_secs_f64() < 0.1 * full.as_secs_f64(),
        "{none:?} vs {full:?}"
    );
}

#[test]
fn no_mortality_keeps_everyone_alive() {
    let c = Config {
        mortality: false,
        ..small_config()
    };
    let mut gs = spawned(c, 8);
    for a in gs.agent_ids().to_vec() {
        gs.set_ent(a, ecol::FOOD, 0);
        gs.set_ent(a, ecol::WATER, 0);
    }
    for _ in 0..200 {
        let acts = act(PolicyKind::Random, &gs);
        let out = tick(&mut gs, &acts);
        assert!(out.deaths.is_empty());
        for id in gs.agent_ids().iter().chain(gs.npc_ids()) {
            assert!(gs.ent(*id, ecol::HEALTH) >= 1);
        }
    }
    assert_eq!(gs.agent_ids().len(), 8);
}

fn check_invariants(gs: &GameState) -> Result<(), TestCaseError> {
    for &id in gs.agent_ids().iter().chain(gs.npc_ids()) {
        let h = gs.ent(id, ecol::HEALTH);
        prop_assert!((0..=100).contains(&h));
        prop_assert!((0..=100).contains(&gs.ent(id, ecol::FOOD)));
        prop_assert!((0..=100).contains(&gs.ent(id, ecol::WATER)));
        prop_assert!(gs.ent(id, ecol::GOLD) >= 0);
        prop_assert_eq!(h == 0, !gs.is_alive(id));
        for s in Skill::ALL {
            prop_assert!((1..=10).contains(&gs.level(id, *s)));
        }
        for slot in Slot::ALL {
            let it = gs.slot(id, slot);
            if it != 0 {
                prop_assert_eq!(gs.item(it, icol::OWNER_ID), Some(id));
                prop_assert_eq!(gs.item(it, icol::EQUIPPED), Some(1));
            }
        }
    }
    for row in gs.item_table().live_rows() {
        let t = gs.item_table();
        prop_assert!(!(t.int(row, icol::EQUIPPED) == 1 && t.int(row, icol::LISTED) == 1));
        prop_assert!((1..=10).contains(&t.int(row, icol::LEVEL)));
        prop_assert!(t.int(row, icol::QUANTITY) >= 1);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn invariants_hold_every_tick(seed in any::<u64>(), scripted in any::<bool>()) {
        let mut gs = spawned(small_config(), seed);
        let policy = if scripted { PolicyKind::Scripted } else { PolicyKind::Random };
        let mut xp: BTreeMap<(EntityId, usize), i64> = BTreeMap::new();
        for _ in 0..120 {
            let npc_health: BTreeMap<EntityId, i64> =
                gs.npc_ids().iter().map(|&n| (n, gs.ent(n, ecol::HEALTH))).collect();
            let first = gs.events().len();
            let acts = act(policy, &gs);
            tick(&mut gs, &acts);
            check_invariants(&gs)?;

            // every npc health drop is matched by SCORE_HIT damage in the same tick
            let mut hits: BTreeMap<EntityId, i64> = BTreeMap::new();
            for e in gs.events().since(first) {
                if e.event_type == EventType::ScoreHit.code() {
                    *hits.entry(e.target).or_default() += e.damage;
                    prop_assert!(e.damage >= 0);
                }
            }
            for (n, before) in npc_health {
                let after = gs.get(n, ecol::HEALTH).unwrap_or(0);
                prop_assert_eq!(before - after, hits.get(&n).copied().unwrap_or(0), "npc {}", n);
            }

            for &id in gs.agent_ids() {
                for s in Skill::ALL {
                    let v = gs.ent(id, ecol::XP_BASE + s.index());
                    let prev = xp.insert((id, s.index()), v).unwrap_or(0);
                    prop_assert!(v >= prev);
                }
            }
        }
    }
}
