//! The built-in predicate library.

use std::collections::{BTreeMap, BTreeSet};

use super::predicate::{enum_param, int_param, make_predicate, ratio, Params, PredicateDef};
use crate::datastore::{GameState, GroupView};
use crate::error::Result;
use crate::types::{linf, CombatStyle, EventType, ItemType, Skill};
use crate::worldgen::Material;

pub const BUILTIN_NAMES: [&str; 12] = [
    "TickGE",
    "CanSeeTile",
    "StayAlive",
    "AllDead",
    "DistanceTraveled",
    "FullyArmed",
    "CountEvent",
    "ScoreHit",
    "HoardGold",
    "OwnItem",
    "EquipItem",
    "AttainSkill",
];

fn material(p: &Params) -> Result<Material> {
    enum_param(p, "tile_type", |c| {
        u8::try_from(c).ok().and_then(Material::from_u8)
    })
}

fn style(p: &Params) -> Result<CombatStyle> {
    enum_param(p, "combat_style", CombatStyle::from_code)
}

fn event_type(p: &Params) -> Result<EventType> {
    enum_param(p, "event_type", EventType::from_code)
}

fn item_type(p: &Params) -> Result<ItemType> {
    enum_param(p, "type_id", ItemType::from_code)
}

fn skill(p: &Params) -> Result<Skill> {
    enum_param(p, "skill", Skill::from_code)
}

/// Members with positive health, as (id, row, col).
fn living(subject: &GroupView) -> Vec<(i64, i64, i64)> {
    let (h, r, c) = (subject.health(), subject.row(), subject.col());
    subject
        .entity_ids()
        .iter()
        .enumerate()
        .filter(|&(i, _)| h[i] > 0)
        .map(|(i, &id)| (id, r[i], c[i]))
        .collect()
}

pub fn tick_ge(gs: &GameState, _s: &GroupView, p: &Params) -> Result<f64> {
    Ok(gs.current_tick() as f64 / int_param(p, "num_tick", 1)? as f64)
}

pub fn can_see_tile(gs: &GameState, s: &GroupView, p: &Params) -> Result<f64> {
    let m = material(p)?;
    let radius = gs.config().vision_radius;
    let tiles = gs.tiles();
    let seen = living(s).iter().any(|&(_, r, c)| {
        (r - radius..=r + radius)
            .any(|rr| (c - radius..=c + radius).any(|cc| tiles.material(rr, cc) == m))
    });
    Ok(if seen { 1.0 } else { 0.0 })
}

pub fn stay_alive(_gs: &GameState, s: &GroupView, _p: &Params) -> Result<f64> {
    Ok(if s.alive_count() == s.requested_len() {
        1.0
    } else {
        0.0
    })
}

pub fn all_dead(_gs: &GameState, s: &GroupView, _p: &Params) -> Result<f64> {
    let n = s.requested_len();
    Ok(ratio((n - s.alive_count()) as f64, n as f64))
}

pub fn distance_traveled(gs: &GameState, s: &GroupView, p: &Params) -> Result<f64> {
    let dist = int_param(p, "dist", 1)?;
    let alive = living(s);
    if alive.is_empty() {
        return Ok(0.0);
    }
    let total: i64 = alive
        .iter()
        .map(|&(id, r, c)| gs.spawn_pos(id).map_or(0, |sp| linf((r, c), sp)))
        .sum();
    Ok(total as f64 / dist as f64)
}

pub fn fully_armed(_gs: &GameState, s: &GroupView, p: &Params) -> Result<f64> {
    let style = style(p)?;
    let level = int_param(p, "level", 0)?;
    let num_agent = int_param(p, "num_agent", 0)?;
    if num_agent == 0 {
        return Ok(1.0);
    }
    let wanted = [
        ItemType::Hat,
        ItemType::Top,
        ItemType::Bottom,
        style.weapon(),
        style.ammo(),
    ];
    let items = s.items();
    let (ty, lvl, owner, eq) = (
        items.type_id(),
        items.level(),
        items.owner_id(),
        items.equipped(),
    );
    let mut kinds: BTreeMap<i64, BTreeSet<i64>> = BTreeMap::new();
    for i in 0..items.len() {
        let matches = wanted.iter().any(|w| w.code() == ty[i]);
        if matches && lvl[i] >= level && eq[i] == 1 {
            kinds.entry(owner[i]).or_default().insert(ty[i]);
        }
    }
    let armed = kinds.values().filter(|v| v.len() >= wanted.len()).count();
    Ok(armed as f64 / num_agent as f64)
}

pub fn count_event(_gs: &GameState, s: &GroupView, p: &Params) -> Result<f64> {
    let kind = event_type(p)?;
    let n = int_param(p, "N", 0)?;
    Ok(ratio(s.events().count(kind) as f64, n as f64))
}

pub fn score_hit(_gs: &GameState, s: &GroupView, p: &Params) -> Result<f64> {
    let style = style(p)?;
    let n = int_param(p, "N", 0)?;
    let hits = s
        .events()
        .query(EventType::ScoreHit, &[("combat_style", style.code())])?;
    Ok(ratio(hits.len() as f64, n as f64))
}

pub fn hoard_gold(_gs: &GameState, s: &GroupView, p: &Params) -> Result<f64> {
    let amount = int_param(p, "amount", 0)?;
    Ok(ratio(s.gold().iter().sum::<i64>() as f64, amount as f64))
}

pub fn own_item(_gs: &GameState, s: &GroupView, p: &Params) -> Result<f64> {
    let ty = item_type(p)?.code();
    let level = int_param(p, "level", 0)?;
    let quantity = int_param(p, "quantity", 0)?;
    let items = s.items();
    let (t, l, q) = (items.type_id(), items.level(), items.quantity());
    let owned: i64 = (0..items.len())
        .filter(|&i| t[i] == ty && l[i] >= level)
        .map(|i| q[i])
        .sum();
    Ok(ratio(owned as f64, quantity as f64))
}

pub fn equip_item(_gs: &GameState, s: &GroupView, p: &Params) -> Result<f64> {
    let ty = item_type(p)?.code();
    let level = int_param(p, "level", 0)?;
    let num_agent = int_param(p, "num_agent", 0)?;
    let items = s.items();
    let (t, l, o, e) = (
        items.type_id(),
        items.level(),
        items.owner_id(),
        items.equipped(),
    );
    let owners: BTreeSet<i64> = (0..items.len())
        .filter(|&i| t[i] == ty && l[i] >= level && e[i] == 1)
        .map(|i| o[i])
        .collect();
    Ok(ratio(owners.len() as f64, num_agent as f64))
}

pub fn attain_skill(_gs: &GameState, s: &GroupView, p: &Params) -> Result<f64> {
    let skill = skill(p)?;
    let level = int_param(p, "level", 1)?;
    let num_agent = int_param(p, "num_agent", 0)?;
    let reached = s.level(skill).iter().filter(|&&l| l >= level).count();
    Ok(ratio(reached as f64, num_agent as f64))
}

/// Kill-count shaping: big steps at the first and third kill, 1.0 at ten.
pub fn kill_predicate(_gs: &GameState, s: &GroupView, _p: &Params) -> Result<f64> {
    let kills = s.events().count(EventType::PlayerKill) as f64;
    let mut progress = kills * 0.06;
    if kills >= 1.0 {
        progress += 0.1;
    }
    if kills >= 3.0 {
        progress += 0.3;
    }
    Ok(progress.min(1.0))
}

#[derive(Clone, Copy)]
enum Param {
    Int(&'static str, i64),
    Tile,
    Style,
    Event,
    Item,
    Skill,
}

fn checked<F>(name: &str, eval: F, spec: &'static [Param]) -> PredicateDef
where
    F: Fn(&GameState, &GroupView, &Params) -> Result<f64> + Send + Sync + 'static,
{
    make_predicate(name, eval).with_check(move |p| {
        for &param in spec {
            match param {
                Param::Int(key, min) => int_param(p, key, min).map(drop)?,
                Param::Tile => material(p).map(drop)?,
                Param::Style => style(p).map(drop)?,
                Param::Event => event_type(p).map(drop)?,
                Param::Item => item_type(p).map(drop)?,
                Param::Skill => skill(p).map(drop)?,
            }
        }
        Ok(())
    })
}

/// Constructor for a built-in predicate by name.
pub fn builtin(name: &str) -> Option<PredicateDef> {
    use Param::*;
    let def = match name {
        "TickGE" => checked(name, tick_ge, &[Int("num_tick", 1)]),
        "CanSeeTile" => checked(name, can_see_tile, &[Tile]),
        "StayAlive" => checked(name, stay_alive, &[]),
        "AllDead" => checked(name, all_dead, &[]),
        "DistanceTraveled" => checked(name, distance_traveled, &[Int("dist", 1)]),
        "FullyArmed" => checked(
            name,
            fully_armed,
            &[Style, Int("level", 0), Int("num_agent", 0)],
        ),
        "CountEvent" => checked(name, count_event, &[Event, Int("N", 0)]),
        "ScoreHit" => checked(name, score_hit, &[Style, Int("N", 0)]),
        "HoardGold" => checked(name, hoard_gold, &[Int("amount", 0)]),
        "OwnItem" => checked(name, own_item, &[Item, Int("level", 0), Int("quantity", 0)]),
        "EquipItem" => checked(
            name,
            equip_item,
            &[Item, Int("level", 0), Int("num_agent", 0)],
        ),
        "AttainSkill" => checked(
            name,
            attain_skill,
            &[Skill, Int("level", 1), Int("num_agent", 0)],
        ),
        "KillPredicate" => make_predicate(name, kill_predicate),
        _ => return None,
    };
    Some(def)
}
