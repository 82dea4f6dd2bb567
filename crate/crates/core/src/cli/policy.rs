//! Built-in agent policies used by `run` and `bench`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::datastore::schema::{entity as ecol, item as icol};
use crate::datastore::GameState;
use crate::rng::{key, unit, STREAM_AGENT_POLICY};
use crate::sim::Action;
use crate::types::{linf, CombatStyle, Direction, EntityId, ItemType, Slot};
use crate::worldgen::Material;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Random,
    Scripted,
}

/// Actions for every live agent at the current tick.
pub fn act(kind: PolicyKind, gs: &GameState) -> BTreeMap<EntityId, Action> {
    gs.agent_ids()
        .iter()
        .filter(|&&a| gs.is_alive(a))
        .map(|&a| {
            let action = match kind {
                PolicyKind::Random => random_action(gs, a),
                PolicyKind::Scripted => scripted_action(gs, a),
            };
            (a, action)
        })
        .collect()
}

fn draw(gs: &GameState, agent: EntityId, salt: u64) -> f64 {
    unit(key(&[
        gs.seed(),
        STREAM_AGENT_POLICY,
        agent as u64,
        gs.current_tick(),
        salt,
    ]))
}

fn pick<T: Copy>(xs: &[T], u: f64) -> T {
    xs[((u * xs.len() as f64) as usize).min(xs.len() - 1)]
}

fn has_resource(gs: &GameState, (r, c): (i64, i64)) -> bool {
    let t = gs.tiles();
    let here = t.material(r, c);
    if here.is_resource() && here != Material::Forest && t.is_available(r, c) {
        return true;
    }
    Direction::ALL.iter().any(|d| {
        let (dr, dc) = d.delta();
        t.material(r + dr, c + dc) == Material::Fish && t.is_available(r + dr, c + dc)
    })
}

/// Every action that passes the cheap precondition checks for `agent`.
/// Noop is always included; sell prices are drawn separately.
pub fn legal_actions(gs: &GameState, agent: EntityId) -> Vec<Action> {
    let cfg = gs.config();
    let pos = gs.position(agent).expect("live agent");
    let mut out = vec![Action::Noop];
    for d in Direction::ALL {
        let (dr, dc) = d.delta();
        if gs.tiles().passable(pos.0 + dr, pos.1 + dc) {
            out.push(Action::Move(Some(d)));
        }
    }
    let ammo = gs.slot(agent, Slot::Ammo);
    let ammo_ty = (ammo != 0).then(|| gs.item_type(ammo)).flatten();
    let reach = cfg.melee_range.max(cfg.ranged_range);
    for r in pos.0 - reach..=pos.0 + reach {
        for c in pos.1 - reach..=pos.1 + reach {
            let t = gs.occupant(r, c);
            if t == 0 || t == agent || gs.ent(t, ecol::HEALTH) <= 0 {
                continue;
            }
            let d = linf(pos, (r, c));
            for style in CombatStyle::ALL {
                let ok = match style {
                    CombatStyle::Melee => d <= cfg.melee_range,
                    _ => d <= cfg.ranged_range && ammo_ty == Some(style.ammo()),
                };
                if ok {
                    out.push(Action::Attack {
                        style: *style,
                        target: t,
                    });
                }
            }
        }
    }
    for &it in gs.inventory(agent) {
        if gs.item(it, icol::LISTED) == Some(1) {
            continue;
        }
        if gs.item(it, icol::EQUIPPED) == Some(0) {
            out.push(Action::Use(it));
            out.push(Action::Sell { item: it, price: 0 });
        }
    }
    if has_resource(gs, pos) {
        out.push(Action::Gather);
    }
    let gold = gs.ent(agent, ecol::GOLD);
    for l in gs.listings() {
        if l.seller != agent && l.price <= gold {
            out.push(Action::Buy(l.id));
        }
    }
    out
}

/// Uniform draw over [`legal_actions`], keyed by (seed, agent, tick).
pub fn random_action(gs: &GameState, agent: EntityId) -> Action {
    match pick(&legal_actions(gs, agent), draw(gs, agent, 0)) {
        Action::Sell { item, .. } => Action::Sell {
            item,
            price: 1 + (draw(gs, agent, 1) * 20.0) as i64,
        },
        a => a,
    }
}

fn step_to(gs: &GameState, from: (i64, i64), to: (i64, i64)) -> Action {
    let (dr, dc) = (to.0 - from.0, to.1 - from.1);
    let order = if dr.abs() >= dc.abs() {
        [(dr.signum(), 0), (0, dc.signum())]
    } else {
        [(0, dc.signum()), (dr.signum(), 0)]
    };
    for (sr, sc) in order {
        if (sr, sc) == (0, 0) {
            continue;
        }
        let p = (from.0 + sr, from.1 + sc);
        if gs.tiles().passable(p.0, p.1) && gs.occupant(p.0, p.1) == 0 {
            let dir = Direction::ALL
                .iter()
                .copied()
                .find(|d| d.delta() == (sr, sc))
                .unwrap();
            return Action::Move(Some(dir));
        }
    }
    wander(gs, from, 7)
}

fn wander(gs: &GameState, pos: (i64, i64), salt: u64) -> Action {
    let open: Vec<Direction> = Direction::ALL
        .iter()
        .copied()
        .filter(|d| {
            let (dr, dc) = d.delta();
            gs.tiles().passable(pos.0 + dr, pos.1 + dc)
        })
        .collect();
    if open.is_empty() {
        return Action::Noop;
    }
    let occ = gs.occupant(pos.0, pos.1);
    Action::Move(Some(pick(&open, draw(gs, occ, salt))))
}

/// Nearest tile within `radius` matching `want`, ties broken by (row, col).
fn nearest_tile(
    pos: (i64, i64),
    radius: i64,
    want: impl Fn(i64, i64) -> bool,
) -> Option<(i64, i64)> {
    let mut best: Option<(i64, (i64, i64))> = None;
    for r in pos.0 - radius..=pos.0 + radius {
        for c in pos.1 - radius..=pos.1 + radius {
            if (r, c) != pos && want(r, c) {
                let d = linf(pos, (r, c));
                if best.is_none_or(|(bd, bp)| (d, (r, c)) < (bd, bp)) {
                    best = Some((d, (r, c)));
                }
            }
        }
    }
    best.map(|(_, p)| p)
}

fn survive(gs: &GameState, agent: EntityId, pos: (i64, i64)) -> Option<Action> {
    let (food, water) = (gs.ent(agent, ecol::FOOD), gs.ent(agent, ecol::WATER));
    let t = gs.tiles();
    if food < 60 {
        if let Some(&it) = gs.inventory(agent).iter().find(|&&it| {
            gs.item_type(it) == Some(ItemType::Ration) && gs.item(it, icol::LISTED) == Some(0)
        }) {
            return Some(Action::Use(it));
        }
        if let Some(p) = nearest_tile(pos, 12, |r, c| {
            t.material(r, c) == Material::Forest && t.is_available(r, c) && gs.occupant(r, c) == 0
        }) {
            return Some(step_to(gs, pos, p));
        }
    }
    if water < 60 {
        let adjacent = Direction::ALL.iter().any(|d| {
            let (dr, dc) = d.delta();
            t.material(pos.0 + dr, pos.1 + dc) == Material::Water
        });
        if !adjacent {
            if let Some(p) = nearest_tile(pos, 12, |r, c| t.material(r, c) == Material::Water) {
                return Some(step_to(gs, pos, p));
            }
        }
    }
    if gs.ent(agent, ecol::HEALTH) < 50 {
        if let Some(&it) = gs.inventory(agent).iter().find(|&&it| {
            gs.item_type(it) == Some(ItemType::Potion) && gs.item(it, icol::LISTED) == Some(0)
        }) {
            return Some(Action::Use(it));
        }
    }
    None
}

fn fight(gs: &GameState, agent: EntityId, pos: (i64, i64)) -> Option<Action> {
    let radius = gs.config().vision_radius;
    let target = nearest_tile(pos, radius, |r, c| {
        let o = gs.occupant(r, c);
        o != 0 && o != agent && (o < 0 || o % 4 == 0)
    })?;
    let id = gs.occupant(target.0, target.1);
    if linf(pos, target) <= gs.config().melee_range {
        Some(Action::Attack {
            style: CombatStyle::Melee,
            target: id,
        })
    } else {
        Some(step_to(gs, pos, target))
    }
}

fn gather_step(gs: &GameState, pos: (i64, i64)) -> Option<Action> {
    if has_resource(gs, pos) {
        return Some(Action::Gather);
    }
    let t = gs.tiles();
    let p = nearest_tile(pos, gs.config().vision_radius, |r, c| {
        let m = t.material(r, c);
        m.is_resource() && m != Material::Forest && t.is_available(r, c)
    })?;
    Some(step_to(gs, pos, p))
}

fn equip_something(gs: &GameState, agent: EntityId) -> Option<Action> {
    gs.inventory(agent).iter().copied().find_map(|it| {
        let ty = gs.item_type(it)?;
        let fresh = gs.item(it, icol::EQUIPPED) == Some(0) && gs.item(it, icol::LISTED) == Some(0);
        let gate = match ty.governing_skill() {
            Some(s) => gs.level(agent, s),
            None => CombatStyle::ALL
                .iter()
                .map(|s| gs.level(agent, s.skill()))
                .max()
                .unwrap_or(1),
        };
        let level = gs.item(it, icol::LEVEL)?;
        let current = gs.slot(agent, ty.slot()?);
        let upgrade = current == 0 || gs.item(current, icol::LEVEL).unwrap_or(0) < level;
        (fresh && upgrade && level <= gate).then_some(Action::Use(it))
    })
}

fn shop(gs: &GameState, agent: EntityId) -> Option<Action> {
    let gold = gs.ent(agent, ecol::GOLD);
    if gs.inventory_full(agent) {
        return None;
    }
    gs.listings()
        .into_iter()
        .filter(|l| l.seller != agent && l.price <= gold)
        .min_by_key(|l| (l.price, l.id))
        .map(|l| Action::Buy(l.id))
}

fn trade(gs: &GameState, agent: EntityId) -> Option<Action> {
    if gs.current_tick().is_multiple_of(3) {
        if let Some(a) = shop(gs, agent) {
            return Some(a);
        }
    }
    gs.inventory(agent).iter().copied().find_map(|it| {
        let free = gs.item(it, icol::EQUIPPED) == Some(0) && gs.item(it, icol::LISTED) == Some(0);
        free.then(|| Action::Sell {
            item: it,
            price: 1 + gs.item(it, icol::LEVEL).unwrap_or(1),
        })
    })
}

/// Role by id: 0 fighter, 1 gatherer, 2 trader, 3 equipper (id mod 4).
///
/// Fighters hunt NPCs and agents whose id is a multiple of four. Every role
/// looks after food, water and health first, and everyone but traders goes
/// shopping every fifth tick.
pub fn scripted_action(gs: &GameState, agent: EntityId) -> Action {
    let pos = gs.position(agent).expect("live agent");
    if let Some(a) = survive(gs, agent, pos) {
        return a;
    }
    if agent % 4 != 2 && gs.current_tick().is_multiple_of(5) {
        if let Some(a) = shop(gs, agent) {
            return a;
        }
    }
    let chosen = match agent % 4 {
        0 => fight(gs, agent, pos),
        1 => gather_step(gs, pos),
        2 => trade(gs, agent).or_else(|| gather_step(gs, pos)),
        _ => equip_something(gs, agent)
            .or_else(|| fight(gs, agent, pos))
            .or_else(|| gather_step(gs, pos)),
    };
    chosen.unwrap_or_else(|| wander(gs, pos, 3))
}
