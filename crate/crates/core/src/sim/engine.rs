use std::collections::BTreeMap;

use super::combat::resolve_attack;
use super::market::{market_buy, market_sell};
use super::npc::npc_policy;
use super::profession::{gather, use_item};
use super::survival::survival_step;
use super::{Action, Invalid};
use crate::datastore::schema::{entity as ecol, item as icol};
use crate::datastore::GameState;
use crate::types::{linf, CombatStyle, Direction, EntityId};

/// What happened to agent actions during one tick.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TickOutcome {
    /// Agent actions that were turned into no-ops, with the reason.
    pub invalid: BTreeMap<EntityId, Invalid>,
    /// Actions submitted for agents that were dead or absent.
    pub ignored: Vec<EntityId>,
    /// Entities whose death was resolved this tick.
    pub deaths: Vec<EntityId>,
}

fn acting(gs: &GameState, id: EntityId) -> bool {
    gs.is_alive(id) && gs.ent(id, crate::datastore::schema::entity::HEALTH) > 0
}

fn step_toward(gs: &GameState, from: (i64, i64), to: (i64, i64)) -> Option<(i64, i64)> {
    let (dr, dc) = ((to.0 - from.0).signum(), (to.1 - from.1).signum());
    let (ar, ac) = ((to.0 - from.0).abs(), (to.1 - from.1).abs());
    let mut options = Vec::with_capacity(2);
    if ar >= ac {
        options.extend([(dr, 0), (0, dc)]);
    } else {
        options.extend([(0, dc), (dr, 0)]);
    }
    options
        .into_iter()
        .filter(|&d| d != (0, 0))
        .map(|d| (from.0 + d.0, from.1 + d.1))
        .find(|&p| gs.tiles().passable(p.0, p.1) && gs.occupant(p.0, p.1) == 0)
}

fn try_move(gs: &mut GameState, id: EntityId, dir: Direction) -> Result<(), Invalid> {
    let (r, c) = gs.position(id).unwrap();
    let (dr, dc) = dir.delta();
    let to = (r + dr, c + dc);
    if !gs.tiles().passable(to.0, to.1) {
        return Err(Invalid::Blocked);
    }
    if gs.occupant(to.0, to.1) == 0 {
        gs.move_entity(id, to);
    }
    Ok(())
}

/// Advance the world by one tick.
pub fn tick(gs: &mut GameState, actions: &BTreeMap<EntityId, Action>) -> TickOutcome {
    let mut out = TickOutcome::default();
    let agents: Vec<EntityId> = gs.agent_ids().to_vec();

    let mut agent_actions: Vec<(EntityId, Action)> = Vec::with_capacity(actions.len());
    for (&id, &a) in actions {
        if gs.entity_row(id).is_some() && id > 0 && acting(gs, id) {
            agent_actions.push((id, a));
        } else {
            out.ignored.push(id);
        }
    }

    // 1. npc policy
    let npc_actions: Vec<(EntityId, Action)> = gs
        .npc_ids()
        .iter()
        .filter(|&&n| acting(gs, n))
        .map(|&n| (n, npc_policy(gs, n)))
        .collect();

    // 2. moves: agents first, lower id wins contested tiles
    for &(id, a) in &agent_actions {
        if let Action::Move(Some(dir)) = a {
            if let Err(e) = try_move(gs, id, dir) {
                out.invalid.insert(id, e);
            }
        }
    }
    let melee = gs.config().melee_range;
    for &(id, a) in &npc_actions {
        match a {
            Action::Move(Some(dir)) => {
                let _ = try_move(gs, id, dir);
            }
            Action::Attack { target, .. } => {
                let (from, to) = (gs.position(id).unwrap(), gs.position(target).unwrap());
                if linf(from, to) > melee {
                    if let Some(p) = step_toward(gs, from, to) {
                        gs.move_entity(id, p);
                    }
                }
            }
            _ => {}
        }
    }

    // 3. attacks
    for &(id, a) in &agent_actions {
        if let Action::Attack { style, target } = a {
            let res = if gs.entity_row(target).is_some() {
                resolve_attack(gs, id, style, target).map(|_| ())
            } else {
                Err(Invalid::DeadTarget)
            };
            if let Err(e) = res {
                out.invalid.insert(id, e);
            }
        }
    }
    for &(id, a) in &npc_actions {
        if let Action::Attack { target, .. } = a {
            let _ = resolve_attack(gs, id, CombatStyle::Melee, target);
        }
    }

    // 4. gather / use
    for &(id, a) in &agent_actions {
        let res = match a {
            Action::Gather => gather(gs, id).map(|_| ()),
            Action::Use(item) => use_item(gs, id, item),
            _ => Ok(()),
        };
        if let Err(e) = res {
            out.invalid.insert(id, e);
        }
    }

    // 5. market: sells then buys
    for &(id, a) in &agent_actions {
        if let Action::Sell { item, price } = a {
            if let Err(e) = market_sell(gs, id, item, price) {
                out.invalid.insert(id, e);
            }
        }
    }
    for &(id, a) in &agent_actions {
        if let Action::Buy(listing) = a {
            if let Err(e) = market_buy(gs, id, listing) {
                out.invalid.insert(id, e);
            }
        }
    }

    // 6. survival
    for &id in &agents {
        survival_step(gs, id);
    }

    // 7. respawn
    gs.tiles_mut().respawn_tick();

    // 8. deaths
    resolve_deaths(gs, &mut out);

    // 9.
    gs.advance_tick();
    out
}

fn resolve_deaths(gs: &mut GameState, out: &mut TickOutcome) {
    let now = gs.current_tick() as i64;
    let order: Vec<EntityId> = gs.agent_ids().iter().chain(gs.npc_ids()).copied().collect();

    let stale: Vec<EntityId> = order
        .iter()
        .copied()
        .filter(|&id| gs.ent(id, ecol::ALIVE) == 0 && gs.ent(id, ecol::DIED_TICK) < now)
        .collect();
    for id in stale {
        gs.remove_entity(id).expect("entity has a row");
    }

    for id in order {
        if gs.entity_row(id).is_none()
            || gs.ent(id, ecol::ALIVE) == 0
            || gs.ent(id, ecol::HEALTH) > 0
        {
            continue;
        }
        gs.set_ent(id, ecol::ALIVE, 0);
        gs.set_ent(id, ecol::DIED_TICK, now);
        gs.vacate(id);
        let pos = gs.position(id).unwrap();
        let killer = gs.ent(id, ecol::KILLED_BY);
        let loot_to = (killer > 0 && id < 0 && gs.is_alive(killer)).then_some(killer);
        for item in gs.inventory(id).to_vec() {
            let listed = gs.item(item, icol::LISTED) == Some(1);
            let equipped = gs.item(item, icol::EQUIPPED) == Some(1);
            if listed || (killer != 0 && equipped) {
                gs.destroy_item(item).expect("owned item");
            } else if let Some(k) = loot_to.filter(|&k| !gs.inventory_full(k)) {
                gs.transfer_item(item, k);
            } else {
                gs.drop_item(item, pos);
            }
        }
        out.deaths.push(id);
    }
}
