use rand::Rng;

use crate::datastore::schema::entity as ecol;
use crate::datastore::GameState;
use crate::error::{Error, Result};
use crate::rng::{stream, STREAM_NPC_SPAWN};
use crate::types::{linf, Disposition, EntityId, EntityKind, ItemType};

/// Place agents `1..=n` evenly along the innermost passable ring.
pub fn spawn_agents(gs: &mut GameState, n: usize) -> Result<Vec<EntityId>> {
    if n > gs.config().max_agents {
        return Err(Error::Config(format!(
            "{n} agents exceed max_agents {}",
            gs.config().max_agents
        )));
    }
    let ring = gs.tiles().spawn_ring();
    if n > ring.len() {
        return Err(Error::Config(format!(
            "{n} agents exceed spawn ring capacity {}",
            ring.len()
        )));
    }
    let first = gs.agent_ids().last().copied().unwrap_or(0) + 1;
    let mut ids = Vec::with_capacity(n);
    for i in 0..n {
        let pos = ring[i * ring.len() / n];
        let id = first + i as i64;
        gs.insert_entity(id, EntityKind::Agent, Disposition::None, pos)?;
        gs.set_spawn_pos(id, pos)?;
        ids.push(id);
    }
    Ok(ids)
}

const LOOT: [ItemType; 11] = [
    ItemType::Hat,
    ItemType::Top,
    ItemType::Bottom,
    ItemType::Spear,
    ItemType::Bow,
    ItemType::Wand,
    ItemType::Rod,
    ItemType::Pickaxe,
    ItemType::Axe,
    ItemType::Chisel,
    ItemType::Sickle,
];

/// NPC level: 10 at the centre falling to 1 at the spawn ring.
pub(crate) fn npc_level(gs: &GameState, pos: (i64, i64)) -> i64 {
    let half = (gs.config().map_size / 2).max(1) as f64;
    let d = linf(pos, gs.tiles().center()) as f64;
    (1 + (9.0 * (1.0 - d / half)).floor() as i64).clamp(1, 10)
}

/// Scatter `n` NPCs over free passable interior tiles off the spawn ring.
pub fn spawn_npcs(gs: &mut GameState, n: usize) -> Result<Vec<EntityId>> {
    let cfg = gs.config().clone();
    let size = gs.tiles().size() as i64;
    let (lo, hi) = (cfg.border as i64 + 1, size - cfg.border as i64 - 1);
    let mut rng = stream(gs.seed(), STREAM_NPC_SPAWN, gs.npc_ids().len() as u64);
    let mut ids = Vec::with_capacity(n);
    for _ in 0..n {
        let mut pos = None;
        for _ in 0..10_000 {
            let p = (rng.random_range(lo..hi), rng.random_range(lo..hi));
            if gs.tiles().passable(p.0, p.1) && gs.occupant(p.0, p.1) == 0 {
                pos = Some(p);
                break;
            }
        }
        let pos = pos.ok_or_else(|| Error::Config("no free tile left for npc".into()))?;
        let u: f64 = rng.random();
        let disposition = if u < cfg.npc_passive_ratio {
            Disposition::Passive
        } else if u < cfg.npc_passive_ratio + cfg.npc_neutral_ratio {
            Disposition::Neutral
        } else {
            Disposition::Hostile
        };
        let level = npc_level(gs, pos);
        let id = gs.next_npc_id();
        gs.insert_entity(id, EntityKind::Npc, disposition, pos)?;
        for s in 0..3 {
            gs.set_ent(id, ecol::LEVEL_BASE + s, level);
        }
        gs.set_ent(id, ecol::GOLD, level);
        let loot = LOOT[rng.random_range(0..LOOT.len())];
        gs.create_item(id, loot, level, 1);
        ids.push(id);
    }
    Ok(ids)
}
