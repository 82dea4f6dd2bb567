use rand::Rng;

use super::Action;
use crate::datastore::schema::entity as ecol;
use crate::datastore::GameState;
use crate::rng::{stream, STREAM_NPC_POLICY};
use crate::types::{linf, CombatStyle, Direction, Disposition, EntityId};

fn random_walk(gs: &GameState, npc: EntityId) -> Action {
    let mut rng = stream(
        gs.seed(),
        STREAM_NPC_POLICY ^ (npc as u64).rotate_left(8),
        gs.current_tick(),
    );
    match rng.random_range(0..5) {
        0 => Action::Move(None),
        k => Action::Move(Some(Direction::ALL[k - 1])),
    }
}

/// Scripted NPC behaviour.
///
/// Passive NPCs wander. Neutral NPCs wander until hit, then fight their last
/// attacker while it stays within retaliation range. Hostile NPCs attack the
/// nearest agent within aggro range. An `Attack` from an NPC that is not yet
/// adjacent makes it step toward the target during the move phase.
pub fn npc_policy(gs: &GameState, npc: EntityId) -> Action {
    let cfg = gs.config();
    let pos = match gs.position(npc) {
        Some(p) if gs.is_alive(npc) => p,
        _ => return Action::Noop,
    };
    match Disposition::from_code(gs.ent(npc, ecol::DISPOSITION)) {
        Disposition::Neutral => {
            let foe = gs.ent(npc, ecol::LAST_ATTACKER);
            if foe != 0 && gs.is_alive(foe) && gs.ent(foe, ecol::HEALTH) > 0 {
                if let Some(fp) = gs.position(foe) {
                    if linf(pos, fp) <= cfg.neutral_retaliate_range {
                        return Action::Attack {
                            style: CombatStyle::Melee,
                            target: foe,
                        };
                    }
                }
            }
            random_walk(gs, npc)
        }
        Disposition::Hostile => {
            let nearest = gs
                .agent_ids()
                .iter()
                .filter(|&&a| gs.is_alive(a) && gs.ent(a, ecol::HEALTH) > 0)
                .map(|&a| (linf(pos, gs.position(a).unwrap()), a))
                .filter(|&(d, _)| d <= cfg.hostile_aggro_range)
                .min();
            match nearest {
                Some((_, a)) => Action::Attack {
                    style: CombatStyle::Melee,
                    target: a,
                },
                None => random_walk(gs, npc),
            }
        }
        Disposition::Passive | Disposition::None => random_walk(gs, npc),
    }
}
