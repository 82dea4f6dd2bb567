use super::profession::{grant_xp, progression_check};
use super::{ActionResult, Invalid};
use crate::datastore::schema::{entity as ecol, item as icol};
use crate::datastore::{EventRecord, GameState};
use crate::types::{linf, CombatStyle, EntityId, EventType, ItemType, Slot};

/// `max(1, floor(mult * (base + per_level * level + weapon_bonus) - defense))`
pub fn damage_formula(
    mult: f64,
    base: i64,
    per_level: i64,
    level: i64,
    weapon_bonus: i64,
    defense: i64,
) -> i64 {
    let raw = (mult * (base + per_level * level + weapon_bonus) as f64 - defense as f64).floor();
    (raw as i64).max(1)
}

fn equipped_of(gs: &GameState, id: EntityId, slot: Slot) -> Option<(i64, ItemType, i64)> {
    let item = gs.slot(id, slot);
    if item == 0 {
        return None;
    }
    let ty = gs.item_type(item)?;
    Some((item, ty, gs.item(item, icol::LEVEL)?))
}

pub(crate) fn health_floor(gs: &GameState) -> i64 {
    if gs.config().mortality {
        0
    } else {
        1
    }
}

/// Resolve one attack and return the damage rolled. Emits `SCORE_HIT` with
/// the health actually removed and `PLAYER_KILL` when the target drops to 0.
pub fn resolve_attack(
    gs: &mut GameState,
    attacker: EntityId,
    style: CombatStyle,
    target: EntityId,
) -> ActionResult<i64> {
    let cfg = gs.config().clone();
    if !gs.is_alive(attacker) || gs.ent(attacker, ecol::HEALTH) <= 0 {
        return Err(Invalid::DeadActor);
    }
    if target == attacker {
        return Err(Invalid::SelfTarget);
    }
    if !gs.is_alive(target) || gs.ent(target, ecol::HEALTH) <= 0 {
        return Err(Invalid::DeadTarget);
    }
    let range = match style {
        CombatStyle::Melee => cfg.melee_range,
        CombatStyle::Range | CombatStyle::Mage => cfg.ranged_range,
    };
    let (a_pos, t_pos) = (gs.position(attacker).unwrap(), gs.position(target).unwrap());
    if linf(a_pos, t_pos) > range {
        return Err(Invalid::OutOfRange);
    }
    let ammo = equipped_of(gs, attacker, Slot::Ammo).filter(|(_, ty, _)| *ty == style.ammo());
    if style != CombatStyle::Melee && ammo.is_none() {
        return Err(Invalid::MissingAmmo);
    }

    let mut weapon_bonus = 0;
    if let Some((_, ty, lvl)) = equipped_of(gs, attacker, Slot::Weapon) {
        if ty == style.weapon() {
            weapon_bonus += lvl * cfg.weapon_level_multiplier;
        }
    }
    if let Some((item, _, lvl)) = ammo {
        weapon_bonus += lvl;
        let left = gs.item(item, icol::QUANTITY).unwrap() - 1;
        if left <= 0 {
            gs.destroy_item(item).expect("equipped ammo exists");
        } else {
            gs.set_item(item, icol::QUANTITY, left);
        }
    }
    let defense: i64 = [Slot::Hat, Slot::Top, Slot::Bottom]
        .iter()
        .filter_map(|&s| equipped_of(gs, target, s))
        .map(|(_, _, lvl)| lvl)
        .sum();
    let mult = match CombatStyle::from_code(gs.ent(target, ecol::LAST_STYLE)) {
        Some(last) if style.beats(last) => cfg.triangle_multiplier,
        _ => 1.0,
    };
    let level = gs.level(attacker, style.skill());
    let damage = damage_formula(
        mult,
        cfg.damage_base,
        cfg.damage_per_level,
        level,
        weapon_bonus,
        defense,
    );

    let before = gs.ent(target, ecol::HEALTH);
    let after = (before - damage).max(health_floor(gs));
    gs.set_ent(target, ecol::HEALTH, after);
    gs.set_ent(target, ecol::LAST_ATTACKER, attacker);
    gs.set_ent(attacker, ecol::LAST_STYLE, style.code());
    let tick = gs.current_tick();
    gs.log_event(
        EventRecord::new(tick, EventType::ScoreHit, attacker)
            .style(style)
            .target(target)
            .damage(before - after),
    )
    .expect("current tick");

    if after == 0 {
        let gold = gs.ent(target, ecol::GOLD);
        gs.set_ent(target, ecol::GOLD, 0);
        gs.set_ent(attacker, ecol::GOLD, gs.ent(attacker, ecol::GOLD) + gold);
        gs.set_ent(target, ecol::KILLED_BY, attacker);
        gs.log_event(
            EventRecord::new(tick, EventType::PlayerKill, attacker)
                .target(target)
                .gold(gold),
        )
        .expect("current tick");
    }

    grant_xp(gs, attacker, style.skill(), 1);
    progression_check(gs, attacker, style.skill());
    Ok(damage)
}
