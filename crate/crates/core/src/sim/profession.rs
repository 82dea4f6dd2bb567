use super::{ActionResult, Invalid};
use crate::datastore::schema::{entity as ecol, item as icol};
use crate::datastore::{EventRecord, GameState};
use crate::types::{EntityId, EventType, ItemType, Skill, Slot};
use crate::worldgen::Material;

fn profession_of(m: Material) -> Option<(Skill, ItemType)> {
    match m {
        Material::Herb => Some((Skill::Herbalism, ItemType::Potion)),
        Material::Fish => Some((Skill::Fishing, ItemType::Ration)),
        Material::Ore => Some((Skill::Prospecting, ItemType::Whetstone)),
        Material::Tree => Some((Skill::Carving, ItemType::Arrows)),
        Material::Crystal => Some((Skill::Alchemy, ItemType::Runes)),
        _ => None,
    }
}

pub(crate) fn grant_xp(gs: &mut GameState, id: EntityId, skill: Skill, amount: i64) {
    let col = ecol::XP_BASE + skill.index();
    gs.set_ent(id, col, gs.ent(id, col) + amount);
}

/// Advance `skill` while experience reaches `xp_per_level * level`, emitting
/// one `LEVEL_UP` per level gained. Returns the resulting level.
pub fn progression_check(gs: &mut GameState, id: EntityId, skill: Skill) -> i64 {
    let cfg = gs.config();
    let (per, max) = (cfg.xp_per_level, cfg.max_level);
    let lcol = ecol::LEVEL_BASE + skill.index();
    let xp = gs.ent(id, ecol::XP_BASE + skill.index());
    let mut level = gs.ent(id, lcol);
    while level < max && xp >= per * level {
        level += 1;
        gs.set_ent(id, lcol, level);
        let tick = gs.current_tick();
        gs.log_event(EventRecord::new(tick, EventType::LevelUp, id).skill(skill, level))
            .expect("current tick");
    }
    level
}

/// Harvest the resource under the agent, or fish from an adjacent tile.
/// Returns the id of the item created or topped up.
pub fn gather(gs: &mut GameState, id: EntityId) -> ActionResult<i64> {
    if !gs.is_alive(id) || gs.ent(id, ecol::HEALTH) <= 0 {
        return Err(Invalid::DeadActor);
    }
    let (r, c) = gs.position(id).unwrap();
    let tiles = gs.tiles();
    let here = tiles.material(r, c);
    let spot =
        if here != Material::Forest && profession_of(here).is_some() && tiles.is_available(r, c) {
            Some((r, c, here))
        } else {
            [(-1, 0), (1, 0), (0, 1), (0, -1)]
                .iter()
                .find_map(|(dr, dc)| {
                    let (rr, cc) = (r + dr, c + dc);
                    (tiles.material(rr, cc) == Material::Fish && tiles.is_available(rr, cc))
                        .then_some((rr, cc, Material::Fish))
                })
        };
    let (tr, tc, material) = spot.ok_or(Invalid::NoResource)?;
    let (skill, product) = profession_of(material).expect("resource material");
    let level = gs.level(id, skill).min(10);

    let stack = product.is_ammo().then(|| {
        gs.inventory(id).iter().copied().find(|&it| {
            gs.item(it, icol::TYPE_ID) == Some(product.code())
                && gs.item(it, icol::LEVEL) == Some(level)
                && gs.item(it, icol::LISTED) == Some(0)
                && gs.item(it, icol::QUANTITY).unwrap() < gs.config().ammo_stack
        })
    });
    let item = match stack.flatten() {
        Some(it) => {
            gs.set_item(it, icol::QUANTITY, gs.item(it, icol::QUANTITY).unwrap() + 1);
            it
        }
        None => {
            if gs.inventory_full(id) {
                return Err(Invalid::InventoryFull);
            }
            gs.create_item(id, product, level, 1)
        }
    };
    let delay = gs.config().respawn_delay;
    gs.tiles_mut()
        .deplete(tr, tc, delay)
        .expect("checked available");
    let tick = gs.current_tick();
    gs.log_event(EventRecord::new(tick, EventType::HarvestItem, id).item(product, level))
        .expect("current tick");

    let mut xp = 1;
    let tool = gs.slot(id, Slot::Weapon);
    if tool != 0 && gs.item_type(tool) == ItemType::tool_for(skill) {
        xp += gs.item(tool, icol::LEVEL).unwrap();
    }
    grant_xp(gs, id, skill, xp);
    progression_check(gs, id, skill);
    Ok(item)
}

/// Consume a ration or potion, or equip a piece of equipment.
pub fn use_item(gs: &mut GameState, id: EntityId, item: i64) -> ActionResult {
    if !gs.is_alive(id) || gs.ent(id, ecol::HEALTH) <= 0 {
        return Err(Invalid::DeadActor);
    }
    if gs.item(item, icol::OWNER_ID) != Some(id) {
        return Err(Invalid::NotOwner);
    }
    if gs.item(item, icol::LISTED) == Some(1) {
        return Err(Invalid::Listed);
    }
    let ty = gs.item_type(item).ok_or(Invalid::NotOwner)?;
    let level = gs.item(item, icol::LEVEL).unwrap();
    let tick = gs.current_tick();
    match ty {
        ItemType::Ration | ItemType::Potion => {
            let (col, amount) = if ty == ItemType::Ration {
                (ecol::FOOD, gs.config().ration_food)
            } else {
                (ecol::HEALTH, gs.config().potion_health)
            };
            gs.set_ent(id, col, (gs.ent(id, col) + amount).min(100));
            gs.destroy_item(item).expect("owned item");
            gs.log_event(EventRecord::new(tick, EventType::ConsumeItem, id).item(ty, level))
                .expect("current tick");
        }
        _ => {
            if gs.item(item, icol::EQUIPPED) == Some(1) {
                return Err(Invalid::AlreadyEquipped);
            }
            let gate = match ty.governing_skill() {
                Some(skill) => gs.level(id, skill),
                None => [Skill::Melee, Skill::Range, Skill::Mage]
                    .iter()
                    .map(|&s| gs.level(id, s))
                    .max()
                    .unwrap(),
            };
            if gate < level {
                return Err(Invalid::LevelGate);
            }
            gs.equip(id, item).expect("equipment item");
            gs.log_event(EventRecord::new(tick, EventType::EquipItem, id).item(ty, level))
                .expect("current tick");
        }
    }
    Ok(())
}
