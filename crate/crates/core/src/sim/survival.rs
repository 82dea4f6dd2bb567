use super::combat::health_floor;
use crate::datastore::schema::entity as ecol;
use crate::datastore::{EventRecord, GameState};
use crate::types::{EntityId, EventType};
use crate::worldgen::Material;

/// Food and water decay, foraging, starvation damage and regeneration.
pub fn survival_step(gs: &mut GameState, id: EntityId) {
    if !gs.is_alive(id) || gs.ent(id, ecol::HEALTH) <= 0 {
        return;
    }
    let cfg = gs.config().clone();
    let tick = gs.current_tick();
    let mut food = gs.ent(id, ecol::FOOD);
    let mut water = gs.ent(id, ecol::WATER);
    if tick % cfg.survival_decay_interval == cfg.survival_decay_interval - 1 {
        food = (food - 1).max(0);
        water = (water - 1).max(0);
    }

    let (r, c) = gs.position(id).unwrap();
    if food < 100 && gs.tiles().material(r, c) == Material::Forest && gs.tiles().is_available(r, c)
    {
        food = 100;
        gs.tiles_mut()
            .deplete(r, c, cfg.respawn_delay)
            .expect("checked available");
        gs.log_event(EventRecord::new(tick, EventType::EatFood, id))
            .expect("current tick");
    }
    let near_water = [(-1, 0), (1, 0), (0, -1), (0, 1)]
        .iter()
        .any(|(dr, dc)| gs.tiles().material(r + dr, c + dc) == Material::Water);
    if water < 100 && near_water {
        water = 100;
        gs.log_event(EventRecord::new(tick, EventType::DrinkWater, id))
            .expect("current tick");
    }

    let mut health = gs.ent(id, ecol::HEALTH);
    if food == 0 {
        health -= cfg.starvation_damage;
    }
    if water == 0 {
        health -= cfg.dehydration_damage;
    }
    if food > cfg.regen_threshold && water > cfg.regen_threshold {
        health += cfg.regen_amount;
    }
    health = health.clamp(health_floor(gs), 100);
    gs.set_ent(id, ecol::FOOD, food);
    gs.set_ent(id, ecol::WATER, water);
    gs.set_ent(id, ecol::HEALTH, health);
}
