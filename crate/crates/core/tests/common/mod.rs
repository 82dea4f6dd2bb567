#![allow(dead_code)]

use std::collections::BTreeMap;

use gridmmo::datastore::schema::{entity as ecol, item as icol};
use gridmmo::datastore::{EventRecord, GameState};
use gridmmo::sim::{spawn_agents, spawn_npcs};
use gridmmo::tasks::Params;
use gridmmo::types::{CombatStyle, EntityId, EventType, ItemType, Skill};
use gridmmo::worldgen::{Material, TileMap};
use gridmmo::Config;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// A crowded 40x40 world: 8 agents, 16 NPCs.
pub fn small_config() -> Config {
    Config {
        map_size: 32,
        border: 4,
        num_agents: 8,
        max_agents: 8,
        num_npcs: 16,
        horizon: 64,
        ..Config::default()
    }
}

/// A square map of grass with a void border of `border` tiles.
pub fn grass_map(size: usize, border: usize) -> TileMap {
    let mut b = Vec::with_capacity(12 + 3 * size * size);
    b.extend((size as u32).to_le_bytes());
    b.extend(0u64.to_le_bytes());
    for r in 0..size {
        for c in 0..size {
            let inside =
                (border..size - border).contains(&r) && (border..size - border).contains(&c);
            b.push(if inside {
                Material::Grass as u8
            } else {
                Material::Void as u8
            });
            b.extend([0, 0]);
        }
    }
    TileMap::from_bytes(&b).unwrap()
}

/// Empty state on an all-grass map sized for `cfg`.
pub fn grass_state(cfg: Config) -> GameState {
    let map = grass_map(cfg.world_size(), cfg.border);
    GameState::with_map(cfg, 0, map)
}

/// Generated world with agents and NPCs spawned.
pub fn spawned(cfg: Config, seed: u64) -> GameState {
    let mut gs = GameState::new(cfg.clone(), seed).unwrap();
    spawn_agents(&mut gs, cfg.num_agents).unwrap();
    spawn_npcs(&mut gs, cfg.num_npcs).unwrap();
    gs
}

/// Hand agents random gold, items and equipment so predicates have something to see.
pub fn enrich(gs: &mut GameState, rng: &mut ChaCha8Rng) {
    for a in gs.agent_ids().to_vec() {
        gs.set_ent(a, ecol::GOLD, rng.random_range(0..20));
        for s in Skill::ALL {
            gs.set_ent(a, ecol::LEVEL_BASE + s.index(), rng.random_range(1..5));
        }
        for _ in 0..rng.random_range(0..8) {
            let ty = ItemType::ALL[rng.random_range(0..ItemType::ALL.len())];
            let it = gs.create_item(a, ty, rng.random_range(1..5), rng.random_range(1..4));
            if ty.slot().is_some() && rng.random_bool(0.6) {
                gs.equip(a, it).unwrap();
            }
        }
    }
}

// ── naive object-graph snapshot ─────────────────────────────────

#[derive(Debug, Clone)]
pub struct EntSnap {
    pub id: EntityId,
    pub row: i64,
    pub col: i64,
    pub health: i64,
    pub gold: i64,
    pub levels: [i64; 8],
}

#[derive(Debug, Clone)]
pub struct ItemSnap {
    pub type_id: i64,
    pub level: i64,
    pub owner: EntityId,
    pub equipped: bool,
    pub quantity: i64,
}

#[derive(Debug, Clone)]
pub struct Snap {
    pub tick: u64,
    pub vision: i64,
    pub size: i64,
    pub materials: Vec<Vec<Material>>,
    pub ents: Vec<EntSnap>,
    pub items: Vec<ItemSnap>,
    pub events: Vec<EventRecord>,
    pub spawn: BTreeMap<EntityId, (i64, i64)>,
}

impl Snap {
    pub fn take(gs: &GameState) -> Self {
        let et = gs.entity_table();
        let ents = et
            .live_rows()
            .map(|r| EntSnap {
                id: et.int(r, ecol::ID),
                row: et.int(r, ecol::ROW),
                col: et.int(r, ecol::COL),
                health: et.int(r, ecol::HEALTH),
                gold: et.int(r, ecol::GOLD),
                levels: std::array::from_fn(|i| et.int(r, ecol::LEVEL_BASE + i)),
            })
            .collect();
        let it = gs.item_table();
        let items = it
            .live_rows()
            .map(|r| ItemSnap {
                type_id: it.int(r, icol::TYPE_ID),
                level: it.int(r, icol::LEVEL),
                owner: it.int(r, icol::OWNER_ID),
                equipped: it.int(r, icol::EQUIPPED) == 1,
                quantity: it.int(r, icol::QUANTITY),
            })
            .collect();
        let n = gs.tiles().size() as i64;
        Snap {
            tick: gs.current_tick(),
            vision: gs.config().vision_radius,
            size: n,
            materials: (0..n)
                .map(|r| (0..n).map(|c| gs.tiles().material(r, c)).collect())
                .collect(),
            ents,
            items,
            events: gs.events().iter().collect(),
            spawn: gs.spawn_positions().clone(),
        }
    }

    fn material(&self, r: i64, c: i64) -> Material {
        if r < 0 || c < 0 || r >= self.size || c >= self.size {
            Material::Void
        } else {
            self.materials[r as usize][c as usize]
        }
    }

    fn members(&self, subject: &[EntityId]) -> Vec<&EntSnap> {
        self.ents
            .iter()
            .filter(|e| subject.contains(&e.id))
            .collect()
    }

    fn events_of(&self, subject: &[EntityId], kind: EventType) -> Vec<&EventRecord> {
        let present: Vec<EntityId> = self.members(subject).iter().map(|e| e.id).collect();
        self.events
            .iter()
            .filter(|e| e.event_type == kind.code() && present.contains(&e.actor))
            .collect()
    }
}

fn frac(a: f64, b: i64) -> f64 {
    if b == 0 {
        1.0
    } else {
        a / b as f64
    }
}

/// One parameterised built-in predicate, evaluable both ways.
#[derive(Debug, Clone)]
pub enum Case {
    TickGE(i64),
    CanSeeTile(Material),
    StayAlive,
    AllDead,
    DistanceTraveled(i64),
    FullyArmed(CombatStyle, i64, i64),
    CountEvent(EventType, i64),
    ScoreHit(CombatStyle, i64),
    HoardGold(i64),
    OwnItem(ItemType, i64, i64),
    EquipItem(ItemType, i64, i64),
    AttainSkill(Skill, i64, i64),
}

impl Case {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let style = CombatStyle::ALL[rng.random_range(0..3)];
        let item = ItemType::ALL[rng.random_range(0..ItemType::ALL.len())];
        let small = |rng: &mut ChaCha8Rng| rng.random_range(0..5);
        match rng.random_range(0..12) {
            0 => Case::TickGE(rng.random_range(1..30)),
            1 => Case::CanSeeTile(Material::ALL[rng.random_range(0..Material::ALL.len())]),
            2 => Case::StayAlive,
            3 => Case::AllDead,
            4 => Case::DistanceTraveled(rng.random_range(1..12)),
            5 => Case::FullyArmed(style, small(rng), small(rng)),
            6 => Case::CountEvent(
                EventType::ALL[rng.random_range(0..EventType::ALL.len())],
                small(rng),
            ),
            7 => Case::ScoreHit(style, small(rng)),
            8 => Case::HoardGold(rng.random_range(0..60)),
            9 => Case::OwnItem(item, small(rng), small(rng)),
            10 => Case::EquipItem(item, small(rng), small(rng)),
            _ => Case::AttainSkill(
                Skill::ALL[rng.random_range(0..8)],
                rng.random_range(1..5),
                small(rng),
            ),
        }
    }

    /// Every variant once, with fixed parameters.
    pub fn each() -> Vec<Case> {
        vec![
            Case::TickGE(10),
            Case::CanSeeTile(Material::Water),
            Case::StayAlive,
            Case::AllDead,
            Case::DistanceTraveled(5),
            Case::FullyArmed(CombatStyle::Melee, 1, 1),
            Case::CountEvent(EventType::DrinkWater, 3),
            Case::ScoreHit(CombatStyle::Melee, 2),
            Case::HoardGold(20),
            Case::OwnItem(ItemType::Ration, 1, 2),
            Case::EquipItem(ItemType::Hat, 1, 2),
            Case::AttainSkill(Skill::Melee, 2, 2),
        ]
    }

    pub fn spec(&self) -> (&'static str, Params) {
        let (name, v) = match self {
            Case::TickGE(n) => ("TickGE", json!({"num_tick": n})),
            Case::CanSeeTile(m) => ("CanSeeTile", json!({"tile_type": m})),
            Case::StayAlive => ("StayAlive", json!({})),
            Case::AllDead => ("AllDead", json!({})),
            Case::DistanceTraveled(d) => ("DistanceTraveled", json!({"dist": d})),
            Case::FullyArmed(s, l, n) => (
                "FullyArmed",
                json!({"combat_style": s, "level": l, "num_agent": n}),
            ),
            Case::CountEvent(e, n) => ("CountEvent", json!({"event_type": e, "N": n})),
            Case::ScoreHit(s, n) => ("ScoreHit", json!({"combat_style": s, "N": n})),
            Case::HoardGold(a) => ("HoardGold", json!({"amount": a})),
            Case::OwnItem(t, l, q) => ("OwnItem", json!({"type_id": t, "level": l, "quantity": q})),
            Case::EquipItem(t, l, n) => (
                "EquipItem",
                json!({"type_id": t, "level": l, "num_agent": n}),
            ),
            Case::AttainSkill(s, l, n) => (
                "AttainSkill",
                json!({"skill": s, "level": l, "num_agent": n}),
            ),
        };
        (name, v.as_object().unwrap().clone())
    }

    /// Brute-force value straight from the snapshot.
    pub fn oracle(&self, s: &Snap, subject: &[EntityId]) -> f64 {
        let members = s.members(subject);
        let living: Vec<&&EntSnap> = members.iter().filter(|e| e.health > 0).collect();
        let has_equipped = |owner: EntityId, ty: i64, lvl: i64| {
            s.items
                .iter()
                .any(|i| i.owner == owner && i.type_id == ty && i.level >= lvl && i.equipped)
        };
        let v = match *self {
            Case::TickGE(n) => s.tick as f64 / n as f64,
            Case::CanSeeTile(m) => {
                let r = s.vision;
                let seen = living.iter().any(|e| {
                    let mut any = false;
                    for dr in -r..=r {
                        for dc in -r..=r {
                            any |= s.material(e.row + dr, e.col + dc) == m;
                        }
                    }
                    any
                });
                seen as i64 as f64
            }
            Case::StayAlive => (living.len() == subject.len()) as i64 as f64,
            Case::AllDead => (subject.len() - living.len()) as f64 / subject.len() as f64,
            Case::DistanceTraveled(d) => {
                if living.is_empty() {
                    0.0
                } else {
                    let total: i64 = living
                        .iter()
                        .map(|e| {
                            let (sr, sc) = s.spawn[&e.id];
                            (e.row - sr).abs().max((e.col - sc).abs())
                        })
                        .sum();
                    total as f64 / d as f64
                }
            }
            Case::FullyArmed(style, lvl, n) => {
                if n == 0 {
                    1.0
                } else {
                    let set = [
                        ItemType::Hat,
                        ItemType::Top,
                        ItemType::Bottom,
                        style.weapon(),
                        style.ammo(),
                    ];
                    let count = members
                        .iter()
                        .filter(|e| set.iter().all(|t| has_equipped(e.id, t.code(), lvl)))
                        .count();
                    count as f64 / n as f64
                }
            }
            Case::CountEvent(kind, n) => frac(s.events_of(subject, kind).len() as f64, n),
            Case::ScoreHit(style, n) => {
                let hits = s
                    .events_of(subject, EventType::ScoreHit)
                    .iter()
                    .filter(|e| e.combat_style == style.code())
                    .count();
                frac(hits as f64, n)
            }
            Case::HoardGold(a) => frac(members.iter().map(|e| e.gold).sum::<i64>() as f64, a),
            Case::OwnItem(t, lvl, q) => {
                let owned: i64 = s
                    .items
                    .iter()
                    .filter(|i| members.iter().any(|e| e.id == i.owner))
                    .filter(|i| i.type_id == t.code() && i.level >= lvl)
                    .map(|i| i.quantity)
                    .sum();
                frac(owned as f64, q)
            }
            Case::EquipItem(t, lvl, n) => frac(
                members
                    .iter()
                    .filter(|e| has_equipped(e.id, t.code(), lvl))
                    .count() as f64,
                n,
            ),
            Case::AttainSkill(sk, lvl, n) => frac(
                members
                    .iter()
                    .filter(|e| e.levels[sk.index()] >= lvl)
                    .count() as f64,
                n,
            ),
        };
        v.clamp(0.0, 1.0)
    }
}

/// Hand-evaluated kill shaping, for cross-checking the library version.
pub fn kill_oracle(kills: usize) -> f64 {
    let k = kills as f64;
    let mut p = 0.06 * k;
    if kills >= 1 {
        p += 0.1;
    }
    if kills >= 3 {
        p += 0.3;
    }
    p.min(1.0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_subject(rng: &mut ChaCha8Rng, agents: &[EntityId]) -> Vec<EntityId> {
    let mut s: Vec<EntityId> = agents
        .iter()
        .copied()
        .filter(|_| rng.random_bool(0.4))
        .collect();
    if s.is_empty() {
        s.push(agents[rng.random_range(0..agents.len())]);
    }
    s
}
