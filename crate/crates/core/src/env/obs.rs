//! Fixed-shape per-agent observations.
//!
//! Every agent gets the same number of `f32` values every tick. Blocks are
//! laid out back to back in the order tiles, entities, self, inventory,
//! market, tasks; absent rows are zero. [`ObsLayout::schema`] describes the
//! offsets for consumers that should not hard-code them.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::datastore::schema::{entity as ecol, item as icol};
use crate::datastore::{GameState, Listing};
use crate::error::{Error, Result};
use crate::types::{linf, EntityId, Skill, Slot};

pub const SCHEMA_VERSION: u32 = 1;

/// A fixed-width record inside an observation block.
pub trait Row: Sized {
    const FIELDS: &'static [&'static str];
    fn write(&self, out: &mut [f32]);
    fn read(row: &[f32]) -> Self;
}

macro_rules! row_struct {
    ($(#[$m:meta])* $name:ident { $($field:ident),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
        pub struct $name {
            $(pub $field: i64),+
        }

        impl Row for $name {
            const FIELDS: &'static [&'static str] = &[$(stringify!($field)),+];

            fn write(&self, out: &mut [f32]) {
                let vals = [$(self.$field),+];
                for (o, v) in out.iter_mut().zip(vals) {
                    *o = v as f32;
                }
            }

            fn read(row: &[f32]) -> Self {
                let mut it = row.iter().map(|&v| v as i64);
                Self { $($field: it.next().unwrap_or(0)),+ }
            }
        }
    };
}

row_struct!(
    /// One tile of the vision crop. `occupant` is 0 empty, 1 agent, 2 NPC.
    TileObs { material, occupant, depleted, items }
);

row_struct!(
    /// A visible entity. Offsets are relative to the observer.
    EntityObs {
        id, kind, disposition, row_offset, col_offset, health, food, water,
        melee, range, mage, weapon_type, weapon_level,
    }
);

row_struct!(
    /// The observer's own full state.
    SelfObs {
        id, tick, alive, row, col, spawn_row, spawn_col, health, food, water, gold,
        melee, range, mage, herbalism, fishing, prospecting, carving, alchemy,
        melee_xp, range_xp, mage_xp, herbalism_xp, fishing_xp, prospecting_xp, carving_xp,
        alchemy_xp, hat_level, top_level, bottom_level, weapon_type, weapon_level,
        ammo_type, ammo_level, ammo_quantity,
    }
);

row_struct!(
    /// An owned item.
    ItemObs { id, type_id, level, quantity, equipped, listed }
);

row_struct!(
    /// A market listing.
    ListingObs { listing_id, type_id, level, price }
);

/// Typed view of one observation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Observation {
    /// Row-major `(2R+1)^2` crop centred on the agent.
    pub tiles: Vec<TileObs>,
    /// Nearest visible entities (self included), by Chebyshev distance then id.
    pub entities: Vec<EntityObs>,
    pub me: SelfObs,
    /// Owned items by ascending id.
    pub inventory: Vec<ItemObs>,
    /// Cheapest listings by price then id.
    pub market: Vec<ListingObs>,
    /// Progress of the agent's tasks, zero padded.
    pub tasks: Vec<f32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub name: String,
    pub offset: usize,
    pub rows: usize,
    pub fields: Vec<String>,
}

impl BlockSpec {
    pub fn len(&self) -> usize {
        self.rows * self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Block sizes for a config.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObsLayout {
    pub radius: i64,
    pub entities: usize,
    pub inventory: usize,
    pub listings: usize,
    pub tasks: usize,
}

impl ObsLayout {
    pub fn new(cfg: &Config) -> Self {
        Self {
            radius: cfg.vision_radius,
            entities: cfg.obs_entities,
            inventory: cfg.inventory_capacity,
            listings: cfg.obs_listings,
            tasks: cfg.obs_tasks,
        }
    }

    pub fn side(&self) -> usize {
        (2 * self.radius + 1) as usize
    }

    pub fn blocks(&self) -> Vec<BlockSpec> {
        fn fields<R: Row>() -> Vec<String> {
            R::FIELDS.iter().map(|s| s.to_string()).collect()
        }
        let mut out = Vec::new();
        let mut offset = 0;
        let mut push = |name: &str, rows: usize, fields: Vec<String>| {
            let b = BlockSpec {
                name: name.into(),
                offset,
                rows,
                fields,
            };
            offset += b.len();
            out.push(b);
        };
        push("tiles", self.side() * self.side(), fields::<TileObs>());
        push("entities", self.entities, fields::<EntityObs>());
        push("self", 1, fields::<SelfObs>());
        push("inventory", self.inventory, fields::<ItemObs>());
        push("market", self.listings, fields::<ListingObs>());
        push(
            "tasks",
            1,
            (0..self.tasks).map(|i| format!("progress_{i}")).collect(),
        );
        out
    }

    /// Number of `f32` values per observation.
    pub fn len(&self) -> usize {
        self.blocks().iter().map(BlockSpec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn byte_len(&self) -> usize {
        self.len() * 4
    }

    pub fn schema(&self) -> ObsSchema {
        ObsSchema {
            version: SCHEMA_VERSION,
            dtype: "f32le".into(),
            length: self.len(),
            bytes: self.byte_len(),
            blocks: self.blocks(),
            action: ActionSchema::describe(),
        }
    }

    pub fn encode(&self, obs: &Observation) -> Vec<f32> {
        let mut out = vec![0.0; self.len()];
        self.encode_into(obs, &mut out);
        out
    }

    /// Write `obs` into `out`, which must be exactly [`ObsLayout::len`] long.
    pub fn encode_into(&self, obs: &Observation, out: &mut [f32]) {
        assert_eq!(out.len(), self.len(), "observation buffer length");
        out.fill(0.0);
        let blocks = self.blocks();
        fn put<R: Row>(b: &BlockSpec, rows: &[R], out: &mut [f32]) {
            let w = R::FIELDS.len();
            for (i, r) in rows.iter().take(b.rows).enumerate() {
                r.write(&mut out[b.offset + i * w..b.offset + (i + 1) * w]);
            }
        }
        put(&blocks[0], &obs.tiles, out);
        put(&blocks[1], &obs.entities, out);
        put(&blocks[2], std::slice::from_ref(&obs.me), out);
        put(&blocks[3], &obs.inventory, out);
        put(&blocks[4], &obs.market, out);
        let t = &blocks[5];
        for (o, &v) in out[t.offset..t.offset + t.len()].iter_mut().zip(&obs.tasks) {
            *o = v;
        }
    }

    pub fn decode(&self, buf: &[f32]) -> Result<Observation> {
        if buf.len() != self.len() {
            return Err(Error::Format(format!(
                "observation has {} values, layout expects {}",
                buf.len(),
                self.len()
            )));
        }
        let blocks = self.blocks();
        fn get<R: Row>(b: &BlockSpec, buf: &[f32], keep_empty: bool) -> Vec<R> {
            buf[b.offset..b.offset + b.len()]
                .chunks_exact(R::FIELDS.len())
                .filter(|row| keep_empty || row[0] != 0.0)
                .map(R::read)
                .collect()
        }
        let t = &blocks[5];
        Ok(Observation {
            tiles: get(&blocks[0], buf, true),
            entities: get(&blocks[1], buf, false),
            me: get::<SelfObs>(&blocks[2], buf, true).remove(0),
            inventory: get(&blocks[3], buf, false),
            market: get(&blocks[4], buf, false),
            tasks: buf[t.offset..t.offset + t.len()].to_vec(),
        })
    }

    pub fn to_bytes(&self, obs: &Observation) -> Vec<u8> {
        self.encode(obs)
            .iter()
            .flat_map(|v| v.to_le_bytes())
            .collect()
    }

    pub fn from_bytes(&self, bytes: &[u8]) -> Result<Observation> {
        if !bytes.len().is_multiple_of(4) {
            return Err(Error::Format(
                "observation byte length not a multiple of 4".into(),
            ));
        }
        let vals: Vec<f32> = bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        self.decode(&vals)
    }
}

/// Machine-readable description of the observation and action encodings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObsSchema {
    pub version: u32,
    pub dtype: String,
    pub length: usize,
    pub bytes: usize,
    pub blocks: Vec<BlockSpec>,
    pub action: ActionSchema,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionSchema {
    pub width: usize,
    pub fields: Vec<String>,
    pub kinds: Vec<ActionKindSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionKindSpec {
    pub code: i64,
    pub name: String,
    pub args: Vec<String>,
}

impl ActionSchema {
    pub fn describe() -> Self {
        let kind = |code, name: &str, args: &[&str]| ActionKindSpec {
            code,
            name: name.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        };
        Self {
            width: 4,
            fields: vec!["kind".into(), "a".into(), "b".into(), "c".into()],
            kinds: vec![
                kind(0, "Noop", &[]),
                kind(1, "Move", &["direction: 0 none, 1 N, 2 S, 3 E, 4 W"]),
                kind(
                    2,
                    "Attack",
                    &["combat_style: 1 melee, 2 range, 3 mage", "target entity id"],
                ),
                kind(3, "Use", &["item id"]),
                kind(4, "Gather", &[]),
                kind(5, "Sell", &["item id", "price"]),
                kind(6, "Buy", &["listing id"]),
            ],
        }
    }
}

/// Market rows shared by every observation of a tick.
pub fn market_rows(gs: &GameState, n: usize) -> Vec<ListingObs> {
    let mut ls: Vec<Listing> = gs.listings();
    ls.sort_by_key(|l| (l.price, l.id));
    ls.iter()
        .take(n)
        .map(|l| ListingObs {
            listing_id: l.id,
            type_id: gs.item(l.item, icol::TYPE_ID).unwrap_or(0),
            level: gs.item(l.item, icol::LEVEL).unwrap_or(0),
            price: l.price,
        })
        .collect()
}

fn slot_item(gs: &GameState, id: EntityId, slot: Slot) -> (i64, i64, i64) {
    let it = gs.slot(id, slot);
    if it == 0 {
        return (0, 0, 0);
    }
    (
        gs.item(it, icol::TYPE_ID).unwrap_or(0),
        gs.item(it, icol::LEVEL).unwrap_or(0),
        gs.item(it, icol::QUANTITY).unwrap_or(0),
    )
}

/// Build the observation of `agent`, which must still have a row.
pub fn observe(
    gs: &GameState,
    layout: &ObsLayout,
    agent: EntityId,
    market: &[ListingObs],
    tasks: &[f32],
) -> Observation {
    let (r0, c0) = gs.position(agent).expect("observed agent has a row");
    let rad = layout.radius;
    let tiles_map = gs.tiles();
    let mut tiles = Vec::with_capacity(layout.side() * layout.side());
    let mut seen: Vec<(i64, EntityId)> = Vec::new();
    for r in r0 - rad..=r0 + rad {
        for c in c0 - rad..=c0 + rad {
            let occ = gs.occupant(r, c);
            if occ != 0 {
                seen.push((linf((r0, c0), (r, c)), occ));
            }
            tiles.push(TileObs {
                material: tiles_map.material(r, c) as i64,
                occupant: match occ {
                    0 => 0,
                    x if x > 0 => 1,
                    _ => 2,
                },
                depleted: (tiles_map.timer(r, c) > 0) as i64,
                items: gs.items_on_tile(r, c) as i64,
            });
        }
    }
    if !seen.iter().any(|&(_, id)| id == agent) {
        // a dead agent has been vacated from the grid but still sees itself
        seen.push((0, agent));
    }
    seen.sort_unstable();
    let entities = seen
        .iter()
        .take(layout.entities)
        .map(|&(_, id)| {
            let (r, c) = gs.position(id).unwrap();
            let (wt, wl, _) = slot_item(gs, id, Slot::Weapon);
            EntityObs {
                id,
                kind: gs.ent(id, ecol::KIND),
                disposition: gs.ent(id, ecol::DISPOSITION),
                row_offset: r - r0,
                col_offset: c - c0,
                health: gs.ent(id, ecol::HEALTH),
                food: gs.ent(id, ecol::FOOD),
                water: gs.ent(id, ecol::WATER),
                melee: gs.level(id, Skill::Melee),
                range: gs.level(id, Skill::Range),
                mage: gs.level(id, Skill::Mage),
                weapon_type: wt,
                weapon_level: wl,
            }
        })
        .collect();

    let lv = |s: Skill| gs.level(agent, s);
    let xp = |s: Skill| gs.ent(agent, ecol::XP_BASE + s.index());
    let (sr, sc) = gs.spawn_pos(agent).unwrap_or((0, 0));
    let (wt, wl, _) = slot_item(gs, agent, Slot::Weapon);
    let (at, al, aq) = slot_item(gs, agent, Slot::Ammo);
    let me = SelfObs {
        id: agent,
        tick: gs.current_tick() as i64,
        alive: gs.ent(agent, ecol::ALIVE),
        row: r0,
        col: c0,
        spawn_row: sr,
        spawn_col: sc,
        health: gs.ent(agent, ecol::HEALTH),
        food: gs.ent(agent, ecol::FOOD),
        water: gs.ent(agent, ecol::WATER),
        gold: gs.ent(agent, ecol::GOLD),
        melee: lv(Skill::Melee),
        range: lv(Skill::Range),
        mage: lv(Skill::Mage),
        herbalism: lv(Skill::Herbalism),
        fishing: lv(Skill::Fishing),
        prospecting: lv(Skill::Prospecting),
        carving: lv(Skill::Carving),
        alchemy: lv(Skill::Alchemy),
        melee_xp: xp(Skill::Melee),
        range_xp: xp(Skill::Range),
        mage_xp: xp(Skill::Mage),
        herbalism_xp: xp(Skill::Herbalism),
        fishing_xp: xp(Skill::Fishing),
        prospecting_xp: xp(Skill::Prospecting),
        carving_xp: xp(Skill::Carving),
        alchemy_xp: xp(Skill::Alchemy),
        hat_level: slot_item(gs, agent, Slot::Hat).1,
        top_level: slot_item(gs, agent, Slot::Top).1,
        bottom_level: slot_item(gs, agent, Slot::Bottom).1,
        weapon_type: wt,
        weapon_level: wl,
        ammo_type: at,
        ammo_level: al,
        ammo_quantity: aq,
    };

    let inventory = gs
        .inventory(agent)
        .iter()
        .take(layout.inventory)
        .map(|&it| ItemObs {
            id: it,
            type_id: gs.item(it, icol::TYPE_ID).unwrap(),
            level: gs.item(it, icol::LEVEL).unwrap(),
            quantity: gs.item(it, icol::QUANTITY).unwrap(),
            equipped: gs.item(it, icol::EQUIPPED).unwrap(),
            listed: gs.item(it, icol::LISTED).unwrap(),
        })
        .collect();

    let mut task_vals = vec![0.0; layout.tasks];
    for (o, &v) in task_vals.iter_mut().zip(tasks) {
        *o = v;
    }
    Observation {
        tiles,
        entities,
        me,
        inventory,
        market: market.iter().take(layout.listings).copied().collect(),
        tasks: task_vals,
    }
}
