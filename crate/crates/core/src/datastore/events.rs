//! Append-only event log.
//!
//! Events live in a single union-schema table; attributes a type does not
//! use stay zero. Rows are never modified or freed within an episode, so a
//! running digest over appended rows stays valid and a per-actor row index
//! can be kept without invalidation.

use std::collections::HashMap;

use super::digest::Fnv64;
use super::schema::event as col;
use super::table::ColumnTable;
use crate::error::{Error, Result};
use crate::types::{CombatStyle, EntityId, EventType, ItemType, Skill};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EventRecord {
    pub id: i64,
    pub tick: i64,
    pub event_type: i64,
    pub actor: EntityId,
    pub combat_style: i64,
    pub target: EntityId,
    pub item_type: i64,
    pub item_level: i64,
    pub price: i64,
    pub gold: i64,
    pub damage: i64,
    pub skill: i64,
    pub level: i64,
}

impl EventRecord {
    pub fn new(tick: u64, kind: EventType, actor: EntityId) -> Self {
        Self {
            tick: tick as i64,
            event_type: kind.code(),
            actor,
            ..Default::default()
        }
    }

    pub fn kind(&self) -> Option<EventType> {
        EventType::from_code(self.event_type)
    }

    pub fn style(mut self, s: CombatStyle) -> Self {
        self.combat_style = s.code();
        self
    }

    pub fn target(mut self, t: EntityId) -> Self {
        self.target = t;
        self
    }

    pub fn item(mut self, ty: ItemType, level: i64) -> Self {
        self.item_type = ty.code();
        self.item_level = level;
        self
    }

    pub fn price(mut self, p: i64) -> Self {
        self.price = p;
        self
    }

    pub fn gold(mut self, g: i64) -> Self {
        self.gold = g;
        self
    }

    pub fn damage(mut self, d: i64) -> Self {
        self.damage = d;
        self
    }

    pub fn skill(mut self, s: Skill, level: i64) -> Self {
        self.skill = s.code();
        self.level = level;
        self
    }

    pub fn to_cells(&self) -> [i64; 13] {
        [
            self.id,
            self.tick,
            self.event_type,
            self.actor,
            self.combat_style,
            self.target,
            self.item_type,
            self.item_level,
            self.price,
            self.gold,
            self.damage,
            self.skill,
            self.level,
        ]
    }

    pub fn from_cells(c: &[i64; 13]) -> Self {
        Self {
            id: c[0],
            tick: c[1],
            event_type: c[2],
            actor: c[3],
            combat_style: c[4],
            target: c[5],
            item_type: c[6],
            item_level: c[7],
            price: c[8],
            gold: c[9],
            damage: c[10],
            skill: c[11],
            level: c[12],
        }
    }

    /// Value of a filterable attribute by name.
    pub fn attribute(&self, name: &str) -> Result<i64> {
        Ok(match name {
            "combat_style" => self.combat_style,
            "target" => self.target,
            "item_type" => self.item_type,
            "item_level" => self.item_level,
            "price" => self.price,
            "gold" => self.gold,
            "damage" => self.damage,
            "skill" => self.skill,
            "level" => self.level,
            _ => return Err(Error::Query(format!("unknown event attribute `{name}`"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct EventLog {
    table: ColumnTable,
    by_actor: HashMap<EntityId, Vec<u32>>,
    running: Fnv64,
}

impl EventLog {
    pub fn new() -> Self {
        Self {
            table: ColumnTable::new(col::SCHEMA).expect("static schema"),
            by_actor: HashMap::new(),
            running: Fnv64::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &ColumnTable {
        &self.table
    }

    /// Append `rec` and return its id. Ids equal row indices and count up from 0.
    pub(crate) fn append(&mut self, mut rec: EventRecord) -> i64 {
        let row = self.table.alloc();
        debug_assert_eq!(row, self.table.len() - 1, "event rows are dense");
        rec.id = row as i64;
        let cells = rec.to_cells();
        for (c, v) in cells.iter().enumerate() {
            self.table.set_int(row, c, *v);
        }
        self.running.write_u64(row as u64);
        for v in cells {
            self.running.write_i64(v);
        }
        self.by_actor.entry(rec.actor).or_default().push(row as u32);
        rec.id
    }

    pub fn get(&self, id: usize) -> EventRecord {
        let mut cells = [0i64; 13];
        for (c, v) in cells.iter_mut().enumerate() {
            *v = self.table.int(id, c);
        }
        EventRecord::from_cells(&cells)
    }

    pub fn last_tick(&self) -> Option<i64> {
        self.len()
            .checked_sub(1)
            .map(|r| self.table.int(r, col::TICK))
    }

    pub fn iter(&self) -> impl Iterator<Item = EventRecord> + '_ {
        (0..self.len()).map(|r| self.get(r))
    }

    /// Events with id in `from..`, in order.
    pub fn since(&self, from: usize) -> impl Iterator<Item = EventRecord> + '_ {
        (from..self.len()).map(|r| self.get(r))
    }

    /// Row ids of events whose actor is `actor`, ascending.
    pub fn rows_for_actor(&self, actor: EntityId) -> &[u32] {
        self.by_actor.get(&actor).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Digest of the full log, maintained incrementally on append.
    pub fn digest(&self) -> u64 {
        let mut h = self.running;
        h.write_u64(self.len() as u64);
        h.finish()
    }

    /// Digest recomputed from scratch; equals [`Self::digest`].
    pub fn digest_full(&self) -> u64 {
        let mut h = Fnv64::new();
        for r in 0..self.len() {
            h.write_u64(r as u64);
            for c in 0..col::SCHEMA.len() {
                h.write_i64(self.table.int(r, c));
            }
        }
        h.write_u64(self.len() as u64);
        h.finish()
    }
}

impl Default for EventLog {
    fn default() -> Self {
        Self::new()
    }
}
