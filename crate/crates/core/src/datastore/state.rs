//! The full game state: tick counter, constants and every table.
//!
//! Tables are the source of truth. The hash indices kept alongside them
//! (id to row, owner to items, tile occupancy) are derived and updated only
//! through the mutation helpers here.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use super::digest::Fnv64;
use super::events::{EventLog, EventRecord};
use super::schema::{entity as ecol, item as icol, market as mcol};
use super::table::ColumnTable;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::types::{Disposition, EntityId, EntityKind, ItemType, Skill, Slot};
use crate::worldgen::{TerrainParams, TileMap};

/// One market offer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Listing {
    pub id: i64,
    pub seller: EntityId,
    pub item: i64,
    pub price: i64,
    pub listed_tick: i64,
}

#[derive(Debug, Clone)]
pub struct GameState {
    current_tick: u64,
    seed: u64,
    config: Arc<Config>,
    entities: ColumnTable,
    tiles: TileMap,
    items: ColumnTable,
    market: ColumnTable,
    events: EventLog,
    spawn_pos: BTreeMap<EntityId, (i64, i64)>,

    entity_rows: HashMap<EntityId, usize>,
    item_rows: HashMap<i64, usize>,
    listing_rows: HashMap<i64, usize>,
    listing_by_item: HashMap<i64, i64>,
    inventories: HashMap<EntityId, Vec<i64>>,
    tile_items: HashMap<usize, u32>,
    occupancy: Vec<EntityId>,
    agents: Vec<EntityId>,
    npcs: Vec<EntityId>,
    known: HashSet<EntityId>,
    next_item_id: i64,
    next_listing_id: i64,
    next_npc_id: i64,
}

impl GameState {
    /// Fresh state with a generated map and empty tables.
    pub fn new(config: Config, seed: u64) -> Result<Self> {
        config.validate()?;
        let tiles = TileMap::generate(seed, config.world_size(), &TerrainParams::from(&config))?;
        Ok(Self::with_map(config, seed, tiles))
    }

    pub fn with_map(config: Config, seed: u64, tiles: TileMap) -> Self {
        let n = tiles.size() * tiles.size();
        Self {
            current_tick: 0,
            seed,
            config: Arc::new(config),
            entities: ColumnTable::new(ecol::SCHEMA).expect("static schema"),
            tiles,
            items: ColumnTable::new(icol::SCHEMA).expect("static schema"),
            market: ColumnTable::new(mcol::SCHEMA).expect("static schema"),
            events: EventLog::new(),
            spawn_pos: BTreeMap::new(),
            entity_rows: HashMap::new(),
            item_rows: HashMap::new(),
            listing_rows: HashMap::new(),
            listing_by_item: HashMap::new(),
            inventories: HashMap::new(),
            tile_items: HashMap::new(),
            occupancy: vec![0; n],
            agents: Vec::new(),
            npcs: Vec::new(),
            known: HashSet::new(),
            next_item_id: 1,
            next_listing_id: 1,
            next_npc_id: -1,
        }
    }

    pub fn current_tick(&self) -> u64 {
        self.current_tick
    }

    pub(crate) fn advance_tick(&mut self) {
        self.current_tick += 1;
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn tiles(&self) -> &TileMap {
        &self.tiles
    }

    pub fn tiles_mut(&mut self) -> &mut TileMap {
        &mut self.tiles
    }

    pub fn entity_table(&self) -> &ColumnTable {
        &self.entities
    }

    pub fn item_table(&self) -> &ColumnTable {
        &self.items
    }

    pub fn market_table(&self) -> &ColumnTable {
        &self.market
    }

    pub fn events(&self) -> &EventLog {
        &self.events
    }

    // ── entities ────────────────────────────────────────────────

    pub fn spawn_pos(&self, id: EntityId) -> Option<(i64, i64)> {
        self.spawn_pos.get(&id).copied()
    }

    pub fn spawn_positions(&self) -> &BTreeMap<EntityId, (i64, i64)> {
        &self.spawn_pos
    }

    /// True if `id` was spawned at some point this episode.
    pub fn is_known(&self, id: EntityId) -> bool {
        self.known.contains(&id)
    }

    pub fn next_npc_id(&mut self) -> EntityId {
        let id = self.next_npc_id;
        self.next_npc_id -= 1;
        id
    }

    /// Insert an entity row at `pos` with full vitals and level-1 skills.
    pub fn insert_entity(
        &mut self,
        id: EntityId,
        kind: EntityKind,
        disposition: Disposition,
        pos: (i64, i64),
    ) -> Result<usize> {
        if id == 0 || self.known.contains(&id) {
            return Err(Error::Logic(format!("entity id {id} already used")));
        }
        if !self.tiles.passable(pos.0, pos.1) {
            return Err(Error::Logic(format!("spawn tile {pos:?} is not passable")));
        }
        if self.occupant(pos.0, pos.1) != 0 {
            return Err(Error::Logic(format!("spawn tile {pos:?} is occupied")));
        }
        let row = self.entities.alloc();
        let e = &mut self.entities;
        e.set_int(row, ecol::ID, id);
        e.set_int(row, ecol::KIND, kind as i64);
        e.set_int(row, ecol::DISPOSITION, disposition as i64);
        e.set_int(row, ecol::ROW, pos.0);
        e.set_int(row, ecol::COL, pos.1);
        for c in [ecol::HEALTH, ecol::FOOD, ecol::WATER] {
            e.set_int(row, c, 100);
        }
        for s in 0..8 {
            e.set_int(row, ecol::LEVEL_BASE + s, 1);
        }
        e.set_int(row, ecol::ALIVE, 1);
        self.entity_rows.insert(id, row);
        let idx = self.tile_index(pos);
        self.occupancy[idx] = id;
        self.known.insert(id);
        match kind {
            EntityKind::Agent => {
                let at = self.agents.partition_point(|&a| a < id);
                self.agents.insert(at, id);
            }
            EntityKind::Npc => self.npcs.push(id),
        }
        Ok(row)
    }

    /// Record the spawn position once.
    pub fn set_spawn_pos(&mut self, id: EntityId, pos: (i64, i64)) -> Result<()> {
        if self.spawn_pos.contains_key(&id) {
            return Err(Error::Logic(format!("spawn position of {id} already set")));
        }
        self.spawn_pos.insert(id, pos);
        Ok(())
    }

    /// Free an entity row. Occupancy is cleared if the entity still holds its tile.
    pub fn remove_entity(&mut self, id: EntityId) -> Result<()> {
        let row = self
            .entity_rows
            .remove(&id)
            .ok_or_else(|| Error::Logic(format!("remove of absent entity {id}")))?;
        let pos = (
            self.entities.int(row, ecol::ROW),
            self.entities.int(row, ecol::COL),
        );
        let idx = self.tile_index(pos);
        if self.occupancy[idx] == id {
            self.occupancy[idx] = 0;
        }
        self.entities.free(row)?;
        self.agents.retain(|&a| a != id);
        self.npcs.retain(|&a| a != id);
        self.inventories.remove(&id);
        Ok(())
    }

    #[inline]
    pub fn entity_row(&self, id: EntityId) -> Option<usize> {
        self.entity_rows.get(&id).copied()
    }

    /// Agents with a row, ascending id.
    pub fn agent_ids(&self) -> &[EntityId] {
        &self.agents
    }

    /// NPCs with a row, in spawn order.
    pub fn npc_ids(&self) -> &[EntityId] {
        &self.npcs
    }

    #[inline]
    pub fn get(&self, id: EntityId, col: usize) -> Option<i64> {
        self.entity_row(id).map(|r| self.entities.int(r, col))
    }

    /// Read a column of an entity known to have a row.
    #[inline]
    pub fn ent(&self, id: EntityId, col: usize) -> i64 {
        self.entities.int(self.entity_rows[&id], col)
    }

    pub fn set_ent(&mut self, id: EntityId, col: usize, v: i64) {
        let row = self.entity_rows[&id];
        self.entities.set_int(row, col, v);
    }

    pub fn is_alive(&self, id: EntityId) -> bool {
        self.get(id, ecol::ALIVE) == Some(1)
    }

    pub fn is_agent(&self, id: EntityId) -> bool {
        id > 0
    }

    pub fn position(&self, id: EntityId) -> Option<(i64, i64)> {
        let r = self.entity_row(id)?;
        Some((
            self.entities.int(r, ecol::ROW),
            self.entities.int(r, ecol::COL),
        ))
    }

    pub fn level(&self, id: EntityId, skill: Skill) -> i64 {
        self.ent(id, ecol::LEVEL_BASE + skill.index())
    }

    pub fn slot(&self, id: EntityId, slot: Slot) -> i64 {
        self.ent(id, ecol::SLOT_BASE + slot.index())
    }

    #[inline]
    fn tile_index(&self, pos: (i64, i64)) -> usize {
        pos.0 as usize * self.tiles.size() + pos.1 as usize
    }

    /// Entity standing on a tile, 0 if none.
    #[inline]
    pub fn occupant(&self, r: i64, c: i64) -> EntityId {
        if self.tiles.in_bounds(r, c) {
            self.occupancy[self.tile_index((r, c))]
        } else {
            0
        }
    }

    /// Move without legality checks beyond occupancy bookkeeping.
    pub fn move_entity(&mut self, id: EntityId, to: (i64, i64)) {
        let from = self.position(id).expect("moving entity has a row");
        let fi = self.tile_index(from);
        if self.occupancy[fi] == id {
            self.occupancy[fi] = 0;
        }
        let ti = self.tile_index(to);
        self.occupancy[ti] = id;
        self.set_ent(id, ecol::ROW, to.0);
        self.set_ent(id, ecol::COL, to.1);
    }

    /// Release the tile held by a dead entity whose row still exists.
    pub fn vacate(&mut self, id: EntityId) {
        if let Some(pos) = self.position(id) {
            let i = self.tile_index(pos);
            if self.occupancy[i] == id {
                self.occupancy[i] = 0;
            }
        }
    }

    // ── items ───────────────────────────────────────────────────

    /// Create an item in `owner`'s inventory.
    pub fn create_item(&mut self, owner: EntityId, ty: ItemType, level: i64, quantity: i64) -> i64 {
        let id = self.next_item_id;
        self.next_item_id += 1;
        let row = self.items.alloc();
        self.items.set_int(row, icol::ID, id);
        self.items.set_int(row, icol::TYPE_ID, ty.code());
        self.items.set_int(row, icol::LEVEL, level.clamp(1, 10));
        self.items.set_int(row, icol::OWNER_ID, owner);
        self.items.set_int(row, icol::QUANTITY, quantity.max(1));
        self.item_rows.insert(id, row);
        self.inventories.entry(owner).or_default().push(id);
        id
    }

    #[inline]
    pub fn item_row(&self, id: i64) -> Option<usize> {
        self.item_rows.get(&id).copied()
    }

    pub fn item(&self, id: i64, col: usize) -> Option<i64> {
        self.item_row(id).map(|r| self.items.int(r, col))
    }

    pub fn set_item(&mut self, id: i64, col: usize, v: i64) {
        let row = self.item_rows[&id];
        self.items.set_int(row, col, v);
    }

    pub fn item_type(&self, id: i64) -> Option<ItemType> {
        self.item(id, icol::TYPE_ID).and_then(ItemType::from_code)
    }

    /// Items held by `owner` (inventory, equipped and listed), ascending id.
    pub fn inventory(&self, owner: EntityId) -> &[i64] {
        self.inventories
            .get(&owner)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn inventory_full(&self, owner: EntityId) -> bool {
        self.inventory(owner).len() >= self.config.inventory_capacity
    }

    fn detach_from_owner(&mut self, id: i64) {
        let owner = self.item(id, icol::OWNER_ID).unwrap_or(0);
        if let Some(inv) = self.inventories.get_mut(&owner) {
            inv.retain(|&x| x != id);
        }
        if owner != 0 {
            if let Some(row) = self.entity_row(owner) {
                for s in Slot::ALL {
                    if self.entities.int(row, ecol::SLOT_BASE + s.index()) == id {
                        self.entities.set_int(row, ecol::SLOT_BASE + s.index(), 0);
                    }
                }
            }
        }
        self.set_item(id, icol::EQUIPPED, 0);
    }

    /// Hand an item to a new owner; unequips it and clears any listing flag.
    pub fn transfer_item(&mut self, id: i64, new_owner: EntityId) {
        self.detach_from_owner(id);
        self.set_item(id, icol::LISTED, 0);
        self.set_item(id, icol::OWNER_ID, new_owner);
        let inv = self.inventories.entry(new_owner).or_default();
        let at = inv.partition_point(|&x| x < id);
        inv.insert(at, id);
    }

    /// Place an item on a tile with no owner.
    pub fn drop_item(&mut self, id: i64, pos: (i64, i64)) {
        self.detach_from_owner(id);
        self.set_item(id, icol::LISTED, 0);
        self.set_item(id, icol::OWNER_ID, 0);
        self.set_item(id, icol::TILE_ROW, pos.0);
        self.set_item(id, icol::TILE_COL, pos.1);
        let idx = self.tile_index(pos);
        *self.tile_items.entry(idx).or_default() += 1;
    }

    pub fn destroy_item(&mut self, id: i64) -> Result<()> {
        if self.item_row(id).is_none() {
            return Err(Error::Logic(format!("destroy of absent item {id}")));
        }
        if self.item(id, icol::OWNER_ID) == Some(0) {
            let pos = (
                self.item(id, icol::TILE_ROW).unwrap(),
                self.item(id, icol::TILE_COL).unwrap(),
            );
            let idx = self.tile_index(pos);
            if let Some(n) = self.tile_items.get_mut(&idx) {
                *n -= 1;
            }
        } else {
            self.detach_from_owner(id);
        }
        if let Some(listing) = self.listing_by_item.get(&id).copied() {
            self.remove_listing(listing)?;
        }
        let row = self.item_rows.remove(&id).expect("checked above");
        self.items.free(row)
    }

    pub fn items_on_tile(&self, r: i64, c: i64) -> u32 {
        if !self.tiles.in_bounds(r, c) {
            return 0;
        }
        self.tile_items
            .get(&self.tile_index((r, c)))
            .copied()
            .unwrap_or(0)
    }

    /// Equip an owned item into its slot. Level gating is the caller's job.
    pub fn equip(&mut self, owner: EntityId, id: i64) -> Result<()> {
        let ty = self
            .item_type(id)
            .ok_or_else(|| Error::Logic(format!("no item {id}")))?;
        let slot = ty
            .slot()
            .ok_or_else(|| Error::Logic(format!("{ty:?} is not equipment")))?;
        let prev = self.slot(owner, slot);
        if prev != 0 && self.item_row(prev).is_some() {
            self.set_item(prev, icol::EQUIPPED, 0);
        }
        self.set_ent(owner, ecol::SLOT_BASE + slot.index(), id);
        self.set_item(id, icol::EQUIPPED, 1);
        Ok(())
    }

    // ── market ──────────────────────────────────────────────────

    pub fn add_listing(&mut self, seller: EntityId, item: i64, price: i64) -> i64 {
        let id = self.next_listing_id;
        self.next_listing_id += 1;
        let row = self.market.alloc();
        self.market.set_int(row, mcol::LISTING_ID, id);
        self.market.set_int(row, mcol::SELLER_ID, seller);
        self.market.set_int(row, mcol::ITEM_ID, item);
        self.market.set_int(row, mcol::PRICE, price);
        self.market
            .set_int(row, mcol::LISTED_TICK, self.current_tick as i64);
        self.listing_rows.insert(id, row);
        self.listing_by_item.insert(item, id);
        self.set_item(item, icol::LISTED, 1);
        id
    }

    pub fn remove_listing(&mut self, id: i64) -> Result<()> {
        let row = self
            .listing_rows
            .remove(&id)
            .ok_or_else(|| Error::Logic(format!("no listing {id}")))?;
        let item = self.market.int(row, mcol::ITEM_ID);
        self.listing_by_item.remove(&item);
        if self.item_row(item).is_some() {
            self.set_item(item, icol::LISTED, 0);
        }
        self.market.free(row)
    }

    pub fn listing(&self, id: i64) -> Option<Listing> {
        let row = *self.listing_rows.get(&id)?;
        Some(self.listing_at(row))
    }

    fn listing_at(&self, row: usize) -> Listing {
        let m = &self.market;
        Listing {
            id: m.int(row, mcol::LISTING_ID),
            seller: m.int(row, mcol::SELLER_ID),
            item: m.int(row, mcol::ITEM_ID),
            price: m.int(row, mcol::PRICE),
            listed_tick: m.int(row, mcol::LISTED_TICK),
        }
    }

    /// Live listings in ascending listing id.
    pub fn listings(&self) -> Vec<Listing> {
        let mut v: Vec<Listing> = self
            .market
            .live_rows()
            .map(|r| self.listing_at(r))
            .collect();
        v.sort_by_key(|l| l.id);
        v
    }

    pub fn listing_for_item(&self, item: i64) -> Option<i64> {
        self.listing_by_item.get(&item).copied()
    }

    // ── events ──────────────────────────────────────────────────

    /// Append an event stamped with the current tick.
    pub fn log_event(&mut self, rec: EventRecord) -> Result<i64> {
        if rec.tick != self.current_tick as i64 {
            return Err(Error::Logic(format!(
                "event tick {} does not match current tick {}",
                rec.tick, self.current_tick
            )));
        }
        Ok(self.events.append(rec))
    }

    // ── digest ──────────────────────────────────────────────────

    /// Digest over tick, every table's live rows in (table, row, column)
    /// order, the tile map and spawn positions.
    pub fn state_digest(&self) -> u64 {
        let mut h = Fnv64::new();
        h.write_u64(self.current_tick);
        self.entities.digest_into(&mut h);
        self.tiles.digest_into(&mut h);
        self.items.digest_into(&mut h);
        self.market.digest_into(&mut h);
        h.write_u64(self.events.digest());
        h.write_u64(self.spawn_pos.len() as u64);
        for (id, (r, c)) in &self.spawn_pos {
            h.write_i64(*id);
            h.write_i64(*r);
            h.write_i64(*c);
        }
        h.finish()
    }

    /// Set a raw entity cell. Test and tooling hook; bypasses game rules.
    pub fn poke_entity(&mut self, id: EntityId, col: usize, v: i64) -> Result<()> {
        let row = self
            .entity_row(id)
            .ok_or_else(|| Error::Query(format!("unknown entity {id}")))?;
        if col >= self.entities.num_columns() {
            return Err(Error::Query(format!("column index {col} out of range")));
        }
        self.entities.set_int(row, col, v);
        Ok(())
    }
}
