//! Vectorized, index-aligned access to a group of entities.
//!
//! Members whose rows have been freed are dropped from the view, so every
//! accessor returns vectors of length [`GroupView::len`]. The number of ids
//! originally requested stays available through
//! [`GroupView::requested_len`] for predicates that reason about the whole
//! subject.

use super::events::EventRecord;
use super::schema::{entity as ecol, event as evcol, item as icol};
use super::state::GameState;
use crate::error::{Error, Result};
use crate::types::{EntityId, EventType, Skill, Slot};

#[derive(Debug, Clone)]
pub struct GroupView<'a> {
    gs: &'a GameState,
    requested: usize,
    ids: Vec<EntityId>,
    rows: Vec<usize>,
}

/// Build a view over `ids`. Every id must have been spawned this episode.
pub fn group_view<'a>(gs: &'a GameState, ids: &[EntityId]) -> Result<GroupView<'a>> {
    GroupView::new(gs, ids)
}

impl<'a> GroupView<'a> {
    pub fn new(gs: &'a GameState, ids: &[EntityId]) -> Result<Self> {
        let mut present = Vec::with_capacity(ids.len());
        let mut rows = Vec::with_capacity(ids.len());
        for &id in ids {
            if !gs.is_known(id) {
                return Err(Error::Query(format!("unknown entity id {id}")));
            }
            if let Some(r) = gs.entity_row(id) {
                present.push(id);
                rows.push(r);
            }
        }
        Ok(Self {
            gs,
            requested: ids.len(),
            ids: present,
            rows,
        })
    }

    pub fn state(&self) -> &'a GameState {
        self.gs
    }

    /// Members that still have a row.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Size of the id list the view was built from.
    pub fn requested_len(&self) -> usize {
        self.requested
    }

    pub fn entity_ids(&self) -> &[EntityId] {
        &self.ids
    }

    pub fn column(&self, col: usize) -> Vec<i64> {
        let t = self.gs.entity_table();
        self.rows.iter().map(|&r| t.int(r, col)).collect()
    }

    pub fn row(&self) -> Vec<i64> {
        self.column(ecol::ROW)
    }

    pub fn col(&self) -> Vec<i64> {
        self.column(ecol::COL)
    }

    pub fn health(&self) -> Vec<i64> {
        self.column(ecol::HEALTH)
    }

    pub fn food(&self) -> Vec<i64> {
        self.column(ecol::FOOD)
    }

    pub fn water(&self) -> Vec<i64> {
        self.column(ecol::WATER)
    }

    pub fn gold(&self) -> Vec<i64> {
        self.column(ecol::GOLD)
    }

    pub fn level(&self, skill: Skill) -> Vec<i64> {
        self.column(ecol::LEVEL_BASE + skill.index())
    }

    pub fn slot(&self, slot: Slot) -> Vec<i64> {
        self.column(ecol::SLOT_BASE + slot.index())
    }

    /// Number of members with positive health.
    pub fn alive_count(&self) -> usize {
        let t = self.gs.entity_table();
        self.rows
            .iter()
            .filter(|&&r| t.int(r, ecol::HEALTH) > 0)
            .count()
    }

    /// Items owned by any member, ascending item id.
    pub fn items(&self) -> ItemView<'a> {
        let mut ids: Vec<i64> = self
            .ids
            .iter()
            .flat_map(|&id| self.gs.inventory(id).iter().copied())
            .collect();
        ids.sort_unstable();
        let rows = ids.iter().filter_map(|&i| self.gs.item_row(i)).collect();
        ItemView { gs: self.gs, rows }
    }

    /// Events whose actor is a member, in log order.
    pub fn events(&self) -> EventView<'a> {
        let mut rows: Vec<u32> = self
            .ids
            .iter()
            .flat_map(|&id| self.gs.events().rows_for_actor(id).iter().copied())
            .collect();
        rows.sort_unstable();
        EventView { gs: self.gs, rows }
    }
}

#[derive(Debug, Clone)]
pub struct ItemView<'a> {
    gs: &'a GameState,
    rows: Vec<usize>,
}

impl ItemView<'_> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, col: usize) -> Vec<i64> {
        let t = self.gs.item_table();
        self.rows.iter().map(|&r| t.int(r, col)).collect()
    }

    pub fn id(&self) -> Vec<i64> {
        self.column(icol::ID)
    }

    pub fn type_id(&self) -> Vec<i64> {
        self.column(icol::TYPE_ID)
    }

    pub fn level(&self) -> Vec<i64> {
        self.column(icol::LEVEL)
    }

    pub fn owner_id(&self) -> Vec<i64> {
        self.column(icol::OWNER_ID)
    }

    pub fn equipped(&self) -> Vec<i64> {
        self.column(icol::EQUIPPED)
    }

    pub fn listed(&self) -> Vec<i64> {
        self.column(icol::LISTED)
    }

    pub fn quantity(&self) -> Vec<i64> {
        self.column(icol::QUANTITY)
    }
}

#[derive(Debug, Clone)]
pub struct EventView<'a> {
    gs: &'a GameState,
    rows: Vec<u32>,
}

impl EventView<'_> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn all(&self) -> Vec<EventRecord> {
        self.rows
            .iter()
            .map(|&r| self.gs.events().get(r as usize))
            .collect()
    }

    /// Count of events of one type without materializing records.
    pub fn count(&self, kind: EventType) -> usize {
        let t = self.gs.events().table();
        self.rows
            .iter()
            .filter(|&&r| t.int(r as usize, evcol::EVENT_TYPE) == kind.code())
            .count()
    }

    pub fn of_type(&self, kind: EventType) -> Vec<EventRecord> {
        let t = self.gs.events().table();
        self.rows
            .iter()
            .filter(|&&r| t.int(r as usize, evcol::EVENT_TYPE) == kind.code())
            .map(|&r| self.gs.events().get(r as usize))
            .collect()
    }

    /// Records of `kind` matching every `(attribute, value)` equality filter.
    pub fn query(&self, kind: EventType, filters: &[(&str, i64)]) -> Result<Vec<EventRecord>> {
        for (name, _) in filters {
            if !evcol::FILTERABLE.contains(name) {
                return Err(Error::Query(format!("unknown event attribute `{name}`")));
            }
        }
        let mut out = Vec::new();
        for rec in self.of_type(kind) {
            let mut keep = true;
            for (name, v) in filters {
                if rec.attribute(name)? != *v {
                    keep = false;
                    break;
                }
            }
            if keep {
                out.push(rec);
            }
        }
        Ok(out)
    }
}

/// Events of `kind` acted by members of `view`, filtered by attribute equality.
pub fn event_query(
    view: &GroupView<'_>,
    kind: EventType,
    filters: &[(&str, i64)],
) -> Result<Vec<EventRecord>> {
    view.events().query(kind, filters)
}
