//! Columnar game-state storage.
//!
//! All game state lives in flat tables (entities, items, market listings,
//! events) plus the tile map. Predicates and observations read it through
//! [`GroupView`] and direct table access; the engine mutates it through the
//! helpers on [`GameState`].

pub mod digest;
pub mod events;
pub mod schema;
pub mod state;
pub mod table;
pub mod view;

pub use events::{EventLog, EventRecord};
pub use state::{GameState, Listing};
pub use table::{CellKind, ColumnTable, RowHandle};
pub use view::{event_query, group_view, EventView, GroupView, ItemView};
