//! Per-tick game logic.
//!
//! [`tick`] applies the phases in a fixed order: NPC policy, moves, attacks,
//! gather/use, market (sells then buys), survival, resource respawn, deaths,
//! tick advance. Within a phase agents act in ascending id, then NPCs in
//! spawn order.

mod combat;
mod engine;
mod market;
mod npc;
mod profession;
mod spawn;
mod survival;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::types::{CombatStyle, Direction, EntityId};

pub use combat::{damage_formula, resolve_attack};
pub use engine::{tick, TickOutcome};
pub use market::{market_buy, market_sell};
pub use npc::npc_policy;
pub use profession::{gather, progression_check, use_item};
pub use spawn::{spawn_agents, spawn_npcs};
pub use survival::survival_step;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Action {
    #[default]
    Noop,
    Move(Option<Direction>),
    Attack {
        style: CombatStyle,
        target: EntityId,
    },
    Use(i64),
    Gather,
    Sell {
        item: i64,
        price: i64,
    },
    Buy(i64),
}

/// Why an action was turned into a no-op.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Invalid {
    /// The acting entity is dead or has no row.
    DeadActor,
    /// Move target is impassable or off the map.
    Blocked,
    OutOfRange,
    DeadTarget,
    SelfTarget,
    MissingAmmo,
    NoResource,
    InventoryFull,
    NotOwner,
    LevelGate,
    AlreadyEquipped,
    Equipped,
    Listed,
    BadPrice,
    NoListing,
    OwnListing,
    InsufficientGold,
    /// The action could not be decoded.
    Malformed,
}

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub(crate) type ActionResult<T = ()> = Result<T, Invalid>;
