//! Column layouts of the game-state tables.

use super::table::CellKind::{self, Int};

pub mod entity {
    use super::*;

    pub const ID: usize = 0;
    pub const KIND: usize = 1;
    pub const DISPOSITION: usize = 2;
    pub const ROW: usize = 3;
    pub const COL: usize = 4;
    pub const HEALTH: usize = 5;
    pub const FOOD: usize = 6;
    pub const WATER: usize = 7;
    pub const GOLD: usize = 8;
    /// Eight skill levels starting here, in `Skill` code order.
    pub const LEVEL_BASE: usize = 9;
    /// Eight experience counters starting here, in `Skill` code order.
    pub const XP_BASE: usize = 17;
    /// Five equipment slots (item ids) starting here, in `Slot` order.
    pub const SLOT_BASE: usize = 25;
    pub const ALIVE: usize = 30;
    pub const LAST_STYLE: usize = 31;
    pub const LAST_ATTACKER: usize = 32;
    pub const KILLED_BY: usize = 33;
    pub const DIED_TICK: usize = 34;

    pub const SCHEMA: &[(&str, CellKind)] = &[
        ("id", Int),
        ("kind", Int),
        ("disposition", Int),
        ("row", Int),
        ("col", Int),
        ("health", Int),
        ("food", Int),
        ("water", Int),
        ("gold", Int),
        ("melee_level", Int),
        ("range_level", Int),
        ("mage_level", Int),
        ("herbalism_level", Int),
        ("fishing_level", Int),
        ("prospecting_level", Int),
        ("carving_level", Int),
        ("alchemy_level", Int),
        ("melee_exp", Int),
        ("range_exp", Int),
        ("mage_exp", Int),
        ("herbalism_exp", Int),
        ("fishing_exp", Int),
        ("prospecting_exp", Int),
        ("carving_exp", Int),
        ("alchemy_exp", Int),
        ("hat", Int),
        ("top", Int),
        ("bottom", Int),
        ("weapon", Int),
        ("ammo", Int),
        ("alive", Int),
        ("last_style", Int),
        ("last_attacker", Int),
        ("killed_by", Int),
        ("died_tick", Int),
    ];
}

pub mod item {
    use super::*;

    pub const ID: usize = 0;
    pub const TYPE_ID: usize = 1;
    pub const LEVEL: usize = 2;
    /// 0 when the item lies on a tile.
    pub const OWNER_ID: usize = 3;
    pub const EQUIPPED: usize = 4;
    pub const LISTED: usize = 5;
    pub const QUANTITY: usize = 6;
    /// Tile position when dropped; meaningful only when owner is 0.
    pub const TILE_ROW: usize = 7;
    pub const TILE_COL: usize = 8;

    pub const SCHEMA: &[(&str, CellKind)] = &[
        ("id", Int),
        ("type_id", Int),
        ("level", Int),
        ("owner_id", Int),
        ("equipped", Int),
        ("listed", Int),
        ("quantity", Int),
        ("tile_row", Int),
        ("tile_col", Int),
    ];
}

pub mod market {
    use super::*;

    pub const LISTING_ID: usize = 0;
    pub const SELLER_ID: usize = 1;
    pub const ITEM_ID: usize = 2;
    pub const PRICE: usize = 3;
    pub const LISTED_TICK: usize = 4;

    pub const SCHEMA: &[(&str, CellKind)] = &[
        ("listing_id", Int),
        ("seller_id", Int),
        ("item_id", Int),
        ("price", Int),
        ("listed_tick", Int),
    ];
}

pub mod event {
    use super::*;

    pub const ID: usize = 0;
    pub const TICK: usize = 1;
    pub const EVENT_TYPE: usize = 2;
    pub const ACTOR: usize = 3;
    pub const COMBAT_STYLE: usize = 4;
    pub const TARGET: usize = 5;
    pub const ITEM_TYPE: usize = 6;
    pub const ITEM_LEVEL: usize = 7;
    pub const PRICE: usize = 8;
    pub const GOLD: usize = 9;
    pub const DAMAGE: usize = 10;
    pub const SKILL: usize = 11;
    pub const LEVEL: usize = 12;

    pub const SCHEMA: &[(&str, CellKind)] = &[
        ("id", Int),
        ("tick", Int),
        ("event_type", Int),
        ("actor", Int),
        ("combat_style", Int),
        ("target", Int),
        ("item_type", Int),
        ("item_level", Int),
        ("price", Int),
        ("gold", Int),
        ("damage", Int),
        ("skill", Int),
        ("level", Int),
    ];

    /// Attribute names accepted as event query filters.
    pub const FILTERABLE: &[&str] = &[
        "combat_style",
        "target",
        "item_type",
        "item_level",
        "price",
        "gold",
        "damage",
        "skill",
        "level",
    ];
}
