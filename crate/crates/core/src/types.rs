//! Game vocabulary: entity ids, skills, combat styles, items, events.

use serde::{Deserialize, Serialize};

/// Entity id. Agents are `1..=n`, NPCs are negative.
pub type EntityId = i64;

macro_rules! code_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident = $code:expr => $label:expr),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $label)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn code(self) -> i64 {
                match self { $($name::$variant => $code),+ }
            }

            pub fn from_code(code: i64) -> Option<Self> {
                match code { $($code => Some($name::$variant),)+ _ => None }
            }

            pub fn label(self) -> &'static str {
                match self { $($name::$variant => $label),+ }
            }

            pub fn from_label(s: &str) -> Option<Self> {
                match s { $($label => Some($name::$variant),)+ _ => None }
            }
        }
    };
}

code_enum!(
    /// The kinds of records in the event log.
    EventType {
        ScoreHit = 1 => "SCORE_HIT",
        PlayerKill = 2 => "PLAYER_KILL",
        HarvestItem = 3 => "HARVEST_ITEM",
        ConsumeItem = 4 => "CONSUME_ITEM",
        EquipItem = 5 => "EQUIP_ITEM",
        LevelUp = 6 => "LEVEL_UP",
        EatFood = 7 => "EAT_FOOD",
        DrinkWater = 8 => "DRINK_WATER",
        ListItem = 9 => "LIST_ITEM",
        BuyItem = 10 => "BUY_ITEM",
        EarnGold = 11 => "EARN_GOLD",
    }
);

code_enum!(
    CombatStyle {
        Melee = 1 => "Melee",
        Range = 2 => "Range",
        Mage = 3 => "Mage",
    }
);

impl CombatStyle {
    /// melee > range > mage > melee
    pub fn beats(self, other: CombatStyle) -> bool {
        matches!(
            (self, other),
            (CombatStyle::Melee, CombatStyle::Range)
                | (CombatStyle::Range, CombatStyle::Mage)
                | (CombatStyle::Mage, CombatStyle::Melee)
        )
    }

    pub fn skill(self) -> Skill {
        match self {
            CombatStyle::Melee => Skill::Melee,
            CombatStyle::Range => Skill::Range,
            CombatStyle::Mage => Skill::Mage,
        }
    }

    pub fn weapon(self) -> ItemType {
        match self {
            CombatStyle::Melee => ItemType::Spear,
            CombatStyle::Range => ItemType::Bow,
            CombatStyle::Mage => ItemType::Wand,
        }
    }

    pub fn ammo(self) -> ItemType {
        match self {
            CombatStyle::Melee => ItemType::Whetstone,
            CombatStyle::Range => ItemType::Arrows,
            CombatStyle::Mage => ItemType::Runes,
        }
    }
}

code_enum!(
    /// Trainable skills: three combat styles and five professions.
    Skill {
        Melee = 1 => "Melee",
        Range = 2 => "Range",
        Mage = 3 => "Mage",
        Herbalism = 4 => "Herbalism",
        Fishing = 5 => "Fishing",
        Prospecting = 6 => "Prospecting",
        Carving = 7 => "Carving",
        Alchemy = 8 => "Alchemy",
    }
);

impl Skill {
    pub fn index(self) -> usize {
        (self.code() - 1) as usize
    }
}

code_enum!(
    /// The 16 item types.
    ItemType {
        Ration = 1 => "Ration",
        Hat = 2 => "Hat",
        Top = 3 => "Top",
        Bottom = 4 => "Bottom",
        Spear = 5 => "Spear",
        Bow = 6 => "Bow",
        Wand = 7 => "Wand",
        Rod = 8 => "Rod",
        Pickaxe = 9 => "Pickaxe",
        Axe = 10 => "Axe",
        Chisel = 11 => "Chisel",
        Sickle = 12 => "Sickle",
        Whetstone = 13 => "Whetstone",
        Arrows = 14 => "Arrows",
        Runes = 15 => "Runes",
        Potion = 16 => "Potion",
    }
);

/// Equipment slots in column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Hat,
    Top,
    Bottom,
    Weapon,
    Ammo,
}

impl Slot {
    pub const ALL: [Slot; 5] = [Slot::Hat, Slot::Top, Slot::Bottom, Slot::Weapon, Slot::Ammo];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl ItemType {
    pub fn slot(self) -> Option<Slot> {
        use ItemType::*;
        match self {
            Hat => Some(Slot::Hat),
            Top => Some(Slot::Top),
            Bottom => Some(Slot::Bottom),
            Spear | Bow | Wand | Rod | Pickaxe | Axe | Chisel | Sickle => Some(Slot::Weapon),
            Whetstone | Arrows | Runes => Some(Slot::Ammo),
            Ration | Potion => None,
        }
    }

    pub fn is_ammo(self) -> bool {
        matches!(
            self,
            ItemType::Whetstone | ItemType::Arrows | ItemType::Runes
        )
    }

    pub fn is_armor(self) -> bool {
        matches!(self, ItemType::Hat | ItemType::Top | ItemType::Bottom)
    }

    /// Skill whose level gates equipping this item. Armor is gated by the
    /// best combat skill and has no single governing skill here.
    pub fn governing_skill(self) -> Option<Skill> {
        use ItemType::*;
        match self {
            Spear | Whetstone => Some(Skill::Melee),
            Bow | Arrows => Some(Skill::Range),
            Wand | Runes => Some(Skill::Mage),
            Rod => Some(Skill::Fishing),
            Pickaxe => Some(Skill::Prospecting),
            Axe => Some(Skill::Carving),
            Chisel => Some(Skill::Alchemy),
            Sickle => Some(Skill::Herbalism),
            Hat | Top | Bottom | Ration | Potion => None,
        }
    }

    /// Tool that boosts experience for a profession.
    pub fn tool_for(skill: Skill) -> Option<ItemType> {
        match skill {
            Skill::Fishing => Some(ItemType::Rod),
            Skill::Prospecting => Some(ItemType::Pickaxe),
            Skill::Carving => Some(ItemType::Axe),
            Skill::Alchemy => Some(ItemType::Chisel),
            Skill::Herbalism => Some(ItemType::Sickle),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityKind {
    Agent = 1,
    Npc = 2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Disposition {
    None = 0,
    Passive = 1,
    Neutral = 2,
    Hostile = 3,
}

impl Disposition {
    pub fn from_code(c: i64) -> Self {
        match c {
            1 => Disposition::Passive,
            2 => Disposition::Neutral,
            3 => Disposition::Hostile,
            _ => Disposition::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    North,
    South,
    East,
    West,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::South,
        Direction::East,
        Direction::West,
    ];

    pub fn delta(self) -> (i64, i64) {
        match self {
            Direction::North => (-1, 0),
            Direction::South => (1, 0),
            Direction::East => (0, 1),
            Direction::West => (0, -1),
        }
    }
}

/// Chebyshev (l-inf) distance.
#[inline]
pub fn linf(a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}
