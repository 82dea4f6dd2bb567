//! Simulation constants.
//!
//! Every tunable lives here as a named key. Files are TOML; missing keys take
//! the defaults below, unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::datastore::digest::Fnv64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    // map
    /// Interior side length; the full map adds `border` void tiles per side.
    pub map_size: usize,
    pub border: usize,
    pub water_fraction: f64,
    pub stone_fraction: f64,
    pub forest_fraction: f64,
    /// Target share of passable tiles for each of herb, fish, ore, tree, crystal.
    pub resource_density: f64,
    pub respawn_delay: u16,

    // population
    pub max_agents: usize,
    pub num_agents: usize,
    pub num_npcs: usize,
    pub npc_passive_ratio: f64,
    pub npc_neutral_ratio: f64,

    // episode
    pub horizon: u64,
    pub vision_radius: i64,
    pub mortality: bool,

    // survival
    pub survival_decay_interval: u64,
    pub starvation_damage: i64,
    pub dehydration_damage: i64,
    pub regen_amount: i64,
    pub regen_threshold: i64,

    // combat
    pub melee_range: i64,
    pub ranged_range: i64,
    pub damage_base: i64,
    pub damage_per_level: i64,
    pub weapon_level_multiplier: i64,
    pub triangle_multiplier: f64,
    pub hostile_aggro_range: i64,
    pub neutral_retaliate_range: i64,

    // items and progression
    pub inventory_capacity: usize,
    pub ammo_stack: i64,
    pub ration_food: i64,
    pub potion_health: i64,
    pub xp_per_level: i64,
    pub max_level: i64,

    // observation
    pub obs_entities: usize,
    pub obs_listings: usize,
    pub obs_tasks: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            map_size: 128,
            border: 6,
            water_fraction: 0.15,
            stone_fraction: 0.10,
            forest_fraction: 0.10,
            resource_density: 0.01,
            respawn_delay: 30,
            max_agents: 128,
            num_agents: 128,
            num_npcs: 64,
            npc_passive_ratio: 0.5,
            npc_neutral_ratio: 0.3,
            horizon: 1024,
            vision_radius: 7,
            mortality: true,
            survival_decay_interval: 2,
            starvation_damage: 5,
            dehydration_damage: 5,
            regen_amount: 1,
            regen_threshold: 50,
            melee_range: 1,
            ranged_range: 3,
            damage_base: 5,
            damage_per_level: 2,
            weapon_level_multiplier: 2,
            triangle_multiplier: 1.5,
            hostile_aggro_range: 4,
            neutral_retaliate_range: 3,
            inventory_capacity: 12,
            ammo_stack: 99,
            ration_food: 50,
            potion_health: 50,
            xp_per_level: 10,
            max_level: 10,
            obs_entities: 64,
            obs_listings: 32,
            obs_tasks: 4,
        }
    }
}

impl Config {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Full side length of the generated map including the void border.
    pub fn world_size(&self) -> usize {
        self.map_size + 2 * self.border
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.world_size() < 32 {
            return bad("map too small: full side length must be at least 32");
        }
        if self.border == 0 {
            return bad("border must be at least 1");
        }
        if self.num_agents > self.max_agents {
            return bad("num_agents exceeds max_agents");
        }
        for (name, f) in [
            ("water_fraction", self.water_fraction),
            ("stone_fraction", self.stone_fraction),
            ("forest_fraction", self.forest_fraction),
            ("resource_density", self.resource_density),
            ("npc_passive_ratio", self.npc_passive_ratio),
            ("npc_neutral_ratio", self.npc_neutral_ratio),
        ] {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::Config(format!("{name} must lie in [0, 1]")));
            }
        }
        if self.water_fraction + self.stone_fraction >= 0.9 {
            return bad("water and stone leave too little passable land");
        }
        if self.npc_passive_ratio + self.npc_neutral_ratio > 1.0 {
            return bad("npc disposition ratios exceed 1");
        }
        if self.survival_decay_interval == 0 || self.xp_per_level <= 0 || self.max_level < 1 {
            return bad("survival_decay_interval, xp_per_level and max_level must be positive");
        }
        if self.vision_radius < 1 || self.inventory_capacity == 0 || self.ammo_stack < 1 {
            return bad("vision_radius, inventory_capacity and ammo_stack must be positive");
        }
        if self.horizon == 0 {
            return bad("horizon must be positive");
        }
        Ok(())
    }

    /// Stable digest of every key, used to tag replays.
    pub fn digest(&self) -> u64 {
        let mut h = Fnv64::new();
        h.write_bytes(
            serde_json::to_string(self)
                .expect("config serializes")
                .as_bytes(),
        );
        h.finish()
    }
}
