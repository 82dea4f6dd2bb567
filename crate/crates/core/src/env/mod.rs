//! The parallel multi-agent environment: reset, step, observations.
//!
//! ```
//! use std::collections::BTreeMap;
//! use gridmmo::{env::Env, Config};
//!
//! let cfg = Config { num_agents: 4, num_npcs: 2, horizon: 3, ..Config::default() };
//! let mut env = Env::new(cfg).unwrap();
//! let obs = env.reset(1, &[]).unwrap();
//! assert_eq!(obs.len(), 4);
//! while !env.is_done() {
//!     env.step(&BTreeMap::new()).unwrap();
//! }
//! ```

mod action;
mod obs;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

pub use action::{decode_action, encode_action, ACTION_WIDTH};
pub use obs::{
    market_rows, observe, ActionKindSpec, ActionSchema, BlockSpec, EntityObs, ItemObs, ListingObs,
    ObsLayout, ObsSchema, Observation, Row, SelfObs, TileObs, SCHEMA_VERSION,
};

use crate::config::Config;
use crate::datastore::GameState;
use crate::error::{Error, Result};
use crate::sim::{self, Action, Invalid};
use crate::tasks::{evaluate_tasks, Registry, Task, TaskSpec};
use crate::types::EntityId;
use crate::worldgen::TileMap;

/// Per-agent extras returned by [`Env::step`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StepInfo {
    /// Set when the agent's action was turned into a no-op.
    pub invalid: Option<Invalid>,
    /// Indices of the agent's tasks that completed this tick.
    pub completed: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepResult {
    pub obs: BTreeMap<EntityId, Observation>,
    pub rewards: BTreeMap<EntityId, f64>,
    pub terminated: BTreeMap<EntityId, bool>,
    pub info: BTreeMap<EntityId, StepInfo>,
    /// Tasks whose predicate failed this tick.
    pub task_errors: Vec<(usize, String)>,
    /// State digest after the tick.
    pub digest: u64,
    /// True once the episode has ended (horizon or no agents left).
    pub done: bool,
}

/// Flat-buffer step output for foreign callers: rows follow `agents`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlatStep {
    pub agents: Vec<EntityId>,
    /// `agents.len() * layout.len()` values.
    pub obs: Vec<f32>,
    pub rewards: Vec<f32>,
    pub terminated: Vec<u8>,
    /// 0 for a valid action, otherwise 1.
    pub invalid: Vec<u8>,
    pub done: bool,
}

pub struct Env {
    config: Arc<Config>,
    layout: ObsLayout,
    registry: Registry,
    schema_path: Option<PathBuf>,
    gs: Option<GameState>,
    tasks: Vec<Task>,
    done: bool,
}

impl Env {
    pub fn new(config: Config) -> Result<Self> {
        config.validate()?;
        let layout = ObsLayout::new(&config);
        Ok(Self {
            config: Arc::new(config),
            layout,
            registry: Registry::default(),
            schema_path: None,
            gs: None,
            tasks: Vec::new(),
            done: false,
        })
    }

    /// Use `registry` to resolve task predicates at reset.
    pub fn with_registry(mut self, registry: Registry) -> Self {
        self.registry = registry;
        self
    }

    /// Write the observation schema as JSON to `path` on every reset.
    pub fn with_schema_path(mut self, path: impl AsRef<Path>) -> Self {
        self.schema_path = Some(path.as_ref().to_path_buf());
        self
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn layout(&self) -> &ObsLayout {
        &self.layout
    }

    pub fn schema(&self) -> ObsSchema {
        self.layout.schema()
    }

    pub fn schema_json(&self) -> String {
        serde_json::to_string_pretty(&self.schema()).expect("schema serializes")
    }

    /// The live game state. Panics before the first reset.
    pub fn state(&self) -> &GameState {
        self.gs.as_ref().expect("reset before reading state")
    }

    /// Mutable access for scenario setup between steps. Changes made here are
    /// not recorded anywhere, so replays of such episodes won't verify.
    pub fn state_mut(&mut self) -> &mut GameState {
        self.gs.as_mut().expect("env has been reset")
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Generate a map, spawn agents and NPCs, install tasks, observe tick 0.
    pub fn reset(
        &mut self,
        seed: u64,
        tasks: &[TaskSpec],
    ) -> Result<BTreeMap<EntityId, Observation>> {
        let gs = GameState::new((*self.config).clone(), seed)?;
        self.reset_with_state(gs, tasks)
    }

    /// Like [`Env::reset`] but on a previously exported map.
    pub fn reset_with_map(
        &mut self,
        seed: u64,
        map: TileMap,
        tasks: &[TaskSpec],
    ) -> Result<BTreeMap<EntityId, Observation>> {
        if map.size() != self.config.world_size() {
            return Err(Error::Config(format!(
                "map side {} does not match config side {}",
                map.size(),
                self.config.world_size()
            )));
        }
        let gs = GameState::with_map((*self.config).clone(), seed, map);
        self.reset_with_state(gs, tasks)
    }

    fn reset_with_state(
        &mut self,
        mut gs: GameState,
        tasks: &[TaskSpec],
    ) -> Result<BTreeMap<EntityId, Observation>> {
        let tasks = self.registry.build_all(tasks)?;
        sim::spawn_agents(&mut gs, self.config.num_agents)?;
        sim::spawn_npcs(&mut gs, self.config.num_npcs)?;
        for t in &tasks {
            for &id in t.subject().iter().chain(t.assignee()) {
                if !gs.is_known(id) {
                    return Err(Error::Config(format!(
                        "task references unknown entity {id}"
                    )));
                }
            }
        }
        if let Some(path) = &self.schema_path {
            std::fs::write(path, self.schema_json())?;
        }
        self.gs = Some(gs);
        self.tasks = tasks;
        self.done = false;
        let agents = self.state().agent_ids().to_vec();
        Ok(self.observe_all(&agents))
    }

    fn task_progress(&self, agent: EntityId) -> Vec<f32> {
        self.tasks
            .iter()
            .filter(|t| t.assignee().contains(&agent))
            .take(self.layout.tasks)
            .map(|t| t.progress() as f32)
            .collect()
    }

    /// Observation of one agent; it must still have a row.
    pub fn observe(&self, agent: EntityId) -> Observation {
        let gs = self.state();
        let market = market_rows(gs, self.layout.listings);
        observe(gs, &self.layout, agent, &market, &self.task_progress(agent))
    }

    fn observe_all(&self, agents: &[EntityId]) -> BTreeMap<EntityId, Observation> {
        let gs = self.state();
        let market = market_rows(gs, self.layout.listings);
        agents
            .iter()
            .map(|&a| {
                (
                    a,
                    observe(gs, &self.layout, a, &market, &self.task_progress(a)),
                )
            })
            .collect()
    }

    /// Advance one tick. Agents without an entry in `actions` do nothing.
    pub fn step(&mut self, actions: &BTreeMap<EntityId, Action>) -> Result<StepResult> {
        self.step_inner(actions, &BTreeMap::new())
    }

    /// Step with integer-encoded actions; undecodable ones become flagged no-ops.
    pub fn step_encoded(
        &mut self,
        actions: &BTreeMap<EntityId, [i64; ACTION_WIDTH]>,
    ) -> Result<StepResult> {
        let mut decoded = BTreeMap::new();
        let mut malformed = BTreeMap::new();
        for (&id, v) in actions {
            match decode_action(v) {
                Ok(a) => {
                    decoded.insert(id, a);
                }
                Err(e) => {
                    malformed.insert(id, e);
                }
            }
        }
        self.step_inner(&decoded, &malformed)
    }

    fn step_inner(
        &mut self,
        actions: &BTreeMap<EntityId, Action>,
        malformed: &BTreeMap<EntityId, Invalid>,
    ) -> Result<StepResult> {
        if self.gs.is_none() {
            return Err(Error::Lifecycle("step before reset".into()));
        }
        if self.done {
            return Err(Error::Lifecycle("step after the episode ended".into()));
        }
        let gs = self.gs.as_mut().unwrap();
        let live: Vec<EntityId> = gs
            .agent_ids()
            .iter()
            .copied()
            .filter(|&a| gs.is_alive(a))
            .collect();
        let outcome = sim::tick(gs, actions);
        let rewards = evaluate_tasks(gs, &mut self.tasks);
        let gs = self.gs.as_ref().unwrap();

        let horizon = gs.current_tick() >= self.config.horizon;
        let any_alive = gs.agent_ids().iter().any(|&a| gs.is_alive(a));
        self.done = horizon || !any_alive;

        let mut res = StepResult {
            obs: self.observe_all(&live),
            digest: gs.state_digest(),
            done: self.done,
            task_errors: rewards.errors.clone(),
            ..Default::default()
        };
        for &a in &live {
            res.rewards
                .insert(a, rewards.rewards.get(&a).copied().unwrap_or(0.0));
            res.terminated.insert(a, self.done || !gs.is_alive(a));
            let invalid = outcome
                .invalid
                .get(&a)
                .or_else(|| malformed.get(&a))
                .copied();
            let completed = rewards
                .completed
                .iter()
                .copied()
                .filter(|&i| self.tasks[i].assignee().contains(&a))
                .collect();
            res.info.insert(a, StepInfo { invalid, completed });
        }
        Ok(res)
    }

    /// Flat-buffer step. `actions` holds rows of `[agent_id, kind, a, b, c]`.
    pub fn step_flat(&mut self, actions: &[i64]) -> Result<FlatStep> {
        if !actions.len().is_multiple_of(ACTION_WIDTH + 1) {
            return Err(Error::Format(format!(
                "flat action buffer length {} is not a multiple of {}",
                actions.len(),
                ACTION_WIDTH + 1
            )));
        }
        let map = actions
            .chunks_exact(ACTION_WIDTH + 1)
            .map(|r| (r[0], [r[1], r[2], r[3], r[4]]))
            .collect();
        let res = self.step_encoded(&map)?;
        let mut flat = FlatStep {
            done: res.done,
            ..Default::default()
        };
        for (&a, o) in &res.obs {
            flat.agents.push(a);
            flat.obs.extend(self.layout.encode(o));
            flat.rewards.push(res.rewards[&a] as f32);
            flat.terminated.push(res.terminated[&a] as u8);
            flat.invalid.push(res.info[&a].invalid.is_some() as u8);
        }
        Ok(flat)
    }

    /// Flat observations of every live agent after a reset, rows follow the returned ids.
    pub fn observe_flat(&self) -> (Vec<EntityId>, Vec<f32>) {
        let gs = self.state();
        let live: Vec<EntityId> = gs
            .agent_ids()
            .iter()
            .copied()
            .filter(|&a| gs.is_alive(a))
            .collect();
        let all = self.observe_all(&live);
        let mut buf = Vec::with_capacity(live.len() * self.layout.len());
        for o in all.values() {
            buf.extend(self.layout.encode(o));
        }
        (live, buf)
    }
}
