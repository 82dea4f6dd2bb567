use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::builtins::builtin;
use super::predicate::{Params, Predicate, PredicateDef};
use crate::datastore::{GameState, GroupView};
use crate::error::{Error, Result};
use crate::types::EntityId;

/// A predicate bound to a subject group, rewarding its assignees.
#[derive(Debug, Clone)]
pub struct Task {
    predicate: Predicate,
    subject: Vec<EntityId>,
    assignee: Vec<EntityId>,
    multiplier: f64,
    best: f64,
    completed: bool,
}

impl Task {
    /// Assignees default to the subject.
    pub fn new(predicate: Predicate, subject: Vec<EntityId>) -> Self {
        let assignee = subject.clone();
        Self {
            predicate,
            subject,
            assignee,
            multiplier: 1.0,
            best: 0.0,
            completed: false,
        }
    }

    pub fn with_assignee(mut self, assignee: Vec<EntityId>) -> Self {
        self.assignee = assignee;
        self
    }

    pub fn with_multiplier(mut self, multiplier: f64) -> Self {
        self.multiplier = multiplier;
        self
    }

    pub fn predicate(&self) -> &Predicate {
        &self.predicate
    }

    pub fn subject(&self) -> &[EntityId] {
        &self.subject
    }

    pub fn assignee(&self) -> &[EntityId] {
        &self.assignee
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    /// Best progress seen so far this episode.
    pub fn progress(&self) -> f64 {
        self.best
    }

    pub fn completed(&self) -> bool {
        self.completed
    }

    /// Current (not best) predicate value over the subject.
    pub fn evaluate(&self, gs: &GameState) -> Result<f64> {
        let view = GroupView::new(gs, &self.subject)?;
        self.predicate.evaluate(gs, &view)
    }

    /// Fold in a new progress value and return the per-assignee reward.
    pub fn update(&mut self, progress: f64) -> f64 {
        let delta = (progress - self.best).max(0.0);
        self.best = self.best.max(progress);
        if progress >= 1.0 {
            self.completed = true;
        }
        self.multiplier * delta
    }

    pub fn to_spec(&self) -> TaskSpec {
        TaskSpec {
            predicate: self.predicate.name().to_string(),
            params: self.predicate.params().clone(),
            subject: self.subject.clone(),
            assignee: self.assignee.clone(),
            multiplier: self.multiplier,
        }
    }
}

/// Rewards and bookkeeping from one [`evaluate_tasks`] pass.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TaskRewards {
    /// Summed reward per assignee.
    pub rewards: BTreeMap<EntityId, f64>,
    /// Indices of tasks that completed during this pass.
    pub completed: Vec<usize>,
    /// Tasks whose predicate failed, with the error message. They earn nothing.
    pub errors: Vec<(usize, String)>,
}

/// Evaluate every task against the current state and emit delta rewards.
pub fn evaluate_tasks(gs: &GameState, tasks: &mut [Task]) -> TaskRewards {
    let mut out = TaskRewards::default();
    for (i, task) in tasks.iter_mut().enumerate() {
        let was_complete = task.completed;
        let reward = match task.evaluate(gs) {
            Ok(p) => task.update(p),
            Err(e) => {
                out.errors.push((i, e.to_string()));
                0.0
            }
        };
        for &a in &task.assignee {
            *out.rewards.entry(a).or_insert(0.0) += reward;
        }
        if task.completed && !was_complete {
            out.completed.push(i);
        }
    }
    out
}

/// Declarative form of a task, as stored in task files and replays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub predicate: String,
    #[serde(default)]
    pub params: Params,
    pub subject: Vec<EntityId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assignee: Vec<EntityId>,
    #[serde(default = "one")]
    pub multiplier: f64,
}

fn one() -> f64 {
    1.0
}

/// Predicate constructors by name. Starts with the built-in library.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    custom: BTreeMap<String, PredicateDef>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a custom predicate; it shadows a built-in of the same name.
    pub fn register(&mut self, def: PredicateDef) {
        self.custom.insert(def.name().to_string(), def);
    }

    pub fn get(&self, name: &str) -> Option<PredicateDef> {
        self.custom.get(name).cloned().or_else(|| builtin(name))
    }

    pub fn build(&self, spec: &TaskSpec) -> Result<Task> {
        let def = self
            .get(&spec.predicate)
            .ok_or_else(|| Error::Config(format!("unknown predicate `{}`", spec.predicate)))?;
        if spec.subject.is_empty() {
            return Err(Error::Config(format!(
                "task `{}` has an empty subject",
                spec.predicate
            )));
        }
        if !spec.multiplier.is_finite() {
            return Err(Error::Config("task multiplier must be finite".into()));
        }
        let mut task = Task::new(def.instantiate(spec.params.clone())?, spec.subject.clone())
            .with_multiplier(spec.multiplier);
        if !spec.assignee.is_empty() {
            task = task.with_assignee(spec.assignee.clone());
        }
        Ok(task)
    }

    pub fn build_all(&self, specs: &[TaskSpec]) -> Result<Vec<Task>> {
        specs.iter().map(|s| self.build(s)).collect()
    }
}

/// Parse a JSON task file: an array of [`TaskSpec`].
pub fn parse_task_file(text: &str) -> Result<Vec<TaskSpec>> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("task file: {e}")))
}

pub fn load_task_file(path: impl AsRef<Path>) -> Result<Vec<TaskSpec>> {
    parse_task_file(&std::fs::read_to_string(path)?)
}

pub fn task_file_string(specs: &[TaskSpec]) -> String {
    serde_json::to_string_pretty(specs).expect("task specs serialize")
}

/// One task per agent, each agent its own subject.
pub fn per_agent(def: &PredicateDef, params: &Params, agents: &[EntityId]) -> Result<Vec<Task>> {
    agents
        .iter()
        .map(|&a| Ok(Task::new(def.instantiate(params.clone())?, vec![a])))
        .collect()
}
