//! Predicates, tasks and per-tick rewards.
//!
//! A predicate is a read-only function of the game state and a subject group
//! that returns progress in `[0, 1]`. A [`Task`] binds a predicate to a
//! subject and to the agents that receive its reward. Each evaluation pays
//! `multiplier * max(0, progress - best)`, so a task's total reward over an
//! episode equals its best progress times the multiplier.

mod builtins;
mod predicate;
mod task;

pub use builtins::*;
pub use predicate::{
    enum_param, int_param, make_predicate, ratio, Params, Predicate, PredicateDef,
};
pub use task::{
    evaluate_tasks, load_task_file, parse_task_file, per_agent, task_file_string, Registry, Task,
    TaskRewards, TaskSpec,
};
