//! Tasks as data: write a JSON task file, load it back and build tasks.
//!
//! cargo run --example task_file

use gridmmo::tasks::{load_task_file, task_file_string, Registry, TaskSpec};
use serde_json::json;

fn spec(predicate: &str, params: serde_json::Value, subject: Vec<i64>) -> TaskSpec {
    TaskSpec {
        predicate: predicate.into(),
        params: params.as_object().cloned().unwrap_or_default(),
        subject,
        assignee: vec![],
        multiplier: 1.0,
    }
}

fn main() -> gridmmo::Result<()> {
    let specs = vec![
        spec("DistanceTraveled", json!({"dist": 16}), vec![1]),
        spec(
            "FullyArmed",
            json!({"combat_style": "Melee", "level": 1, "num_agent": 2}),
            vec![1, 2, 3],
        ),
        spec(
            "CountEvent",
            json!({"event_type": "EAT_FOOD", "N": 5}),
            vec![4],
        ),
        TaskSpec {
            assignee: vec![1],
            multiplier: 0.5,
            ..spec("StayAlive", json!({}), vec![2])
        },
    ];
    let dir = std::env::temp_dir().join("gridmmo-task-file-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("tasks.json");
    std::fs::write(&path, task_file_string(&specs))?;
    println!("{}", std::fs::read_to_string(&path)?);

    let loaded = load_task_file(&path)?;
    assert_eq!(loaded, specs);
    let tasks = Registry::new().build_all(&loaded)?;
    for t in &tasks {
        println!(
            "{} {:?} subject {:?} assignee {:?}",
            t.predicate().name(),
            t.predicate().params(),
            t.subject(),
            t.assignee()
        );
    }

    let bad =
        json!([{"predicate": "TickGE", "params": {"num_tick": 0}, "subject": [1]}]).to_string();
    let specs = gridmmo::tasks::parse_task_file(&bad)?;
    println!(
        "rejected: {}",
        Registry::new().build_all(&specs).unwrap_err()
    );
    Ok(())
}
