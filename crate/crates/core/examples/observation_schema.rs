//! Dump the observation schema and decode one flat observation with it.
//!
//! cargo run --example observation_schema

use gridmmo::env::{Env, ObsSchema};
use gridmmo::Config;

fn main() -> gridmmo::Result<()> {
    let dir = std::env::temp_dir().join("gridmmo-schema-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("obs_schema.json");
    let mut env = Env::new(Config::default())?.with_schema_path(&path);
    env.reset(0, &[])?;

    // a consumer in another language would read this file instead of the layout
    let schema: ObsSchema = serde_json::from_str(&std::fs::read_to_string(&path)?)
        .map_err(|e| gridmmo::Error::Format(e.to_string()))?;
    println!(
        "schema v{} {} x {} = {} bytes",
        schema.version, schema.dtype, schema.length, schema.bytes
    );
    for b in &schema.blocks {
        println!(
            "{:>10} offset {:>5} rows {:>3} x {:<2} {:?}",
            b.name,
            b.offset,
            b.rows,
            b.fields.len(),
            b.fields
        );
    }
    for k in &schema.action.kinds {
        println!("action {} {} {:?}", k.code, k.name, k.args);
    }

    let (agents, flat) = env.observe_flat();
    let first = &flat[..schema.length];
    let me = schema.blocks.iter().find(|b| b.name == "self").unwrap();
    let field = |name: &str| first[me.offset + me.fields.iter().position(|f| f == name).unwrap()];
    println!(
        "agent {} at ({}, {}) health {}",
        agents[0],
        field("row"),
        field("col"),
        field("health")
    );
    Ok(())
}
