//! Generate a map and print it as ASCII along with terrain statistics.
//!
//! cargo run --example worldgen_preview -- [seed] [size]

use gridmmo::worldgen::{generate_map, Material};

fn glyph(m: Material) -> char {
    match m {
        Material::Void => ' ',
        Material::Water => '~',
        Material::Grass => '.',
        Material::Stone => '#',
        Material::Forest => 'T',
        Material::Herb => 'h',
        Material::Fish => 'f',
        Material::Ore => 'o',
        Material::Tree => 't',
        Material::Crystal => '*',
    }
}

fn main() -> gridmmo::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let size: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);
    let map = generate_map(seed, size)?;
    for r in 0..size as i64 {
        let line: String = (0..size as i64)
            .map(|c| glyph(map.material(r, c)))
            .collect();
        println!("{}", line.trim_end());
    }
    println!("passable {:.3}", map.passable_fraction());
    for m in Material::ALL {
        println!("{m:?}: {}", map.count(m));
    }
    let bytes = map.to_bytes();
    println!("export: {} bytes", bytes.len());
    Ok(())
}
