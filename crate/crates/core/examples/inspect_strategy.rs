//! Decode a strategy from its display notation and look at its classes.
//!
//! `cargo run --example inspect_strategy -- 1 2 "(1/8/228)"`

use ipd_arena::strategy::{behavioral_class, canonicalize};
use ipd_arena::{MemoryConfig, StrategyGenome};

fn main() -> ipd_arena::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (own, opp, text) = match args.as_slice() {
        [own, opp, text] => (
            own.parse().unwrap_or(1),
            opp.parse().unwrap_or(2),
            text.as_str(),
        ),
        _ => (1, 2, "(1/8/228)"),
    };
    let config = MemoryConfig::new(own, opp)?;
    let genome = StrategyGenome::parse_display(config, text)?;

    println!(
        "{config} strategy {} (id {})",
        genome.render_display(),
        genome.id()
    );
    if let Some(name) = genome.well_known_name() {
        println!("known as {name}");
    }
    print!("{}", genome.describe());

    let class = canonicalize(genome);
    let twins: Vec<String> = class
        .members
        .iter()
        .map(|&id| {
            StrategyGenome::new(config, id as u64)
                .unwrap()
                .render_display()
        })
        .collect();
    println!("equivalent genomes: {}", twins.join(" "));
    println!(
        "behaviorally identical genomes: {}",
        behavioral_class(genome).len()
    );
    Ok(())
}
