//! Score a fully played arena under one matrix and list the leaders of
//! the first tournament round.

use ipd_arena::tournament::first_round_scores;
use ipd_arena::{new_arena, standard_suite, MemoryConfig, StrategyGenome};

fn main() -> ipd_arena::Result<()> {
    let config = MemoryConfig::new(1, 1)?;
    let mut arena = new_arena(config, true)?;
    arena.run_to(1000)?;

    let matrix = standard_suite()[4];
    let scores = first_round_scores(&arena, &matrix)?;
    let mut ranked: Vec<(u64, u32)> = scores
        .0
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i as u32))
        .collect();
    ranked.sort_unstable_by(|a, b| b.cmp(a));

    println!(
        "{} after {} steps, top five of {}:",
        matrix,
        arena.t(),
        config.strategy_count()
    );
    for (score, id) in ranked.iter().take(5) {
        let g = StrategyGenome::new(config, *id as u64)?;
        println!("  {:>10}  {score}", g.render_display());
    }
    Ok(())
}
