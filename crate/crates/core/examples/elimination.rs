//! Follow an elimination tournament round by round.

use ipd_arena::tournament::{elimination_rounds, ArenaScores};
use ipd_arena::{new_arena, run_elimination, standard_suite, MemoryConfig, StrategyGenome};

fn main() -> ipd_arena::Result<()> {
    let config = MemoryConfig::new(1, 1)?;
    let mut arena = new_arena(config, false)?;
    arena.run_to(200)?;
    let matrix = standard_suite()[12];

    for (k, round) in elimination_rounds(&ArenaScores::new(&arena, matrix)?)
        .iter()
        .enumerate()
    {
        let total: u64 = round.scores.iter().sum();
        print!(
            "round {} with {:>2} strategies, average {:.1}:",
            k + 1,
            round.participants.len(),
            total as f64 / round.scores.len() as f64
        );
        if round.participants.len() <= 6 {
            for id in &round.participants {
                print!(" {}", StrategyGenome::new(config, *id as u64)?);
            }
        }
        println!();
    }

    let outcome = run_elimination(&arena, &matrix)?;
    let names = |ids: &[u32]| {
        ids.iter()
            .map(|&id| StrategyGenome::new(config, id as u64).unwrap().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("first round winners: {}", names(&outcome.g1_winners));
    println!(
        "champions after {} rounds: {}",
        outcome.rounds,
        names(&outcome.champions)
    );
    Ok(())
}
