//! The `0/3` class does not fit in memory by default. Step a slice of its
//! pairs instead and check the counters against reference play.

use ipd_arena::match_engine::{pair_count, Arena, DEFAULT_MAX_ARENA_BYTES};
use ipd_arena::{play_pair, Error, MemoryConfig, StrategyGenome};

fn main() -> ipd_arena::Result<()> {
    let config = MemoryConfig::new(0, 3)?;
    match Arena::new(config, true) {
        Err(Error::Capacity {
            pairs,
            required_bytes,
            ..
        }) => {
            println!("{pairs} pairs need {:.1} GB", required_bytes as f64 / 1e9)
        }
        other => println!("unexpected: {:?}", other.map(|a| a.total_pairs())),
    }

    let total = pair_count(config.strategy_count(), true);
    let start = total / 2;
    let mut shard = Arena::shard(config, true, start..start + 5000, DEFAULT_MAX_ARENA_BYTES)?;
    shard.run_to(100)?;

    let mut agree = 0;
    for ((i, j), state) in shard.iter_pairs() {
        let play = play_pair(
            StrategyGenome::new(config, i)?,
            StrategyGenome::new(config, j)?,
            100,
        );
        agree += usize::from(play.counts_a == state.counts_a());
    }
    println!(
        "{agree} of {} pairs agree with reference play",
        shard.pairs().len()
    );
    Ok(())
}
