//! Save an arena mid-run, load it back and carry on.

use ipd_arena::match_engine::{checkpoint_info, checkpoint_load, checkpoint_save};
use ipd_arena::{new_arena, MemoryConfig};

fn main() -> ipd_arena::Result<()> {
    let dir = std::env::temp_dir().join(format!("ipd-arena-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("arena.ipda");

    let mut arena = new_arena(MemoryConfig::new(0, 2)?, true)?;
    arena.run_to(250)?;
    checkpoint_save(&arena, &path)?;

    let info = checkpoint_info(&path)?;
    println!(
        "saved {} self-play={} at t = {} ({} pairs)",
        info.config, info.self_play, info.t, info.pair_range.end
    );

    let mut resumed = checkpoint_load(&path)?;
    arena.run_to(500)?;
    resumed.run_to(500)?;
    println!(
        "resumed run matches the uninterrupted one: {}",
        resumed == arena
    );

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
