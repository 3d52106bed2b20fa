//! Play two strategies against each other and print both move lists.

use ipd_arena::{play_pair, standard_suite, MemoryConfig, StrategyGenome};

fn main() -> ipd_arena::Result<()> {
    let config = MemoryConfig::new(1, 1)?;
    let tft = StrategyGenome::tit_for_tat(config);
    let pavlov = StrategyGenome::pavlov(config);
    let suspicious = StrategyGenome::parse_display(config, "(0/12)")?;

    for (a, b) in [(tft, pavlov), (tft, suspicious), (pavlov, suspicious)] {
        let play = play_pair(a, b, 12);
        let line =
            |moves: &[ipd_arena::Action]| moves.iter().map(|m| m.letter()).collect::<String>();
        println!("{:>8}  {}", a.render_display(), line(&play.moves_a));
        println!("{:>8}  {}", b.render_display(), line(&play.moves_b));
        let m = standard_suite()[0];
        let score = |c: ipd_arena::OutcomeCounts| (c.t * m.t() + c.r * m.r() + c.p * m.p()) as u64;
        println!(
            "scores under {m}: {} vs {}\n",
            score(play.counts_a),
            score(play.counts_b)
        );
    }
    Ok(())
}
