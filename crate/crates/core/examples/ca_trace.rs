//! Steady-phase `0/3` play seen as point-like cellular automata.

use ipd_arena::ca_view::{
    pair_cycle, pair_trajectory, render_combined, render_edge_list, render_trace, self_cycle,
    self_trajectory, steady_table, substrategy_to_rule, transition_graph, PointAutomaton,
};
use ipd_arena::{MemoryConfig, StrategyGenome};

fn main() -> ipd_arena::Result<()> {
    let rule110 = PointAutomaton::from_wolfram(110, 0b010);
    let trace = self_trajectory(rule110, 24);
    println!("rule 110 on its own memory:\n{}", render_trace(&[&trace]));
    let (pre, cycle) = self_cycle(rule110);
    println!("cycle of length {cycle} after {pre} steps\n");

    let tft = StrategyGenome::tit_for_tat(MemoryConfig::new(0, 3)?);
    let table = steady_table(&tft).expect("0/3 genome");
    println!(
        "tit-for-tat steady phase is rule {}",
        substrategy_to_rule(table)
    );

    let a = PointAutomaton::new(table, 0b111);
    let b = PointAutomaton::from_wolfram(30, 0b010);
    let (ta, tb) = pair_trajectory(a, b, 32);
    println!("tit-for-tat vs rule 30:\n{}", render_trace(&[&ta, &tb]));
    println!("{}", render_combined(&ta, &tb));
    let (pre, cycle) = pair_cycle(a, b);
    println!("joint cycle of length {cycle} after {pre} steps\n");

    print!(
        "rule 110 state graph:\n{}",
        render_edge_list(&transition_graph(ipd_arena::ca_view::rule_to_substrategy(
            110
        )))
    );
    Ok(())
}
