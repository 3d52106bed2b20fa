//! Point-like cellular automata with three bits of memory.
//!
//! A steady sub-strategy of the `0/3` class is an 8-entry rule table indexed
//! by the opponent's last three actions, most recent in the highest bit. Fed
//! its own memory it is a self-referential point automaton; two of them
//! reading each other's memory are one `0/3` game.

use std::fmt::Write as _;

use crate::strategy::{MemoryConfig, StrategyGenome};

/// Reverses the three bits of a neighborhood index.
#[inline]
const fn reverse3(i: u8) -> u8 {
    ((i & 1) << 2) | (i & 2) | ((i >> 2) & 1)
}

/// Converts a Wolfram rule number into a sub-strategy table. Wolfram puts the
/// oldest cell in the highest index bit, sub-strategies put the newest there.
pub fn rule_to_substrategy(wolfram_rule: u8) -> u8 {
    (0..8u8).fold(0, |table, i| {
        table | ((wolfram_rule >> reverse3(i)) & 1) << i
    })
}

/// Inverse of [`rule_to_substrategy`] (the map is an involution).
pub fn substrategy_to_rule(table: u8) -> u8 {
    rule_to_substrategy(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PointAutomaton {
    /// Output bit for each 3-bit memory state.
    pub rule: u8,
    /// Last three emitted bits, most recent in bit 2.
    pub state: u8,
}

impl PointAutomaton {
    pub fn new(rule: u8, state: u8) -> Self {
        PointAutomaton {
            rule,
            state: state & 7,
        }
    }

    pub fn from_wolfram(rule: u8, state: u8) -> Self {
        PointAutomaton::new(rule_to_substrategy(rule), state)
    }

    /// Output for a given memory state.
    #[inline]
    pub fn output(&self, memory: u8) -> u8 {
        (self.rule >> (memory & 7)) & 1
    }

    #[inline]
    fn push(&mut self, bit: u8) {
        self.state = (self.state >> 1) | (bit << 2);
    }
}

/// Shift successor of a state after emitting `bit`.
#[inline]
pub fn successor(state: u8, bit: u8) -> u8 {
    ((state & 7) >> 1) | ((bit & 1) << 2)
}

/// Feeds the automaton its own memory for `steps` steps; returns emitted bits.
pub fn self_trajectory(automaton: PointAutomaton, steps: usize) -> Vec<u8> {
    let mut a = automaton;
    (0..steps)
        .map(|_| {
            let bit = a.output(a.state);
            a.push(bit);
            bit
        })
        .collect()
}

/// Two automata each reading the other's memory, as in a `0/3` game.
pub fn pair_trajectory(a: PointAutomaton, b: PointAutomaton, steps: usize) -> (Vec<u8>, Vec<u8>) {
    let (mut a, mut b) = (a, b);
    let mut out_a = Vec::with_capacity(steps);
    let mut out_b = Vec::with_capacity(steps);
    for _ in 0..steps {
        let x = a.output(b.state);
        let y = b.output(a.state);
        a.push(x);
        b.push(y);
        out_a.push(x);
        out_b.push(y);
    }
    (out_a, out_b)
}

/// `(transient length, cycle length)` of the self-referential trajectory.
pub fn self_cycle(automaton: PointAutomaton) -> (usize, usize) {
    let mut seen = [usize::MAX; 8];
    let mut a = automaton;
    for step in 0.. {
        if seen[a.state as usize] != usize::MAX {
            return (seen[a.state as usize], step - seen[a.state as usize]);
        }
        seen[a.state as usize] = step;
        let bit = a.output(a.state);
        a.push(bit);
    }
    unreachable!()
}

/// `(transient length, cycle length)` over the 64-state product space.
pub fn pair_cycle(a: PointAutomaton, b: PointAutomaton) -> (usize, usize) {
    let mut seen = [usize::MAX; 64];
    let (mut a, mut b) = (a, b);
    for step in 0.. {
        let key = (a.state as usize) << 3 | b.state as usize;
        if seen[key] != usize::MAX {
            return (seen[key], step - seen[key]);
        }
        seen[key] = step;
        let x = a.output(b.state);
        let y = b.output(a.state);
        a.push(x);
        b.push(y);
    }
    unreachable!()
}

/// Edge `from -> to` of the self-referential state graph.
pub type Edge = (u8, u8);

/// One outgoing edge per 3-bit state.
pub fn transition_graph(table: u8) -> Vec<Edge> {
    (0..8u8)
        .map(|s| (s, successor(s, (table >> s) & 1)))
        .collect()
}

/// Edge list as `"from -> to"` lines, states in binary with the most recent
/// bit first.
pub fn render_edge_list(edges: &[Edge]) -> String {
    edges.iter().fold(String::new(), |mut out, (from, to)| {
        let _ = writeln!(out, "{from:03b} -> {to:03b}");
        out
    })
}

/// One row of `0`/`1` characters per trajectory.
pub fn render_trace(rows: &[&[u8]]) -> String {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|&b| if b == 1 { '1' } else { '0' })
                .collect::<String>()
                + "\n"
        })
        .collect()
}

/// Plain PBM (P1) image, one pixel row per trajectory, 1 = black.
pub fn render_pbm(rows: &[&[u8]]) -> String {
    let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut out = format!("P1\n{} {}\n", width, rows.len());
    for row in rows {
        let cells: Vec<&str> = (0..width)
            .map(|k| if row.get(k) == Some(&1) { "1" } else { "0" })
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// The combined two-automaton trace as one four-state row: `w` both 0,
/// `b` both 1, `y` first 0 and second 1, `r` first 1 and second 0.
pub fn render_combined(a: &[u8], b: &[u8]) -> String {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| match (x, y) {
            (0, 0) => 'w',
            (1, 1) => 'b',
            (0, _) => 'y',
            _ => 'r',
        })
        .collect()
}

/// Steady sub-strategy of a `0/3` genome as a rule table.
pub fn steady_table(genome: &StrategyGenome) -> Option<u8> {
    let config = genome.config();
    (config == MemoryConfig::new(0, 3).ok()?).then(|| genome.segment(3) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversal_is_an_involution() {
        for rule in 0..=255u8 {
            assert_eq!(rule_to_substrategy(rule_to_substrategy(rule)), rule);
        }
    }

    #[test]
    fn palindromic_rules_map_to_themselves() {
        // Indices 0, 2, 5, 7 are fixed by reversal; 1<->4 and 3<->6 swap.
        for rule in 0..=255u8 {
            let symmetric =
                (rule >> 1 & 1) == (rule >> 4 & 1) && (rule >> 3 & 1) == (rule >> 6 & 1);
            assert_eq!(rule_to_substrategy(rule) == rule, symmetric);
        }
    }

    #[test]
    fn rule_110_table() {
        // 110 = 01101110: outputs 1 for neighborhoods 1,2,3,5,6. Reversed:
        // 1->4, 2->2, 3->6, 5->5, 6->3.
        assert_eq!(rule_to_substrategy(110), 0b0111_1100);
        // 184 = 10111000: 3->6, 4->1, 5->5, 7->7.
        assert_eq!(rule_to_substrategy(184), 0b1110_0010);
    }

    #[test]
    fn fixed_points() {
        assert!(self_trajectory(PointAutomaton::new(0b1111_1110, 0), 20)
            .iter()
            .all(|&b| b == 0));
        assert!(self_trajectory(PointAutomaton::new(0b1000_0000, 7), 20)
            .iter()
            .all(|&b| b == 1));
        let (x, y) = pair_trajectory(
            PointAutomaton::new(0x80, 0),
            PointAutomaton::new(0x10, 0),
            30,
        );
        assert!(x.iter().chain(&y).all(|&b| b == 0));
    }

    #[test]
    fn cycles_bounded_by_state_space() {
        for rule in 0..=255u8 {
            for state in 0..8 {
                let (pre, cycle) = self_cycle(PointAutomaton::new(rule, state));
                assert!(pre + cycle <= 8 && cycle >= 1);
                let traj = self_trajectory(PointAutomaton::new(rule, state), 40);
                for k in pre..40 - cycle {
                    assert_eq!(traj[k], traj[k + cycle]);
                }
            }
        }
        for a in (0..=255u8).step_by(7) {
            for b in (0..=255u8).step_by(11) {
                let (pre, cycle) = pair_cycle(PointAutomaton::new(a, 1), PointAutomaton::new(b, 6));
                assert!(pre + cycle <= 64);
            }
        }
    }

    #[test]
    fn identical_automata_play_identically() {
        let a = PointAutomaton::from_wolfram(110, 5);
        let (x, y) = pair_trajectory(a, a, 50);
        assert_eq!(x, y);
    }

    #[test]
    fn graph_shape() {
        for table in 0..=255u8 {
            let edges = transition_graph(table);
            assert_eq!(edges.len(), 8);
            let mut indegree = [0; 8];
            for &(from, to) in &edges {
                assert!(to == from >> 1 || to == (from >> 1) | 4);
                indegree[to as usize] += 1;
            }
            assert_eq!(indegree.iter().sum::<i32>(), 8);
            assert!(indegree.iter().all(|&d| d <= 2));
        }
    }

    #[test]
    fn top_bit_copy_runs_into_all_ones() {
        // Sub-strategy 240 repeats the most recent bit.
        let edges = transition_graph(240);
        for &(from, to) in &edges {
            if from & 4 != 0 {
                assert_ne!(to & 4, 0);
                assert!(to.count_ones() >= from.count_ones());
            }
        }
        assert!(edges.contains(&(7, 7)));
        assert_eq!(render_edge_list(&edges[..1]), "000 -> 000\n");
    }

    #[test]
    fn renderers() {
        assert_eq!(render_trace(&[&[1, 0, 1], &[0, 0]]), "101\n00\n");
        assert_eq!(render_pbm(&[&[1, 0], &[0, 1]]), "P1\n2 2\n1 0\n0 1\n");
        assert_eq!(render_combined(&[0, 1, 0, 1], &[0, 1, 1, 0]), "wbyr");
    }
}
