//! First-round scoring and the below-average elimination tournament.
//!
//! Scores are exact integers. The average test `G_i < sum / count` is decided
//! as `G_i * count < sum` in 128-bit arithmetic, so a strategy scoring exactly
//! the average always survives.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::match_engine::{Arena, OutcomeCounts};
use crate::payoff::{self, PayoffMatrix};

/// Total payoff per strategy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreVector(pub Vec<u64>);

impl ScoreVector {
    pub fn argmax(&self) -> Vec<u32> {
        let best = self.0.iter().copied().max().unwrap_or(0);
        (0..self.0.len() as u32)
            .filter(|&i| self.0[i as usize] == best)
            .collect()
    }
}

/// Result of one tournament at one iteration step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TournamentOutcome {
    #[serde(with = "payoff::key_format")]
    pub matrix: PayoffMatrix,
    pub t: u32,
    pub g1_winners: Vec<u32>,
    pub champions: Vec<u32>,
    pub rounds: u32,
}

#[inline]
fn weigh(matrix: &PayoffMatrix, c: OutcomeCounts) -> u64 {
    matrix.t() as u64 * c.t as u64 + matrix.r() as u64 * c.r as u64 + matrix.p() as u64 * c.p as u64
}

/// Pairwise payoffs `G_ij` that an elimination tournament runs on.
pub trait ScoreSource {
    fn strategy_count(&self) -> usize;

    /// `G_i` against every strategy.
    fn first_round(&self) -> Vec<u64>;

    /// `G_i` restricted to opponents in `members` (sorted ids); entries of
    /// non-members are unspecified.
    fn restricted(&self, members: &[u32], is_member: &[bool]) -> Vec<u64>;
}

/// Outcome counters of one strategy summed over all its opponents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OutcomeTotals {
    pub t: u64,
    pub r: u64,
    pub p: u64,
    pub s: u64,
}

impl OutcomeTotals {
    fn add(&mut self, c: OutcomeCounts) {
        self.t += c.t as u64;
        self.r += c.r as u64;
        self.p += c.p as u64;
        self.s += c.s as u64;
    }

    pub fn weigh(&self, matrix: &PayoffMatrix) -> u64 {
        matrix.t() as u64 * self.t + matrix.r() as u64 * self.r + matrix.p() as u64 * self.p
    }
}

/// Per-strategy totals; first-round scores under every matrix follow from
/// these without another pass over the pairs.
pub fn outcome_totals(arena: &Arena) -> Result<Vec<OutcomeTotals>> {
    arena.require_complete()?;
    let mut totals = vec![OutcomeTotals::default(); arena.strategy_count() as usize];
    for ((i, j), state) in arena.iter_pairs() {
        totals[i as usize].add(state.counts_a());
        if i != j {
            totals[j as usize].add(state.counts_b());
        }
    }
    Ok(totals)
}

/// Scores read from an arena's counters under one matrix.
pub struct ArenaScores<'a> {
    arena: &'a Arena,
    matrix: PayoffMatrix,
    totals: Option<&'a [OutcomeTotals]>,
}

impl<'a> ArenaScores<'a> {
    pub fn new(arena: &'a Arena, matrix: PayoffMatrix) -> Result<Self> {
        arena.require_complete()?;
        Ok(ArenaScores {
            arena,
            matrix,
            totals: None,
        })
    }

    /// Reuses totals from [`outcome_totals`] for the first round.
    pub fn with_totals(
        arena: &'a Arena,
        matrix: PayoffMatrix,
        totals: &'a [OutcomeTotals],
    ) -> Result<Self> {
        arena.require_complete()?;
        if totals.len() as u64 != arena.strategy_count() {
            return Err(crate::Error::InvalidExperiment(format!(
                "{} totals for {} strategies",
                totals.len(),
                arena.strategy_count()
            )));
        }
        Ok(ArenaScores {
            arena,
            matrix,
            totals: Some(totals),
        })
    }
}

impl ScoreSource for ArenaScores<'_> {
    fn strategy_count(&self) -> usize {
        self.arena.strategy_count() as usize
    }

    fn first_round(&self) -> Vec<u64> {
        if let Some(totals) = self.totals {
            return totals.iter().map(|t| t.weigh(&self.matrix)).collect();
        }
        let mut scores = vec![0u64; self.strategy_count()];
        for ((i, j), state) in self.arena.iter_pairs() {
            scores[i as usize] += weigh(&self.matrix, state.counts_a());
            if i != j {
                scores[j as usize] += weigh(&self.matrix, state.counts_b());
            }
        }
        scores
    }

    fn restricted(&self, members: &[u32], is_member: &[bool]) -> Vec<u64> {
        let mut scores = vec![0u64; self.strategy_count()];
        let k = members.len() as u64;
        if k * k < self.arena.total_pairs() {
            let pairs = self.arena.pairs();
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a..] {
                    let Some(idx) = self.arena.pair_index(i as u64, j as u64) else {
                        continue;
                    };
                    let state = &pairs[idx as usize];
                    scores[i as usize] += weigh(&self.matrix, state.counts_a());
                    if i != j {
                        scores[j as usize] += weigh(&self.matrix, state.counts_b());
                    }
                }
            }
        } else {
            for ((i, j), state) in self.arena.iter_pairs() {
                if is_member[i as usize] && is_member[j as usize] {
                    scores[i as usize] += weigh(&self.matrix, state.counts_a());
                    if i != j {
                        scores[j as usize] += weigh(&self.matrix, state.counts_b());
                    }
                }
            }
        }
        scores
    }
}

/// An explicit `n x n` table of `G_ij` (payoff of `i` against `j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensePayoffs {
    n: usize,
    values: Vec<u64>,
}

impl DensePayoffs {
    /// `rows[i][j]` is the payoff of `i` against `j`.
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "payoff table must be square"
        );
        DensePayoffs {
            n,
            values: rows.concat(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.values[i * self.n + j]
    }
}

impl ScoreSource for DensePayoffs {
    fn strategy_count(&self) -> usize {
        self.n
    }

    fn first_round(&self) -> Vec<u64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).sum())
            .collect()
    }

    fn restricted(&self, members: &[u32], _is_member: &[bool]) -> Vec<u64> {
        let mut scores = vec![0u64; self.n];
        for &i in members {
            scores[i as usize] = members
                .iter()
                .map(|&j| self.get(i as usize, j as usize))
                .sum();
        }
        scores
    }
}

pub fn first_round_scores(arena: &Arena, matrix: &PayoffMatrix) -> Result<ScoreVector> {
    Ok(ScoreVector(ArenaScores::new(arena, *matrix)?.first_round()))
}

/// One tournament round: who took part and what they scored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationRound {
    pub participants: Vec<u32>,
    /// Scores aligned with `participants`.
    pub scores: Vec<u64>,
}

/// Every round of the elimination tournament, starting with the full field.
pub fn elimination_rounds(source: &impl ScoreSource) -> Vec<EliminationRound> {
    let n = source.strategy_count();
    let mut participants: Vec<u32> = (0..n as u32).collect();
    let mut is_member = vec![true; n];
    let mut all_scores = source.first_round();
    let mut rounds = Vec::new();
    loop {
        let scores: Vec<u64> = participants
            .iter()
            .map(|&i| all_scores[i as usize])
            .collect();
        let count = participants.len() as u128;
        let sum: u128 = scores.iter().map(|&s| s as u128).sum();
        let settled = participants.len() <= 1 || scores.windows(2).all(|w| w[0] == w[1]);
        let survivors: Vec<u32> = participants
            .iter()
            .zip(&scores)
            .filter(|(_, &s)| s as u128 * count >= sum)
            .map(|(&i, _)| i)
            .collect();
        rounds.push(EliminationRound {
            participants: std::mem::take(&mut participants),
            scores,
        });
        if settled {
            return rounds;
        }
        for r in &rounds.last().unwrap().participants {
            is_member[*r as usize] = false;
        }
        for &i in &survivors {
            is_member[i as usize] = true;
        }
        all_scores = source.restricted(&survivors, &is_member);
        participants = survivors;
    }
}

/// First-round winners, champions and round count for any score source.
pub fn eliminate(source: &impl ScoreSource) -> (Vec<u32>, Vec<u32>, u32) {
    let rounds = elimination_rounds(source);
    let first = &rounds[0];
    let best = first.scores.iter().copied().max().unwrap_or(0);
    let g1_winners = first
        .participants
        .iter()
        .zip(&first.scores)
        .filter(|(_, &s)| s == best)
        .map(|(&i, _)| i)
        .collect();
    let champions = rounds.last().unwrap().participants.clone();
    (g1_winners, champions, rounds.len() as u32)
}

pub fn run_elimination(arena: &Arena, matrix: &PayoffMatrix) -> Result<TournamentOutcome> {
    outcome(arena, matrix, &ArenaScores::new(arena, *matrix)?)
}

fn outcome(
    arena: &Arena,
    matrix: &PayoffMatrix,
    source: &ArenaScores,
) -> Result<TournamentOutcome> {
    let (g1_winners, champions, rounds) = eliminate(source);
    Ok(TournamentOutcome {
        matrix: *matrix,
        t: arena.t(),
        g1_winners,
        champions,
        rounds,
    })
}

/// Runs the tournament for every matrix of a suite against one arena snapshot.
pub fn run_suite(arena: &Arena, suite: &[PayoffMatrix]) -> Result<Vec<TournamentOutcome>> {
    let totals = outcome_totals(arena)?;
    suite
        .par_iter()
        .map(|m| outcome(arena, m, &ArenaScores::with_totals(arena, *m, &totals)?))
        .collect()
}
