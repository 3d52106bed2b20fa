//! Exhaustive round-robin iterated prisoner's dilemma over complete classes
//! of deterministic memory-bounded strategies.
//!
//! Every strategy of a memory class plays every other (and optionally
//! itself) in lock step. After any iteration step the accumulated outcome
//! counters can be scored under any payoff matrix, and a below-average
//! elimination tournament can be run on the same counters.
//!
//! - [`strategy`]: genomes, display notation, equivalence classes
//! - [`payoff`]: payoff matrices and the standard suite
//! - [`match_engine`]: the arena of pairwise games, checkpoints
//! - [`tournament`]: scoring and elimination
//! - [`analysis`]: winner series, stabilization, reports
//! - [`ca_view`]: point-like cellular automaton view of `0/3` play
//! - [`experiment`]: batch runs and verification against reference tables

pub mod analysis;
pub mod ca_view;
pub mod error;
pub mod experiment;
pub mod match_engine;
pub mod payoff;
pub mod strategy;
pub mod tournament;

pub use error::{Error, Result};
pub use match_engine::{new_arena, play_pair, Arena, OutcomeCounts, PairState};
pub use payoff::{standard_suite, PayoffMatrix};
pub use strategy::{Action, MemoryConfig, StrategyGenome};
pub use tournament::{run_elimination, TournamentOutcome};
