use thiserror::Error;

use crate::strategy::MemoryConfig;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported memory configuration {own}/{opp}: {reason}")]
    UnsupportedConfig {
        own: u8,
        opp: u8,
        reason: &'static str,
    },

    #[error(
        "history too short for iteration {iteration}: need {own_needed} own and {opp_needed} \
         opponent actions, got {own_given} and {opp_given}"
    )]
    InsufficientHistory {
        iteration: u32,
        own_needed: usize,
        opp_needed: usize,
        own_given: usize,
        opp_given: usize,
    },

    #[error("cannot parse strategy {text:?}: {reason}")]
    ParseStrategy { text: String, reason: String },

    #[error("strategy id {id} is out of range for memory configuration {config}")]
    GenomeOutOfRange { id: u64, config: MemoryConfig },

    #[error("invalid payoff matrix: {0}")]
    InvalidPayoff(String),

    #[error(
        "arena for memory configuration {config} needs {pairs} pairs = {required_bytes} bytes \
         (~{}), limit is {limit_bytes} bytes", human_bytes(*.required_bytes)
    )]
    Capacity {
        config: MemoryConfig,
        pairs: u64,
        required_bytes: u64,
        limit_bytes: u64,
    },

    #[error("iteration counter overflow at t = {0}")]
    CounterOverflow(u32),

    #[error(
        "operation needs the complete pair space, arena holds pairs {start}..{end} of {total}"
    )]
    PartialArena { start: u64, end: u64, total: u64 },

    #[error("checkpoint has bad magic bytes")]
    CheckpointMagic,

    #[error("checkpoint format version {found} is not supported (expected {expected})")]
    CheckpointVersion { found: u32, expected: u32 },

    #[error("checkpoint is truncated: expected {expected} bytes, found {found}")]
    CheckpointTruncated { expected: u64, found: u64 },

    #[error("checkpoint checksum mismatch")]
    CheckpointChecksum,

    #[error("checkpoint header is inconsistent: {0}")]
    CheckpointHeader(String),

    #[error("unknown report format {0:?}")]
    UnknownFormat(String),

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Renders a byte count with a binary-prefix unit, one decimal.
pub fn human_bytes(bytes: u64) -> String {
    const UNITS: [&str; 7] = ["B", "KiB", "MiB", "GiB", "TiB", "PiB", "EiB"];
    let mut value = bytes as f64;
    let mut unit = 0;
    while value >= 1024.0 && unit + 1 < UNITS.len() {
        value /= 1024.0;
        unit += 1;
    }
    format!("{value:.1} {}", UNITS[unit])
}
