//! Lock-step simulation of every pairwise iterated game of a strategy class.
//!
//! The arena stores one [`PairState`] per unordered pair `(i, j)` with
//! `i <= j` (or `i < j` without self-play), laid out row-major by `i`. Each
//! state holds both players' packed action histories and the outcome counters
//! seen from the lower-indexed player `A`; the counters of `B` follow from
//! complementarity (`T_B = S_A`, `S_B = T_A`, `R` and `P` shared).

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::ops::Range;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::strategy::{push_register, register_index, Action, MemoryConfig, StrategyGenome};

/// Arenas larger than this are refused unless a larger limit is passed.
pub const DEFAULT_MAX_ARENA_BYTES: u64 = 4 << 30;

const CHUNK: usize = 4096;

/// Outcome counters of one ordered direction of a pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub t: u32,
    pub r: u32,
    pub p: u32,
    pub s: u32,
}

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.t as u64 + self.r as u64 + self.p as u64 + self.s as u64
    }

    /// The same game seen from the other player.
    pub fn mirrored(&self) -> Self {
        OutcomeCounts {
            t: self.s,
            r: self.r,
            p: self.p,
            s: self.t,
        }
    }

    pub fn record(&mut self, own: Action, other: Action) {
        match (own, other) {
            (Action::Defect, Action::Cooperate) => self.t += 1,
            (Action::Cooperate, Action::Cooperate) => self.r += 1,
            (Action::Defect, Action::Defect) => self.p += 1,
            (Action::Cooperate, Action::Defect) => self.s += 1,
        }
    }
}

// Counter slot for A, indexed by `a_bit * 2 + b_bit`: DD -> P, DC -> T, CD -> S, CC -> R.
const SLOT_T: usize = 0;
const SLOT_R: usize = 1;
const SLOT_P: usize = 2;
const SLOT_S: usize = 3;
const OUTCOME_SLOT: [usize; 4] = [SLOT_P, SLOT_T, SLOT_S, SLOT_R];

/// State of one ongoing game. 20 bytes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[repr(C)]
pub struct PairState {
    hist_a: u8,
    hist_b: u8,
    counts: [u32; 4],
}

impl PairState {
    /// Packed history of `A`'s own actions, most recent in the highest bit.
    pub fn history_a(&self) -> u8 {
        self.hist_a
    }

    pub fn history_b(&self) -> u8 {
        self.hist_b
    }

    pub fn counts_a(&self) -> OutcomeCounts {
        OutcomeCounts {
            t: self.counts[SLOT_T],
            r: self.counts[SLOT_R],
            p: self.counts[SLOT_P],
            s: self.counts[SLOT_S],
        }
    }

    pub fn counts_b(&self) -> OutcomeCounts {
        self.counts_a().mirrored()
    }
}

/// Number of stored pairs for a class of `n` strategies.
pub fn pair_count(n: u64, self_play: bool) -> u64 {
    if self_play {
        n * (n + 1) / 2
    } else {
        n * n.saturating_sub(1) / 2
    }
}

/// Bytes an arena over `pairs` pairs occupies.
pub fn arena_bytes(config: MemoryConfig, pairs: u64) -> u64 {
    pairs * std::mem::size_of::<PairState>() as u64
        + config.strategy_count() * (config.segment_count() as u64 * 8 + 8)
}

/// Pair-space geometry: row starts of the triangular layout.
#[derive(Clone, Debug)]
struct Layout {
    n: u64,
    self_play: bool,
    row_start: Vec<u64>,
}

impl Layout {
    fn new(n: u64, self_play: bool) -> Self {
        let row_start = (0..=n)
            .map(|i| {
                if self_play {
                    i * n - i * i.saturating_sub(1) / 2
                } else {
                    i * n.saturating_sub(1) - i * i.saturating_sub(1) / 2
                }
            })
            .collect();
        Layout {
            n,
            self_play,
            row_start,
        }
    }

    fn total(&self) -> u64 {
        pair_count(self.n, self.self_play)
    }

    fn index(&self, i: u64, j: u64) -> Option<u64> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if j >= self.n || (!self.self_play && i == j) {
            return None;
        }
        let offset = if self.self_play { j - i } else { j - i - 1 };
        Some(self.row_start[i as usize] + offset)
    }

    fn unrank(&self, idx: u64) -> (u64, u64) {
        let i = self.row_start.partition_point(|&s| s <= idx) as u64 - 1;
        let offset = idx - self.row_start[i as usize];
        let j = if self.self_play {
            i + offset
        } else {
            i + 1 + offset
        };
        (i, j)
    }
}

/// All pairwise games of one strategy class, advanced in lock step.
#[derive(Clone, Debug)]
pub struct Arena {
    config: MemoryConfig,
    self_play: bool,
    t: u32,
    layout: Layout,
    range: Range<u64>,
    pairs: Vec<PairState>,
    /// Per genome and stage: a 64-bit decision mask indexed by
    /// `own_register | opponent_register << horizon`.
    tables: Vec<u64>,
}

impl PartialEq for Arena {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
            && self.self_play == other.self_play
            && self.t == other.t
            && self.range == other.range
            && self.pairs == other.pairs
    }
}

impl Eq for Arena {}

/// An arena over the complete pair space with the default memory limit.
pub fn new_arena(config: MemoryConfig, self_play: bool) -> Result<Arena> {
    Arena::new(config, self_play)
}

impl Arena {
    pub fn new(config: MemoryConfig, self_play: bool) -> Result<Self> {
        Self::with_limit(config, self_play, DEFAULT_MAX_ARENA_BYTES)
    }

    pub fn with_limit(config: MemoryConfig, self_play: bool, max_bytes: u64) -> Result<Self> {
        let total = pair_count(config.strategy_count(), self_play);
        Self::shard(config, self_play, 0..total, max_bytes)
    }

    /// An arena holding only the pairs with indices in `range`. Shards step
    /// exactly like the full arena but cannot be scored.
    pub fn shard(
        config: MemoryConfig,
        self_play: bool,
        range: Range<u64>,
        max_bytes: u64,
    ) -> Result<Self> {
        if config.horizon() > 3 {
            return Err(Error::UnsupportedConfig {
                own: config.own(),
                opp: config.opp(),
                reason: "the arena supports memory horizons up to 3",
            });
        }
        let n = config.strategy_count();
        let total = pair_count(n, self_play);
        if range.start > range.end || range.end > total {
            return Err(Error::InvalidExperiment(format!(
                "pair range {range:?} exceeds the {total} pairs of class {config}"
            )));
        }
        let len = range.end - range.start;
        let required = arena_bytes(config, len);
        if required > max_bytes || usize::try_from(len).is_err() {
            return Err(Error::Capacity {
                config,
                pairs: len,
                required_bytes: required,
                limit_bytes: max_bytes,
            });
        }
        Ok(Arena {
            config,
            self_play,
            t: 0,
            layout: Layout::new(n, self_play),
            range,
            pairs: vec![PairState::default(); len as usize],
            tables: decision_tables(config),
        })
    }

    pub fn config(&self) -> MemoryConfig {
        self.config
    }

    pub fn self_play(&self) -> bool {
        self.self_play
    }

    /// Completed iterations.
    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn strategy_count(&self) -> u64 {
        self.layout.n
    }

    /// Pairs of the complete class.
    pub fn total_pairs(&self) -> u64 {
        self.layout.total()
    }

    pub fn pair_range(&self) -> Range<u64> {
        self.range.clone()
    }

    pub fn is_complete(&self) -> bool {
        self.range.start == 0 && self.range.end == self.layout.total()
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::PartialArena {
                start: self.range.start,
                end: self.range.end,
                total: self.layout.total(),
            })
        }
    }

    pub fn pairs(&self) -> &[PairState] {
        &self.pairs
    }

    /// Global index of the unordered pair, if stored in this class layout.
    pub fn pair_index(&self, i: u64, j: u64) -> Option<u64> {
        self.layout.index(i, j)
    }

    /// `(i, j)` with `i <= j` for a global pair index.
    pub fn pair_at(&self, index: u64) -> (u64, u64) {
        self.layout.unrank(index)
    }

    /// Counters of strategy `i` playing `j`, when this arena holds the pair.
    pub fn counts(&self, i: u64, j: u64) -> Option<OutcomeCounts> {
        let idx = self.layout.index(i, j)?;
        if !self.range.contains(&idx) {
            return None;
        }
        let state = &self.pairs[(idx - self.range.start) as usize];
        Some(if i <= j {
            state.counts_a()
        } else {
            state.counts_b()
        })
    }

    /// Iterates `((i, j), state)` over the stored pairs.
    pub fn iter_pairs(&self) -> impl Iterator<Item = ((u64, u64), &PairState)> + '_ {
        let mut cursor = self
            .layout
            .unrank(self.range.start.min(self.layout.total().saturating_sub(1)));
        let n = self.layout.n;
        let self_play = self.self_play;
        self.pairs.iter().map(move |state| {
            let here = cursor;
            cursor.1 += 1;
            if cursor.1 == n {
                cursor.0 += 1;
                cursor.1 = if self_play { cursor.0 } else { cursor.0 + 1 };
            }
            (here, state)
        })
    }

    /// Advances every pair by one iteration on the current rayon pool.
    pub fn step(&mut self) -> Result<()> {
        let t = self
            .t
            .checked_add(1)
            .ok_or(Error::CounterOverflow(self.t))?;
        let stage = self.config.stage_for(t);
        let stages = self.config.segment_count();
        let width = self.config.horizon() as u32;
        let n = self.layout.n;
        let self_play = self.self_play;
        let start = self.range.start;
        let layout = &self.layout;
        let tables = &self.tables;

        self.pairs
            .par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                let (mut i, mut j) = layout.unrank(start + (c * CHUNK) as u64);
                for pair in chunk {
                    let table_a = tables[i as usize * stages + stage];
                    let table_b = tables[j as usize * stages + stage];
                    let ha = pair.hist_a as u32;
                    let hb = pair.hist_b as u32;
                    let a = (table_a >> (ha | hb << width)) as u32 & 1;
                    let b = (table_b >> (hb | ha << width)) as u32 & 1;
                    pair.counts[OUTCOME_SLOT[(a * 2 + b) as usize]] += 1;
                    pair.hist_a = push_register(ha, a, width) as u8;
                    pair.hist_b = push_register(hb, b, width) as u8;
                    j += 1;
                    if j == n {
                        i += 1;
                        j = if self_play { i } else { i + 1 };
                    }
                }
            });
        self.t = t;
        Ok(())
    }

    /// Steps until `t == target`.
    pub fn run_to(&mut self, target: u32) -> Result<()> {
        while self.t < target {
            self.step()?;
        }
        Ok(())
    }
}

fn decision_tables(config: MemoryConfig) -> Vec<u64> {
    let stages = config.segment_count();
    let width = config.horizon() as u32;
    let regs = 1u32 << width;
    let mut tables = Vec::with_capacity(config.strategy_count() as usize * stages);
    for genome in config.genomes() {
        for stage in 0..stages {
            let mut mask = 0u64;
            for own in 0..regs {
                for opp in 0..regs {
                    let bit = genome.bit_at(stage, register_index(config, stage, own, opp)) as u64;
                    mask |= bit << (own | opp << width);
                }
            }
            tables.push(mask);
        }
    }
    tables
}

/// A rayon pool with exactly `workers` threads.
pub fn worker_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::InvalidExperiment(
            "worker count must be at least 1".into(),
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidExperiment(format!("cannot start {workers} workers: {e}")))
}

/// One game played in isolation with explicit action lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairPlay {
    pub moves_a: Vec<Action>,
    pub moves_b: Vec<Action>,
    pub counts_a: OutcomeCounts,
    pub counts_b: OutcomeCounts,
}

/// Reference simulation of a single pair, independent of the packed arena.
pub fn play_pair(a: StrategyGenome, b: StrategyGenome, iterations: u32) -> PairPlay {
    assert_eq!(a.config(), b.config(), "genomes of different classes");
    let mut play = PairPlay {
        moves_a: Vec::with_capacity(iterations as usize),
        moves_b: Vec::with_capacity(iterations as usize),
        counts_a: OutcomeCounts::default(),
        counts_b: OutcomeCounts::default(),
    };
    for it in 1..=iterations {
        let x = a.decide(it, &play.moves_a, &play.moves_b);
        let y = b.decide(it, &play.moves_b, &play.moves_a);
        play.counts_a.record(x, y);
        play.counts_b.record(y, x);
        play.moves_a.push(x);
        play.moves_b.push(y);
    }
    play
}

const MAGIC: &[u8; 4] = b"IPDA";
const FORMAT_VERSION: u32 = 1;
// magic, version, own, opp, self_play, reserved, t, n, range start, range len
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8 + 8 + 8;
const RECORD_LEN: usize = 2 + 16;

/// Writes the arena as: header, one 18-byte record per pair (two history
/// bytes, then T, R, P, S of player A as little-endian `u32`), and a trailing
/// little-endian `u64` checksum (first 8 bytes of SHA-256 over everything
/// before it).
pub fn checkpoint_save(arena: &Arena, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut out = HashingWriter {
        inner: BufWriter::new(file),
        hasher: Sha256::new(),
    };
    let mut header = Vec::with_capacity(HEADER_LEN);
    header.extend_from_slice(MAGIC);
    header.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    header.extend_from_slice(&[
        arena.config.own(),
        arena.config.opp(),
        arena.self_play as u8,
        0,
    ]);
    header.extend_from_slice(&arena.t.to_le_bytes());
    header.extend_from_slice(&arena.layout.n.to_le_bytes());
    header.extend_from_slice(&arena.range.start.to_le_bytes());
    header.extend_from_slice(&(arena.range.end - arena.range.start).to_le_bytes());
    out.write_all(&header)?;
    let mut record = [0u8; RECORD_LEN];
    for pair in &arena.pairs {
        record[0] = pair.hist_a;
        record[1] = pair.hist_b;
        for (k, c) in pair.counts.iter().enumerate() {
            record[2 + 4 * k..6 + 4 * k].copy_from_slice(&c.to_le_bytes());
        }
        out.write_all(&record)?;
    }
    let digest = out.hasher.finalize();
    let mut inner = out.inner;
    inner.write_all(&digest[..8])?;
    inner.flush()?;
    Ok(())
}

struct HashingWriter<W: Write> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> HashingWriter<W> {
    fn write_all(&mut self, bytes: &[u8]) -> std::io::Result<()> {
        self.hasher.update(bytes);
        self.inner.write_all(bytes)
    }
}

/// Header fields of a checkpoint file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointInfo {
    pub config: MemoryConfig,
    pub self_play: bool,
    pub t: u32,
    pub pair_range: Range<u64>,
}

fn parse_header(bytes: &[u8]) -> Result<CheckpointInfo> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::CheckpointTruncated {
            expected: (HEADER_LEN + 8) as u64,
            found: bytes.len() as u64,
        });
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::CheckpointMagic);
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != FORMAT_VERSION {
        return Err(Error::CheckpointVersion {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let config = MemoryConfig::new(bytes[8], bytes[9])?;
    let self_play = match bytes[10] {
        0 => false,
        1 => true,
        other => return Err(Error::CheckpointHeader(format!("self-play flag {other}"))),
    };
    let n = u64_at(16);
    if n != config.strategy_count() {
        return Err(Error::CheckpointHeader(format!(
            "class {config} has {} strategies, header says {n}",
            config.strategy_count()
        )));
    }
    let start = u64_at(24);
    let len = u64_at(32);
    let end = start
        .checked_add(len)
        .filter(|&e| e <= pair_count(n, self_play))
        .ok_or_else(|| {
            Error::CheckpointHeader(format!("pair range {start}+{len} out of bounds"))
        })?;
    Ok(CheckpointInfo {
        config,
        self_play,
        t: u32_at(12),
        pair_range: start..end,
    })
}

/// Reads only the header; the checksum is not verified.
pub fn checkpoint_info(path: &Path) -> Result<CheckpointInfo> {
    let mut header = Vec::with_capacity(HEADER_LEN);
    File::open(path)?
        .take(HEADER_LEN as u64)
        .read_to_end(&mut header)?;
    parse_header(&header)
}

pub fn checkpoint_load(path: &Path) -> Result<Arena> {
    checkpoint_load_with_limit(path, u64::MAX)
}

pub fn checkpoint_load_with_limit(path: &Path, max_bytes: u64) -> Result<Arena> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN + 8 {
        return Err(Error::CheckpointTruncated {
            expected: (HEADER_LEN + 8) as u64,
            found: bytes.len() as u64,
        });
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::CheckpointMagic);
    }
    let body_len = bytes.len() - 8;
    let digest = Sha256::digest(&bytes[..body_len]);
    if digest[..8] != bytes[body_len..] {
        return Err(Error::CheckpointChecksum);
    }

    let info = parse_header(&bytes)?;
    let (config, self_play, t) = (info.config, info.self_play, info.t);
    let (start, len) = (
        info.pair_range.start,
        info.pair_range.end - info.pair_range.start,
    );
    let expected = HEADER_LEN as u64 + len * RECORD_LEN as u64 + 8;
    if expected != bytes.len() as u64 {
        return Err(Error::CheckpointTruncated {
            expected,
            found: bytes.len() as u64,
        });
    }

    let mut arena = Arena::shard(config, self_play, start..start + len, max_bytes)?;
    arena.t = t;
    for (pair, rec) in arena
        .pairs
        .iter_mut()
        .zip(bytes[HEADER_LEN..body_len].chunks_exact(RECORD_LEN))
    {
        pair.hist_a = rec[0];
        pair.hist_b = rec[1];
        for k in 0..4 {
            pair.counts[k] = u32::from_le_bytes(rec[2 + 4 * k..6 + 4 * k].try_into().unwrap());
        }
        let total: u64 = pair.counts.iter().map(|&c| c as u64).sum();
        if total != t as u64 {
            return Err(Error::CheckpointHeader(format!(
                "pair counters sum to {total}, t = {t}"
            )));
        }
    }
    Ok(arena)
}
