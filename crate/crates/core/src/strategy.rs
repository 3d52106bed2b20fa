//! Deterministic memory-bounded strategies.
//!
//! A strategy of memory configuration `own/opp` remembers its own last `own`
//! actions and the opponent's last `opp` actions. With horizon
//! `n = max(own, opp)` it consists of `n + 1` sub-strategies: one for each of
//! the first `n` iterations (the starting phase, where less history exists)
//! and one steady sub-strategy for every later iteration.
//!
//! The whole strategy is a bit vector. Sub-strategy `k` occupies a contiguous
//! segment of `2^(min(k-1, own) + min(k-1, opp))` bits, segment 1 in the lowest
//! bits. A set bit means "cooperate". Inside a segment the bit is selected by
//! the history index: the own-action block sits in the low bits and the
//! opponent block above it, and within each block more recent actions occupy
//! higher bits. The bit pattern read as an unsigned integer is the strategy id.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest genome that still fits a `u32` strategy id.
pub const MAX_GENOME_BITS: u32 = 31;

/// One move of the one-shot game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Defect = 0,
    Cooperate = 1,
}

impl Action {
    #[inline]
    pub const fn from_bit(bit: u32) -> Self {
        if bit & 1 == 1 {
            Action::Cooperate
        } else {
            Action::Defect
        }
    }

    #[inline]
    pub const fn bit(self) -> u32 {
        self as u32
    }

    pub const fn letter(self) -> char {
        match self {
            Action::Cooperate => 'C',
            Action::Defect => 'D',
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Number of remembered own and opponent actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawMemoryConfig", into = "RawMemoryConfig")]
pub struct MemoryConfig {
    own: u8,
    opp: u8,
}

#[derive(Serialize, Deserialize)]
struct RawMemoryConfig {
    own: u8,
    opp: u8,
}

impl TryFrom<RawMemoryConfig> for MemoryConfig {
    type Error = Error;

    fn try_from(raw: RawMemoryConfig) -> Result<Self> {
        MemoryConfig::new(raw.own, raw.opp)
    }
}

impl From<MemoryConfig> for RawMemoryConfig {
    fn from(config: MemoryConfig) -> Self {
        RawMemoryConfig {
            own: config.own,
            opp: config.opp,
        }
    }
}

impl MemoryConfig {
    pub fn new(own: u8, opp: u8) -> Result<Self> {
        if own > 3 || opp > 4 {
            return Err(Error::UnsupportedConfig {
                own,
                opp,
                reason: "at most 3 own and 4 opponent actions are representable",
            });
        }
        let config = MemoryConfig { own, opp };
        if config.genome_bits() > MAX_GENOME_BITS {
            return Err(Error::UnsupportedConfig {
                own,
                opp,
                reason: "genome does not fit a 31-bit strategy id",
            });
        }
        Ok(config)
    }

    pub const fn own(self) -> u8 {
        self.own
    }

    pub const fn opp(self) -> u8 {
        self.opp
    }

    /// `n = max(own, opp)`: the number of starting-phase sub-strategies.
    pub const fn horizon(self) -> u8 {
        if self.own > self.opp {
            self.own
        } else {
            self.opp
        }
    }

    pub const fn segment_count(self) -> usize {
        self.horizon() as usize + 1
    }

    /// Sub-strategy stage (0-based) applied in the given 1-based iteration.
    #[inline]
    pub fn stage_for(self, iteration: u32) -> usize {
        debug_assert!(iteration >= 1);
        (iteration as usize).min(self.segment_count()) - 1
    }

    /// Own actions consulted by the stage.
    #[inline]
    pub fn own_bits_at(self, stage: usize) -> u32 {
        stage.min(self.own as usize) as u32
    }

    /// Opponent actions consulted by the stage.
    #[inline]
    pub fn opp_bits_at(self, stage: usize) -> u32 {
        stage.min(self.opp as usize) as u32
    }

    /// Number of genome bits in the stage's segment.
    #[inline]
    pub fn segment_len(self, stage: usize) -> u32 {
        1 << (self.own_bits_at(stage) + self.opp_bits_at(stage))
    }

    /// Bit offset of the stage's segment inside the genome.
    pub fn segment_offset(self, stage: usize) -> u32 {
        (0..stage).map(|s| self.segment_len(s)).sum()
    }

    pub fn genome_bits(self) -> u32 {
        (0..self.segment_count()).map(|s| self.segment_len(s)).sum()
    }

    pub fn strategy_count(self) -> u64 {
        1u64 << self.genome_bits()
    }

    /// Every genome of the class in id order.
    pub fn genomes(self) -> impl Iterator<Item = StrategyGenome> + Clone {
        (0..self.strategy_count()).map(move |id| StrategyGenome {
            config: self,
            id: id as u32,
        })
    }
}

impl fmt::Display for MemoryConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.own, self.opp)
    }
}

impl FromStr for MemoryConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidExperiment(format!(
                "memory configuration {s:?} is not of the form own/opp"
            ))
        };
        let (own, opp) = s.split_once('/').ok_or_else(bad)?;
        let own = own.trim().parse().map_err(|_| bad())?;
        let opp = opp.trim().parse().map_err(|_| bad())?;
        MemoryConfig::new(own, opp)
    }
}

/// Total genome length of a configuration.
pub fn genome_bits(config: MemoryConfig) -> u32 {
    config.genome_bits()
}

/// Index of the decision bit inside the sub-strategy segment used at
/// `iteration`. Histories are newest-last and only their tails are read.
pub fn history_index(
    config: MemoryConfig,
    iteration: u32,
    own_hist: &[Action],
    opp_hist: &[Action],
) -> Result<u32> {
    let stage = config.stage_for(iteration.max(1));
    let own_needed = config.own_bits_at(stage) as usize;
    let opp_needed = config.opp_bits_at(stage) as usize;
    if own_hist.len() < own_needed || opp_hist.len() < opp_needed {
        return Err(Error::InsufficientHistory {
            iteration,
            own_needed,
            opp_needed,
            own_given: own_hist.len(),
            opp_given: opp_hist.len(),
        });
    }
    let own_tail = &own_hist[own_hist.len() - own_needed..];
    let opp_tail = &opp_hist[opp_hist.len() - opp_needed..];
    let own_block = own_tail
        .iter()
        .enumerate()
        .fold(0u32, |acc, (i, a)| acc | a.bit() << i);
    let opp_block = opp_tail
        .iter()
        .enumerate()
        .fold(0u32, |acc, (i, a)| acc | a.bit() << i);
    Ok(own_block | opp_block << own_needed)
}

/// Appends `action` to a packed history register of `width` bits. The most
/// recent action sits in the highest bit.
#[inline]
pub(crate) fn push_register(reg: u32, action: u32, width: u32) -> u32 {
    if width == 0 {
        0
    } else {
        (reg >> 1) | (action << (width - 1))
    }
}

/// Segment index computed from packed registers of width `horizon`.
#[inline]
pub(crate) fn register_index(
    config: MemoryConfig,
    stage: usize,
    own_reg: u32,
    opp_reg: u32,
) -> u32 {
    let width = config.horizon() as u32;
    let m_own = config.own_bits_at(stage);
    let m_opp = config.opp_bits_at(stage);
    let own_block = if m_own == 0 {
        0
    } else {
        own_reg >> (width - m_own)
    };
    let opp_block = if m_opp == 0 {
        0
    } else {
        opp_reg >> (width - m_opp)
    };
    own_block | opp_block << m_own
}

/// A complete deterministic strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyGenome {
    config: MemoryConfig,
    id: u32,
}

impl StrategyGenome {
    pub fn new(config: MemoryConfig, id: u64) -> Result<Self> {
        if id >= config.strategy_count() {
            return Err(Error::GenomeOutOfRange { id, config });
        }
        Ok(StrategyGenome {
            config,
            id: id as u32,
        })
    }

    /// Builds a genome from one integer per sub-strategy.
    pub fn from_segments(config: MemoryConfig, segments: &[u64]) -> Result<Self> {
        if segments.len() != config.segment_count() {
            return Err(Error::ParseStrategy {
                text: format!("{segments:?}"),
                reason: format!(
                    "configuration {config} has {} sub-strategies, got {}",
                    config.segment_count(),
                    segments.len()
                ),
            });
        }
        let mut id = 0u64;
        for (stage, &value) in segments.iter().enumerate() {
            let len = config.segment_len(stage);
            if value >> len != 0 {
                return Err(Error::ParseStrategy {
                    text: format!("{segments:?}"),
                    reason: format!(
                        "sub-strategy {} value {value} exceeds {len} bits",
                        stage + 1
                    ),
                });
            }
            id |= value << config.segment_offset(stage);
        }
        StrategyGenome::new(config, id)
    }

    /// Builds the genome that plays `rule(own_hist, opp_hist)` for every
    /// history case. `rule` receives the consulted tails, newest-last.
    pub fn from_rule(config: MemoryConfig, rule: impl Fn(&[Action], &[Action]) -> Action) -> Self {
        let mut id = 0u32;
        for stage in 0..config.segment_count() {
            let m_own = config.own_bits_at(stage);
            let m_opp = config.opp_bits_at(stage);
            for index in 0..config.segment_len(stage) {
                let own: Vec<Action> = (0..m_own).map(|i| Action::from_bit(index >> i)).collect();
                let opp: Vec<Action> = (0..m_opp)
                    .map(|i| Action::from_bit(index >> (m_own + i)))
                    .collect();
                if rule(&own, &opp) == Action::Cooperate {
                    id |= 1 << (config.segment_offset(stage) + index);
                }
            }
        }
        StrategyGenome { config, id }
    }

    pub fn always_defect(config: MemoryConfig) -> Self {
        StrategyGenome { config, id: 0 }
    }

    pub fn always_cooperate(config: MemoryConfig) -> Self {
        StrategyGenome::from_rule(config, |_, _| Action::Cooperate)
    }

    /// Cooperate first, then repeat the opponent's last action.
    pub fn tit_for_tat(config: MemoryConfig) -> Self {
        StrategyGenome::from_rule(config, |_, opp| {
            opp.last().copied().unwrap_or(Action::Cooperate)
        })
    }

    /// Cooperate first, then cooperate iff own and opponent's last actions agree.
    pub fn pavlov(config: MemoryConfig) -> Self {
        StrategyGenome::from_rule(config, |own, opp| match (own.last(), opp.last()) {
            (Some(a), Some(b)) => Action::from_bit((a == b) as u32),
            (None, Some(b)) => *b,
            _ => Action::Cooperate,
        })
    }

    pub const fn config(&self) -> MemoryConfig {
        self.config
    }

    pub const fn id(&self) -> u32 {
        self.id
    }

    /// The integer value of one sub-strategy segment.
    pub fn segment(&self, stage: usize) -> u32 {
        let len = self.config.segment_len(stage);
        let mask = if len >= 32 {
            u32::MAX
        } else {
            (1u32 << len) - 1
        };
        (self.id >> self.config.segment_offset(stage)) & mask
    }

    pub fn segments(&self) -> Vec<u32> {
        (0..self.config.segment_count())
            .map(|s| self.segment(s))
            .collect()
    }

    #[inline]
    pub(crate) fn bit_at(&self, stage: usize, index: u32) -> u32 {
        (self.id >> (self.config.segment_offset(stage) + index)) & 1
    }

    /// The action at `iteration` (1-based) given newest-last histories.
    ///
    /// # Panics
    /// If a history is shorter than what the iteration's sub-strategy reads.
    pub fn decide(&self, iteration: u32, own_hist: &[Action], opp_hist: &[Action]) -> Action {
        let index = history_index(self.config, iteration, own_hist, opp_hist)
            .expect("history shorter than the sub-strategy's memory window");
        Action::from_bit(self.bit_at(self.config.stage_for(iteration), index))
    }

    /// Display notation `(s1/s2/.../s(n+1))`.
    pub fn render_display(&self) -> String {
        let parts: Vec<String> = self.segments().iter().map(u32::to_string).collect();
        format!("({})", parts.join("/"))
    }

    /// Parses `(s1/.../s(n+1))`; the parentheses are optional.
    pub fn parse_display(config: MemoryConfig, text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(trimmed);
        let segments = inner
            .split('/')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::ParseStrategy {
                        text: text.to_string(),
                        reason: format!("component {part:?}: {e}"),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        StrategyGenome::from_segments(config, &segments).map_err(|e| match e {
            Error::ParseStrategy { reason, .. } => Error::ParseStrategy {
                text: text.to_string(),
                reason,
            },
            other => other,
        })
    }

    /// A plain-language rendering of every sub-strategy.
    pub fn describe(&self) -> String {
        let config = self.config;
        let mut out = String::new();
        for stage in 0..config.segment_count() {
            let when = if stage == config.horizon() as usize {
                format!("iteration {} onward", stage + 1)
            } else {
                format!("iteration {}", stage + 1)
            };
            let m_own = config.own_bits_at(stage);
            let m_opp = config.opp_bits_at(stage);
            let len = config.segment_len(stage);
            let seg = self.segment(stage);
            if seg == 0 || seg.count_ones() == len {
                let verb = if seg == 0 { "defect" } else { "cooperate" };
                out.push_str(&format!("{when}: {verb}\n"));
                continue;
            }
            if m_own.max(m_opp) > 1 {
                out.push_str(&format!("{when}: cooperate after (oldest action first)\n"));
            } else {
                out.push_str(&format!("{when}: cooperate after\n"));
            }
            for index in (0..len).filter(|i| seg >> i & 1 == 1) {
                let own: String = (0..m_own)
                    .map(|i| Action::from_bit(index >> i).letter())
                    .collect();
                let opp: String = (0..m_opp)
                    .map(|i| Action::from_bit(index >> (m_own + i)).letter())
                    .collect();
                let mut case = Vec::new();
                if m_own > 0 {
                    case.push(format!("own {own}"));
                }
                if m_opp > 0 {
                    case.push(format!("opponent {opp}"));
                }
                out.push_str(&format!("  {}\n", case.join(", ")));
            }
        }
        if let Some(name) = self.well_known_name() {
            out.push_str(&format!("behaves as {name}\n"));
        }
        out
    }

    /// Name of a classic strategy this genome is behaviorally equivalent to.
    pub fn well_known_name(&self) -> Option<&'static str> {
        let config = self.config;
        let class = behavioral_class(*self);
        let same = |other: StrategyGenome| class.contains(other.id);
        if same(StrategyGenome::always_defect(config)) {
            Some("always defect")
        } else if same(StrategyGenome::always_cooperate(config)) {
            Some("always cooperate")
        } else if config.opp() >= 1 && same(StrategyGenome::tit_for_tat(config)) {
            Some("tit-for-tat")
        } else if config.own() >= 1 && config.opp() >= 1 && same(StrategyGenome::pavlov(config)) {
            Some("pavlov")
        } else {
            None
        }
    }
}

impl fmt::Display for StrategyGenome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_display())
    }
}

/// Genomes that differ only in sub-strategy bits no game can ever consult.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceClass {
    pub representative: u32,
    /// Sorted ids, representative first.
    pub members: Vec<u32>,
}

impl EquivalenceClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.members.binary_search(&id).is_ok()
    }
}

/// How far the unreachability analysis looks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reachability {
    /// Starting-phase segments are pruned by the strategy's own forced
    /// earlier actions; the steady segment counts as fully reachable. This
    /// is the four-way equivalence reported for the one-own-two-opponent class.
    StartingPhase,
    /// The steady segment is pruned as well, by exploring every state the
    /// strategy can reach against an arbitrary opponent.
    Full,
}

/// Equivalence class under [`Reachability::StartingPhase`].
pub fn canonicalize(genome: StrategyGenome) -> EquivalenceClass {
    equivalence_class(genome, Reachability::StartingPhase)
}

/// Equivalence class under [`Reachability::Full`].
pub fn behavioral_class(genome: StrategyGenome) -> EquivalenceClass {
    equivalence_class(genome, Reachability::Full)
}

pub fn equivalence_class(genome: StrategyGenome, mode: Reachability) -> EquivalenceClass {
    let mask = reachable_mask(genome, mode);
    let all = (genome.config.strategy_count() - 1) as u32;
    let free = all & !mask;
    let representative = genome.id & mask;
    // Enumerate submasks of `free` in increasing order.
    let mut members = Vec::with_capacity(1 << free.count_ones());
    let mut sub = 0u32;
    loop {
        members.push(representative | sub);
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
    members.sort_unstable();
    EquivalenceClass {
        representative,
        members,
    }
}

/// Genome bit positions that some opponent can make the strategy consult.
pub fn reachable_mask(genome: StrategyGenome, mode: Reachability) -> u32 {
    let config = genome.config;
    let width = config.horizon() as u32;
    let steady = config.horizon() as usize;
    let mut mask = 0u32;

    // Registers after `moves` iterations for every opponent move sequence.
    let histories = |moves: usize| -> Vec<(u32, u32)> {
        (0..1u32 << moves)
            .map(|opp_seq| {
                let (mut own_reg, mut opp_reg) = (0u32, 0u32);
                for it in 0..moves {
                    let stage = it.min(steady);
                    let action =
                        genome.bit_at(stage, register_index(config, stage, own_reg, opp_reg));
                    own_reg = push_register(own_reg, action, width);
                    opp_reg = push_register(opp_reg, opp_seq >> it & 1, width);
                }
                (own_reg, opp_reg)
            })
            .collect()
    };

    for stage in 0..steady {
        for (own_reg, opp_reg) in histories(stage) {
            mask |= 1
                << (config.segment_offset(stage) + register_index(config, stage, own_reg, opp_reg));
        }
    }

    let steady_offset = config.segment_offset(steady);
    match mode {
        Reachability::StartingPhase => {
            let len = config.segment_len(steady);
            let seg_mask = if len >= 32 {
                u32::MAX
            } else {
                (1u32 << len) - 1
            };
            mask |= seg_mask << steady_offset;
        }
        Reachability::Full => {
            let mut seen: HashSet<(u32, u32)> = HashSet::new();
            let mut frontier = histories(steady);
            while let Some(state) = frontier.pop() {
                if !seen.insert(state) {
                    continue;
                }
                let (own_reg, opp_reg) = state;
                let index = register_index(config, steady, own_reg, opp_reg);
                mask |= 1 << (steady_offset + index);
                let action = genome.bit_at(steady, index);
                let next_own = push_register(own_reg, action, width);
                for opp_action in 0..2 {
                    frontier.push((next_own, push_register(opp_reg, opp_action, width)));
                }
            }
        }
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use Action::{Cooperate as C, Defect as D};

    fn cfg(own: u8, opp: u8) -> MemoryConfig {
        MemoryConfig::new(own, opp).unwrap()
    }

    #[test]
    fn genome_bits_match_class_sizes() {
        let expected = [
            ((0, 0), 1),
            ((0, 1), 3),
            ((1, 1), 5),
            ((0, 2), 7),
            ((1, 2), 13),
            ((2, 1), 13),
            ((0, 3), 15),
            ((2, 2), 21),
            ((1, 3), 29),
            ((3, 1), 29),
            ((0, 4), 31),
        ];
        for ((own, opp), bits) in expected {
            assert_eq!(genome_bits(cfg(own, opp)), bits, "{own}/{opp}");
        }
        assert_eq!(cfg(0, 3).strategy_count(), 32_768);
    }

    #[test]
    fn oversized_configs_are_rejected() {
        assert!(MemoryConfig::new(2, 3).is_err());
        assert!(MemoryConfig::new(4, 0).is_err());
        assert!(MemoryConfig::new(0, 5).is_err());
    }

    #[test]
    fn history_index_orders_own_block_below_opponent_block() {
        assert_eq!(history_index(cfg(1, 2), 3, &[C], &[D, C]).unwrap(), 5);
        assert_eq!(
            history_index(cfg(1, 2), 9, &[D, D, C], &[C, C, D, C]).unwrap(),
            5
        );
        assert_eq!(history_index(cfg(0, 3), 4, &[], &[C, C, D]).unwrap(), 3);
        assert_eq!(history_index(cfg(0, 0), 7, &[], &[]).unwrap(), 0);
        // Starting phase reads fewer bits.
        assert_eq!(history_index(cfg(0, 3), 2, &[], &[C]).unwrap(), 1);
    }

    #[test]
    fn opponent_index_assignment_is_the_only_one_where_tft_defects() {
        // Enumerate all opponent 3-histories; TFT (1/2/12/240) must defect
        // exactly when the newest action is a defection.
        let tft = StrategyGenome::parse_display(cfg(0, 3), "(1/2/12/240)").unwrap();
        for h in 0..8u32 {
            let hist: Vec<Action> = (0..3).map(|i| Action::from_bit(h >> i)).collect();
            assert_eq!(tft.decide(4, &[], &hist), hist[2]);
        }
        assert_eq!(history_index(cfg(0, 3), 4, &[], &[C, C, D]).unwrap(), 3);
        assert_eq!(tft.decide(4, &[], &[C, C, D]), D);
    }

    #[test]
    fn insufficient_history_is_an_error() {
        assert!(matches!(
            history_index(cfg(1, 2), 3, &[], &[C, C]),
            Err(Error::InsufficientHistory { .. })
        ));
        assert!(history_index(cfg(1, 2), 3, &[C], &[C]).is_err());
    }

    #[test]
    fn named_strategies_have_expected_ids() {
        assert_eq!(
            StrategyGenome::tit_for_tat(cfg(0, 3)).render_display(),
            "(1/2/12/240)"
        );
        assert_eq!(
            StrategyGenome::tit_for_tat(cfg(0, 1)).render_display(),
            "(1/2)"
        );
        assert_eq!(
            StrategyGenome::tit_for_tat(cfg(1, 1)).render_display(),
            "(1/12)"
        );
        assert_eq!(
            StrategyGenome::tit_for_tat(cfg(0, 2)).render_display(),
            "(1/2/12)"
        );
        assert_eq!(StrategyGenome::pavlov(cfg(1, 1)).render_display(), "(1/9)");
        assert_eq!(
            StrategyGenome::always_defect(cfg(0, 1)).render_display(),
            "(0/0)"
        );
        assert_eq!(
            StrategyGenome::always_cooperate(cfg(0, 1)).render_display(),
            "(1/3)"
        );
    }

    #[test]
    fn decide_examples() {
        let tft = StrategyGenome::tit_for_tat(cfg(0, 3));
        assert_eq!(tft.decide(1, &[], &[]), C);
        assert_eq!(tft.decide(4, &[], &[C, C, D]), D);
        let pavlov = StrategyGenome::parse_display(cfg(1, 1), "(1/9)").unwrap();
        assert_eq!(pavlov.decide(2, &[C], &[D]), D);
        assert_eq!(pavlov.decide(5, &[D], &[D]), C);
        assert_eq!(pavlov.decide(5, &[C], &[C]), C);
    }

    #[test]
    fn zero_own_memory_never_reads_own_history() {
        for (own, opp) in [(0, 1), (0, 2), (0, 3)] {
            let config = cfg(own, opp);
            let n = config.horizon() as usize;
            for genome in config.genomes().step_by(37) {
                for it in 1..=(n as u32 + 2) {
                    let len = (it as usize - 1).min(n);
                    for opp_h in 0..1u32 << len {
                        let opp_hist: Vec<Action> =
                            (0..len).map(|i| Action::from_bit(opp_h >> i)).collect();
                        let first = genome.decide(it, &vec![D; len], &opp_hist);
                        for own_h in 1..1u32 << len {
                            let own_hist: Vec<Action> =
                                (0..len).map(|i| Action::from_bit(own_h >> i)).collect();
                            assert_eq!(genome.decide(it, &own_hist, &opp_hist), first);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn display_round_trip_and_errors() {
        let alld = StrategyGenome::parse_display(cfg(0, 1), "(0/0)").unwrap();
        assert_eq!(alld, StrategyGenome::always_defect(cfg(0, 1)));
        for g in cfg(1, 1).genomes() {
            let text = g.render_display();
            assert_eq!(StrategyGenome::parse_display(cfg(1, 1), &text).unwrap(), g);
        }
        assert!(StrategyGenome::parse_display(cfg(0, 3), "(1/2/12)").is_err());
        assert!(StrategyGenome::parse_display(cfg(0, 3), "(1/4/12/240)").is_err());
        assert!(StrategyGenome::parse_display(cfg(0, 1), "(x/1)").is_err());
        assert_eq!(
            StrategyGenome::parse_display(cfg(0, 3), " 1/2/12/240 ")
                .unwrap()
                .id(),
            StrategyGenome::tit_for_tat(cfg(0, 3)).id()
        );
    }

    #[test]
    fn tft_variants_form_one_class_of_four() {
        let config = cfg(1, 2);
        let g = StrategyGenome::parse_display(config, "(1/9/240)").unwrap();
        let class = canonicalize(g);
        let rep = StrategyGenome::new(config, class.representative as u64).unwrap();
        assert_eq!(rep.render_display(), "(1/8/240)");
        let names: Vec<String> = class
            .members
            .iter()
            .map(|&id| {
                StrategyGenome::new(config, id as u64)
                    .unwrap()
                    .render_display()
            })
            .collect();
        assert_eq!(
            names,
            ["(1/8/240)", "(1/9/240)", "(1/12/240)", "(1/13/240)"]
        );
    }

    #[test]
    fn starting_phase_shortcuts_hold_in_one_own_two_opponent_class() {
        // Initial defection frees 2, 8 and 10 in the middle number, initial
        // cooperation frees 1, 4 and 5.
        let config = cfg(1, 2);
        for g in config.genomes().step_by(13) {
            let class = canonicalize(g);
            assert_eq!(class.len(), 4);
            let rep = StrategyGenome::new(config, class.representative as u64).unwrap();
            let offsets: &[u32] = if rep.segment(0) == 0 {
                &[0, 2, 8, 10]
            } else {
                &[0, 1, 4, 5]
            };
            let mut expected: Vec<u32> = offsets
                .iter()
                .map(|&d| {
                    StrategyGenome::from_segments(
                        config,
                        &[
                            rep.segment(0) as u64,
                            (rep.segment(1) + d) as u64,
                            rep.segment(2) as u64,
                        ],
                    )
                    .unwrap()
                    .id()
                })
                .collect();
            expected.sort_unstable();
            assert_eq!(class.members, expected);
        }
    }

    #[test]
    fn zero_own_memory_classes_are_singletons() {
        for g in cfg(0, 1).genomes() {
            assert_eq!(canonicalize(g).members, vec![g.id()]);
            assert_eq!(behavioral_class(g).members, vec![g.id()]);
        }
    }

    #[test]
    fn behavioral_class_merges_never_cooperating_variants() {
        // (0/0), (0/2), (0/8), (0/10) never leave own defection.
        let config = cfg(1, 1);
        let class = behavioral_class(StrategyGenome::parse_display(config, "(0/10)").unwrap());
        let names: Vec<String> = class
            .members
            .iter()
            .map(|&id| {
                StrategyGenome::new(config, id as u64)
                    .unwrap()
                    .render_display()
            })
            .collect();
        assert_eq!(names, ["(0/0)", "(0/2)", "(0/8)", "(0/10)"]);
    }

    #[test]
    fn well_known_names() {
        assert_eq!(
            StrategyGenome::tit_for_tat(cfg(1, 2)).well_known_name(),
            Some("tit-for-tat")
        );
        assert_eq!(
            StrategyGenome::always_defect(cfg(0, 2)).well_known_name(),
            Some("always defect")
        );
        assert_eq!(
            StrategyGenome::parse_display(cfg(1, 1), "(1/9)")
                .unwrap()
                .well_known_name(),
            Some("pavlov")
        );
        assert!(StrategyGenome::tit_for_tat(cfg(0, 3))
            .describe()
            .contains("tit-for-tat"));
    }
}
