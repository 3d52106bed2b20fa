//! Winner series over iteration steps, stabilization and oscillation
//! detection, and report tables.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::payoff::{self, PayoffMatrix};
use crate::strategy::{canonicalize, MemoryConfig, StrategyGenome};
use crate::tournament::TournamentOutcome;

pub const DEFAULT_MAX_PERIOD: u32 = 8;

/// Winner sets at one evaluated iteration step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub t: u32,
    pub g1_winners: Vec<u32>,
    pub champions: Vec<u32>,
}

/// Winner sets of one matrix across evaluated steps, `t` strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinnerSeries {
    #[serde(with = "payoff::key_format")]
    pub matrix: PayoffMatrix,
    pub entries: Vec<SeriesEntry>,
}

impl WinnerSeries {
    pub fn new(matrix: PayoffMatrix) -> Self {
        WinnerSeries {
            matrix,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, outcome: &TournamentOutcome) -> Result<()> {
        if let Some(last) = self.entries.last() {
            if outcome.t <= last.t {
                return Err(Error::InvalidExperiment(format!(
                    "series for {} already reached t = {}, got t = {}",
                    self.matrix, last.t, outcome.t
                )));
            }
        }
        self.entries.push(SeriesEntry {
            t: outcome.t,
            g1_winners: outcome.g1_winners.clone(),
            champions: outcome.champions.clone(),
        });
        Ok(())
    }
}

/// Winner sets of one phase of a periodic tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseWinners {
    pub g1_winners: Vec<u32>,
    pub champions: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityRecord {
    #[serde(with = "payoff::key_format")]
    pub matrix: PayoffMatrix,
    /// First iteration step of the periodic tail.
    pub first_it: u32,
    /// 1 for a stable result, 0 when no periodic tail was found.
    pub period: u32,
    pub winners_by_phase: Vec<PhaseWinners>,
}

impl StabilityRecord {
    pub fn is_stable(&self) -> bool {
        self.period == 1
    }

    /// Union over phases.
    pub fn all_champions(&self) -> Vec<u32> {
        union(self.winners_by_phase.iter().map(|p| &p.champions))
    }

    pub fn all_g1_winners(&self) -> Vec<u32> {
        union(self.winners_by_phase.iter().map(|p| &p.g1_winners))
    }

    /// Champions present in every phase.
    pub fn steady_champions(&self) -> Vec<u32> {
        intersection(self.winners_by_phase.iter().map(|p| &p.champions))
    }

    pub fn steady_g1_winners(&self) -> Vec<u32> {
        intersection(self.winners_by_phase.iter().map(|p| &p.g1_winners))
    }
}

fn union<'a>(sets: impl Iterator<Item = &'a Vec<u32>>) -> Vec<u32> {
    let all: BTreeSet<u32> = sets.flatten().copied().collect();
    all.into_iter().collect()
}

fn intersection<'a>(mut sets: impl Iterator<Item = &'a Vec<u32>>) -> Vec<u32> {
    let Some(first) = sets.next() else {
        return Vec::new();
    };
    let mut acc: BTreeSet<u32> = first.iter().copied().collect();
    for s in sets {
        let other: BTreeSet<u32> = s.iter().copied().collect();
        acc = acc.intersection(&other).copied().collect();
    }
    acc.into_iter().collect()
}

/// Smallest start index and, for it, smallest period `p <= max_period` such
/// that `items[k] == items[k + p]` for every `k` in the tail. The tail must
/// cover the period at least twice.
pub fn periodic_tail<T: PartialEq>(items: &[T], max_period: usize) -> Option<(usize, usize)> {
    let len = items.len();
    let mut best: Option<(usize, usize)> = None;
    for p in 1..=max_period.min(len / 2) {
        // Walk back while the tail keeps repeating with period p.
        let mut start = len - p;
        while start > 0 && items[start - 1] == items[start - 1 + p] {
            start -= 1;
        }
        if len - start < 2 * p {
            continue;
        }
        if best.is_none_or(|(s, _)| start < s) {
            best = Some((start, p));
        }
    }
    best
}

/// Which part of the winner sets decides stability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityKey {
    /// First-round winners and champions together.
    Joint,
    G1Winners,
    Champions,
}

pub fn detect_stability(series: &WinnerSeries, max_period: u32) -> Result<StabilityRecord> {
    detect_stability_by(series, max_period, StabilityKey::Joint)
}

pub fn detect_stability_by(
    series: &WinnerSeries,
    max_period: u32,
    key: StabilityKey,
) -> Result<StabilityRecord> {
    if series.entries.is_empty() {
        return Err(Error::InvalidExperiment(format!(
            "empty series for {}",
            series.matrix
        )));
    }
    if max_period == 0 {
        return Err(Error::InvalidExperiment(
            "max period must be at least 1".into(),
        ));
    }
    let keys: Vec<(&[u32], &[u32])> = series
        .entries
        .iter()
        .map(|e| match key {
            StabilityKey::Joint => (e.g1_winners.as_slice(), e.champions.as_slice()),
            StabilityKey::G1Winners => (e.g1_winners.as_slice(), &[][..]),
            StabilityKey::Champions => (&[][..], e.champions.as_slice()),
        })
        .collect();
    let phase = |e: &SeriesEntry| PhaseWinners {
        g1_winners: e.g1_winners.clone(),
        champions: e.champions.clone(),
    };
    Ok(match periodic_tail(&keys, max_period as usize) {
        Some((start, period)) => StabilityRecord {
            matrix: series.matrix,
            first_it: series.entries[start].t,
            period: period as u32,
            winners_by_phase: series.entries[start..start + period]
                .iter()
                .map(phase)
                .collect(),
        },
        None => StabilityRecord {
            matrix: series.matrix,
            first_it: series.entries.last().unwrap().t,
            period: 0,
            winners_by_phase: vec![phase(series.entries.last().unwrap())],
        },
    })
}

/// Iteration steps at which to score: every step up to `dense_phase`, then
/// the hundred steps ahead of each full thousand (and ahead of the final
/// step when it is not a multiple of a thousand).
pub fn evaluation_schedule(total_iterations: u32, dense_phase: u32) -> Vec<u32> {
    let dense = dense_phase.min(total_iterations);
    let mut steps: Vec<u32> = (1..=dense).collect();
    let mut add_block = |end: u32| {
        let from = end.saturating_sub(99).max(dense + 1);
        for t in from..=end {
            if steps.last().is_none_or(|&l| t > l) {
                steps.push(t);
            }
        }
    };
    let mut thousand = 1000;
    while thousand <= total_iterations {
        if thousand > dense {
            add_block(thousand);
        }
        thousand += 1000;
    }
    if total_iterations > dense && !total_iterations.is_multiple_of(1000) {
        add_block(total_iterations);
    }
    steps
}

/// Output format of [`render_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "T",
    "R",
    "P",
    "first_it",
    "period",
    "g1_winners",
    "champions",
    "phase_annotations",
];

/// Sets with more distinct canonical strategies than this use `∨` notation.
pub const COMPACT_THRESHOLD: usize = 8;

/// One CSV row of a record, with winners rendered for class `config`.
pub fn report_row(config: MemoryConfig, record: &StabilityRecord) -> Vec<String> {
    let m = &record.matrix;
    let mut notes = Vec::new();
    let period = record.winners_by_phase.len();
    if period > 1 {
        for (label, steady, phases) in [
            (
                "g1",
                record.steady_g1_winners(),
                record
                    .winners_by_phase
                    .iter()
                    .map(|p| &p.g1_winners)
                    .collect::<Vec<_>>(),
            ),
            (
                "champions",
                record.steady_champions(),
                record
                    .winners_by_phase
                    .iter()
                    .map(|p| &p.champions)
                    .collect(),
            ),
        ] {
            for (q, set) in phases.iter().enumerate() {
                let extra: Vec<u32> = set
                    .iter()
                    .copied()
                    .filter(|i| !steady.contains(i))
                    .collect();
                if !extra.is_empty() {
                    notes.push(format!(
                        "{label} phase {}/{period}: {}",
                        q + 1,
                        winner_notation(config, &extra)
                    ));
                }
            }
        }
    }
    vec![
        m.t().to_string(),
        m.r().to_string(),
        m.p().to_string(),
        record.first_it.to_string(),
        record.period.to_string(),
        winner_notation(config, &record.all_g1_winners()),
        winner_notation(config, &record.all_champions()),
        notes.join("; "),
    ]
}

pub fn render_report(
    config: MemoryConfig,
    records: &[StabilityRecord],
    format: ReportFormat,
) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(records)? + "\n"),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for record in records {
                w.write_record(report_row(config, record))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

/// Parses a report in JSON format.
pub fn parse_report_json(text: &str) -> Result<Vec<StabilityRecord>> {
    Ok(serde_json::from_str(text)?)
}

/// Renders a winner set: canonical representatives in display notation,
/// `∨`-compressed when the set is large.
pub fn winner_notation(config: MemoryConfig, ids: &[u32]) -> String {
    let reps: BTreeSet<u32> = ids
        .iter()
        .map(|&id| canonicalize(genome(config, id)).representative)
        .collect();
    if reps.len() > COMPACT_THRESHOLD {
        compact_notation(config, &reps.into_iter().collect::<Vec<_>>())
    } else {
        reps.iter()
            .map(|&id| genome(config, id).render_display())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn genome(config: MemoryConfig, id: u32) -> StrategyGenome {
    StrategyGenome::new(config, id as u64).expect("winner id within class")
}

/// Covers the set with cartesian products of per-segment value sets and
/// renders each as `(a∨b/c/d∨e)`.
pub fn compact_notation(config: MemoryConfig, ids: &[u32]) -> String {
    let mut boxes: Vec<Vec<BTreeSet<u32>>> = ids
        .iter()
        .map(|&id| {
            genome(config, id)
                .segments()
                .into_iter()
                .map(|v| BTreeSet::from([v]))
                .collect()
        })
        .collect();
    // Merge boxes differing in exactly one segment until none do. Merging
    // preserves the product structure, so the cover stays exact.
    loop {
        let mut merged = false;
        'outer: for a in 0..boxes.len() {
            for b in a + 1..boxes.len() {
                let differing: Vec<usize> = (0..boxes[a].len())
                    .filter(|&s| boxes[a][s] != boxes[b][s])
                    .collect();
                if differing.len() == 1 {
                    let s = differing[0];
                    let other = boxes.remove(b);
                    boxes[a][s].extend(other[s].iter().copied());
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    boxes.sort();
    boxes
        .iter()
        .map(|b| {
            let parts: Vec<String> = b
                .iter()
                .map(|vals| {
                    vals.iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join("∨")
                })
                .collect();
            format!("({})", parts.join("/"))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Expands `∨` notation back into the ids it covers.
pub fn expand_notation(config: MemoryConfig, text: &str) -> Result<Vec<u32>> {
    let mut ids = BTreeSet::new();
    for item in split_items(text) {
        let inner = item
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(item);
        let options: Vec<Vec<u64>> = inner
            .split('/')
            .map(|seg| {
                seg.split('∨')
                    .map(|v| {
                        v.trim().parse::<u64>().map_err(|e| Error::ParseStrategy {
                            text: item.to_string(),
                            reason: e.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut combos: Vec<Vec<u64>> = vec![Vec::new()];
        for opts in &options {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    opts.iter().map(move |&v| {
                        let mut c = c.clone();
                        c.push(v);
                        c
                    })
                })
                .collect();
        }
        for segments in combos {
            ids.insert(StrategyGenome::from_segments(config, &segments)?.id());
        }
    }
    Ok(ids.into_iter().collect())
}

fn split_items(text: &str) -> impl Iterator<Item = &str> {
    text.split("),")
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.trim_end_matches(')').trim_start_matches('('))
}
