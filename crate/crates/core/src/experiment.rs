//! Batch experiments: stepping an arena, scoring a payoff suite on an
//! evaluation schedule, reports, checkpoints, and verification against
//! reference tables.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    detect_stability, evaluation_schedule, render_report, winner_notation, ReportFormat,
    StabilityRecord, WinnerSeries, DEFAULT_MAX_PERIOD,
};
use crate::error::{Error, Result};
use crate::match_engine::{
    checkpoint_load_with_limit, checkpoint_save, worker_pool, Arena, DEFAULT_MAX_ARENA_BYTES,
};
use crate::payoff::{standard_suite, PayoffMatrix};
use crate::strategy::{canonicalize, MemoryConfig, StrategyGenome};
use crate::tournament::run_suite;

/// Environment variable that takes precedence over the configured output
/// directory.
pub const OUT_ENV: &str = "IPD_ARENA_OUT";

pub const CHECKPOINT_FILE: &str = "checkpoint.ipda";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SERIES_FILE: &str = "series.json";

/// Iterations run by default: 1000 for `0/1`, 10,000 for everything else.
pub fn default_iterations(memory: MemoryConfig) -> u32 {
    if memory.own() == 0 && memory.opp() == 1 {
        1000
    } else {
        10_000
    }
}

/// Output directory after applying [`OUT_ENV`].
pub fn resolve_out_dir(configured: &Path) -> PathBuf {
    match std::env::var_os(OUT_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => configured.to_path_buf(),
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub memory: MemoryConfig,
    pub self_play: bool,
    pub total_iterations: u32,
    /// Every step up to here is scored; afterwards only the hundred steps
    /// ahead of each thousand.
    pub dense_phase: u32,
    pub suite: Vec<PayoffMatrix>,
    pub workers: usize,
    /// Write a checkpoint every this many iterations; 0 writes only the final one.
    pub checkpoint_every: u32,
    pub out_dir: PathBuf,
    pub resume: Option<PathBuf>,
    pub format: ReportFormat,
    pub max_period: u32,
    pub max_arena_bytes: u64,
    /// Report progress on standard error.
    pub progress: bool,
}

impl ExperimentConfig {
    pub fn new(memory: MemoryConfig) -> Self {
        let total = default_iterations(memory);
        ExperimentConfig {
            memory,
            self_play: true,
            total_iterations: total,
            dense_phase: total,
            suite: standard_suite(),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            checkpoint_every: 0,
            out_dir: PathBuf::from("ipd-arena-out"),
            resume: None,
            format: ReportFormat::Csv,
            max_period: DEFAULT_MAX_PERIOD,
            max_arena_bytes: DEFAULT_MAX_ARENA_BYTES,
            progress: false,
        }
    }

    /// True when some steps are not scored, making `first_it` approximate.
    pub fn is_sparse(&self) -> bool {
        self.dense_phase < self.total_iterations
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_iterations == 0 {
            return Err(Error::InvalidExperiment(
                "total iterations must be at least 1".into(),
            ));
        }
        if self.workers == 0 {
            return Err(Error::InvalidExperiment(
                "worker count must be at least 1".into(),
            ));
        }
        if self.suite.is_empty() {
            return Err(Error::InvalidExperiment("payoff suite is empty".into()));
        }
        if self.max_period == 0 {
            return Err(Error::InvalidExperiment(
                "max period must be at least 1".into(),
            ));
        }
        let keys: BTreeSet<String> = self.suite.iter().map(PayoffMatrix::key).collect();
        if keys.len() != self.suite.len() {
            return Err(Error::InvalidExperiment(
                "payoff suite lists a matrix twice".into(),
            ));
        }
        Ok(())
    }
}

/// Arena state plus every winner series scored so far.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub arena: Arena,
    pub series: Vec<WinnerSeries>,
}

impl Simulation {
    pub fn start(config: &ExperimentConfig) -> Result<Self> {
        Ok(Simulation {
            arena: Arena::with_limit(config.memory, config.self_play, config.max_arena_bytes)?,
            series: config.suite.iter().map(|m| WinnerSeries::new(*m)).collect(),
        })
    }

    pub fn records(&self, max_period: u32) -> Result<Vec<StabilityRecord>> {
        self.series
            .iter()
            .map(|s| detect_stability(s, max_period))
            .collect()
    }

    fn check_against(&self, config: &ExperimentConfig) -> Result<()> {
        let arena = &self.arena;
        if arena.config() != config.memory || arena.self_play() != config.self_play {
            return Err(Error::InvalidExperiment(format!(
                "checkpoint holds {} with self-play {}, experiment asks for {} with self-play {}",
                arena.config(),
                arena.self_play(),
                config.memory,
                config.self_play
            )));
        }
        if arena.t() > config.total_iterations {
            return Err(Error::InvalidExperiment(format!(
                "checkpoint is at t = {}, beyond the requested {} iterations",
                arena.t(),
                config.total_iterations
            )));
        }
        let have: Vec<String> = self.series.iter().map(|s| s.matrix.key()).collect();
        let want: Vec<String> = config.suite.iter().map(PayoffMatrix::key).collect();
        if have != want {
            return Err(Error::InvalidExperiment(format!(
                "checkpoint series cover [{}], experiment suite is [{}]",
                have.join(", "),
                want.join(", ")
            )));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesFile {
    t: u32,
    series: Vec<WinnerSeries>,
}

/// Path of the series file stored next to a checkpoint.
pub fn series_sidecar(checkpoint: &Path) -> PathBuf {
    checkpoint.with_extension("series.json")
}

/// Writes the arena checkpoint and its series sidecar, each through a
/// temporary file so an interrupted write leaves the previous pair intact.
pub fn save_simulation(sim: &Simulation, checkpoint: &Path) -> Result<()> {
    let tmp = checkpoint.with_extension("ipda.tmp");
    checkpoint_save(&sim.arena, &tmp)?;
    let sidecar = series_sidecar(checkpoint);
    let sidecar_tmp = sidecar.with_extension("json.tmp");
    let body = SeriesFile {
        t: sim.arena.t(),
        series: sim.series.clone(),
    };
    fs::write(&sidecar_tmp, serde_json::to_vec(&body)?)?;
    fs::rename(&tmp, checkpoint)?;
    fs::rename(&sidecar_tmp, &sidecar)?;
    Ok(())
}

pub fn load_simulation(checkpoint: &Path, max_arena_bytes: u64) -> Result<Simulation> {
    let arena = checkpoint_load_with_limit(checkpoint, max_arena_bytes)?;
    let sidecar = series_sidecar(checkpoint);
    let body: SeriesFile = serde_json::from_slice(&fs::read(&sidecar)?)?;
    if body.t != arena.t() {
        return Err(Error::InvalidExperiment(format!(
            "{} is at t = {} but the checkpoint is at t = {}",
            sidecar.display(),
            body.t,
            arena.t()
        )));
    }
    Ok(Simulation {
        arena,
        series: body.series,
    })
}

/// Steps `sim` to the configured total, scoring the suite on the evaluation
/// schedule. `on_checkpoint` runs every `checkpoint_every` iterations (never
/// at the final step).
pub fn advance(
    config: &ExperimentConfig,
    sim: &mut Simulation,
    mut on_checkpoint: impl FnMut(&Simulation) -> Result<()>,
) -> Result<()> {
    config.validate()?;
    sim.check_against(config)?;
    let schedule: BTreeSet<u32> = evaluation_schedule(config.total_iterations, config.dense_phase)
        .into_iter()
        .collect();
    let pool = worker_pool(config.workers)?;
    let total = config.total_iterations;
    let report_every = (total / 20).max(1);
    let started = Instant::now();
    while sim.arena.t() < total {
        pool.install(|| sim.arena.step())?;
        let t = sim.arena.t();
        if schedule.contains(&t) {
            let outcomes = pool.install(|| run_suite(&sim.arena, &config.suite))?;
            for (series, outcome) in sim.series.iter_mut().zip(&outcomes) {
                series.push(outcome)?;
            }
        }
        if config.progress && (t.is_multiple_of(report_every) || t == total) {
            eprintln!(
                "[{:>7.1}s] {} self-play={} t = {t}/{total}",
                started.elapsed().as_secs_f64(),
                config.memory,
                config.self_play
            );
        }
        if config.checkpoint_every > 0 && t.is_multiple_of(config.checkpoint_every) && t < total {
            on_checkpoint(sim)?;
        }
    }
    Ok(())
}

/// Runs without touching the file system.
pub fn simulate(config: &ExperimentConfig) -> Result<Simulation> {
    let mut sim = Simulation::start(config)?;
    advance(config, &mut sim, |_| Ok(()))?;
    Ok(sim)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestConfig {
    pub own: u8,
    pub opp: u8,
    pub self_play: bool,
    pub total_iterations: u32,
    pub dense_phase: u32,
    pub sparse: bool,
    #[serde(with = "key_list")]
    pub suite: Vec<PayoffMatrix>,
    pub workers: usize,
    pub checkpoint_every: u32,
    pub format: String,
    pub max_period: u32,
}

mod key_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::payoff::PayoffMatrix;

    pub fn serialize<S: Serializer>(suite: &[PayoffMatrix], s: S) -> Result<S::Ok, S::Error> {
        suite
            .iter()
            .map(PayoffMatrix::key)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<PayoffMatrix>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|k| k.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: ManifestConfig,
    /// Number of scored iteration steps.
    pub evaluated_steps: usize,
    /// Iteration a resumed run continued from.
    pub resumed_from: Option<u32>,
    pub wall_time_seconds: f64,
    pub report: String,
    pub series: String,
    pub checkpoint: String,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub records: Vec<StabilityRecord>,
    pub report_path: PathBuf,
    pub series_path: PathBuf,
    pub checkpoint_path: PathBuf,
    pub manifest_path: PathBuf,
}

/// Runs an experiment into `config.out_dir` (overridden by [`OUT_ENV`]):
/// report, full winner series, final checkpoint and a manifest.
pub fn run(config: &ExperimentConfig) -> Result<RunSummary> {
    config.validate()?;
    let started = Instant::now();
    let out_dir = resolve_out_dir(&config.out_dir);
    fs::create_dir_all(&out_dir)?;
    let checkpoint_path = out_dir.join(CHECKPOINT_FILE);

    let mut sim = match &config.resume {
        Some(path) => load_simulation(path, config.max_arena_bytes)?,
        None => Simulation::start(config)?,
    };
    let resumed_from = config.resume.as_ref().map(|_| sim.arena.t());
    if config.progress {
        match resumed_from {
            Some(t) => eprintln!("resuming {} at t = {t}", config.memory),
            None => eprintln!(
                "starting {} self-play={} with {} pairs",
                config.memory,
                config.self_play,
                sim.arena.total_pairs()
            ),
        }
    }
    advance(config, &mut sim, |s| {
        if config.progress {
            eprintln!("checkpoint at t = {}", s.arena.t());
        }
        save_simulation(s, &checkpoint_path)
    })?;

    let records = sim.records(config.max_period)?;
    let report_path = out_dir.join(format!("report.{}", config.format.extension()));
    fs::write(
        &report_path,
        render_report(config.memory, &records, config.format)?,
    )?;
    let series_path = out_dir.join(SERIES_FILE);
    fs::write(
        &series_path,
        serde_json::to_string_pretty(&sim.series)? + "\n",
    )?;
    save_simulation(&sim, &checkpoint_path)?;

    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: ManifestConfig {
            own: config.memory.own(),
            opp: config.memory.opp(),
            self_play: config.self_play,
            total_iterations: config.total_iterations,
            dense_phase: config.dense_phase.min(config.total_iterations),
            sparse: config.is_sparse(),
            suite: config.suite.clone(),
            workers: config.workers,
            checkpoint_every: config.checkpoint_every,
            format: config.format.extension().into(),
            max_period: config.max_period,
        },
        evaluated_steps: sim.series.first().map_or(0, |s| s.entries.len()),
        resumed_from,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        report: file_name(&report_path),
        series: file_name(&series_path),
        checkpoint: file_name(&checkpoint_path),
    };
    let manifest_path = out_dir.join(MANIFEST_FILE);
    fs::write(
        &manifest_path,
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    if config.progress {
        eprintln!("wrote {}", report_path.display());
    }
    Ok(RunSummary {
        records,
        report_path,
        series_path,
        checkpoint_path,
        manifest_path,
    })
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(String::new, |n| n.to_string_lossy().into_owned())
}

/// How a reference champion column is compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChampionMatch {
    /// Same canonical set, same alternating members.
    Exact,
    /// The listed strategies are among the champions.
    Includes,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub matrix: PayoffMatrix,
    pub first_it: u32,
    pub period: u32,
    /// Canonical representatives.
    pub g1_winners: BTreeSet<u32>,
    pub champions: BTreeSet<u32>,
    /// Champions absent from at least one phase.
    pub alternating: BTreeSet<u32>,
    pub champion_match: ChampionMatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceTable {
    pub name: String,
    pub memory: MemoryConfig,
    pub self_play: bool,
    pub iterations: u32,
    /// Too slow for routine runs.
    pub extended: bool,
    pub rows: Vec<ReferenceRow>,
}

const BUILTIN: [(&str, &str); 7] = [
    ("table4", include_str!("../fixtures/table4.csv")),
    ("table5", include_str!("../fixtures/table5.csv")),
    ("table6", include_str!("../fixtures/table6.csv")),
    ("table7", include_str!("../fixtures/table7.csv")),
    ("table8", include_str!("../fixtures/table8.csv")),
    ("table9", include_str!("../fixtures/table9.csv")),
    ("table10", include_str!("../fixtures/table10.csv")),
];

pub fn builtin_table_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|(name, _)| *name).collect()
}

pub fn builtin_table(name: &str) -> Option<ReferenceTable> {
    BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| ReferenceTable::parse(n, text).expect("embedded fixture parses"))
}

pub fn builtin_tables() -> Vec<ReferenceTable> {
    builtin_table_names()
        .into_iter()
        .filter_map(builtin_table)
        .collect()
}

#[derive(Deserialize)]
struct RawRow {
    #[serde(rename = "T")]
    t: u32,
    #[serde(rename = "R")]
    r: u32,
    #[serde(rename = "P")]
    p: u32,
    first_it: u32,
    period: u32,
    g1_winners: String,
    champions: String,
    alternating: String,
    #[serde(rename = "match")]
    champion_match: ChampionMatch,
}

fn canonical_set(memory: MemoryConfig, ids: impl IntoIterator<Item = u32>) -> BTreeSet<u32> {
    ids.into_iter()
        .map(|id| {
            let genome = StrategyGenome::new(memory, id as u64).expect("id within class");
            canonicalize(genome).representative
        })
        .collect()
}

fn parse_set(memory: MemoryConfig, text: &str) -> Result<BTreeSet<u32>> {
    if text.trim().is_empty() {
        return Ok(BTreeSet::new());
    }
    Ok(canonical_set(
        memory,
        crate::analysis::expand_notation(memory, text)?,
    ))
}

impl ReferenceTable {
    /// Parses a fixture: `# key: value` lines (`memory`, `self_play`,
    /// `iterations`, optional `extended`) followed by a CSV table.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidExperiment(format!("fixture {name}: {msg}"));
        let (mut memory, mut self_play, mut iterations, mut extended) = (None, None, None, false);
        let mut body = String::new();
        for line in text.lines() {
            let Some(meta) = line.strip_prefix('#') else {
                body.push_str(line);
                body.push('\n');
                continue;
            };
            let Some((key, value)) = meta.split_once(':') else {
                continue;
            };
            let value = value.trim();
            match key.trim() {
                "memory" => memory = Some(value.parse::<MemoryConfig>()?),
                "self_play" => {
                    self_play = Some(value.parse::<bool>().map_err(|e| bad(e.to_string()))?)
                }
                "iterations" => {
                    iterations = Some(value.parse::<u32>().map_err(|e| bad(e.to_string()))?)
                }
                "extended" => extended = value.parse::<bool>().map_err(|e| bad(e.to_string()))?,
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let memory = memory.ok_or_else(|| bad("missing memory".into()))?;
        let mut rows = Vec::new();
        for raw in csv::Reader::from_reader(body.as_bytes()).deserialize::<RawRow>() {
            let raw = raw?;
            rows.push(ReferenceRow {
                matrix: PayoffMatrix::new(raw.t, raw.r, raw.p)?,
                first_it: raw.first_it,
                period: raw.period,
                g1_winners: parse_set(memory, &raw.g1_winners)?,
                champions: parse_set(memory, &raw.champions)?,
                alternating: parse_set(memory, &raw.alternating)?,
                champion_match: raw.champion_match,
            });
        }
        if rows.is_empty() {
            return Err(bad("no rows".into()));
        }
        Ok(ReferenceTable {
            name: name.to_string(),
            memory,
            self_play: self_play.ok_or_else(|| bad("missing self_play".into()))?,
            iterations: iterations.ok_or_else(|| bad("missing iterations".into()))?,
            extended,
            rows,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let name = path
            .file_stem()
            .map_or_else(|| "fixture".into(), |s| s.to_string_lossy().into_owned());
        Self::parse(&name, &fs::read_to_string(path)?)
    }

    pub fn suite(&self) -> Vec<PayoffMatrix> {
        self.rows.iter().map(|r| r.matrix).collect()
    }

    /// A dense experiment over exactly this table's matrices.
    pub fn experiment(&self) -> ExperimentConfig {
        let mut config = ExperimentConfig::new(self.memory);
        config.self_play = self.self_play;
        config.total_iterations = self.iterations;
        config.dense_phase = self.iterations;
        config.suite = self.suite();
        config
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMismatch {
    pub field: &'static str,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCheck {
    pub matrix: PayoffMatrix,
    pub mismatches: Vec<FieldMismatch>,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub table: String,
    pub rows: Vec<RowCheck>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(RowCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RowCheck> {
        self.rows.iter().filter(|r| !r.passed())
    }

    /// One summary line, then one `-`/`+` pair per mismatching field.
    pub fn render_diff(&self) -> String {
        let failed = self.failures().count();
        let mut out = format!(
            "{}: {}/{} rows match\n",
            self.table,
            self.rows.len() - failed,
            self.rows.len()
        );
        for row in self.failures() {
            for m in &row.mismatches {
                out.push_str(&format!("  {} {}\n", row.matrix.key(), m.field));
                out.push_str(&format!("    - {}\n", m.expected));
                out.push_str(&format!("    + {}\n", m.actual));
            }
        }
        out
    }
}

fn show(memory: MemoryConfig, set: &BTreeSet<u32>) -> String {
    if set.is_empty() {
        "-".into()
    } else {
        winner_notation(memory, &set.iter().copied().collect::<Vec<_>>())
    }
}

/// Compares stability records with a reference table row by row.
pub fn check_records(table: &ReferenceTable, records: &[StabilityRecord]) -> Verification {
    let memory = table.memory;
    let rows = table
        .rows
        .iter()
        .map(|expected| {
            let mut mismatches = Vec::new();
            let Some(record) = records.iter().find(|r| r.matrix == expected.matrix) else {
                mismatches.push(FieldMismatch {
                    field: "row",
                    expected: "present".into(),
                    actual: "missing".into(),
                });
                return RowCheck {
                    matrix: expected.matrix,
                    mismatches,
                };
            };
            let mut compare = |field: &'static str, expected: String, actual: String| {
                if expected != actual {
                    mismatches.push(FieldMismatch {
                        field,
                        expected,
                        actual,
                    });
                }
            };
            compare(
                "first_it",
                expected.first_it.to_string(),
                record.first_it.to_string(),
            );
            compare(
                "period",
                expected.period.to_string(),
                record.period.to_string(),
            );
            let g1 = canonical_set(memory, record.all_g1_winners());
            compare(
                "g1_winners",
                show(memory, &expected.g1_winners),
                show(memory, &g1),
            );
            let champions = canonical_set(memory, record.all_champions());
            let steady = canonical_set(memory, record.steady_champions());
            match expected.champion_match {
                ChampionMatch::Exact => {
                    compare(
                        "champions",
                        show(memory, &expected.champions),
                        show(memory, &champions),
                    );
                    let alternating: BTreeSet<u32> =
                        champions.difference(&steady).copied().collect();
                    compare(
                        "alternating",
                        show(memory, &expected.alternating),
                        show(memory, &alternating),
                    );
                }
                ChampionMatch::Includes => {
                    if !expected.champions.is_subset(&champions) {
                        compare(
                            "champions",
                            format!("includes {}", show(memory, &expected.champions)),
                            show(memory, &champions),
                        );
                    }
                }
            }
            RowCheck {
                matrix: expected.matrix,
                mismatches,
            }
        })
        .collect();
    Verification {
        table: table.name.clone(),
        rows,
    }
}

/// Runs the table's experiment in memory and diffs the result.
pub fn verify(table: &ReferenceTable, workers: usize, progress: bool) -> Result<Verification> {
    let mut config = table.experiment();
    config.workers = workers;
    config.progress = progress;
    let sim = simulate(&config)?;
    Ok(check_records(table, &sim.records(config.max_period)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(own: u8, opp: u8, self_play: bool, total: u32) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(MemoryConfig::new(own, opp).unwrap());
        c.self_play = self_play;
        c.total_iterations = total;
        c.dense_phase = total;
        c.workers = 2;
        c
    }

    #[test]
    fn defaults_follow_memory_size() {
        assert_eq!(default_iterations(MemoryConfig::new(0, 1).unwrap()), 1000);
        assert_eq!(default_iterations(MemoryConfig::new(1, 1).unwrap()), 10_000);
        let c = ExperimentConfig::new(MemoryConfig::new(0, 2).unwrap());
        assert!(c.self_play && !c.is_sparse());
        assert_eq!(c.suite.len(), 17);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut c = config(0, 1, true, 0);
        assert!(c.validate().is_err());
        c.total_iterations = 10;
        c.workers = 0;
        assert!(c.validate().is_err());
        c.workers = 1;
        c.suite.push(c.suite[0]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn builtin_fixtures_parse() {
        let tables = builtin_tables();
        assert_eq!(tables.len(), 7);
        for t in &tables {
            assert!(!t.rows.is_empty());
        }
        let t10 = builtin_table("table10").unwrap();
        assert!(t10.extended);
        // Four equivalent first-round winners collapse to their representatives.
        assert_eq!(t10.rows[0].g1_winners.len(), 4);
        assert_eq!(builtin_table("table8").unwrap().rows.len(), 17);
    }

    #[test]
    fn table4_verifies() {
        let table = builtin_table("table4").unwrap();
        let v = verify(&table, 2, false).unwrap();
        assert!(v.passed(), "{}", v.render_diff());
        assert_eq!(v.rows.len(), 17);
    }

    #[test]
    fn corrupted_fixture_gives_one_row_diff() {
        let text = include_str!("../fixtures/table4.csv").replace("3,2,1,8,1", "3,2,1,9,1");
        let table = ReferenceTable::parse("corrupt", &text).unwrap();
        let v = verify(&table, 1, false).unwrap();
        assert!(!v.passed());
        let failed: Vec<_> = v.failures().collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].matrix.key(), "3-2-1");
        assert_eq!(failed[0].mismatches[0].field, "first_it");
        assert!(v.render_diff().contains("- 9\n    + 8"));
    }

    #[test]
    fn sparse_schedule_scores_fewer_steps() {
        let mut c = config(0, 1, true, 1000);
        c.dense_phase = 50;
        assert!(c.is_sparse());
        let sim = simulate(&c).unwrap();
        assert_eq!(sim.series[0].entries.len(), 150);
    }

    #[test]
    fn run_writes_outputs_and_resumes_identically() {
        let dir = tempfile::tempdir().unwrap();
        let mut full = config(0, 2, false, 120);
        full.out_dir = dir.path().join("full");
        full.format = ReportFormat::Json;
        let a = run(&full).unwrap();

        let mut first = full.clone();
        first.out_dir = dir.path().join("part");
        first.checkpoint_every = 50;
        first.total_iterations = 70;
        first.dense_phase = 70;
        run(&first).unwrap();
        let mut rest = full.clone();
        rest.out_dir = dir.path().join("resumed");
        rest.resume = Some(dir.path().join("part").join(CHECKPOINT_FILE));
        let b = run(&rest).unwrap();

        assert_eq!(
            fs::read(&a.report_path).unwrap(),
            fs::read(&b.report_path).unwrap()
        );
        assert_eq!(
            fs::read(&a.series_path).unwrap(),
            fs::read(&b.series_path).unwrap()
        );
        let manifest: Manifest =
            serde_json::from_slice(&fs::read(&b.manifest_path).unwrap()).unwrap();
        assert_eq!(manifest.resumed_from, Some(70));
        assert!(!manifest.config.sparse);
        assert_eq!(manifest.config.suite.len(), 17);
    }

    #[test]
    fn resume_rejects_other_config() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(0, 1, true, 20);
        c.out_dir = dir.path().to_path_buf();
        run(&c).unwrap();
        let mut other = config(0, 1, false, 40);
        other.out_dir = dir.path().join("b");
        other.resume = Some(dir.path().join(CHECKPOINT_FILE));
        assert!(matches!(run(&other), Err(Error::InvalidExperiment(_))));
    }
}
