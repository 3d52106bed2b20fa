//! A full batch run with a custom matrix list: reports, series, checkpoint
//! and manifest land in the output directory.
//!
//! `cargo run --release --example run_experiment -- /tmp/ipd-out`

use std::path::PathBuf;

use ipd_arena::analysis::ReportFormat;
use ipd_arena::experiment::{self, ExperimentConfig};
use ipd_arena::{MemoryConfig, PayoffMatrix};

fn main() -> ipd_arena::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ipd-arena-run"));
    let mut config = ExperimentConfig::new(MemoryConfig::new(1, 1)?);
    config.total_iterations = 3000;
    config.dense_phase = 500;
    config.suite = vec![
        PayoffMatrix::new(3, 2, 1)?,
        PayoffMatrix::new(5, 3, 1)?,
        PayoffMatrix::new(10, 6, 1)?,
    ];
    config.checkpoint_every = 1000;
    config.out_dir = out;
    config.format = ReportFormat::Json;
    config.progress = true;

    let summary = experiment::run(&config)?;
    for r in &summary.records {
        println!("{}: first it. {} period {}", r.matrix, r.first_it, r.period);
    }
    for path in [
        &summary.report_path,
        &summary.series_path,
        &summary.checkpoint_path,
        &summary.manifest_path,
    ] {
        println!("wrote {}", path.display());
    }
    Ok(())
}
