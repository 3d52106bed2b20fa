//! Run every standard matrix over a full class and report when the winners
//! settle, including oscillating results.

use ipd_arena::analysis::{render_report, ReportFormat};
use ipd_arena::experiment::{self, ExperimentConfig};
use ipd_arena::MemoryConfig;

fn main() -> ipd_arena::Result<()> {
    let memory = MemoryConfig::new(0, 1)?;
    let mut config = ExperimentConfig::new(memory);
    config.self_play = false;
    let sim = experiment::simulate(&config)?;
    let records = sim.records(config.max_period)?;
    print!("{}", render_report(memory, &records, ReportFormat::Csv)?);

    let oscillating: Vec<String> = records
        .iter()
        .filter(|r| r.period > 1)
        .map(|r| r.matrix.key())
        .collect();
    eprintln!("oscillating: {}", oscillating.join(", "));
    Ok(())
}
