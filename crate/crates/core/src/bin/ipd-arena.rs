use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ipd_arena::analysis::ReportFormat;
use ipd_arena::ca_view::{
    pair_trajectory, render_combined, render_edge_list, render_pbm, render_trace,
    rule_to_substrategy, self_cycle, self_trajectory, steady_table, substrategy_to_rule,
    transition_graph, PointAutomaton,
};
use ipd_arena::experiment::{self, ExperimentConfig, ReferenceTable};
use ipd_arena::match_engine::checkpoint_info;
use ipd_arena::payoff::{load_suite, standard_suite};
use ipd_arena::strategy::{behavioral_class, canonicalize};
use ipd_arena::{MemoryConfig, Result, StrategyGenome};

#[derive(Parser)]
#[command(
    name = "ipd-arena",
    version,
    about = "Exhaustive iterated prisoner's dilemma tournaments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play a memory class to completion and write reports.
    Run(RunArgs),
    /// Rerun reference tables and diff the results.
    Verify(VerifyArgs),
    /// Point-automaton traces and transition graphs.
    Ca(CaArgs),
    /// Decode a strategy id or display notation.
    Inspect(InspectArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Remembered own actions [default: 0, or the checkpoint's]
    #[arg(long)]
    own: Option<u8>,
    /// Remembered opponent actions [default: 1, or the checkpoint's]
    #[arg(long)]
    opp: Option<u8>,
    /// Strategies also play against themselves (default)
    #[arg(long, overrides_with = "no_self_play")]
    self_play: bool,
    #[arg(long, overrides_with = "self_play")]
    no_self_play: bool,
    /// Total iterations [default: 1000 for 0/1, 10000 otherwise]
    #[arg(long)]
    iterations: Option<u32>,
    /// Score every step up to here, then only the 100 steps ahead of each thousand [default: all]
    #[arg(long)]
    dense_phase: Option<u32>,
    /// `default` or a JSON file of {"T","R","P","S"} objects
    #[arg(long, default_value = "default")]
    suite: String,
    /// Worker threads [default: available cores]
    #[arg(long)]
    workers: Option<usize>,
    /// Checkpoint interval in iterations, 0 for final only
    #[arg(long, default_value_t = 0)]
    checkpoint_every: u32,
    /// Output directory (IPD_ARENA_OUT takes precedence)
    #[arg(long, default_value = "ipd-arena-out")]
    out: PathBuf,
    /// Continue from a checkpoint file
    #[arg(long)]
    resume: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: ReportFormat,
    /// Longest oscillation period looked for
    #[arg(long, default_value_t = ipd_arena::analysis::DEFAULT_MAX_PERIOD)]
    max_period: u32,
    /// No progress on stderr
    #[arg(long, short)]
    quiet: bool,
}

fn parse_format(s: &str) -> Result<ReportFormat> {
    s.parse()
}

#[derive(Args)]
struct VerifyArgs {
    /// Built-in tables to check [default: all routine tables]
    #[arg(long = "table", value_name = "NAME")]
    tables: Vec<String>,
    /// Extra fixture files in the built-in CSV format
    #[arg(long = "fixture", value_name = "FILE")]
    fixtures: Vec<PathBuf>,
    /// Include multi-hour tables
    #[arg(long)]
    extended: bool,
    #[arg(long)]
    workers: Option<usize>,
    /// Write the diff here as well as to stderr
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct CaArgs {
    #[command(subcommand)]
    command: CaCommand,
}

#[derive(Subcommand)]
enum CaCommand {
    /// Trace one automaton on its own memory, or two reading each other's.
    Trace(TraceArgs),
    /// Edge list of the self-referential state graph.
    Graph(GraphArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFormat {
    Txt,
    Pbm,
    /// One `w`/`b`/`y`/`r` character per step (pairs only)
    Combined,
}

#[derive(Args)]
struct RuleArgs {
    /// Elementary rule number
    #[arg(long, conflicts_with = "genome")]
    rule: Option<u8>,
    /// A 0/3 genome; its steady sub-strategy is used
    #[arg(long)]
    genome: Option<String>,
}

impl RuleArgs {
    fn table(&self) -> Result<u8> {
        match (&self.genome, self.rule) {
            (Some(text), _) => {
                let genome = parse_genome(MemoryConfig::new(0, 3)?, text)?;
                Ok(steady_table(&genome).expect("0/3 genome"))
            }
            (None, Some(rule)) => Ok(rule_to_substrategy(rule)),
            (None, None) => Err(ipd_arena::Error::InvalidExperiment(
                "pass --rule or --genome".into(),
            )),
        }
    }
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    first: RuleArgs,
    /// Second automaton's rule number (pair mode)
    #[arg(long)]
    with_rule: Option<u8>,
    /// Second automaton's 0/3 genome (pair mode)
    #[arg(long, conflicts_with = "with_rule")]
    with_genome: Option<String>,
    /// Initial 3-bit memory, most recent action in the high bit
    #[arg(long, default_value_t = 0)]
    state: u8,
    /// Initial memory of the second automaton
    #[arg(long, default_value_t = 0)]
    with_state: u8,
    #[arg(long, default_value_t = 64)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = TraceFormat::Txt)]
    render: TraceFormat,
    /// Output file [default: stdout]
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    rule: RuleArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long, default_value_t = 0)]
    own: u8,
    #[arg(long, default_value_t = 1)]
    opp: u8,
    /// Numeric id or display notation such as (1/2/12)
    strategy: String,
}

fn parse_genome(config: MemoryConfig, text: &str) -> Result<StrategyGenome> {
    match text.trim().parse::<u64>() {
        Ok(id) => StrategyGenome::new(config, id),
        Err(_) => StrategyGenome::parse_display(config, text),
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let header = args.resume.as_deref().map(checkpoint_info).transpose()?;
    let own = args
        .own
        .or(header.as_ref().map(|h| h.config.own()))
        .unwrap_or(0);
    let opp = args
        .opp
        .or(header.as_ref().map(|h| h.config.opp()))
        .unwrap_or(1);
    let memory = MemoryConfig::new(own, opp)?;
    let mut config = ExperimentConfig::new(memory);
    config.self_play = match (args.self_play, args.no_self_play, &header) {
        (true, _, _) => true,
        (_, true, _) => false,
        (_, _, Some(h)) => h.self_play,
        _ => true,
    };
    if let Some(total) = args.iterations {
        config.total_iterations = total;
    }
    config.dense_phase = args.dense_phase.unwrap_or(config.total_iterations);
    config.suite = match args.suite.as_str() {
        "default" => standard_suite(),
        path => load_suite(path.as_ref())?,
    };
    if let Some(workers) = args.workers {
        config.workers = workers;
    }
    config.checkpoint_every = args.checkpoint_every;
    config.out_dir = args.out;
    config.resume = args.resume;
    config.format = args.format;
    config.max_period = args.max_period;
    config.progress = !args.quiet;
    experiment::run(&config)?;
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let mut tables: Vec<ReferenceTable> = if args.tables.is_empty() && !args.fixtures.is_empty() {
        Vec::new()
    } else if args.tables.is_empty() {
        experiment::builtin_tables()
            .into_iter()
            .filter(|t| args.extended || !t.extended)
            .collect()
    } else {
        args.tables
            .iter()
            .map(|name| {
                experiment::builtin_table(name).ok_or_else(|| {
                    ipd_arena::Error::InvalidExperiment(format!(
                        "no built-in table {name:?} (have {})",
                        experiment::builtin_table_names().join(", ")
                    ))
                })
            })
            .collect::<Result<_>>()?
    };
    for path in &args.fixtures {
        tables.push(ReferenceTable::load(path)?);
    }
    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let mut report = String::new();
    let mut all_passed = true;
    for table in &tables {
        if !args.quiet {
            eprintln!(
                "verifying {} ({} self-play={}, {} iterations)",
                table.name, table.memory, table.self_play, table.iterations
            );
        }
        let result = experiment::verify(table, workers, !args.quiet)?;
        all_passed &= result.passed();
        let diff = result.render_diff();
        eprint!("{diff}");
        report.push_str(&diff);
    }
    if let Some(path) = &args.out {
        fs::write(path, &report)?;
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn ca(args: CaArgs) -> Result<ExitCode> {
    match args.command {
        CaCommand::Trace(t) => {
            let a = PointAutomaton::new(t.first.table()?, t.state);
            let second = match (&t.with_genome, t.with_rule) {
                (Some(text), _) => Some(
                    steady_table(&parse_genome(MemoryConfig::new(0, 3)?, text)?)
                        .expect("0/3 genome"),
                ),
                (None, Some(rule)) => Some(rule_to_substrategy(rule)),
                (None, None) => None,
            };
            let text = match second {
                None => {
                    let row = self_trajectory(a, t.steps);
                    match t.render {
                        TraceFormat::Txt => render_trace(&[&row]),
                        TraceFormat::Pbm => render_pbm(&[&row]),
                        TraceFormat::Combined => {
                            return Err(ipd_arena::Error::InvalidExperiment(
                                "combined rendering needs a second automaton".into(),
                            ))
                        }
                    }
                }
                Some(table) => {
                    let (x, y) =
                        pair_trajectory(a, PointAutomaton::new(table, t.with_state), t.steps);
                    match t.render {
                        TraceFormat::Txt => render_trace(&[&x, &y]),
                        TraceFormat::Pbm => render_pbm(&[&x, &y]),
                        TraceFormat::Combined => render_combined(&x, &y) + "\n",
                    }
                }
            };
            emit(t.output.as_ref(), &text)?;
        }
        CaCommand::Graph(g) => {
            let table = g.rule.table()?;
            emit(
                g.output.as_ref(),
                &render_edge_list(&transition_graph(table)),
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn inspect(args: InspectArgs) -> Result<ExitCode> {
    let config = MemoryConfig::new(args.own, args.opp)?;
    let genome = parse_genome(config, &args.strategy)?;
    let class = canonicalize(genome);
    let behavior = behavioral_class(genome);
    println!("class        {config}");
    println!("id           {}", genome.id());
    println!("notation     {}", genome.render_display());
    println!(
        "canonical    {} ({} equivalent)",
        StrategyGenome::new(config, class.representative as u64)?.render_display(),
        class.len()
    );
    println!("behavioral   {} genomes play identically", behavior.len());
    if let Some(table) = steady_table(&genome) {
        let (pre, cycle) = self_cycle(PointAutomaton::new(table, 0));
        println!(
            "rule         {} (self cycle {cycle} after {pre} steps)",
            substrategy_to_rule(table)
        );
    }
    print!("{}", genome.describe());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Verify(args) => verify(args),
        Command::Ca(args) => ca(args),
        Command::Inspect(args) => inspect(args),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
