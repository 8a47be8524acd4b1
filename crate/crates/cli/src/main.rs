use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use maclab::error::Error;
use maclab::harness::{self, ExperimentConfig, PlotSpec};

/// Multi-agent regret experiments.
#[derive(Parser)]
#[command(name = "maclab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write traces, aggregates, metadata and plot.
    Run { config: PathBuf },
    /// Aggregate the seed_*.csv traces of a series directory into aggregate.csv.
    Aggregate { dir: PathBuf },
    /// Render a CSV as SVG using a plot spec file.
    Plot {
        csv: PathBuf,
        spec: PathBuf,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            log::info!("running {} with {} seeds", cfg.name, cfg.seeds.len());
            let out = harness::run(&cfg)?;
            for s in &out.series {
                let last = s.aggregate.rows.last();
                println!(
                    "{}\tfinal_mean={}\tstd={}\tseeds={}",
                    s.name,
                    last.map_or(0.0, |r| r.mean),
                    last.map_or(0.0, |r| r.std),
                    s.aggregate.count
                );
            }
            println!("metadata: {}", out.metadata_path.display());
            if let Some(p) = out.plot_path {
                println!("plot: {}", p.display());
            }
        }
        Command::Aggregate { dir } => {
            let agg = harness::aggregate(&dir)?;
            let path = dir.join("aggregate.csv");
            agg.save(&path)?;
            println!("{}", path.display());
        }
        Command::Plot { csv, spec, output } => {
            let spec = PlotSpec::load(&spec)?;
            let svg = harness::plot(&csv, &spec)?;
            match output {
                Some(p) => std::fs::write(p, svg)?,
                None => print!("{svg}"),
            }
        }
    }
    Ok(())
}
