use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use prism_core::pipeline::{emit_report, get_communities, summarize, ReportFormat, RunConfig};
use prism_core::{build_hypergraph, parse_database, Error};

#[derive(Parser)]
#[command(name = "prism", version, about = "Mine path-symmetric node sets from relational databases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find abstract concepts and write a report.
    Mine(MineArgs),
    /// Print node, edge, label and component counts.
    Stats {
        #[arg(long)]
        db: PathBuf,
    },
}

#[derive(Args)]
struct MineArgs {
    #[arg(long)]
    db: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// 0 uses all available cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Report path; `-` writes to standard output.
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    #[arg(long, default_value_t = 0.8)]
    lambda2_max: f64,
    #[arg(long, default_value_t = 8)]
    n_min: usize,
    #[arg(long, default_value_t = 3)]
    top_k: usize,
    /// Walk length cap; 0 disables the cap.
    #[arg(long, default_value_t = 5)]
    max_length: usize,
    #[arg(long, default_value_t = 2)]
    proj_dim: usize,
    /// Skip spectral pre-clustering.
    #[arg(long)]
    no_hcluster: bool,
}

impl MineArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            epsilon: self.epsilon,
            alpha: self.alpha,
            k_top: self.top_k,
            proj_dim: self.proj_dim,
            lambda2_max: self.lambda2_max,
            n_min: self.n_min,
            max_length: (self.max_length > 0).then_some(self.max_length),
            seed: self.seed,
            hcluster: !self.no_hcluster,
            threads: self.threads,
            ..RunConfig::default()
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::ArityMismatch { .. } => 2,
        Error::NonConvergence { .. } => 3,
        _ => 1,
    }
}

fn load(path: &PathBuf) -> Result<prism_core::LabeledHypergraph, Error> {
    let text = std::fs::read_to_string(path)?;
    Ok(build_hypergraph(&parse_database(&text)?))
}

fn mine(args: &MineArgs) -> Result<(), Error> {
    let cfg = args.config();
    cfg.validate()?;
    let t0 = Instant::now();
    let h = load(&args.db)?;
    let parse_time = t0.elapsed();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let report = pool.install(|| get_communities::<f64>(&h, &cfg))?.with_config(&cfg);

    if args.output.as_os_str() == "-" {
        emit_report(&report, args.format, std::io::stdout().lock())?;
    } else {
        emit_report(&report, args.format, BufWriter::new(File::create(&args.output)?))?;
    }
    let t = report.timings;
    eprintln!(
        "parse {:.3}s  partition {:.3}s  walks {:.3}s  clustering {:.3}s  total {:.3}s  ({} sub-hypergraphs)",
        parse_time.as_secs_f64(),
        t.partition.as_secs_f64(),
        t.walks.as_secs_f64(),
        t.clustering.as_secs_f64(),
        t.total.as_secs_f64(),
        report.subhypergraphs.len()
    );
    Ok(())
}

fn stats(db: &PathBuf) -> Result<(), Error> {
    let s = summarize(&load(db)?);
    let mut out = std::io::stdout().lock();
    writeln!(out, "nodes\t{}", s.nodes)?;
    writeln!(out, "edges\t{}", s.edges)?;
    writeln!(out, "labels\t{}\t{}", s.labels.len(), s.labels.join(","))?;
    writeln!(out, "components\t{}", s.components.len())?;
    for (i, c) in s.components.iter().enumerate() {
        writeln!(out, "component {i}\tnodes {}\tedges {}\tdiameter {}", c.nodes, c.edges, c.diameter)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match &cli.command {
        Command::Mine(args) => mine(args),
        Command::Stats { db } => stats(db),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
