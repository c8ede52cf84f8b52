//! `tanglefair`: classify tangles, compute gap thresholds, solve and verify
//! contiguous fair division instances, and generate counterexamples.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "tanglefair", version, about = "Contiguous fair division on graphs and tangles")]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write a run manifest to this file.
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
pub struct Caps {
    /// Largest graph the exhaustive oracle accepts.
    #[arg(long, default_value_t = 24)]
    max_vertices: usize,
    /// Largest number of agents the exhaustive oracle accepts.
    #[arg(long, default_value_t = 6)]
    max_agents: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Stringability, degree sequence and gap threshold of a skeleton.
    Classify { graph: PathBuf },
    /// Gap threshold, optionally also the generalized one.
    Threshold {
        graph: PathBuf,
        #[arg(long)]
        generalized: bool,
        /// Also report the generalized threshold with disconnected parts allowed.
        #[arg(long)]
        relax_connectivity: bool,
    },
    /// Contiguous EF1 outer allocation for 2 or 3 agents.
    Solve {
        graph: PathBuf,
        valuations: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        agents: u8,
        /// Print one line per knife state transition to stderr.
        #[arg(long)]
        trace: bool,
        /// Check every proof obligation while the knife runs.
        #[arg(long)]
        verify: bool,
        /// Write the allocation here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check contiguity and EFk outer for an allocation.
    Verify {
        graph: PathBuf,
        valuations: PathBuf,
        allocation: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Subdivided graph and common valuation defeating EFk outer.
    Counterexample {
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Run the exhaustive oracle on the instance.
        #[arg(long)]
        certify: bool,
        /// Directory for the graph, valuation and manifest files.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Exhaustive search for a contiguous EFk outer allocation.
    Oracle {
        graph: PathBuf,
        valuations: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        caps: Caps,
    },
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Negative = 1,
    Input = 2,
    Cap = 3,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = commands::Context::new(cli.json);
    let result = match cli.command {
        Command::Classify { graph } => commands::classify(&mut ctx, &graph),
        Command::Threshold {
            graph,
            generalized,
            relax_connectivity,
        } => commands::threshold(&mut ctx, &graph, generalized, relax_connectivity),
        Command::Solve {
            graph,
            valuations,
            agents,
            trace,
            verify,
            out,
        } => commands::solve(&mut ctx, &graph, &valuations, agents as usize, trace, verify, out.as_deref()),
        Command::Verify {
            graph,
            valuations,
            allocation,
            k,
        } => commands::verify(&mut ctx, &graph, &valuations, &allocation, k),
        Command::Counterexample {
            graph,
            n,
            k,
            certify,
            out_dir,
            caps,
        } => commands::counterexample(&mut ctx, &graph, n, k, certify, out_dir.as_deref(), &caps),
        Command::Oracle {
            graph,
            valuations,
            n,
            k,
            caps,
        } => commands::oracle(&mut ctx, &graph, &valuations, n, k, &caps),
    };
    let status = match result {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ctx.manifest.set("outcome", format!("error: {}", e.message));
            e.status
        }
    };
    ctx.manifest.set("exit", status as u8);
    if let Some(path) = cli.manifest {
        if let Err(e) = std::fs::write(&path, ctx.manifest.render()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(Status::Input as u8);
        }
    }
    ExitCode::from(status as u8)
}
