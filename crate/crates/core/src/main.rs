//! Command-line front end: parse worldspec files, run comparisons,
//! print verdict matrices and stream analyses.
//!
//! Exit codes: 0 success, 2 malformed input, 3 engine error (for
//! example an incommensurable time grid), 1 failed corpus run.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use locus::criteria::{compare_all, CriterionFamily, VerdictMatrix};
use locus::error::Error;
use locus::oracle;
use locus::world::LocationView;
use locus::worldspec::load_world;

#[derive(Parser)]
#[command(
    name = "locus",
    version,
    about = "Exact comparison of infinite worlds under time-, person-, and slot-centered criteria"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compare two worlds under the requested location views.
    Compare {
        /// Worldspec file; give exactly twice.
        #[arg(long = "world", required = true)]
        worlds: Vec<PathBuf>,
        /// Location view: times, persons, slots, or all.
        #[arg(long, default_value = "all")]
        view: String,
        /// Comma-separated criteria (pareto, sbi1, wpc, overtaking,
        /// interval_dominance, density), or all.
        #[arg(long, default_value = "all")]
        criteria: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Derive and analyze a world's utility streams.
    Analyze {
        #[arg(long)]
        world: PathBuf,
        /// What to derive: the realized per-period stream, the slot
        /// lifetime stream, its mean-utility density, or its sign
        /// profile.
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the bundled cases and the oracle suite; exit 0 iff all pass.
    Corpus {
        /// Directory holding the worldspec fixtures.
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
        /// Only run cases whose name contains this string.
        #[arg(long)]
        case: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Realized,
    Lifetime,
    Density,
    Signs,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BadRational(_)
        | Error::BadStreamLiteral(_)
        | Error::NegativeBase(_)
        | Error::PeriodMismatch { .. }
        | Error::Worldspec { .. }
        | Error::BadSchedule(_)
        | Error::Io(_) => 2,
        _ => 3,
    }
}

fn parse_views(spec: &str) -> Result<Vec<LocationView>, Error> {
    if spec == "all" {
        return Ok(LocationView::ALL.to_vec());
    }
    spec.split(',').map(|v| v.trim().parse()).collect()
}

fn parse_criteria(spec: &str) -> Result<Vec<CriterionFamily>, Error> {
    if spec == "all" {
        return Ok(CriterionFamily::ALL.to_vec());
    }
    spec.split(',').map(|c| c.trim().parse()).collect()
}

fn cmd_compare(
    worlds: &[PathBuf],
    view: &str,
    criteria: &str,
    format: Format,
) -> Result<(), Error> {
    if worlds.len() != 2 {
        return Err(Error::Worldspec {
            line: 0,
            msg: format!("--world must be given exactly twice, got {}", worlds.len()),
        });
    }
    let views = parse_views(view)?;
    let families = parse_criteria(criteria)?;
    let w1 = load_world(&worlds[0])?;
    let w2 = load_world(&worlds[1])?;
    let full = compare_all(&w1, &w2, &views)?;
    let matrix = VerdictMatrix {
        world1: full.world1,
        world2: full.world2,
        cells: full
            .cells
            .into_iter()
            .filter(|c| families.contains(&c.family))
            .collect(),
    };
    match format {
        Format::Machine => print!("{}", matrix.render_machine()),
        Format::Text => print!("{}", matrix.render_text()),
    }
    Ok(())
}

fn cmd_analyze(world: &PathBuf, what: What, format: Format) -> Result<(), Error> {
    let w = load_world(world)?;
    match what {
        What::Realized | What::Lifetime => {
            let s = if what == What::Realized {
                w.realized_time_stream()?
            } else {
                w.lifetime_stream()
            };
            let (liminf, limsup) = s.liminf_limsup();
            let class = s.classify_partial_sums();
            let density = s
                .density()
                .map(|d| d.to_string())
                .unwrap_or_else(|| "undefined".into());
            let sep = match format {
                Format::Machine => "\t",
                Format::Text => " ",
            };
            println!("{s}");
            println!("liminf{sep}{liminf}");
            println!("limsup{sep}{limsup}");
            println!("partial_sums{sep}{class}");
            println!("density{sep}{density}");
        }
        What::Density => {
            let d = w
                .lifetime_stream()
                .density()
                .map(|d| d.to_string())
                .unwrap_or_else(|| "undefined".into());
            println!("{d}");
        }
        What::Signs => {
            println!("{}", w.lifetime_stream().eventual_sign_profile());
        }
    }
    Ok(())
}

fn cmd_corpus(dir: &PathBuf, case: Option<&str>, format: Format) -> Result<bool, Error> {
    let mut report = locus::corpus::run_corpus(dir, case)?;
    if case.is_none() {
        report.checks.extend(oracle::oracle_suite(dir)?.checks);
    }
    match format {
        Format::Machine => print!("{}", report.render_machine()),
        Format::Text => print!("{}", report.render_text()),
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Compare {
            worlds,
            view,
            criteria,
            format,
        } => cmd_compare(worlds, view, criteria, *format).map(|()| true),
        Cmd::Analyze {
            world,
            what,
            format,
        } => cmd_analyze(world, *what, *format).map(|()| true),
        Cmd::Corpus { dir, case, format } => cmd_corpus(dir, case.as_deref(), *format),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
