mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, Ctx};
use rabcone::exact_linalg::Field;

#[derive(Parser)]
#[command(name = "rabcone", version, about = "Exact Hom spaces near the punctured point at infinity of Perf K[t]")]
struct Cli {
    /// `q` or `fp:<prime>`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Also write the report as JSON to this path (`-` for stdout instead of text).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Seed for sampled grids.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct WindowArgs {
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-8, 8])]
    window: Vec<i64>,
    #[arg(long, default_value_t = 2)]
    margin: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Derived Hom between two atoms.
    Rhom {
        a: String,
        b: String,
        #[command(flatten)]
        w: WindowArgs,
    },
    /// Morphisms from c to d through the cone of unit maps.
    Rab {
        c: String,
        d: String,
        #[command(flatten)]
        w: WindowArgs,
    },
    /// The same morphisms through the right adjoint.
    Remark {
        c: String,
        d: String,
        #[command(flatten)]
        w: WindowArgs,
    },
    /// Exactness and certificate checks.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Compose the classes in a JSON class file, first listed applied first.
    Compose { classfile: PathBuf },
    /// Run the full acceptance suite.
    Selftest,
}

#[derive(Subcommand)]
enum Verify {
    /// The dual of the truncated free resolution of K[t, t^-1].
    AppendixB {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [0, 8])]
        window: Vec<i64>,
        #[arg(long, default_value_t = 2)]
        margin: i64,
    },
    /// Nonsplitting of K((t)) as an extension of the tail by K[t, t^-1].
    Extension {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [0, 8])]
        window: Vec<i64>,
        #[arg(long, default_value_t = 2)]
        margin: i64,
    },
    /// Hom(localize c, s) = Hom(c, s) over a grid of sources and local targets.
    Adjunction {
        #[arg(long, default_value_t = 3)]
        grid: i64,
        #[command(flatten)]
        w: WindowArgs,
    },
}

fn run(cli: Cli) -> Result<(report::ReportDocument, Vec<String>), CliError> {
    let explicit = cli.field.as_deref().map(Field::parse).transpose()?;
    let ctx = Ctx {
        field: explicit.unwrap_or(Field::Rational),
        argv: std::env::args().skip(1).collect(),
        seed: cli.seed,
    };
    let win = commands::window;
    let doc = match &cli.command {
        Command::Rhom { a, b, w } => commands::rhom(&ctx, a, b, win(&w.window)?, w.margin)?,
        Command::Rab { c, d, w } => commands::rab(&ctx, c, d, win(&w.window)?, w.margin)?,
        Command::Remark { c, d, w } => commands::remark(&ctx, c, d, win(&w.window)?, w.margin)?,
        Command::Verify { what } => match what {
            Verify::AppendixB { n, window, margin } => commands::verify_appendix_b(&ctx, *n, win(window)?, *margin)?,
            Verify::Extension { n, window, margin } => commands::verify_extension(&ctx, *n, win(window)?, *margin)?,
            Verify::Adjunction { grid, w } => commands::verify_adjunction_grid(&ctx, *grid, win(&w.window)?, w.margin)?,
        },
        Command::Compose { classfile } => commands::compose(&ctx, classfile)?,
        Command::Selftest => return commands::run_selftest(&ctx, explicit),
    };
    Ok((doc, Vec::new()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json.clone();
    match run(cli) {
        Ok((doc, lines)) => {
            let to_stdout = json.as_deref().is_some_and(|p| p.as_os_str() == "-");
            if to_stdout {
                print!("{}", doc.to_json());
            } else {
                for l in &lines {
                    println!("{l}");
                }
                print!("{}", doc.to_text());
            }
            if let Some(path) = json.filter(|_| !to_stdout) {
                if let Err(e) = std::fs::write(&path, doc.to_json()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if doc.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Engine(_) => 1,
            })
        }
    }
}
