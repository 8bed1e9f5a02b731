//! Command-line front end: reads JSON programs and complexes, runs the
//! analyses of `pvtopo` and writes reports.
//!
//! Exit codes: 0 on success, 2 on bad input, 3 when the analysis is
//! incomplete (an `Unknown` model or an oracle over its cap). In the last case
//! the partial report is still written.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pvtopo::IntBox;
use serde_json::Value;

mod plot;
mod report;

pub use report::SCHEMA_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "pvtopo",
    version,
    about = "Execution spaces of semaphore (PV) programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format of reports.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the program Q(L) for a simplicial complex and predict its
    /// execution space.
    Realize {
        input: PathBuf,
        /// Also write the bare program JSON here.
        #[arg(long, value_name = "FILE")]
        program_out: Option<PathBuf>,
    },
    /// Validity, state space, deadlocks, path-space model and homology.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        window: WindowArg,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Skip the flip-class oracle.
        #[arg(long)]
        no_oracle: bool,
    },
    /// State space of a program, as a complex file.
    Statespace {
        input: PathBuf,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Program whose state space is the given complex.
    Compile { input: PathBuf },
    /// Reduced normal form of every process.
    Reduce { input: PathBuf },
    /// Whether two programs are execution equivalent.
    Equiv { first: PathBuf, second: PathBuf },
    /// Flip classes of monotone paths through a complex.
    Oracle {
        input: PathBuf,
        #[command(flatten)]
        window: WindowArg,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// SVG picture of a planar complex.
    Plot {
        input: PathBuf,
        #[command(flatten)]
        window: WindowArg,
    },
}

#[derive(Args, Debug)]
struct WindowArg {
    /// Analysis window, e.g. `0..3` or `0,0..3,2`.
    #[arg(long = "box", value_name = "LO..HI", value_parser = parse_box_arg)]
    window: Option<BoxArg>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Give up on the oracle beyond this many paths.
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
}

/// `lo..hi` where each side is one integer (used on every axis) or a comma
/// separated list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxArg {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl BoxArg {
    pub fn resolve(&self, n: usize) -> Result<IntBox, CliError> {
        let side = |v: &[i64]| match v.len() {
            1 => Ok(vec![v[0]; n]),
            m if m == n => Ok(v.to_vec()),
            m => Err(CliError::Input(format!(
                "--box has {m} coordinates, expected {n}"
            ))),
        };
        Ok(IntBox::new(side(&self.lo)?, side(&self.hi)?)?)
    }
}

fn parse_box_arg(s: &str) -> Result<BoxArg, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let side = |t: &str| {
        t.split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|e| format!("`{x}`: {e}")))
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(BoxArg {
        lo: side(lo)?,
        hi: side(hi)?,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] pvtopo::Error),
}

/// Output of one command and the exit code it asks for.
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            code: EXIT_OK,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: pvtopo::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn render(format: Format, report: &Value, text: impl FnOnce(&Value) -> String) -> String {
    match format {
        Format::Json => json_text(report),
        Format::Text => text(report),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Realize { input, program_out } => {
            let l = in_file(input, pvtopo::io::parse_simplicial(&read(input)?))?;
            let (report, program) = report::realize(&l)?;
            if let Some(path) = program_out {
                write(path, &json_text(&program))?;
            }
            Ok(Outcome::ok(render(format, &report, report::realize_text)))
        }
        Command::Analyze {
            input,
            window,
            oracle,
            no_oracle,
        } => {
            let program = in_file(input, pvtopo::io::parse_program(&read(input)?))?;
            let window = match &window.window {
                Some(b) => Some(b.resolve(program.dim())?),
                None => None,
            };
            let cap = (!no_oracle).then_some(oracle.cap);
            let (report, complete) = report::analyze(&program, window, cap)?;
            Ok(Outcome {
                body: render(format, &report, report::analyze_text),
                code: if complete { EXIT_OK } else { EXIT_INCOMPLETE },
            })
        }
        Command::Statespace { input, window } => {
            let program = in_file(input, pvtopo::io::parse_program(&read(input)?))?;
            let window = match &window.window {
                Some(b) => b.resolve(program.dim())?,
                None => pvtopo::default_window(&program)?,
            };
            let k = pvtopo::state_space(&program, &window)?;
            let doc = pvtopo::io::complex_to_json(&k);
            Ok(Outcome::ok(match format {
                Format::Json => json_text(&doc),
                Format::Text => report::complex_text(&k),
            }))
        }
        Command::Compile { input } => {
            let parsed = in_file(input, pvtopo::io::parse_complex(&read(input)?))?;
            let holes = match parsed.holes {
                Some(h) => h,
                None => pvtopo::holes_of(&parsed.complex)?,
            };
            let program = pvtopo::compile_program(&holes)?;
            let doc = pvtopo::io::program_to_json(&program);
            Ok(Outcome::ok(match format {
                Format::Json => json_text(&doc),
                Format::Text => report::program_text(&program),
            }))
        }
        Command::Reduce { input } => {
            let program = in_file(input, pvtopo::io::parse_program(&read(input)?))?;
            let reduced =
                program.with_processes(program.processes().iter().map(pvtopo::reduce).collect())?;
            let doc = pvtopo::io::program_to_json(&reduced);
            Ok(Outcome::ok(match format {
                Format::Json => json_text(&doc),
                Format::Text => report::program_text(&reduced),
            }))
        }
        Command::Equiv { first, second } => {
            let p = in_file(first, pvtopo::io::parse_program(&read(first)?))?;
            let q = in_file(second, pvtopo::io::parse_program(&read(second)?))?;
            let report = report::equiv(&p, &q)?;
            Ok(Outcome::ok(render(format, &report, |r| {
                format!("{}\n", r["equivalent"])
            })))
        }
        Command::Oracle {
            input,
            window,
            oracle,
        } => {
            let parsed = in_file(input, pvtopo::io::parse_complex(&read(input)?))?;
            let k = restrict(&parsed.complex, &window.window)?;
            let (report, complete) = report::oracle(&k, oracle.cap)?;
            Ok(Outcome {
                body: render(format, &report, report::oracle_text),
                code: if complete { EXIT_OK } else { EXIT_INCOMPLETE },
            })
        }
        Command::Plot { input, window } => {
            let parsed = in_file(input, pvtopo::io::parse_complex(&read(input)?))?;
            let k = restrict(&parsed.complex, &window.window)?;
            Ok(Outcome::ok(plot::svg(&k)?))
        }
    }
}

fn restrict(
    k: &pvtopo::EuclideanComplex,
    window: &Option<BoxArg>,
) -> Result<pvtopo::EuclideanComplex, CliError> {
    match window {
        Some(b) => Ok(k.restrict(&b.resolve(k.n())?)?),
        None => Ok(k.clone()),
    }
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let written = match &cli.out {
        Some(path) => write(path, &outcome.body),
        None => {
            print!("{}", outcome.body);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    if outcome.code == EXIT_INCOMPLETE {
        eprintln!("warning: analysis incomplete; partial report written");
    }
    outcome.code
}
