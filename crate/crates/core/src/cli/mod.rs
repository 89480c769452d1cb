//! Command-line front end. [`run`] returns the process exit code: 0 when
//! every declared expectation holds, 1 on a mismatch or failed theorem row,
//! 2 on usage, spec or evaluation errors.

mod construct;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use construct::{construct, ConstructKind, DEFAULT_MARGIN};

use crate::catalog::{catalog_entries, catalog_entry, classify, ManifoldSpec};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::report::{CheckConfig, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOL};
use crate::theorems::verify_theorems;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "conegeom", version, about = "Classify selfsimilar, conical and Hessian structures on coordinate charts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Sample points per check
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Seed for the sample shift and the random families
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Residual tolerance for jet-based checks
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Scan sample points on one thread
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn config(&self) -> Result<CheckConfig> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("--samples must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument("--tol must be a positive number".into()));
        }
        Ok(CheckConfig {
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
            exec: if self.sequential { Exec::Sequential } else { Exec::Parallel },
            ..CheckConfig::default()
        })
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the manifold declared in a spec file
    Classify {
        spec: PathBuf,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every identity over the catalog and the random families
    VerifyTheorems {
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Build a new object from a spec file and write it with its verification
    Construct {
        kind: ConstructKind,
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// List or export the built-in manifolds
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// Print every entry id with its expected flags
    List,
    /// Write an entry as a spec file
    Export { id: String, output: PathBuf },
}

fn read_spec(path: &Path) -> Result<ManifoldSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    ManifoldSpec::from_json(&text).map_err(|e| match e {
        Error::Spec(m) => Error::Spec(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn emit(out: &mut dyn Write, text: &str) {
    // a closed stdout is not worth a different exit code
    let _ = out.write_all(text.as_bytes());
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                emit(err, &text);
            } else {
                emit(out, &text);
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            emit(err, &format!("error: {e}\n"));
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Classify { spec, json, run } => {
            let config = run.config()?;
            let report = classify(&read_spec(&spec)?, &config)?;
            emit(out, &if json { report.to_json() } else { report.to_text() });
            Ok(if report.matches_expected() { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::VerifyTheorems { json, run } => {
            let report = verify_theorems(&run.config()?)?;
            emit(out, &if json { report.to_json() } else { report.to_text() });
            Ok(if report.passed { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Construct { kind, input, output, run } => {
            let spec = construct(kind, &read_spec(&input)?, &run.config()?)?;
            write_file(&output, &spec.to_json())?;
            let checks = spec.verification.as_deref().unwrap_or_default();
            let mut text = format!("wrote {}\n", output.display());
            for r in checks {
                text.push_str(&format!(
                    "  {:<34} {}  max residual {:.3e}\n",
                    r.name,
                    if r.passed { "pass" } else { "FAIL" },
                    r.max_residual
                ));
            }
            emit(out, &text);
            Ok(EXIT_OK)
        }
        Command::Catalog { command: CatalogCommand::List } => {
            let mut text = String::new();
            for e in catalog_entries() {
                let flags = e.spec.expected.as_ref().map(|x| {
                    serde_json::to_string(x).expect("flags serialize")
                });
                text.push_str(&format!("{:<26} {}\n", e.id, flags.unwrap_or_default()));
            }
            emit(out, &text);
            Ok(EXIT_OK)
        }
        Command::Catalog { command: CatalogCommand::Export { id, output } } => {
            let entry = catalog_entry(&id).ok_or_else(|| {
                let ids: Vec<String> = catalog_entries().into_iter().map(|e| e.id).collect();
                Error::InvalidArgument(format!("unknown catalog id `{id}` (known: {})", ids.join(", ")))
            })?;
            write_file(&output, &entry.spec.to_json())?;
            emit(out, &format!("wrote {}\n", output.display()));
            Ok(EXIT_OK)
        }
    }
}
