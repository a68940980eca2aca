//! Front end of the `lie` command.
//!
//! Four modes share one set of flags:
//!
//! * weight listings: `lie -su 3 -rep 11`,
//! * decompositions: `lie -e6 --decompose "100000 x 000010" --dump out`,
//! * imported irreps: `lie --import out/irrep1_650_1-0-0-0-1-0.import.json`,
//! * scripts of multiple tensor products: `lie --script su4.lie`.
//!
//! Exit codes are 0 on success, 1 for usage and input errors and 2 when the
//! computation itself is inconsistent.

pub mod args;
pub mod decompose;
pub mod listing;
pub mod script;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use liecg::{par, Error};

pub use args::{normalize_args, Cli, Format, Mode, Request};

use decompose::DumpOptions;
use listing::WeightListing;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(
        "unsupported irrep: {0}\n\
         To import it, decompose a product that contains it with `--dump DIR --prepare` \
         and pass the written `.import.json` file as an `@FILE` operand."
    )]
    NeedsImport(String),
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line} ({step}): {source}")]
    Script {
        line: usize,
        step: String,
        source: Box<CliError>,
    },
}

impl CliError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Inconsistent(_) | Error::DecompositionFailure(_)) => 2,
            CliError::Script { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}

/// Parses `args` (including the program name), runs the request and returns
/// the exit code. Diagnostics go to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = normalize_args(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = Request::from_cli(cli).and_then(|req| match &req.output {
        Some(path) => {
            let f = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(f);
            execute(&req, &mut w)?;
            w.flush().map_err(|e| CliError::io(path, e))
        }
        None => execute(&req, out),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<output>", e))
}

/// Executes a validated request, writing its main output to `out`.
pub fn execute(req: &Request, out: &mut dyn Write) -> Result<(), CliError> {
    match req.jobs {
        Some(1) => par::set_parallel(false),
        Some(n) => {
            par::set_parallel(true);
            par::set_threads(n);
        }
        None => {}
    }
    match &req.mode {
        Mode::Weights => {
            let la = req.algebra.expect("weights mode has an algebra");
            let hw = req.labels.as_ref().expect("weights mode has labels");
            emit(out, &WeightListing::new(la, hw)?.render(req.format))
        }
        Mode::Import(path) => {
            let r = decompose::load_import(path)?;
            if req.algebra.is_some_and(|la| la != r.algebra()) {
                return Err(CliError::Usage(format!(
                    "{} holds an irrep of {}",
                    path.display(),
                    r.algebra()
                )));
            }
            r.verify_consistency(1..=r.dim() as u32)?;
            emit(out, &WeightListing::new(r.algebra(), r.hw())?.render(req.format))
        }
        Mode::Decompose(products) => {
            let opts = DumpOptions {
                format: req.format,
                dir: req.dump.clone(),
                prepare: req.prepare,
                singlet: req.dump_singlet,
            };
            let outcomes = decompose::run_all(products, req.algebra, &opts)?;
            if req.format == Format::Json {
                let summaries: Vec<_> = outcomes.iter().map(|o| &o.summary).collect();
                let json = if summaries.len() == 1 {
                    serde_json::to_string_pretty(summaries[0])
                } else {
                    serde_json::to_string_pretty(&summaries)
                }
                .expect("summary serializes");
                emit(out, &(json + "\n"))?;
                for o in &outcomes {
                    if let Some(s) = &o.singlet {
                        emit(out, s)?;
                    }
                }
                return Ok(());
            }
            for o in &outcomes {
                emit(out, &o.text)?;
                if let Some(s) = &o.singlet {
                    emit(out, s)?;
                }
            }
            Ok(())
        }
        Mode::Multi(path) => script::run_file(path, req.format, out),
    }
}
