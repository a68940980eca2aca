//! Command-line flags and their translation into a [`Request`].

use std::path::PathBuf;

use clap::{ArgGroup, Parser, ValueEnum};
use liecg::liealg::LieAlgebra;
use liecg::FieldElem;

use crate::CliError;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Tex,
    Mathematica,
    Json,
}

impl Format {
    /// Coefficient rendering; JSON uses the plain form inside strings.
    pub fn render(self, x: &FieldElem) -> String {
        match self {
            Format::Plain | Format::Json => x.to_plain(),
            Format::Tex => x.to_tex(),
            Format::Mathematica => x.to_mathematica(),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Plain => "txt",
            Format::Tex => "tex",
            Format::Mathematica => "m",
            Format::Json => "json",
        }
    }
}

/// Weight systems, tensor product decompositions and Clebsch-Gordan
/// coefficients of simple Lie algebras.
///
/// Single-dash long flags such as `-su 3 -rep 11` are accepted as
/// spellings of `--su 3 --rep 11`.
#[derive(Debug, Parser)]
#[command(name = "lie", version)]
#[command(group(ArgGroup::new("algebra").args([
    "su", "so", "sp", "a", "b", "c", "d", "e6", "e7", "e8", "f4", "g2",
])))]
pub struct Cli {
    /// SU(N), i.e. A(N-1)
    #[arg(long, value_name = "N")]
    pub su: Option<u32>,
    /// SO(N): B for odd N, D for even N
    #[arg(long, value_name = "N")]
    pub so: Option<u32>,
    /// Sp(N) for even N, i.e. C(N/2)
    #[arg(long, value_name = "N")]
    pub sp: Option<u32>,
    /// A(n) by rank
    #[arg(short = 'a', value_name = "n")]
    pub a: Option<u32>,
    /// B(n) by rank
    #[arg(short = 'b', value_name = "n")]
    pub b: Option<u32>,
    /// C(n) by rank
    #[arg(short = 'c', value_name = "n")]
    pub c: Option<u32>,
    /// D(n) by rank
    #[arg(short = 'd', value_name = "n")]
    pub d: Option<u32>,
    #[arg(long)]
    pub e6: bool,
    #[arg(long)]
    pub e7: bool,
    #[arg(long)]
    pub e8: bool,
    #[arg(long)]
    pub f4: bool,
    #[arg(long)]
    pub g2: bool,

    /// Highest weight as digits (`11`, labels up to 9) or comma separated (`1,1`)
    #[arg(long, value_name = "LABELS")]
    pub rep: Option<String>,

    /// Decompose a product `A x B`; operands are labels or `@FILE` imports. Repeatable.
    #[arg(long, value_name = "A x B")]
    pub decompose: Vec<String>,

    /// Validate an imported irrep file and print its weight listing
    #[arg(long, value_name = "FILE")]
    pub import: Option<PathBuf>,

    /// Write per-irrep coefficient listings of each decomposition into DIR
    #[arg(long, value_name = "DIR")]
    pub dump: Option<PathBuf>,

    /// With --dump, also write importable lowering data for every irrep found
    #[arg(long, requires = "dump")]
    pub prepare: bool,

    /// Write the singlet's coefficients to DIR/singlet.txt, or to stdout without --dump
    #[arg(long)]
    pub dump_singlet: bool,

    /// Run a script of tensor product steps
    #[arg(long, value_name = "FILE")]
    pub script: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,

    /// Write the main output to FILE instead of stdout
    #[arg(short = 'o', long, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Worker threads; 1 runs everything sequentially
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
}

/// Rewrites single-dash long flags (`-su`, `-rep`, `-e6`) as `--su` etc.
/// Single-letter flags and negative numbers are left alone.
pub fn normalize_args<I: IntoIterator<Item = String>>(args: I) -> Vec<String> {
    let mut out = Vec::new();
    let mut rest = false;
    for (i, a) in args.into_iter().enumerate() {
        if i == 0 || rest {
            out.push(a);
            continue;
        }
        if a == "--" {
            rest = true;
            out.push(a);
            continue;
        }
        let b = a.as_bytes();
        let legacy = b.len() > 2 && b[0] == b'-' && b[1].is_ascii_alphabetic();
        if legacy {
            out.push(format!("-{a}"));
        } else {
            out.push(a);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Weights,
    Decompose(Vec<String>),
    Import(PathBuf),
    Multi(PathBuf),
}

/// A validated command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Request {
    pub algebra: Option<LieAlgebra>,
    pub labels: Option<Vec<i32>>,
    pub mode: Mode,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub dump: Option<PathBuf>,
    pub prepare: bool,
    pub dump_singlet: bool,
    pub jobs: Option<usize>,
}

impl Request {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let algebra = selected_algebra(&cli)?;
        let modes = [
            cli.script.is_some(),
            !cli.decompose.is_empty(),
            cli.import.is_some() && cli.decompose.is_empty(),
        ];
        if modes.iter().filter(|&&m| m).count() > 1 {
            return Err(CliError::Usage(
                "--script, --decompose and --import select different modes".into(),
            ));
        }
        let mode = if let Some(p) = cli.script {
            Mode::Multi(p)
        } else if !cli.decompose.is_empty() {
            Mode::Decompose(cli.decompose)
        } else if let Some(p) = cli.import {
            Mode::Import(p)
        } else if cli.rep.is_some() {
            Mode::Weights
        } else {
            return Err(CliError::Usage(
                "nothing to do: give --rep, --decompose, --import or --script".into(),
            ));
        };
        let labels = match (&mode, &cli.rep) {
            (Mode::Weights, Some(r)) => {
                let la = algebra.ok_or_else(|| {
                    CliError::Usage("--rep needs an algebra flag such as -su 3 or -e6".into())
                })?;
                Some(parse_rep(r, la.rank())?)
            }
            (_, Some(_)) => {
                return Err(CliError::Usage(
                    "--rep only selects the irrep of a weight listing".into(),
                ))
            }
            _ => None,
        };
        if (cli.dump.is_some() || cli.dump_singlet) && !matches!(mode, Mode::Decompose(_)) {
            return Err(CliError::Usage("--dump and --dump-singlet need --decompose".into()));
        }
        if cli.jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        Ok(Request {
            algebra,
            labels,
            mode,
            format: cli.format,
            output: cli.output,
            dump: cli.dump,
            prepare: cli.prepare,
            dump_singlet: cli.dump_singlet,
            jobs: cli.jobs,
        })
    }
}

fn selected_algebra(cli: &Cli) -> Result<Option<LieAlgebra>, CliError> {
    let la = if let Some(n) = cli.su {
        if n < 2 {
            return Err(CliError::Usage(format!("SU({n}) is not simple")));
        }
        LieAlgebra::new('A', n - 1)?
    } else if let Some(n) = cli.so {
        match n % 2 {
            1 => LieAlgebra::new('B', n / 2)?,
            _ => LieAlgebra::new('D', n / 2)?,
        }
    } else if let Some(n) = cli.sp {
        if n % 2 == 1 {
            return Err(CliError::Usage(format!("Sp({n}) needs an even N")));
        }
        LieAlgebra::new('C', n / 2)?
    } else if let Some(n) = cli.a {
        LieAlgebra::new('A', n)?
    } else if let Some(n) = cli.b {
        LieAlgebra::new('B', n)?
    } else if let Some(n) = cli.c {
        LieAlgebra::new('C', n)?
    } else if let Some(n) = cli.d {
        LieAlgebra::new('D', n)?
    } else if cli.e6 {
        LieAlgebra::E6
    } else if cli.e7 {
        LieAlgebra::E7
    } else if cli.e8 {
        LieAlgebra::E8
    } else if cli.f4 {
        LieAlgebra::F4
    } else if cli.g2 {
        LieAlgebra::G2
    } else {
        return Ok(None);
    };
    Ok(Some(la))
}

/// Parses Dynkin labels written as `101`, `1,0,1` or `(1,0,1,)`.
pub fn parse_rep(s: &str, rank: usize) -> Result<Vec<i32>, CliError> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    let labels: Vec<i32> = if t.contains(',') {
        t.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| {
                x.parse::<i32>()
                    .map_err(|_| CliError::Usage(format!("invalid Dynkin label `{x}` in `{s}`")))
            })
            .collect::<Result<_, _>>()?
    } else {
        t.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as i32)
                    .ok_or_else(|| CliError::Usage(format!("invalid Dynkin labels `{s}`")))
            })
            .collect::<Result<_, _>>()?
    };
    if labels.len() != rank {
        return Err(CliError::Usage(format!(
            "`{s}` has {} labels, the algebra has rank {rank}",
            labels.len()
        )));
    }
    if labels.iter().any(|&x| x < 0) {
        return Err(CliError::Usage(format!("highest weight `{s}` has a negative label")));
    }
    Ok(labels)
}
