//! Tensor product decompositions requested with `--decompose`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use liecg::irrep::{ImportedIrrepData, Irrep};
use liecg::liealg::LieAlgebra;
use liecg::tensor::Decomposition;
use liecg::{par, Error};

use crate::args::{parse_rep, Format};
use crate::listing::{coefficients, file_stem, DecompositionSummary};
use crate::CliError;

/// One side of a product: Dynkin labels or an import file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Labels(String),
    Import(PathBuf),
}

impl Operand {
    fn parse(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(CliError::Usage("empty operand in --decompose".into()));
        }
        Ok(match s.strip_prefix('@') {
            Some(p) => Operand::Import(PathBuf::from(p)),
            None => Operand::Labels(s.to_string()),
        })
    }
}

/// Splits `A x B`; ` x `, `×` and a bare `x` between label strings all work.
pub fn parse_product(s: &str) -> Result<(Operand, Operand), CliError> {
    let split = s
        .split_once(" x ")
        .or_else(|| s.split_once('×'))
        .or_else(|| if s.contains('@') { None } else { s.split_once('x') });
    match split {
        Some((a, b)) => Ok((Operand::parse(a)?, Operand::parse(b)?)),
        None => Err(CliError::Usage(format!(
            "cannot read product `{s}`, expected `A x B`"
        ))),
    }
}

/// Reads, validates and builds an imported irrep.
pub fn load_import(path: &Path) -> Result<Irrep, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let data = ImportedIrrepData::from_json(&text)?;
    Ok(Irrep::new_imported(&data)?)
}

/// Builds a generic irrep, explaining the import route when that fails.
pub fn generic_irrep(la: LieAlgebra, hw: &[i32]) -> Result<Irrep, CliError> {
    Irrep::new_generic(la, hw).map_err(|e| match e {
        Error::UnsupportedIrrep(msg) => CliError::NeedsImport(msg),
        e => e.into(),
    })
}

fn load(op: &Operand, la: Option<LieAlgebra>) -> Result<Arc<Irrep>, CliError> {
    let r = match op {
        Operand::Import(p) => {
            let r = load_import(p)?;
            if la.is_some_and(|la| la != r.algebra()) {
                return Err(CliError::Usage(format!(
                    "{} holds an irrep of {}, not {}",
                    p.display(),
                    r.algebra(),
                    la.unwrap()
                )));
            }
            r
        }
        Operand::Labels(s) => {
            let la = la.ok_or_else(|| {
                CliError::Usage(format!("operand `{s}` needs an algebra flag"))
            })?;
            generic_irrep(la, &parse_rep(s, la.rank())?)?
        }
    };
    Ok(Arc::new(r))
}

/// Settings shared by all decompositions of one invocation.
#[derive(Clone, Debug)]
pub struct DumpOptions {
    pub format: Format,
    pub dir: Option<PathBuf>,
    pub prepare: bool,
    pub singlet: bool,
}

/// Everything printed for one decomposition.
pub struct Outcome {
    pub summary: DecompositionSummary,
    pub text: String,
    /// Singlet listing destined for stdout.
    pub singlet: Option<String>,
}

/// Runs one decomposition and writes the requested dumps into `dir`.
pub fn run_one(
    product: &str,
    la: Option<LieAlgebra>,
    opts: &DumpOptions,
    dir: Option<&Path>,
) -> Result<Outcome, CliError> {
    let (a, b) = parse_product(product)?;
    let (l, r) = (load(&a, la)?, load(&b, la)?);
    if l.algebra() != r.algebra() {
        return Err(CliError::Usage(format!(
            "factors belong to different algebras {} and {}",
            l.algebra(),
            r.algebra()
        )));
    }
    let mut d = Decomposition::new(l.clone(), r.clone())?;
    d.decompose()?;
    if !d.check_dims() {
        return Err(Error::DecompositionFailure("dimensions of the irreps found do not add up".into()).into());
    }
    let summary = DecompositionSummary::new(&d);
    let text = match opts.format {
        Format::Plain => d.result(),
        Format::Tex => summary.to_tex(),
        Format::Mathematica => summary.to_mathematica(),
        Format::Json => String::new(),
    };

    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (k, p) in d.found().iter().enumerate() {
            let stem = file_stem(k + 1, p);
            let path = dir.join(format!("{stem}.{}", opts.format.extension()));
            write(&path, &coefficients(p, &l, &r, opts.format))?;
            if opts.prepare {
                let data = p.prepare(&l, &r)?;
                write(&dir.join(format!("{stem}.import.json")), &(data.to_json() + "\n"))?;
            }
        }
    }

    let mut singlet = None;
    if opts.singlet {
        let p = d
            .found()
            .iter()
            .find(|p| p.hw().iter().all(|&x| x == 0))
            .ok_or_else(|| CliError::Usage(format!("{product} contains no singlet")))?;
        let listing = coefficients(p, &l, &r, opts.format);
        match dir {
            Some(dir) => {
                let name = match opts.format {
                    Format::Plain => "singlet.txt".to_string(),
                    f => format!("singlet.{}", f.extension()),
                };
                write(&dir.join(name), &listing)?;
            }
            None => singlet = Some(listing),
        }
    }
    Ok(Outcome {
        summary,
        text,
        singlet,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Runs all requested decompositions, independent ones side by side.
pub fn run_all(
    products: &[String],
    la: Option<LieAlgebra>,
    opts: &DumpOptions,
) -> Result<Vec<Outcome>, CliError> {
    // several products share DIR through numbered subdirectories
    let dirs: Vec<Option<PathBuf>> = (0..products.len())
        .map(|i| {
            opts.dir.as_ref().map(|d| {
                if products.len() == 1 {
                    d.clone()
                } else {
                    d.join((i + 1).to_string())
                }
            })
        })
        .collect();
    let jobs: Vec<(&String, &Option<PathBuf>)> = products.iter().zip(&dirs).collect();
    par::try_map(&jobs, |(p, dir)| run_one(p, la, opts, dir.as_deref()))
}
