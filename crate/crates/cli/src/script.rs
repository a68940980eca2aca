//! Line-oriented scripts for multiple tensor products.
//!
//! Each non-empty line is either a definition `KIND NAME = OP ARGS...` or a
//! command `OP ARGS...`; `#` starts a comment. The grammar is documented in
//! `docs/script.md`.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use liecg::irrep::Irrep;
use liecg::liealg::LieAlgebra;
use liecg::linalg::{linearly_dependent, LabeledVector};
use liecg::multitensor::{chbasis_list, e_lower, gram, scp, TensorNode, Trafo};
use liecg::tensor::Decomposition;
use liecg::FieldElem;

use crate::args::{parse_rep, Format};
use crate::decompose::{generic_irrep, load_import};
use crate::CliError;

type Vector = LabeledVector<u32>;

#[derive(Clone)]
enum Value {
    Irrep(Arc<Irrep>),
    Node(TensorNode),
    Vector(Vector),
    Vectors(Vec<Vector>),
    Trafo(Trafo),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Irrep(_) => "irrep",
            Value::Node(_) => "node",
            Value::Vector(_) => "vector",
            Value::Vectors(_) => "vectors",
            Value::Trafo(_) => "trafo",
        }
    }
}

/// Interpreter state: named values and where relative paths start.
pub struct Script<'a> {
    env: HashMap<String, Value>,
    base: PathBuf,
    format: Format,
    out: &'a mut dyn Write,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn field(s: &str) -> Result<FieldElem, CliError> {
    s.parse()
        .map_err(|_| usage(format!("invalid number `{s}`")))
}

fn int<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.parse()
        .map_err(|_| usage(format!("invalid {what} `{s}`")))
}

fn arity(args: &[&str], n: usize, form: &str) -> Result<(), CliError> {
    if args.len() == n {
        Ok(())
    } else {
        Err(usage(format!("expected `{form}`")))
    }
}

impl<'a> Script<'a> {
    pub fn new(base: impl Into<PathBuf>, format: Format, out: &'a mut dyn Write) -> Self {
        Script {
            env: HashMap::new(),
            base: base.into(),
            format,
            out,
        }
    }

    /// Runs every line of `src`, stopping at the first failing step.
    pub fn run(&mut self, src: &str) -> Result<(), CliError> {
        for (i, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            let step = if tokens.get(2) == Some(&"=") {
                match (tokens[0], tokens.get(3)) {
                    ("irrep", Some(&"import")) => "import",
                    ("irrep", _) | (_, None) => tokens[0],
                    (_, Some(op)) => op,
                }
            } else {
                tokens[0]
            };
            self.line(&tokens).map_err(|e| CliError::Script {
                line: i + 1,
                step: step.to_string(),
                source: Box::new(e),
            })?;
        }
        Ok(())
    }

    fn line(&mut self, t: &[&str]) -> Result<(), CliError> {
        if t.len() >= 3 && t[2] == "=" {
            let (kind, name) = (t[0], t[1]);
            if t.len() < 4 {
                return Err(usage(format!("nothing assigned to `{name}`")));
            }
            let value = self.define(kind, &t[3..])?;
            self.env.insert(name.to_string(), value);
            return Ok(());
        }
        self.command(t[0], &t[1..])
    }

    fn get(&self, name: &str) -> Result<&Value, CliError> {
        self.env
            .get(name)
            .ok_or_else(|| usage(format!("`{name}` is not defined")))
    }

    fn irrep(&self, name: &str) -> Result<Arc<Irrep>, CliError> {
        match self.get(name)? {
            Value::Irrep(r) => Ok(r.clone()),
            v => Err(usage(format!("`{name}` is a {}, not an irrep", v.kind()))),
        }
    }

    fn node(&self, name: &str) -> Result<&TensorNode, CliError> {
        match self.get(name)? {
            Value::Node(n) => Ok(n),
            v => Err(usage(format!("`{name}` is a {}, not a node", v.kind()))),
        }
    }

    fn vector(&self, name: &str) -> Result<&Vector, CliError> {
        match self.get(name)? {
            Value::Vector(v) => Ok(v),
            v => Err(usage(format!("`{name}` is a {}, not a vector", v.kind()))),
        }
    }

    fn trafo(&self, name: &str) -> Result<&Trafo, CliError> {
        match self.get(name)? {
            Value::Trafo(t) => Ok(t),
            v => Err(usage(format!("`{name}` is a {}, not a trafo", v.kind()))),
        }
    }

    /// Vectors and vector lists, flattened in order.
    fn vectors(&self, names: &[&str]) -> Result<Vec<Vector>, CliError> {
        let mut out = Vec::new();
        for n in names {
            match self.get(n)? {
                Value::Vector(v) => out.push(v.clone()),
                Value::Vectors(vs) => out.extend(vs.iter().cloned()),
                v => return Err(usage(format!("`{n}` is a {}, not a vector", v.kind()))),
            }
        }
        Ok(out)
    }

    fn define(&mut self, kind: &str, rhs: &[&str]) -> Result<Value, CliError> {
        let (op, args) = (rhs[0], &rhs[1..]);
        match kind {
            "irrep" => self.define_irrep(op, args),
            "node" => self.define_node(op, args),
            "vector" => self.define_vector(op, args),
            "vectors" => self.define_vectors(op, args),
            "trafo" => {
                if op != "chbasis_list" {
                    return Err(usage(format!("unknown trafo operation `{op}`")));
                }
                arity(args, 2, "trafo NAME = chbasis_list VECTORS OFFSET")?;
                let basis = self.vectors(&[args[0]])?;
                Ok(Value::Trafo(chbasis_list(&basis, int(args[1], "offset")?)?))
            }
            _ => Err(usage(format!("unknown kind `{kind}`"))),
        }
    }

    fn define_irrep(&mut self, op: &str, args: &[&str]) -> Result<Value, CliError> {
        if op == "import" {
            arity(args, 1, "irrep NAME = import PATH")?;
            let path = self.base.join(args[0]);
            return Ok(Value::Irrep(Arc::new(load_import(&path)?)));
        }
        arity(args, 1, "irrep NAME = ALGEBRA LABELS")?;
        let la: LieAlgebra = op.parse()?;
        let hw = parse_rep(args[0], la.rank())?;
        Ok(Value::Irrep(Arc::new(generic_irrep(la, &hw)?)))
    }

    fn define_node(&mut self, op: &str, args: &[&str]) -> Result<Value, CliError> {
        let node = match op {
            "wrap" => {
                arity(args, 1, "node NAME = wrap IRREP")?;
                TensorNode::wrap(self.irrep(args[0])?)
            }
            "otimes" => {
                arity(args, 3, "node NAME = otimes NODE NODE K")?;
                let k: usize = int(args[2], "irrep index")?;
                let (a, b) = (self.node(args[0])?, self.node(args[1])?);
                a.otimes(b, k)?
            }
            "filter" => {
                arity(args, 3, "node NAME = filter NODE FACTOR LABELS")?;
                let keep = args[2]
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| int(s, "label"))
                    .collect::<Result<Vec<i32>, _>>()?;
                self.node(args[0])?.filter(int(args[1], "factor")?, &keep)?
            }
            "chbasis" => {
                arity(args, 3, "node NAME = chbasis NODE FACTOR TRAFO")?;
                let trafo = self.trafo(args[2])?;
                self.node(args[0])?.chbasis(int(args[1], "factor")?, trafo)?
            }
            "scale" => {
                arity(args, 2, "node NAME = scale NODE NUMBER")?;
                self.node(args[0])?.scale(&field(args[1])?)
            }
            _ => return Err(usage(format!("unknown node operation `{op}`"))),
        };
        Ok(Value::Node(node))
    }

    fn define_vector(&mut self, op: &str, args: &[&str]) -> Result<Value, CliError> {
        if op == "scale" {
            arity(args, 2, "vector NAME = scale VECTOR NUMBER")?;
            let v = self.vector(args[0])?.scale(&field(args[1])?);
            return Ok(Value::Vector(v));
        }
        let r = self.irrep(op)?;
        let mut terms = Vec::new();
        for a in args {
            let (l, c) = a
                .split_once(':')
                .ok_or_else(|| usage(format!("expected LABEL:NUMBER, got `{a}`")))?;
            let l: u32 = int(l, "state label")?;
            if l == 0 || l as usize > r.dim() {
                return Err(usage(format!("state {l} outside 1..={}", r.dim())));
            }
            terms.push((l, field(c)?));
        }
        Ok(Value::Vector(LabeledVector::from_terms(terms)))
    }

    fn define_vectors(&mut self, op: &str, args: &[&str]) -> Result<Value, CliError> {
        match op {
            "list" => Ok(Value::Vectors(self.vectors(args)?)),
            "gram" => {
                let form = "vectors NAME = gram IRREP ORTHO... / REST...";
                let (r, rest) = args.split_first().ok_or_else(|| usage(format!("expected `{form}`")))?;
                let slash = rest
                    .iter()
                    .position(|&a| a == "/")
                    .ok_or_else(|| usage(format!("expected `{form}`")))?;
                let r = self.irrep(r)?;
                let ortho = self.vectors(&rest[..slash])?;
                let others = self.vectors(&rest[slash + 1..])?;
                Ok(Value::Vectors(gram(&r, &ortho, &others)?))
            }
            _ => Err(usage(format!("unknown vectors operation `{op}`"))),
        }
    }

    fn vector_string(&self, v: &Vector) -> String {
        let terms: Vec<String> = v
            .iter()
            .map(|(l, c)| format!("(\"{}\", {l})", self.format.render(c)))
            .collect();
        format!("[{}]", terms.join("; "))
    }

    fn print(&mut self, text: String) -> Result<(), CliError> {
        writeln!(self.out, "{text}").map_err(|e| CliError::io("<output>", e))
    }

    fn command(&mut self, op: &str, args: &[&str]) -> Result<(), CliError> {
        match op {
            "print" => {
                arity(args, 1, "print NAME")?;
                let text = self.describe(args[0])?;
                self.print(text)
            }
            "is_sym" => {
                arity(args, 3, "is_sym NODE FACTOR FACTOR")?;
                let s = self
                    .node(args[0])?
                    .is_sym(int(args[1], "factor")?, int(args[2], "factor")?)?;
                self.print(format!("is_sym {} {} {} = {s}", args[0], args[1], args[2]))
            }
            "lower" => {
                arity(args, 3, "lower IRREP ROOT VECTOR")?;
                let r = self.irrep(args[0])?;
                let root: usize = int(args[1], "root")?;
                if root == 0 || root > r.rank() {
                    return Err(usage(format!("root {root} outside 1..={}", r.rank())));
                }
                let v = e_lower(&r, root)(self.vector(args[2])?)?;
                let text = format!("lower {} {} {} = {}", args[0], args[1], args[2], self.vector_string(&v));
                self.print(text)
            }
            "scp" => {
                arity(args, 3, "scp IRREP VECTOR VECTOR")?;
                let r = self.irrep(args[0])?;
                let x = scp(&r, self.vector(args[1])?, self.vector(args[2])?);
                let text = format!("scp {} {} = \"{}\"", args[1], args[2], self.format.render(&x));
                self.print(text)
            }
            "dependent" => {
                let vs = self.vectors(args)?;
                self.print(format!("dependent {} = {}", args.join(" "), linearly_dependent(&vs)))
            }
            "decompose" => {
                arity(args, 2, "decompose IRREP IRREP")?;
                let (l, r) = (self.irrep(args[0])?, self.irrep(args[1])?);
                let mut d = Decomposition::new(l, r)?;
                d.decompose()?;
                let text = d.result();
                self.print(text.trim_end().to_string())
            }
            _ => Err(usage(format!("unknown command `{op}`"))),
        }
    }

    fn describe(&self, name: &str) -> Result<String, CliError> {
        Ok(match self.get(name)? {
            Value::Irrep(r) => {
                let kets: Vec<String> = r
                    .kets()
                    .iter()
                    .enumerate()
                    .map(|(i, k)| format!("({}, \"{k}\")", i + 1))
                    .collect();
                format!("{name} = [{}]", kets.join("; "))
            }
            Value::Node(n) => {
                let mut s = format!(
                    "{name} = {}{} in {} factors",
                    liecg::irrep::dynkin_string(n.irrep().hw()),
                    n.dim(),
                    n.factor_count()
                );
                for (label, terms) in n.untree() {
                    let terms: Vec<String> = terms
                        .iter()
                        .map(|(c, t)| format!("(\"{}\", \"{t}\")", self.format.render(c)))
                        .collect();
                    s.push_str(&format!("\n{label}: [{}]", terms.join("; ")));
                }
                s
            }
            Value::Vector(v) => format!("{name} = {}", self.vector_string(v)),
            Value::Vectors(vs) => {
                let items: Vec<String> = vs.iter().map(|v| self.vector_string(v)).collect();
                format!("{name} = [{}]", items.join(", "))
            }
            Value::Trafo(t) => {
                let rules: Vec<String> = t
                    .iter()
                    .map(|(old, v)| {
                        let terms: Vec<String> = v
                            .iter()
                            .map(|(l, c)| format!("(\"{}\", {l})", self.format.render(c)))
                            .collect();
                        format!("{old} -> [{}]", terms.join("; "))
                    })
                    .collect();
                format!("{name} = {}", rules.join(", "))
            }
        })
    }
}

/// Runs the script at `path`; imports resolve relative to its directory.
pub fn run_file(path: &Path, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Script::new(base, format, out).run(&src)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> Result<String, CliError> {
        let mut out = Vec::new();
        Script::new(".", Format::Plain, &mut out).run(src)?;
        Ok(String::from_utf8(out).unwrap())
    }

    #[test]
    fn doublets() {
        let out = run("irrep r = A1 1\n\
                       node t = wrap r\n\
                       node s = otimes t t 2   # the singlet\n\
                       print s\n\
                       is_sym s 1 2\n")
        .unwrap();
        assert_eq!(
            out,
            "s = (0,)1 in 2 factors\n1: [(\"1/2*sqrt(2)\", \"(1,2)\"); (\"-1/2*sqrt(2)\", \"(2,1)\")]\nis_sym s 1 2 = -1\n"
        );
    }

    #[test]
    fn vectors_and_operators() {
        let out = run("irrep r = A2 1,1\n\
                       vector z = r 4:1 5:1\n\
                       lower r 1 z\n\
                       scp r z z\n\
                       dependent z z\n")
        .unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("lower r 1 z = [(\""), "{out}");
        assert!(lines[1].starts_with("scp z z = \""));
        assert_eq!(lines[2], "dependent z z = true");
    }

    #[test]
    fn errors_name_line_and_step() {
        let e = run("irrep r = A1 1\n\nnode t = wrap r\nnode u = otimes t t 3\n").unwrap_err();
        assert!(e.to_string().starts_with("line 4 (otimes): "), "{e}");
        let e = run("frobnicate x\n").unwrap_err();
        assert_eq!(e.to_string(), "line 1 (frobnicate): unknown command `frobnicate`");
        let e = run("print x").unwrap_err();
        assert!(e.to_string().contains("`x` is not defined"));
        let e = run("irrep r = A1 1\nnode n = wrap r\nlower n 1 n").unwrap_err();
        assert!(e.to_string().contains("not an irrep"));
    }

    #[test]
    fn empty_script() {
        assert_eq!(run("").unwrap(), "");
        assert_eq!(run("# only a comment\n\n").unwrap(), "");
    }
}
