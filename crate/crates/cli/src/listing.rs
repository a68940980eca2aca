//! Weight listings and coefficient tables in every output format.

use std::fmt::Write as _;

use liecg::irrep::{dynkin_string, Irrep, Ket};
use liecg::liealg::LieAlgebra;
use liecg::tensor::{Decomposition, ProductIrrep};
use liecg::{Error, FieldElem};
use serde::{Deserialize, Serialize};

use crate::args::Format;

/// One weight of an irrep: the first state label it occupies, its level and
/// multiplicity, Dynkin labels, lowest-root label and descent vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRow {
    pub index: u64,
    pub level: u32,
    pub degeneracy: u32,
    pub dynkin: Vec<i32>,
    pub lowest_root_label: i32,
    pub descent: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightListing {
    pub algebra: LieAlgebra,
    pub highest_weight: Vec<i32>,
    pub dim: u64,
    pub rows: Vec<WeightRow>,
}

fn tuple(v: &[i32]) -> String {
    let parts: Vec<String> = v.iter().map(i32::to_string).collect();
    format!("({})", parts.join(","))
}

fn braces(v: &[i32]) -> String {
    let parts: Vec<String> = v.iter().map(i32::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

impl WeightListing {
    pub fn new(la: LieAlgebra, hw: &[i32]) -> Result<Self, Error> {
        let dim = la.weyl_dim(hw)?;
        let mut index = 1;
        let mut rows = Vec::new();
        for w in la.freudenthal(hw)? {
            rows.push(WeightRow {
                index,
                level: w.level,
                degeneracy: w.degeneracy,
                dynkin: w.dynkin,
                lowest_root_label: w.lowest_root_label,
                descent: w.descent,
            });
            index += w.degeneracy as u64;
        }
        if index - 1 != dim {
            return Err(Error::Inconsistent(format!(
                "multiplicities add up to {} instead of {dim}",
                index - 1
            )));
        }
        Ok(WeightListing {
            algebra: la,
            highest_weight: hw.to_vec(),
            dim,
            rows,
        })
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Plain => self.to_plain(),
            Format::Tex => self.to_tex(),
            Format::Mathematica => self.to_mathematica(),
            Format::Json => serde_json::to_string_pretty(self).expect("listing serializes") + "\n",
        }
    }

    pub fn to_plain(&self) -> String {
        let rule = "==================================";
        let mut s = String::new();
        let _ = writeln!(s, "Lie algebra   :   {}", self.algebra.name());
        let _ = writeln!(s, "{rule}");
        let _ = writeln!(s, "Highest weight:   {}", tuple(&self.highest_weight));
        let _ = writeln!(s, "Dim. of irrep :   {}", self.dim);
        let _ = writeln!(s, "{rule}");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{}, Lev:{}, Deg:{}  {},{}  {}",
                r.index,
                r.level,
                r.degeneracy,
                tuple(&r.dynkin),
                r.lowest_root_label,
                tuple(&r.descent)
            );
        }
        s
    }

    pub fn to_tex(&self) -> String {
        let mut s = String::from("\\begin{tabular}{rrrlrl}\n");
        let _ = writeln!(
            s,
            "\\multicolumn{{6}}{{l}}{{${}$, highest weight ${}$, dimension ${}$}}\\\\",
            self.algebra.name(),
            tuple(&self.highest_weight),
            self.dim
        );
        s.push_str("\\hline\n");
        s.push_str("state & level & deg. & weight & $\\ell^0$ & descent\\\\\n\\hline\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{} & {} & {} & ${}$ & ${}$ & ${}$\\\\",
                r.index,
                r.level,
                r.degeneracy,
                tuple(&r.dynkin),
                r.lowest_root_label,
                tuple(&r.descent)
            );
        }
        s.push_str("\\end{tabular}\n");
        s
    }

    pub fn to_mathematica(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                format!(
                    "{{{}, {}, {}, {}, {}, {}}}",
                    r.index,
                    r.level,
                    r.degeneracy,
                    braces(&r.dynkin),
                    r.lowest_root_label,
                    braces(&r.descent)
                )
            })
            .collect();
        format!(
            "{{\"{}\", {}, {}, {{{}}}}}\n",
            self.algebra.name(),
            braces(&self.highest_weight),
            self.dim,
            rows.join(", ")
        )
    }
}

/// Highest weight and dimension of an irrep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrepSummary {
    pub highest_weight: Vec<i32>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub algebra: LieAlgebra,
    pub left: IrrepSummary,
    pub right: IrrepSummary,
    pub irreps: Vec<IrrepSummary>,
}

impl DecompositionSummary {
    pub fn new(d: &Decomposition) -> Self {
        let summary = |r: &Irrep| IrrepSummary {
            highest_weight: r.hw().to_vec(),
            dim: r.dim(),
        };
        DecompositionSummary {
            algebra: d.left().algebra(),
            left: summary(d.left()),
            right: summary(d.right()),
            irreps: d
                .found()
                .iter()
                .map(|p| IrrepSummary {
                    highest_weight: p.hw().to_vec(),
                    dim: p.dim(),
                })
                .collect(),
        }
    }

    pub fn to_tex(&self) -> String {
        let term = |s: &IrrepSummary| format!("{}_{{{}}}", tuple(&s.highest_weight), s.dim);
        let sum: Vec<String> = self.irreps.iter().map(term).collect();
        format!(
            "${}\\otimes {} = {}$\n",
            term(&self.left),
            term(&self.right),
            sum.join(" \\oplus ")
        )
    }

    pub fn to_mathematica(&self) -> String {
        let term = |s: &IrrepSummary| format!("{{{}, {}}}", braces(&s.highest_weight), s.dim);
        let sum: Vec<String> = self.irreps.iter().map(term).collect();
        format!(
            "{{\"{}\", {}, {}, {{{}}}}}\n",
            self.algebra,
            term(&self.left),
            term(&self.right),
            sum.join(", ")
        )
    }
}

/// One term `coeff · |left⟩|right⟩` of a product state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: FieldElem,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateCoefficients {
    pub label: u32,
    pub ket: String,
    pub terms: Vec<Term>,
}

/// Clebsch-Gordan coefficients of one irrep found in a product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub algebra: LieAlgebra,
    pub left: IrrepSummary,
    pub right: IrrepSummary,
    pub highest_weight: Vec<i32>,
    pub dim: usize,
    pub states: Vec<StateCoefficients>,
}

impl CoefficientTable {
    pub fn new(p: &ProductIrrep, l: &Irrep, r: &Irrep) -> Self {
        let mut states = Vec::new();
        for (w, ss) in p.states_by_weight() {
            for (i, s) in ss.iter().enumerate() {
                let ket = Ket {
                    dynkin: w.dynkin.clone(),
                    deg: i as u32 + 1,
                };
                states.push(StateCoefficients {
                    label: states.len() as u32 + 1,
                    ket: ket.to_string(),
                    terms: s
                        .iter()
                        .map(|(&(a, b), c)| Term {
                            coeff: c.clone(),
                            left: l.ket(a).to_string(),
                            right: r.ket(b).to_string(),
                        })
                        .collect(),
                });
            }
        }
        CoefficientTable {
            algebra: l.algebra(),
            left: IrrepSummary {
                highest_weight: l.hw().to_vec(),
                dim: l.dim(),
            },
            right: IrrepSummary {
                highest_weight: r.hw().to_vec(),
                dim: r.dim(),
            },
            highest_weight: p.hw().to_vec(),
            dim: p.dim(),
            states,
        }
    }
}

/// Coefficient listing of `p` in the given format.
pub fn coefficients(p: &ProductIrrep, l: &Irrep, r: &Irrep, f: Format) -> String {
    match f {
        Format::Json => {
            serde_json::to_string_pretty(&CoefficientTable::new(p, l, r))
                .expect("coefficients serialize")
                + "\n"
        }
        _ => p.listing(l, r, |x| f.render(x)),
    }
}

/// File stem for the `k`-th irrep of a product, e.g. `irrep2_78_0-0-0-0-0-1`.
pub fn file_stem(k: usize, p: &ProductIrrep) -> String {
    let hw: Vec<String> = p.hw().iter().map(i32::to_string).collect();
    format!("irrep{k}_{}_{}", p.dim(), hw.join("-"))
}

/// `(1,0,)3` style label of an irrep.
pub fn irrep_label(hw: &[i32], dim: usize) -> String {
    format!("{}{dim}", dynkin_string(hw))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_triplet_listing() {
        let l = WeightListing::new(LieAlgebra::A(1), &[2]).unwrap();
        assert_eq!(
            l.to_plain().lines().skip(5).collect::<Vec<_>>(),
            ["1, Lev:0, Deg:1  (2),-2  (0)", "2, Lev:1, Deg:1  (0),0  (1)", "3, Lev:2, Deg:1  (-2),2  (2)"]
        );
        assert!(l.to_mathematica().starts_with("{\"SU(2)\", {2}, 3, {{1, 0, 1, {2}, -2, {0}}"));
        assert!(l.to_tex().contains("3 & 2 & 1 & $(-2)$ & $2$ & $(2)$\\\\"));
    }
}
