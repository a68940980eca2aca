//! Irreps with an explicit basis of weight states, lowering operators and
//! scalar products.
//!
//! Basis states are labelled `1..=dim` and normalized to unity. States of the
//! same weight need not be orthogonal; their Gram matrix `M` and its inverse
//! `G` are kept per weight.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactnum::{FieldElem, Rational};
use crate::liealg::{LieAlgebra, WeightRecord};
use crate::linalg::{invert_matrix, LabeledVector, Matrix};
use crate::{Error, Result};

/// A basis state: its weight and its index among the states of that weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ket {
    pub dynkin: Vec<i32>,
    pub deg: u32,
}

impl fmt::Display for Ket {
    /// `(1,0,-1,)2`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for x in &self.dynkin {
            write!(f, "{x},")?;
        }
        write!(f, "){}", self.deg)
    }
}

/// Formats Dynkin labels as `(1,0,-1,)`.
pub fn dynkin_string(w: &[i32]) -> String {
    let mut s = String::from("(");
    for x in w {
        s.push_str(&x.to_string());
        s.push(',');
    }
    s.push(')');
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Generic,
    Imported,
}

/// All basis states of one weight.
#[derive(Clone, Debug)]
pub struct WeightBlock {
    pub record: WeightRecord,
    /// Labels in degeneracy order.
    pub labels: Vec<u32>,
    gram: Matrix,
    inv_gram: Matrix,
}

impl WeightBlock {
    /// `M_ab = ⟨w_a|w_b⟩` with `a, b` positions inside the block.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `G = M⁻¹`.
    pub fn inv_gram(&self) -> &Matrix {
        &self.inv_gram
    }
}

/// An irrep with explicit lowering operators and scalar products.
#[derive(Clone, Debug)]
pub struct Irrep {
    algebra: LieAlgebra,
    hw: Vec<i32>,
    cartan: Vec<Vec<i32>>,
    kets: Vec<Ket>,
    /// Block and position inside the block for every label.
    ket_slot: Vec<(usize, usize)>,
    blocks: Vec<WeightBlock>,
    block_index: HashMap<Vec<i32>, usize>,
    /// `lowering[label - 1][root - 1]`
    lowering: Vec<Vec<LabeledVector<u32>>>,
    origin: Origin,
}

/// `⟨0_a|0_b⟩ = √(A_ab A_ba) / 2` for the zero-weight states of the adjoint
/// (1-based indices), 1 on the diagonal.
pub fn scp_zero_weights(la: LieAlgebra, a: usize, b: usize) -> Result<FieldElem> {
    let n = la.rank();
    if a == 0 || b == 0 || a > n || b > n {
        return Err(Error::InvalidArgument(format!(
            "zero-weight index out of range 1..={n}: ({a}, {b})"
        )));
    }
    if a == b {
        return Ok(FieldElem::one());
    }
    let c = la.cartan();
    let p = (c[a - 1][b - 1] * c[b - 1][a - 1]) as u64;
    Ok(FieldElem::sqrt_int(p).scale(&Rational::new(1, 2)?))
}

/// Serializable form of an irrep: kets, lowering table and scalar products.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImportedIrrepData {
    pub algebra: LieAlgebra,
    pub highest_weight: Vec<i32>,
    pub kets: Vec<KetEntry>,
    pub lowering: Vec<LoweringEntry>,
    /// Off-diagonal scalar products between states of equal weight; absent
    /// pairs are 0 and the diagonal is 1.
    pub scalar_products: Vec<ScpEntry>,
    /// Optional expansion of each state in a two-factor product basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product_states: Option<Vec<ProductStateEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KetEntry {
    pub label: u32,
    pub dynkin: Vec<i32>,
    pub deg: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoweringEntry {
    pub label: u32,
    pub root: usize,
    /// `(target label, coefficient)`
    pub image: Vec<(u32, FieldElem)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScpEntry {
    pub a: u32,
    pub b: u32,
    pub value: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductStateEntry {
    pub label: u32,
    /// `(coefficient, (left label, right label))`
    pub terms: Vec<(FieldElem, (u32, u32))>,
}

impl ImportedIrrepData {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("import data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidImport(e.to_string()))
    }
}

fn sub_row(w: &[i32], row: &[i32]) -> Vec<i32> {
    w.iter().zip(row).map(|(x, r)| x - r).collect()
}

fn add_row(w: &[i32], row: &[i32]) -> Vec<i32> {
    w.iter().zip(row).map(|(x, r)| x + r).collect()
}

impl Irrep {
    /// Builds the irrep `hw` from its weight system. Only irreps whose
    /// weights are all non-degenerate, and the adjoint, are supported.
    pub fn new_generic(la: LieAlgebra, hw: &[i32]) -> Result<Self> {
        la.validate()?;
        let ws = la.freudenthal(hw)?;
        let adjoint = hw == la.adjoint_hw().as_slice();
        if !adjoint && ws.iter().any(|w| w.degeneracy > 1) {
            return Err(Error::UnsupportedIrrep(format!(
                "{} of {} has degenerate weights and is not the adjoint; \
                 construct it inside a tensor product and import it",
                dynkin_string(hw),
                la.name()
            )));
        }
        let n = la.rank();
        let mut kets = Vec::new();
        let mut ket_slot = Vec::new();
        let mut blocks = Vec::new();
        let mut block_index = HashMap::new();
        for rec in ws {
            let m = rec.degeneracy as usize;
            let bi = blocks.len();
            let mut labels = Vec::with_capacity(m);
            for d in 0..m {
                kets.push(Ket {
                    dynkin: rec.dynkin.clone(),
                    deg: d as u32 + 1,
                });
                ket_slot.push((bi, d));
                labels.push(kets.len() as u32);
            }
            let gram = if m > 1 {
                // adjoint zero weight: |0_i⟩ comes from lowering αⁱ by root i
                let mut g = Matrix::zeros(m, m);
                for a in 0..m {
                    for b in 0..m {
                        g[(a, b)] = scp_zero_weights(la, a + 1, b + 1)?;
                    }
                }
                g
            } else {
                Matrix::identity(1)
            };
            let inv_gram = invert_matrix(&gram)?;
            block_index.insert(rec.dynkin.clone(), bi);
            blocks.push(WeightBlock {
                record: rec,
                labels,
                gram,
                inv_gram,
            });
        }
        let dim = kets.len();
        let mut irrep = Irrep {
            algebra: la,
            hw: hw.to_vec(),
            cartan: la.cartan(),
            kets,
            ket_slot,
            blocks,
            block_index,
            lowering: vec![vec![LabeledVector::zero(); n]; dim],
            origin: Origin::Generic,
        };
        for label in 1..=dim as u32 {
            for root in 1..=n {
                let v = irrep.generic_lowering(label, root)?;
                irrep.lowering[label as usize - 1][root - 1] = v;
            }
        }
        Ok(irrep)
    }

    /// Lowering of `label` by `root` from the consistency equation, given the
    /// lowering of all states above.
    fn generic_lowering(&self, label: u32, root: usize) -> Result<LabeledVector<u32>> {
        let w = &self.kets[label as usize - 1].dynkin;
        let row = &self.cartan[root - 1];
        let t = sub_row(w, row);
        let Some(&tb) = self.block_index.get(&t) else {
            return Ok(LabeledVector::zero());
        };
        let target = &self.blocks[tb];
        if target.labels.len() > 1 {
            // only αⁱ lowered by root i reaches the zero weight, onto |0_i⟩
            if w == row {
                return Ok(LabeledVector::from_terms([(
                    target.labels[root - 1],
                    FieldElem::sqrt_int(2),
                )]));
            }
            return Ok(LabeledVector::zero());
        }
        let n2 = &FieldElem::from_int(w[root - 1] as i64) + &self.via_raising(label, label, root);
        match n2.signum() {
            0 => Ok(LabeledVector::zero()),
            s if s < 0 => Err(Error::Inconsistent(format!(
                "negative squared lowering normalization {n2} for state {} by root {root}",
                self.kets[label as usize - 1]
            ))),
            _ => {
                let n = n2.sqrt().ok_or_else(|| {
                    Error::Inconsistent(format!("no square root of {n2} in the field"))
                })?;
                Ok(LabeledVector::from_terms([(target.labels[0], n)]))
            }
        }
    }

    /// `Σ_{Γ,Δ} G^{w+α}_{ΓΔ} (M^w N_Γ)_b (M^w N_Δ)_a` for states `a`, `b` of
    /// weight `w`.
    fn via_raising(&self, a: u32, b: u32, root: usize) -> FieldElem {
        let (bw, pa) = self.ket_slot[a as usize - 1];
        let (_, pb) = self.ket_slot[b as usize - 1];
        let block = &self.blocks[bw];
        let up = add_row(&block.record.dynkin, &self.cartan[root - 1]);
        let Some(&ub) = self.block_index.get(&up) else {
            return FieldElem::zero();
        };
        let upper = &self.blocks[ub];
        // (M^w N_Γ)_x for every Γ above
        let proj = |x: usize| -> Vec<FieldElem> {
            upper
                .labels
                .iter()
                .map(|&g| {
                    let img = &self.lowering[g as usize - 1][root - 1];
                    let mut s = FieldElem::zero();
                    for (c, &lc) in block.labels.iter().enumerate() {
                        if let Some(nc) = img.get(&lc) {
                            let m = &block.gram[(x, c)];
                            if !m.is_zero() {
                                s = &s + &(m * nc);
                            }
                        }
                    }
                    s
                })
                .collect()
        };
        let va = proj(pa);
        let vb = if pa == pb { va.clone() } else { proj(pb) };
        let mut acc = FieldElem::zero();
        for (g, xb) in vb.iter().enumerate() {
            if xb.is_zero() {
                continue;
            }
            for (d, xa) in va.iter().enumerate() {
                let gg = &upper.inv_gram[(g, d)];
                if !gg.is_zero() && !xa.is_zero() {
                    acc = &acc + &(&(gg * xb) * xa);
                }
            }
        }
        acc
    }

    /// Difference of the two sides of the lowering consistency equation
    /// `Σ_AB N_aA N_bB M^{w-α}_BA = M^w_ba w_i + Σ_ΓΔ G^{w+α}_ΓΔ (M^w N_Γ)_b (M^w N_Δ)_a`
    /// for states `a`, `b` of equal weight. Zero for a consistent irrep.
    pub fn consistency_residual(&self, a: u32, b: u32, root: usize) -> Result<FieldElem> {
        self.check_label(a)?;
        self.check_label(b)?;
        self.check_root(root)?;
        let (ba, pa) = self.ket_slot[a as usize - 1];
        let (bb, pb) = self.ket_slot[b as usize - 1];
        if ba != bb {
            return Err(Error::InvalidArgument(format!(
                "states {a} and {b} have different weights"
            )));
        }
        let na = &self.lowering[a as usize - 1][root - 1];
        let nb = &self.lowering[b as usize - 1][root - 1];
        let lhs = self.scp_vectors(nb, na);
        let block = &self.blocks[ba];
        let wi = FieldElem::from_int(block.record.dynkin[root - 1] as i64);
        let rhs = &(&block.gram[(pb, pa)] * &wi) + &self.via_raising(a, b, root);
        Ok(&lhs - &rhs)
    }

    /// Checks the consistency equation for every pair of equal-weight states
    /// among `labels` and every root.
    pub fn verify_consistency<I: IntoIterator<Item = u32>>(&self, labels: I) -> Result<()> {
        for a in labels {
            let (bi, _) = *self
                .ket_slot
                .get(a as usize - 1)
                .ok_or_else(|| Error::InvalidArgument(format!("no state {a}")))?;
            for &b in &self.blocks[bi].labels {
                for root in 1..=self.rank() {
                    let r = self.consistency_residual(a, b, root)?;
                    if !r.is_zero() {
                        return Err(Error::Inconsistent(format!(
                            "lowering by root {root} violates consistency for states \
                             {a}, {b}: residual {r}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds an irrep from exported data after validating it.
    pub fn new_imported(data: &ImportedIrrepData) -> Result<Self> {
        let bad = |m: String| Error::InvalidImport(m);
        let la = data.algebra;
        la.validate()?;
        let n = la.rank();
        if data.kets.is_empty() {
            return Err(bad("no kets".into()));
        }
        for (i, k) in data.kets.iter().enumerate() {
            if k.label as usize != i + 1 {
                return Err(bad(format!(
                    "ket labels must be 1..dim in order, found {} at position {}",
                    k.label,
                    i + 1
                )));
            }
            if k.dynkin.len() != n {
                return Err(bad(format!("ket {} has wrong number of labels", k.label)));
            }
        }
        if data.kets[0].dynkin != data.highest_weight {
            return Err(bad("first ket is not the highest weight".into()));
        }
        let ws = la
            .freudenthal(&data.highest_weight)
            .map_err(|e| bad(e.to_string()))?;
        let mut block_index = HashMap::new();
        let mut blocks: Vec<WeightBlock> = ws
            .into_iter()
            .enumerate()
            .map(|(i, rec)| {
                block_index.insert(rec.dynkin.clone(), i);
                let m = rec.degeneracy as usize;
                WeightBlock {
                    record: rec,
                    labels: vec![0; m],
                    gram: Matrix::identity(m),
                    inv_gram: Matrix::identity(m),
                }
            })
            .collect();
        let dim: usize = blocks.iter().map(|b| b.labels.len()).sum();
        if dim != data.kets.len() {
            return Err(bad(format!(
                "{} kets given, irrep {} has dimension {dim}",
                data.kets.len(),
                dynkin_string(&data.highest_weight)
            )));
        }
        let mut ket_slot = Vec::with_capacity(dim);
        let mut kets = Vec::with_capacity(dim);
        for k in &data.kets {
            let bi = *block_index.get(&k.dynkin).ok_or_else(|| {
                bad(format!("ket {} has weight outside the irrep", k.label))
            })?;
            let m = blocks[bi].labels.len();
            if k.deg == 0 || k.deg as usize > m || blocks[bi].labels[k.deg as usize - 1] != 0 {
                return Err(bad(format!("ket {} has invalid degeneracy index {}", k.label, k.deg)));
            }
            blocks[bi].labels[k.deg as usize - 1] = k.label;
            ket_slot.push((bi, k.deg as usize - 1));
            kets.push(Ket {
                dynkin: k.dynkin.clone(),
                deg: k.deg,
            });
        }
        let check = |l: u32| -> Result<()> {
            if l == 0 || l as usize > dim {
                Err(Error::InvalidImport(format!("label {l} out of range")))
            } else {
                Ok(())
            }
        };
        for e in &data.scalar_products {
            check(e.a)?;
            check(e.b)?;
            let (ba, pa) = ket_slot[e.a as usize - 1];
            let (bb, pb) = ket_slot[e.b as usize - 1];
            if ba != bb {
                if e.value.is_zero() {
                    continue;
                }
                return Err(bad(format!(
                    "scalar product between states {} and {} of different weight",
                    e.a, e.b
                )));
            }
            if pa == pb {
                if !e.value.is_one() {
                    return Err(bad(format!("state {} is not normalized", e.a)));
                }
                continue;
            }
            let g = &mut blocks[ba].gram;
            let seen = &g[(pb, pa)];
            if !seen.is_zero() && seen != &e.value {
                return Err(bad(format!(
                    "asymmetric scalar product between states {} and {}",
                    e.a, e.b
                )));
            }
            g[(pa, pb)] = e.value.clone();
            g[(pb, pa)] = e.value.clone();
        }
        for b in &mut blocks {
            b.inv_gram = invert_matrix(&b.gram).map_err(|_| {
                bad(format!(
                    "singular scalar products at weight {}",
                    dynkin_string(&b.record.dynkin)
                ))
            })?;
        }
        let cartan = la.cartan();
        let mut lowering = vec![vec![LabeledVector::zero(); n]; dim];
        let mut seen_entry = vec![vec![false; n]; dim];
        for e in &data.lowering {
            check(e.label)?;
            if e.root == 0 || e.root > n {
                return Err(bad(format!("root {} out of range", e.root)));
            }
            let (li, ri) = (e.label as usize - 1, e.root - 1);
            if std::mem::replace(&mut seen_entry[li][ri], true) {
                return Err(bad(format!(
                    "duplicate lowering entry for state {} and root {}",
                    e.label, e.root
                )));
            }
            let t = sub_row(&kets[li].dynkin, &cartan[ri]);
            for (l, _) in &e.image {
                check(*l)?;
                if kets[*l as usize - 1].dynkin != t {
                    return Err(bad(format!(
                        "lowering state {} by root {} lands on state {} of wrong weight",
                        e.label, e.root, l
                    )));
                }
            }
            lowering[li][ri] = LabeledVector::from_terms(e.image.iter().cloned());
        }
        Ok(Irrep {
            algebra: la,
            hw: data.highest_weight.clone(),
            cartan,
            kets,
            ket_slot,
            blocks,
            block_index,
            lowering,
            origin: Origin::Imported,
        })
    }

    /// Exports kets, lowering table and scalar products.
    pub fn to_imported_data(&self) -> ImportedIrrepData {
        let kets = self
            .kets
            .iter()
            .enumerate()
            .map(|(i, k)| KetEntry {
                label: i as u32 + 1,
                dynkin: k.dynkin.clone(),
                deg: k.deg,
            })
            .collect();
        let mut lowering = Vec::new();
        for (i, roots) in self.lowering.iter().enumerate() {
            for (r, v) in roots.iter().enumerate() {
                if !v.is_zero() {
                    lowering.push(LoweringEntry {
                        label: i as u32 + 1,
                        root: r + 1,
                        image: v.terms().to_vec(),
                    });
                }
            }
        }
        let mut scalar_products = Vec::new();
        for b in &self.blocks {
            for (x, &la) in b.labels.iter().enumerate() {
                for (y, &lb) in b.labels.iter().enumerate().skip(x + 1) {
                    let v = &b.gram[(x, y)];
                    if !v.is_zero() {
                        scalar_products.push(ScpEntry {
                            a: la,
                            b: lb,
                            value: v.clone(),
                        });
                    }
                }
            }
        }
        ImportedIrrepData {
            algebra: self.algebra,
            highest_weight: self.hw.clone(),
            kets,
            lowering,
            scalar_products,
            product_states: None,
        }
    }

    fn check_label(&self, l: u32) -> Result<()> {
        if l == 0 || l as usize > self.kets.len() {
            Err(Error::InvalidArgument(format!(
                "state {l} out of range 1..={}",
                self.kets.len()
            )))
        } else {
            Ok(())
        }
    }

    fn check_root(&self, root: usize) -> Result<()> {
        if root == 0 || root > self.rank() {
            Err(Error::InvalidArgument(format!(
                "root {root} out of range 1..={}",
                self.rank()
            )))
        } else {
            Ok(())
        }
    }

    pub fn algebra(&self) -> LieAlgebra {
        self.algebra
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn hw(&self) -> &[i32] {
        &self.hw
    }

    pub fn dim(&self) -> usize {
        self.kets.len()
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn kets(&self) -> &[Ket] {
        &self.kets
    }

    pub fn ket(&self, label: u32) -> &Ket {
        &self.kets[label as usize - 1]
    }

    pub fn weight_of(&self, label: u32) -> &[i32] {
        &self.kets[label as usize - 1].dynkin
    }

    /// Weight blocks in listing order.
    pub fn blocks(&self) -> &[WeightBlock] {
        &self.blocks
    }

    pub fn block(&self, w: &[i32]) -> Option<&WeightBlock> {
        self.block_index.get(w).map(|&i| &self.blocks[i])
    }

    /// Block index and position inside the block of a label.
    pub fn slot(&self, label: u32) -> (usize, usize) {
        self.ket_slot[label as usize - 1]
    }

    pub fn labels_at(&self, w: &[i32]) -> &[u32] {
        self.block(w).map_or(&[], |b| &b.labels)
    }

    pub fn multiplicity(&self, w: &[i32]) -> usize {
        self.labels_at(w).len()
    }

    /// `E_{-αⁱ}` applied to a basis state; zero below the weight system.
    pub fn lower(&self, root: usize, label: u32) -> Result<LabeledVector<u32>> {
        self.check_root(root)?;
        self.check_label(label)?;
        Ok(self.lowering[label as usize - 1][root - 1].clone())
    }

    /// Borrowing form of [`Irrep::lower`] without range checks.
    pub fn lowering(&self, label: u32, root: usize) -> &LabeledVector<u32> {
        &self.lowering[label as usize - 1][root - 1]
    }

    /// `E_{-αⁱ}` applied to a combination of basis states.
    pub fn lower_vector(&self, root: usize, v: &LabeledVector<u32>) -> Result<LabeledVector<u32>> {
        self.check_root(root)?;
        let mut out = LabeledVector::zero();
        for (l, c) in v.iter() {
            self.check_label(*l)?;
            out = out.add_scaled(self.lowering(*l, root), c);
        }
        Ok(out)
    }

    /// `⟨a|b⟩` of two basis states.
    pub fn scalar_product(&self, a: u32, b: u32) -> FieldElem {
        let (ba, pa) = self.ket_slot[a as usize - 1];
        let (bb, pb) = self.ket_slot[b as usize - 1];
        if ba != bb {
            return FieldElem::zero();
        }
        self.blocks[ba].gram[(pa, pb)].clone()
    }

    /// `⟨u|v⟩` of two combinations of basis states.
    pub fn scp_vectors(&self, u: &LabeledVector<u32>, v: &LabeledVector<u32>) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (a, ca) in u.iter() {
            let (bi, pa) = self.ket_slot[*a as usize - 1];
            let block = &self.blocks[bi];
            for (pb, b) in block.labels.iter().enumerate() {
                if let Some(cb) = v.get(b) {
                    let m = &block.gram[(pa, pb)];
                    if !m.is_zero() {
                        acc = &acc + &(&(ca * cb) * m);
                    }
                }
            }
        }
        acc
    }
}
