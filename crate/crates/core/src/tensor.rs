//! Two-factor tensor products and their decomposition into irreps.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::exactnum::{FieldElem, Rational};
use crate::irrep::{
    dynkin_string, ImportedIrrepData, Irrep, KetEntry, LoweringEntry, ProductStateEntry, ScpEntry,
};
use crate::liealg::WeightRecord;
use crate::linalg::{nullspace, IncrementalBasis, LabeledVector, Matrix};
use crate::{par, Error, Result};

/// A state of `V ⊗ V'` as a combination of `(left label, right label)` pairs.
pub type ProductState = LabeledVector<(u32, u32)>;

fn sum_weights(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Weight of a weight-homogeneous product state.
pub fn product_weight(s: &ProductState, l: &Irrep, r: &Irrep) -> Result<Vec<i32>> {
    let mut it = s.labels();
    let Some(&(a, b)) = it.next() else {
        return Err(Error::InvalidArgument("zero vector has no weight".into()));
    };
    let w = sum_weights(l.weight_of(a), r.weight_of(b));
    for &(a, b) in it {
        if sum_weights(l.weight_of(a), r.weight_of(b)) != w {
            return Err(Error::Inconsistent("product state mixes weights".into()));
        }
    }
    Ok(w)
}

/// `E_{-αⁱ} ⊗ 1 + 1 ⊗ E_{-αⁱ}` applied to `s`.
pub fn product_lower(s: &ProductState, root: usize, l: &Irrep, r: &Irrep) -> ProductState {
    let mut terms = Vec::new();
    for (&(a, b), c) in s.iter() {
        for (a2, x) in l.lowering(a, root).iter() {
            terms.push(((*a2, b), c * x));
        }
        for (b2, y) in r.lowering(b, root).iter() {
            terms.push(((a, *b2), c * y));
        }
    }
    LabeledVector::from_terms(terms)
}

/// `⟨s1|s2⟩` using the scalar products of the factors.
pub fn product_scp(s1: &ProductState, s2: &ProductState, l: &Irrep, r: &Irrep) -> FieldElem {
    let mut acc = FieldElem::zero();
    for (&(a, b), c) in s1.iter() {
        let (lb, la) = l.slot(a);
        let (rb, ra) = r.slot(b);
        let lblock = &l.blocks()[lb];
        let rblock = &r.blocks()[rb];
        for (pa, &a2) in lblock.labels.iter().enumerate() {
            let ml = &lblock.gram()[(la, pa)];
            if ml.is_zero() {
                continue;
            }
            for (pb, &b2) in rblock.labels.iter().enumerate() {
                let mr = &rblock.gram()[(ra, pb)];
                if mr.is_zero() {
                    continue;
                }
                if let Some(c2) = s2.get(&(a2, b2)) {
                    let mut t = c * c2;
                    if !ml.is_one() {
                        t = &t * ml;
                    }
                    if !mr.is_one() {
                        t = &t * mr;
                    }
                    acc = &acc + &t;
                }
            }
        }
    }
    acc
}

/// One irrep inside a tensor product, spanned by explicit product states.
#[derive(Clone, Debug)]
pub struct ProductIrrep {
    hw: Vec<i32>,
    weights: Vec<WeightRecord>,
    weight_index: HashMap<Vec<i32>, usize>,
    /// States grouped by weight, weights in listing order.
    states: Vec<Vec<ProductState>>,
    hw_norm2: FieldElem,
}

impl ProductIrrep {
    /// Spans the irrep generated by a highest-weight state by repeated
    /// lowering, keeping at each weight the first linearly independent
    /// candidates in (source state, root) order.
    pub fn descend(
        hw_state: ProductState,
        hw_norm2: FieldElem,
        l: &Irrep,
        r: &Irrep,
    ) -> Result<Self> {
        let hw = product_weight(&hw_state, l, r)?;
        let la = l.algebra();
        let weights = la.freudenthal(&hw)?;
        let weight_index: HashMap<Vec<i32>, usize> = weights
            .iter()
            .enumerate()
            .map(|(i, w)| (w.dynkin.clone(), i))
            .collect();
        let cartan = la.cartan();
        let rank = la.rank();
        let mut states: Vec<Vec<ProductState>> = vec![Vec::new(); weights.len()];
        states[0].push(hw_state);
        // global label offset of the first state of each weight
        let mut offsets = vec![0usize; weights.len() + 1];
        offsets[1] = 1;
        let mut start = 1;
        while start < weights.len() {
            let level = weights[start].level;
            let end = weights[start..]
                .iter()
                .position(|w| w.level != level)
                .map_or(weights.len(), |e| start + e);
            let targets: Vec<usize> = (start..end).collect();
            let built = {
                let states = &states;
                let offsets = &offsets;
                par::try_map(&targets, |&ti| -> Result<Vec<ProductState>> {
                    let t = &weights[ti];
                    let mut cands: Vec<(usize, usize, usize)> = Vec::new();
                    for root in 1..=rank {
                        let up = sum_weights(&t.dynkin, &cartan[root - 1]);
                        if let Some(&ui) = weight_index.get(&up) {
                            for k in 0..states[ui].len() {
                                cands.push((offsets[ui] + k, root, ui));
                            }
                        }
                    }
                    cands.sort_unstable();
                    let want = t.degeneracy as usize;
                    let mut basis = IncrementalBasis::new();
                    let mut kept = Vec::with_capacity(want);
                    for (label, root, ui) in cands {
                        if kept.len() == want {
                            break;
                        }
                        let src = &states[ui][label - offsets[ui]];
                        let v = product_lower(src, root, l, r);
                        if !v.is_zero() && basis.insert(&v) {
                            kept.push(v);
                        }
                    }
                    if kept.len() != want {
                        return Err(Error::DecompositionFailure(format!(
                            "irrep {}: found {} of {} states at weight {}",
                            dynkin_string(&hw),
                            kept.len(),
                            want,
                            dynkin_string(&t.dynkin)
                        )));
                    }
                    Ok(kept)
                })?
            };
            for (ti, kept) in targets.into_iter().zip(built) {
                offsets[ti + 1] = offsets[ti] + kept.len();
                states[ti] = kept;
            }
            start = end;
        }
        Ok(ProductIrrep {
            hw,
            weights,
            weight_index,
            states,
            hw_norm2,
        })
    }

    pub fn hw(&self) -> &[i32] {
        &self.hw
    }

    pub fn dim(&self) -> usize {
        self.states.iter().map(Vec::len).sum()
    }

    /// Weight system of the irrep with multiplicities.
    pub fn weights(&self) -> &[WeightRecord] {
        &self.weights
    }

    /// `⟨h|h⟩` of the highest-weight state; 1 unless the norm has no square
    /// root in the field.
    pub fn hw_norm2(&self) -> &FieldElem {
        &self.hw_norm2
    }

    pub fn hw_state(&self) -> &ProductState {
        &self.states[0][0]
    }

    pub fn multiplicity(&self, w: &[i32]) -> usize {
        self.weight_index
            .get(w)
            .map_or(0, |&i| self.weights[i].degeneracy as usize)
    }

    pub fn states_at(&self, w: &[i32]) -> &[ProductState] {
        self.weight_index.get(w).map_or(&[], |&i| &self.states[i])
    }

    /// All states in label order.
    pub fn states(&self) -> impl Iterator<Item = &ProductState> {
        self.states.iter().flatten()
    }

    /// States grouped by weight in listing order.
    pub fn states_by_weight(&self) -> impl Iterator<Item = (&WeightRecord, &[ProductState])> {
        self.weights.iter().zip(self.states.iter().map(Vec::as_slice))
    }

    /// States whose weight is dominant.
    pub fn dominant_weights(&self) -> Vec<&ProductState> {
        self.states_by_weight()
            .filter(|(w, _)| w.dynkin.iter().all(|&x| x >= 0))
            .flat_map(|(_, s)| s.iter())
            .collect()
    }

    /// Coefficient listing nested as levels, states, then terms
    /// `("coeff", ("leftket", "rightket"))`, one term per line.
    pub fn listing(&self, l: &Irrep, r: &Irrep, render: impl Fn(&FieldElem) -> String) -> String {
        let mut levels: Vec<Vec<&ProductState>> = Vec::new();
        for (w, ss) in self.states_by_weight() {
            let lv = w.level as usize;
            if levels.len() <= lv {
                levels.resize_with(lv + 1, Vec::new);
            }
            levels[lv].extend(ss);
        }
        let level_strings: Vec<String> = levels
            .iter()
            .map(|states| {
                let parts: Vec<String> = states
                    .iter()
                    .map(|s| {
                        let terms: Vec<String> = s
                            .iter()
                            .map(|(&(a, b), c)| {
                                format!("(\"{}\", (\"{}\", \"{}\"))", render(c), l.ket(a), r.ket(b))
                            })
                            .collect();
                        format!("[{}]", terms.join(";\n  "))
                    })
                    .collect();
                format!("[{}]", parts.join(";\n "))
            })
            .collect();
        format!("[{}]\n", level_strings.join(";\n"))
    }

    /// `⟨s|s⟩ / ⟨h|h⟩` for every state in label order. These are rational
    /// because every state is a word of lowering operators applied to `h`.
    pub fn relative_norms(&self, l: &Irrep, r: &Irrep) -> Result<Vec<Rational>> {
        let all: Vec<&ProductState> = self.states().collect();
        par::try_map(&all, |s| {
            let n = product_scp(s, s, l, r).div(&self.hw_norm2)?;
            n.as_rational()
                .ok_or_else(|| Error::Inconsistent(format!("irrational relative norm {n}")))
        })
    }

    /// Exports the irrep with lowering coefficients and scalar products
    /// normalized so that every state has unit norm.
    pub fn prepare(&self, l: &Irrep, r: &Irrep) -> Result<ImportedIrrepData> {
        let la = l.algebra();
        let cartan = la.cartan();
        let h2 = &self.hw_norm2;
        let flat: Vec<(&WeightRecord, usize, &ProductState)> = self
            .states_by_weight()
            .flat_map(|(w, ss)| ss.iter().enumerate().map(move |(k, s)| (w, k, s)))
            .collect();
        let mut first_label = vec![0u32; self.weights.len()];
        {
            let mut next = 1u32;
            for (i, ss) in self.states.iter().enumerate() {
                first_label[i] = next;
                next += ss.len() as u32;
            }
        }
        let ratios = self.relative_norms(l, r)?;
        let sqrt_ratio = |x: &Rational| -> Result<FieldElem> {
            FieldElem::from_rational(x.clone())
                .sqrt()
                .ok_or_else(|| Error::Inconsistent(format!("no square root of {x}")))
        };
        let kets: Vec<KetEntry> = flat
            .iter()
            .enumerate()
            .map(|(i, (w, k, _))| KetEntry {
                label: i as u32 + 1,
                dynkin: w.dynkin.clone(),
                deg: *k as u32 + 1,
            })
            .collect();

        let mut scalar_products = Vec::new();
        for (wi, ss) in self.states.iter().enumerate() {
            for x in 0..ss.len() {
                for y in x + 1..ss.len() {
                    let a = first_label[wi] + x as u32;
                    let b = first_label[wi] + y as u32;
                    let num = product_scp(&ss[x], &ss[y], l, r);
                    if num.is_zero() {
                        continue;
                    }
                    let rr = &ratios[a as usize - 1] * &ratios[b as usize - 1];
                    let den = &h2.clone() * &sqrt_ratio(&rr)?;
                    scalar_products.push(ScpEntry {
                        a,
                        b,
                        value: num.div(&den)?,
                    });
                }
            }
        }

        // coordinates of lowered states in the kept basis of each weight
        let bases: Vec<IncrementalBasis<(u32, u32)>> = par::map(&self.states, |ss| {
            let mut b = IncrementalBasis::new();
            for s in ss {
                b.insert(s);
            }
            b
        });
        let lowering_rows = par::try_map(&flat, |(w, k, s)| -> Result<Vec<LoweringEntry>> {
            let wi = self.weight_index[&w.dynkin];
            let a = first_label[wi] + *k as u32;
            let ra = &ratios[a as usize - 1];
            let mut out = Vec::new();
            for root in 1..=la.rank() {
                let v = product_lower(s, root, l, r);
                if v.is_zero() {
                    continue;
                }
                let t: Vec<i32> = w
                    .dynkin
                    .iter()
                    .zip(&cartan[root - 1])
                    .map(|(x, y)| x - y)
                    .collect();
                let Some(&ti) = self.weight_index.get(&t) else {
                    return Err(Error::Inconsistent(format!(
                        "lowering leaves the irrep {}",
                        dynkin_string(&self.hw)
                    )));
                };
                let coords = bases[ti].coordinates(&v).ok_or_else(|| {
                    Error::Inconsistent(format!(
                        "lowered state outside the span at weight {}",
                        dynkin_string(&t)
                    ))
                })?;
                let mut image = Vec::new();
                for (kb, c) in coords.into_iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let b = first_label[ti] + kb as u32;
                    let q = (&ratios[b as usize - 1] / ra)?;
                    image.push((b, &c * &sqrt_ratio(&q)?));
                }
                out.push(LoweringEntry {
                    label: a,
                    root,
                    image,
                });
            }
            Ok(out)
        })?;
        let lowering = lowering_rows.into_iter().flatten().collect();

        let product_states = match h2.sqrt() {
            Some(h) => {
                let entries = flat
                    .iter()
                    .enumerate()
                    .map(|(i, (_, _, s))| -> Result<ProductStateEntry> {
                        let scale = (&h * &sqrt_ratio(&ratios[i])?).inv()?;
                        Ok(ProductStateEntry {
                            label: i as u32 + 1,
                            terms: s
                                .iter()
                                .map(|(p, c)| (c * &scale, *p))
                                .collect(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(entries)
            }
            None => None,
        };

        Ok(ImportedIrrepData {
            algebra: la,
            highest_weight: self.hw.clone(),
            kets,
            lowering,
            scalar_products,
            product_states,
        })
    }
}

/// Decomposition of `left ⊗ right` into irreps.
#[derive(Clone, Debug)]
pub struct Decomposition {
    left: Arc<Irrep>,
    right: Arc<Irrep>,
    /// Number of ket pairs of each weight.
    pair_counts: HashMap<Vec<i32>, usize>,
    level_vector: Vec<i64>,
    found: Vec<ProductIrrep>,
}

impl Decomposition {
    pub fn new(left: Arc<Irrep>, right: Arc<Irrep>) -> Result<Self> {
        if left.algebra() != right.algebra() {
            return Err(Error::InvalidArgument(format!(
                "factors belong to different algebras {} and {}",
                left.algebra(),
                right.algebra()
            )));
        }
        let mut pair_counts = HashMap::new();
        for lb in left.blocks() {
            for rb in right.blocks() {
                let w = sum_weights(&lb.record.dynkin, &rb.record.dynkin);
                *pair_counts.entry(w).or_insert(0) += lb.labels.len() * rb.labels.len();
            }
        }
        let level_vector = left.algebra().level_vector();
        Ok(Decomposition {
            left,
            right,
            pair_counts,
            level_vector,
            found: Vec::new(),
        })
    }

    pub fn left(&self) -> &Arc<Irrep> {
        &self.left
    }

    pub fn right(&self) -> &Arc<Irrep> {
        &self.right
    }

    pub fn found(&self) -> &[ProductIrrep] {
        &self.found
    }

    /// All ket pairs of total weight `w`, ordered by (left, right) label.
    pub fn basis_product(&self, w: &[i32]) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for lb in self.left.blocks() {
            let rest: Vec<i32> = w.iter().zip(&lb.record.dynkin).map(|(x, y)| x - y).collect();
            let rl = self.right.labels_at(&rest);
            for &a in &lb.labels {
                for &b in rl {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn found_multiplicity(&self, w: &[i32]) -> usize {
        self.found.iter().map(|p| p.multiplicity(w)).sum()
    }

    /// Dominant weights with states not yet accounted for, most levels first.
    fn candidates(&self) -> Vec<Vec<i32>> {
        let mut c: Vec<(i64, Vec<i32>)> = self
            .pair_counts
            .iter()
            .filter(|(w, &n)| w.iter().all(|&x| x >= 0) && n > self.found_multiplicity(w))
            .map(|(w, _)| {
                let lv: i64 = w.iter().zip(&self.level_vector).map(|(&x, r)| x as i64 * r).sum();
                (lv, w.clone())
            })
            .collect();
        c.sort_by(|a, b| b.cmp(a));
        c.into_iter().map(|(_, w)| w).collect()
    }

    /// Constructs the next irrep. Returns `false` once the product is
    /// exhausted.
    pub fn step(&mut self) -> Result<bool> {
        let Some(w) = self.candidates().into_iter().next() else {
            return Ok(false);
        };
        let (l, r) = (&*self.left, &*self.right);
        let pairs = self.basis_product(&w);
        let previous: Vec<&ProductState> = self
            .found
            .iter()
            .flat_map(|p| p.states_at(&w).iter())
            .collect();
        let coeffs = if previous.is_empty() {
            let mut x = vec![FieldElem::zero(); pairs.len()];
            x[0] = FieldElem::one();
            x
        } else {
            // rows: ⟨s|p_j⟩ for every earlier state s of weight w
            let rows: Vec<Vec<FieldElem>> = par::map(&previous, |s| {
                pairs
                    .iter()
                    .map(|p| product_scp(s, &LabeledVector::unit(*p), l, r))
                    .collect()
            });
            let m = Matrix::from_rows(rows)?;
            nullspace(&m)?.into_iter().next().ok_or_else(|| {
                Error::DecompositionFailure(format!(
                    "no state orthogonal to the irreps found so far at weight {}",
                    dynkin_string(&w)
                ))
            })?
        };
        let mut state = LabeledVector::from_terms(pairs.into_iter().zip(coeffs));
        let mut norm2 = product_scp(&state, &state, l, r);
        if let Some(n) = norm2.sqrt() {
            state = state.scale(&n.inv()?);
            norm2 = FieldElem::one();
        }
        if state.terms()[0].1.signum() < 0 {
            state = state.neg();
        }
        let p = ProductIrrep::descend(state, norm2, l, r)?;
        self.found.push(p);
        Ok(true)
    }

    /// Finds all irreps in the product and checks the dimensions.
    pub fn decompose(&mut self) -> Result<()> {
        while self.step()? {}
        if !self.check_dims() {
            return Err(Error::DecompositionFailure(format!(
                "dimensions do not add up:\n{}",
                self.result()
            )));
        }
        Ok(())
    }

    /// Finds irreps until `k` of them are known.
    pub fn decompose_until(&mut self, k: usize) -> Result<()> {
        while self.found.len() < k {
            if !self.step()? {
                return Err(Error::InvalidArgument(format!(
                    "the product contains only {} irreps",
                    self.found.len()
                )));
            }
        }
        Ok(())
    }

    pub fn check_dims(&self) -> bool {
        let total: usize = self.found.iter().map(ProductIrrep::dim).sum();
        total == self.left.dim() * self.right.dim()
    }

    /// `(highest weight, multiplicity)` of the irreps found, in order of
    /// first appearance.
    pub fn multiplicities(&self) -> Vec<(Vec<i32>, usize)> {
        let mut out: Vec<(Vec<i32>, usize)> = Vec::new();
        for p in &self.found {
            match out.iter_mut().find(|(w, _)| w == p.hw()) {
                Some((_, n)) => *n += 1,
                None => out.push((p.hw().to_vec(), 1)),
            }
        }
        out
    }

    /// Header line followed by one `(dynkin)dim` line per irrep found.
    pub fn result(&self) -> String {
        let mut s = format!(
            "{}: {}{} x {}{} = \n",
            self.left.algebra(),
            dynkin_string(self.left.hw()),
            self.left.dim(),
            dynkin_string(self.right.hw()),
            self.right.dim()
        );
        for p in &self.found {
            let _ = writeln!(s, "{}{}", dynkin_string(p.hw()), p.dim());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;

    fn irrep(la: LieAlgebra, hw: &[i32]) -> Arc<Irrep> {
        Arc::new(Irrep::new_generic(la, hw).unwrap())
    }

    #[test]
    fn triplet_times_antitriplet() {
        let la = LieAlgebra::A(2);
        let mut d = Decomposition::new(irrep(la, &[1, 0]), irrep(la, &[0, 1])).unwrap();
        d.decompose().unwrap();
        assert_eq!(d.result(), "A2: (1,0,)3 x (0,1,)3 = \n(1,1,)8\n(0,0,)1\n");
        let singlet = d.found()[1].hw_state();
        let c = FieldElem::sqrt_int(3).inv().unwrap();
        let expect = LabeledVector::from_terms([
            ((1, 3), c.clone()),
            ((2, 2), -c.clone()),
            ((3, 1), c),
        ]);
        assert_eq!(singlet, &expect);
    }

    #[test]
    fn doublet_squared() {
        let la = LieAlgebra::A(1);
        let mut d = Decomposition::new(irrep(la, &[1]), irrep(la, &[1])).unwrap();
        d.decompose().unwrap();
        assert_eq!(d.multiplicities(), vec![(vec![2], 1), (vec![0], 1)]);
    }
}
