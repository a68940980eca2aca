//! Iterated tensor products.
//!
//! A [`TensorNode`] is an irrep sitting inside a product of several factor
//! irreps. Each of its states is expanded over product basis states, one
//! factor label per leaf of a fixed binary tree recording how the factors
//! were associated.

use std::fmt;
use std::sync::Arc;

use crate::exactnum::FieldElem;
use crate::irrep::Irrep;
use crate::linalg::{gram_orthogonalize, invert_matrix, LabeledVector, Matrix};
use crate::tensor::{Decomposition, ProductState};
use crate::{par, Error, Result};

/// Product basis state: one label per factor, in leaf order.
pub type Leaves = Vec<i32>;

/// Binary tree of factor labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelTree {
    Leaf(i32),
    Node(Box<LabelTree>, Box<LabelTree>),
}

impl LabelTree {
    pub fn leaf_count(&self) -> usize {
        match self {
            LabelTree::Leaf(_) => 1,
            LabelTree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Depth of the deepest leaf; a single leaf has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            LabelTree::Leaf(_) => 0,
            LabelTree::Node(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Replaces the leaves of a tree of the same shape by `labels`.
    fn fill(&self, labels: &[i32]) -> LabelTree {
        fn go(t: &LabelTree, labels: &[i32], pos: &mut usize) -> LabelTree {
            match t {
                LabelTree::Leaf(_) => {
                    *pos += 1;
                    LabelTree::Leaf(labels[*pos - 1])
                }
                LabelTree::Node(l, r) => {
                    let l = go(l, labels, pos);
                    let r = go(r, labels, pos);
                    LabelTree::Node(Box::new(l), Box::new(r))
                }
            }
        }
        go(self, labels, &mut 0)
    }

    pub fn leaves(&self) -> Leaves {
        fn go(t: &LabelTree, out: &mut Leaves) {
            match t {
                LabelTree::Leaf(x) => out.push(*x),
                LabelTree::Node(l, r) => {
                    go(l, out);
                    go(r, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }
}

impl fmt::Display for LabelTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelTree::Leaf(x) => write!(f, "{x}"),
            LabelTree::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

/// Basis change for one factor: old label and its expression in new labels.
pub type Trafo = Vec<(i32, LabeledVector<i32>)>;

/// An irrep inside a multiple tensor product.
#[derive(Clone, Debug)]
pub struct TensorNode {
    irrep: Arc<Irrep>,
    /// Shape of the association; leaf payloads are placeholders.
    shape: LabelTree,
    factors: Vec<Arc<Irrep>>,
    /// Expansion of state `a` at index `a - 1`.
    expansion: Vec<LabeledVector<Leaves>>,
}

impl TensorNode {
    /// A single irrep as a one-factor product.
    pub fn wrap(irrep: Arc<Irrep>) -> Self {
        let expansion = (1..=irrep.dim() as i32)
            .map(|a| LabeledVector::unit(vec![a]))
            .collect();
        TensorNode {
            shape: LabelTree::Leaf(0),
            factors: vec![irrep.clone()],
            irrep,
            expansion,
        }
    }

    pub fn irrep(&self) -> &Arc<Irrep> {
        &self.irrep
    }

    pub fn factors(&self) -> &[Arc<Irrep>] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> usize {
        self.expansion.len()
    }

    /// The `k`-th irrep (1 = highest weight, in construction order) of
    /// `self ⊗ other`, expanded over the factors of both.
    pub fn otimes(&self, other: &TensorNode, k: usize) -> Result<TensorNode> {
        if k == 0 {
            return Err(Error::InvalidArgument("irreps are counted from 1".into()));
        }
        let mut d = Decomposition::new(self.irrep.clone(), other.irrep.clone())?;
        d.decompose_until(k)?;
        let p = &d.found()[k - 1];
        let (l, r) = (&*self.irrep, &*other.irrep);
        let data = p.prepare(l, r)?;
        let irrep = Arc::new(Irrep::new_imported(&data)?);
        let states: Vec<ProductState> = match data.product_states {
            Some(ps) => ps
                .into_iter()
                .map(|e| LabeledVector::from_terms(e.terms.into_iter().map(|(c, p)| (p, c))))
                .collect(),
            // ⟨h|h⟩ has no square root: keep the common factor 1/√⟨h|h⟩ out
            None => {
                let norms = p.relative_norms(l, r)?;
                p.states()
                    .zip(&norms)
                    .map(|(s, n)| -> Result<ProductState> {
                        let c = FieldElem::from_rational(n.clone())
                            .sqrt()
                            .ok_or_else(|| Error::Inconsistent(format!("no square root of {n}")))?;
                        Ok(s.scale(&c.inv()?))
                    })
                    .collect::<Result<_>>()?
            }
        };
        let expansion = par::map(&states, |s| self.compose(other, s));
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(TensorNode {
            irrep,
            shape: LabelTree::Node(Box::new(self.shape.clone()), Box::new(other.shape.clone())),
            factors,
            expansion,
        })
    }

    fn compose(&self, other: &TensorNode, s: &ProductState) -> LabeledVector<Leaves> {
        let mut terms = Vec::new();
        for (&(a, b), c) in s.iter() {
            for (la, ca) in self.expansion[a as usize - 1].iter() {
                let cca = c * ca;
                for (lb, cb) in other.expansion[b as usize - 1].iter() {
                    let mut leaves = la.clone();
                    leaves.extend_from_slice(lb);
                    terms.push((leaves, &cca * cb));
                }
            }
        }
        LabeledVector::from_terms(terms)
    }

    /// Expansion of a state over product basis states given as leaf tuples.
    pub fn expansion(&self, label: u32) -> Result<&LabeledVector<Leaves>> {
        self.check_state(label)?;
        Ok(&self.expansion[label as usize - 1])
    }

    /// Expansion of a state over label trees.
    pub fn expand(&self, label: u32) -> Result<LabeledVector<LabelTree>> {
        Ok(self.expansion(label)?.map_labels(|l| self.shape.fill(l)))
    }

    /// Every state with its terms rendered as nested tuples, such as
    /// `(((4,3),1),-1)`.
    pub fn untree(&self) -> Vec<(u32, Vec<(FieldElem, String)>)> {
        self.expansion
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let terms = v
                    .iter()
                    .map(|(l, c)| (c.clone(), self.shape.fill(l).to_string()))
                    .collect();
                (i as u32 + 1, terms)
            })
            .collect()
    }

    fn check_state(&self, label: u32) -> Result<()> {
        if label == 0 || label as usize > self.expansion.len() {
            return Err(Error::InvalidArgument(format!(
                "state {label} outside 1..={}",
                self.expansion.len()
            )));
        }
        Ok(())
    }

    fn check_factor(&self, factor: usize) -> Result<usize> {
        if factor == 0 || factor > self.factors.len() {
            return Err(Error::InvalidArgument(format!(
                "factor {factor} outside 1..={}",
                self.factors.len()
            )));
        }
        Ok(factor - 1)
    }

    fn map_expansions(
        &self,
        f: impl Fn(&LabeledVector<Leaves>) -> Result<LabeledVector<Leaves>> + Sync + Send,
    ) -> Result<TensorNode> {
        let expansion = par::try_map(&self.expansion, f)?;
        Ok(TensorNode {
            expansion,
            ..self.clone()
        })
    }

    /// Keeps the terms whose label at `factor` is in `keep`.
    pub fn filter(&self, factor: usize, keep: &[i32]) -> Result<TensorNode> {
        let f = self.check_factor(factor)?;
        self.map_expansions(|v| Ok(v.filter(|l| keep.contains(&l[f]))))
    }

    /// Substitutes `old → Σ c·new` for the labels at `factor`.
    pub fn chbasis(&self, factor: usize, trafo: &[(i32, LabeledVector<i32>)]) -> Result<TensorNode> {
        let f = self.check_factor(factor)?;
        self.map_expansions(|v| {
            let mut terms = Vec::new();
            for (l, c) in v.iter() {
                let Some((_, image)) = trafo.iter().find(|(old, _)| *old == l[f]) else {
                    return Err(Error::InvalidArgument(format!(
                        "basis change has no rule for label {}",
                        l[f]
                    )));
                };
                for (new, x) in image.iter() {
                    let mut l2 = l.clone();
                    l2[f] = *new;
                    terms.push((l2, c * x));
                }
            }
            Ok(LabeledVector::from_terms(terms))
        })
    }

    /// `1` if every state is symmetric under exchanging the two factors,
    /// `-1` if every state is antisymmetric, `0` otherwise.
    pub fn is_sym(&self, f1: usize, f2: usize) -> Result<i32> {
        let (i, j) = (self.check_factor(f1)?, self.check_factor(f2)?);
        let (a, b) = (&self.factors[i], &self.factors[j]);
        if a.algebra() != b.algebra() || a.hw() != b.hw() {
            return Err(Error::InvalidArgument(format!(
                "factors {f1} and {f2} carry different irreps"
            )));
        }
        let mut sym = true;
        let mut anti = true;
        for v in &self.expansion {
            let swapped = v.map_labels(|l| {
                let mut l = l.clone();
                l.swap(i, j);
                l
            });
            sym &= swapped == *v;
            anti &= swapped == v.neg();
            if !sym && !anti {
                return Ok(0);
            }
        }
        Ok(if sym { 1 } else { -1 })
    }

    /// Multiplies every state by `c`.
    pub fn scale(&self, c: &FieldElem) -> TensorNode {
        TensorNode {
            expansion: self.expansion.iter().map(|v| v.scale(c)).collect(),
            ..self.clone()
        }
    }

    /// Coefficient of the product basis state `leaves` in state `label`.
    pub fn tensor_coeff(&self, label: u32, leaves: &[i32]) -> Result<FieldElem> {
        if leaves.len() != self.factors.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} factor labels, got {}",
                self.factors.len(),
                leaves.len()
            )));
        }
        Ok(self.expansion(label)?.coeff(&leaves.to_vec()))
    }
}

/// Lowering operator `E_{-αⁱ}` of an irrep acting on combinations of states.
pub fn e_lower(
    r: &Irrep,
    root: usize,
) -> impl Fn(&LabeledVector<u32>) -> Result<LabeledVector<u32>> + '_ {
    move |v| r.lower_vector(root, v)
}

/// Commutator `[A, B] = A∘B − B∘A` of two operators.
pub fn comm<A, B>(a: A, b: B) -> impl Fn(&LabeledVector<u32>) -> Result<LabeledVector<u32>>
where
    A: Fn(&LabeledVector<u32>) -> Result<LabeledVector<u32>>,
    B: Fn(&LabeledVector<u32>) -> Result<LabeledVector<u32>>,
{
    move |v| Ok(a(&b(v)?)?.sub(&b(&a(v)?)?))
}

/// Scalar product of two combinations of states of `r`.
pub fn scp(r: &Irrep, u: &LabeledVector<u32>, v: &LabeledVector<u32>) -> FieldElem {
    r.scp_vectors(u, v)
}

/// Gram matrix of the states `start, start+1, …, start+count-1`.
pub fn scalar_products(r: &Irrep, start: u32, count: u32) -> Result<Matrix> {
    if start == 0 || (start + count - 1) as usize > r.dim() {
        return Err(Error::InvalidArgument(format!(
            "states {start}..{} outside the irrep",
            start + count
        )));
    }
    let rows = (start..start + count)
        .map(|a| (start..start + count).map(|b| r.scalar_product(a, b)).collect())
        .collect();
    Matrix::from_rows(rows)
}

/// Makes `rest` orthogonal to the mutually orthogonal states `ortho` by
/// subtracting projections.
pub fn gram(
    r: &Irrep,
    ortho: &[LabeledVector<u32>],
    rest: &[LabeledVector<u32>],
) -> Result<Vec<LabeledVector<u32>>> {
    gram_orthogonalize(|u, v| r.scp_vectors(u, v), ortho, rest)
}

/// Basis change taking states `offset, offset+1, …` to the new basis
/// `basis`, whose vectors get the labels `-1, -2, …`.
pub fn chbasis_list(basis: &[LabeledVector<u32>], offset: u32) -> Result<Trafo> {
    let n = basis.len() as u32;
    let rows = basis
        .iter()
        .map(|b| {
            if let Some(l) = b.labels().find(|&&l| l < offset || l >= offset + n) {
                return Err(Error::InvalidArgument(format!(
                    "basis vector involves state {l} outside {offset}..{}",
                    offset + n - 1
                )));
            }
            Ok((offset..offset + n).map(|l| b.coeff(&l)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    // rows of B are the new vectors; old state j = Σ_k (B⁻¹)_{jk} new_k
    let inv = invert_matrix(&Matrix::from_rows(rows)?)?;
    Ok((0..n as usize)
        .map(|j| {
            let image = LabeledVector::from_terms(
                (0..n as usize).map(|k| (-(k as i32) - 1, inv[(j, k)].clone())),
            );
            ((offset as usize + j) as i32, image)
        })
        .collect())
}
