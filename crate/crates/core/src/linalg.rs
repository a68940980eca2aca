//! Exact linear algebra over [`FieldElem`].

use std::fmt;

use crate::exactnum::FieldElem;
use crate::{Error, Result};

/// Sparse vector with coefficients indexed by ordered labels.
///
/// Terms are kept sorted by label with no zero coefficients, so equality is
/// structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledVector<L> {
    terms: Vec<(L, FieldElem)>,
}

impl<L> Default for LabeledVector<L> {
    fn default() -> Self {
        LabeledVector { terms: Vec::new() }
    }
}

impl<L: Ord + Clone> LabeledVector<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(label: L) -> Self {
        LabeledVector {
            terms: vec![(label, FieldElem::one())],
        }
    }

    /// Builds a vector from arbitrary terms, merging repeated labels.
    pub fn from_terms<I: IntoIterator<Item = (L, FieldElem)>>(items: I) -> Self {
        let mut raw: Vec<(L, FieldElem)> = items.into_iter().collect();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(L, FieldElem)> = Vec::with_capacity(raw.len());
        for (l, c) in raw {
            match terms.last_mut() {
                Some((ll, lc)) if *ll == l => *lc = &*lc + &c,
                _ => terms.push((l, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        LabeledVector { terms }
    }

    pub fn terms(&self) -> &[(L, FieldElem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(L, FieldElem)> {
        self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &FieldElem)> {
        self.terms.iter().map(|(l, c)| (l, c))
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.terms.iter().map(|(l, _)| l)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, label: &L) -> Option<&FieldElem> {
        self.terms
            .binary_search_by(|(l, _)| l.cmp(label))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    pub fn coeff(&self, label: &L) -> FieldElem {
        self.get(label).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &FieldElem::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &FieldElem::from_int(-1))
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &Self, c: &FieldElem) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push((b[j].0.clone(), c * &b[j].1));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = &a[i].1 + &(c * &b[j].1);
                    if !s.is_zero() {
                        terms.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        LabeledVector { terms }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LabeledVector {
            terms: self.terms.iter().map(|(l, x)| (l.clone(), x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LabeledVector {
            terms: self.terms.iter().map(|(l, x)| (l.clone(), -x)).collect(),
        }
    }

    /// Canonical form; vectors are always canonical, so this is a copy.
    pub fn simplify(&self) -> Self {
        self.clone()
    }

    /// Relabels every term, merging labels that collide.
    pub fn map_labels<M: Ord + Clone>(&self, f: impl Fn(&L) -> M) -> LabeledVector<M> {
        LabeledVector::from_terms(self.terms.iter().map(|(l, c)| (f(l), c.clone())))
    }

    /// Keeps the terms whose label satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&L) -> bool) -> Self {
        LabeledVector {
            terms: self.terms.iter().filter(|(l, _)| keep(l)).cloned().collect(),
        }
    }

    /// Scalar product treating the labels as an orthonormal basis.
    pub fn dot(&self, other: &Self) -> FieldElem {
        let mut acc = FieldElem::zero();
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = &acc + &(&a[i].1 * &b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

impl<L: fmt::Debug> fmt::Debug for LabeledVector<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({c}, {l:?})")?;
        }
        f.write_str("}")
    }
}

/// Dense rectangular matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElem::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElem::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("matrix rows differ in length".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| FieldElem::from_int(x)).collect())
                .collect(),
        )
    }

    /// Column vector.
    pub fn column(v: Vec<FieldElem>) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[dst] -= c · row[src]`.
    fn sub_row(&mut self, dst: usize, src: usize, c: &FieldElem) {
        for j in 0..self.cols {
            let s = &self[(src, j)];
            if s.is_zero() {
                continue;
            }
            let v = &self[(dst, j)] - &(c * s);
            self[(dst, j)] = v;
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Row-echelon form of `m`, applying the same row operations to `rhs`.
///
/// The pivot of each column is the first remaining row with a nonzero entry.
/// Rows are not normalized.
pub fn gauss(m: &Matrix, rhs: &Matrix) -> Result<(Matrix, Matrix)> {
    if m.rows != rhs.rows {
        return Err(Error::InvalidArgument(
            "right-hand side has wrong number of rows".into(),
        ));
    }
    let mut a = m.clone();
    let mut b = rhs.clone();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        b.swap_rows(r, p);
        let pivot_inv = a[(r, c)].inv()?;
        for i in r + 1..a.rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] * &pivot_inv;
            a.sub_row(i, r, &f);
            b.sub_row(i, r, &f);
        }
        r += 1;
    }
    Ok((a, b))
}

/// Pivot column of each nonzero row of an echelon matrix.
fn pivots(e: &Matrix) -> Vec<(usize, usize)> {
    (0..e.rows)
        .filter_map(|i| (0..e.cols).find(|&j| !e[(i, j)].is_zero()).map(|j| (i, j)))
        .collect()
}

/// One solution of the echelon system `e · x = rhs` for each rhs column.
/// Free variables are set to zero.
pub fn solve(e: &Matrix, rhs: &Matrix) -> Result<Matrix> {
    let piv = pivots(e);
    for i in piv.len()..e.rows {
        if (0..rhs.cols).any(|k| !rhs[(i, k)].is_zero()) {
            return Err(Error::NoSolution);
        }
    }
    let mut x = Matrix::zeros(e.cols, rhs.cols);
    for &(i, p) in piv.iter().rev() {
        let inv = e[(i, p)].inv()?;
        for k in 0..rhs.cols {
            let mut s = rhs[(i, k)].clone();
            for j in p + 1..e.cols {
                if !e[(i, j)].is_zero() && !x[(j, k)].is_zero() {
                    s = &s - &(&e[(i, j)] * &x[(j, k)]);
                }
            }
            x[(p, k)] = &s * &inv;
        }
    }
    Ok(x)
}

/// Solves `m · x = b` for a single right-hand side.
pub fn solve_system(m: &Matrix, b: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let (e, r) = gauss(m, &Matrix::column(b.to_vec()))?;
    Ok(solve(&e, &r)?.col(0))
}

/// Basis of the null space of `m`, one vector per free column, with that
/// free variable set to 1 and the other free variables to 0.
pub fn nullspace(m: &Matrix) -> Result<Vec<Vec<FieldElem>>> {
    let (e, _) = gauss(m, &Matrix::zeros(m.rows, 0))?;
    let piv = pivots(&e);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; e.cols];
        for &(_, p) in &piv {
            v[p] = true;
        }
        v
    };
    let mut out = Vec::new();
    for free in (0..e.cols).filter(|&j| !is_pivot[j]) {
        let mut x = vec![FieldElem::zero(); e.cols];
        x[free] = FieldElem::one();
        for &(i, p) in piv.iter().rev() {
            let mut s = FieldElem::zero();
            for j in p + 1..e.cols {
                if !e[(i, j)].is_zero() && !x[j].is_zero() {
                    s = &s - &(&e[(i, j)] * &x[j]);
                }
            }
            x[p] = s.div(&e[(i, p)])?;
        }
        out.push(x);
    }
    Ok(out)
}

pub fn invert_matrix(m: &Matrix) -> Result<Matrix> {
    if m.rows != m.cols {
        return Err(Error::InvalidArgument("cannot invert a non-square matrix".into()));
    }
    let (e, r) = gauss(m, &Matrix::identity(m.rows))?;
    if pivots(&e).len() < m.rows {
        return Err(Error::SingularMatrix);
    }
    solve(&e, &r)
}

/// True iff the vectors admit a nontrivial linear relation.
pub fn linearly_dependent<L: Ord + Clone>(vs: &[LabeledVector<L>]) -> bool {
    let mut basis = IncrementalBasis::new();
    vs.iter().any(|v| !basis.insert(v))
}

/// Subtracts from each vector of `rest` its projections onto `ortho`.
///
/// Only projections onto `ortho` are removed; the outputs are not made
/// orthogonal to one another.
pub fn gram_orthogonalize<L, F>(
    scp: F,
    ortho: &[LabeledVector<L>],
    rest: &[LabeledVector<L>],
) -> Result<Vec<LabeledVector<L>>>
where
    L: Ord + Clone,
    F: Fn(&LabeledVector<L>, &LabeledVector<L>) -> FieldElem,
{
    let norms: Vec<FieldElem> = ortho.iter().map(|o| scp(o, o)).collect();
    rest.iter()
        .map(|v| {
            let mut out = v.clone();
            for (o, n) in ortho.iter().zip(&norms) {
                let c = scp(o, v).div(n)?;
                out = out.add_scaled(o, &-c);
            }
            Ok(out)
        })
        .collect()
}

struct BasisRow<L> {
    pivot: L,
    /// Reduced vector with coefficient 1 at `pivot`.
    vec: LabeledVector<L>,
    /// `vec` as a combination of the accepted input vectors.
    combo: Vec<FieldElem>,
}

/// Incrementally built basis that accepts a vector only when it is linearly
/// independent of the ones accepted so far, and can express vectors of the
/// span in terms of the accepted ones.
pub struct IncrementalBasis<L> {
    rows: Vec<BasisRow<L>>,
}

impl<L: Ord + Clone> Default for IncrementalBasis<L> {
    fn default() -> Self {
        Self::new()
    }
}

impl<L: Ord + Clone> IncrementalBasis<L> {
    pub fn new() -> Self {
        IncrementalBasis { rows: Vec::new() }
    }

    /// Number of accepted vectors.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduces `v` against the rows; returns the residual and the row
    /// coefficients used.
    fn reduce(&self, v: &LabeledVector<L>) -> (LabeledVector<L>, Vec<FieldElem>) {
        let mut res = v.clone();
        let mut used = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let c = res.coeff(&row.pivot);
            if !c.is_zero() {
                res = res.add_scaled(&row.vec, &-&c);
            }
            used.push(c);
        }
        (res, used)
    }

    /// Combination of accepted vectors given row coefficients.
    fn combine(&self, used: &[FieldElem]) -> Vec<FieldElem> {
        let mut out = vec![FieldElem::zero(); self.rows.len()];
        for (row, c) in self.rows.iter().zip(used) {
            if c.is_zero() {
                continue;
            }
            for (k, t) in row.combo.iter().enumerate() {
                if !t.is_zero() {
                    out[k] = &out[k] + &(c * t);
                }
            }
        }
        out
    }

    /// True iff `v` lies in the span of the accepted vectors.
    pub fn contains(&self, v: &LabeledVector<L>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Accepts `v` if it is independent of the accepted vectors.
    pub fn insert(&mut self, v: &LabeledVector<L>) -> bool {
        let (res, used) = self.reduce(v);
        let Some((pivot, p)) = res.terms().first().cloned() else {
            return false;
        };
        let p_inv = p.inv().expect("nonzero pivot");
        let n = self.rows.len();
        let mut combo = self.combine(&used);
        for x in combo.iter_mut() {
            *x = &-&*x * &p_inv;
        }
        combo.push(p_inv.clone());
        debug_assert_eq!(combo.len(), n + 1);
        self.rows.push(BasisRow {
            pivot,
            vec: res.scale(&p_inv),
            combo,
        });
        true
    }

    /// Coefficients of `v` in terms of the accepted vectors, in insertion
    /// order, or `None` if `v` is outside their span.
    pub fn coordinates(&self, v: &LabeledVector<L>) -> Option<Vec<FieldElem>> {
        let (res, used) = self.reduce(v);
        if !res.is_zero() {
            return None;
        }
        Some(self.combine(&used))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    #[test]
    fn vector_merge_and_cancel() {
        let a = LabeledVector::from_terms([(1u32, f(1))]);
        let b = LabeledVector::from_terms([(1u32, f(-1))]);
        assert!(a.add(&b).is_zero());
        let c = LabeledVector::from_terms([(2u32, f(1)), (1, f(1)), (2, f(2))]);
        assert_eq!(c.terms(), &[(1, f(1)), (2, f(3))]);
    }

    #[test]
    fn solve_underdetermined() {
        let m = Matrix::from_ints(&[vec![1, 1]]).unwrap();
        assert_eq!(solve_system(&m, &[f(1)]).unwrap(), vec![f(1), f(0)]);
        let z = Matrix::from_ints(&[vec![0, 0]]).unwrap();
        assert_eq!(solve_system(&z, &[f(1)]), Err(Error::NoSolution));
    }

    #[test]
    fn incremental_coordinates() {
        let mut b = IncrementalBasis::new();
        let v1 = LabeledVector::from_terms([(1u32, f(1)), (2, f(1))]);
        let v2 = LabeledVector::from_terms([(1u32, f(1)), (2, f(-1))]);
        assert!(b.insert(&v1));
        assert!(b.insert(&v2));
        assert!(!b.insert(&v1.add(&v2)));
        let w = LabeledVector::from_terms([(1u32, f(3)), (2, f(1))]);
        assert_eq!(b.coordinates(&w).unwrap(), vec![f(2), f(1)]);
        assert!(b.coordinates(&LabeledVector::unit(3u32)).is_none());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = Matrix::from_ints(&[vec![1, 2, 3]]).unwrap();
        let ns = nullspace(&m).unwrap();
        assert_eq!(ns, vec![vec![f(-2), f(1), f(0)], vec![f(-3), f(0), f(1)]]);
    }
}
