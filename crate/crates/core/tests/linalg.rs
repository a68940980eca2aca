use liecg::linalg::{
    gauss, invert_matrix, linearly_dependent, nullspace, solve, solve_system, IncrementalBasis,
    LabeledVector, Matrix,
};
use liecg::{Error, FieldElem};
use proptest::prelude::*;

fn small() -> impl Strategy<Value = FieldElem> {
    (-5i64..=5).prop_map(FieldElem::from_int)
}

fn square(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(small(), n), n)
        .prop_map(|rows| Matrix::from_rows(rows).unwrap())
}

/// Leibniz expansion, only for tiny matrices.
fn det(m: &Matrix) -> FieldElem {
    fn perms(n: usize) -> Vec<(Vec<usize>, i64)> {
        if n == 0 {
            return vec![(vec![], 1)];
        }
        let mut out = Vec::new();
        for (p, s) in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                // inserting at `pos` creates n-1-pos inversions
                let sign = if (n - 1 - pos).is_multiple_of(2) { s } else { -s };
                out.push((q, sign));
            }
        }
        out
    }
    let n = m.rows();
    let mut acc = FieldElem::zero();
    for (p, s) in perms(n) {
        let mut t = FieldElem::from_int(s);
        for (i, &j) in p.iter().enumerate() {
            t = &t * &m[(i, j)];
        }
        acc = &acc + &t;
    }
    acc
}

fn replace_col(m: &Matrix, j: usize, b: &[FieldElem]) -> Matrix {
    let mut rows = m.to_rows();
    for (i, r) in rows.iter_mut().enumerate() {
        r[j] = b[i].clone();
    }
    Matrix::from_rows(rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn solve_agrees_with_cramer(
        m in (1usize..=4).prop_flat_map(square),
        seed in prop::collection::vec(small(), 4),
    ) {
        let n = m.rows();
        let b = &seed[..n];
        let d = det(&m);
        match solve_system(&m, b) {
            Ok(x) if !d.is_zero() => {
                for (j, xj) in x.iter().enumerate() {
                    let expect = det(&replace_col(&m, j, b)).div(&d).unwrap();
                    prop_assert_eq!(xj, &expect);
                }
            }
            // singular but consistent: some particular solution
            Ok(x) => {
                let mx = m.mul(&Matrix::column(x)).unwrap().col(0);
                prop_assert_eq!(mx.as_slice(), b);
            }
            Err(Error::NoSolution) => prop_assert!(d.is_zero()),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn inverse_is_two_sided(m in (1usize..=4).prop_flat_map(square)) {
        let d = det(&m);
        match invert_matrix(&m) {
            Ok(inv) => {
                let id = Matrix::identity(m.rows());
                prop_assert!(m.mul(&inv).unwrap() == id);
                prop_assert!(inv.mul(&m).unwrap() == id);
            }
            Err(Error::SingularMatrix) => prop_assert!(d.is_zero()),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn nullspace_vectors_are_annihilated(
        rows in prop::collection::vec(prop::collection::vec(small(), 4), 1..4)
    ) {
        let m = Matrix::from_rows(rows).unwrap();
        let ns = nullspace(&m).unwrap();
        // rank-nullity: at least cols - rows vectors, all independent
        prop_assert!(ns.len() >= m.cols() - m.rows());
        for v in &ns {
            let prod = m.mul(&Matrix::column(v.clone())).unwrap();
            prop_assert!(prod.col(0).iter().all(FieldElem::is_zero));
        }
        let as_vecs: Vec<LabeledVector<usize>> = ns
            .iter()
            .map(|v| LabeledVector::from_terms(v.iter().cloned().enumerate()))
            .collect();
        prop_assert!(!linearly_dependent(&as_vecs));
    }

    #[test]
    fn incremental_basis_coordinates_reconstruct(
        vs in prop::collection::vec(prop::collection::vec(small(), 3), 1..5)
    ) {
        let vecs: Vec<LabeledVector<u8>> = vs
            .iter()
            .map(|v| LabeledVector::from_terms(v.iter().cloned().enumerate().map(|(i, c)| (i as u8, c))))
            .collect();
        let mut basis = IncrementalBasis::new();
        let mut kept = Vec::new();
        for v in &vecs {
            if basis.insert(v) {
                kept.push(v.clone());
            }
        }
        prop_assert!(!linearly_dependent(&kept));
        for v in &vecs {
            let c = basis.coordinates(v).expect("in span");
            let mut rebuilt = LabeledVector::zero();
            for (k, x) in kept.iter().zip(&c) {
                rebuilt = rebuilt.add_scaled(k, x);
            }
            prop_assert_eq!(&rebuilt, v);
        }
    }
}

#[test]
fn gauss_then_solve_inverts() {
    let m = Matrix::from_ints(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
    let (e, r) = gauss(&m, &Matrix::identity(3)).unwrap();
    for i in 0..3 {
        for j in 0..i {
            assert!(e[(i, j)].is_zero());
        }
    }
    let x = solve(&e, &r).unwrap();
    let four = FieldElem::from_int(4);
    let expect = Matrix::from_rows(
        [[3, 2, 1], [2, 4, 2], [1, 2, 3]]
            .iter()
            .map(|r| r.iter().map(|&v| FieldElem::from_int(v).div(&four).unwrap()).collect())
            .collect(),
    )
    .unwrap();
    assert!(x == expect);
}

#[test]
fn inconsistent_system_has_no_solution() {
    let m = Matrix::from_ints(&[vec![1, 1], vec![2, 2]]).unwrap();
    let b = [FieldElem::one(), FieldElem::one()];
    assert!(matches!(solve_system(&m, &b), Err(Error::NoSolution)));
}

#[test]
fn labeled_vectors_merge_and_drop_zeros() {
    let a = LabeledVector::from_terms([(2u32, FieldElem::one()), (1, FieldElem::from_int(3))]);
    let b = LabeledVector::from_terms([(2u32, FieldElem::from_int(-1))]);
    let s = a.add(&b);
    assert_eq!(s.len(), 1);
    assert_eq!(s.coeff(&1), FieldElem::from_int(3));
    assert_eq!(s.coeff(&2), FieldElem::zero());
    assert!(a.sub(&a).is_zero());
}
