//! Exact linear algebra over an abstract field.
//!
//! Everything here is deterministic: pivots are chosen as the first nonzero
//! entry in column order, never by magnitude. Matrices are dense row-major
//! `Vec<Vec<E>>`, which is the right shape for the desk-scale dimensions this
//! crate works at (a few hundred at most).

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Field arithmetic supplied by a context object.
///
/// Elements need not know their field; the context does. This lets `u64`
/// residue indices (finite fields) and `BigRational` share one elimination
/// routine.
pub trait FieldOps {
    type Elem: Clone + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; panics on zero (callers guard).
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }
}

/// The rational field ℚ with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl FieldOps for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
}

pub type Mat<E> = Vec<Vec<E>>;

pub fn zeros<F: FieldOps>(f: &F, rows: usize, cols: usize) -> Mat<F::Elem> {
    vec![vec![f.zero(); cols]; rows]
}

pub fn identity<F: FieldOps>(f: &F, n: usize) -> Mat<F::Elem> {
    let mut m = zeros(f, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    m
}

pub fn mat_add<F: FieldOps>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            assert_eq!(ra.len(), rb.len());
            ra.iter().zip(rb).map(|(x, y)| f.add(x, y)).collect()
        })
        .collect()
}

pub fn mat_scale<F: FieldOps>(f: &F, c: &F::Elem, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    a.iter()
        .map(|r| r.iter().map(|x| f.mul(c, x)).collect())
        .collect()
}

pub fn mat_mul<F: FieldOps>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    let (n, k) = (a.len(), b.len());
    assert!(a.iter().all(|r| r.len() == k), "inner dimension mismatch");
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(f, n, m);
    for i in 0..n {
        for (l, brow) in b.iter().enumerate() {
            if f.is_zero(&a[i][l]) {
                continue;
            }
            for j in 0..m {
                let t = f.mul(&a[i][l], &brow[j]);
                out[i][j] = f.add(&out[i][j], &t);
            }
        }
    }
    out
}

pub fn mat_vec<F: FieldOps>(f: &F, a: &Mat<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    a.iter()
        .map(|row| {
            let mut acc = f.zero();
            for (x, y) in row.iter().zip(v) {
                acc = f.add(&acc, &f.mul(x, y));
            }
            acc
        })
        .collect()
}

pub fn mat_eq<E: PartialEq>(a: &Mat<E>, b: &Mat<E>) -> bool {
    a == b
}

/// Result of row reduction: the echelon matrix plus pivot column indices.
pub struct Echelon<E> {
    pub mat: Mat<E>,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form. Pivot = first nonzero entry scanning columns
/// left to right; pivots are normalized to 1 and cleared above and below.
pub fn rref<F: FieldOps>(f: &F, a: &Mat<F::Elem>) -> Echelon<F::Elem> {
    let mut m = a.clone();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(&m[r][c].clone());
        for j in c..cols {
            m[r][j] = f.mul(&m[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { mat: m, pivots }
}

pub fn rank<F: FieldOps>(f: &F, a: &Mat<F::Elem>) -> usize {
    rref(f, a).pivots.len()
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse<F: FieldOps>(f: &F, a: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    let n = a.len();
    let mut aug: Mat<F::Elem> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "inverse of non-square matrix");
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { f.one() } else { f.zero() });
            }
            r
        })
        .collect();
    let ech = rref(f, &aug);
    if ech.pivots.len() != n || ech.pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    aug = ech.mat;
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Basis of the null space { v : A v = 0 }, one vector per free column,
/// in ascending free-column order.
pub fn kernel_basis<F: FieldOps>(f: &F, a: &Mat<F::Elem>) -> Vec<Vec<F::Elem>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let ech = rref(f, a);
    let pivot_set: Vec<usize> = ech.pivots.clone();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (r, &p) in pivot_set.iter().enumerate() {
            v[p] = f.neg(&ech.mat[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// Row-space basis (the nonzero rows of the RREF). Used as a canonical
/// form for subspace comparison: two spans are equal iff these agree.
pub fn row_space_basis<F: FieldOps>(f: &F, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    let ech = rref(f, a);
    ech.mat.into_iter().take(ech.pivots.len()).collect()
}

/// Column-space basis of `a`: the columns of `a` at the pivot positions of
/// its RREF, in order.
pub fn column_space_basis<F: FieldOps>(f: &F, a: &Mat<F::Elem>) -> Vec<Vec<F::Elem>> {
    let ech = rref(f, a);
    ech.pivots
        .iter()
        .map(|&c| a.iter().map(|row| row[c].clone()).collect())
        .collect()
}

pub fn transpose<E: Clone>(a: &Mat<E>) -> Mat<E> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rref_rank_and_inverse() {
        let f = Rationals;
        let a = vec![
            vec![q(1, 1), q(2, 1)],
            vec![q(3, 1), q(4, 1)],
        ];
        assert_eq!(rank(&f, &a), 2);
        let inv = inverse(&f, &a).unwrap();
        assert_eq!(mat_mul(&f, &a, &inv), identity(&f, 2));

        let sing = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert_eq!(rank(&f, &sing), 1);
        assert!(inverse(&f, &sing).is_none());
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = Rationals;
        let a = vec![vec![q(1, 1), q(2, 1), q(3, 1)]];
        let ker = kernel_basis(&f, &a);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(mat_vec(&f, &a, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn row_space_canonical_form_detects_equal_spans() {
        let f = Rationals;
        let a = vec![vec![q(1, 1), q(1, 1)], vec![q(0, 1), q(1, 1)]];
        let b = vec![vec![q(2, 1), q(3, 1)], vec![q(1, 1), q(2, 1)]];
        assert_eq!(row_space_basis(&f, &a), row_space_basis(&f, &b));
    }
}
