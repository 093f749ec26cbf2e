#![allow(dead_code)]

use marbles::algebra::{c64, DenseMatrix, StateVector, C64};
use proptest::prelude::*;

pub fn complex() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c64(re, im))
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(complex(), rows * cols)
        .prop_map(move |e| DenseMatrix::new(rows, cols, e).unwrap())
}

pub fn square(max: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max).prop_flat_map(|n| matrix(n, n))
}

pub fn vector(dim: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec(complex(), dim).prop_map(|v| StateVector::new(v).unwrap())
}

pub fn nonzero_vector(dim: usize) -> impl Strategy<Value = StateVector> {
    vector(dim).prop_filter("non-zero", |v| v.squared_norm() > 1e-6)
}

/// Orthonormalizes the columns of a random matrix (modified Gram-Schmidt).
pub fn gram_schmidt(m: &DenseMatrix) -> Option<DenseMatrix> {
    let n = m.rows();
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| m[(i, j)]).collect())
        .collect();
    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let cur = &mut rest[0];
        for q in done.iter() {
            let dot: C64 = q.iter().zip(cur.iter()).map(|(a, b)| a.conj() * b).sum();
            for (c, qi) in cur.iter_mut().zip(q) {
                *c -= dot * qi;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            return None;
        }
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    Some(DenseMatrix::from_fn(n, n, |i, j| cols[j][i]))
}

pub fn unitary(n: usize) -> impl Strategy<Value = DenseMatrix> {
    matrix(n, n).prop_filter_map("degenerate", |m| gram_schmidt(&m))
}

pub fn hermitian(n: usize) -> impl Strategy<Value = DenseMatrix> {
    matrix(n, n)
        .prop_map(move |m| DenseMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 2.0))
}

/// Convex combination of permutation matrices (always doubly stochastic).
pub fn doubly_stochastic(n: usize) -> impl Strategy<Value = DenseMatrix> {
    let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
    prop::collection::vec((perm, 0.01f64..1.0), 1..4).prop_map(move |terms| {
        let total: f64 = terms.iter().map(|(_, w)| w).sum();
        let mut e = vec![c64(0., 0.); n * n];
        for (p, w) in &terms {
            for (col, &row) in p.iter().enumerate() {
                e[row * n + col] += c64(w / total, 0.);
            }
        }
        DenseMatrix::new(n, n, e).unwrap()
    })
}

/// Column-source function graph: vertex `j` moves to `targets[j]`.
pub fn function_matrix(targets: &[usize]) -> DenseMatrix {
    let n = targets.len();
    DenseMatrix::from_fn(n, n, |i, j| c64(if targets[j] == i { 1. } else { 0. }, 0.))
}

pub fn naive_mul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut s = c64(0., 0.);
        for k in 0..a.cols() {
            s += a[(i, k)] * b[(k, j)];
        }
        s
    })
}
