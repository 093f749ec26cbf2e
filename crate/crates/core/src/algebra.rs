//! Dense complex linear algebra.
//!
//! Matrices follow the column-is-source convention: `M[i, j]` is the weight
//! of the edge from vertex `j` to vertex `i`, so `M * X` is one forward
//! time click. Kronecker products treat the first factor as the outer block
//! structure; index `t` of an `m * n` dimensional space carries the label
//! `(t / n, t % n)`.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{shape, Error, Result};

pub type C64 = Complex64;

/// Absolute tolerance used by every predicate unless the caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_finite(values: &[C64]) -> Result<()> {
    match values
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Rectangular complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidShape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        check_finite(&entries)?;
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| c64(x, 0.0)).collect())
    }

    /// Builds a matrix entry by entry. Panics if `rows` or `cols` is zero or
    /// the closure produces a non-finite value.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries).expect("from_fn: invalid matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Option<C64> {
        (row < self.rows && col < self.cols).then(|| self.entries[row * self.cols + col])
    }

    pub fn column(&self, col: usize) -> StateVector {
        assert!(col < self.cols, "column {col} out of range");
        StateVector {
            amplitudes: (0..self.rows).map(|i| self[(i, col)]).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`, or `None` if the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.shape() != other.shape() {
            return None;
        }
        Some(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;

    fn index(&self, (row, col): (usize, usize)) -> &C64 {
        assert!(row < self.rows && col < self.cols, "index out of range");
        &self.entries[row * self.cols + col]
    }
}

/// Column of complex amplitudes. Depending on the regime it holds marble
/// counts, probabilities or quantum amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Empty);
        }
        check_finite(&amplitudes)?;
        Ok(Self { amplitudes })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| c64(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "zero-dimensional state");
        Self {
            amplitudes: vec![ZERO; dim],
        }
    }

    /// The pure state with a single 1 at `index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut v = Self::zeros(dim);
        v.amplitudes[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// `S`, the sum of the squared moduli of the amplitudes.
    pub fn squared_norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        norm(self)
    }

    pub fn normalize(&self) -> Result<Self> {
        normalize(self)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|&z| z * factor).collect(),
        }
    }

    /// `self ⊗ other`; entry `i * other.dim() + j` is `self[i] * other[j]`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|&b| a * b));
        }
        Self { amplitudes }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        (self.dim() == other.dim()).then(|| {
            self.amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        })
    }

    /// The vector as a `dim x 1` matrix.
    pub fn to_column(&self) -> DenseMatrix {
        DenseMatrix {
            rows: self.dim(),
            cols: 1,
            entries: self.amplitudes.clone(),
        }
    }
}

impl Index<usize> for StateVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.amplitudes[i]
    }
}

pub fn mat_vec(m: &DenseMatrix, x: &StateVector) -> Result<StateVector> {
    if m.cols != x.dim() {
        return Err(Error::DimensionMismatch {
            op: "mat_vec",
            left: shape(m.rows, m.cols),
            right: shape(x.dim(), 1),
        });
    }
    let amplitudes = m
        .entries
        .chunks_exact(m.cols)
        .map(|row| row.iter().zip(&x.amplitudes).map(|(a, b)| a * b).sum())
        .collect();
    Ok(StateVector { amplitudes })
}

pub fn mat_mul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "mat_mul",
            left: shape(a.rows, a.cols),
            right: shape(b.rows, b.cols),
        });
    }
    let mut entries = vec![ZERO; a.rows * b.cols];
    for i in 0..a.rows {
        let out = &mut entries[i * b.cols..(i + 1) * b.cols];
        for k in 0..a.cols {
            let aik = a.entries[i * a.cols + k];
            if aik == ZERO {
                continue;
            }
            let brow = &b.entries[k * b.cols..(k + 1) * b.cols];
            for (o, &bkj) in out.iter_mut().zip(brow) {
                *o += aik * bkj;
            }
        }
    }
    Ok(DenseMatrix {
        rows: a.rows,
        cols: b.cols,
        entries,
    })
}

fn boolean_entries(m: &DenseMatrix) -> Result<Vec<bool>> {
    m.entries
        .iter()
        .enumerate()
        .map(|(t, &z)| {
            if z == ONE {
                Ok(true)
            } else if z == ZERO {
                Ok(false)
            } else {
                Err(Error::NonBoolean {
                    row: t / m.cols,
                    col: t % m.cols,
                    value: z.to_string(),
                })
            }
        })
        .collect()
}

/// Boolean product: `C[i, j] = OR_k (A[i, k] AND B[k, j])`.
pub fn bool_mat_mul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "bool_mat_mul",
            left: shape(a.rows, a.cols),
            right: shape(b.rows, b.cols),
        });
    }
    let ab = boolean_entries(a)?;
    let bb = boolean_entries(b)?;
    Ok(DenseMatrix::from_fn(a.rows, b.cols, |i, j| {
        let hit = (0..a.cols).any(|k| ab[i * a.cols + k] && bb[k * b.cols + j]);
        if hit {
            ONE
        } else {
            ZERO
        }
    }))
}

/// Kronecker product with `a` as the outer factor.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (br, bc) = b.shape();
    DenseMatrix::from_fn(a.rows * br, a.cols * bc, |j, k| {
        a[(j / br, k / bc)] * b[(j % br, k % bc)]
    })
}

/// Conjugate transpose.
pub fn adjoint(m: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(m.cols, m.rows, |j, k| m[(k, j)].conj())
}

pub fn modulus_squared(m: &DenseMatrix) -> DenseMatrix {
    DenseMatrix {
        rows: m.rows,
        cols: m.cols,
        entries: m.entries.iter().map(|z| c64(z.norm_sqr(), 0.0)).collect(),
    }
}

pub fn norm(v: &StateVector) -> f64 {
    v.squared_norm().sqrt()
}

pub fn normalize(v: &StateVector) -> Result<StateVector> {
    let n = norm(v);
    if n == 0.0 {
        return Err(Error::ZeroState);
    }
    Ok(v.scale(c64(1.0 / n, 0.0)))
}

/// Integer matrix-vector product for marble counts. Every matrix entry must
/// be a real non-negative integer.
pub fn mat_vec_counts(m: &DenseMatrix, counts: &[u64]) -> Result<Vec<u64>> {
    if m.cols != counts.len() {
        return Err(Error::DimensionMismatch {
            op: "mat_vec_counts",
            left: shape(m.rows, m.cols),
            right: shape(counts.len(), 1),
        });
    }
    let mut weights = Vec::with_capacity(m.entries.len());
    for (t, z) in m.entries.iter().enumerate() {
        if z.im != 0.0 || z.re < 0.0 || z.re.fract() != 0.0 || z.re > u32::MAX as f64 {
            return Err(Error::NonIntegerWeight {
                row: t / m.cols,
                col: t % m.cols,
                value: z.to_string(),
            });
        }
        weights.push(z.re as u64);
    }
    weights
        .chunks_exact(m.cols)
        .map(|row| {
            row.iter().zip(counts).try_fold(0u64, |acc, (&w, &x)| {
                w.checked_mul(x)
                    .and_then(|p| acc.checked_add(p))
                    .ok_or(Error::CountOverflow)
            })
        })
        .collect()
}

/// The structural predicates a square matrix can be checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixClass {
    /// Boolean with exactly one 1 per column.
    Deterministic,
    /// Real, entries in `[0, 1]`, every row and column summing to 1.
    Stochastic,
    /// Unitary: `M†M = I`.
    Quantum,
    Hermitian,
}

impl MatrixClass {
    pub fn name(self) -> &'static str {
        match self {
            MatrixClass::Deterministic => "deterministic",
            MatrixClass::Stochastic => "stochastic",
            MatrixClass::Quantum => "quantum",
            MatrixClass::Hermitian => "hermitian",
        }
    }
}

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonBooleanEntry {
        row: usize,
        col: usize,
        value: C64,
    },
    ColumnOnes {
        col: usize,
        count: usize,
    },
    NonRealEntry {
        row: usize,
        col: usize,
        value: C64,
    },
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: f64,
    },
    RowSum {
        row: usize,
        sum: f64,
    },
    ColumnSum {
        col: usize,
        sum: f64,
    },
    /// Entry of `M†M - I` exceeding the tolerance.
    NotUnitary {
        row: usize,
        col: usize,
        deviation: f64,
    },
    /// Entry of `M - M†` exceeding the tolerance.
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonBooleanEntry { row, col, value } => {
                write!(f, "entry [{row},{col}] = {value} is not 0 or 1")
            }
            Violation::ColumnOnes { col, count } => {
                write!(f, "column {col} has {count} ones, expected exactly 1")
            }
            Violation::NonRealEntry { row, col, value } => {
                write!(f, "entry [{row},{col}] = {value} is not real")
            }
            Violation::EntryOutOfRange { row, col, value } => {
                write!(f, "entry [{row},{col}] = {value} is outside [0, 1]")
            }
            Violation::RowSum { row, sum } => write!(f, "row {row} sums to {sum}, expected 1"),
            Violation::ColumnSum { col, sum } => {
                write!(f, "column {col} sums to {sum}, expected 1")
            }
            Violation::NotUnitary {
                row,
                col,
                deviation,
            } => write!(
                f,
                "(M†M - I)[{row},{col}] has modulus {deviation}, matrix is not unitary"
            ),
            Violation::NotHermitian {
                row,
                col,
                deviation,
            } => write!(
                f,
                "M[{row},{col}] differs from conj(M[{col},{row}]) by {deviation}"
            ),
        }
    }
}

/// Outcome of [`validate`]; an empty violation list means the matrix passes.
#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub class: MatrixClass,
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::Validation {
                class: self.class.name(),
                count: self.violations.len(),
            })
        }
    }
}

pub fn validate(m: &DenseMatrix, class: MatrixClass, tol: f64) -> Result<Validation> {
    let n = m.require_square()?;
    let mut violations = Vec::new();
    match class {
        MatrixClass::Deterministic => {
            let mut ones = vec![0usize; n];
            for i in 0..n {
                for j in 0..n {
                    let z = m[(i, j)];
                    if (z - ONE).norm() <= tol {
                        ones[j] += 1;
                    } else if z.norm() > tol {
                        violations.push(Violation::NonBooleanEntry {
                            row: i,
                            col: j,
                            value: z,
                        });
                    }
                }
            }
            for (col, &count) in ones.iter().enumerate() {
                if count != 1 {
                    violations.push(Violation::ColumnOnes { col, count });
                }
            }
        }
        MatrixClass::Stochastic => {
            for i in 0..n {
                for j in 0..n {
                    let z = m[(i, j)];
                    if z.im.abs() > tol {
                        violations.push(Violation::NonRealEntry {
                            row: i,
                            col: j,
                            value: z,
                        });
                    } else if z.re < -tol || z.re > 1.0 + tol {
                        violations.push(Violation::EntryOutOfRange {
                            row: i,
                            col: j,
                            value: z.re,
                        });
                    }
                }
            }
            for row in 0..n {
                let sum: f64 = (0..n).map(|j| m[(row, j)].re).sum();
                if (sum - 1.0).abs() > tol {
                    violations.push(Violation::RowSum { row, sum });
                }
            }
            for col in 0..n {
                let sum: f64 = (0..n).map(|i| m[(i, col)].re).sum();
                if (sum - 1.0).abs() > tol {
                    violations.push(Violation::ColumnSum { col, sum });
                }
            }
        }
        MatrixClass::Quantum => {
            let gram = mat_mul(&adjoint(m), m)?;
            for i in 0..n {
                for j in 0..n {
                    let expected = if i == j { ONE } else { ZERO };
                    let deviation = (gram[(i, j)] - expected).norm();
                    if deviation > tol {
                        violations.push(Violation::NotUnitary {
                            row: i,
                            col: j,
                            deviation,
                        });
                    }
                }
            }
        }
        MatrixClass::Hermitian => {
            for i in 0..n {
                for j in i..n {
                    let deviation = (m[(i, j)] - m[(j, i)].conj()).norm();
                    if deviation > tol {
                        violations.push(Violation::NotHermitian {
                            row: i,
                            col: j,
                            deviation,
                        });
                    }
                }
            }
        }
    }
    Ok(Validation { class, violations })
}
