//! Collapse, sampling, observables and separability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    adjoint, c64, mat_mul, validate, DenseMatrix, MatrixClass, StateVector, C64, ZERO,
};
use crate::error::{Error, Result};

/// Outcome probabilities over the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisDistribution {
    probabilities: Vec<f64>,
}

impl BasisDistribution {
    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidState(format!(
                "negative or non-finite weight {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            probabilities: weights.iter().map(|w| w / total).collect(),
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.probabilities[index]
    }

    /// Index whose half-open cumulative interval `[lo, hi)` contains `u`.
    /// A draw landing exactly on a boundary belongs to the higher index.
    pub fn sample_index(&self, u: f64) -> usize {
        let mut cumulative = 0.0;
        for (i, &p) in self.probabilities.iter().enumerate() {
            cumulative += p;
            if u < cumulative {
                return i;
            }
        }
        // Rounding left the total just under 1.
        self.probabilities
            .iter()
            .rposition(|&p| p > 0.0)
            .expect("distribution has positive mass")
    }
}

/// A stream of uniform reals in `[0, 1)`.
pub trait RandomSource {
    fn next_uniform(&mut self) -> f64;
}

/// ChaCha8-backed source; the same seed always yields the same stream.
#[derive(Debug, Clone)]
pub struct SeededSource {
    rng: ChaCha8Rng,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl RandomSource for SeededSource {
    fn next_uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }
}

/// `p_j = |c_j|^2 / S`.
pub fn basis_distribution(state: &StateVector) -> Result<BasisDistribution> {
    let weights: Vec<f64> = state.amplitudes().iter().map(|z| z.norm_sqr()).collect();
    BasisDistribution::from_weights(&weights)
}

/// Measures `state` in the computational basis, returning the outcome and
/// the basis ket it collapsed to.
pub fn collapse(state: &StateVector, rnd: &mut dyn RandomSource) -> Result<(usize, StateVector)> {
    let dist = basis_distribution(state)?;
    let index = dist.sample_index(rnd.next_uniform());
    Ok((index, StateVector::basis(state.dim(), index)))
}

/// Outcome counts from `shots` independent draws.
pub fn sample_counts(
    dist: &BasisDistribution,
    shots: usize,
    rnd: &mut dyn RandomSource,
) -> Vec<u64> {
    let mut counts = vec![0u64; dist.len()];
    for _ in 0..shots {
        counts[dist.sample_index(rnd.next_uniform())] += 1;
    }
    counts
}

/// A hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: DenseMatrix,
}

impl Observable {
    pub fn new(matrix: DenseMatrix, tol: f64) -> Result<Self> {
        validate(&matrix, MatrixClass::Hermitian, tol)?.into_result()?;
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, j: usize) -> StateVector {
        self.eigenvectors.column(j)
    }

    /// `sum_j λ_j v_j v_j†`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let scaled = DenseMatrix::from_fn(n, n, |i, j| v[(i, j)] * self.eigenvalues[j]);
        mat_mul(&scaled, &adjoint(v)).expect("square factors")
    }
}

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TARGET: f64 = 1e-12;

fn off_diagonal_mass(a: &[Vec<C64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, z) in row.iter().enumerate().take(n) {
            if i != j {
                s += z.norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a hermitian matrix.
///
/// Each rotation first rephases column `q` so that `a[p][q]` becomes real,
/// then applies the classical real Jacobi rotation that annihilates it.
pub fn spectral_decompose(obs: &Observable) -> EigenDecomposition {
    let m = &obs.matrix;
    let n = m.rows();
    let mut a: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)]).collect())
        .collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { c64(1.0, 0.0) } else { ZERO })
                .collect()
        })
        .collect();

    let scale = m
        .entries()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    let target = OFF_DIAGONAL_TARGET * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a) < target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                let r = apq.norm();
                if r < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let theta = (a[q][q].re - a[p][p].re) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = D R with D = diag(.., e^{-iφ} at q, ..).
                let g_pp = c64(c, 0.0);
                let g_pq = c64(s, 0.0);
                let g_qp = phase.conj() * -s;
                let g_qq = phase.conj() * c;

                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * g_pp + y * g_qp;
                    row[q] = x * g_pq + y * g_qq;
                }
                let (old_p, old_q) = (a[p].clone(), a[q].clone());
                for (k, (x, y)) in old_p.into_iter().zip(old_q).enumerate() {
                    a[p][k] = g_pp.conj() * x + g_qp.conj() * y;
                    a[q][k] = g_pq.conj() * x + g_qq.conj() * y;
                }
                a[p][q] = ZERO;
                a[q][p] = ZERO;
                a[p][p] = c64(a[p][p].re, 0.0);
                a[q][q] = c64(a[q][q].re, 0.0);
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * g_pp + y * g_qp;
                    row[q] = x * g_pq + y * g_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    let eigenvalues = order.iter().map(|&i| a[i][i].re).collect();
    let eigenvectors = DenseMatrix::from_fn(n, n, |i, j| v[i][order[j]]);
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Separability {
    /// The state equals `left ⊗ right` up to a global scalar. Both factors
    /// are normalized.
    Product {
        left: StateVector,
        right: StateVector,
    },
    /// Largest 2x2 minor modulus of the normalized amplitude matrix.
    Entangled { max_minor: f64 },
}

impl Separability {
    pub fn is_product(&self) -> bool {
        matches!(self, Separability::Product { .. })
    }
}

/// Rank-one test on the `dim_a x dim_b` reshaping of the normalized state.
pub fn is_product_state(
    state: &StateVector,
    dim_a: usize,
    dim_b: usize,
    tol: f64,
) -> Result<Separability> {
    if dim_a == 0 || dim_b == 0 || dim_a * dim_b != state.dim() {
        return Err(Error::DimensionMismatch {
            op: "is_product_state",
            left: format!("{dim_a}*{dim_b}"),
            right: state.dim().to_string(),
        });
    }
    let unit = state.normalize()?;
    let c = |i: usize, j: usize| unit[i * dim_b + j];

    let mut max_minor: f64 = 0.0;
    for i in 0..dim_a {
        for k in i + 1..dim_a {
            for j in 0..dim_b {
                for l in j + 1..dim_b {
                    let minor = c(i, j) * c(k, l) - c(i, l) * c(k, j);
                    max_minor = max_minor.max(minor.norm());
                }
            }
        }
    }
    if max_minor > tol {
        return Ok(Separability::Entangled { max_minor });
    }

    let (mut pi, mut pj, mut best) = (0, 0, -1.0);
    for i in 0..dim_a {
        for j in 0..dim_b {
            let m = c(i, j).norm();
            if m > best {
                (pi, pj, best) = (i, j, m);
            }
        }
    }
    let pivot = c(pi, pj);
    let left = StateVector::new((0..dim_a).map(|i| c(i, pj)).collect())?;
    let right = StateVector::new((0..dim_b).map(|j| c(pi, j) / pivot).collect())?;
    Ok(Separability::Product {
        left: left.normalize()?,
        right: right.normalize()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c64, DEFAULT_TOL};

    struct Fixed(Vec<f64>);

    impl RandomSource for Fixed {
        fn next_uniform(&mut self) -> f64 {
            self.0.remove(0)
        }
    }

    #[test]
    fn unnormalized_qubit_distribution() {
        let v = StateVector::new(vec![c64(5., 3.), c64(0., 6.)]).unwrap();
        let d = basis_distribution(&v).unwrap();
        assert!((d.get(0) - 34. / 70.).abs() < 1e-12);
        assert!((d.get(1) - 36. / 70.).abs() < 1e-12);
    }

    #[test]
    fn basis_ket_is_degenerate() {
        let d = basis_distribution(&StateVector::basis(4, 2)).unwrap();
        assert_eq!(d.probabilities(), &[0., 0., 1., 0.]);
        assert_eq!(
            basis_distribution(&StateVector::zeros(2)),
            Err(Error::ZeroState)
        );
    }

    #[test]
    fn two_qubit_ket_distribution() {
        let r = 1. / 3f64.sqrt();
        let v = StateVector::from_real(&[r, 0., -r, r]).unwrap();
        let d = basis_distribution(&v).unwrap();
        for (p, e) in d
            .probabilities()
            .iter()
            .zip([1. / 3., 0., 1. / 3., 1. / 3.])
        {
            assert!((p - e).abs() < 1e-12);
        }
    }

    #[test]
    fn boundaries_go_to_the_higher_index() {
        let d = BasisDistribution::from_weights(&[0.25, 0.0, 0.75]).unwrap();
        assert_eq!(d.sample_index(0.0), 0);
        assert_eq!(d.sample_index(0.2499), 0);
        assert_eq!(d.sample_index(0.25), 2);
        assert_eq!(d.sample_index(0.9999999), 2);
        // Mass fell short of 1 by rounding: the last positive index wins.
        assert_eq!(d.sample_index(1.0), 2);
    }

    #[test]
    fn collapse_of_pure_state() {
        let one = StateVector::basis(2, 1);
        let mut rnd = Fixed(vec![0.0, 0.5, 0.999]);
        for _ in 0..3 {
            let (i, post) = collapse(&one, &mut rnd).unwrap();
            assert_eq!(i, 1);
            assert_eq!(post, one);
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_real(&[r, r]).unwrap();
        let run = |seed| {
            let mut src = SeededSource::new(seed);
            (0..64)
                .map(|_| collapse(&plus, &mut src).unwrap().0)
                .collect::<Vec<_>>()
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7), run(8));
    }

    #[test]
    fn eigen_identity_and_diagonal() {
        let id = Observable::new(DenseMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert_eq!(spectral_decompose(&id).eigenvalues, vec![1., 1., 1.]);

        let d = DenseMatrix::from_real(3, 3, &[3., 0., 0., 0., 1., 0., 0., 0., 2.]).unwrap();
        let e = spectral_decompose(&Observable::new(d, DEFAULT_TOL).unwrap());
        assert_eq!(e.eigenvalues, vec![1., 2., 3.]);
        assert_eq!(e.eigenvector(0), StateVector::basis(3, 1));
        assert_eq!(e.eigenvector(1), StateVector::basis(3, 2));
        assert_eq!(e.eigenvector(2), StateVector::basis(3, 0));
    }

    #[test]
    fn eigen_pauli_x() {
        // det([[−λ, 1], [1, −λ]]) = λ² − 1, so λ = ±1.
        let x = DenseMatrix::from_real(2, 2, &[0., 1., 1., 0.]).unwrap();
        let e = spectral_decompose(&Observable::new(x.clone(), DEFAULT_TOL).unwrap());
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-12);
        assert!(e.reconstruct().max_abs_diff(&x).unwrap() < 1e-12);
    }

    #[test]
    fn eigen_complex_hermitian() {
        let h = DenseMatrix::new(
            3,
            3,
            vec![
                c64(5., 0.),
                c64(4., 5.),
                c64(6., -16.),
                c64(4., -5.),
                c64(13., 0.),
                c64(7., 0.),
                c64(6., 16.),
                c64(7., 0.),
                c64(-2.1, 0.),
            ],
        )
        .unwrap();
        let e = spectral_decompose(&Observable::new(h.clone(), DEFAULT_TOL).unwrap());
        for (j, &lambda) in e.eigenvalues.iter().enumerate() {
            let v = e.eigenvector(j);
            let av = crate::algebra::mat_vec(&h, &v).unwrap();
            assert!(av.max_abs_diff(&v.scale(c64(lambda, 0.))).unwrap() < 1e-8);
        }
        let trace: f64 = e.eigenvalues.iter().sum();
        assert!((trace - (5. + 13. - 2.1)).abs() < 1e-9);
        assert!(e.reconstruct().max_abs_diff(&h).unwrap() < 1e-9);
    }

    #[test]
    fn non_hermitian_observable_rejected() {
        let m = DenseMatrix::from_real(2, 2, &[0., 1., 0., 0.]).unwrap();
        assert!(matches!(
            Observable::new(m, DEFAULT_TOL),
            Err(Error::Validation {
                class: "hermitian",
                ..
            })
        ));
    }

    #[test]
    fn product_and_entangled_states() {
        let zo = StateVector::basis(2, 0).tensor(&StateVector::basis(2, 1));
        match is_product_state(&zo, 2, 2, DEFAULT_TOL).unwrap() {
            Separability::Product { left, right } => {
                assert_eq!(left, StateVector::basis(2, 0));
                assert_eq!(right, StateVector::basis(2, 1));
            }
            other => panic!("expected product, got {other:?}"),
        }

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_real(&[r, 0., 0., r]).unwrap();
        match is_product_state(&bell, 2, 2, DEFAULT_TOL).unwrap() {
            Separability::Entangled { max_minor } => assert!((max_minor - 0.5).abs() < 1e-12),
            other => panic!("expected entangled, got {other:?}"),
        }

        let t = 1. / 3f64.sqrt();
        let v = StateVector::from_real(&[t, 0., -t, t]).unwrap();
        match is_product_state(&v, 2, 2, DEFAULT_TOL).unwrap() {
            Separability::Entangled { max_minor } => {
                assert!((max_minor - 1. / 3.).abs() < 1e-12)
            }
            other => panic!("expected entangled, got {other:?}"),
        }

        assert!(is_product_state(&bell, 3, 2, DEFAULT_TOL).is_err());
    }
}
