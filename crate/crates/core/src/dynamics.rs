//! Systems that move a state forward one time click at a time.
//!
//! A [`RegimeSystem`] pairs a square matrix with the regime it is meant to
//! obey. In [`Mode::Strict`] the matrix must pass the regime's predicate at
//! construction; [`Mode::Unchecked`] skips that check so deliberately
//! non-conforming toy matrices (an incomplete double-slit graph, say) can
//! still be evolved.

use std::fmt;

use crate::algebra::{
    adjoint, bool_mat_mul, c64, kron, mat_mul, mat_vec, mat_vec_counts, normalize, validate,
    DenseMatrix, MatrixClass, StateVector, DEFAULT_TOL,
};
use crate::error::{shape, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Deterministic,
    Stochastic,
    Quantum,
}

impl Regime {
    pub fn name(self) -> &'static str {
        self.class().name()
    }

    pub fn class(self) -> MatrixClass {
        match self {
            Regime::Deterministic => MatrixClass::Deterministic,
            Regime::Stochastic => MatrixClass::Stochastic,
            Regime::Quantum => MatrixClass::Quantum,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Strict,
    Unchecked,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeSystem {
    regime: Regime,
    matrix: DenseMatrix,
    mode: Mode,
    tol: f64,
}

impl RegimeSystem {
    /// Validated system at the default tolerance.
    pub fn strict(regime: Regime, matrix: DenseMatrix) -> Result<Self> {
        Self::strict_with_tol(regime, matrix, DEFAULT_TOL)
    }

    pub fn strict_with_tol(regime: Regime, matrix: DenseMatrix, tol: f64) -> Result<Self> {
        validate(&matrix, regime.class(), tol)?.into_result()?;
        Ok(Self {
            regime,
            matrix,
            mode: Mode::Strict,
            tol,
        })
    }

    pub fn unchecked(regime: Regime, matrix: DenseMatrix) -> Result<Self> {
        matrix.require_square()?;
        Ok(Self {
            regime,
            matrix,
            mode: Mode::Unchecked,
            tol: DEFAULT_TOL,
        })
    }

    pub fn with_mode(regime: Regime, matrix: DenseMatrix, mode: Mode, tol: f64) -> Result<Self> {
        match mode {
            Mode::Strict => Self::strict_with_tol(regime, matrix, tol),
            Mode::Unchecked => Ok(Self {
                tol,
                ..Self::unchecked(regime, matrix)?
            }),
        }
    }

    pub fn identity(regime: Regime, n: usize) -> Self {
        Self::strict(regime, DenseMatrix::identity(n)).expect("identity passes every regime")
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// The time-reversed system. For a strict quantum system this undoes
    /// [`step`]; strict systems of the other regimes are re-validated.
    pub fn adjoint(&self) -> Result<Self> {
        Self::with_mode(self.regime, adjoint(&self.matrix), self.mode, self.tol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarbleState {
    counts: Vec<u64>,
}

impl MarbleState {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityState {
    probabilities: Vec<f64>,
}

impl ProbabilityState {
    /// Requires every entry in `[0, 1]` and a total of 1, both within `tol`.
    pub fn new(probabilities: Vec<f64>, tol: f64) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((i, p)) = probabilities
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < -tol || **p > 1.0 + tol)
        {
            return Err(Error::InvalidState(format!(
                "probability {p} at index {i} is outside [0, 1]"
            )));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(Self { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: StateVector,
}

impl QuantumState {
    /// Normalizes `amplitudes`; the zero vector is rejected.
    pub fn new(amplitudes: StateVector) -> Result<Self> {
        Ok(Self {
            amplitudes: normalize(&amplitudes)?,
        })
    }

    pub fn amplitudes(&self) -> &StateVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }
}

/// A state in one of the three interpretations.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Marbles(MarbleState),
    Probabilities(ProbabilityState),
    Amplitudes(QuantumState),
}

impl State {
    pub fn kind(&self) -> &'static str {
        match self {
            State::Marbles(_) => "marbles",
            State::Probabilities(_) => "probabilities",
            State::Amplitudes(_) => "amplitudes",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            State::Marbles(s) => s.counts.len(),
            State::Probabilities(s) => s.probabilities.len(),
            State::Amplitudes(s) => s.amplitudes.dim(),
        }
    }

    fn matches(&self, regime: Regime) -> bool {
        matches!(
            (self, regime),
            (State::Marbles(_), Regime::Deterministic)
                | (State::Probabilities(_), Regime::Stochastic)
                | (State::Amplitudes(_), Regime::Quantum)
        )
    }

    /// The state as a complex column: counts and probabilities become real
    /// amplitudes.
    pub fn to_vector(&self) -> StateVector {
        let values: Vec<_> = match self {
            State::Marbles(s) => s.counts.iter().map(|&n| c64(n as f64, 0.0)).collect(),
            State::Probabilities(s) => s.probabilities.iter().map(|&p| c64(p, 0.0)).collect(),
            State::Amplitudes(s) => return s.amplitudes.clone(),
        };
        StateVector::new(values).expect("states are non-empty and finite")
    }

    /// Per-vertex weights: marble counts, probabilities, or `|c_j|^2`
    /// (not divided by the squared norm).
    pub fn weights(&self) -> Vec<f64> {
        match self {
            State::Marbles(s) => s.counts.iter().map(|&n| n as f64).collect(),
            State::Probabilities(s) => s.probabilities.clone(),
            State::Amplitudes(s) => s
                .amplitudes
                .amplitudes()
                .iter()
                .map(|z| z.norm_sqr())
                .collect(),
        }
    }
}

impl From<MarbleState> for State {
    fn from(s: MarbleState) -> Self {
        State::Marbles(s)
    }
}

impl From<ProbabilityState> for State {
    fn from(s: ProbabilityState) -> Self {
        State::Probabilities(s)
    }
}

impl From<QuantumState> for State {
    fn from(s: QuantumState) -> Self {
        State::Amplitudes(s)
    }
}

/// One time click: `matrix * state` in the regime's arithmetic.
pub fn step(sys: &RegimeSystem, state: &State) -> Result<State> {
    if !state.matches(sys.regime) {
        return Err(Error::StateKindMismatch {
            state: state.kind(),
            regime: sys.regime.name(),
        });
    }
    if state.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            op: "step",
            left: shape(sys.dim(), sys.dim()),
            right: shape(state.dim(), 1),
        });
    }
    Ok(match state {
        State::Marbles(s) => State::Marbles(MarbleState {
            counts: mat_vec_counts(&sys.matrix, &s.counts)?,
        }),
        State::Probabilities(s) => {
            let n = sys.dim();
            let mut next = vec![0.0; n];
            for (i, out) in next.iter_mut().enumerate() {
                for (j, &p) in s.probabilities.iter().enumerate() {
                    let w = sys.matrix[(i, j)];
                    if w.im.abs() > sys.tol {
                        return Err(Error::ComplexWeight {
                            row: i,
                            col: j,
                            value: w.to_string(),
                        });
                    }
                    *out += w.re * p;
                }
            }
            State::Probabilities(ProbabilityState {
                probabilities: next,
            })
        }
        State::Amplitudes(s) => {
            let next = mat_vec(&sys.matrix, &s.amplitudes)?;
            if next.squared_norm() == 0.0 {
                return Err(Error::ZeroState);
            }
            State::Amplitudes(QuantumState { amplitudes: next })
        }
    })
}

/// `k` successive steps; `k = 0` returns the input.
pub fn evolve(sys: &RegimeSystem, state: &State, k: usize) -> Result<State> {
    Ok(trace(sys, state, k)?
        .pop()
        .expect("trace holds the initial state"))
}

/// The initial state followed by the state after each of `k` steps.
pub fn trace(sys: &RegimeSystem, state: &State, k: usize) -> Result<Vec<State>> {
    if !state.matches(sys.regime) {
        return Err(Error::StateKindMismatch {
            state: state.kind(),
            regime: sys.regime.name(),
        });
    }
    let mut states = Vec::with_capacity(k + 1);
    states.push(state.clone());
    for _ in 0..k {
        let next = step(sys, states.last().expect("non-empty"))?;
        states.push(next);
    }
    Ok(states)
}

fn same_regime(a: &RegimeSystem, b: &RegimeSystem) -> Result<()> {
    if a.regime != b.regime {
        return Err(Error::RegimeMismatch {
            left: a.regime.name(),
            right: b.regime.name(),
        });
    }
    Ok(())
}

fn combined_mode(a: &RegimeSystem, b: &RegimeSystem) -> Mode {
    if a.mode == Mode::Strict && b.mode == Mode::Strict {
        Mode::Strict
    } else {
        Mode::Unchecked
    }
}

/// `first` then `second`: the matrix is `second * first`, using the boolean
/// product in the deterministic regime.
pub fn compose_sequential(first: &RegimeSystem, second: &RegimeSystem) -> Result<RegimeSystem> {
    same_regime(first, second)?;
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch {
            op: "compose_sequential",
            left: shape(first.dim(), first.dim()),
            right: shape(second.dim(), second.dim()),
        });
    }
    let matrix = match first.regime {
        Regime::Deterministic => bool_mat_mul(&second.matrix, &first.matrix)?,
        Regime::Stochastic | Regime::Quantum => mat_mul(&second.matrix, &first.matrix)?,
    };
    RegimeSystem::with_mode(
        first.regime,
        matrix,
        combined_mode(first, second),
        first.tol.max(second.tol),
    )
}

/// Both systems side by side: the matrix is `a ⊗ b`.
pub fn compose_parallel(a: &RegimeSystem, b: &RegimeSystem) -> Result<RegimeSystem> {
    same_regime(a, b)?;
    RegimeSystem::with_mode(
        a.regime,
        kron(&a.matrix, &b.matrix),
        combined_mode(a, b),
        a.tol.max(b.tol),
    )
}

/// Combined state of two subsystems: entry `i * b.dim() + j` is `a[i] * b[j]`.
pub fn state_tensor(a: &State, b: &State) -> Result<State> {
    Ok(match (a, b) {
        (State::Marbles(x), State::Marbles(y)) => {
            let mut counts = Vec::with_capacity(x.counts.len() * y.counts.len());
            for &p in &x.counts {
                for &q in &y.counts {
                    counts.push(p.checked_mul(q).ok_or(Error::CountOverflow)?);
                }
            }
            State::Marbles(MarbleState { counts })
        }
        (State::Probabilities(x), State::Probabilities(y)) => {
            let probabilities = x
                .probabilities
                .iter()
                .flat_map(|&p| y.probabilities.iter().map(move |&q| p * q))
                .collect();
            State::Probabilities(ProbabilityState { probabilities })
        }
        (State::Amplitudes(x), State::Amplitudes(y)) => State::Amplitudes(QuantumState {
            amplitudes: x.amplitudes.tensor(&y.amplitudes),
        }),
        _ => {
            return Err(Error::InvalidState(format!(
                "cannot tensor {} with {}",
                a.kind(),
                b.kind()
            )))
        }
    })
}
