//! Canned scenarios: the toy marble, bullet and photon systems with their
//! known outcomes.
//!
//! Golden values are written as exact fractions and surds and evaluated at
//! load time, never as rounded decimals.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{
    adjoint, bool_mat_mul, kron, mat_mul, modulus_squared, DenseMatrix, DEFAULT_TOL,
};
use crate::dynamics::{
    trace, MarbleState, Mode, ProbabilityState, QuantumState, Regime, RegimeSystem, State,
};
use crate::error::{Error, Result};

/// Largest deviation a floating-point golden value may show.
pub const GOLDEN_TOL: f64 = 1e-9;

pub mod fixtures {
    //! The matrices and states of the worked examples.

    use crate::algebra::{c64, DenseMatrix, C64, ZERO};

    fn real(n: usize, m: usize, v: &[f64]) -> DenseMatrix {
        DenseMatrix::from_real(n, m, v).expect("fixture shape")
    }

    /// Six-vertex marble graph: 0→5, 1→2, 2→4, 3→3, 4→5, 5→2.
    #[rustfmt::skip]
    pub fn marble_matrix() -> DenseMatrix {
        real(6, 6, &[
            0., 0., 0., 0., 0., 0.,
            0., 0., 0., 0., 0., 0.,
            0., 1., 0., 0., 0., 1.,
            0., 0., 0., 1., 0., 0.,
            0., 0., 1., 0., 0., 0.,
            1., 0., 0., 0., 1., 0.,
        ])
    }

    pub fn marble_initial() -> Vec<u64> {
        vec![6, 2, 1, 5, 3, 10]
    }

    pub fn marble_after_one() -> Vec<u64> {
        vec![0, 0, 12, 5, 1, 9]
    }

    /// Boolean square of [`marble_matrix`]: paths of length two.
    #[rustfmt::skip]
    pub fn marble_boolean_square() -> DenseMatrix {
        real(6, 6, &[
            0., 0., 0., 0., 0., 0.,
            0., 0., 0., 0., 0., 0.,
            1., 0., 0., 0., 1., 0.,
            0., 0., 0., 1., 0., 0.,
            0., 1., 0., 0., 0., 1.,
            0., 0., 1., 0., 0., 0.,
        ])
    }

    /// Three-vertex doubly stochastic graph (the red marble).
    pub fn stochastic_matrix() -> DenseMatrix {
        real(
            3,
            3,
            &[
                0.,
                1. / 6.,
                5. / 6.,
                1. / 3.,
                1. / 2.,
                1. / 6.,
                2. / 3.,
                1. / 3.,
                0.,
            ],
        )
    }

    pub fn stochastic_initial() -> Vec<f64> {
        vec![1. / 6., 1. / 6., 2. / 3.]
    }

    pub fn stochastic_after_one() -> Vec<f64> {
        vec![21. / 36., 9. / 36., 6. / 36.]
    }

    /// Two-vertex graph of the blue marble, vertices `a`, `b`.
    pub fn blue_marble_matrix() -> DenseMatrix {
        real(2, 2, &[1. / 3., 2. / 3., 2. / 3., 1. / 3.])
    }

    /// Combined red/blue dynamics with rows and columns `0a, 0b, 1a, 1b, 2a, 2b`.
    #[rustfmt::skip]
    pub fn two_marble_matrix() -> DenseMatrix {
        let e = 1. / 18.;
        let n = 1. / 9.;
        let s = 1. / 6.;
        real(6, 6, &[
            0.,     0.,     e,      2. * e, 5. * e, 10. * e,
            0.,     0.,     2. * e, e,      10. * e, 5. * e,
            n,      2. * n, s,      2. * s, e,      2. * e,
            2. * n, n,      2. * s, s,      2. * e, e,
            2. * n, 4. * n, n,      2. * n, 0.,     0.,
            4. * n, 2. * n, 2. * n, n,      0.,     0.,
        ])
    }

    /// Probabilistic double slit: gun 0, slits 1 and 2, targets 3..7.
    #[rustfmt::skip]
    pub fn bullets_matrix() -> DenseMatrix {
        let (h, t) = (1. / 2., 1. / 3.);
        real(8, 8, &[
            0., 0., 0., 0., 0., 0., 0., 0.,
            h,  0., 0., 0., 0., 0., 0., 0.,
            h,  0., 0., 0., 0., 0., 0., 0.,
            0., t,  0., 1., 0., 0., 0., 0.,
            0., t,  0., 0., 1., 0., 0., 0.,
            0., t,  t,  0., 0., 1., 0., 0.,
            0., 0., t,  0., 0., 0., 1., 0.,
            0., 0., t,  0., 0., 0., 0., 1.,
        ])
    }

    #[rustfmt::skip]
    pub fn bullets_squared() -> DenseMatrix {
        let (s, t) = (1. / 6., 1. / 3.);
        real(8, 8, &[
            0., 0., 0., 0., 0., 0., 0., 0.,
            0., 0., 0., 0., 0., 0., 0., 0.,
            0., 0., 0., 0., 0., 0., 0., 0.,
            s,  t,  0., 1., 0., 0., 0., 0.,
            s,  t,  0., 0., 1., 0., 0., 0.,
            t,  t,  t,  0., 0., 1., 0., 0.,
            s,  0., t,  0., 0., 0., 1., 0.,
            s,  0., t,  0., 0., 0., 0., 1.,
        ])
    }

    pub fn bullets_after_two() -> Vec<f64> {
        vec![0., 0., 0., 1. / 6., 1. / 6., 1. / 3., 1. / 6., 1. / 6.]
    }

    /// Quantum double slit with the same layout as [`bullets_matrix`].
    pub fn photons_matrix() -> DenseMatrix {
        let r2 = 1. / 2f64.sqrt();
        let r6 = 1. / 6f64.sqrt();
        let a = c64(-r6, r6); // (-1+i)/√6
        let b = c64(-r6, -r6); // (-1-i)/√6
        let c = c64(r6, -r6); // (1-i)/√6
        let h = c64(r2, 0.);
        let one = c64(1., 0.);
        let o = ZERO;
        #[rustfmt::skip]
        let rows: [[C64; 8]; 8] = [
            [o, o, o, o,   o,   o,   o,   o],
            [h, o, o, o,   o,   o,   o,   o],
            [h, o, o, o,   o,   o,   o,   o],
            [o, a, o, one, o,   o,   o,   o],
            [o, b, o, o,   one, o,   o,   o],
            [o, c, a, o,   o,   one, o,   o],
            [o, o, b, o,   o,   o,   one, o],
            [o, o, c, o,   o,   o,   o,   one],
        ];
        DenseMatrix::new(8, 8, rows.iter().flatten().copied().collect()).expect("fixture")
    }

    /// Entrywise `|P²[i, j]|²`; column 0 shows the cancellation at vertex 5.
    #[rustfmt::skip]
    pub fn photons_squared_modulus() -> DenseMatrix {
        let (s, t) = (1. / 6., 1. / 3.);
        real(8, 8, &[
            0., 0., 0., 0., 0., 0., 0., 0.,
            0., 0., 0., 0., 0., 0., 0., 0.,
            0., 0., 0., 0., 0., 0., 0., 0.,
            s,  t,  0., 1., 0., 0., 0., 0.,
            s,  t,  0., 0., 1., 0., 0., 0.,
            0., t,  t,  0., 0., 1., 0., 0.,
            s,  0., t,  0., 0., 0., 1., 0.,
            s,  0., t,  0., 0., 0., 0., 1.,
        ])
    }

    /// `|P² e₀|²` per vertex.
    pub fn photons_after_two() -> Vec<f64> {
        vec![0., 0., 0., 1. / 6., 1. / 6., 0., 1. / 6., 1. / 6.]
    }

    pub fn unitary_matrix() -> DenseMatrix {
        let r = 1. / 2f64.sqrt();
        DenseMatrix::new(
            3,
            3,
            vec![
                c64(r, 0.),
                c64(r, 0.),
                ZERO,
                c64(0., -r),
                c64(0., r),
                ZERO,
                ZERO,
                ZERO,
                c64(0., 1.),
            ],
        )
        .expect("fixture")
    }

    pub fn unitary_adjoint() -> DenseMatrix {
        let r = 1. / 2f64.sqrt();
        DenseMatrix::new(
            3,
            3,
            vec![
                c64(r, 0.),
                c64(0., r),
                ZERO,
                c64(r, 0.),
                c64(0., -r),
                ZERO,
                ZERO,
                ZERO,
                c64(0., -1.),
            ],
        )
        .expect("fixture")
    }

    pub fn unitary_modulus_squared() -> DenseMatrix {
        real(3, 3, &[0.5, 0.5, 0., 0.5, 0.5, 0., 0., 0., 1.])
    }

    /// A 3x3 hermitian observable.
    pub fn hermitian_example() -> DenseMatrix {
        DenseMatrix::new(
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
        .expect("fixture")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioName {
    Marbles6,
    Stochastic3,
    Bullets,
    Photons,
    TwoMarbles,
    Unitary3,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 6] = [
        ScenarioName::Marbles6,
        ScenarioName::Stochastic3,
        ScenarioName::Bullets,
        ScenarioName::Photons,
        ScenarioName::TwoMarbles,
        ScenarioName::Unitary3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Marbles6 => "marbles-6",
            ScenarioName::Stochastic3 => "stochastic-3",
            ScenarioName::Bullets => "bullets",
            ScenarioName::Photons => "photons",
            ScenarioName::TwoMarbles => "two-marbles",
            ScenarioName::Unitary3 => "unitary-3",
        }
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a golden value is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observed {
    FinalState,
    /// Per-vertex weights of the final state (`|c_j|²` when quantum).
    WeightTable,
    SystemMatrix,
    /// `k`-th power of the system matrix, boolean in the deterministic regime.
    Power(usize),
    Adjoint,
    AdjointTimesSystem,
    ModulusSquared,
    ModulusSquaredOfPower(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    /// Compared exactly.
    Counts(Vec<u64>),
    Reals(Vec<f64>),
    Matrix(DenseMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Golden {
    pub label: &'static str,
    pub observed: Observed,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: ScenarioName,
    pub system: RegimeSystem,
    pub initial: Option<State>,
    pub steps: usize,
    pub goldens: Vec<Golden>,
}

impl Scenario {
    /// Same scenario evolved for a different number of clicks, without
    /// goldens tied to the final state.
    pub fn with_steps(mut self, steps: usize) -> Self {
        if steps != self.steps {
            self.goldens
                .retain(|g| !matches!(g.observed, Observed::FinalState | Observed::WeightTable));
            self.steps = steps;
        }
        self
    }
}

pub fn scenario(name: ScenarioName) -> Scenario {
    use fixtures::*;
    let golden = |label, observed, expected| Golden {
        label,
        observed,
        expected,
    };
    let e0 = |n: usize| {
        let mut v = vec![0.0; n];
        v[0] = 1.0;
        v
    };
    let (system, initial, steps, goldens) = match name {
        ScenarioName::Marbles6 => (
            RegimeSystem::strict(Regime::Deterministic, marble_matrix()),
            Some(State::from(
                MarbleState::new(marble_initial()).expect("non-empty"),
            )),
            1,
            vec![
                golden(
                    "marble counts after one click",
                    Observed::FinalState,
                    Expected::Counts(marble_after_one()),
                ),
                golden(
                    "boolean square (paths of length two)",
                    Observed::Power(2),
                    Expected::Matrix(marble_boolean_square()),
                ),
            ],
        ),
        ScenarioName::Stochastic3 => (
            RegimeSystem::strict(Regime::Stochastic, stochastic_matrix()),
            Some(State::from(
                ProbabilityState::new(stochastic_initial(), DEFAULT_TOL).expect("sums to 1"),
            )),
            1,
            vec![golden(
                "probabilities after one click",
                Observed::FinalState,
                Expected::Reals(stochastic_after_one()),
            )],
        ),
        ScenarioName::Bullets => (
            RegimeSystem::unchecked(Regime::Stochastic, bullets_matrix()),
            Some(State::from(
                ProbabilityState::new(e0(8), DEFAULT_TOL).expect("point mass"),
            )),
            2,
            vec![
                golden(
                    "bullet distribution after two clicks",
                    Observed::FinalState,
                    Expected::Reals(bullets_after_two()),
                ),
                golden(
                    "two-click transition matrix",
                    Observed::Power(2),
                    Expected::Matrix(bullets_squared()),
                ),
            ],
        ),
        ScenarioName::Photons => (
            RegimeSystem::unchecked(Regime::Quantum, photons_matrix()),
            Some(State::from(
                QuantumState::new(crate::algebra::StateVector::basis(8, 0)).expect("unit"),
            )),
            2,
            vec![
                golden(
                    "photon detection probabilities after two clicks",
                    Observed::WeightTable,
                    Expected::Reals(photons_after_two()),
                ),
                golden(
                    "modulus squares of the one-click matrix equal the bullets matrix",
                    Observed::ModulusSquared,
                    Expected::Matrix(bullets_matrix()),
                ),
                golden(
                    "modulus squares of the two-click matrix",
                    Observed::ModulusSquaredOfPower(2),
                    Expected::Matrix(photons_squared_modulus()),
                ),
            ],
        ),
        ScenarioName::TwoMarbles => (
            RegimeSystem::strict(Regime::Stochastic, stochastic_matrix()).and_then(|red| {
                let blue = RegimeSystem::strict(Regime::Stochastic, blue_marble_matrix())?;
                crate::dynamics::compose_parallel(&red, &blue)
            }),
            None,
            0,
            vec![golden(
                "red ⊗ blue transition matrix",
                Observed::SystemMatrix,
                Expected::Matrix(two_marble_matrix()),
            )],
        ),
        ScenarioName::Unitary3 => (
            RegimeSystem::strict(Regime::Quantum, unitary_matrix()),
            None,
            0,
            vec![
                golden(
                    "conjugate transpose",
                    Observed::Adjoint,
                    Expected::Matrix(unitary_adjoint()),
                ),
                golden(
                    "U†U is the identity",
                    Observed::AdjointTimesSystem,
                    Expected::Matrix(DenseMatrix::identity(3)),
                ),
                golden(
                    "modulus squares form a doubly stochastic matrix",
                    Observed::ModulusSquared,
                    Expected::Matrix(unitary_modulus_squared()),
                ),
            ],
        ),
    };
    Scenario {
        name,
        system: system.expect("fixtures are well formed"),
        initial,
        steps,
        goldens,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub label: &'static str,
    pub max_deviation: f64,
    pub exact: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub name: ScenarioName,
    pub regime: Regime,
    /// Initial state followed by the state after each click.
    pub trace: Vec<State>,
    /// Per-vertex weights of the final state, `|c_j|²` when quantum. Absent
    /// for marble counts and for scenarios without a state.
    pub probability_table: Option<Vec<f64>>,
    pub checks: Vec<CheckResult>,
}

impl ScenarioReport {
    pub fn final_state(&self) -> Option<&State> {
        self.trace.last()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn matrix_power(sys: &RegimeSystem, k: usize) -> Result<DenseMatrix> {
    let m = sys.matrix();
    let mut acc = DenseMatrix::identity(sys.dim());
    for _ in 0..k {
        acc = match sys.regime() {
            Regime::Deterministic => bool_mat_mul(m, &acc)?,
            _ => mat_mul(m, &acc)?,
        };
    }
    Ok(acc)
}

fn observe_matrix(sys: &RegimeSystem, observed: Observed) -> Result<DenseMatrix> {
    let m = sys.matrix();
    match observed {
        Observed::SystemMatrix => Ok(m.clone()),
        Observed::Power(k) => matrix_power(sys, k),
        Observed::Adjoint => Ok(adjoint(m)),
        Observed::AdjointTimesSystem => mat_mul(&adjoint(m), m),
        Observed::ModulusSquared => Ok(modulus_squared(m)),
        Observed::ModulusSquaredOfPower(k) => Ok(modulus_squared(&matrix_power(sys, k)?)),
        Observed::FinalState | Observed::WeightTable => unreachable!("not a matrix view"),
    }
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn check(golden: &Golden, sys: &RegimeSystem, last: Option<&State>) -> Result<CheckResult> {
    let missing = || Error::InvalidState(format!("{}: scenario has no state", golden.label));
    let (max_deviation, exact) = match (&golden.expected, golden.observed) {
        (Expected::Counts(expected), Observed::FinalState) => match last.ok_or_else(missing)? {
            State::Marbles(s) => {
                let equal = s.counts() == expected.as_slice();
                let dev = s
                    .counts()
                    .iter()
                    .zip(expected)
                    .map(|(&a, &b)| a.abs_diff(b) as f64)
                    .fold(0.0, f64::max);
                (
                    if equal {
                        0.0
                    } else {
                        dev.max(f64::MIN_POSITIVE)
                    },
                    true,
                )
            }
            other => {
                return Err(Error::StateKindMismatch {
                    state: other.kind(),
                    regime: "deterministic",
                })
            }
        },
        (Expected::Reals(expected), Observed::FinalState | Observed::WeightTable) => {
            let state = last.ok_or_else(missing)?;
            (max_deviation(&state.weights(), expected), false)
        }
        (Expected::Matrix(expected), observed) => {
            let actual = observe_matrix(sys, observed)?;
            (
                actual.max_abs_diff(expected).unwrap_or(f64::INFINITY),
                false,
            )
        }
        (expected, observed) => {
            return Err(Error::InvalidState(format!(
                "{}: cannot compare {observed:?} with {expected:?}",
                golden.label
            )))
        }
    };
    let passed = if exact {
        max_deviation == 0.0
    } else {
        max_deviation <= GOLDEN_TOL
    };
    Ok(CheckResult {
        label: golden.label,
        max_deviation,
        exact,
        passed,
    })
}

/// Evolves the scenario (always unchecked) and compares every golden value.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioReport> {
    let sys = RegimeSystem::with_mode(
        s.system.regime(),
        s.system.matrix().clone(),
        Mode::Unchecked,
        s.system.tol(),
    )?;
    let states = match &s.initial {
        Some(initial) => trace(&sys, initial, s.steps)?,
        None => Vec::new(),
    };
    let checks = s
        .goldens
        .iter()
        .map(|g| check(g, &sys, states.last()))
        .collect::<Result<Vec<_>>>()?;
    let probability_table = states.last().and_then(|st| match st {
        State::Marbles(_) => None,
        other => Some(other.weights()),
    });
    Ok(ScenarioReport {
        name: s.name,
        regime: sys.regime(),
        trace: states,
        probability_table,
        checks,
    })
}

/// `M ⊗ N` of the red and blue marble systems, built directly.
pub fn two_marble_product() -> DenseMatrix {
    kron(
        &fixtures::stochastic_matrix(),
        &fixtures::blue_marble_matrix(),
    )
}
