//! Deutsch's algorithm: decide whether `f: {0,1} -> {0,1}` is constant or
//! balanced with a single application of the oracle `U_f`.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::algebra::{c64, DenseMatrix, StateVector};
use crate::error::{Error, Result};
use crate::gates::{apply, minus, parallel, plus, Gate, StandardGate};
use crate::measurement::BasisDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryFunction {
    pub f0: bool,
    pub f1: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Constant,
    Balanced,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Constant => "constant",
            Classification::Balanced => "balanced",
        })
    }
}

impl BinaryFunction {
    pub const CONST0: Self = Self::new(false, false);
    pub const CONST1: Self = Self::new(true, true);
    pub const IDENTITY: Self = Self::new(false, true);
    pub const NOT: Self = Self::new(true, false);

    pub const fn new(f0: bool, f1: bool) -> Self {
        Self { f0, f1 }
    }

    pub fn all() -> [Self; 4] {
        [Self::CONST0, Self::CONST1, Self::IDENTITY, Self::NOT]
    }

    pub fn eval(self, x: bool) -> bool {
        if x {
            self.f1
        } else {
            self.f0
        }
    }

    /// Read straight off the lookup table, without any quantum machinery.
    pub fn classification(self) -> Classification {
        if self.f0 == self.f1 {
            Classification::Constant
        } else {
            Classification::Balanced
        }
    }

    pub fn name(self) -> &'static str {
        match (self.f0, self.f1) {
            (false, false) => "const0",
            (true, true) => "const1",
            (false, true) => "id",
            (true, false) => "not",
        }
    }
}

impl FromStr for BinaryFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::all()
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownOracle(s.to_string()))
    }
}

impl fmt::Display for BinaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The permutation `|x,y⟩ ↦ |x, y ⊕ f(x)⟩`, top wire `x`.
pub fn oracle_matrix(f: BinaryFunction) -> Gate {
    let matrix = DenseMatrix::from_fn(4, 4, |row, col| {
        let (x, y) = (col >> 1, col & 1);
        let target = (x << 1) | (y ^ usize::from(f.eval(x == 1)));
        c64(if row == target { 1.0 } else { 0.0 }, 0.0)
    });
    Gate::quantum(format!("U_{}", f.name()), matrix).expect("permutations are unitary")
}

/// An oracle that can only be applied, never inspected, and counts how
/// often it is applied.
#[derive(Debug)]
pub struct BlackBox {
    gate: Gate,
    calls: AtomicUsize,
}

impl BlackBox {
    pub fn new(f: BinaryFunction) -> Self {
        Self {
            gate: oracle_matrix(f),
            calls: AtomicUsize::new(0),
        }
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        apply(&self.gate, state)
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }
}

fn hadamard() -> Gate {
    StandardGate::Hadamard.gate()
}

fn ket(index: usize) -> StateVector {
    StateVector::basis(4, index)
}

/// `U_f (H ⊗ I)|00⟩ = (|0,f(0)⟩ + |1,f(1)⟩)/√2`.
pub fn first_attempt(f: BinaryFunction) -> StateVector {
    let h_top = parallel(&hadamard(), &Gate::identity(1)).expect("two wires");
    let phi1 = apply(&h_top, &ket(0b00)).expect("dim 4");
    apply(&oracle_matrix(f), &phi1).expect("dim 4")
}

/// `U_f (I ⊗ H)|x,1⟩ = (-1)^f(x) |x⟩ ⊗ (|0⟩ - |1⟩)/√2`.
pub fn second_attempt(f: BinaryFunction, x: bool) -> StateVector {
    let h_bottom = parallel(&Gate::identity(1), &hadamard()).expect("two wires");
    let phi0 = ket((usize::from(x) << 1) | 1);
    let phi1 = apply(&h_bottom, &phi0).expect("dim 4");
    apply(&oracle_matrix(f), &phi1).expect("dim 4")
}

fn wire_marginal(state: &StateVector, top: bool) -> Result<BasisDistribution> {
    if state.dim() != 4 {
        return Err(Error::DimensionMismatch {
            op: "marginal",
            left: "two qubits".to_string(),
            right: state.dim().to_string(),
        });
    }
    let w: Vec<f64> = state.amplitudes().iter().map(|z| z.norm_sqr()).collect();
    let weights = if top {
        [w[0b00] + w[0b01], w[0b10] + w[0b11]]
    } else {
        [w[0b00] + w[0b10], w[0b01] + w[0b11]]
    };
    BasisDistribution::from_weights(&weights)
}

/// Outcome distribution of measuring only the top wire of a two-qubit state.
pub fn top_marginal(state: &StateVector) -> Result<BasisDistribution> {
    wire_marginal(state, true)
}

pub fn bottom_marginal(state: &StateVector) -> Result<BasisDistribution> {
    wire_marginal(state, false)
}

/// Smallest `p(top = 0)` read as "constant".
pub const CONSTANT_THRESHOLD: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DeutschRun {
    /// `|φ0⟩ .. |φ3⟩`.
    pub snapshots: [StateVector; 4],
    pub top_distribution: BasisDistribution,
    pub classification: Classification,
    pub oracle_calls: usize,
}

/// `(H ⊗ I) U_f (H ⊗ H)|0,1⟩`, measuring the top wire. The closing Hadamard
/// acts on the top wire.
pub fn run_deutsch(f: BinaryFunction) -> DeutschRun {
    run_with_oracle(&BlackBox::new(f)).expect("two-qubit circuit")
}

/// Runs the circuit against an opaque oracle.
pub fn run_with_oracle(oracle: &BlackBox) -> Result<DeutschRun> {
    let before = oracle.calls();
    let h = hadamard();
    let phi0 = ket(0b01);
    let phi1 = apply(&parallel(&h, &h)?, &phi0)?;
    let phi2 = oracle.apply(&phi1)?;
    let phi3 = apply(&parallel(&h, &Gate::identity(1))?, &phi2)?;
    let top_distribution = top_marginal(&phi3)?;
    let classification = if top_distribution.get(0) >= CONSTANT_THRESHOLD {
        Classification::Constant
    } else {
        Classification::Balanced
    };
    Ok(DeutschRun {
        snapshots: [phi0, phi1, phi2, phi3],
        top_distribution,
        classification,
        oracle_calls: oracle.calls() - before,
    })
}

/// `(|0⟩ ± |1⟩)/√2 ⊗ (|0⟩ - |1⟩)/√2` with the overall sign, i.e. the state
/// right after the oracle written in closed form.
pub fn expected_after_oracle(f: BinaryFunction) -> StateVector {
    let sign = |b: bool| if b { -1.0 } else { 1.0 };
    let top = StateVector::new(vec![
        c64(sign(f.f0) * plus()[0].re, 0.0),
        c64(sign(f.f1) * plus()[1].re, 0.0),
    ])
    .expect("finite");
    top.tensor(&minus())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> StateVector {
        StateVector::basis(4, usize::from_str_radix(s, 2).unwrap())
    }

    #[test]
    fn printed_oracle_for_not() {
        #[rustfmt::skip]
        let printed = DenseMatrix::from_real(4, 4, &[
            0., 1., 0., 0.,
            1., 0., 0., 0.,
            0., 0., 1., 0.,
            0., 0., 0., 1.,
        ]).unwrap();
        assert_eq!(oracle_matrix(BinaryFunction::NOT).matrix(), &printed);
        assert_eq!(
            oracle_matrix(BinaryFunction::CONST0).matrix(),
            &DenseMatrix::identity(4)
        );
    }

    #[test]
    fn identity_oracle_is_cnot() {
        let u = oracle_matrix(BinaryFunction::IDENTITY);
        let cnot = StandardGate::Cnot.gate();
        for basis in ["00", "01", "10", "11"] {
            assert_eq!(
                apply(&u, &bits(basis)).unwrap(),
                apply(&cnot, &bits(basis)).unwrap()
            );
        }
        assert_eq!(u.matrix(), cnot.matrix());
    }

    #[test]
    fn first_attempt_examples() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v = first_attempt(BinaryFunction::NOT);
        let expected = StateVector::from_real(&[0., r, r, 0.]).unwrap();
        assert!(v.max_abs_diff(&expected).unwrap() < 1e-12);
        let v = first_attempt(BinaryFunction::CONST0);
        let expected = StateVector::from_real(&[r, 0., r, 0.]).unwrap();
        assert!(v.max_abs_diff(&expected).unwrap() < 1e-12);
        for f in BinaryFunction::all() {
            let m = top_marginal(&first_attempt(f)).unwrap();
            assert!((m.get(0) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn second_attempt_signs() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v = second_attempt(BinaryFunction::CONST0, false);
        assert!(
            v.max_abs_diff(&StateVector::from_real(&[r, -r, 0., 0.]).unwrap())
                .unwrap()
                < 1e-12
        );
        let v = second_attempt(BinaryFunction::NOT, false);
        assert!(
            v.max_abs_diff(&StateVector::from_real(&[-r, r, 0., 0.]).unwrap())
                .unwrap()
                < 1e-12
        );
        let m = bottom_marginal(&v).unwrap();
        assert!((m.get(0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn deutsch_classifies_every_function() {
        for f in BinaryFunction::all() {
            let run = run_deutsch(f);
            assert_eq!(run.classification, f.classification(), "{f}");
            assert_eq!(run.oracle_calls, 1);
            let phi1 = StateVector::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap();
            assert!(run.snapshots[1].max_abs_diff(&phi1).unwrap() < 1e-12);
            assert!(
                run.snapshots[2]
                    .max_abs_diff(&expected_after_oracle(f))
                    .unwrap()
                    < 1e-12
            );
        }
        let a = run_deutsch(BinaryFunction::CONST0).top_distribution;
        let b = run_deutsch(BinaryFunction::CONST1).top_distribution;
        assert_eq!(a, b);
        assert!((a.get(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn marginals() {
        assert_eq!(
            top_marginal(&bits("01")).unwrap().probabilities(),
            &[1.0, 0.0]
        );
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let balanced = StateVector::basis(2, 1).tensor(&minus());
        let m = top_marginal(&balanced).unwrap();
        assert!((m.get(1) - 1.0).abs() < 1e-12);
        let mixed = StateVector::from_real(&[0., r, r, 0.]).unwrap();
        assert!((top_marginal(&mixed).unwrap().get(0) - 0.5).abs() < 1e-12);
        assert!(top_marginal(&StateVector::zeros(4)).is_err());
        assert!(top_marginal(&StateVector::basis(2, 0)).is_err());
    }

    #[test]
    fn oracle_names_round_trip() {
        for f in BinaryFunction::all() {
            assert_eq!(f.name().parse::<BinaryFunction>().unwrap(), f);
        }
        assert!("xor".parse::<BinaryFunction>().is_err());
    }
}
