//! Bits, qubits, logic gates and circuits.
//!
//! The top wire is the leftmost bit of a basis label and the first (outer)
//! tensor factor, so `|x,y⟩` is `|x⟩ ⊗ |y⟩` and a gate stacked above another
//! is `top ⊗ bottom`.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{
    c64, kron, mat_mul, mat_vec, validate, DenseMatrix, MatrixClass, StateVector, DEFAULT_TOL,
};
use crate::error::{Error, Result};

/// Longest bitstring accepted; a `2^24` amplitude vector is 256 MiB.
pub const MAX_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitstringKet {
    bits: String,
}

impl BitstringKet {
    pub fn parse(bits: &str) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_BITS || !bits.bytes().all(|b| b == b'0' || b == b'1')
        {
            return Err(Error::InvalidBits(bits.to_string()));
        }
        Ok(Self {
            bits: bits.to_string(),
        })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.bits.len()
    }

    /// Binary value with the leftmost bit most significant.
    pub fn index(&self) -> usize {
        self.bits
            .bytes()
            .fold(0, |acc, b| (acc << 1) | usize::from(b == b'1'))
    }

    pub fn as_str(&self) -> &str {
        &self.bits
    }
}

impl FromStr for BitstringKet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for BitstringKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.bits)
    }
}

pub fn ket_of_bits(bits: &BitstringKet) -> StateVector {
    StateVector::basis(bits.dim(), bits.index())
}

/// Basis label of `index` on `width` wires, e.g. `01` for index 1 of 2 wires.
pub fn bit_label(index: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|k| if index >> k & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// A matrix from `2^in_bits` inputs to `2^out_bits` outputs. Quantum gates
/// are square and unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    name: String,
    matrix: DenseMatrix,
    in_bits: usize,
    out_bits: usize,
    quantum: bool,
}

impl Gate {
    pub fn classical(
        name: impl Into<String>,
        matrix: DenseMatrix,
        in_bits: usize,
        out_bits: usize,
    ) -> Result<Self> {
        Self::build(name.into(), matrix, in_bits, out_bits, false)
    }

    /// A unitary gate; the wire count is inferred from the matrix size.
    pub fn quantum(name: impl Into<String>, matrix: DenseMatrix) -> Result<Self> {
        let bits = matrix.rows().trailing_zeros() as usize;
        Self::build(name.into(), matrix, bits, bits, true)
    }

    fn build(
        name: String,
        matrix: DenseMatrix,
        in_bits: usize,
        out_bits: usize,
        quantum: bool,
    ) -> Result<Self> {
        if in_bits > MAX_BITS || out_bits > MAX_BITS {
            return Err(Error::Arity(format!("{name}: too many wires")));
        }
        if matrix.shape() != (1 << out_bits, 1 << in_bits) {
            return Err(Error::Arity(format!(
                "{name}: a {}x{} matrix is not a {in_bits}-in/{out_bits}-out gate",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if quantum {
            validate(&matrix, MatrixClass::Quantum, DEFAULT_TOL)?.into_result()?;
        }
        Ok(Self {
            name,
            matrix,
            in_bits,
            out_bits,
            quantum,
        })
    }

    pub fn identity(bits: usize) -> Self {
        Self::quantum(format!("I{bits}"), DenseMatrix::identity(1 << bits))
            .expect("identity is unitary")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn in_bits(&self) -> usize {
        self.in_bits
    }

    pub fn out_bits(&self) -> usize {
        self.out_bits
    }

    pub fn is_quantum(&self) -> bool {
        self.quantum
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StandardGate {
    Not,
    And,
    Nand,
    Or,
    Nor,
    Hadamard,
    Cnot,
    Identity(usize),
}

impl FromStr for StandardGate {
    type Err = Error;

    /// Accepts `NOT`, `AND`, `NAND`, `OR`, `NOR`, `H`, `CNOT`, `I` and
    /// `I(n)` / `In`, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        Ok(match upper.as_str() {
            "NOT" => StandardGate::Not,
            "AND" => StandardGate::And,
            "NAND" => StandardGate::Nand,
            "OR" => StandardGate::Or,
            "NOR" => StandardGate::Nor,
            "H" => StandardGate::Hadamard,
            "CNOT" => StandardGate::Cnot,
            "I" => StandardGate::Identity(1),
            other => {
                let n = other
                    .strip_prefix('I')
                    .map(|rest| rest.trim_start_matches('(').trim_end_matches(')'))
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| n <= MAX_BITS)
                    .ok_or_else(|| Error::UnknownGate(s.to_string()))?;
                StandardGate::Identity(n)
            }
        })
    }
}

impl StandardGate {
    pub fn gate(self) -> Gate {
        let real = |rows, cols, v: &[f64]| DenseMatrix::from_real(rows, cols, v).expect("fixed");
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let result = match self {
            StandardGate::Not => Gate::quantum("NOT", real(2, 2, &[0., 1., 1., 0.])),
            StandardGate::Hadamard => Gate::quantum("H", real(2, 2, &[r, r, r, -r])),
            #[rustfmt::skip]
            StandardGate::Cnot => Gate::quantum("CNOT", real(4, 4, &[
                1., 0., 0., 0.,
                0., 1., 0., 0.,
                0., 0., 0., 1.,
                0., 0., 1., 0.,
            ])),
            StandardGate::And => {
                Gate::classical("AND", real(2, 4, &[1., 1., 1., 0., 0., 0., 0., 1.]), 2, 1)
            }
            StandardGate::Nand => {
                Gate::classical("NAND", real(2, 4, &[0., 0., 0., 1., 1., 1., 1., 0.]), 2, 1)
            }
            StandardGate::Or => {
                Gate::classical("OR", real(2, 4, &[1., 0., 0., 0., 0., 1., 1., 1.]), 2, 1)
            }
            StandardGate::Nor => {
                Gate::classical("NOR", real(2, 4, &[0., 1., 1., 1., 1., 0., 0., 0.]), 2, 1)
            }
            StandardGate::Identity(n) => return Gate::identity(n),
        };
        result.expect("standard gates are well formed")
    }
}

pub fn standard_gate(name: &str) -> Result<Gate> {
    Ok(name.parse::<StandardGate>()?.gate())
}

/// `first` then `second`; the matrix is `second * first`.
pub fn sequential(first: &Gate, second: &Gate) -> Result<Gate> {
    if second.in_bits != first.out_bits {
        return Err(Error::Arity(format!(
            "{} outputs {} bit(s) but {} takes {}",
            first.name, first.out_bits, second.name, second.in_bits
        )));
    }
    Ok(Gate {
        name: format!("{} * {}", second.name, first.name),
        matrix: mat_mul(&second.matrix, &first.matrix)?,
        in_bits: first.in_bits,
        out_bits: second.out_bits,
        quantum: first.quantum && second.quantum,
    })
}

/// `top` on the upper wires, `bottom` on the lower ones: `top ⊗ bottom`.
pub fn parallel(top: &Gate, bottom: &Gate) -> Result<Gate> {
    let in_bits = top.in_bits + bottom.in_bits;
    let out_bits = top.out_bits + bottom.out_bits;
    if in_bits > MAX_BITS || out_bits > MAX_BITS {
        return Err(Error::Arity(format!(
            "{} ⊗ {} spans more than {MAX_BITS} wires",
            top.name, bottom.name
        )));
    }
    Ok(Gate {
        name: format!("{} ⊗ {}", top.name, bottom.name),
        matrix: kron(&top.matrix, &bottom.matrix),
        in_bits,
        out_bits,
        quantum: top.quantum && bottom.quantum,
    })
}

pub fn apply(gate: &Gate, state: &StateVector) -> Result<StateVector> {
    mat_vec(&gate.matrix, state)
}

/// Layers of gates over contiguous wire groups, applied left to right in time.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    wires: usize,
    width: usize,
    quantum: bool,
    layers: Vec<Vec<Gate>>,
}

impl Circuit {
    /// A circuit that may contain classical gates.
    pub fn new(wires: usize) -> Self {
        Self {
            wires,
            width: wires,
            quantum: false,
            layers: Vec::new(),
        }
    }

    /// A circuit that only accepts quantum gates.
    pub fn quantum(wires: usize) -> Self {
        Self {
            quantum: true,
            ..Self::new(wires)
        }
    }

    /// Appends a layer whose gates, stacked top to bottom, must cover exactly
    /// the current wires.
    pub fn push_layer(&mut self, layer: Vec<Gate>) -> Result<&mut Self> {
        if let Some(g) = layer.iter().find(|g| self.quantum && !g.quantum) {
            return Err(Error::ClassicalInQuantumCircuit(g.name.clone()));
        }
        let inputs: usize = layer.iter().map(|g| g.in_bits).sum();
        if layer.is_empty() || inputs != self.width {
            return Err(Error::Arity(format!(
                "layer {} takes {inputs} wire(s) but the circuit carries {}",
                self.layers.len(),
                self.width
            )));
        }
        self.width = layer.iter().map(|g| g.out_bits).sum();
        self.layers.push(layer);
        Ok(self)
    }

    pub fn with_layer(mut self, layer: Vec<Gate>) -> Result<Self> {
        self.push_layer(layer)?;
        Ok(self)
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }
}

/// Tensor each layer across its wire groups, then multiply the layers in
/// time order. An empty circuit is the identity on its wires.
pub fn circuit_matrix(circuit: &Circuit) -> Result<Gate> {
    let mut total = Gate::identity(circuit.wires);
    for layer in &circuit.layers {
        let mut stacked = layer[0].clone();
        for g in &layer[1..] {
            stacked = parallel(&stacked, g)?;
        }
        total = sequential(&total, &stacked)?;
    }
    Ok(total)
}

/// `H|0⟩`.
pub fn plus() -> StateVector {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(vec![c64(r, 0.0), c64(r, 0.0)]).expect("finite")
}

/// `H|1⟩`.
pub fn minus() -> StateVector {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(vec![c64(r, 0.0), c64(-r, 0.0)]).expect("finite")
}
