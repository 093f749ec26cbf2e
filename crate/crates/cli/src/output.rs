//! Text and JSON rendering.

use marbles::algebra::C64;
use marbles::StateVector;
use serde::{Deserialize, Serialize};

/// Magnitudes below this print as `0` in text mode, hiding rounding noise.
const TEXT_ZERO: f64 = 1e-14;

/// `x` with 12 significant digits, trailing zeros removed.
pub fn number(x: f64) -> String {
    if x.abs() < TEXT_ZERO {
        return "0".to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim(mantissa));
    }
    // Place the decimal point within the 12 rounded digits.
    let sign = if x < 0.0 { "-" } else { "" };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let plain = if exp < 0 {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{int}.{frac}")
    };
    format!("{sign}{}", trim(&plain))
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn complex(z: C64) -> String {
    let (re, im) = (number(z.re), number(z.im));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

pub fn vector(v: &StateVector) -> String {
    let parts: Vec<String> = v.amplitudes().iter().map(|&z| complex(z)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn reals(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| number(x)).collect();
    format!("[{}]", parts.join(", "))
}

/// JSON form of a state: amplitudes as `[re, im]` pairs plus the
/// normalized basis probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
    pub probabilities: Vec<f64>,
}

impl StateJson {
    pub fn new(state: &StateVector, probabilities: Vec<f64>) -> Self {
        Self {
            dim: state.dim(),
            amplitudes: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
            probabilities,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("reports serialize")
}
