//! Graph and state file parsers.
//!
//! Graph files start with `dim <n>` and then list one weighted edge per
//! line as `<from> <to> <re> [<im>]`. State files hold either a single
//! bitstring such as `01`, or sparse entries `<index> <re> [<im>]`. In both,
//! `#` starts a comment and blank lines are ignored.

use std::collections::HashSet;

use marbles::algebra::{c64, C64};
use marbles::gates::{ket_of_bits, BitstringKet};
use marbles::{DenseMatrix, StateVector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}, line {line}: `{token}`")]
pub struct ParseError {
    pub line: usize,
    pub token: String,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, token: &str, message: impl Into<String>) -> Self {
        Self {
            line,
            token: token.to_string(),
            message: message.into(),
        }
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_index(line: usize, token: &str, dim: usize) -> Result<usize, ParseError> {
    let i: usize = token
        .parse()
        .map_err(|_| ParseError::new(line, token, "expected a vertex index"))?;
    if i >= dim {
        return Err(ParseError::new(line, token, "vertex out of range"));
    }
    Ok(i)
}

fn parse_real(line: usize, token: &str) -> Result<f64, ParseError> {
    match token.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(ParseError::new(line, token, "expected a finite number")),
    }
}

/// `<re> [<im>]` from the tail of a line.
fn parse_weight(line: usize, tokens: &[&str]) -> Result<C64, ParseError> {
    match tokens {
        [re] => Ok(c64(parse_real(line, re)?, 0.0)),
        [re, im] => Ok(c64(parse_real(line, re)?, parse_real(line, im)?)),
        [] => Err(ParseError::new(line, "", "missing weight")),
        [_, _, extra, ..] => Err(ParseError::new(line, extra, "unexpected token")),
    }
}

/// Parses a graph file into its adjacency matrix, `M[to, from] = weight`.
pub fn parse_graph(text: &str) -> Result<DenseMatrix, ParseError> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "", "expected `dim <n>`"))?;
    let dim = match header.as_slice() {
        ["dim", n] => match n.parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(ParseError::new(line, n, "expected a positive dimension")),
        },
        ["dim", _, extra, ..] => return Err(ParseError::new(line, extra, "unexpected token")),
        [first, ..] => return Err(ParseError::new(line, first, "expected `dim <n>`")),
        [] => unreachable!("content lines are non-empty"),
    };
    let mut entries = vec![c64(0.0, 0.0); dim * dim];
    let mut seen = HashSet::new();
    for (line, tokens) in lines {
        let [from, to, weight @ ..] = tokens.as_slice() else {
            return Err(ParseError::new(
                line,
                tokens[0],
                "expected `<from> <to> <re> [<im>]`",
            ));
        };
        let from_i = parse_index(line, from, dim)?;
        let to_i = parse_index(line, to, dim)?;
        let w = parse_weight(line, weight)?;
        if !seen.insert((from_i, to_i)) {
            return Err(ParseError::new(
                line,
                &format!("{from} {to}"),
                "duplicate edge",
            ));
        }
        entries[to_i * dim + from_i] = w;
    }
    Ok(DenseMatrix::new(dim, dim, entries).expect("entries match the declared dimension"))
}

/// Parses a state file, or a bare bitstring, into a vector of length `dim`.
pub fn parse_state(text: &str, dim: usize) -> Result<StateVector, ParseError> {
    let lines: Vec<_> = content_lines(text).collect();
    if let [(line, tokens)] = lines.as_slice() {
        if let [bits] = tokens.as_slice() {
            if bits.chars().all(|c| c == '0' || c == '1') {
                let ket = BitstringKet::parse(bits)
                    .map_err(|e| ParseError::new(*line, bits, e.to_string()))?;
                if ket.dim() != dim {
                    return Err(ParseError::new(
                        *line,
                        bits,
                        format!("bitstring has dimension {}, expected {dim}", ket.dim()),
                    ));
                }
                return Ok(ket_of_bits(&ket));
            }
        }
    }
    let mut amplitudes = vec![c64(0.0, 0.0); dim];
    let mut seen = HashSet::new();
    for (line, tokens) in lines {
        let (index, weight) = tokens.split_first().expect("content lines are non-empty");
        let i = parse_index(line, index, dim)?;
        if !seen.insert(i) {
            return Err(ParseError::new(line, index, "duplicate index"));
        }
        amplitudes[i] = parse_weight(line, weight)?;
    }
    Ok(StateVector::new(amplitudes).expect("parsed values are finite"))
}
