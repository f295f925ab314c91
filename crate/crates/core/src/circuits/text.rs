//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 4        # header, first non-blank line
//! CU 1 2          # control 1, target 2
//! H 3
//! ```
//!
//! Gate lines are `H t`, `X t`, `U t`, `V t`, `CU c t`, `CV c t` or `CX c t`
//! with 1-based indices. `#` starts a comment; blank lines are ignored.

use std::fmt;

use thiserror::Error;

use super::{Circuit, Gate, GateKind};
use crate::qstate::QubitIndex;

/// Registers above this size are refused by the parser.
const MAX_PARSED_QUBITS: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    MalformedHeader,
    InvalidRegisterSize(String),
    UnknownGate(String),
    WrongArity {
        gate: String,
        expected: usize,
        found: usize,
    },
    InvalidIndex(String),
    IndexOutOfRange {
        index: usize,
        num_qubits: usize,
    },
    ControlEqualsTarget(usize),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingHeader => write!(f, "expected header \"qubits N\""),
            Self::MalformedHeader => write!(f, "malformed header, expected \"qubits N\""),
            Self::InvalidRegisterSize(s) => write!(f, "invalid register size {s:?}"),
            Self::UnknownGate(g) => write!(f, "unknown gate {g:?}"),
            Self::WrongArity {
                gate,
                expected,
                found,
            } => write!(
                f,
                "gate {gate} takes {expected} qubit indices, found {found}"
            ),
            Self::InvalidIndex(s) => write!(f, "invalid qubit index {s:?}"),
            Self::IndexOutOfRange { index, num_qubits } => write!(
                f,
                "qubit index {index} out of range (register has {num_qubits} qubits)"
            ),
            Self::ControlEqualsTarget(q) => write!(f, "control and target are both qubit {q}"),
        }
    }
}

/// Parse failure with 1-based line and column of the offending token.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (byte, ch) in code
        .char_indices()
        .chain(std::iter::once((code.len(), ' ')))
    {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(byte),
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &code[s..byte],
                    column: code[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    tokens
}

/// Parses the text format into a validated [`Circuit`].
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    let mut last_line = 0;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let tokens = tokenize(line);
        let Some(head) = tokens.first() else {
            continue;
        };
        let err = |column: usize, kind| ParseError {
            line: line_no,
            column,
            kind,
        };
        let Some(circuit) = circuit.as_mut() else {
            if head.text != "qubits" {
                return Err(err(head.column, ParseErrorKind::MissingHeader));
            }
            let [_, size] = tokens.as_slice() else {
                return Err(err(head.column, ParseErrorKind::MalformedHeader));
            };
            let n = size
                .text
                .parse::<usize>()
                .ok()
                .filter(|n| (1..=MAX_PARSED_QUBITS).contains(n))
                .ok_or_else(|| {
                    err(
                        size.column,
                        ParseErrorKind::InvalidRegisterSize(size.text.to_string()),
                    )
                })?;
            circuit = Some(Circuit::new(n));
            continue;
        };

        let (kind, controlled) = match head.text {
            "H" => (GateKind::H, false),
            "X" => (GateKind::X, false),
            "U" => (GateKind::U, false),
            "V" => (GateKind::V, false),
            "CX" => (GateKind::X, true),
            "CU" => (GateKind::U, true),
            "CV" => (GateKind::V, true),
            other => {
                return Err(err(
                    head.column,
                    ParseErrorKind::UnknownGate(other.to_string()),
                ))
            }
        };
        let args = &tokens[1..];
        let expected = if controlled { 2 } else { 1 };
        if args.len() != expected {
            return Err(err(
                head.column,
                ParseErrorKind::WrongArity {
                    gate: head.text.to_string(),
                    expected,
                    found: args.len(),
                },
            ));
        }
        let n = circuit.num_qubits();
        let mut indices = Vec::with_capacity(expected);
        for arg in args {
            let index = arg.text.parse::<usize>().map_err(|_| {
                err(
                    arg.column,
                    ParseErrorKind::InvalidIndex(arg.text.to_string()),
                )
            })?;
            if index == 0 || index > n {
                return Err(err(
                    arg.column,
                    ParseErrorKind::IndexOutOfRange {
                        index,
                        num_qubits: n,
                    },
                ));
            }
            indices.push(QubitIndex::new(index));
        }
        let (control, target) = match indices.as_slice() {
            [t] => (None, *t),
            [c, t] => (Some(*c), *t),
            _ => unreachable!("arity checked above"),
        };
        if control == Some(target) {
            return Err(err(
                args[1].column,
                ParseErrorKind::ControlEqualsTarget(target.position()),
            ));
        }
        let gate = Gate {
            kind,
            target,
            control,
        };
        circuit.gates.push(gate);
    }
    circuit.ok_or(ParseError {
        line: last_line.max(1),
        column: 1,
        kind: ParseErrorKind::MissingHeader,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::encoder_circuit;

    #[test]
    fn single_gate() {
        let c = parse_circuit("qubits 1\nX 1").unwrap();
        assert_eq!(c.num_qubits(), 1);
        assert_eq!(c.gates(), &[Gate::single(GateKind::X, 1).unwrap()]);
    }

    #[test]
    fn encoder_prefix_text() {
        let c = parse_circuit("qubits 4\nCU 1 2\nCV 2 1\nH 3").unwrap();
        assert_eq!(c, encoder_circuit().prefix(3));
    }

    #[test]
    fn out_of_range_index_is_positioned() {
        let e = parse_circuit("qubits 2\nCX 2 5").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
        assert_eq!(
            e.kind,
            ParseErrorKind::IndexOutOfRange {
                index: 5,
                num_qubits: 2
            }
        );
        assert!(e.to_string().contains("qubit index 5 out of range"), "{e}");
        assert!(e.to_string().starts_with("line 2"), "{e}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let src = "# encoder head\n\n  qubits 2  # two\n\nH 1 # superpose\n\tCX 1 2\n";
        let c = parse_circuit(src).unwrap();
        assert_eq!(c.gates().len(), 2);
    }

    #[test]
    fn error_cases() {
        let cases: &[(&str, usize, usize, ParseErrorKind)] = &[
            ("H 1", 1, 1, ParseErrorKind::MissingHeader),
            ("", 1, 1, ParseErrorKind::MissingHeader),
            ("qubits", 1, 1, ParseErrorKind::MalformedHeader),
            (
                "qubits x",
                1,
                8,
                ParseErrorKind::InvalidRegisterSize("x".into()),
            ),
            (
                "qubits 2\nZ 1",
                2,
                1,
                ParseErrorKind::UnknownGate("Z".into()),
            ),
            (
                "qubits 2\nCX 1",
                2,
                1,
                ParseErrorKind::WrongArity {
                    gate: "CX".into(),
                    expected: 2,
                    found: 1,
                },
            ),
            (
                "qubits 2\nH one",
                2,
                3,
                ParseErrorKind::InvalidIndex("one".into()),
            ),
            (
                "qubits 2\nH 0",
                2,
                3,
                ParseErrorKind::IndexOutOfRange {
                    index: 0,
                    num_qubits: 2,
                },
            ),
            (
                "qubits 2\nCX 2 2",
                2,
                6,
                ParseErrorKind::ControlEqualsTarget(2),
            ),
        ];
        for (src, line, column, kind) in cases {
            let e = parse_circuit(src).unwrap_err();
            assert_eq!(
                (&e.kind, e.line, e.column),
                (kind, *line, *column),
                "{src:?}"
            );
        }
    }

    #[test]
    fn printer_round_trip() {
        let c = encoder_circuit();
        let text = c.to_text().unwrap();
        assert!(text.starts_with("qubits 4\nCU 1 2\nCV 2 1\nH 3\nCX 3 2\n"));
        assert_eq!(parse_circuit(&text).unwrap(), c);
    }
}
