//! Clifford circuits over {S, Sdg, Z, X, H, CZ} with a global phase tracked in
//! units of π/4.
//!
//! Text format, one gate per line:
//!
//! ```text
//! # qubits 4
//! # phase 7
//! S 0
//! CZ 0 1
//! ```
//!
//! Blank lines and other `#` lines are ignored.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pauli::PauliOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    S(usize),
    Sdg(usize),
    Z(usize),
    X(usize),
    H(usize),
    CZ(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::S(q) | Gate::Sdg(q) | Gate::Z(q) | Gate::X(q) | Gate::H(q) => (q, None),
            Gate::CZ(a, b) => (a, Some(b)),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        !matches!(self, Gate::X(_) | Gate::H(_))
    }

    /// `p ← G p G†`.
    pub fn conjugate(&self, p: &mut PauliOperator) {
        let flip = |p: &mut PauliOperator| p.set_phase(p.phase() + 2);
        match *self {
            Gate::H(q) => {
                let (x, z) = (p.x_bit(q), p.z_bit(q));
                if x && z {
                    flip(p);
                }
                if x != z {
                    p.toggle_x(q);
                    p.toggle_z(q);
                }
            }
            Gate::S(q) => {
                let (x, z) = (p.x_bit(q), p.z_bit(q));
                if x && z {
                    flip(p);
                }
                if x {
                    p.toggle_z(q);
                }
            }
            Gate::Sdg(q) => {
                let (x, z) = (p.x_bit(q), p.z_bit(q));
                if x && !z {
                    flip(p);
                }
                if x {
                    p.toggle_z(q);
                }
            }
            Gate::Z(q) => {
                if p.x_bit(q) {
                    flip(p);
                }
            }
            Gate::X(q) => {
                if p.z_bit(q) {
                    flip(p);
                }
            }
            Gate::CZ(a, b) => {
                let (xa, za, xb, zb) = (p.x_bit(a), p.z_bit(a), p.x_bit(b), p.z_bit(b));
                if xa && xb && (za != zb) {
                    flip(p);
                }
                if xb {
                    p.toggle_z(a);
                }
                if xa {
                    p.toggle_z(b);
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Sdg(q) => write!(f, "SDG {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::H(q) => write!(f, "H {q}"),
            Gate::CZ(a, b) => write!(f, "CZ {a} {b}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate `{gate}` touches qubit outside 0..{n}")]
    QubitOutOfRange { gate: String, n: usize },
    #[error("CZ endpoints must differ, got CZ {0} {0}")]
    DegenerateCz(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("circuit acts on {0} qubits, state has {1}")]
    SizeMismatch(usize, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordCircuit {
    pub n: usize,
    pub gates: Vec<Gate>,
    /// Global phase exponent of e^{iπ/4}, mod 8.
    pub global_phase: u8,
}

impl CliffordCircuit {
    pub fn new(n: usize) -> Self {
        CliffordCircuit {
            n,
            gates: Vec::new(),
            global_phase: 0,
        }
    }

    pub fn push(&mut self, g: Gate) -> Result<(), CircuitError> {
        let (a, b) = g.qubits();
        if a >= self.n || b.is_some_and(|b| b >= self.n) {
            return Err(CircuitError::QubitOutOfRange {
                gate: g.to_string(),
                n: self.n,
            });
        }
        if let Gate::CZ(a, b) = g {
            if a == b {
                return Err(CircuitError::DegenerateCz(a));
            }
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn add_phase(&mut self, eighths: u8) {
        self.global_phase = (self.global_phase + eighths) % 8;
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn count<F: Fn(&Gate) -> bool>(&self, pred: F) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }

    /// Conjugate a Pauli operator by the whole circuit, `U p U†`.
    pub fn conjugate(&self, p: &mut PauliOperator) {
        for g in &self.gates {
            g.conjugate(p);
        }
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        let mut copy = CliffordCircuit::new(self.n);
        for g in &self.gates {
            copy.push(*g)?;
        }
        Ok(())
    }
}

impl fmt::Display for CliffordCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# qubits {}", self.n)?;
        writeln!(f, "# phase {}", self.global_phase)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for CliffordCircuit {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, CircuitError> {
        let mut n: Option<usize> = None;
        let mut phase = 0u8;
        let mut gates = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: &str| CircuitError::Parse {
                line,
                msg: msg.to_string(),
            };
            let text = raw.trim();
            if text.is_empty() {
                continue;
            }
            if let Some(comment) = text.strip_prefix('#') {
                let mut parts = comment.split_whitespace();
                match (parts.next(), parts.next()) {
                    (Some("qubits"), Some(v)) => {
                        n = Some(v.parse().map_err(|_| err("bad qubit count"))?)
                    }
                    (Some("phase"), Some(v)) => {
                        let p: i64 = v.parse().map_err(|_| err("bad phase"))?;
                        phase = p.rem_euclid(8) as u8;
                    }
                    _ => {}
                }
                continue;
            }
            let toks: Vec<&str> = text.split_whitespace().collect();
            let q = |i: usize| -> Result<usize, CircuitError> {
                toks.get(i)
                    .ok_or_else(|| err("missing qubit index"))?
                    .parse()
                    .map_err(|_| err("bad qubit index"))
            };
            let arity = if toks[0].eq_ignore_ascii_case("CZ") {
                3
            } else {
                2
            };
            if toks.len() != arity {
                return Err(err(&format!("expected {} operands", arity - 1)));
            }
            let g = match toks[0].to_ascii_uppercase().as_str() {
                "S" => Gate::S(q(1)?),
                "SDG" => Gate::Sdg(q(1)?),
                "Z" => Gate::Z(q(1)?),
                "X" => Gate::X(q(1)?),
                "H" => Gate::H(q(1)?),
                "CZ" => Gate::CZ(q(1)?, q(2)?),
                other => return Err(err(&format!("unknown gate `{other}`"))),
            };
            gates.push((line, g));
        }
        let n = match n {
            Some(n) => n,
            None => gates
                .iter()
                .map(|(_, g)| {
                    let (a, b) = g.qubits();
                    a.max(b.unwrap_or(0)) + 1
                })
                .max()
                .unwrap_or(0),
        };
        let mut c = CliffordCircuit::new(n);
        c.global_phase = phase;
        for (line, g) in gates {
            c.push(g).map_err(|e| CircuitError::Parse {
                line,
                msg: e.to_string(),
            })?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conj(g: Gate, s: &str) -> String {
        let mut p: PauliOperator = s.parse().unwrap();
        g.conjugate(&mut p);
        p.to_string()
    }

    #[test]
    fn single_qubit_conjugation_table() {
        assert_eq!(conj(Gate::S(0), "X"), "+Y");
        assert_eq!(conj(Gate::S(0), "Y"), "-X");
        assert_eq!(conj(Gate::S(0), "Z"), "+Z");
        assert_eq!(conj(Gate::Sdg(0), "X"), "-Y");
        assert_eq!(conj(Gate::Sdg(0), "Y"), "+X");
        assert_eq!(conj(Gate::H(0), "X"), "+Z");
        assert_eq!(conj(Gate::H(0), "Y"), "-Y");
        assert_eq!(conj(Gate::Z(0), "X"), "-X");
        assert_eq!(conj(Gate::Z(0), "Y"), "-Y");
        assert_eq!(conj(Gate::X(0), "Z"), "-Z");
        assert_eq!(conj(Gate::X(0), "Y"), "-Y");
    }

    #[test]
    fn cz_conjugation_table() {
        assert_eq!(conj(Gate::CZ(0, 1), "XI"), "+XZ");
        assert_eq!(conj(Gate::CZ(0, 1), "XX"), "+YY");
        assert_eq!(conj(Gate::CZ(0, 1), "YX"), "-XY");
        assert_eq!(conj(Gate::CZ(0, 1), "ZI"), "+ZI");
    }

    #[test]
    fn text_round_trip() {
        let mut c = CliffordCircuit::new(5);
        for g in [
            Gate::S(0),
            Gate::Sdg(1),
            Gate::Z(2),
            Gate::X(3),
            Gate::H(4),
            Gate::CZ(3, 1),
        ] {
            c.push(g).unwrap();
        }
        c.add_phase(13);
        let text = c.to_string();
        assert_eq!(text.parse::<CliffordCircuit>().unwrap(), c);
        assert!(text.contains("# phase 5"));
    }

    #[test]
    fn rejects_bad_gates() {
        let mut c = CliffordCircuit::new(2);
        assert!(matches!(
            c.push(Gate::CZ(1, 1)),
            Err(CircuitError::DegenerateCz(1))
        ));
        assert!(c.push(Gate::S(2)).is_err());
        assert!("# qubits 2\nT 0\n".parse::<CliffordCircuit>().is_err());
        assert!("# qubits 2\nCZ 0\n".parse::<CliffordCircuit>().is_err());
        assert!("# qubits 2\nCZ 0 5\n".parse::<CliffordCircuit>().is_err());
    }
}
