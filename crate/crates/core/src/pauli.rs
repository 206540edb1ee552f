//! Bit-packed Pauli operators.
//!
//! An operator is `i^phase · σ_0 ⊗ … ⊗ σ_{n−1}` where `σ_q` is I, X, Y or Z
//! as selected by the `(x, z)` bits of qubit `q` (Y when both are set).
//! Hermitian operators therefore have even phase and the phase is just a
//! sign. Products are computed in the `X^x Z^z` form, where Y = i·XZ.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("size mismatch: {0} vs {1} qubits")]
    SizeMismatch(usize, usize),
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("cannot parse Pauli string `{0}`")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

#[inline]
fn get(v: &[u64], q: usize) -> bool {
    (v[q >> 6] >> (q & 63)) & 1 == 1
}

#[inline]
fn put(v: &mut [u64], q: usize, b: bool) {
    let m = 1u64 << (q & 63);
    if b {
        v[q >> 6] |= m;
    } else {
        v[q >> 6] &= !m;
    }
}

fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliOperator {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut op = Self::identity(n);
        op.set(q, p);
        op
    }

    /// Product of `X` on every listed qubit (duplicates cancel).
    pub fn x_on<I: IntoIterator<Item = usize>>(n: usize, qubits: I) -> Self {
        let mut op = Self::identity(n);
        for q in qubits {
            op.toggle_x(q);
        }
        op
    }

    /// Product of `Z` on every listed qubit (duplicates cancel).
    pub fn z_on<I: IntoIterator<Item = usize>>(n: usize, qubits: I) -> Self {
        let mut op = Self::identity(n);
        for q in qubits {
            op.toggle_z(q);
        }
        op
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn x_bit(&self, q: usize) -> bool {
        get(&self.x, q)
    }

    pub fn z_bit(&self, q: usize) -> bool {
        get(&self.z, q)
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Overwrite the Pauli on qubit `q`; the phase prefactor is untouched.
    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range");
        let (xb, zb) = match p {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        };
        put(&mut self.x, q, xb);
        put(&mut self.z, q, zb);
    }

    pub fn toggle_x(&mut self, q: usize) {
        assert!(q < self.n, "qubit {q} out of range");
        self.x[q >> 6] ^= 1 << (q & 63);
    }

    pub fn toggle_z(&mut self, q: usize) {
        assert!(q < self.n, "qubit {q} out of range");
        self.z[q >> 6] ^= 1 << (q & 63);
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|w| *w == 0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// `+1` or `−1` for Hermitian operators, `None` otherwise.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.phase = (out.phase + 2) & 3;
        out
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.x_bit(q) || self.z_bit(q))
            .collect()
    }

    fn check_size(&self, other: &Self) -> Result<(), PauliError> {
        if self.n != other.n {
            Err(PauliError::SizeMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    /// Symplectic test: `x·z' + z·x' ≡ 0 (mod 2)`.
    pub fn commutes(&self, other: &Self) -> Result<bool, PauliError> {
        self.check_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        (popcount_and(&self.x, &other.z) + popcount_and(&self.z, &other.x)).is_multiple_of(2)
    }

    /// Operator product `self · other`, phase included.
    pub fn mul(&self, other: &Self) -> Result<Self, PauliError> {
        self.check_size(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        out
    }

    /// `self ← self · other`.
    pub(crate) fn mul_assign_unchecked(&mut self, other: &Self) {
        // convert both to X^x Z^z form, multiply, convert back
        let ea = self.phase as u32 + popcount_and(&self.x, &self.z);
        let eb = other.phase as u32 + popcount_and(&other.x, &other.z);
        let cross = 2 * popcount_and(&self.z, &other.x);
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
        let y = popcount_and(&self.x, &self.z);
        self.phase = ((ea + eb + cross) as i64 - y as i64).rem_euclid(4) as u8;
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            let c = match self.get(q) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = PauliError;

    /// Dense form like `+XIZ`, `-iYY` or `ZZ`.
    fn from_str(s: &str) -> Result<Self, PauliError> {
        let s = s.trim();
        let (phase, body) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s)
        };
        let mut op = PauliOperator::identity(body.len());
        op.phase = phase;
        for (q, c) in body.chars().enumerate() {
            let p = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(PauliError::Parse(s.to_string())),
            };
            op.set(q, p);
        }
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XI").commutes(&p("IZ")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("X").commutes(&p("XI")).is_err());
    }

    #[test]
    fn single_qubit_products() {
        // XY = iZ, YZ = iX, ZX = iY
        assert_eq!(p("X").mul(&p("Y")).unwrap(), p("+iZ"));
        assert_eq!(p("Y").mul(&p("Z")).unwrap(), p("+iX"));
        assert_eq!(p("Z").mul(&p("X")).unwrap(), p("+iY"));
        assert_eq!(p("Y").mul(&p("X")).unwrap(), p("-iZ"));
        assert_eq!(p("Y").mul(&p("Y")).unwrap(), p("I"));
        assert_eq!(p("-X").mul(&p("X")).unwrap(), p("-I"));
    }

    #[test]
    fn multi_word_products() {
        let n = 130;
        let a = PauliOperator::x_on(n, [0, 64, 129]);
        let b = PauliOperator::z_on(n, [64, 129]);
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert_eq!(ab, ba);
        // X·Z = −iY on two qubits gives (−i)² = −1
        assert_eq!(ab.sign(), Some(-1));
        assert_eq!(ab.get(64), Pauli::Y);
        assert_eq!(ab.weight(), 3);
    }

    #[test]
    fn display_round_trip() {
        for s in ["+XYZI", "-ZZ", "+iY", "-iXI"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("XQ".parse::<PauliOperator>().is_err());
    }
}
