//! Stabilizer tableau with column-major bit packing.
//!
//! Qubit `q` owns one word row of X bits and one of Z bits, each bit being a
//! generator, so a gate touches `n/64` words regardless of how many
//! generators it affects. Group-level questions (membership, factorization,
//! equality of states) go through a canonical row-reduced generating set.

use rand::Rng;
use thiserror::Error;

use crate::circuit::{CircuitError, CliffordCircuit, Gate};
use crate::pauli::{words_for, PauliOperator};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("size mismatch: {0} vs {1} qubits")]
    SizeMismatch(usize, usize),
    #[error("need {expected} generators, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("generator {0} is not Hermitian")]
    NotHermitian(usize),
    #[error("generators {0} and {1} anticommute")]
    Anticommuting(usize, usize),
    #[error("generators are not independent (rank {0})")]
    Dependent(usize),
    #[error("qubit {0} out of range")]
    QubitOutOfRange(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// A column of the symplectic matrix: the X or Z bit of one qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Col {
    pub qubit: usize,
    pub is_z: bool,
}

fn bit(p: &PauliOperator, c: Col) -> bool {
    if c.is_z {
        p.z_bit(c.qubit)
    } else {
        p.x_bit(c.qubit)
    }
}

/// Gauss-Jordan elimination over F₂ with sign tracking. Pivot rows end up
/// first, in column order; returns the pivot columns.
pub fn row_reduce(rows: &mut [PauliOperator], order: &[Col]) -> Vec<Col> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for &c in order {
        if rank == rows.len() {
            break;
        }
        let Some(r) = (rank..rows.len()).find(|&r| bit(&rows[r], c)) else {
            continue;
        };
        rows.swap(r, rank);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && bit(row, c) {
                row.mul_assign_unchecked(&pivot);
            }
        }
        pivots.push(c);
        rank += 1;
    }
    pivots
}

fn standard_order(n: usize) -> Vec<Col> {
    (0..n)
        .map(|q| Col {
            qubit: q,
            is_z: false,
        })
        .chain((0..n).map(|q| Col {
            qubit: q,
            is_z: true,
        }))
        .collect()
}

/// Result of asking whether a Pauli operator belongs to a stabilizer group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Plus,
    Minus,
    Absent,
}

/// Canonical (reduced row echelon) generating set of a stabilizer group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    rows: Vec<PauliOperator>,
    pivots: Vec<Col>,
}

impl StabilizerGroup {
    pub fn new(n: usize, mut rows: Vec<PauliOperator>) -> Self {
        let pivots = row_reduce(&mut rows, &standard_order(n));
        rows.truncate(pivots.len());
        StabilizerGroup { n, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.rows
    }

    pub fn contains(&self, p: &PauliOperator) -> Result<Membership, TableauError> {
        if p.num_qubits() != self.n {
            return Err(TableauError::SizeMismatch(p.num_qubits(), self.n));
        }
        let mut rest = p.clone();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if bit(&rest, c) {
                rest.mul_assign_unchecked(row);
            }
        }
        if !rest.is_identity_up_to_phase() {
            return Ok(Membership::Absent);
        }
        Ok(match rest.phase() {
            0 => Membership::Plus,
            2 => Membership::Minus,
            _ => Membership::Absent,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    w: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    r: Vec<u64>,
}

impl StabilizerTableau {
    /// `|+⟩^⊗n`, generators `+X_i`.
    pub fn new_plus_state(n: usize) -> Self {
        let w = words_for(n);
        let mut t = StabilizerTableau {
            n,
            w,
            xs: vec![0; n * w],
            zs: vec![0; n * w],
            r: vec![0; w],
        };
        for q in 0..n {
            t.xs[q * w + (q >> 6)] |= 1 << (q & 63);
        }
        t
    }

    pub fn from_generators(gens: &[PauliOperator]) -> Result<Self, TableauError> {
        let n = gens.first().map_or(0, |g| g.num_qubits());
        if gens.len() != n {
            return Err(TableauError::WrongCount {
                expected: n,
                got: gens.len(),
            });
        }
        for (i, g) in gens.iter().enumerate() {
            if g.num_qubits() != n {
                return Err(TableauError::SizeMismatch(g.num_qubits(), n));
            }
            if !g.is_hermitian() {
                return Err(TableauError::NotHermitian(i));
            }
        }
        let w = words_for(n);
        let mut t = StabilizerTableau {
            n,
            w,
            xs: vec![0; n * w],
            zs: vec![0; n * w],
            r: vec![0; w],
        };
        for (g, p) in gens.iter().enumerate() {
            let m = 1u64 << (g & 63);
            for q in 0..n {
                if p.x_bit(q) {
                    t.xs[q * w + (g >> 6)] |= m;
                }
                if p.z_bit(q) {
                    t.zs[q * w + (g >> 6)] |= m;
                }
            }
            if p.phase() == 2 {
                t.r[g >> 6] |= m;
            }
        }
        t.check_valid()?;
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generator(&self, g: usize) -> PauliOperator {
        let (word, m) = (g >> 6, 1u64 << (g & 63));
        let mut p = PauliOperator::identity(self.n);
        for q in 0..self.n {
            if self.xs[q * self.w + word] & m != 0 {
                p.toggle_x(q);
            }
            if self.zs[q * self.w + word] & m != 0 {
                p.toggle_z(q);
            }
        }
        if self.r[word] & m != 0 {
            p.set_phase(2);
        }
        p
    }

    pub fn generators(&self) -> Vec<PauliOperator> {
        (0..self.n).map(|g| self.generator(g)).collect()
    }

    /// Full-rank and mutually commuting.
    pub fn check_valid(&self) -> Result<(), TableauError> {
        let gens = self.generators();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if !gens[i].commutes_unchecked(&gens[j]) {
                    return Err(TableauError::Anticommuting(i, j));
                }
            }
        }
        let rank = StabilizerGroup::new(self.n, gens).rank();
        if rank != self.n {
            return Err(TableauError::Dependent(rank));
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, g: Gate) -> Result<(), TableauError> {
        let (a, b) = g.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= self.n {
                return Err(TableauError::QubitOutOfRange(q));
            }
        }
        let w = self.w;
        match g {
            Gate::H(q) => {
                for k in 0..w {
                    let (x, z) = (self.xs[q * w + k], self.zs[q * w + k]);
                    self.r[k] ^= x & z;
                    self.xs[q * w + k] = z;
                    self.zs[q * w + k] = x;
                }
            }
            Gate::S(q) => {
                for k in 0..w {
                    let (x, z) = (self.xs[q * w + k], self.zs[q * w + k]);
                    self.r[k] ^= x & z;
                    self.zs[q * w + k] = z ^ x;
                }
            }
            Gate::Sdg(q) => {
                for k in 0..w {
                    let (x, z) = (self.xs[q * w + k], self.zs[q * w + k]);
                    self.r[k] ^= x & !z;
                    self.zs[q * w + k] = z ^ x;
                }
            }
            Gate::Z(q) => {
                for k in 0..w {
                    self.r[k] ^= self.xs[q * w + k];
                }
            }
            Gate::X(q) => {
                for k in 0..w {
                    self.r[k] ^= self.zs[q * w + k];
                }
            }
            Gate::CZ(a, b) => {
                if a == b {
                    return Err(CircuitError::DegenerateCz(a).into());
                }
                for k in 0..w {
                    let (xa, za) = (self.xs[a * w + k], self.zs[a * w + k]);
                    let (xb, zb) = (self.xs[b * w + k], self.zs[b * w + k]);
                    self.r[k] ^= xa & xb & (za ^ zb);
                    self.zs[a * w + k] = za ^ xb;
                    self.zs[b * w + k] = zb ^ xa;
                }
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &CliffordCircuit) -> Result<(), TableauError> {
        if c.n != self.n {
            return Err(TableauError::SizeMismatch(c.n, self.n));
        }
        for g in &c.gates {
            self.apply_gate(*g)?;
        }
        // Clifford conjugation cannot break validity; keep the check cheap.
        if cfg!(debug_assertions) && self.n <= 64 {
            debug_assert!(self.check_valid().is_ok());
        }
        Ok(())
    }

    pub fn group(&self) -> StabilizerGroup {
        StabilizerGroup::new(self.n, self.generators())
    }

    /// Canonical generating set; equal for equal states.
    pub fn canonical(&self) -> Vec<PauliOperator> {
        self.group().rows
    }

    pub fn is_stabilized_by(&self, p: &PauliOperator) -> Result<bool, TableauError> {
        Ok(self.group().contains(p)? == Membership::Plus)
    }

    /// Deterministic X-basis outcome on `q` (`Some(true)` for |+⟩), or `None`
    /// when the outcome is random.
    pub fn x_outcome(&self, q: usize) -> Result<Option<bool>, TableauError> {
        if q >= self.n {
            return Err(TableauError::QubitOutOfRange(q));
        }
        let x = PauliOperator::x_on(self.n, [q]);
        Ok(match self.group().contains(&x)? {
            Membership::Plus => Some(true),
            Membership::Minus => Some(false),
            Membership::Absent => None,
        })
    }

    /// Does the state split as (region) ⊗ (complement)?
    pub fn factorizes(&self, region: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &q in region {
            if q < self.n {
                inside[q] = true;
            }
        }
        let size = inside.iter().filter(|b| **b).count();
        let order: Vec<Col> = standard_order(self.n)
            .into_iter()
            .filter(|c| !inside[c.qubit])
            .chain(
                standard_order(self.n)
                    .into_iter()
                    .filter(|c| inside[c.qubit]),
            )
            .collect();
        let mut rows = self.generators();
        let pivots = row_reduce(&mut rows, &order);
        pivots.iter().filter(|c| inside[c.qubit]).count() == size
    }
}

/// Random stabilizer state reached from `|+⟩^⊗n` by a random Clifford circuit.
pub fn random_stabilizer_state<R: Rng>(n: usize, rng: &mut R) -> StabilizerTableau {
    let mut t = StabilizerTableau::new_plus_state(n);
    t.apply_circuit(&random_clifford_circuit(n, 8 * n + 8, rng))
        .expect("sizes agree");
    t
}

pub fn random_clifford_circuit<R: Rng>(n: usize, len: usize, rng: &mut R) -> CliffordCircuit {
    let mut c = CliffordCircuit::new(n);
    for _ in 0..len {
        let q = rng.gen_range(0..n);
        let g = match rng.gen_range(0..6) {
            0 => Gate::S(q),
            1 => Gate::Sdg(q),
            2 => Gate::Z(q),
            3 => Gate::X(q),
            4 => Gate::H(q),
            _ if n > 1 => {
                let mut b = rng.gen_range(0..n - 1);
                if b >= q {
                    b += 1;
                }
                Gate::CZ(q, b)
            }
            _ => Gate::H(q),
        };
        c.push(g).expect("indices in range");
    }
    c.add_phase(rng.gen_range(0..8));
    c
}
