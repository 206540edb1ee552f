//! Strategies and independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use cluster_pump::f2poly::{F2LaurentPoly, Monomial};
use cluster_pump::pauli::PauliOperator;
use proptest::prelude::*;

pub fn monomial() -> impl Strategy<Value = Monomial> {
    (-3i32..=3, -3i32..=3, -1i32..=1, 0u8..=1).prop_map(|(i, j, k, m)| Monomial::new(i, j, k, m))
}

pub fn poly() -> impl Strategy<Value = F2LaurentPoly> {
    prop::collection::vec(monomial(), 0..7).prop_map(F2LaurentPoly::from_monomials)
}

/// Shift of a polynomial by `x^i y^j z^k`.
pub fn shift() -> impl Strategy<Value = (i32, i32, i32)> {
    (-3i32..=3, -3i32..=3, -1i32..=1)
}

/// Realize polynomials as Pauli operators on a box of qubits indexed by
/// monomial exponents. Independent of the lattice module.
pub struct Embedding {
    index: HashMap<(i32, i32, i32, u8), usize>,
}

impl Embedding {
    pub fn new(r: i32, rz: i32) -> Self {
        let mut index = HashMap::new();
        for i in -r..=r {
            for j in -r..=r {
                for k in -rz..=rz {
                    for m in 0..2u8 {
                        let n = index.len();
                        index.insert((i, j, k, m), n);
                    }
                }
            }
        }
        Embedding { index }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn sites(&self, p: &F2LaurentPoly) -> Vec<usize> {
        p.terms()
            .map(|t| self.index[&(t.i, t.j, t.k, t.m)])
            .collect()
    }

    pub fn x(&self, p: &F2LaurentPoly) -> PauliOperator {
        PauliOperator::x_on(self.len(), self.sites(p))
    }

    pub fn z(&self, p: &F2LaurentPoly) -> PauliOperator {
        PauliOperator::z_on(self.len(), self.sites(p))
    }
}

/// Diagonal phase `e^{iπk/4} Π_S i^{b} Π_CZ (−1)^{ab}` of a diagonal circuit
/// on basis state `b`, by direct formula.
pub fn diagonal_phase(
    c: &cluster_pump::circuit::CliffordCircuit,
    b: usize,
) -> num_complex::Complex64 {
    use cluster_pump::circuit::Gate;
    let bit = |q: usize| b >> q & 1 == 1;
    let mut quarter = 0i64;
    let mut half = 0i64;
    for g in &c.gates {
        match *g {
            Gate::S(q) if bit(q) => quarter += 1,
            Gate::Sdg(q) if bit(q) => quarter += 3,
            Gate::Z(q) if bit(q) => half += 1,
            Gate::CZ(a, b) if bit(a) && bit(b) => half += 1,
            Gate::S(_) | Gate::Sdg(_) | Gate::Z(_) | Gate::CZ(..) => {}
            other => panic!("non-diagonal gate {other}"),
        }
    }
    let eighths = c.global_phase as i64 + 2 * quarter + 4 * half;
    num_complex::Complex64::from_polar(
        1.0,
        std::f64::consts::FRAC_PI_4 * eighths.rem_euclid(8) as f64,
    )
}
