//! Dense statevector backend for small instances.
//!
//! Amplitude index bit `q` is the computational value of qubit `q`. Used for
//! non-Clifford evolution under perturbed Hamiltonians and as an independent
//! oracle for the tableau simulator.

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::{self, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{CliffordCircuit, Gate};
use crate::lattice::HamTerm;
use crate::pauli::{Pauli, PauliOperator};

pub const DEFAULT_QUBIT_CAP: usize = 22;

/// Below this size amplitude loops run on one thread.
const PAR_THRESHOLD: usize = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("{n} qubits exceeds the dense cap of {cap}")]
    OverCap { n: usize, cap: usize },
    #[error("qubit {0} out of range")]
    QubitOutOfRange(usize),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("projection onto a branch of probability {0:e}")]
    ZeroProbability(f64),
    #[error("series did not converge within {0} terms")]
    NoConvergence(usize),
    #[error("target generators {0}")]
    BadTarget(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XOutcome {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Postselect {
    Plus,
    Minus,
    Sample(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_cap(n: usize, cap: usize) -> Result<(), StateError> {
    if n > cap || n >= usize::BITS as usize - 1 {
        Err(StateError::OverCap { n, cap })
    } else {
        Ok(())
    }
}

impl DenseState {
    /// `|0…0⟩`
    pub fn zero_state(n: usize, cap: usize) -> Result<Self, StateError> {
        check_cap(n, cap)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n, amps })
    }

    /// `|+⟩^⊗n`
    pub fn plus_state(n: usize, cap: usize) -> Result<Self, StateError> {
        check_cap(n, cap)?;
        let a = (0.5f64).powf(n as f64 / 2.0);
        Ok(DenseState {
            n,
            amps: vec![Complex64::new(a, 0.0); 1 << n],
        })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self, StateError> {
        if amps.len() != 1usize.checked_shl(n as u32).unwrap_or(0) {
            return Err(StateError::SizeMismatch(format!(
                "{} amplitudes for {n} qubits",
                amps.len()
            )));
        }
        Ok(DenseState { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    pub fn normalize(&mut self) {
        let s = 1.0 / self.norm();
        scale(&mut self.amps, Complex64::new(s, 0.0));
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &DenseState) -> Result<Complex64, StateError> {
        if self.n != other.n {
            return Err(StateError::SizeMismatch(format!(
                "{} vs {} qubits",
                self.n, other.n
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`
    pub fn overlap(&self, other: &DenseState) -> Result<f64, StateError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    fn check_qubit(&self, q: usize) -> Result<(), StateError> {
        if q < self.n {
            Ok(())
        } else {
            Err(StateError::QubitOutOfRange(q))
        }
    }

    pub fn apply_gate(&mut self, g: Gate) -> Result<(), StateError> {
        let (a, b) = g.qubits();
        self.check_qubit(a)?;
        if let Some(b) = b {
            self.check_qubit(b)?;
        }
        let m = 1usize << a;
        let i = Complex64::new(0.0, 1.0);
        match g {
            Gate::S(_) => self.phase_where(m, m, i),
            Gate::Sdg(_) => self.phase_where(m, m, -i),
            Gate::Z(_) => self.phase_where(m, m, Complex64::new(-1.0, 0.0)),
            Gate::CZ(_, b) => {
                let mm = m | (1 << b);
                self.phase_where(mm, mm, Complex64::new(-1.0, 0.0))
            }
            Gate::X(_) => {
                for idx in 0..self.amps.len() {
                    if idx & m == 0 {
                        self.amps.swap(idx, idx | m);
                    }
                }
            }
            Gate::H(_) => {
                for idx in 0..self.amps.len() {
                    if idx & m == 0 {
                        let (u, v) = (self.amps[idx], self.amps[idx | m]);
                        self.amps[idx] = (u + v) * FRAC_1_SQRT_2;
                        self.amps[idx | m] = (u - v) * FRAC_1_SQRT_2;
                    }
                }
            }
        }
        Ok(())
    }

    fn phase_where(&mut self, mask: usize, value: usize, f: Complex64) {
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if idx & mask == value {
                *a *= f;
            }
        }
    }

    /// Apply the gates and the tracked global phase.
    pub fn apply_circuit(&mut self, c: &CliffordCircuit) -> Result<(), StateError> {
        if c.n != self.n {
            return Err(StateError::SizeMismatch(format!(
                "circuit on {} qubits, state on {}",
                c.n, self.n
            )));
        }
        for &g in &c.gates {
            self.apply_gate(g)?;
        }
        let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * c.global_phase as f64);
        scale(&mut self.amps, phase);
        Ok(())
    }

    /// `P|ψ⟩` for a Pauli operator including its phase.
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<(), StateError> {
        if p.num_qubits() != self.n {
            return Err(StateError::SizeMismatch(format!(
                "operator on {} qubits",
                p.num_qubits()
            )));
        }
        let (mut xm, mut zm, mut ys) = (0usize, 0usize, 0u8);
        for q in p.support() {
            match p.get(q) {
                Pauli::X => xm |= 1 << q,
                Pauli::Z => zm |= 1 << q,
                Pauli::Y => {
                    xm |= 1 << q;
                    zm |= 1 << q;
                    ys += 1;
                }
                Pauli::I => {}
            }
        }
        let coef = i_pow(p.phase() + ys);
        let src = std::mem::take(&mut self.amps);
        let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
        for (b, a) in src.iter().enumerate() {
            let sgn = if (b & zm).count_ones() % 2 == 0 {
                coef
            } else {
                -coef
            };
            out[b ^ xm] = a * sgn;
        }
        self.amps = out;
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`
    pub fn expectation(&self, p: &PauliOperator) -> Result<Complex64, StateError> {
        let mut tmp = self.clone();
        tmp.apply_pauli(p)?;
        self.inner(&tmp)
    }

    /// Probability of outcome `+` when measuring qubit `q` in the X basis.
    pub fn prob_x_plus(&self, q: usize) -> Result<f64, StateError> {
        self.check_qubit(q)?;
        let m = 1usize << q;
        let mut p = 0.0;
        for idx in 0..self.amps.len() {
            if idx & m == 0 {
                p += (self.amps[idx] + self.amps[idx | m]).norm_sqr() / 2.0;
            }
        }
        Ok(p)
    }

    /// Project qubit `q` onto `(1 ± X)/2` and renormalize. The probability
    /// is the squared norm before renormalization.
    pub fn measure_x(&mut self, q: usize, mode: Postselect) -> Result<(XOutcome, f64), StateError> {
        let p_plus = self.prob_x_plus(q)?.clamp(0.0, 1.0);
        let outcome = match mode {
            Postselect::Plus => XOutcome::Plus,
            Postselect::Minus => XOutcome::Minus,
            Postselect::Sample(seed) => {
                if ChaCha8Rng::seed_from_u64(seed).gen::<f64>() < p_plus {
                    XOutcome::Plus
                } else {
                    XOutcome::Minus
                }
            }
        };
        let (p, s) = match outcome {
            XOutcome::Plus => (p_plus, 1.0),
            XOutcome::Minus => (1.0 - p_plus, -1.0),
        };
        if p < 1e-24 {
            return Err(StateError::ZeroProbability(p));
        }
        let m = 1usize << q;
        for idx in 0..self.amps.len() {
            if idx & m == 0 {
                let (u, v) = (self.amps[idx], self.amps[idx | m]);
                let w = (u + v * s) * 0.5;
                self.amps[idx] = w;
                self.amps[idx | m] = w * s;
            }
        }
        self.normalize();
        Ok((outcome, p))
    }

    /// `⟨ψ| Π_g (1+g)/2 |ψ⟩` for commuting Hermitian generators supported on
    /// `region`, one generator per region site.
    pub fn fidelity(&self, target: &[PauliOperator], region: &[usize]) -> Result<f64, StateError> {
        if target.len() != region.len() {
            return Err(StateError::BadTarget(format!(
                "{} generators for {} sites",
                target.len(),
                region.len()
            )));
        }
        let mut inside = vec![false; self.n];
        for &q in region {
            self.check_qubit(q)?;
            inside[q] = true;
        }
        for (a, g) in target.iter().enumerate() {
            if g.num_qubits() != self.n || !g.is_hermitian() {
                return Err(StateError::BadTarget(format!("generator {a} is malformed")));
            }
            if g.support().iter().any(|&q| !inside[q]) {
                return Err(StateError::BadTarget(format!(
                    "generator {a} leaves the region"
                )));
            }
            if target[..a].iter().any(|h| !h.commutes_unchecked(g)) {
                return Err(StateError::BadTarget(format!("generator {a} anticommutes")));
            }
        }
        let mut phi = self.clone();
        for g in target {
            phi.project_plus(g)?;
        }
        Ok(norm_sqr(&phi.amps).clamp(0.0, 1.0))
    }

    /// `ψ ← (1+g)/2 ψ` without renormalization.
    pub fn project_plus(&mut self, g: &PauliOperator) -> Result<(), StateError> {
        let mut gp = self.clone();
        gp.apply_pauli(g)?;
        for (a, b) in self.amps.iter_mut().zip(&gp.amps) {
            *a = (*a + b) * 0.5;
        }
        Ok(())
    }

    /// `ψ_b ← e^{−i t E(b)} ψ_b`
    pub fn evolve_diagonal(&mut self, h: &DiagonalHamiltonian, t: f64) -> Result<(), StateError> {
        h.check_size(self.n)?;
        let kernel = |(a, e): (&mut Complex64, &f64)| *a *= Complex64::from_polar(1.0, -t * e);
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps
                .par_iter_mut()
                .zip(h.energies.par_iter())
                .for_each(kernel);
        } else {
            self.amps.iter_mut().zip(h.energies.iter()).for_each(kernel);
        }
        Ok(())
    }

    /// `ψ ← exp(−iHt) ψ` to 2-norm accuracy `tol`, by a scaled truncated
    /// Taylor series of the matrix-free action of `H`.
    pub fn evolve_general(&mut self, h: &Hamiltonian, t: f64, tol: f64) -> Result<(), StateError> {
        h.diag.check_size(self.n)?;
        for &(q, _) in &h.x_fields {
            self.check_qubit(q)?;
        }
        let (lo, hi) = h
            .diag
            .energies
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, u), &e| {
                (l.min(e), u.max(e))
            });
        let shift = (lo + hi) / 2.0;
        let bound = (hi - lo) / 2.0 + h.x_fields.iter().map(|(_, c)| c.abs()).sum::<f64>();
        let steps = ((t.abs() * bound).ceil() as usize).max(1);
        let tau = t / steps as f64;
        let step_tol = tol / (4.0 * steps as f64);
        const MAX_TERMS: usize = 80;

        let mut term = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let mut next = term.clone();
        for _ in 0..steps {
            term.copy_from_slice(&self.amps);
            let mut converged = false;
            for k in 1..=MAX_TERMS {
                h.apply_shifted(&term, &mut next, shift);
                // next ← (−iτ/k) H term
                scale(&mut next, Complex64::new(0.0, -tau / k as f64));
                std::mem::swap(&mut term, &mut next);
                for (a, d) in self.amps.iter_mut().zip(&term) {
                    *a += d;
                }
                if norm_sqr(&term).sqrt() <= step_tol {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(StateError::NoConvergence(MAX_TERMS));
            }
        }
        scale(&mut self.amps, Complex64::from_polar(1.0, -shift * t));
        Ok(())
    }

    /// `⟨ψ|H|ψ⟩`
    pub fn energy(&self, h: &Hamiltonian) -> Result<f64, StateError> {
        h.diag.check_size(self.n)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        h.apply_shifted(&self.amps, &mut out, 0.0);
        Ok(self
            .amps
            .iter()
            .zip(&out)
            .map(|(a, b)| (a.conj() * b).re)
            .sum())
    }

    /// Debug dump: little-endian `(re, im)` f64 pairs in index order.
    pub fn write_le<W: Write>(&self, mut w: W) -> io::Result<()> {
        for a in &self.amps {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

fn scale(v: &mut [Complex64], f: Complex64) {
    if v.len() >= PAR_THRESHOLD {
        v.par_iter_mut().for_each(|a| *a *= f);
    } else {
        v.iter_mut().for_each(|a| *a *= f);
    }
}

/// Real energies `E(b)` of a diagonal Hamiltonian on every basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalHamiltonian {
    n: usize,
    energies: Vec<f64>,
}

impl DiagonalHamiltonian {
    pub fn zero(n: usize, cap: usize) -> Result<Self, StateError> {
        check_cap(n, cap)?;
        Ok(DiagonalHamiltonian {
            n,
            energies: vec![0.0; 1 << n],
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    fn check_size(&self, n: usize) -> Result<(), StateError> {
        if self.n == n {
            Ok(())
        } else {
            Err(StateError::SizeMismatch(format!(
                "Hamiltonian on {} qubits, state on {n}",
                self.n
            )))
        }
    }

    fn check_sites(&self, sites: &[usize]) -> Result<(), StateError> {
        match sites.iter().find(|&&q| q >= self.n) {
            Some(&q) => Err(StateError::QubitOutOfRange(q)),
            None => Ok(()),
        }
    }

    /// Add `coef · term`.
    pub fn add_term(&mut self, term: &HamTerm, coef: f64) -> Result<(), StateError> {
        self.check_sites(&term.sites())?;
        let kernel = |(b, e): (usize, &mut f64)| *e += coef * term.eigenvalue(|q| b >> q & 1 == 1);
        if self.energies.len() >= PAR_THRESHOLD {
            self.energies.par_iter_mut().enumerate().for_each(kernel);
        } else {
            self.energies.iter_mut().enumerate().for_each(kernel);
        }
        Ok(())
    }

    /// Add `coef · Π_{q∈support} Z_q`.
    pub fn add_z_product(&mut self, support: &[usize], coef: f64) -> Result<(), StateError> {
        self.check_sites(support)?;
        let mask: usize = support.iter().fold(0, |m, &q| m ^ (1 << q));
        for (b, e) in self.energies.iter_mut().enumerate() {
            *e += if (b & mask).count_ones().is_multiple_of(2) {
                coef
            } else {
                -coef
            };
        }
        Ok(())
    }
}

/// A diagonal part plus transverse fields `Σ c_q X_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    pub diag: DiagonalHamiltonian,
    pub x_fields: Vec<(usize, f64)>,
}

impl Hamiltonian {
    /// `out ← (H − shift) v`
    fn apply_shifted(&self, v: &[Complex64], out: &mut [Complex64], shift: f64) {
        let e = &self.diag.energies;
        let kernel = |(b, o): (usize, &mut Complex64)| {
            let mut acc = v[b] * (e[b] - shift);
            for &(q, c) in &self.x_fields {
                acc += v[b ^ (1 << q)] * c;
            }
            *o = acc;
        };
        if v.len() >= PAR_THRESHOLD {
            out.par_iter_mut().enumerate().for_each(kernel);
        } else {
            out.iter_mut().enumerate().for_each(kernel);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    const CAP: usize = DEFAULT_QUBIT_CAP;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zzz_on_000() {
        let mut psi = DenseState::zero_state(3, CAP).unwrap();
        let mut h = DiagonalHamiltonian::zero(3, CAP).unwrap();
        h.add_z_product(&[0, 1, 2], 1.0).unwrap();
        psi.evolve_diagonal(&h, FRAC_PI_4).unwrap();
        assert!((psi.amplitudes()[0] - Complex64::from_polar(1.0, -FRAC_PI_4)).norm() < 1e-15);
    }

    #[test]
    fn zero_time_is_identity() {
        let mut psi = DenseState::plus_state(4, CAP).unwrap();
        let before = psi.clone();
        let mut h = DiagonalHamiltonian::zero(4, CAP).unwrap();
        h.add_z_product(&[0, 2], 0.7).unwrap();
        psi.evolve_diagonal(&h, 0.0).unwrap();
        assert_eq!(psi, before);
    }

    #[test]
    fn x_field_on_plus_is_a_phase() {
        let mut psi = DenseState::plus_state(1, CAP).unwrap();
        let h = Hamiltonian {
            diag: DiagonalHamiltonian::zero(1, CAP).unwrap(),
            x_fields: vec![(0, 1.0)],
        };
        psi.evolve_general(&h, 1.3, 1e-12).unwrap();
        let expect = Complex64::from_polar(FRAC_1_SQRT_2, -1.3);
        for a in psi.amplitudes() {
            assert!((a - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn general_matches_diagonal_without_fields() {
        let mut h = DiagonalHamiltonian::zero(5, CAP).unwrap();
        h.add_z_product(&[0, 1, 2], -1.0).unwrap();
        h.add_z_product(&[2, 3], 0.4).unwrap();
        h.add_z_product(&[4], 2.5).unwrap();
        let mut a = DenseState::plus_state(5, CAP).unwrap();
        let mut b = a.clone();
        a.evolve_diagonal(&h, 2.0).unwrap();
        b.evolve_general(
            &Hamiltonian {
                diag: h,
                x_fields: vec![],
            },
            2.0,
            1e-10,
        )
        .unwrap();
        let d: f64 = a
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum();
        assert!(d.sqrt() < 1e-10);
    }

    #[test]
    fn rabi_oscillation() {
        // H = X on |0⟩: cos t |0⟩ − i sin t |1⟩
        let mut psi = DenseState::zero_state(1, CAP).unwrap();
        let h = Hamiltonian {
            diag: DiagonalHamiltonian::zero(1, CAP).unwrap(),
            x_fields: vec![(0, 1.0)],
        };
        psi.evolve_general(&h, 0.9, 1e-12).unwrap();
        assert!((psi.amplitudes()[0] - c(0.9f64.cos(), 0.0)).norm() < 1e-12);
        assert!((psi.amplitudes()[1] - c(0.0, -0.9f64.sin())).norm() < 1e-12);
    }

    #[test]
    fn measurement() {
        let mut psi = DenseState::plus_state(1, CAP).unwrap();
        assert_eq!(
            psi.measure_x(0, Postselect::Plus).unwrap(),
            (XOutcome::Plus, 1.0)
        );
        assert!(matches!(
            psi.measure_x(0, Postselect::Minus),
            Err(StateError::ZeroProbability(_))
        ));

        let mut psi = DenseState::zero_state(1, CAP).unwrap();
        let (o, p) = psi.measure_x(0, Postselect::Minus).unwrap();
        assert_eq!(o, XOutcome::Minus);
        assert!((p - 0.5).abs() < 1e-15);
        let a = psi.amplitudes();
        assert!((a[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((a[1] + c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sampling_is_seeded() {
        let psi = DenseState::zero_state(1, CAP).unwrap();
        let run = |seed| {
            psi.clone()
                .measure_x(0, Postselect::Sample(seed))
                .unwrap()
                .0
        };
        assert_eq!(run(7), run(7));
        let minus = (0..200).filter(|&s| run(s) == XOutcome::Minus).count();
        assert!((60..140).contains(&minus));
    }

    #[test]
    fn cluster_fidelity() {
        let mut psi = DenseState::plus_state(2, CAP).unwrap();
        psi.apply_gate(Gate::CZ(0, 1)).unwrap();
        let xz: PauliOperator = "XZ".parse().unwrap();
        let zx: PauliOperator = "ZX".parse().unwrap();
        assert!((psi.fidelity(&[xz.clone(), zx.clone()], &[0, 1]).unwrap() - 1.0).abs() < 1e-12);
        assert!(psi.fidelity(&[xz.negated(), zx], &[0, 1]).unwrap() < 1e-12);
        let zero = DenseState::zero_state(1, CAP).unwrap();
        let x: PauliOperator = "-Z".parse().unwrap();
        assert!(zero.fidelity(&[x], &[0]).unwrap() < 1e-15);
    }

    #[test]
    fn pauli_action() {
        // Y|0⟩ = i|1⟩
        let mut psi = DenseState::zero_state(1, CAP).unwrap();
        psi.apply_pauli(&"Y".parse().unwrap()).unwrap();
        assert!((psi.amplitudes()[1] - c(0.0, 1.0)).norm() < 1e-15);
        let plus = DenseState::plus_state(3, CAP).unwrap();
        assert!((plus.expectation(&"XXI".parse().unwrap()).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        assert!(plus.expectation(&"IZI".parse().unwrap()).unwrap().norm() < 1e-14);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            DenseState::plus_state(23, CAP),
            Err(StateError::OverCap { .. })
        ));
        assert!(DenseState::plus_state(3, 2).is_err());
    }

    #[test]
    fn dump_size() {
        let psi = DenseState::plus_state(2, CAP).unwrap();
        let mut buf = Vec::new();
        psi.write_le(&mut buf).unwrap();
        assert_eq!(buf.len(), 4 * 16);
    }
}
