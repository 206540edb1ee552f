//! Exact compilation of the pump evolution `exp(−i·t·H)` into Clifford gates.
//!
//! With `Z_i = 1 − 2 s_i`, a weight-3 or weight-4 Ising term at angle π/4
//! expands into single-site quarter turns, pairwise CZs and a global phase
//! (the cubic and quartic phases are multiples of 2π). A CZ-product term `T`
//! squares to one, so at angle π/2 it is `−i·T` up to its sign. All gates are
//! diagonal, hence the raw circuit can be reduced by counting: quarter turns
//! mod 4 and CZs mod 2.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{CircuitError, CliffordCircuit, Gate};
use crate::lattice::{HamTerm, LatticeSpec};
use crate::tableau::{random_stabilizer_state, StabilizerTableau};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompileError {
    #[error("Ising term of weight {0} is not supported (expected 3 or 4)")]
    UnsupportedWeight(usize),
    #[error("angle {0} is not supported for this term kind")]
    UnsupportedAngle(f64),
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("site {0} appears twice in one term")]
    RepeatedSite(usize),
    #[error("CZ pair ({0}, {1}) appears twice in one term")]
    RepeatedPair(usize, usize),
    #[error("reduced circuit leaves `{gate}` on bulk site {site}")]
    BulkResidue { site: usize, gate: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

const ANGLE_TOL: f64 = 1e-12;

fn check_sign(sign: i8) -> Result<(), CompileError> {
    if sign == 1 || sign == -1 {
        Ok(())
    } else {
        Err(CompileError::BadSign(sign))
    }
}

/// Gates and global phase (units of π/4) of `exp(−i·angle·sign·Π Z)`.
pub fn compile_z_term(
    support: &[usize],
    sign: i8,
    angle: f64,
) -> Result<(Vec<Gate>, u8), CompileError> {
    check_sign(sign)?;
    if !(support.len() == 3 || support.len() == 4) {
        return Err(CompileError::UnsupportedWeight(support.len()));
    }
    if (angle - FRAC_PI_4).abs() > ANGLE_TOL {
        return Err(CompileError::UnsupportedAngle(angle));
    }
    for (i, a) in support.iter().enumerate() {
        if support[i + 1..].contains(a) {
            return Err(CompileError::RepeatedSite(*a));
        }
    }
    let mut gates: Vec<Gate> = support
        .iter()
        .map(|&q| if sign == 1 { Gate::S(q) } else { Gate::Sdg(q) })
        .collect();
    for i in 0..support.len() {
        for j in i + 1..support.len() {
            gates.push(Gate::CZ(support[i], support[j]));
        }
    }
    Ok((gates, if sign == 1 { 7 } else { 1 }))
}

/// Gates and global phase of `exp(−i·angle·sign·Π CZ)` at angle π/2.
pub fn compile_cz_term(
    pairs: &[[usize; 2]],
    sign: i8,
    angle: f64,
) -> Result<(Vec<Gate>, u8), CompileError> {
    check_sign(sign)?;
    if (angle - FRAC_PI_2).abs() > ANGLE_TOL {
        return Err(CompileError::UnsupportedAngle(angle));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut gates = Vec::with_capacity(pairs.len());
    for &[a, b] in pairs {
        if a == b {
            return Err(CircuitError::DegenerateCz(a).into());
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(CompileError::RepeatedPair(a, b));
        }
        gates.push(Gate::CZ(a, b));
    }
    Ok((gates, if sign == 1 { 6 } else { 2 }))
}

pub fn compile_term(term: &HamTerm) -> Result<(Vec<Gate>, u8), CompileError> {
    match term {
        HamTerm::ZProduct {
            support,
            angle,
            sign,
        } => compile_z_term(support, *sign, *angle),
        HamTerm::CzProduct {
            pairs, angle, sign, ..
        } => compile_cz_term(pairs, *sign, *angle),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledPump {
    pub raw: CliffordCircuit,
    pub reduced: CliffordCircuit,
    /// Signed quarter turns per site before reduction (S = +1, Sdg = −1, Z = +2).
    pub s_counts: Vec<i64>,
    /// CZ multiplicity per unordered pair before reduction.
    pub cz_counts: BTreeMap<(usize, usize), u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub s: usize,
    pub sdg: usize,
    pub z: usize,
    pub x: usize,
    pub h: usize,
    pub cz: usize,
}

impl GateCounts {
    pub fn of(c: &CliffordCircuit) -> Self {
        let mut g = GateCounts {
            s: 0,
            sdg: 0,
            z: 0,
            x: 0,
            h: 0,
            cz: 0,
        };
        for gate in &c.gates {
            match gate {
                Gate::S(_) => g.s += 1,
                Gate::Sdg(_) => g.sdg += 1,
                Gate::Z(_) => g.z += 1,
                Gate::X(_) => g.x += 1,
                Gate::H(_) => g.h += 1,
                Gate::CZ(..) => g.cz += 1,
            }
        }
        g
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileSummary {
    pub lattice: String,
    pub num_qubits: usize,
    pub num_terms: usize,
    pub raw: GateCounts,
    pub reduced: GateCounts,
    /// Number of sites whose quarter-turn count is 0, 1, 2, 3 mod 4.
    pub s_count_mod4_histogram: [usize; 4],
    pub global_phase: u8,
}

impl CompiledPump {
    pub fn summary(&self, spec: &LatticeSpec) -> CompileSummary {
        let mut hist = [0usize; 4];
        for c in &self.s_counts {
            hist[c.rem_euclid(4) as usize] += 1;
        }
        CompileSummary {
            lattice: spec.family.name().to_string(),
            num_qubits: self.raw.n,
            num_terms: spec.terms.len(),
            raw: GateCounts::of(&self.raw),
            reduced: GateCounts::of(&self.reduced),
            s_count_mod4_histogram: hist,
            global_phase: self.reduced.global_phase,
        }
    }
}

/// Raw circuit of all terms, in term order.
pub fn compile_raw(spec: &LatticeSpec) -> Result<CliffordCircuit, CompileError> {
    let mut raw = CliffordCircuit::new(spec.num_sites());
    for term in &spec.terms {
        let (gates, phase) = compile_term(term)?;
        for g in gates {
            raw.push(g)?;
        }
        raw.add_phase(phase);
    }
    Ok(raw)
}

/// Cancel a diagonal circuit by multiplicities. Non-diagonal gates are kept
/// in place at the end, which is only valid when there are none; callers
/// pass compiled pumps, which are diagonal.
pub fn reduce_diagonal(
    raw: &CliffordCircuit,
) -> (CliffordCircuit, Vec<i64>, BTreeMap<(usize, usize), u32>) {
    let mut quarter = vec![0i64; raw.n];
    let mut cz: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for g in &raw.gates {
        match *g {
            Gate::S(q) => quarter[q] += 1,
            Gate::Sdg(q) => quarter[q] -= 1,
            Gate::Z(q) => quarter[q] += 2,
            Gate::CZ(a, b) => *cz.entry((a.min(b), a.max(b))).or_default() += 1,
            Gate::X(_) | Gate::H(_) => panic!("reduce_diagonal needs a diagonal circuit"),
        }
    }
    let mut reduced = CliffordCircuit::new(raw.n);
    reduced.global_phase = raw.global_phase;
    for (q, &c) in quarter.iter().enumerate() {
        let g = match c.rem_euclid(4) {
            1 => Some(Gate::S(q)),
            2 => Some(Gate::Z(q)),
            3 => Some(Gate::Sdg(q)),
            _ => None,
        };
        if let Some(g) = g {
            reduced.gates.push(g);
        }
    }
    for (&(a, b), &m) in &cz {
        if m % 2 == 1 {
            reduced.gates.push(Gate::CZ(a, b));
        }
    }
    (reduced, quarter, cz)
}

/// Compile every term and cancel. Fails if anything other than the expected
/// `Z` residues survives on a bulk site.
pub fn compile_pump(spec: &LatticeSpec) -> Result<CompiledPump, CompileError> {
    let raw = compile_raw(spec)?;
    let (reduced, s_counts, cz_counts) = reduce_diagonal(&raw);
    let boundary = spec.is_boundary();
    for g in &reduced.gates {
        let (a, b) = g.qubits();
        for q in std::iter::once(a).chain(b) {
            let allowed = boundary[q] || (spec.bulk_flips_to_minus && matches!(g, Gate::Z(_)));
            if !allowed {
                return Err(CompileError::BulkResidue {
                    site: q,
                    gate: g.to_string(),
                });
            }
        }
    }
    Ok(CompiledPump {
        raw,
        reduced,
        s_counts,
        cz_counts,
    })
}

/// Do two circuits act identically (up to global phase) on `|+⟩^⊗n` and on
/// `n_random` random stabilizer states drawn from `seed`?
pub fn equivalence_check(
    a: &CliffordCircuit,
    b: &CliffordCircuit,
    n_random: usize,
    seed: u64,
) -> bool {
    if a.n != b.n {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = vec![StabilizerTableau::new_plus_state(a.n)];
    for _ in 0..n_random {
        inputs.push(random_stabilizer_state(a.n, &mut rng));
    }
    inputs.into_iter().all(|t| {
        let (mut ta, mut tb) = (t.clone(), t);
        ta.apply_circuit(a).is_ok()
            && tb.apply_circuit(b).is_ok()
            && ta.canonical() == tb.canonical()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::*;

    #[test]
    fn z_term_gate_lists() {
        let (g, ph) = compile_z_term(&[0, 1, 2], 1, FRAC_PI_4).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(ph, 7);
        let (g, ph) = compile_z_term(&[0, 1, 2, 3], -1, FRAC_PI_4).unwrap();
        assert_eq!(g.iter().filter(|g| matches!(g, Gate::Sdg(_))).count(), 4);
        assert_eq!(g.iter().filter(|g| matches!(g, Gate::CZ(..))).count(), 6);
        assert_eq!(ph, 1);
        assert!(matches!(
            compile_z_term(&[0, 1], 1, FRAC_PI_4),
            Err(CompileError::UnsupportedWeight(2))
        ));
        assert!(matches!(
            compile_z_term(&[0, 1, 2], 1, 0.3),
            Err(CompileError::UnsupportedAngle(_))
        ));
        assert!(matches!(
            compile_z_term(&[0, 1, 1], 1, FRAC_PI_4),
            Err(CompileError::RepeatedSite(1))
        ));
    }

    #[test]
    fn cz_term_gate_lists() {
        let (g, ph) = compile_cz_term(&[[0, 1], [1, 2], [2, 3], [3, 0]], 1, FRAC_PI_2).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(ph, 6);
        let (g, ph) = compile_cz_term(&[], -1, FRAC_PI_2).unwrap();
        assert!(g.is_empty());
        assert_eq!(ph, 2);
        assert!(matches!(
            compile_cz_term(&[[0, 1], [1, 0]], 1, FRAC_PI_2),
            Err(CompileError::RepeatedPair(1, 0))
        ));
        assert!(compile_cz_term(&[[0, 1]], 1, FRAC_PI_4).is_err());
    }

    #[test]
    fn square_reduces_to_perimeter() {
        let spec = build_square(4, 4).unwrap();
        let pump = compile_pump(&spec).unwrap();
        let mut edges: Vec<[usize; 2]> = pump
            .reduced
            .gates
            .iter()
            .map(|g| match *g {
                Gate::CZ(a, b) => [a, b],
                other => panic!("unexpected {other}"),
            })
            .collect();
        edges.sort_unstable();
        assert_eq!(edges, spec.target_graph);
        assert!(equivalence_check(&pump.raw, &pump.reduced, 3, 1));
    }

    #[test]
    fn union_jack_has_no_quarter_turns() {
        let spec = build_union_jack_with(6, 3, UnionJackTermination::Cylinder).unwrap();
        let pump = compile_pump(&spec).unwrap();
        assert!(pump.s_counts.iter().all(|c| c % 4 == 0));
        assert_eq!(GateCounts::of(&pump.reduced).cz, spec.target_graph.len());
        assert_eq!(pump.reduced.len(), spec.target_graph.len());
    }

    #[test]
    fn triangular_leaves_z_residues() {
        let spec = build_triangular(4, 6).unwrap();
        let pump = compile_pump(&spec).unwrap();
        let zs: Vec<usize> = pump
            .reduced
            .gates
            .iter()
            .filter_map(|g| if let Gate::Z(q) = g { Some(*q) } else { None })
            .collect();
        for &q in &spec.bulk {
            assert!(zs.contains(&q));
        }
        assert_eq!(
            GateCounts::of(&pump.reduced).s + GateCounts::of(&pump.reduced).sdg,
            0
        );
    }

    #[test]
    fn mutation_is_detected() {
        let spec = build_square(3, 3).unwrap();
        let pump = compile_pump(&spec).unwrap();
        let mut broken = pump.reduced.clone();
        broken.gates.remove(0);
        assert!(!equivalence_check(&pump.reduced, &broken, 2, 7));
        assert!(equivalence_check(&pump.reduced, &pump.reduced, 2, 7));
    }

    #[test]
    fn bulk_residue_is_an_error() {
        let mut spec = build_square(3, 3).unwrap();
        // drop one plaquette so the center keeps CZs
        spec.terms.pop();
        assert!(matches!(
            compile_pump(&spec),
            Err(CompileError::BulkResidue { .. })
        ));
    }
}
