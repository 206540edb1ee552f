mod common;

use std::f64::consts::FRAC_PI_4;

use cluster_pump::circuit::{CliffordCircuit, Gate};
use cluster_pump::compiler::{compile_pump, compile_raw, compile_term, equivalence_check};
use cluster_pump::f2poly::{commutation_poly, F2LaurentPoly};
use cluster_pump::lattice::{build_square, build_union_jack, HamTerm};
use cluster_pump::pauli::PauliOperator;
use cluster_pump::statevector::{
    DenseState, DiagonalHamiltonian, Hamiltonian, Postselect, DEFAULT_QUBIT_CAP,
};
use cluster_pump::tableau::{random_clifford_circuit, StabilizerTableau};
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = DEFAULT_QUBIT_CAP;

fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (prop::collection::vec(0u8..4, n), 0u8..4).prop_map(|(ps, phase)| {
        let s: String = ps
            .iter()
            .map(|&p| ['I', 'X', 'Y', 'Z'][p as usize])
            .collect();
        let mut op: PauliOperator = s.parse().unwrap();
        op.set_phase(phase);
        op
    })
}

fn random_state(n: usize, seed: u64) -> DenseState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..1 << n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let mut s = DenseState::from_amplitudes(n, amps).unwrap();
    s.normalize();
    s
}

fn distance(a: &DenseState, b: &DenseState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &a, F2LaurentPoly::zero());
        prop_assert_eq!(&a * &F2LaurentPoly::one(), a.clone());
    }

    #[test]
    fn conj_is_an_involutive_homomorphism(a in poly(), b in poly()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(commutation_poly(&a, &b).conj(), commutation_poly(&b, &a));
    }

    #[test]
    fn commutation_poly_matches_symplectic_product(a in poly(), b in poly(), (i, j, k) in shift()) {
        let e = Embedding::new(6, 2);
        let shifted = b.shift(cluster_pump::f2poly::Monomial::new(i, j, k, 0));
        let anticommute = !e.x(&a).commutes(&e.z(&shifted)).unwrap();
        prop_assert_eq!(commutation_poly(&a, &b).coeff(i, j, k, 0), anticommute);
    }

    #[test]
    fn display_parse_round_trip(a in poly()) {
        let back: F2LaurentPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tableau_agrees_with_statevector(n in 1usize..=12, len in 0usize..60, seed in any::<u64>()) {
        let c = random_clifford_circuit(n, len, &mut ChaCha8Rng::seed_from_u64(seed));
        let mut t = StabilizerTableau::new_plus_state(n);
        t.apply_circuit(&c).unwrap();
        let mut psi = DenseState::plus_state(n, CAP).unwrap();
        psi.apply_circuit(&c).unwrap();
        for g in t.generators() {
            let v = psi.expectation(&g).unwrap();
            prop_assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-9, "{} -> {}", g, v);
        }
        prop_assert!((psi.fidelity(&t.generators(), &(0..n).collect::<Vec<_>>()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pauli_product_matches_dense(a in pauli(5), b in pauli(5), seed in any::<u64>()) {
        let psi = random_state(5, seed);
        let mut seq = psi.clone();
        seq.apply_pauli(&b).unwrap();
        seq.apply_pauli(&a).unwrap();
        let mut once = psi.clone();
        once.apply_pauli(&a.mul(&b).unwrap()).unwrap();
        prop_assert!(distance(&seq, &once) < 1e-12);
        prop_assert_eq!(a.commutes(&b).unwrap(), a.mul(&b).unwrap() == b.mul(&a).unwrap());
    }

    #[test]
    fn gate_conjugation_matches_dense(p in pauli(3), g in 0usize..6, q in 0usize..3, seed in any::<u64>()) {
        let gate = match g {
            0 => Gate::S(q),
            1 => Gate::Sdg(q),
            2 => Gate::Z(q),
            3 => Gate::X(q),
            4 => Gate::H(q),
            _ => Gate::CZ(q, (q + 1) % 3),
        };
        let mut conj = p.clone();
        gate.conjugate(&mut conj);
        let psi = random_state(3, seed);
        // g P ψ = (g P g†) g ψ
        let mut lhs = psi.clone();
        lhs.apply_pauli(&p).unwrap();
        lhs.apply_gate(gate).unwrap();
        let mut rhs = psi;
        rhs.apply_gate(gate).unwrap();
        rhs.apply_pauli(&conj).unwrap();
        prop_assert!(distance(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn compiled_terms_match_exponential(
        weight in 3usize..=4, sign in prop::bool::ANY, cz in prop::bool::ANY, b in 0usize..16,
    ) {
        let sign = if sign { 1 } else { -1 };
        let term = if cz {
            HamTerm::cz_product(vec![[0, 1], [1, 2], [2, 3], [3, 0]], sign)
        } else {
            HamTerm::z_product((0..weight).collect(), sign)
        };
        let (gates, phase) = compile_term(&term).unwrap();
        let mut c = CliffordCircuit::new(4);
        for g in gates {
            c.push(g).unwrap();
        }
        c.add_phase(phase);
        let expect = Complex64::from_polar(1.0, -term.angle() * term.eigenvalue(|q| b >> q & 1 == 1));
        prop_assert!((diagonal_phase(&c, b) - expect).norm() < 1e-12);
    }

    #[test]
    fn equivalence_check_sees_single_gate_changes(n in 2usize..8, len in 1usize..30, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_clifford_circuit(n, len, &mut rng);
        prop_assert!(equivalence_check(&a, &a.clone(), 4, seed));
        let mut b = a.clone();
        b.push(Gate::Z(rng.gen_range(0..n))).unwrap();
        prop_assert!(!equivalence_check(&a, &b, 4, seed));
    }
}

#[test]
fn reduction_preserves_the_unitary() {
    for spec in [build_square(3, 4).unwrap(), build_union_jack(2).unwrap()] {
        let pump = compile_pump(&spec).unwrap();
        assert!(equivalence_check(&pump.raw, &pump.reduced, 16, 5));
        assert_eq!(compile_raw(&spec).unwrap(), pump.raw);
        // the reduction is exact, global phase included
        for b in 0..1usize << spec.num_sites().min(12) {
            assert!(
                (diagonal_phase(&pump.raw, b) - diagonal_phase(&pump.reduced, b)).norm() < 1e-12
            );
        }
    }
}

fn random_diagonal(n: usize, rng: &mut ChaCha8Rng) -> DiagonalHamiltonian {
    let mut h = DiagonalHamiltonian::zero(n, CAP).unwrap();
    for _ in 0..rng.gen_range(1..6) {
        let support: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        h.add_z_product(&support, rng.gen_range(-2.0..2.0)).unwrap();
    }
    h
}

#[test]
fn commuting_general_evolution_matches_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let n = rng.gen_range(1..8);
        let h = random_diagonal(n, &mut rng);
        let t = rng.gen_range(0.0..3.0);
        let mut a = random_state(n, rng.gen());
        let mut b = a.clone();
        a.evolve_diagonal(&h, t).unwrap();
        b.evolve_general(
            &Hamiltonian {
                diag: h,
                x_fields: vec![],
            },
            t,
            1e-10,
        )
        .unwrap();
        assert!(distance(&a, &b) < 1e-10);
    }
}

#[test]
fn general_evolution_conserves_norm_and_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let n = rng.gen_range(1..7);
        let diag = random_diagonal(n, &mut rng);
        let x_fields = (0..n).map(|q| (q, rng.gen_range(-1.0..1.0))).collect();
        let h = Hamiltonian { diag, x_fields };
        let mut psi = random_state(n, rng.gen());
        let e0 = psi.energy(&h).unwrap();
        psi.evolve_general(&h, rng.gen_range(0.1..2.0), 1e-10)
            .unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-10);
        assert!((psi.energy(&h).unwrap() - e0).abs() < 1e-8);
    }
}

#[test]
fn x_measurement_probabilities_sum_to_one() {
    for seed in 0..20 {
        let psi = random_state(4, seed);
        for q in 0..4 {
            let (_, p_plus) = psi.clone().measure_x(q, Postselect::Plus).unwrap();
            let (_, p_minus) = psi.clone().measure_x(q, Postselect::Minus).unwrap();
            assert!((p_plus + p_minus - 1.0).abs() < 1e-12);
            let mut m = psi.clone();
            m.measure_x(q, Postselect::Sample(seed)).unwrap();
            assert!((m.norm() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn lattice_json_round_trips() {
    use cluster_pump::lattice::*;
    let specs: Vec<LatticeSpec> = vec![
        build_square(3, 3).unwrap(),
        build_union_jack(2).unwrap(),
        build_triangular(3, 4).unwrap(),
        build_fcc(2, 2, 2).unwrap(),
        build_honeycomb_stack(4, 3, 2).unwrap(),
    ];
    for s in specs {
        assert_eq!(LatticeSpec::from_json(&s.to_json()).unwrap(), s);
        assert_eq!(build(&s.family).unwrap(), s);
    }
}

#[test]
fn cz_diagonal_evolution_is_the_pump() {
    // exp(−i π/2 CZ-cycle) on a single plaquette, dense versus compiled
    let spec = build_square(2, 2).unwrap();
    let pump = compile_pump(&spec).unwrap();
    let mut h = DiagonalHamiltonian::zero(4, CAP).unwrap();
    for t in &spec.terms {
        h.add_term(t, 1.0).unwrap();
    }
    let mut a = DenseState::plus_state(4, CAP).unwrap();
    a.evolve_diagonal(&h, 2.0 * FRAC_PI_4).unwrap();
    let mut b = DenseState::plus_state(4, CAP).unwrap();
    b.apply_circuit(&pump.reduced).unwrap();
    assert!(distance(&a, &b) < 1e-12);
}
