//! Stabilizer-level verification of a compiled pump and commutation
//! certificates between Hamiltonian terms and symmetry generators.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{CliffordCircuit, Gate};
use crate::f2poly::{commutation_poly, F2LaurentPoly};
use crate::lattice::{fractal_symmetry_polys, Family, HamTerm, LatticeSpec, VGate};
use crate::pauli::{Pauli, PauliOperator};
use crate::tableau::{Membership, StabilizerTableau, TableauError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("circuit acts on {circuit} qubits but the lattice has {lattice} sites")]
    SizeMismatch { circuit: usize, lattice: usize },
    #[error(transparent)]
    Tableau(#[from] TableauError),
}

/// Sparse text form, e.g. `+X3 Z4 Z9`.
pub fn sparse_string(p: &PauliOperator) -> String {
    let prefix = ["+", "+i", "-", "-i"][p.phase() as usize];
    let body: Vec<String> = p
        .support()
        .into_iter()
        .map(|q| {
            let c = match p.get(q) {
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
                Pauli::I => 'I',
            };
            format!("{c}{q}")
        })
        .collect();
    format!("{prefix}{}", body.join(" "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub site: usize,
    pub stabilizer: String,
    /// `absent` or `opposite sign`.
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub bulk_invariant: bool,
    pub boundary_is_cluster: bool,
    pub factorized: bool,
    /// Every boundary stabilizer `X_i Π Z_j` holds with sign +1.
    pub boundary_signs_positive: bool,
    /// Boundary sites whose cluster stabilizer holds with sign −1.
    pub negative_sign_sites: Vec<usize>,
    pub expected_bulk_sign: i8,
    pub failures: Vec<Counterexample>,
}

/// `X_i Π_{j∼i} Z_j` over the target graph.
pub fn cluster_stabilizer(spec: &LatticeSpec, adj: &[Vec<usize>], i: usize) -> PauliOperator {
    let mut p = PauliOperator::x_on(spec.num_sites(), [i]);
    for &j in &adj[i] {
        p.toggle_z(j);
    }
    p
}

/// Run the circuit on `|+⟩^⊗n` and check bulk, boundary and factorization.
pub fn verify_pump(
    spec: &LatticeSpec,
    c: &CliffordCircuit,
) -> Result<VerificationReport, VerifyError> {
    let n = spec.num_sites();
    if c.n != n {
        return Err(VerifyError::SizeMismatch {
            circuit: c.n,
            lattice: n,
        });
    }
    let mut t = StabilizerTableau::new_plus_state(n);
    t.apply_circuit(c)?;
    Ok(verify_state(spec, &t))
}

pub fn verify_state(spec: &LatticeSpec, t: &StabilizerTableau) -> VerificationReport {
    let n = spec.num_sites();
    let group = t.group();
    let expected_bulk_sign: i8 = if spec.bulk_flips_to_minus { -1 } else { 1 };
    let mut failures = Vec::new();

    let mut bulk_invariant = true;
    for &q in &spec.bulk {
        let mut x = PauliOperator::x_on(n, [q]);
        if expected_bulk_sign < 0 {
            x = x.negated();
        }
        let m = group.contains(&x).expect("sizes agree");
        if m != Membership::Plus {
            bulk_invariant = false;
            failures.push(Counterexample {
                check: "bulk".into(),
                site: q,
                stabilizer: sparse_string(&x),
                found: if m == Membership::Minus {
                    "opposite sign"
                } else {
                    "absent"
                }
                .into(),
            });
        }
    }

    let adj = spec.target_neighbors();
    let mut boundary_is_cluster = true;
    let mut negative_sign_sites = Vec::new();
    for &q in &spec.boundary {
        let k = cluster_stabilizer(spec, &adj, q);
        match group.contains(&k).expect("sizes agree") {
            Membership::Plus => {}
            Membership::Minus => negative_sign_sites.push(q),
            Membership::Absent => {
                boundary_is_cluster = false;
                failures.push(Counterexample {
                    check: "boundary".into(),
                    site: q,
                    stabilizer: sparse_string(&k),
                    found: "absent".into(),
                });
            }
        }
    }

    let factorized = t.factorizes(&spec.boundary);
    if !factorized {
        failures.push(Counterexample {
            check: "factorized".into(),
            site: spec.boundary.first().copied().unwrap_or(0),
            stabilizer: String::new(),
            found: "boundary entangled with bulk".into(),
        });
    }
    VerificationReport {
        pass: bulk_invariant && boundary_is_cluster && factorized,
        bulk_invariant,
        boundary_is_cluster,
        factorized,
        boundary_signs_positive: boundary_is_cluster && negative_sign_sites.is_empty(),
        negative_sign_sites,
        expected_bulk_sign,
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFailure {
    pub term: usize,
    pub symmetry: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialCertificate {
    pub pairs_checked: usize,
    pub failures: Vec<PairFailure>,
    /// Pairs where the polynomial and concrete verdicts differ.
    pub disagreements: Vec<PairFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub pass: bool,
    pub pairs_checked: usize,
    pub concrete_failures: Vec<PairFailure>,
    /// Present for fractal lattices with periodic x.
    pub polynomial: Option<PolynomialCertificate>,
}

/// Does `term` commute with `X(support)`, checked on concrete operators?
pub fn term_commutes_with_flip(term: &HamTerm, flip: &PauliOperator) -> bool {
    match term {
        HamTerm::ZProduct { support, .. } => {
            PauliOperator::z_on(flip.num_qubits(), support.iter().copied()).commutes_unchecked(flip)
        }
        HamTerm::CzProduct { pairs, .. } => {
            let mut conj = flip.clone();
            for &[a, b] in pairs {
                Gate::CZ(a, b).conjugate(&mut conj);
            }
            conj == *flip
        }
    }
}

pub fn symmetry_check(spec: &LatticeSpec) -> CertificateReport {
    let n = spec.num_sites();
    let flips: Vec<PauliOperator> = spec
        .symmetries
        .iter()
        .map(|s| PauliOperator::x_on(n, s.support.iter().copied()))
        .collect();
    let mut concrete = vec![vec![true; flips.len()]; spec.terms.len()];
    let mut concrete_failures = Vec::new();
    for (t, term) in spec.terms.iter().enumerate() {
        for (s, flip) in flips.iter().enumerate() {
            if !term_commutes_with_flip(term, flip) {
                concrete[t][s] = false;
                concrete_failures.push(PairFailure {
                    term: t,
                    symmetry: spec.symmetries[s].label.clone(),
                });
            }
        }
    }
    let polynomial = polynomial_certificate(spec, &concrete);
    let poly_ok = polynomial
        .as_ref()
        .is_none_or(|p| p.failures.is_empty() && p.disagreements.is_empty());
    CertificateReport {
        pass: concrete_failures.is_empty() && poly_ok,
        pairs_checked: spec.terms.len() * flips.len(),
        concrete_failures,
        polynomial,
    }
}

/// For each `V`/`V′` term and each symmetry `X(α)`: the overlap parities of
/// `α` with the gate's blue factor `β` and red factor `γ s` are the
/// coefficients of `P(α, β)` and `P(α, γ s)` at the gate's anchor. Both must
/// vanish.
fn polynomial_certificate(
    spec: &LatticeSpec,
    concrete: &[Vec<bool>],
) -> Option<PolynomialCertificate> {
    let Family::Fractal {
        f, nx, ny, options, ..
    } = &spec.family
    else {
        return None;
    };
    let alphas = fractal_symmetry_polys(spec).ok()?;
    let f: F2LaurentPoly = f.parse().ok()?;
    let xp = Some(*nx as i32);
    let yp = options.y_periodic.then_some(*ny as i32);
    let reduce = |p: F2LaurentPoly| p.reduce_periodic(xp, yp).expect("positive periods");
    let mut certificate = PolynomialCertificate {
        pairs_checked: 0,
        failures: Vec::new(),
        disagreements: Vec::new(),
    };
    for (s, alpha) in alphas.iter().enumerate() {
        let mut polys = Vec::new();
        for gate in [VGate::V, VGate::VPrime] {
            let (beta, gamma_s) = gate.shapes(&f);
            polys.push((
                gate,
                reduce(commutation_poly(alpha, &beta)),
                reduce(commutation_poly(alpha, &gamma_s)),
            ));
        }
        for (t, term) in spec.terms.iter().enumerate() {
            let HamTerm::CzProduct {
                origin: Some(o), ..
            } = term
            else {
                continue;
            };
            let (_, pb, pg) = polys
                .iter()
                .find(|(g, _, _)| *g == o.gate)
                .expect("both gates");
            let (i, j) = (
                o.i.rem_euclid(*nx as i32),
                yp.map_or(o.j, |p| o.j.rem_euclid(p)),
            );
            let ok = !pb.coeff(i, j, o.k, 0) && !pg.coeff(i, j, o.k, 0);
            certificate.pairs_checked += 1;
            let failure = PairFailure {
                term: t,
                symmetry: spec.symmetries[s].label.clone(),
            };
            if ok != concrete[t][s] {
                certificate.disagreements.push(failure.clone());
            }
            if !ok {
                certificate.failures.push(failure);
            }
        }
    }
    Some(certificate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile_pump;
    use crate::lattice::*;

    #[test]
    fn square_passes() {
        let spec = build_square(4, 4).unwrap();
        let pump = compile_pump(&spec).unwrap();
        let r = verify_pump(&spec, &pump.reduced).unwrap();
        assert!(r.pass && r.boundary_signs_positive, "{r:?}");
    }

    #[test]
    fn deleting_a_cz_names_the_broken_stabilizer() {
        let spec = build_square(4, 4).unwrap();
        let mut c = compile_pump(&spec).unwrap().reduced;
        c.gates.remove(0);
        let r = verify_pump(&spec, &c).unwrap();
        assert!(!r.pass && !r.boundary_is_cluster);
        assert!(r.failures.iter().any(|f| f.check == "boundary"));
    }

    #[test]
    fn triangular_bulk_is_minus() {
        let spec = build_triangular(4, 6).unwrap();
        let pump = compile_pump(&spec).unwrap();
        let r = verify_pump(&spec, &pump.reduced).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.expected_bulk_sign, -1);
        // layers 0 and R carry a residual Z
        assert_eq!(r.negative_sign_sites.len(), 8);
    }

    #[test]
    fn open_union_jack_records_corner_signs() {
        let spec = build_union_jack(3).unwrap();
        let pump = compile_pump(&spec).unwrap();
        let r = verify_pump(&spec, &pump.reduced).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.negative_sign_sites.len(), 4);
    }

    #[test]
    fn size_mismatch() {
        let spec = build_square(2, 2).unwrap();
        assert!(verify_pump(&spec, &CliffordCircuit::new(3)).is_err());
    }

    #[test]
    fn symmetry_check_union_jack_and_fcc() {
        assert!(symmetry_check(&build_union_jack(3).unwrap()).pass);
        let fcc = symmetry_check(&build_fcc(2, 2, 2).unwrap());
        assert!(fcc.pass && fcc.polynomial.is_none());
    }

    #[test]
    fn symmetry_check_catches_a_broken_generator() {
        let mut spec = build_square(3, 3).unwrap();
        spec.symmetries[0].support.pop();
        let r = symmetry_check(&spec);
        assert!(!r.pass && !r.concrete_failures.is_empty());
    }

    #[test]
    fn fractal_certificates_agree() {
        let spec = build_honeycomb_stack(6, 6, 2).unwrap();
        let r = symmetry_check(&spec);
        let poly = r.polynomial.as_ref().unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(poly.pairs_checked, r.pairs_checked);
        assert!(poly.disagreements.is_empty());
    }

    #[test]
    fn fractal_certificate_detects_a_bad_seed() {
        // relabel a blue symmetry with a seed that does not close: both
        // routes must flag the same pairs
        let mut spec = build_fractal_stack(&"1+x".parse().unwrap(), 8, 3, 1).unwrap();
        let idx = spec
            .symmetries
            .iter()
            .position(|s| s.label.ends_with("blue"))
            .unwrap();
        spec.symmetries[idx].label = "fractal q=1 blue".into();
        let alpha = &fractal_symmetry_polys(&spec).unwrap()[idx];
        spec.symmetries[idx].support =
            crate::lattice::pauli_from_poly(&spec, crate::lattice::PauliKind::X, alpha)
                .unwrap()
                .support();
        let r = symmetry_check(&spec);
        let poly = r.polynomial.unwrap();
        assert!(!r.concrete_failures.is_empty());
        assert!(poly.disagreements.is_empty());
        assert_eq!(poly.failures, r.concrete_failures);
    }
}
