//! Lattice families, their driving Hamiltonians and symmetry generators.
//!
//! Every builder returns a [`LatticeSpec`]: sites with integer coordinates
//! and colors, the commuting Hamiltonian terms, the X-type symmetry
//! generators, the boundary/bulk partition and the graph of the cluster
//! state expected on the boundary. The JSON form of `LatticeSpec` is the
//! interchange format used by the CLI and the FFI layer.

mod fcc;
mod fractal;
mod square;
mod triangular;
mod union_jack;

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2poly::{F2LaurentPoly, PolyError};
use crate::pauli::PauliOperator;

pub use fcc::{build_fcc, build_fcc_with, FccTermination};
pub use fractal::{
    build_fractal_stack, build_fractal_stack_with, build_honeycomb_stack, ca_matrix_power,
    fractal_symmetry_polys, FractalOptions, GateOrigin, VGate,
};
pub use square::{build_square, build_square_with, SquareTermination};
pub use triangular::build_triangular;
pub use union_jack::{build_union_jack, build_union_jack_with, UnionJackTermination};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("invalid dimensions: {0}")]
    BadDimensions(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("monomial `{0}` does not map to a site of this lattice")]
    OutsideLattice(String),
    #[error("malformed lattice spec: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
    Green,
    Yellow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    pub id: usize,
    pub coord: Vec<i32>,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum HamTerm {
    /// `sign · Π_{i∈support} Z_i`
    #[serde(rename = "Z_PRODUCT")]
    ZProduct {
        support: Vec<usize>,
        angle: f64,
        sign: i8,
    },
    /// `sign · Π_{(a,b)∈pairs} CZ_ab`
    #[serde(rename = "CZ_PRODUCT")]
    CzProduct {
        pairs: Vec<[usize; 2]>,
        angle: f64,
        sign: i8,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        origin: Option<GateOrigin>,
    },
}

impl HamTerm {
    pub fn z_product(support: Vec<usize>, sign: i8) -> Self {
        HamTerm::ZProduct {
            support,
            angle: FRAC_PI_4,
            sign,
        }
    }

    pub fn cz_product(pairs: Vec<[usize; 2]>, sign: i8) -> Self {
        HamTerm::CzProduct {
            pairs,
            angle: FRAC_PI_2,
            sign,
            origin: None,
        }
    }

    pub fn angle(&self) -> f64 {
        match self {
            HamTerm::ZProduct { angle, .. } | HamTerm::CzProduct { angle, .. } => *angle,
        }
    }

    pub fn sign(&self) -> i8 {
        match self {
            HamTerm::ZProduct { sign, .. } | HamTerm::CzProduct { sign, .. } => *sign,
        }
    }

    /// Sites the term acts on, sorted and deduplicated.
    pub fn sites(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = match self {
            HamTerm::ZProduct { support, .. } => support.iter().copied().collect(),
            HamTerm::CzProduct { pairs, .. } => pairs.iter().flatten().copied().collect(),
        };
        set.into_iter().collect()
    }

    /// Diagonal value of the term on basis state `bits(site)`.
    pub fn eigenvalue<F: Fn(usize) -> bool>(&self, bits: F) -> f64 {
        let parity = match self {
            HamTerm::ZProduct { support, .. } => support.iter().filter(|&&q| bits(q)).count(),
            HamTerm::CzProduct { pairs, .. } => {
                pairs.iter().filter(|[a, b]| bits(*a) && bits(*b)).count()
            }
        };
        let v = if parity % 2 == 0 { 1.0 } else { -1.0 };
        v * self.sign() as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryGen {
    pub label: String,
    pub support: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "lattice", rename_all = "snake_case")]
pub enum Family {
    Square {
        nx: usize,
        ny: usize,
        termination: SquareTermination,
    },
    UnionJack {
        nx: usize,
        ny: usize,
        termination: UnionJackTermination,
    },
    Triangular {
        period: usize,
        rows: usize,
    },
    Fcc {
        nx: usize,
        ny: usize,
        nz: usize,
        termination: FccTermination,
    },
    Fractal {
        f: String,
        nx: usize,
        ny: usize,
        layers: usize,
        options: FractalOptions,
    },
}

impl Family {
    /// Periods of the coordinate axes used when mapping monomials to sites.
    pub fn coord_periods(&self) -> [Option<i32>; 3] {
        match self {
            Family::Square {
                nx,
                termination: SquareTermination::PeriodicX,
                ..
            } => [Some(*nx as i32), None, None],
            Family::Square { .. } => [None; 3],
            Family::UnionJack {
                nx,
                termination: UnionJackTermination::Cylinder,
                ..
            } => [Some(2 * *nx as i32), None, None],
            Family::UnionJack { .. } => [None; 3],
            Family::Triangular { period, .. } => [Some(*period as i32), None, None],
            Family::Fcc {
                ny,
                nz,
                termination: FccTermination::SlabX,
                ..
            } => [None, Some(2 * *ny as i32), Some(2 * *nz as i32)],
            Family::Fcc { .. } => [None; 3],
            Family::Fractal {
                nx, ny, options, ..
            } => [
                options.x_periodic.then_some(*nx as i32),
                options.y_periodic.then_some(*ny as i32),
                None,
            ],
        }
    }

    /// Evolution time of the pump: π/2 for CZ-product families, π/4 for
    /// Ising-product families.
    pub fn pump_time(&self) -> f64 {
        match self {
            Family::Square { .. } | Family::Fractal { .. } => FRAC_PI_2,
            _ => FRAC_PI_4,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Square { .. } => "square",
            Family::UnionJack { .. } => "union-jack",
            Family::Triangular { .. } => "triangular",
            Family::Fcc { .. } => "fcc",
            Family::Fractal { .. } => "fractal",
        }
    }

    /// The two leading size parameters, for tabulation.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Family::Square { nx, ny, .. }
            | Family::UnionJack { nx, ny, .. }
            | Family::Fcc { nx, ny, .. }
            | Family::Fractal { nx, ny, .. } => (*nx, *ny),
            Family::Triangular { period, rows } => (*period, *rows),
        }
    }
}

/// Build the lattice described by `family`.
pub fn build(family: &Family) -> Result<LatticeSpec, LatticeError> {
    match family {
        Family::Square {
            nx,
            ny,
            termination,
        } => build_square_with(*nx, *ny, *termination),
        Family::UnionJack {
            nx,
            ny,
            termination,
        } => build_union_jack_with(*nx, *ny, *termination),
        Family::Triangular { period, rows } => build_triangular(*period, *rows),
        Family::Fcc {
            nx,
            ny,
            nz,
            termination,
        } => build_fcc_with(*nx, *ny, *nz, *termination),
        Family::Fractal {
            f,
            nx,
            ny,
            layers,
            options,
        } => {
            let f: F2LaurentPoly = f.parse()?;
            build_fractal_stack_with(&f, *nx, *ny, *layers, *options)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub family: Family,
    pub sites: Vec<Site>,
    pub terms: Vec<HamTerm>,
    pub symmetries: Vec<SymmetryGen>,
    pub boundary: Vec<usize>,
    pub bulk: Vec<usize>,
    pub target_graph: Vec<[usize; 2]>,
    /// The pump leaves every bulk qubit in |−⟩ instead of |+⟩.
    #[serde(default)]
    pub bulk_flips_to_minus: bool,
}

impl LatticeSpec {
    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lattice spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let spec: LatticeSpec =
            serde_json::from_str(text).map_err(|e| LatticeError::Malformed(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Structural invariants: contiguous ids, unique coordinates, a disjoint
    /// boundary/bulk cover, in-range term and symmetry supports, target edges
    /// inside the boundary.
    pub fn validate(&self) -> Result<(), LatticeError> {
        let n = self.sites.len();
        let bad = |m: String| Err(LatticeError::Malformed(m));
        let mut coords = BTreeSet::new();
        for (i, s) in self.sites.iter().enumerate() {
            if s.id != i {
                return bad(format!("site at position {i} has id {}", s.id));
            }
            if !coords.insert(s.coord.clone()) {
                return bad(format!("duplicate coordinate {:?}", s.coord));
            }
        }
        let mut role = vec![0u8; n];
        for &q in &self.boundary {
            if q >= n {
                return bad(format!("boundary site {q} out of range"));
            }
            role[q] += 1;
        }
        for &q in &self.bulk {
            if q >= n {
                return bad(format!("bulk site {q} out of range"));
            }
            role[q] += 1;
        }
        if let Some(q) = role.iter().position(|r| *r != 1) {
            return bad(format!("site {q} is not in exactly one of boundary/bulk"));
        }
        let in_boundary: Vec<bool> = {
            let mut v = vec![false; n];
            for &q in &self.boundary {
                v[q] = true;
            }
            v
        };
        for [a, b] in &self.target_graph {
            if *a >= n || *b >= n || !in_boundary[*a] || !in_boundary[*b] || a == b {
                return bad(format!("target edge ({a},{b}) not inside boundary"));
            }
        }
        for (t, term) in self.terms.iter().enumerate() {
            if term.sites().iter().any(|&q| q >= n) {
                return bad(format!("term {t} touches a site out of range"));
            }
            if term.sign().abs() != 1 {
                return bad(format!("term {t} has sign {}", term.sign()));
            }
        }
        for s in &self.symmetries {
            if s.support.is_empty() || s.support.iter().any(|&q| q >= n) {
                return bad(format!("symmetry `{}` has an invalid support", s.label));
            }
        }
        Ok(())
    }

    pub fn is_boundary(&self) -> Vec<bool> {
        let mut v = vec![false; self.sites.len()];
        for &q in &self.boundary {
            v[q] = true;
        }
        v
    }

    /// Coordinate (plus color for the two-sublattice fractal family) to id.
    pub fn coord_index(&self) -> HashMap<Vec<i32>, usize> {
        self.sites.iter().map(|s| (s.coord.clone(), s.id)).collect()
    }

    /// Neighbours of each boundary site in the target graph.
    pub fn target_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.sites.len()];
        for [a, b] in &self.target_graph {
            adj[*a].push(*b);
            adj[*b].push(*a);
        }
        for v in &mut adj {
            v.sort_unstable();
        }
        adj
    }

    /// Site ids of a polynomial's monomials. Monomial `x^i y^j z^k s^m` maps
    /// to coordinate `(i, j)` for planar families, `(i, j, k)` for FCC and
    /// `(i, j, k, m)` for the fractal stack, after reducing periodic axes.
    pub fn sites_of_poly(&self, p: &F2LaurentPoly) -> Result<Vec<usize>, LatticeError> {
        let index = self.coord_index();
        let periods = self.family.coord_periods();
        let wrap = |v: i32, axis: usize| periods[axis].map_or(v, |p| v.rem_euclid(p));
        let mut out = Vec::with_capacity(p.len());
        for m in p.terms() {
            let key = match self.family {
                Family::Fractal { .. } => vec![wrap(m.i, 0), wrap(m.j, 1), m.k, m.m as i32],
                Family::Fcc { .. } if m.m == 0 => vec![m.i, wrap(m.j, 1), wrap(m.k, 2)],
                _ if m.m == 0 && m.k == 0 => vec![wrap(m.i, 0), m.j],
                _ => return Err(LatticeError::OutsideLattice(m.to_string())),
            };
            match index.get(&key) {
                Some(&q) => out.push(q),
                None => return Err(LatticeError::OutsideLattice(m.to_string())),
            }
        }
        Ok(out)
    }
}

/// Which single-qubit Pauli a polynomial is realized with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliKind {
    X,
    Z,
}

/// `X(p)` or `Z(p)` as a concrete operator on the lattice's qubits.
/// Monomials that coincide after periodic reduction cancel in pairs.
pub fn pauli_from_poly(
    spec: &LatticeSpec,
    kind: PauliKind,
    p: &F2LaurentPoly,
) -> Result<PauliOperator, LatticeError> {
    let sites = spec.sites_of_poly(p)?;
    let n = spec.num_sites();
    Ok(match kind {
        PauliKind::X => PauliOperator::x_on(n, sites),
        PauliKind::Z => PauliOperator::z_on(n, sites),
    })
}

/// Incremental construction helper shared by the builders.
pub(crate) struct SpecBuilder {
    sites: Vec<Site>,
    index: HashMap<Vec<i32>, usize>,
}

impl SpecBuilder {
    pub(crate) fn new() -> Self {
        SpecBuilder {
            sites: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub(crate) fn add(&mut self, coord: Vec<i32>, color: Color) -> usize {
        let id = self.sites.len();
        let prev = self.index.insert(coord.clone(), id);
        assert!(prev.is_none(), "duplicate site {coord:?}");
        self.sites.push(Site { id, coord, color });
        id
    }

    pub(crate) fn get(&self, coord: &[i32]) -> Option<usize> {
        self.index.get(coord).copied()
    }

    pub(crate) fn id(&self, coord: &[i32]) -> usize {
        self.get(coord)
            .unwrap_or_else(|| panic!("no site at {coord:?}"))
    }

    pub(crate) fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub(crate) fn finish(
        self,
        family: Family,
        terms: Vec<HamTerm>,
        symmetries: Vec<SymmetryGen>,
        is_boundary: impl Fn(&Site) -> bool,
        mut target_graph: Vec<[usize; 2]>,
        bulk_flips_to_minus: bool,
    ) -> LatticeSpec {
        let (boundary, bulk): (Vec<&Site>, Vec<&Site>) =
            self.sites.iter().partition(|s| is_boundary(s));
        for e in &mut target_graph {
            e.sort_unstable();
        }
        target_graph.sort_unstable();
        target_graph.dedup();
        let spec = LatticeSpec {
            family,
            boundary: boundary.iter().map(|s| s.id).collect(),
            bulk: bulk.iter().map(|s| s.id).collect(),
            sites: self.sites,
            terms,
            symmetries,
            target_graph,
            bulk_flips_to_minus,
        };
        debug_assert!(spec.validate().is_ok(), "{:?}", spec.validate());
        spec
    }
}

/// Symmetry generators flipping two of the three colors red/blue/green.
pub(crate) fn two_color_flips(sites: &[Site]) -> Vec<SymmetryGen> {
    let pairs = [
        (Color::Red, Color::Blue, "flip red+blue"),
        (Color::Red, Color::Green, "flip red+green"),
        (Color::Blue, Color::Green, "flip blue+green"),
    ];
    pairs
        .iter()
        .map(|(a, b, label)| SymmetryGen {
            label: label.to_string(),
            support: sites
                .iter()
                .filter(|s| s.color == *a || s.color == *b)
                .map(|s| s.id)
                .collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_all_families() {
        let specs = vec![
            build_square(3, 3).unwrap(),
            build_union_jack(2).unwrap(),
            build_triangular(3, 4).unwrap(),
            build_fcc(1, 2, 2).unwrap(),
            build_fractal_stack(&"1+x".parse().unwrap(), 3, 3, 1).unwrap(),
        ];
        for spec in specs {
            let text = spec.to_json();
            let back = LatticeSpec::from_json(&text).unwrap();
            assert_eq!(back, spec);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn validate_rejects_broken_partition() {
        let mut spec = build_square(3, 3).unwrap();
        spec.bulk.push(0);
        assert!(spec.validate().is_err());
        let mut spec = build_square(3, 3).unwrap();
        spec.target_graph.push([0, 4]);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn term_json_shape() {
        let t = HamTerm::cz_product(vec![[0, 1]], 1);
        let v: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(v["kind"], "CZ_PRODUCT");
        assert_eq!(v["pairs"][0][1], 1);
        let t = HamTerm::z_product(vec![0, 1, 2], -1);
        let v: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(v["kind"], "Z_PRODUCT");
        assert_eq!(v["sign"], -1);
    }

    #[test]
    fn pauli_from_poly_basics() {
        let spec = build_square(3, 3).unwrap();
        let id = pauli_from_poly(&spec, PauliKind::X, &F2LaurentPoly::zero()).unwrap();
        assert!(id.is_identity_up_to_phase());
        let o = pauli_from_poly(&spec, PauliKind::Z, &F2LaurentPoly::one()).unwrap();
        assert_eq!(o.support(), vec![0]);
        assert!(pauli_from_poly(&spec, PauliKind::Z, &"x^5".parse().unwrap()).is_err());
        assert!(pauli_from_poly(&spec, PauliKind::Z, &"s".parse().unwrap()).is_err());
    }
}
