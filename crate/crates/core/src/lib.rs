//! Symmetric boundary cluster-state pumps: lattice builders, exact Clifford
//! compilation, stabilizer verification, polynomial symmetry certificates and
//! a dense-state perturbation harness.

pub mod circuit;
pub mod compiler;
pub mod experiment;
pub mod f2poly;
pub mod lattice;
pub mod pauli;
pub mod statevector;
pub mod tableau;
pub mod verify;
