//! Quantum-selected configuration interaction: molecular Hamiltonians,
//! state-vector simulation, sampling-based subspace selection and the
//! classical baselines used to judge it.

pub mod asci;
pub mod circuit;
pub mod determinant;
pub mod error;
pub mod hamiltonian_io;
pub mod harness;
pub mod linalg;
pub mod measurement;
pub mod sci;
pub mod qubit;
pub mod variational;

pub use determinant::{slater_condon, Determinant, Sector};
pub use error::{Error, Result};
pub use hamiltonian_io::{casci_dense, freeze_core, read_fcidump, MolecularIntegrals};
pub use qubit::{jordan_wigner, symmetry_operators, PauliString, QubitHamiltonian};
