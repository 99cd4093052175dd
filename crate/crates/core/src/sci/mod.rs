//! Configuration selection from samples or state vectors, subspace
//! Hamiltonians and the ground-state, single-diagonalization and sequential
//! (deflated) excited-state algorithms.

mod selection;
mod subspace;

pub use selection::{
    idealized_top_r, merge_subspaces, select_all, select_by_threshold, select_top_r, MergeStrategy,
    SelectionResult,
};
pub use subspace::{
    build_block_hamiltonian, build_subspace_hamiltonian, default_beta, deflated_subspace_matrix,
    diagonalize_lowest, expectation_on_output, qsci_from_selection, qsci_ground, qsci_sequential,
    qsci_single_diag, Betas, DeflatedMatrix, InputSource, Observable, PriorState, SubspaceMatrix,
    SubspaceSolution,
};
